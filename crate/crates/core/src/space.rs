use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::point::Point;
use crate::{Error, Result};

/// Residual tolerance for deciding that a point sits on one of the rays.
const MEMBERSHIP_TOL: f64 = 1e-9;

/// A unit-speed affine ray `origin + t * direction`, `t >= 0`.
#[derive(Debug, Clone)]
pub struct Ray {
    pub origin: Vec<f64>,
    pub direction: Vec<f64>,
}

impl Ray {
    pub fn new(origin: Vec<f64>, direction: Vec<f64>) -> Result<Self> {
        if origin.len() != direction.len() {
            return Err(Error::Descriptor(
                "ray origin/direction dimension mismatch".into(),
            ));
        }
        let norm = direction.iter().map(|d| d * d).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Descriptor("ray direction must be nonzero".into()));
        }
        let direction = direction.iter().map(|d| d / norm).collect();
        Ok(Self { origin, direction })
    }

    /// Point at ray parameter `t`.
    pub fn at(&self, t: f64) -> Vec<f64> {
        self.origin
            .iter()
            .zip(&self.direction)
            .map(|(o, d)| o + t * d)
            .collect()
    }

    /// Signed parameter of the orthogonal projection of `coords` onto the ray axis.
    pub fn param_of(&self, coords: &[f64]) -> f64 {
        coords
            .iter()
            .zip(&self.origin)
            .zip(&self.direction)
            .map(|((c, o), d)| (c - o) * d)
            .sum()
    }

    /// Euclidean distance from `coords` to the ray segment with parameters in `[lo, hi]`.
    pub fn segment_dist(&self, coords: &[f64], lo: f64, hi: f64) -> f64 {
        let t = self.param_of(coords).clamp(lo, hi);
        let foot = self.at(t);
        coords
            .iter()
            .zip(&foot)
            .map(|(c, f)| (c - f) * (c - f))
            .sum::<f64>()
            .sqrt()
    }

    /// Residual distance from `coords` to the full ray (parameters `>= 0`).
    fn residual(&self, coords: &[f64]) -> f64 {
        self.segment_dist(coords, 0.0, f64::INFINITY)
    }
}

/// How the ambient distance oracle is evaluated.
///
/// `SquaredEuclid` deliberately breaks the triangle inequality; it exists as
/// the counterexample fixture for the verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceKind {
    Euclid,
    SquaredEuclid,
}

/// A concrete space: a finite union of unit-speed rays embedded in R^dim,
/// carrying a distance oracle and a seeded sampler.
#[derive(Debug, Clone)]
pub struct SpaceDescriptor {
    name: String,
    dimension: usize,
    branches: Vec<Ray>,
    distance: DistanceKind,
    sample_cap: f64,
}

impl SpaceDescriptor {
    pub fn new(name: impl Into<String>, dimension: usize, branches: Vec<Ray>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Descriptor("dimension must be positive".into()));
        }
        if branches.is_empty() {
            return Err(Error::Descriptor("space needs at least one branch".into()));
        }
        for ray in &branches {
            if ray.origin.len() != dimension {
                return Err(Error::Descriptor("branch dimension mismatch".into()));
            }
        }
        Ok(Self {
            name: name.into(),
            dimension,
            branches,
            distance: DistanceKind::Euclid,
            sample_cap: 1000.0,
        })
    }

    /// Swaps the distance oracle; used for counterexample fixtures.
    pub fn with_distance(mut self, kind: DistanceKind) -> Self {
        self.distance = kind;
        self
    }

    /// Caps the ray parameter emitted by the seeded sampler.
    pub fn with_sample_cap(mut self, cap: f64) -> Self {
        self.sample_cap = cap;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn branches(&self) -> &[Ray] {
        &self.branches
    }

    pub fn sample_cap(&self) -> f64 {
        self.sample_cap
    }

    /// Point on branch `branch` at ray parameter `t`.
    pub fn embed(&self, branch: usize, t: f64) -> Point {
        debug_assert!(branch < self.branches.len());
        Point::new(self.branches[branch].at(t))
            .expect("ray embedding of a finite parameter is finite")
            .with_branch(branch)
    }

    /// Membership test: finite coordinates on one of the declared rays.
    pub fn contains(&self, p: &Point) -> bool {
        if p.dim() != self.dimension {
            return false;
        }
        if let Some(b) = p.branch() {
            if b >= self.branches.len() {
                return false;
            }
            let ray = &self.branches[b];
            return ray.residual(p.coords()) <= MEMBERSHIP_TOL
                && ray.param_of(p.coords()) >= -MEMBERSHIP_TOL;
        }
        self.branches
            .iter()
            .any(|r| r.residual(p.coords()) <= MEMBERSHIP_TOL)
    }

    /// Resolves a member point to `(branch, ray parameter)`. Prefers the
    /// declared branch tag; otherwise picks the branch of least residual.
    pub fn locate(&self, p: &Point) -> Result<(usize, f64)> {
        if let Some(b) = p.branch() {
            if b >= self.branches.len() {
                return Err(self.non_member(p));
            }
            let ray = &self.branches[b];
            if ray.residual(p.coords()) > MEMBERSHIP_TOL {
                return Err(self.non_member(p));
            }
            return Ok((b, ray.param_of(p.coords()).max(0.0)));
        }
        let mut best: Option<(usize, f64, f64)> = None;
        for (i, ray) in self.branches.iter().enumerate() {
            let res = ray.residual(p.coords());
            if best.is_none_or(|(_, _, r)| res < r) {
                best = Some((i, ray.param_of(p.coords()).max(0.0), res));
            }
        }
        match best {
            Some((b, t, res)) if res <= MEMBERSHIP_TOL => Ok((b, t)),
            _ => Err(self.non_member(p)),
        }
    }

    /// Raw distance oracle; does not check membership.
    pub fn distance(&self, x: &Point, y: &Point) -> f64 {
        match self.distance {
            DistanceKind::Euclid => x.euclid(y),
            DistanceKind::SquaredEuclid => {
                let d = x.euclid(y);
                d * d
            }
        }
    }

    /// Seeded sampler. Parameters follow `u / (1 - u)` for uniform `u`,
    /// redrawn when they exceed the sample cap, so the distribution is heavy
    /// tailed but stays inside the range where exhaustion evaluation is exact.
    pub fn sample(&self, seed: u64, count: usize) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let branch = rng.gen_range(0..self.branches.len());
            let u: f64 = rng.gen();
            let t = u / (1.0 - u);
            if t > self.sample_cap {
                continue;
            }
            out.push(self.embed(branch, t));
        }
        out
    }

    fn non_member(&self, p: &Point) -> Error {
        Error::NonMember {
            space: self.name.clone(),
            point: p.to_string(),
        }
    }
}

/// Distance oracle evaluation with the membership precondition enforced.
pub fn dist(space: &SpaceDescriptor, x: &Point, y: &Point) -> Result<f64> {
    if !space.contains(x) {
        return Err(Error::NonMember {
            space: space.name().into(),
            point: x.to_string(),
        });
    }
    if !space.contains(y) {
        return Err(Error::NonMember {
            space: space.name().into(),
            point: y.to_string(),
        });
    }
    Ok(space.distance(x, y))
}
