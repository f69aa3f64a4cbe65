//! The bounded metric induced by a compact exhaustion once a base point is
//! chosen: escaping sequences and sequences approaching the base point become
//! indistinguishable, which compactifies the space.

use crate::exhaustion::Exhaustion;
use crate::net::epsilon_net_by;
use crate::point::Point;
use crate::space::SpaceDescriptor;
use crate::{Error, Result};

/// A space together with a validated exhaustion and a distinguished base
/// point sitting in the first region.
#[derive(Debug, Clone)]
pub struct CompactifiedSpace {
    base: SpaceDescriptor,
    x0: Point,
    exhaustion: Exhaustion,
}

impl CompactifiedSpace {
    pub fn new(base: SpaceDescriptor, x0: Point, exhaustion: Exhaustion) -> Result<Self> {
        if !base.contains(&x0) {
            return Err(Error::NonMember {
                space: base.name().into(),
                point: x0.to_string(),
            });
        }
        if exhaustion.region(1).dist(&base, &x0) > 0.0 {
            return Err(Error::Descriptor(
                "base point must lie in the first region".into(),
            ));
        }
        Ok(Self {
            base,
            x0,
            exhaustion,
        })
    }

    pub fn base(&self) -> &SpaceDescriptor {
        &self.base
    }

    pub fn x0(&self) -> &Point {
        &self.x0
    }

    pub fn exhaustion(&self) -> &Exhaustion {
        &self.exhaustion
    }

    fn check_member(&self, p: &Point) -> Result<()> {
        if self.base.contains(p) {
            Ok(())
        } else {
            Err(Error::NonMember {
                space: self.base.name().into(),
                point: p.to_string(),
            })
        }
    }

    /// Clearance of `x`: the best value of `r_n - d(x, K_n)` over the whole
    /// family. Strictly positive everywhere, and equal to `r_1` at points of
    /// the first region.
    ///
    /// Evaluation stops at the first depth whose radius no longer exceeds the
    /// running maximum; all later terms are bounded by that radius, so the
    /// truncation is exact. If the guard never fires within the listed depth
    /// the result is undecidable from finite data and an error brackets it.
    pub fn clearance(&self, x: &Point) -> Result<f64> {
        self.check_member(x)?;
        let mut best = f64::NEG_INFINITY;
        for n in 1..=self.exhaustion.depth() {
            let r = self.exhaustion.radius(n);
            let term = r - self.exhaustion.region(n).dist(&self.base, x);
            if term > best {
                best = term;
            }
            if r <= best {
                return Ok(best);
            }
        }
        Err(Error::DepthExhausted {
            lower: best,
            upper: self.exhaustion.radius(self.exhaustion.depth()),
        })
    }

    /// Height of `x` above the base point: the smaller of the base distance
    /// to `x0` and the clearance. Vanishes exactly at `x0`, is bounded by
    /// `r_1`, and is 1-Lipschitz with respect to the base distance.
    pub fn height(&self, x: &Point) -> Result<f64> {
        let g = self.clearance(x)?;
        Ok(self.base.distance(x, &self.x0).min(g))
    }

    /// The compactified metric: base distance, shortcut through the glue of
    /// the base point with the escape end, whichever is smaller.
    pub fn dist(&self, x: &Point, y: &Point) -> Result<f64> {
        let hx = self.height(x)?;
        let hy = self.height(y)?;
        Ok(self.base.distance(x, y).min(hx + hy))
    }
}

/// Precomputed heights over a fixed sample, exposing the compactified metric
/// as a cheap closure for axiom sweeps. Lookups key on exact coordinate bits;
/// points outside the sample fall back to direct evaluation.
pub struct CachedDelta<'a> {
    cspace: &'a CompactifiedSpace,
    points: Vec<(Vec<u64>, f64)>,
}

impl<'a> CachedDelta<'a> {
    pub fn new(cspace: &'a CompactifiedSpace, samples: &[Point]) -> Result<Self> {
        let mut points = Vec::with_capacity(samples.len());
        for p in samples {
            points.push((Self::key(p), cspace.height(p)?));
        }
        points.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        points.dedup_by(|a, b| a.0 == b.0);
        Ok(Self { cspace, points })
    }

    fn key(p: &Point) -> Vec<u64> {
        p.coords().iter().map(|c| c.to_bits()).collect()
    }

    fn height(&self, p: &Point) -> f64 {
        let key = Self::key(p);
        match self.points.binary_search_by(|e| e.0.cmp(&key)) {
            Ok(i) => self.points[i].1,
            Err(_) => self
                .cspace
                .height(p)
                .expect("cached delta evaluated off the base space"),
        }
    }

    pub fn dist(&self, x: &Point, y: &Point) -> f64 {
        let d = self.cspace.base().distance(x, y);
        d.min(self.height(x) + self.height(y))
    }
}

/// Finite set covering the whole space within `epsilon` in the compactified
/// metric: a grid net of the first region whose radius drops below `epsilon`,
/// plus the base point, which covers everything escaping past that region.
pub fn total_boundedness_net(
    cspace: &CompactifiedSpace,
    epsilon: f64,
    probe_samples: &[Point],
) -> Result<Vec<Point>> {
    if !(epsilon > 0.0) {
        return Err(Error::Parameter("epsilon must be positive".into()));
    }
    for p in probe_samples {
        cspace.check_member(p)?;
    }
    let exh = cspace.exhaustion();
    let n_eps =
        (1..=exh.depth())
            .find(|&n| exh.radius(n) < epsilon)
            .ok_or(Error::DepthExhausted {
                lower: exh.radius(exh.depth()),
                upper: f64::INFINITY,
            })?;

    let intervals = exh
        .region(n_eps)
        .intervals()
        .ok_or_else(|| Error::Descriptor("net construction needs interval regions".into()))?
        .to_vec();

    // Grid the region at spacing epsilon/2, then thin greedily at radius
    // epsilon/2. Every region point is within epsilon/4 of the grid and every
    // grid point within epsilon/2 of the net, so coverage is strict.
    let space = cspace.base();
    let mut grid = Vec::new();
    for (branch, &(lo, hi)) in intervals.iter().enumerate() {
        let steps = ((hi - lo) / (epsilon / 2.0)).ceil() as usize;
        for s in 0..=steps {
            let t = lo + (hi - lo) * s as f64 / steps.max(1) as f64;
            grid.push(space.embed(branch, t));
        }
    }
    let mut net = epsilon_net_by(|a, b| space.distance(a, b), &grid, epsilon / 2.0)?;
    net.push(cspace.x0().clone());
    Ok(net)
}

/// Trace of height and base-point distance along a sequence.
#[derive(Debug, Clone)]
pub struct EscapeReport {
    pub h_values: Vec<f64>,
    pub delta_to_x0: Vec<f64>,
    pub converges_to_x0: bool,
}

/// Evaluates the height and the compactified distance to the base point
/// along `sequence`. The sequence is judged convergent to the base point
/// when the latter half of `delta_to_x0` is non-increasing (within `tol`
/// slack) and finishes below `tol`.
pub fn escape_convergence_check(
    cspace: &CompactifiedSpace,
    sequence: &[Point],
    tol: f64,
) -> Result<EscapeReport> {
    if sequence.is_empty() {
        return Err(Error::Parameter("empty sequence".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Parameter("tolerance must be positive".into()));
    }
    let mut h_values = Vec::with_capacity(sequence.len());
    let mut delta_to_x0 = Vec::with_capacity(sequence.len());
    for p in sequence {
        let h = cspace.height(p)?;
        h_values.push(h);
        // delta(x, x0) collapses to the height
        delta_to_x0.push(cspace.base().distance(p, cspace.x0()).min(h));
    }
    let tail = &delta_to_x0[delta_to_x0.len() / 2..];
    let monotone = tail.windows(2).all(|w| w[1] <= w[0] + tol);
    let ends_low = *tail.last().expect("tail nonempty") < tol;
    Ok(EscapeReport {
        h_values,
        delta_to_x0,
        converges_to_x0: monotone && ends_low,
    })
}
