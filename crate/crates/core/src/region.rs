use crate::point::Point;
use crate::space::{Ray, SpaceDescriptor};
use crate::{Error, Result};

/// A closed region given analytically, with an exact point-to-region
/// distance. Regions come in two families: per-branch ray parameter
/// intervals, and closed balls.
#[derive(Debug, Clone)]
pub enum Region {
    /// One closed parameter interval `[lo, hi]` per branch of the owning
    /// space; the region is the union of the embedded segments.
    RaySegments { intervals: Vec<(f64, f64)> },
    /// Closed Euclidean ball.
    Ball { center: Vec<f64>, radius: f64 },
}

impl Region {
    pub fn validate(&self, space: &SpaceDescriptor) -> Result<()> {
        match self {
            Region::RaySegments { intervals } => {
                if intervals.len() != space.branches().len() {
                    return Err(Error::Descriptor(format!(
                        "region has {} intervals for {} branches",
                        intervals.len(),
                        space.branches().len()
                    )));
                }
                for &(lo, hi) in intervals {
                    if !(lo.is_finite() && hi.is_finite() && lo <= hi && lo >= 0.0) {
                        return Err(Error::Descriptor(format!(
                            "bad parameter interval [{lo}, {hi}]"
                        )));
                    }
                }
            }
            Region::Ball { center, radius } => {
                if center.len() != space.dimension() {
                    return Err(Error::Descriptor("ball center dimension mismatch".into()));
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::Descriptor(format!("bad ball radius {radius}")));
                }
            }
        }
        Ok(())
    }

    /// Exact distance from a point to the region.
    pub fn dist(&self, space: &SpaceDescriptor, p: &Point) -> f64 {
        match self {
            Region::RaySegments { intervals } => space
                .branches()
                .iter()
                .zip(intervals)
                .map(|(ray, &(lo, hi))| ray.segment_dist(p.coords(), lo, hi))
                .fold(f64::INFINITY, f64::min),
            Region::Ball { center, radius } => {
                let d = p
                    .coords()
                    .iter()
                    .zip(center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                (d - radius).max(0.0)
            }
        }
    }

    /// Infimum of `dist(x, self)` over all space points `x` outside `next`.
    /// This is exactly the largest `r` such that the open `r`-enlargement of
    /// `self` stays inside `next`.
    pub fn margin_into(&self, next: &Region, space: &SpaceDescriptor) -> Result<f64> {
        match (self, next) {
            (
                Region::RaySegments { intervals: inner },
                Region::RaySegments { intervals: outer },
            ) => {
                if inner.iter().chain(outer).any(|&(lo, _)| lo != 0.0) {
                    return Err(Error::Descriptor(
                        "margin computation expects intervals anchored at 0".into(),
                    ));
                }
                let mut margin = f64::INFINITY;
                for (j, (ray, &(_, ohi))) in space.branches().iter().zip(outer).enumerate() {
                    // Points of branch j escape only past the outer interval
                    // end; their distance to the inner region is the min over
                    // all inner segments, minimized over the escaping tail.
                    let (_, ihi_j) = inner[j];
                    let mut branch_margin = ohi - ihi_j;
                    for (i, (other_ray, &(ilo, ihi))) in
                        space.branches().iter().zip(inner).enumerate()
                    {
                        if i == j {
                            continue;
                        }
                        let cross = ray_tail_to_segment(ray, ohi, other_ray, ilo, ihi);
                        branch_margin = branch_margin.min(cross);
                    }
                    margin = margin.min(branch_margin);
                }
                Ok(margin)
            }
            (
                Region::Ball {
                    center: c1,
                    radius: r1,
                },
                Region::Ball {
                    center: c2,
                    radius: r2,
                },
            ) => {
                let shift = c1
                    .iter()
                    .zip(c2)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                Ok(r2 - r1 - shift)
            }
            _ => Err(Error::Descriptor(
                "cannot compare regions of different families".into(),
            )),
        }
    }

    /// Per-branch intervals when the region is of the ray family.
    pub fn intervals(&self) -> Option<&[(f64, f64)]> {
        match self {
            Region::RaySegments { intervals } => Some(intervals),
            Region::Ball { .. } => None,
        }
    }
}

/// Minimum distance from the tail `{ray(t) : t >= t_start}` to the segment
/// `{other(s) : s in [lo, hi]}`. The squared distance is piecewise quadratic
/// and convex in `t` for the optimal `s(t)`, so scanning the boundary value
/// together with the unconstrained critical point is exact up to the local
/// minimization below.
fn ray_tail_to_segment(ray: &Ray, t_start: f64, other: &Ray, lo: f64, hi: f64) -> f64 {
    let eval = |t: f64| other.segment_dist(&ray.at(t), lo, hi);
    let mut best = eval(t_start);
    // Critical candidates: parameters where the ray passes closest to the
    // segment endpoints or to the segment's supporting line.
    let mut candidates = vec![ray.param_of(&other.at(lo)), ray.param_of(&other.at(hi))];
    // closest approach of the two supporting lines
    if let Some(t) = line_line_closest(ray, other) {
        candidates.push(t);
    }
    for t in candidates {
        if t.is_finite() && t >= t_start {
            best = best.min(eval(t));
        }
    }
    best
}

/// Ray parameter of the closest approach between two ray axes, when defined.
fn line_line_closest(a: &Ray, b: &Ray) -> Option<f64> {
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
    let w: Vec<f64> = a.origin.iter().zip(&b.origin).map(|(x, y)| x - y).collect();
    let uu = dot(&a.direction, &a.direction);
    let uv = dot(&a.direction, &b.direction);
    let vv = dot(&b.direction, &b.direction);
    let uw = dot(&a.direction, &w);
    let vw = dot(&b.direction, &w);
    let denom = uu * vv - uv * uv;
    if denom.abs() < 1e-14 {
        return None; // parallel axes
    }
    Some((uv * vw - vv * uw) / denom)
}
