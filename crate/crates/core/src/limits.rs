//! Escape-limit estimation: where do images of points wandering off to
//! infinity accumulate in the codomain?

use crate::maps::MapInstance;
use crate::point::Point;
use crate::{Error, Result};

/// Escape routes along declared branches: an increasing parameter schedule
/// that eventually leaves every compact region, restricted per branch by a
/// point budget.
#[derive(Debug, Clone)]
pub struct EscapeSampler {
    pub branch_ids: Vec<usize>,
    pub parameter_schedule: Vec<f64>,
    pub per_branch_counts: Vec<usize>,
}

impl EscapeSampler {
    /// Log-spaced schedule from `t0` to `t_max` with `count` points, used in
    /// full on every listed branch.
    pub fn geometric(branch_ids: Vec<usize>, t0: f64, t_max: f64, count: usize) -> Result<Self> {
        if !(t0 > 0.0 && t_max > t0) || count < 2 {
            return Err(Error::Parameter("bad escape schedule".into()));
        }
        let ratio = (t_max / t0).powf(1.0 / (count - 1) as f64);
        let mut schedule = Vec::with_capacity(count);
        let mut t = t0;
        for _ in 0..count {
            schedule.push(t);
            t *= ratio;
        }
        let counts = vec![count; branch_ids.len()];
        Ok(Self {
            branch_ids,
            parameter_schedule: schedule,
            per_branch_counts: counts,
        })
    }

    pub fn default_for(map: &MapInstance) -> Self {
        let branches: Vec<usize> = (0..map.domain().branches().len()).collect();
        Self::geometric(branches, 1.0, 1e9, 12_000).expect("static schedule parameters")
    }

    fn branch_schedule(&self, idx: usize) -> &[f64] {
        let count = self.per_branch_counts[idx].min(self.parameter_schedule.len());
        &self.parameter_schedule[..count]
    }
}

/// Tail behaviour of one escape branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EscapeKind {
    /// Images leave every bounded region; the branch contributes no limits.
    Unbounded,
    /// Tail images settle on a single point.
    Convergent,
    /// Tail images stay bounded without settling; the whole tail cloud
    /// samples the accumulation set.
    Wandering,
}

#[derive(Debug, Clone)]
pub struct BranchEscape {
    pub branch: usize,
    pub kind: EscapeKind,
    /// First schedule parameter whose image comes within the matching
    /// tolerance of this branch's own contribution; infinite when the branch
    /// contributes nothing. Beyond this parameter a point is numerically
    /// indistinguishable from an escaping one.
    pub entry_param: f64,
}

/// A cluster of limit candidates at the working resolution.
#[derive(Debug, Clone)]
pub struct LimitCluster {
    pub rep: Point,
    pub members: usize,
}

/// Escape-limit estimate: cluster representatives plus per-branch tail
/// diagnostics.
#[derive(Debug, Clone)]
pub struct EscapeScan {
    pub clusters: Vec<LimitCluster>,
    pub branches: Vec<BranchEscape>,
    pub cluster_tol: f64,
    pub match_tol: f64,
    /// First parameter of the schedule that produced the scan.
    pub schedule_start: f64,
}

impl EscapeScan {
    pub fn limit_points(&self) -> Vec<Point> {
        self.clusters.iter().map(|c| c.rep.clone()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Distance from a codomain point to the nearest cluster representative.
    pub fn dist_to_limits(&self, y: &Point) -> f64 {
        self.clusters
            .iter()
            .map(|c| c.rep.euclid(y))
            .fold(f64::INFINITY, f64::min)
    }

    /// Capture cap for a branch: half the entry parameter. Samples beyond it
    /// cannot be told apart from the branch's own escape tail, so capture
    /// stops there.
    pub fn capture_cap(&self, branch: usize) -> f64 {
        self.branches
            .iter()
            .find(|b| b.branch == branch)
            .map(|b| b.entry_param / 2.0)
            .unwrap_or(0.0)
    }
}

/// Keeps or drops one schedule point `(branch, parameter, image)`.
pub type ScheduleFilter<'a> = &'a dyn Fn(usize, f64, &Point) -> bool;

/// Runs the escape schedule through the map and clusters the accumulating
/// tail images at resolution `cluster_tol`. `match_tol` is the tolerance the
/// caller will match candidates against; it calibrates each branch's entry
/// parameter. An optional filter restricts schedule points (used when
/// stratifying a restricted map).
pub fn scan_escapes(
    map: &MapInstance,
    sampler: &EscapeSampler,
    cluster_tol: f64,
    match_tol: f64,
    filter: Option<ScheduleFilter>,
) -> Result<EscapeScan> {
    if !(cluster_tol > 0.0 && match_tol > 0.0) {
        return Err(Error::Parameter("tolerances must be positive".into()));
    }
    let mut contributions: Vec<(usize, Point)> = Vec::new();
    let mut branches = Vec::new();

    for (idx, &branch) in sampler.branch_ids.iter().enumerate() {
        let schedule = sampler.branch_schedule(idx);
        let mut params = Vec::with_capacity(schedule.len());
        let mut images = Vec::with_capacity(schedule.len());
        for &t in schedule {
            let y = map.forward_param(branch, t)?;
            if filter.is_none_or(|f| f(branch, t, &y)) {
                params.push(t);
                images.push(y);
            }
        }
        if images.len() < 8 {
            branches.push(BranchEscape {
                branch,
                kind: EscapeKind::Unbounded,
                entry_param: f64::INFINITY,
            });
            continue;
        }

        let half = images.len() / 2;
        let tail = &images[half..];
        let head_peak = images[..half].iter().map(Point::norm).fold(0.0, f64::max);
        let tail_peak = tail.iter().map(Point::norm).fold(0.0, f64::max);

        let (kind, contributed): (EscapeKind, Vec<Point>) = if tail_peak > 4.0 * head_peak + 10.0 {
            (EscapeKind::Unbounded, Vec::new())
        } else {
            let last = tail.last().expect("tail nonempty").clone();
            let settled = tail.iter().all(|y| y.euclid(&last) < cluster_tol);
            if settled {
                (EscapeKind::Convergent, vec![last])
            } else {
                (EscapeKind::Wandering, tail.to_vec())
            }
        };

        let entry_param = if contributed.is_empty() {
            f64::INFINITY
        } else {
            params
                .iter()
                .zip(&images)
                .find(|(_, y)| {
                    contributed
                        .iter()
                        .map(|c| c.euclid(y))
                        .fold(f64::INFINITY, f64::min)
                        < match_tol
                })
                .map(|(&t, _)| t)
                .unwrap_or(f64::INFINITY)
        };

        branches.push(BranchEscape {
            branch,
            kind,
            entry_param,
        });
        contributions.extend(contributed.into_iter().map(|p| (branch, p)));
    }

    let clusters = leader_clusters(
        contributions.iter().map(|(_, p)| p.clone()).collect(),
        cluster_tol,
    );
    Ok(EscapeScan {
        clusters,
        branches,
        cluster_tol,
        match_tol,
        schedule_start: sampler.parameter_schedule.first().copied().unwrap_or(1.0),
    })
}

/// Escape-limit set of a map under the given sampler: cluster representatives
/// of the accumulating tail images at resolution `tol`.
pub fn escape_limit_set(
    map: &MapInstance,
    sampler: &EscapeSampler,
    tol: f64,
) -> Result<Vec<Point>> {
    Ok(scan_escapes(map, sampler, tol, tol, None)?.limit_points())
}

/// Deterministic single-pass leader clustering: a point joins the first
/// cluster whose leader is within `tol`, otherwise founds a new cluster.
/// Representatives are member centroids.
pub fn leader_clusters(points: Vec<Point>, tol: f64) -> Vec<LimitCluster> {
    let mut leaders: Vec<Point> = Vec::new();
    let mut sums: Vec<(Vec<f64>, usize)> = Vec::new();
    for p in points {
        let mut assigned = false;
        for (i, leader) in leaders.iter().enumerate() {
            if leader.euclid(&p) <= tol {
                for (s, c) in sums[i].0.iter_mut().zip(p.coords()) {
                    *s += c;
                }
                sums[i].1 += 1;
                assigned = true;
                break;
            }
        }
        if !assigned {
            sums.push((p.coords().to_vec(), 1));
            leaders.push(p);
        }
    }
    leaders
        .into_iter()
        .zip(sums)
        .map(|(_, (sum, count))| LimitCluster {
            rep: Point::new(sum.iter().map(|s| s / count as f64).collect())
                .expect("centroid of finite points is finite"),
            members: count,
        })
        .collect()
}
