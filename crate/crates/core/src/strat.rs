//! Discontinuity-set estimation and iterated stratification of a continuous
//! bijection: the image splits into an open locally compact part and a
//! smaller image of the same kind, and the split repeats until nothing is
//! left.

use crate::limits::{leader_clusters, scan_escapes, EscapeSampler, EscapeScan, LimitCluster};
use crate::maps::MapInstance;
use crate::point::Point;
use crate::{Error, Result};

/// Knobs for the estimation pipeline. The defaults are calibrated for the
/// catalog maps and written down once here.
#[derive(Debug, Clone)]
pub struct StratifyOptions {
    /// Matching tolerance: a sample whose image lies within this distance of
    /// the limit-set estimate is assigned to the discontinuity class.
    pub match_tol: f64,
    /// Resolution at which limit candidates are clustered.
    pub cluster_tol: f64,
    /// Seeded domain draws added to the deterministic candidate grids.
    pub samples: usize,
    pub seed: u64,
    /// Maximum number of levels to estimate.
    pub max_depth: usize,
    /// Escape schedule shape.
    pub escape_start: f64,
    pub escape_end: f64,
    pub escape_count: usize,
    /// Geometric candidate grid per branch, from `grid_min` up to the
    /// branch's capture cap.
    pub grid_ratio: f64,
    pub grid_min: f64,
    /// A level whose candidate pool is smaller than this cannot be estimated.
    pub min_level_pool: usize,
    /// Fewer captured samples than this reads as an empty next level.
    pub termination_floor: usize,
}

impl Default for StratifyOptions {
    fn default() -> Self {
        Self {
            match_tol: 1e-2,
            cluster_tol: 2e-3,
            samples: 1000,
            seed: 0,
            max_depth: 8,
            escape_start: 1.0,
            escape_end: 1e9,
            escape_count: 12_000,
            grid_ratio: 1.005,
            grid_min: 1e-6,
            min_level_pool: 12,
            termination_floor: 3,
        }
    }
}

impl StratifyOptions {
    pub fn sampler(&self, map: &MapInstance) -> EscapeSampler {
        let branches: Vec<usize> = (0..map.domain().branches().len()).collect();
        EscapeSampler::geometric(
            branches,
            self.escape_start,
            self.escape_end,
            self.escape_count,
        )
        .expect("options hold a valid schedule")
    }

    /// Deterministic candidate pool: seeded draws plus a per-branch geometric
    /// grid anchored at the branch origin.
    pub fn candidate_pool(&self, map: &MapInstance) -> Vec<Point> {
        let domain = map.domain();
        let mut pool = domain.sample(self.seed, self.samples);
        let cap = domain.sample_cap();
        for branch in 0..domain.branches().len() {
            pool.push(domain.embed(branch, 0.0));
            let mut t = self.grid_min;
            while t <= cap {
                pool.push(domain.embed(branch, t));
                t *= self.grid_ratio;
            }
        }
        pool
    }
}

/// Discontinuity-class estimate: domain samples whose images land on the
/// limit set, together with those images.
#[derive(Debug, Clone, Default)]
pub struct Capture {
    pub x1: Vec<Point>,
    pub y1: Vec<Point>,
}

/// Samples needed before a branch's captured mass counts as evidence.
const SWEEP_FLOOR: usize = 3;

/// Splits `domain_samples` against the escape-limit estimate.
///
/// First pass: a sample joins the discontinuity class when its image lies
/// within `tol` of a limit cluster and its ray parameter stays below the
/// branch capture cap (beyond the cap, proximity to the limit set is
/// explained by the branch's own escape and certifies nothing). Second pass:
/// on branches whose captured mass stretches past the escape schedule start,
/// the cap is lifted; the whole branch demonstrably sits in the class, so
/// far parameters matching the limit set are absorbed as well.
pub fn discontinuity_set(
    map: &MapInstance,
    scan: &EscapeScan,
    domain_samples: &[Point],
    tol: f64,
) -> Result<Capture> {
    if !(tol > 0.0) {
        return Err(Error::Parameter("tolerance must be positive".into()));
    }
    let mut capture = Capture::default();
    if scan.is_empty() {
        return Ok(capture);
    }
    let branches = map.domain().branches().len();
    let mut located = Vec::with_capacity(domain_samples.len());
    let mut taken = vec![false; domain_samples.len()];
    let mut count = vec![0usize; branches];
    let mut max_t = vec![0.0f64; branches];

    for (i, x) in domain_samples.iter().enumerate() {
        let (branch, t) = map.domain().locate(x)?;
        located.push((branch, t));
        if t > scan.capture_cap(branch) {
            continue;
        }
        let y = map.forward(x)?;
        if scan.dist_to_limits(&y) < tol {
            taken[i] = true;
            count[branch] += 1;
            max_t[branch] = max_t[branch].max(t);
        }
    }

    let swept: Vec<bool> = (0..branches)
        .map(|b| count[b] >= SWEEP_FLOOR && max_t[b] >= scan.schedule_start)
        .collect();
    if swept.iter().any(|&s| s) {
        for (i, x) in domain_samples.iter().enumerate() {
            let (branch, _) = located[i];
            if taken[i] || !swept[branch] {
                continue;
            }
            let y = map.forward(x)?;
            if scan.dist_to_limits(&y) < tol {
                taken[i] = true;
            }
        }
    }

    for (i, x) in domain_samples.iter().enumerate() {
        if taken[i] {
            capture.x1.push(x.clone());
            capture.y1.push(map.forward(x)?);
        }
    }
    Ok(capture)
}

/// One stratification level: the image samples of the level, the part that
/// stays open and locally compact, and the captured next-level class.
#[derive(Debug, Clone)]
pub struct StratLevel {
    pub k: usize,
    pub x_samples: Vec<Point>,
    pub y_samples: Vec<Point>,
    pub z_samples: Vec<Point>,
    pub captured_x: Vec<Point>,
    pub captured_y: Vec<Point>,
    /// Captured images clustered at the matching tolerance, for reporting.
    pub next_clusters: Vec<LimitCluster>,
}

#[derive(Debug, Clone)]
pub struct Stratification {
    pub levels: Vec<StratLevel>,
    pub terminated: bool,
}

impl Stratification {
    /// The discontinuity-class image estimate of the first level.
    pub fn y1_estimate(&self) -> &[Point] {
        self.levels
            .first()
            .map(|l| l.captured_y.as_slice())
            .unwrap_or(&[])
    }

    pub fn nonempty_levels(&self) -> usize {
        self.levels
            .iter()
            .filter(|l| !l.y_samples.is_empty())
            .count()
    }
}

/// Iterates the open/discontinuity split. Level 0 works on the full candidate
/// pool; level k+1 restricts to the captured preimages, with escape routes
/// filtered to branches that demonstrably stay inside the restricted class.
pub fn stratify(
    map: &MapInstance,
    max_depth: usize,
    opts: &StratifyOptions,
) -> Result<Stratification> {
    if max_depth == 0 {
        return Err(Error::Parameter("depth must be positive".into()));
    }
    let opts = StratifyOptions {
        max_depth,
        ..opts.clone()
    };
    let sampler = opts.sampler(map);
    let mut pool = opts.candidate_pool(map);
    let mut levels: Vec<StratLevel> = Vec::new();
    let mut terminated = false;

    for k in 0..opts.max_depth {
        if pool.len() < opts.min_level_pool {
            return Err(Error::Resolution { level: k });
        }
        let mut x_samples = Vec::with_capacity(pool.len());
        let mut y_samples = Vec::with_capacity(pool.len());
        for x in &pool {
            y_samples.push(map.forward(x)?);
            x_samples.push(x.clone());
        }

        let scan = if k == 0 {
            scan_escapes(map, &sampler, opts.cluster_tol, opts.match_tol, None)?
        } else {
            restricted_scan(map, &sampler, &x_samples, &y_samples, &opts)?
        };

        let capture = discontinuity_set(map, &scan, &x_samples, opts.match_tol)?;
        let captured = capture.x1.len() >= opts.termination_floor;

        let (z_samples, captured_x, captured_y) = if captured {
            let mut flags = vec![false; x_samples.len()];
            mark_captured(&x_samples, &capture.x1, &mut flags);
            let z = y_samples
                .iter()
                .zip(&flags)
                .filter(|(_, &f)| !f)
                .map(|(y, _)| y.clone())
                .collect();
            (z, capture.x1, capture.y1)
        } else {
            (y_samples.clone(), Vec::new(), Vec::new())
        };

        let next_clusters = leader_clusters(captured_y.clone(), opts.match_tol);
        levels.push(StratLevel {
            k,
            x_samples,
            y_samples,
            z_samples,
            captured_x: captured_x.clone(),
            captured_y,
            next_clusters,
        });

        if !captured {
            terminated = true;
            break;
        }
        pool = captured_x;
    }

    Ok(Stratification { levels, terminated })
}

/// Escape scan of the restriction to the current class: only branches whose
/// class samples genuinely stretch along them survive, and schedule points
/// must keep their images near the class image.
fn restricted_scan(
    map: &MapInstance,
    sampler: &EscapeSampler,
    x_samples: &[Point],
    y_samples: &[Point],
    opts: &StratifyOptions,
) -> Result<EscapeScan> {
    let domain = map.domain();
    let mut max_param = vec![0.0f64; domain.branches().len()];
    let mut count = vec![0usize; domain.branches().len()];
    for x in x_samples {
        let (b, t) = domain.locate(x)?;
        max_param[b] = max_param[b].max(t);
        count[b] += 1;
    }
    let surviving: Vec<usize> = (0..domain.branches().len())
        .filter(|&b| count[b] >= opts.termination_floor && max_param[b] >= opts.escape_start)
        .collect();
    if surviving.is_empty() {
        return Ok(EscapeScan {
            clusters: Vec::new(),
            branches: Vec::new(),
            cluster_tol: opts.cluster_tol,
            match_tol: opts.match_tol,
            schedule_start: opts.escape_start,
        });
    }
    let restricted = EscapeSampler {
        branch_ids: surviving.clone(),
        parameter_schedule: sampler.parameter_schedule.clone(),
        per_branch_counts: vec![sampler.parameter_schedule.len(); surviving.len()],
    };
    let slack = 2.0 * opts.match_tol;
    let near_class = move |_b: usize, _t: f64, y: &Point| {
        y_samples
            .iter()
            .map(|c| c.euclid(y))
            .fold(f64::INFINITY, f64::min)
            <= slack
    };
    scan_escapes(
        map,
        &restricted,
        opts.cluster_tol,
        opts.match_tol,
        Some(&near_class),
    )
}

fn mark_captured(pool: &[Point], captured: &[Point], flags: &mut [bool]) {
    // captured points are clones of pool entries, so exact matching works
    let mut j = 0;
    for (i, x) in pool.iter().enumerate() {
        if j < captured.len() && x == &captured[j] {
            flags[i] = true;
            j += 1;
        }
    }
    debug_assert_eq!(j, captured.len());
}

/// A probe pool with each point's image and its disqualification flag
/// precomputed. A point is disqualifying when its own image lies within the
/// matching tolerance of the discontinuity-image estimate or its ray
/// parameter exceeds the per-branch bound: both mean the point cannot
/// witness a compactly contained preimage.
pub struct FlaggedPool {
    images: Vec<Point>,
    bad: Vec<bool>,
}

impl FlaggedPool {
    pub fn build(
        map: &MapInstance,
        pool: &[Point],
        bounds: &[f64],
        y1_estimate: &[Point],
        match_tol: f64,
    ) -> Result<Self> {
        if bounds.len() != map.domain().branches().len() {
            return Err(Error::Parameter("one bound per branch required".into()));
        }
        let dist_to_y1 = |p: &Point| {
            y1_estimate
                .iter()
                .map(|q| q.euclid(p))
                .fold(f64::INFINITY, f64::min)
        };
        let mut images = Vec::with_capacity(pool.len());
        let mut bad = Vec::with_capacity(pool.len());
        for x in pool {
            let (branch, t) = map.domain().locate(x)?;
            let image = map.forward(x)?;
            bad.push(t > bounds[branch] || dist_to_y1(&image) <= match_tol);
            images.push(image);
        }
        Ok(Self { images, bad })
    }

    /// Probes one image point against the radius schedule.
    pub fn probe(&self, y: &Point, radius_schedule: &[f64]) -> Result<bool> {
        if radius_schedule.is_empty() {
            return Err(Error::Parameter("empty radius schedule".into()));
        }
        if radius_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Parameter("radius schedule must decrease".into()));
        }
        let mut any_nonempty = false;
        for &radius in radius_schedule {
            let mut nonempty = false;
            let mut clean = true;
            for (image, bad) in self.images.iter().zip(&self.bad) {
                if image.euclid(y) <= radius {
                    nonempty = true;
                    if *bad {
                        clean = false;
                        break;
                    }
                }
            }
            if nonempty {
                any_nonempty = true;
                if clean {
                    return Ok(true);
                }
            }
        }
        if any_nonempty {
            Ok(false)
        } else {
            Err(Error::Inconclusive(format!(
                "no pool image within any schedule radius of {y}"
            )))
        }
    }
}

/// Properness probe around an image point `y`: looks for a schedule radius
/// whose captured pool preimages all avoid the estimated discontinuity
/// class. Returns an inconclusive error when every radius captures nothing.
pub fn proper_neighborhood_test(
    map: &MapInstance,
    y: &Point,
    radius_schedule: &[f64],
    bounds: &[f64],
    pool: &[Point],
    y1_estimate: &[Point],
    match_tol: f64,
) -> Result<bool> {
    FlaggedPool::build(map, pool, bounds, y1_estimate, match_tol)?.probe(y, radius_schedule)
}

/// Default radius schedule for properness probes.
pub fn default_radius_schedule() -> Vec<f64> {
    vec![0.1, 0.03, 0.01, 0.003, 0.001, 3e-4]
}

/// Per-branch parameter bounds for properness probes: the first schedule
/// parameter whose image enters the matching tube of the discontinuity-image
/// estimate. Infinite when the branch never enters.
pub fn properness_bounds(
    map: &MapInstance,
    sampler: &EscapeSampler,
    y1_estimate: &[Point],
    match_tol: f64,
) -> Result<Vec<f64>> {
    let mut bounds = vec![f64::INFINITY; map.domain().branches().len()];
    if y1_estimate.is_empty() {
        return Ok(bounds);
    }
    for (idx, &branch) in sampler.branch_ids.iter().enumerate() {
        let count = sampler.per_branch_counts[idx].min(sampler.parameter_schedule.len());
        for &t in &sampler.parameter_schedule[..count] {
            let y = map.forward_param(branch, t)?;
            let d = y1_estimate
                .iter()
                .map(|q| q.euclid(&y))
                .fold(f64::INFINITY, f64::min);
            if d < match_tol {
                bounds[branch] = t;
                break;
            }
        }
    }
    Ok(bounds)
}

/// Pool used by properness probes: the stratification candidate pool plus a
/// linear grid (balls at every scale keep local witnesses) and a long
/// geometric grid reaching far out along every branch.
pub fn properness_pool(map: &MapInstance, opts: &StratifyOptions) -> Vec<Point> {
    let domain = map.domain();
    let mut pool = opts.candidate_pool(map);
    for branch in 0..domain.branches().len() {
        let mut t = 0.5;
        while t <= 1000.0 {
            pool.push(domain.embed(branch, t));
            t += 0.5;
        }
        let mut t = 1.0;
        while t <= opts.escape_end {
            pool.push(domain.embed(branch, t));
            t *= 1.005;
        }
    }
    pool
}

/// Outcome of the two-route comparison: the properness probe against the
/// distance-to-discontinuity rule, per probe point.
#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    pub total: usize,
    pub agreements: usize,
    /// (probe image, probe verdict, distance to the discontinuity estimate)
    pub mismatches: Vec<(Point, bool, f64)>,
}

impl ConsistencyReport {
    pub fn agreement_fraction(&self) -> f64 {
        if self.total == 0 {
            return 1.0;
        }
        self.agreements as f64 / self.total as f64
    }
}

/// Cross-checks the neighborhood properness probe against the
/// distance-to-discontinuity rule on seeded probe images: the two must agree
/// that a point is regular exactly when it sits farther than the matching
/// tolerance from the discontinuity-image estimate.
pub fn consistency_check(
    map: &MapInstance,
    strat: &Stratification,
    opts: &StratifyOptions,
    probe_seed: u64,
    probe_count: usize,
) -> Result<ConsistencyReport> {
    let y1 = strat.y1_estimate();
    let sampler = opts.sampler(map);
    let bounds = properness_bounds(map, &sampler, y1, opts.match_tol)?;
    let radii = default_radius_schedule();

    let probes = map.domain().sample(probe_seed, probe_count);
    let mut pool = properness_pool(map, opts);
    pool.extend(probes.iter().cloned());
    let flagged = FlaggedPool::build(map, &pool, &bounds, y1, opts.match_tol)?;

    let mut report = ConsistencyReport {
        total: probes.len(),
        agreements: 0,
        mismatches: Vec::new(),
    };
    for x in &probes {
        let y = map.forward(x)?;
        let d = y1
            .iter()
            .map(|q| q.euclid(&y))
            .fold(f64::INFINITY, f64::min);
        let expected_proper = d > opts.match_tol;
        let verdict = flagged.probe(&y, &radii)?;
        if verdict == expected_proper {
            report.agreements += 1;
        } else {
            report.mismatches.push((y, verdict, d));
        }
    }
    Ok(report)
}

/// Partition of a codomain sample set by nearest stratum.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// One part per stratification level, in level order.
    pub parts: Vec<Vec<Point>>,
    /// Indices of samples whose two nearest strata tie within the tolerance.
    pub ambiguous: Vec<usize>,
}

/// Assigns each sample of `a_samples` to the level whose open part it sits
/// closest to. Parts are disjoint by construction and union back to the
/// input; ties within `tol` are flagged.
pub fn decompose_open_set(
    a_samples: &[Point],
    strat: &Stratification,
    tol: f64,
) -> Result<Decomposition> {
    if strat.levels.is_empty() {
        return Err(Error::Parameter("empty stratification".into()));
    }
    let mut parts = vec![Vec::new(); strat.levels.len()];
    let mut ambiguous = Vec::new();
    for (i, a) in a_samples.iter().enumerate() {
        let mut best = (usize::MAX, f64::INFINITY);
        let mut second = f64::INFINITY;
        for (k, level) in strat.levels.iter().enumerate() {
            let d = level
                .z_samples
                .iter()
                .map(|z| z.euclid(a))
                .fold(f64::INFINITY, f64::min);
            if d < best.1 {
                second = best.1;
                best = (k, d);
            } else if d < second {
                second = d;
            }
        }
        if best.0 == usize::MAX {
            return Err(Error::Resolution { level: 0 });
        }
        if (second - best.1).abs() <= tol && second.is_finite() {
            ambiguous.push(i);
        }
        parts[best.0].push(a.clone());
    }
    Ok(Decomposition { parts, ambiguous })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn quick_opts() -> StratifyOptions {
        StratifyOptions {
            samples: 400,
            escape_count: 4000,
            seed: 7,
            ..StratifyOptions::default()
        }
    }

    #[test]
    fn identity_stratifies_to_a_single_level() {
        let map = catalog::identity_map();
        let strat = stratify(&map, 4, &quick_opts()).unwrap();
        assert!(strat.terminated);
        assert_eq!(strat.levels.len(), 1);
        assert!(strat.levels[0].captured_y.is_empty());
        assert_eq!(
            strat.levels[0].z_samples.len(),
            strat.levels[0].y_samples.len()
        );
    }

    #[test]
    fn lollipop_captures_the_origin() {
        let map = catalog::lollipop();
        let strat = stratify(&map, 4, &quick_opts()).unwrap();
        assert!(strat.terminated);
        assert_eq!(strat.levels.len(), 2);
        let x1 = &strat.levels[0].captured_x;
        assert!(!x1.is_empty());
        for x in x1 {
            assert!(x.coords()[0] < 1e-2, "captured {x}");
        }
        let target = Point::new(vec![1.0, 0.0]).unwrap();
        for y in &strat.levels[0].captured_y {
            assert!(y.euclid(&target) < 1e-2);
        }
    }

    #[test]
    fn depth_cap_leaves_stratification_unterminated() {
        let map = catalog::lollipop();
        let strat = stratify(&map, 1, &quick_opts()).unwrap();
        assert!(!strat.terminated);
        assert_eq!(strat.levels.len(), 1);
        assert!(!strat.levels[0].captured_y.is_empty());
    }

    #[test]
    fn tiny_pool_is_a_resolution_error() {
        let map = catalog::lollipop();
        let opts = StratifyOptions {
            samples: 2,
            min_level_pool: 10_000_000,
            ..quick_opts()
        };
        assert!(matches!(
            stratify(&map, 3, &opts),
            Err(Error::Resolution { level: 0 })
        ));
    }

    #[test]
    fn decompose_identity_is_one_part() {
        let map = catalog::identity_map();
        let strat = stratify(&map, 3, &quick_opts()).unwrap();
        let a: Vec<Point> = (0..20).map(|i| Point::scalar(i as f64 * 0.3)).collect();
        let dec = decompose_open_set(&a, &strat, 1e-3).unwrap();
        assert_eq!(dec.parts.len(), 1);
        assert_eq!(dec.parts[0].len(), a.len());
        assert!(dec.ambiguous.is_empty());
    }
}
