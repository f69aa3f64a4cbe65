use crate::point::Point;
use crate::region::Region;
use crate::space::SpaceDescriptor;
use crate::{Error, Result};

/// Absolute tolerance for all validation comparisons.
const VALIDATION_TOL: f64 = 1e-12;

/// Certification threshold for the vanishing tail: the last listed radius
/// must sit below this.
pub const TAIL_THRESHOLD: f64 = 1e-3;

/// A nested family of compact regions `K_n` with shrink radii `r_n`,
/// truncated at depth `n_max` for evaluation. Valid families satisfy
///
/// * each region is contained in the interior of the next,
/// * the open `r_n`-enlargement of `K_n` stays inside `K_{n+1}`,
/// * the radii decrease strictly and the listed tail vanishes.
#[derive(Debug, Clone)]
pub struct Exhaustion {
    regions: Vec<Region>,
    radii: Vec<f64>,
}

impl Exhaustion {
    pub fn new(regions: Vec<Region>, radii: Vec<f64>) -> Result<Self> {
        if regions.len() != radii.len() {
            return Err(Error::Descriptor(
                "regions and radii must have equal length".into(),
            ));
        }
        if regions.len() < 2 {
            return Err(Error::Descriptor("need at least 2 regions".into()));
        }
        Ok(Self { regions, radii })
    }

    /// The default family for ray spaces: `K_n` is the union of the branch
    /// segments with parameter in `[0, n]` and `r_n = 1/n`.
    pub fn unit_intervals(space: &SpaceDescriptor, n_max: usize) -> Self {
        let branches = space.branches().len();
        let regions = (1..=n_max)
            .map(|n| Region::RaySegments {
                intervals: vec![(0.0, n as f64); branches],
            })
            .collect();
        let radii = (1..=n_max).map(|n| 1.0 / n as f64).collect();
        Self { regions, radii }
    }

    pub fn depth(&self) -> usize {
        self.regions.len()
    }

    /// Region `K_n`, 1-based.
    pub fn region(&self, n: usize) -> &Region {
        &self.regions[n - 1]
    }

    /// Radius `r_n`, 1-based.
    pub fn radius(&self, n: usize) -> f64 {
        self.radii[n - 1]
    }
}

/// One violated validation condition at a given index.
#[derive(Debug, Clone, PartialEq)]
pub enum Condition {
    /// `K_n` not strictly inside `K_{n+1}`.
    Containment { n: usize, margin: f64 },
    /// Enlargement of `K_n` by `r_n` leaks out of `K_{n+1}`.
    Enlargement { n: usize, margin: f64, radius: f64 },
    /// `r_n <= r_{n+1}`.
    Monotone { n: usize },
    /// Final listed radius not below the certification threshold.
    VanishingTail { last_radius: f64 },
}

#[derive(Debug, Clone, Default)]
pub struct ExhaustionReport {
    pub violations: Vec<Condition>,
}

impl ExhaustionReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks all nesting and radius conditions analytically on the region
/// descriptors.
pub fn validate_exhaustion(exh: &Exhaustion, space: &SpaceDescriptor) -> Result<ExhaustionReport> {
    for region in &exh.regions {
        region.validate(space)?;
    }
    for &r in &exh.radii {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Descriptor(format!("bad radius {r}")));
        }
    }

    let mut report = ExhaustionReport::default();
    for n in 1..exh.depth() {
        let margin = exh.region(n).margin_into(exh.region(n + 1), space)?;
        if margin <= VALIDATION_TOL {
            report.violations.push(Condition::Containment { n, margin });
        }
        if margin < exh.radius(n) - VALIDATION_TOL {
            report.violations.push(Condition::Enlargement {
                n,
                margin,
                radius: exh.radius(n),
            });
        }
        if exh.radius(n) <= exh.radius(n + 1) + VALIDATION_TOL {
            report.violations.push(Condition::Monotone { n });
        }
    }
    let last = exh.radius(exh.depth());
    if last >= TAIL_THRESHOLD {
        report
            .violations
            .push(Condition::VanishingTail { last_radius: last });
    }
    Ok(report)
}

/// Distance from a point to `K_n`; exposed for oracle-style tests.
pub fn region_dist(exh: &Exhaustion, space: &SpaceDescriptor, n: usize, p: &Point) -> f64 {
    exh.region(n).dist(space, p)
}
