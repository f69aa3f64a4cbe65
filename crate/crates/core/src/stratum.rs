use crate::maps::MapInstance;
use crate::point::Point;
use crate::strat::Stratification;
use crate::{Error, Result};

/// Contact tolerance: preimages this close to the boundary set are rejected.
const CONTACT_TOL: f64 = 1e-9;

/// The complete metric of one open stratum: base distance between preimages
/// plus the difference of reciprocal distances to the next boundary class.
/// With an empty boundary the reciprocal term vanishes identically and the
/// metric is the plain pullback distance.
#[derive(Debug, Clone)]
pub struct StratumMetric {
    level: usize,
    boundary: Vec<Point>,
}

impl StratumMetric {
    pub fn new(level: usize, boundary: Vec<Point>) -> Self {
        Self { level, boundary }
    }

    /// Stratum metric for level `k` of a computed stratification; the
    /// boundary set is the captured next-level preimage sample.
    pub fn from_stratification(strat: &Stratification, k: usize) -> Result<Self> {
        let level = strat
            .levels
            .get(k)
            .ok_or(Error::Parameter(format!("no level {k} in stratification")))?;
        Ok(Self::new(k, level.captured_x.clone()))
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn boundary(&self) -> &[Point] {
        &self.boundary
    }

    /// Distance from a domain point to the boundary sample; infinite when the
    /// boundary is empty.
    pub fn boundary_dist(&self, map: &MapInstance, x: &Point) -> f64 {
        self.boundary
            .iter()
            .map(|b| map.domain().distance(x, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Reciprocal boundary distance of an image point; zero under the
    /// empty-boundary convention.
    pub fn kappa(&self, map: &MapInstance, y: &Point) -> Result<f64> {
        if self.boundary.is_empty() {
            return Ok(0.0);
        }
        let x = map.inverse(y)?;
        let d = self.boundary_dist(map, &x);
        if d <= CONTACT_TOL {
            return Err(Error::BoundaryContact { index: self.level });
        }
        Ok(1.0 / d)
    }

    /// The stratum metric between two image points of the open part.
    pub fn eval(&self, map: &MapInstance, y1: &Point, y2: &Point) -> Result<f64> {
        let x1 = map.inverse(y1)?;
        let x2 = map.inverse(y2)?;
        let base = map.domain().distance(&x1, &x2);
        if self.boundary.is_empty() {
            return Ok(base);
        }
        let d1 = self.boundary_dist(map, &x1);
        let d2 = self.boundary_dist(map, &x2);
        if d1 <= CONTACT_TOL || d2 <= CONTACT_TOL {
            return Err(Error::BoundaryContact { index: self.level });
        }
        Ok(base + (1.0 / d1 - 1.0 / d2).abs())
    }
}
