use std::fmt;

/// Coordinate tolerance used when deciding whether two points are the same
/// point for identity checks.
pub const COORD_EQ_TOL: f64 = 1e-12;

/// A point of a concrete space: a finite real coordinate tuple plus an
/// optional branch tag for spaces built as unions of rays.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
    branch: Option<usize>,
}

impl Point {
    /// Builds a point, rejecting non-finite coordinates.
    pub fn new(coords: Vec<f64>) -> crate::Result<Self> {
        if coords.is_empty() {
            return Err(crate::Error::Parameter("point needs coordinates".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(crate::Error::Parameter(format!(
                "non-finite coordinate in {coords:?}"
            )));
        }
        Ok(Self {
            coords,
            branch: None,
        })
    }

    pub fn with_branch(mut self, branch: usize) -> Self {
        self.branch = Some(branch);
        self
    }

    /// 1-dimensional convenience constructor.
    pub fn scalar(x: f64) -> Self {
        Self {
            coords: vec![x],
            branch: None,
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn branch(&self) -> Option<usize> {
        self.branch
    }

    /// Coordinate equality within [`COORD_EQ_TOL`]; branch tags are not
    /// compared since the embedding already separates branches.
    pub fn approx_eq(&self, other: &Point) -> bool {
        self.coords.len() == other.coords.len()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(a, b)| (a - b).abs() <= COORD_EQ_TOL)
    }

    /// Ambient Euclidean distance between coordinate tuples.
    pub fn euclid(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.coords.len(), other.coords.len());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")?;
        if let Some(b) = self.branch {
            write!(f, "@{b}")?;
        }
        Ok(())
    }
}

/// Distance from one point set to another under `d`: sup over `a` of the
/// min over `b`. Returns 0 when `a` is empty and infinity when only `b` is.
pub fn directed_hausdorff(a: &[Point], b: &[Point], d: impl Fn(&Point, &Point) -> f64) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    if b.is_empty() {
        return f64::INFINITY;
    }
    a.iter()
        .map(|x| b.iter().map(|y| d(x, y)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between finite point sets.
pub fn hausdorff(a: &[Point], b: &[Point], d: impl Fn(&Point, &Point) -> f64 + Copy) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    directed_hausdorff(a, b, d).max(directed_hausdorff(b, a, d))
}
