use crate::curve::CurveForm;
use crate::point::Point;
use crate::space::SpaceDescriptor;
use crate::{Error, Result};

/// Analytic description of the discontinuity preimage, attached to catalog
/// maps as a test oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnownSet {
    Empty,
    /// The single origin of the given branch.
    BranchOrigin {
        branch: usize,
    },
    /// A whole domain branch.
    WholeBranch {
        branch: usize,
    },
}

/// A continuous bijection from a ray-embedded domain onto its image, given
/// per-branch image curves with closed-form inverses.
#[derive(Debug, Clone)]
pub struct MapInstance {
    name: String,
    domain: SpaceDescriptor,
    codomain_dim: usize,
    curves: Vec<CurveForm>,
    known_x1: Option<KnownSet>,
}

impl MapInstance {
    pub fn new(
        name: impl Into<String>,
        domain: SpaceDescriptor,
        codomain_dim: usize,
        curves: Vec<CurveForm>,
        known_x1: Option<KnownSet>,
    ) -> Result<Self> {
        if curves.len() != domain.branches().len() {
            return Err(Error::Descriptor(format!(
                "{} curves for {} domain branches",
                curves.len(),
                domain.branches().len()
            )));
        }
        for curve in &curves {
            curve.validate()?;
            if curve.codomain_dim() != codomain_dim {
                return Err(Error::Descriptor(
                    "curve codomain dimension mismatch".into(),
                ));
            }
        }
        Ok(Self {
            name: name.into(),
            domain,
            codomain_dim,
            curves,
            known_x1,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &SpaceDescriptor {
        &self.domain
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn known_x1(&self) -> Option<KnownSet> {
        self.known_x1
    }

    pub fn curve(&self, branch: usize) -> &CurveForm {
        &self.curves[branch]
    }

    /// Image of a domain branch parameter.
    pub fn forward_param(&self, branch: usize, t: f64) -> Result<Point> {
        if branch >= self.curves.len() {
            return Err(Error::MapEval(format!("branch {branch} out of range")));
        }
        if !t.is_finite() || t < 0.0 {
            return Err(Error::MapEval(format!("bad ray parameter {t}")));
        }
        Point::new(self.curves[branch].forward(t))
            .map_err(|e| Error::MapEval(format!("forward image not finite: {e}")))
    }

    /// Image of a domain point.
    pub fn forward(&self, x: &Point) -> Result<Point> {
        let (branch, t) = self.domain.locate(x)?;
        self.forward_param(branch, t)
    }

    /// Preimage of a codomain point, defined on the image: each branch curve
    /// proposes an inverse parameter and the proposal with the smallest
    /// forward residual wins.
    pub fn inverse(&self, y: &Point) -> Result<Point> {
        if y.dim() != self.codomain_dim {
            return Err(Error::MapEval("codomain dimension mismatch".into()));
        }
        let mut best: Option<(usize, f64, f64)> = None;
        for (branch, curve) in self.curves.iter().enumerate() {
            if let Some(t) = curve.inverse(y.coords()) {
                let image = curve.forward(t);
                let residual = image
                    .iter()
                    .zip(y.coords())
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                if best.is_none_or(|(_, _, r)| residual < r) {
                    best = Some((branch, t, residual));
                }
            }
        }
        match best {
            Some((branch, t, residual)) if residual <= 1e-6 => Ok(self.domain.embed(branch, t)),
            _ => Err(Error::MapEval(format!(
                "{y} is not on the image of `{}`",
                self.name
            ))),
        }
    }

    /// Distance between the preimages of two image points.
    pub fn pullback_dist(&self, y1: &Point, y2: &Point) -> Result<f64> {
        let x1 = self.inverse(y1)?;
        let x2 = self.inverse(y2)?;
        Ok(self.domain.distance(&x1, &x2))
    }
}
