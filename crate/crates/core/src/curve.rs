use std::f64::consts::{PI, TAU};

use crate::{Error, Result};

/// Analytic image curve of one domain ray, parametrized by the ray parameter
/// `t >= 0`. Each form has a closed-form inverse on its image.
#[derive(Debug, Clone)]
pub enum CurveForm {
    /// `origin + t * direction`.
    Affine {
        origin: Vec<f64>,
        direction: Vec<f64>,
    },
    /// Circle traversal with rational angle `turns * 2pi * t / (1 + t)`; the
    /// full angle range is swept exactly once as `t` runs to infinity.
    Circle {
        center: [f64; 2],
        radius: f64,
        turns: f64,
    },
    /// Spiral with radius `base + amplitude / (1 + t)^decay` and angle
    /// `2pi * turns_per_unit * t`: winds forever while the radius settles
    /// onto the base circle.
    Spiral {
        center: [f64; 2],
        base_radius: f64,
        amplitude: f64,
        decay: f64,
        turns_per_unit: f64,
    },
    /// One lobe of a figure eight: `u = sign * pi * t / (1 + t)`, image
    /// `scale * (sin u, sin u cos u)`.
    EightLobe { scale: f64, sign: f64 },
}

impl CurveForm {
    pub fn codomain_dim(&self) -> usize {
        match self {
            CurveForm::Affine { origin, .. } => origin.len(),
            _ => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CurveForm::Affine { origin, direction } => {
                if origin.len() != direction.len() || origin.is_empty() {
                    return Err(Error::Descriptor("affine curve dimension mismatch".into()));
                }
                if direction.iter().all(|d| *d == 0.0) {
                    return Err(Error::Descriptor("affine curve needs a direction".into()));
                }
            }
            CurveForm::Circle { radius, turns, .. } => {
                if !(*radius > 0.0) {
                    return Err(Error::Descriptor("circle radius must be positive".into()));
                }
                if !(*turns > 0.0 && *turns <= 1.0) {
                    return Err(Error::Descriptor(
                        "circle turns must lie in (0, 1] to stay injective".into(),
                    ));
                }
            }
            CurveForm::Spiral {
                base_radius,
                amplitude,
                decay,
                ..
            } => {
                if !(*base_radius >= 0.0 && *amplitude > 0.0 && *decay > 0.0) {
                    return Err(Error::Descriptor("bad spiral coefficients".into()));
                }
            }
            CurveForm::EightLobe { scale, sign } => {
                if !(*scale > 0.0) || (*sign != 1.0 && *sign != -1.0) {
                    return Err(Error::Descriptor("bad figure-eight coefficients".into()));
                }
            }
        }
        Ok(())
    }

    pub fn forward(&self, t: f64) -> Vec<f64> {
        match self {
            CurveForm::Affine { origin, direction } => origin
                .iter()
                .zip(direction)
                .map(|(o, d)| o + t * d)
                .collect(),
            CurveForm::Circle {
                center,
                radius,
                turns,
            } => {
                let angle = turns * TAU * t / (1.0 + t);
                vec![
                    center[0] + radius * angle.cos(),
                    center[1] + radius * angle.sin(),
                ]
            }
            CurveForm::Spiral {
                center,
                base_radius,
                amplitude,
                decay,
                turns_per_unit,
            } => {
                let rho = base_radius + amplitude / (1.0 + t).powf(*decay);
                let angle = TAU * turns_per_unit * t;
                vec![center[0] + rho * angle.cos(), center[1] + rho * angle.sin()]
            }
            CurveForm::EightLobe { scale, sign } => {
                let u = sign * PI * t / (1.0 + t);
                vec![scale * u.sin(), scale * u.sin() * u.cos()]
            }
        }
    }

    /// Ray parameter whose image is `y`, assuming `y` lies on the curve.
    /// Returns `None` for points structurally off the image (callers verify
    /// the round trip regardless).
    pub fn inverse(&self, y: &[f64]) -> Option<f64> {
        match self {
            CurveForm::Affine { origin, direction } => {
                let norm2: f64 = direction.iter().map(|d| d * d).sum();
                let t = origin
                    .iter()
                    .zip(direction)
                    .zip(y)
                    .map(|((o, d), v)| (v - o) * d)
                    .sum::<f64>()
                    / norm2;
                (t >= 0.0).then_some(t)
            }
            CurveForm::Circle { center, turns, .. } => {
                let angle = normalize_angle((y[1] - center[1]).atan2(y[0] - center[0]));
                let span = turns * TAU;
                if angle >= span {
                    return None;
                }
                let t = angle / (span - angle);
                t.is_finite().then_some(t)
            }
            CurveForm::Spiral {
                center,
                base_radius,
                amplitude,
                decay,
                ..
            } => {
                let rho = ((y[0] - center[0]).powi(2) + (y[1] - center[1]).powi(2)).sqrt();
                if rho <= *base_radius {
                    return None;
                }
                let t = (amplitude / (rho - base_radius)).powf(1.0 / decay) - 1.0;
                (t.is_finite() && t >= 0.0).then_some(t)
            }
            CurveForm::EightLobe { scale, sign } => {
                let a = y[0] / scale;
                let b = y[1] / scale;
                if a.abs() < 1e-15 {
                    return Some(0.0);
                }
                if a.abs() > 1.0 + 1e-12 {
                    return None;
                }
                let cos_u = (b / a).clamp(-1.0, 1.0);
                let u = a.atan2(cos_u);
                if u * sign < 0.0 {
                    return None;
                }
                let mag = u.abs();
                if mag >= PI {
                    return None;
                }
                Some(mag / (PI - mag))
            }
        }
    }
}

fn normalize_angle(a: f64) -> f64 {
    let mut a = a % TAU;
    if a < 0.0 {
        a += TAU;
    }
    a
}
