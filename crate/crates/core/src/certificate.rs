//! Homeomorphism certificate: when the discontinuity class is a single point
//! glued to the escape end, convergence in the compactified metric must agree
//! with convergence of the image sequence in the codomain.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::compact::{CachedDelta, CompactifiedSpace};
use crate::maps::{KnownSet, MapInstance};
use crate::point::Point;
use crate::sequence::{cauchy_classify, SequenceClass};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct SequenceVerdict {
    pub delta_class: SequenceClass,
    pub image_class: SequenceClass,
    pub delta_converges: bool,
    pub image_converges: bool,
}

#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub per_sequence: Vec<SequenceVerdict>,
    pub agreement: f64,
}

/// Classifies each test sequence under the compactified metric and its image
/// sequence under the ambient codomain distance, and reports how often the
/// two verdicts agree. Requires a map whose discontinuity class is known to
/// be the single branch origin the compactification is anchored at.
pub fn homeo_certificate(
    map: &MapInstance,
    cspace: &CompactifiedSpace,
    test_sequences: &[Vec<Point>],
    window: usize,
    tol: f64,
) -> Result<CertificateReport> {
    match map.known_x1() {
        Some(KnownSet::BranchOrigin { branch }) => {
            let origin = map.domain().embed(branch, 0.0);
            if !origin.approx_eq(cspace.x0()) {
                return Err(Error::Scope(
                    "compactification must be anchored at the discontinuity point".into(),
                ));
            }
        }
        _ => {
            return Err(Error::Scope(format!(
                "`{}` does not have a singleton discontinuity class",
                map.name()
            )));
        }
    }

    let mut per_sequence = Vec::with_capacity(test_sequences.len());
    let mut agreements = 0usize;
    for seq in test_sequences {
        let cached = CachedDelta::new(cspace, seq)?;
        let delta_class = cauchy_classify(seq, |a, b| cached.dist(a, b), window, tol)?;
        let mut images = Vec::with_capacity(seq.len());
        for x in seq {
            images.push(map.forward(x)?);
        }
        let image_class = cauchy_classify(&images, |a, b| a.euclid(b), window, tol)?;
        let verdict = SequenceVerdict {
            delta_class,
            image_class,
            delta_converges: delta_class == SequenceClass::Cauchy,
            image_converges: image_class == SequenceClass::Cauchy,
        };
        if verdict.delta_converges == verdict.image_converges {
            agreements += 1;
        }
        per_sequence.push(verdict);
    }
    let agreement = if per_sequence.is_empty() {
        1.0
    } else {
        agreements as f64 / per_sequence.len() as f64
    };
    Ok(CertificateReport {
        per_sequence,
        agreement,
    })
}

/// A generated test sequence with its analytic convergence label.
#[derive(Debug, Clone)]
pub struct LabeledSequence {
    pub points: Vec<Point>,
    pub expected_convergent: bool,
}

/// Builds `n_each` convergent and `n_each` non-convergent sequences on branch
/// 0 of a ray space. Convergent kinds: constant, approach to a fixed
/// parameter, geometric escape (which converges in the compactified metric).
/// Non-convergent kinds: two-point alternators and fixed-versus-escape
/// alternators, with parameters separated far beyond the classifier
/// tolerance.
pub fn generate_labeled_sequences(
    space: &crate::space::SpaceDescriptor,
    seed: u64,
    n_each: usize,
    length: usize,
) -> Vec<LabeledSequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(2 * n_each);
    let escape_growth = |len: usize| (8000.0f64 / 0.5).powf(1.0 / len as f64);

    for j in 0..n_each {
        let t_star = rng.gen_range(0.5..10.0);
        let points = match j % 3 {
            0 => (0..length).map(|_| space.embed(0, t_star)).collect(),
            1 => (0..length)
                .map(|i| space.embed(0, t_star + 1.0 / (i + 1) as f64))
                .collect(),
            _ => {
                let g = escape_growth(length);
                (0..length)
                    .map(|i| space.embed(0, 0.5 * g.powi(i as i32)))
                    .collect()
            }
        };
        out.push(LabeledSequence {
            points,
            expected_convergent: true,
        });
    }

    for j in 0..n_each {
        let t_star = rng.gen_range(0.5..10.0);
        let delta = rng.gen_range(1.0..3.0);
        let points = match j % 2 {
            0 => (0..length)
                .map(|i| {
                    let t = if i % 2 == 0 { t_star } else { t_star + delta };
                    space.embed(0, t)
                })
                .collect(),
            _ => {
                let g = escape_growth(length);
                (0..length)
                    .map(|i| {
                        if i % 2 == 0 {
                            space.embed(0, t_star)
                        } else {
                            space.embed(0, 0.5 * g.powi(i as i32))
                        }
                    })
                    .collect()
            }
        };
        out.push(LabeledSequence {
            points,
            expected_convergent: false,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn escape_and_approach_sequences_agree() {
        let map = catalog::lollipop();
        let cs = catalog::compactified("half-line").unwrap();
        let escape: Vec<Point> = (1..=400).map(|m| Point::scalar(m as f64 * 2.0)).collect();
        let approach: Vec<Point> = (1..=400)
            .map(|m| Point::scalar(3.0 + 1.0 / m as f64))
            .collect();
        let report = homeo_certificate(&map, &cs, &[escape, approach], 16, 1e-2).unwrap();
        assert_eq!(report.agreement, 1.0);
        assert!(report.per_sequence[0].delta_converges);
        assert!(report.per_sequence[0].image_converges);
        assert!(report.per_sequence[1].delta_converges);
    }

    #[test]
    fn non_singleton_class_is_out_of_scope() {
        let map = catalog::spiral_lollipop();
        let cs = catalog::compactified("two-ray").unwrap();
        let seq: Vec<Point> = (1..=100)
            .map(|m| catalog::two_ray().embed(0, m as f64))
            .collect();
        assert!(matches!(
            homeo_certificate(&map, &cs, &[seq], 8, 1e-2),
            Err(Error::Scope(_))
        ));
    }

    #[test]
    fn generated_labels_are_deterministic() {
        let space = catalog::half_line();
        let a = generate_labeled_sequences(&space, 42, 5, 64);
        let b = generate_labeled_sequences(&space, 42, 5, 64);
        assert_eq!(a.len(), 10);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.expected_convergent, y.expected_convergent);
            assert_eq!(x.points.len(), y.points.len());
            for (p, q) in x.points.iter().zip(&y.points) {
                assert!(p.approx_eq(q));
            }
        }
    }
}
