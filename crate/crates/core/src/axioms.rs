use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::point::Point;
use crate::{Error, Result};

/// Which metric axiom a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    NonNegativity,
    Identity,
    Symmetry,
    Triangle,
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Axiom::NonNegativity => "non-negativity",
            Axiom::Identity => "identity",
            Axiom::Symmetry => "symmetry",
            Axiom::Triangle => "triangle",
        };
        f.write_str(s)
    }
}

/// One recorded axiom violation: the offending points, the axiom, and by how
/// much the defect exceeded zero.
#[derive(Debug, Clone)]
pub struct Violation {
    pub points: Vec<Point>,
    pub axiom: Axiom,
    pub slack: f64,
}

/// Outcome of an axiom sweep over a sample.
#[derive(Debug, Clone, Default)]
pub struct AxiomReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    /// Largest recorded defect; zero when the sweep was clean.
    pub fn max_slack(&self) -> f64 {
        self.violations.iter().map(|v| v.slack).fold(0.0, f64::max)
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// How triangle triples are enumerated. Pairwise checks are always
/// exhaustive; the cubic triple sweep is either exhaustive (small samples) or
/// a seeded draw of `(pair, witness)` combinations.
#[derive(Debug, Clone, Copy)]
pub enum TriplePlan {
    Exhaustive,
    Seeded { triples: usize, seed: u64 },
}

/// Sweeps non-negativity, identity and symmetry over all sample pairs and the
/// triangle inequality over triples according to `plan`. A defect beyond
/// `tolerance` is recorded; a non-finite or negative oracle value aborts with
/// the partial report attached.
pub fn check_metric_axioms(
    distance: impl Fn(&Point, &Point) -> f64,
    samples: &[Point],
    tolerance: f64,
    plan: TriplePlan,
) -> Result<AxiomReport> {
    if samples.is_empty() {
        return Err(Error::Parameter("empty sample set".into()));
    }
    if tolerance < 0.0 {
        return Err(Error::Parameter("tolerance must be nonnegative".into()));
    }

    let mut report = AxiomReport::default();
    let n = samples.len();

    for (i, x) in samples.iter().enumerate() {
        let dxx = distance(x, x);
        guard(dxx, &report, || format!("d(x, x) at sample {i}"))?;
        if dxx.abs() > tolerance {
            report.violations.push(Violation {
                points: vec![x.clone()],
                axiom: Axiom::Identity,
                slack: dxx.abs(),
            });
        }
    }

    for i in 0..n {
        for j in (i + 1)..n {
            let dij = distance(&samples[i], &samples[j]);
            let dji = distance(&samples[j], &samples[i]);
            guard(dij, &report, || format!("d at pair ({i}, {j})"))?;
            guard(dji, &report, || format!("d at pair ({j}, {i})"))?;
            report.pairs_checked += 1;
            if dij < -tolerance {
                report.violations.push(Violation {
                    points: vec![samples[i].clone(), samples[j].clone()],
                    axiom: Axiom::NonNegativity,
                    slack: -dij,
                });
            }
            let asym = (dij - dji).abs();
            if asym > tolerance {
                report.violations.push(Violation {
                    points: vec![samples[i].clone(), samples[j].clone()],
                    axiom: Axiom::Symmetry,
                    slack: asym,
                });
            }
        }
    }

    let check_triple = |report: &mut AxiomReport, i: usize, j: usize, k: usize| {
        let defect = distance(&samples[i], &samples[j])
            - distance(&samples[i], &samples[k])
            - distance(&samples[k], &samples[j]);
        report.triples_checked += 1;
        if defect > tolerance {
            report.violations.push(Violation {
                points: vec![samples[i].clone(), samples[j].clone(), samples[k].clone()],
                axiom: Axiom::Triangle,
                slack: defect,
            });
        }
    };

    match plan {
        TriplePlan::Exhaustive => {
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in 0..n {
                        if k != i && k != j {
                            check_triple(&mut report, i, j, k);
                        }
                    }
                }
            }
        }
        TriplePlan::Seeded { triples, seed } => {
            if n >= 3 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut drawn = 0;
                while drawn < triples {
                    let i = rng.gen_range(0..n);
                    let j = rng.gen_range(0..n);
                    let k = rng.gen_range(0..n);
                    if i == j || j == k || i == k {
                        continue;
                    }
                    check_triple(&mut report, i, j, k);
                    drawn += 1;
                }
            }
        }
    }

    Ok(report)
}

fn guard(value: f64, partial: &AxiomReport, what: impl Fn() -> String) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::Oracle {
            detail: format!("{} returned {value}", what()),
            report: Box::new(partial.clone()),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(xs: &[f64]) -> Vec<Point> {
        xs.iter().map(|&x| Point::scalar(x)).collect()
    }

    #[test]
    fn euclid_is_clean() {
        let samples = pts(&[0.0, 1.0, 2.0, 3.0]);
        let report =
            check_metric_axioms(|a, b| a.euclid(b), &samples, 1e-9, TriplePlan::Exhaustive)
                .unwrap();
        assert!(report.is_clean());
        assert_eq!(report.max_slack(), 0.0);
        assert_eq!(report.pairs_checked, 6);
    }

    #[test]
    fn squared_difference_breaks_triangle_once() {
        let samples = pts(&[0.0, 1.0, 2.0]);
        let report = check_metric_axioms(
            |a, b| {
                let d = a.euclid(b);
                d * d
            },
            &samples,
            1e-9,
            TriplePlan::Exhaustive,
        )
        .unwrap();
        let triangles: Vec<_> = report
            .violations
            .iter()
            .filter(|v| v.axiom == Axiom::Triangle)
            .collect();
        // d(0,2) = 4 > d(0,1) + d(1,2) = 2, slack 2.
        assert_eq!(triangles.len(), 1);
        assert!((triangles[0].slack - 2.0).abs() < 1e-12);
        assert_eq!(report.triples_checked, 3);
    }

    #[test]
    fn nan_oracle_aborts_with_partial_report() {
        let samples = pts(&[0.0, 1.0]);
        let err = check_metric_axioms(
            |a, b| {
                if a.coords()[0] == 1.0 && b.coords()[0] == 0.0 {
                    f64::NAN
                } else {
                    a.euclid(b)
                }
            },
            &samples,
            1e-9,
            TriplePlan::Exhaustive,
        )
        .unwrap_err();
        match err {
            Error::Oracle { report, .. } => assert_eq!(report.violations.len(), 0),
            other => panic!("expected oracle error, got {other:?}"),
        }
    }

    #[test]
    fn seeded_plan_is_deterministic() {
        let samples = pts(&[0.0, 0.5, 1.5, 4.0, 9.0]);
        let run = || {
            check_metric_axioms(
                |a, b| a.euclid(b),
                &samples,
                1e-9,
                TriplePlan::Seeded {
                    triples: 50,
                    seed: 11,
                },
            )
            .unwrap()
        };
        let (a, b) = (run(), run());
        assert_eq!(a.triples_checked, b.triples_checked);
        assert_eq!(a.triples_checked, 50);
    }
}
