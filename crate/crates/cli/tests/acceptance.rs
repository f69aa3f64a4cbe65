//! Acceptance suite: one test per criterion, every tolerance pinned in code.
//! Run with `cargo test -p strata-cli --test acceptance -- --nocapture` to see
//! one line per criterion.

use std::f64::consts::TAU;
use std::process::{Command, Output};
use std::time::Instant;

use strata_core::certificate::{generate_labeled_sequences, homeo_certificate};
use strata_core::compact::{total_boundedness_net, CachedDelta, CompactifiedSpace};
use strata_core::point::hausdorff;
use strata_core::*;

const CATALOG_SPACES: [&str; 3] = ["half-line", "line", "two-ray"];

fn compactified(name: &str) -> CompactifiedSpace {
    catalog::compactified(name).unwrap()
}

fn pass(line: &str) {
    println!("PASS {line}");
}

/// Untruncated evaluation over the listed exhaustion depth, the independent
/// route the spot values are checked against.
fn brute_clearance(cs: &CompactifiedSpace, x: &Point, depth: usize) -> f64 {
    let exh = cs.exhaustion();
    (1..=depth.min(exh.depth()))
        .map(|n| exh.radius(n) - exh.region(n).dist(cs.base(), x))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn brute_delta(cs: &CompactifiedSpace, x: &Point, y: &Point, depth: usize) -> f64 {
    let h = |p: &Point| {
        cs.base()
            .distance(p, cs.x0())
            .min(brute_clearance(cs, p, depth))
    };
    cs.base().distance(x, y).min(h(x) + h(y))
}

#[test]
fn criterion_01_compactified_metric_axioms() {
    for name in CATALOG_SPACES {
        let cs = compactified(name);
        let start = Instant::now();
        let samples = cs.base().sample(101, 1000);
        let cached = CachedDelta::new(&cs, &samples).unwrap();
        let report = check_metric_axioms(
            |a, b| cached.dist(a, b),
            &samples,
            1e-9,
            TriplePlan::Seeded {
                triples: 10_000,
                seed: 101,
            },
        )
        .unwrap();
        assert_eq!(report.triples_checked, 10_000);
        assert!(
            report.is_clean(),
            "{name}: {} violations, max slack {}",
            report.violations.len(),
            report.max_slack()
        );
        let elapsed = start.elapsed();
        assert!(elapsed.as_secs_f64() < 5.0, "{name} took {elapsed:?}");
    }
    pass(
        "criterion 1: compactified metric axioms on 10^4 seeded triples, three spaces, < 5 s each",
    );
}

#[test]
fn criterion_02_height_is_lipschitz() {
    for name in CATALOG_SPACES {
        let cs = compactified(name);
        let xs = cs.base().sample(202, 10_000);
        let ys = cs.base().sample(203, 10_000);
        for (x, y) in xs.iter().zip(&ys) {
            let hx = cs.height(x).unwrap();
            let hy = cs.height(y).unwrap();
            let d = cs.base().distance(x, y);
            assert!(
                (hx - hy).abs() <= d + 1e-12,
                "{name}: |h({x}) - h({y})| = {} > {d}",
                (hx - hy).abs()
            );
        }
    }
    pass("criterion 2: height 1-Lipschitz on 10^4 seeded pairs per space");
}

#[test]
fn criterion_03_anchored_exact_values() {
    for name in CATALOG_SPACES {
        let cs = compactified(name);
        assert_eq!(cs.clearance(cs.x0()).unwrap(), 1.0, "{name}: g(x0) != r1");
        assert_eq!(cs.height(cs.x0()).unwrap(), 0.0, "{name}: h(x0) != 0");
    }

    let cs = compactified("half-line");
    let p = Point::scalar;
    let checks = [
        (cs.clearance(&p(2.5)).unwrap(), 1.0 / 3.0, "g(2.5)"),
        (cs.height(&p(10.2)).unwrap(), 1.0 / 11.0, "h(10.2)"),
        (
            cs.dist(&p(2.5), &p(10.2)).unwrap(),
            14.0 / 33.0,
            "delta(2.5, 10.2)",
        ),
    ];
    for (got, want, what) in checks {
        assert!((got - want).abs() < 1e-9, "{what} = {got}, want {want}");
    }
    assert!((cs.clearance(&p(2.5)).unwrap() - brute_clearance(&cs, &p(2.5), 1000)).abs() < 1e-9);
    assert!(
        (cs.dist(&p(2.5), &p(10.2)).unwrap() - brute_delta(&cs, &p(2.5), &p(10.2), 1000)).abs()
            < 1e-9
    );
    for m in [2u32, 10, 100, 10_000] {
        let got = cs.dist(&p(m as f64), cs.x0()).unwrap();
        assert!((got - 1.0 / m as f64).abs() < 1e-9, "delta({m}, 0) = {got}");
        let brute = brute_delta(&cs, &p(m as f64), cs.x0(), 12_000);
        assert!((got - brute).abs() < 1e-9);
    }
    pass("criterion 3: anchored exact values match the brute-force oracle within 1e-9");
}

#[test]
fn criterion_04_total_boundedness() {
    for name in CATALOG_SPACES {
        let cs = compactified(name);
        let probes = cs.base().sample(404, 1000);
        let mut sizes = Vec::new();
        for eps in [0.5, 0.1, 0.02] {
            let net = total_boundedness_net(&cs, eps, &probes).unwrap();
            let mut all = probes.clone();
            all.extend(net.iter().cloned());
            let cached = CachedDelta::new(&cs, &all).unwrap();
            for probe in &probes {
                let best = net
                    .iter()
                    .map(|c| cached.dist(probe, c))
                    .fold(f64::INFINITY, f64::min);
                assert!(best < eps, "{name}: probe {probe} at {best} for eps {eps}");
            }
            sizes.push(net.len());
        }
        assert!(
            sizes[0] < sizes[1] && sizes[1] < sizes[2],
            "{name}: {sizes:?}"
        );
    }
    pass("criterion 4: finite nets cover 10^3 fresh probes at eps 0.5/0.1/0.02, sizes growing");
}

#[test]
fn criterion_05_escape_convergence() {
    let cs = compactified("half-line");
    let seq: Vec<Point> = (1..=10_000).map(|m| Point::scalar(m as f64)).collect();
    for (i, x) in seq.iter().enumerate() {
        let d = cs.dist(x, cs.x0()).unwrap();
        let want = 1.0 / (i + 1) as f64;
        assert!((d - want).abs() < 1e-12, "delta({}, x0) = {d}", i + 1);
    }
    let cached = CachedDelta::new(&cs, &seq).unwrap();
    assert_eq!(
        cauchy_classify(&seq, |a, b| cached.dist(a, b), 32, 1e-3).unwrap(),
        SequenceClass::Cauchy
    );
    assert_eq!(
        cauchy_classify(&seq, |a, b| cs.base().distance(a, b), 32, 1e-3).unwrap(),
        SequenceClass::Divergent
    );
    pass(
        "criterion 5: escape sequence is Cauchy under delta, divergent under d, delta(m, x0) = 1/m",
    );
}

fn default_opts() -> StratifyOptions {
    StratifyOptions {
        seed: 7,
        ..StratifyOptions::default()
    }
}

#[test]
fn criterion_06_discontinuity_sets() {
    let start = Instant::now();
    let opts = default_opts();

    let strat = stratify(&catalog::identity_map(), 4, &opts).unwrap();
    assert!(
        strat.y1_estimate().is_empty(),
        "identity must have empty Y1"
    );

    let strat = stratify(&catalog::lollipop(), 4, &opts).unwrap();
    let origin = Point::scalar(0.0);
    let glue = Point::new(vec![1.0, 0.0]).unwrap();
    assert!(!strat.levels[0].captured_x.is_empty());
    for x in &strat.levels[0].captured_x {
        assert!(x.euclid(&origin) <= 1e-2, "lollipop X1 stray {x}");
    }
    for y in &strat.levels[0].captured_y {
        assert!(y.euclid(&glue) <= 1e-2, "lollipop Y1 stray {y}");
    }

    let strat = stratify(&catalog::figure_eight(), 4, &opts).unwrap();
    let crossing = Point::new(vec![0.0, 0.0]).unwrap();
    assert!(!strat.levels[0].captured_y.is_empty());
    for y in &strat.levels[0].captured_y {
        assert!(y.euclid(&crossing) <= 1e-2, "figure-eight Y1 stray {y}");
    }

    let strat = stratify(&catalog::spiral_lollipop(), 4, &opts).unwrap();
    let circle: Vec<Point> = (0..2000)
        .map(|k| {
            let a = k as f64 * TAU / 2000.0;
            Point::new(vec![a.cos(), a.sin()]).unwrap()
        })
        .collect();
    let d = hausdorff(strat.y1_estimate(), &circle, |a, b| a.euclid(b));
    assert!(d <= 0.05, "spiral Y1 vs circle Hausdorff {d}");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    pass("criterion 6: discontinuity sets match analytic descriptions, < 10 s total");
}

#[test]
fn criterion_07_properness_consistency() {
    let opts = default_opts();
    for name in catalog::map_names() {
        let map = catalog::map(name).unwrap();
        let strat = stratify(&map, 5, &opts).unwrap();
        let report = consistency_check(&map, &strat, &opts, 99, 200).unwrap();
        assert_eq!(report.total, 200);
        assert_eq!(
            report.agreements, 200,
            "{name}: mismatches at {:?}",
            report.mismatches
        );
    }
    pass("criterion 7: properness probe agrees with the distance rule on 200 points per map");
}

#[test]
fn criterion_08_stratification_chain() {
    let opts = default_opts();
    let strat = stratify(&catalog::spiral_lollipop(), 6, &opts).unwrap();
    assert!(strat.terminated);
    assert_eq!(strat.levels.len(), 3, "exactly three nonempty levels");
    assert_eq!(strat.nonempty_levels(), 3);
    assert!(
        strat.levels[2].captured_y.is_empty(),
        "level past 2 must be empty"
    );

    let clusters = &strat.levels[1].next_clusters;
    assert_eq!(clusters.len(), 1, "terminal class is a single cluster");
    let glue = Point::new(vec![1.0, 0.0]).unwrap();
    assert!(clusters[0].rep.euclid(&glue) <= 1e-2);

    for level in &strat.levels {
        assert_eq!(
            level.z_samples.len() + level.captured_y.len(),
            level.y_samples.len(),
            "open part and captured class partition level {}",
            level.k
        );
    }
    for pair in strat.levels.windows(2) {
        assert_eq!(pair[1].y_samples.len(), pair[0].captured_y.len());
        for (a, b) in pair[1].y_samples.iter().zip(&pair[0].captured_y) {
            assert!(a.approx_eq(b), "descending chain broken");
        }
    }
    pass("criterion 8: spiral stratifies into three nonempty levels ending at the gluing image");
}

#[test]
fn criterion_09_stratum_metrics() {
    let opts = default_opts();
    let spiral = catalog::spiral_lollipop();
    let strat = stratify(&spiral, 5, &opts).unwrap();
    for k in [0usize, 1] {
        let sm = StratumMetric::from_stratification(&strat, k).unwrap();
        let z = &strat.levels[k].z_samples;
        let sample: Vec<Point> = z.iter().step_by(z.len() / 150 + 1).cloned().collect();
        let mut kappa = Vec::new();
        let mut pre = Vec::new();
        for y in &sample {
            kappa.push(sm.kappa(&spiral, y).unwrap());
            pre.push(spiral.inverse(y).unwrap());
        }
        let idx = |p: &Point| sample.iter().position(|q| q == p).unwrap();
        let report = check_metric_axioms(
            |a, b| {
                let (i, j) = (idx(a), idx(b));
                spiral.domain().distance(&pre[i], &pre[j]) + (kappa[i] - kappa[j]).abs()
            },
            &sample,
            1e-9,
            TriplePlan::Seeded {
                triples: 1000,
                seed: 909,
            },
        )
        .unwrap();
        assert_eq!(report.triples_checked, 1000);
        assert!(report.is_clean(), "level {k}: {:?}", report.violations);
    }

    // spot value with the analytic boundary
    let lollipop = catalog::lollipop();
    let sm = StratumMetric::new(0, vec![lollipop.domain().embed(0, 0.0)]);
    let y1 = lollipop.forward_param(0, 1.0).unwrap();
    let y2 = lollipop.forward_param(0, 2.0).unwrap();
    let v = sm.eval(&lollipop, &y1, &y2).unwrap();
    assert!((v - 1.5).abs() < 1e-9, "spot value {v}");

    // boundary-approaching sequences never classify as Cauchy
    let seq: Vec<Point> = (1..=1500)
        .map(|j| lollipop.forward_param(0, 1.0 / j as f64).unwrap())
        .collect();
    let class = cauchy_classify(&seq, |a, b| sm.eval(&lollipop, a, b).unwrap(), 16, 1e-2).unwrap();
    assert_ne!(class, SequenceClass::Cauchy);
    let kappa_far = sm.kappa(&lollipop, &seq[1200]).unwrap();
    assert!(
        kappa_far > 1e3,
        "reciprocal term must blow up, got {kappa_far}"
    );
    pass("criterion 9: stratum metrics clean on 10^3 triples, spot value 1.5, boundary blow-up");
}

#[test]
fn criterion_10_homeo_certificate() {
    let map = catalog::lollipop();
    let cs = compactified("half-line");
    let labeled = generate_labeled_sequences(map.domain(), 2024, 25, 160);
    let convergent = labeled.iter().filter(|l| l.expected_convergent).count();
    assert_eq!(convergent, 25);
    assert_eq!(labeled.len(), 50);
    let sequences: Vec<Vec<Point>> = labeled.iter().map(|l| l.points.clone()).collect();
    let report = homeo_certificate(&map, &cs, &sequences, 16, 1e-2).unwrap();
    assert_eq!(report.agreement, 1.0, "certificate agreement below 1");
    for (verdict, l) in report.per_sequence.iter().zip(&labeled) {
        assert_eq!(verdict.delta_converges, l.expected_convergent);
        assert_eq!(verdict.delta_converges, verdict.image_converges);
    }
    pass("criterion 10: 50 labeled sequences, delta and image classifications agree 100%");
}

fn strata(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strata"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_11_determinism_and_exit_codes() {
    let dir = std::env::temp_dir();
    let a = dir.join(format!("strata-acc-{}-a.json", std::process::id()));
    let b = dir.join(format!("strata-acc-{}-b.json", std::process::id()));
    for path in [&a, &b] {
        let out = strata(&[
            "report",
            "spiral-lollipop",
            "--seed",
            "5",
            "--samples",
            "300",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{out:?}");
    }
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        "identical config and seed must emit identical bytes"
    );
    std::fs::remove_file(&a).ok();
    std::fs::remove_file(&b).ok();

    assert_eq!(
        strata(&["verify", "two-ray", "--samples", "100"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        strata(&["verify", "broken-square", "--samples", "60"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        strata(&["verify", "half-line", "--samples", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(strata(&["verify", "absent"]).status.code(), Some(2));
    let blocked = dir.join(format!("strata-acc-{}-dir", std::process::id()));
    std::fs::create_dir_all(&blocked).unwrap();
    assert_eq!(
        strata(&[
            "verify",
            "half-line",
            "--samples",
            "60",
            "--out",
            blocked.to_str().unwrap()
        ])
        .status
        .code(),
        Some(3)
    );
    std::fs::remove_dir_all(&blocked).ok();
    pass("criterion 11: byte-identical reports and the 0/1/2/3 exit-code contract");
}
