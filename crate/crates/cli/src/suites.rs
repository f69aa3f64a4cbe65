use std::time::Instant;

use strata_core::certificate::{generate_labeled_sequences, homeo_certificate};
use strata_core::compact::{
    escape_convergence_check, total_boundedness_net, CachedDelta, CompactifiedSpace,
};
use strata_core::maps::{KnownSet, MapInstance};
use strata_core::space::SpaceDescriptor;
use strata_core::{
    catalog, check_metric_axioms, consistency_check, stratify, Point, Stratification,
    StratifyOptions, TriplePlan,
};

use crate::config::{compactify_target, parse_point, resolve, CliError, RunConfig, Target};
use crate::report::{fmt_sig, LevelRow, NetSizeRow, ProbeRow, RunReport, SuiteResult};

const LIPSCHITZ_SLACK: f64 = 1e-12;

fn run_err(e: impl std::fmt::Display) -> CliError {
    CliError::Run(e.to_string())
}

/// The `verify` command: metric-axiom, Lipschitz, domination, net-coverage
/// and escape-convergence suites over a space target.
pub fn run_verify(config: &RunConfig) -> Result<RunReport, CliError> {
    let mut report = RunReport::new(config);
    match resolve(&config.target)? {
        Target::Map(map) => {
            return Err(CliError::Config(format!(
                "`{}` is a map; use `stratify` or `report`",
                map.name()
            )))
        }
        Target::Space(space) => {
            if space_is_oracle_fixture(&space) {
                axiom_suite_raw(&space, config, &mut report)?;
            } else {
                let cspace = compactify_target(&config.target)?;
                verify_suites(&cspace, config, &mut report)?;
            }
        }
    }
    Ok(report)
}

fn space_is_oracle_fixture(space: &SpaceDescriptor) -> bool {
    space.name() == "broken-square"
}

/// Axiom sweep over the raw distance oracle of a space (the counterexample
/// fixture path).
fn axiom_suite_raw(
    space: &SpaceDescriptor,
    config: &RunConfig,
    report: &mut RunReport,
) -> Result<(), CliError> {
    let t0 = Instant::now();
    let samples = space.sample(config.seed, config.samples);
    let axioms = check_metric_axioms(
        |a, b| space.distance(a, b),
        &samples,
        config.tolerance,
        TriplePlan::Seeded {
            triples: 10 * config.samples,
            seed: config.seed ^ 1,
        },
    )
    .map_err(run_err)?;
    for v in axioms.violations.iter().take(5) {
        eprintln!(
            "  {} violation, slack {}: {}",
            v.axiom,
            fmt_sig(v.slack),
            v.points
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        );
    }
    report.push_suite(
        SuiteResult::new(
            "metric-axioms",
            axioms.pairs_checked + axioms.triples_checked,
            axioms.violations.len(),
            axioms.max_slack(),
        )
        .with_wall(t0.elapsed().as_millis() as u64),
    );
    Ok(())
}

fn verify_suites(
    cspace: &CompactifiedSpace,
    config: &RunConfig,
    report: &mut RunReport,
) -> Result<(), CliError> {
    let space = cspace.base();
    let samples = space.sample(config.seed, config.samples);
    let cached = CachedDelta::new(cspace, &samples).map_err(run_err)?;

    // metric axioms of the compactified distance
    let t0 = Instant::now();
    let axioms = check_metric_axioms(
        |a, b| cached.dist(a, b),
        &samples,
        config.tolerance,
        TriplePlan::Seeded {
            triples: 10 * config.samples,
            seed: config.seed ^ 1,
        },
    )
    .map_err(run_err)?;
    report.push_suite(
        SuiteResult::new(
            "metric-axioms",
            axioms.pairs_checked + axioms.triples_checked,
            axioms.violations.len(),
            axioms.max_slack(),
        )
        .with_wall(t0.elapsed().as_millis() as u64),
    );

    // 1-Lipschitz height
    let t0 = Instant::now();
    let mut heights = Vec::with_capacity(samples.len());
    for x in &samples {
        heights.push(cspace.height(x).map_err(run_err)?);
    }
    let mut checked = 0usize;
    let mut violations = 0usize;
    let mut max_slack = 0.0f64;
    for i in 0..samples.len() {
        for j in (i + 1)..samples.len() {
            checked += 1;
            let defect = (heights[i] - heights[j]).abs() - space.distance(&samples[i], &samples[j]);
            if defect > LIPSCHITZ_SLACK {
                violations += 1;
                max_slack = max_slack.max(defect);
            }
        }
    }
    report.push_suite(
        SuiteResult::new("lipschitz", checked, violations, max_slack)
            .with_wall(t0.elapsed().as_millis() as u64),
    );

    // domination by the base distance, collapse at the base point, height and
    // clearance bounds
    let t0 = Instant::now();
    let mut checked = 0usize;
    let mut violations = 0usize;
    let mut max_slack = 0.0f64;
    let r1 = cspace.exhaustion().radius(1);
    for (i, x) in samples.iter().enumerate() {
        checked += 3;
        let g = cspace.clearance(x).map_err(run_err)?;
        if g <= 0.0 {
            violations += 1;
        }
        if heights[i] > r1 + LIPSCHITZ_SLACK {
            violations += 1;
            max_slack = max_slack.max(heights[i] - r1);
        }
        let d_base = cached.dist(x, cspace.x0());
        if d_base != cspace.height(x).map_err(run_err)? {
            violations += 1;
        }
        for y in samples.iter().skip(i + 1).step_by(7) {
            checked += 1;
            let defect = cached.dist(x, y) - space.distance(x, y);
            if defect > LIPSCHITZ_SLACK {
                violations += 1;
                max_slack = max_slack.max(defect);
            }
        }
    }
    report.push_suite(
        SuiteResult::new("domination", checked, violations, max_slack)
            .with_wall(t0.elapsed().as_millis() as u64),
    );

    // finite nets at every requested scale
    for &eps in &config.epsilon_list {
        let t0 = Instant::now();
        let probes = space.sample(config.seed ^ 2, config.samples);
        let net = total_boundedness_net(cspace, eps, &probes).map_err(run_err)?;
        let mut all = probes.clone();
        all.extend(net.iter().cloned());
        let net_cached = CachedDelta::new(cspace, &all).map_err(run_err)?;
        let mut violations = 0usize;
        let mut max_slack = 0.0f64;
        for p in &probes {
            let best = net
                .iter()
                .map(|c| net_cached.dist(p, c))
                .fold(f64::INFINITY, f64::min);
            if best >= eps {
                violations += 1;
                max_slack = max_slack.max(best - eps);
            }
        }
        report.net_sizes.push(NetSizeRow {
            epsilon: eps,
            size: net.len(),
        });
        report.push_suite(
            SuiteResult::new(
                format!("net-coverage@{eps}"),
                probes.len(),
                violations,
                max_slack,
            )
            .with_wall(t0.elapsed().as_millis() as u64),
        );
    }

    // escaping sequences collapse onto the base point
    let t0 = Instant::now();
    let seq: Vec<Point> = (1..=2000).map(|m| space.embed(0, m as f64)).collect();
    let escape = escape_convergence_check(cspace, &seq, 1e-3).map_err(run_err)?;
    let mut violations = if escape.converges_to_x0 { 0 } else { 1 };
    let mut max_slack = 0.0f64;
    for (&h, &d) in escape.h_values.iter().zip(&escape.delta_to_x0) {
        // distance to the base point collapses onto the height exactly
        let defect = (d - h).abs();
        if defect > 0.0 {
            violations += 1;
            max_slack = max_slack.max(defect);
        }
    }
    report.push_suite(
        SuiteResult::new("escape-convergence", seq.len(), violations, max_slack)
            .with_wall(t0.elapsed().as_millis() as u64),
    );
    Ok(())
}

/// The `compactify` command: validate the exhaustion and print clearance,
/// height and base distance for the supplied probe points.
pub fn run_compactify(config: &RunConfig, points: &[String]) -> Result<RunReport, CliError> {
    let cspace = compactify_target(&config.target)?;
    let mut report = RunReport::new(config);

    let t0 = Instant::now();
    let validation =
        strata_core::validate_exhaustion(cspace.exhaustion(), cspace.base()).map_err(run_err)?;
    report.push_suite(
        SuiteResult::new(
            "exhaustion-valid",
            cspace.exhaustion().depth(),
            validation.violations.len(),
            0.0,
        )
        .with_wall(t0.elapsed().as_millis() as u64),
    );
    for v in &validation.violations {
        eprintln!("  exhaustion violation: {v:?}");
    }

    for text in points {
        let p = parse_point(text)?;
        let clearance = cspace.clearance(&p).map_err(run_err)?;
        let height = cspace.height(&p).map_err(run_err)?;
        let delta = cspace.dist(&p, cspace.x0()).map_err(run_err)?;
        println!(
            "point {text}: g={} h={} delta_to_base={}",
            fmt_sig(clearance),
            fmt_sig(height),
            fmt_sig(delta)
        );
        report.probes.push(ProbeRow {
            point: text.clone(),
            clearance,
            height,
            delta_to_base: delta,
        });
    }
    if points.len() > 1 {
        let pts: Vec<Point> = points
            .iter()
            .map(|t| parse_point(t))
            .collect::<Result<_, _>>()?;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let d = cspace.dist(&pts[i], &pts[j]).map_err(run_err)?;
                println!("delta({}, {}) = {}", points[i], points[j], fmt_sig(d));
            }
        }
    }
    Ok(report)
}

fn stratify_options(config: &RunConfig) -> StratifyOptions {
    StratifyOptions {
        match_tol: config.tolerance,
        samples: config.samples,
        seed: config.seed,
        ..StratifyOptions::default()
    }
}

/// The `stratify` command: level table plus the properness/distance-rule
/// cross-check.
pub fn run_stratify(config: &RunConfig) -> Result<RunReport, CliError> {
    let map = match resolve(&config.target)? {
        Target::Map(map) => map,
        Target::Space(space) => {
            return Err(CliError::Config(format!(
                "`{}` is a space; `stratify` needs a map",
                space.name()
            )))
        }
    };
    let mut report = RunReport::new(config);
    stratify_suites(&map, config, &mut report)?;
    Ok(report)
}

fn stratify_suites(
    map: &MapInstance,
    config: &RunConfig,
    report: &mut RunReport,
) -> Result<Stratification, CliError> {
    let opts = stratify_options(config);
    let t0 = Instant::now();
    let strat = stratify(map, config.depth, &opts).map_err(run_err)?;
    let strat_ms = t0.elapsed().as_millis() as u64;

    let mut invariant_violations = 0usize;
    for level in &strat.levels {
        if level.z_samples.len() + level.captured_y.len() != level.y_samples.len() {
            invariant_violations += 1;
        }
    }
    for pair in strat.levels.windows(2) {
        if pair[1].y_samples.len() != pair[0].captured_y.len() {
            invariant_violations += 1;
        }
    }
    let total_samples: usize = strat.levels.iter().map(|l| l.y_samples.len()).sum();
    report.push_suite(
        SuiteResult::new("stratification", total_samples, invariant_violations, 0.0)
            .with_wall(strat_ms),
    );

    for level in &strat.levels {
        println!(
            "level {}: samples={} open={} captured={} clusters={}",
            level.k,
            level.y_samples.len(),
            level.z_samples.len(),
            level.captured_y.len(),
            level.next_clusters.len()
        );
        report.levels.push(LevelRow {
            level: level.k,
            samples: level.y_samples.len(),
            open_samples: level.z_samples.len(),
            captured: level.captured_y.len(),
            clusters: level
                .next_clusters
                .iter()
                .map(|c| c.rep.coords().to_vec())
                .collect(),
        });
    }
    report.terminated = Some(strat.terminated);

    let t0 = Instant::now();
    let consistency =
        consistency_check(map, &strat, &opts, config.seed ^ 3, 200).map_err(run_err)?;
    report.consistency_agreement = Some(consistency.agreement_fraction());
    report.push_suite(
        SuiteResult::new(
            "properness-consistency",
            consistency.total,
            consistency.total - consistency.agreements,
            0.0,
        )
        .with_wall(t0.elapsed().as_millis() as u64),
    );
    Ok(strat)
}

/// The `report` command: the full battery for a map (domain verification,
/// bijection sanity, stratification, certificate when applicable) or the
/// verification suites for a space.
pub fn run_report(config: &RunConfig) -> Result<RunReport, CliError> {
    match resolve(&config.target)? {
        Target::Space(_) => run_verify(config),
        Target::Map(map) => {
            let mut report = RunReport::new(config);

            // bijection sanity of the catalog evaluators
            let t0 = Instant::now();
            let samples = map.domain().sample(config.seed, config.samples);
            let mut violations = 0usize;
            let mut max_slack = 0.0f64;
            for x in &samples {
                let y = map.forward(x).map_err(run_err)?;
                let back = map.inverse(&y).map_err(run_err)?;
                let defect = map.domain().distance(x, &back);
                if defect > 1e-9 {
                    violations += 1;
                    max_slack = max_slack.max(defect);
                }
            }
            report.push_suite(
                SuiteResult::new("bijection-sanity", samples.len(), violations, max_slack)
                    .with_wall(t0.elapsed().as_millis() as u64),
            );

            stratify_suites(&map, config, &mut report)?;

            if let Some(KnownSet::BranchOrigin { .. }) = map.known_x1() {
                let t0 = Instant::now();
                let cspace = catalog::compactified(map.domain().name())
                    .map_err(|e| CliError::Config(e.to_string()))?;
                let labeled = generate_labeled_sequences(map.domain(), config.seed ^ 4, 25, 160);
                let sequences: Vec<Vec<Point>> = labeled.iter().map(|l| l.points.clone()).collect();
                let cert =
                    homeo_certificate(&map, &cspace, &sequences, 16, 1e-2).map_err(run_err)?;
                let mismatched = cert
                    .per_sequence
                    .iter()
                    .filter(|v| v.delta_converges != v.image_converges)
                    .count();
                report.certificate_agreement = Some(cert.agreement);
                report.push_suite(
                    SuiteResult::new("homeo-certificate", sequences.len(), mismatched, 0.0)
                        .with_wall(t0.elapsed().as_millis() as u64),
                );
            }
            Ok(report)
        }
    }
}
