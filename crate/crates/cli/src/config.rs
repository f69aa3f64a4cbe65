use std::path::{Path, PathBuf};

use serde::Deserialize;
use strata_core::compact::CompactifiedSpace;
use strata_core::curve::CurveForm;
use strata_core::exhaustion::Exhaustion;
use strata_core::maps::MapInstance;
use strata_core::region::Region;
use strata_core::space::{Ray, SpaceDescriptor};
use strata_core::{catalog, Point};

/// Errors that map onto process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or unknown identifier: exit 2.
    Config(String),
    /// Invariant violation or runtime failure: exit 1.
    Run(String),
    /// Unwritable output: exit 3.
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Run(m) => write!(f, "run failed: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Run(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Resolved invocation: which command on which target with which knobs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: String,
    pub target: String,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    pub epsilon_list: Vec<f64>,
    pub depth: usize,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    // `!(x > 0.0)` rejects NaN flags as well
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<(), CliError> {
        if self.samples < 10 {
            return Err(CliError::Config(format!(
                "samples must be at least 10, got {}",
                self.samples
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(CliError::Config("tolerance must be positive".into()));
        }
        if self.depth < 1 {
            return Err(CliError::Config("depth must be at least 1".into()));
        }
        if self.epsilon_list.iter().any(|e| !(*e > 0.0)) {
            return Err(CliError::Config("epsilons must be positive".into()));
        }
        Ok(())
    }
}

/// What an identifier resolves to.
pub enum Target {
    Space(SpaceDescriptor),
    Map(MapInstance),
}

/// Resolves a catalog name or a JSON descriptor path. Maps take priority on
/// name collisions (there are none in the catalog).
pub fn resolve(target: &str) -> Result<Target, CliError> {
    if target.ends_with(".json") || Path::new(target).is_file() {
        return load_descriptor(Path::new(target));
    }
    if let Ok(map) = catalog::map(target) {
        return Ok(Target::Map(map));
    }
    if let Ok(space) = catalog::space(target) {
        return Ok(Target::Space(space));
    }
    Err(CliError::Config(format!(
        "unknown identifier `{target}`; catalog spaces: {}; catalog maps: {}",
        catalog::space_names().join(", "),
        catalog::map_names().join(", ")
    )))
}

/// Compactification of a space target with its declared base point and
/// exhaustion: catalog spaces use the catalog defaults, descriptor files must
/// declare theirs.
pub fn compactify_target(target: &str) -> Result<CompactifiedSpace, CliError> {
    if target.ends_with(".json") || Path::new(target).is_file() {
        return build_compactified(Path::new(target));
    }
    match resolve(target)? {
        Target::Space(space) => {
            catalog::compactified(space.name()).map_err(|e| CliError::Config(e.to_string()))
        }
        Target::Map(map) => Err(CliError::Config(format!(
            "`{}` is a map; compactify its domain space instead",
            map.name()
        ))),
    }
}

// ---------------------------------------------------------------------------
// JSON descriptor schema
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
struct BranchSpec {
    form: String,
    coefficients: Vec<f64>,
}

#[derive(Debug, Deserialize)]
struct ExhaustionSpec {
    intervals: String,
    radii: String,
    n_max: usize,
}

#[derive(Debug, Deserialize)]
struct SpaceSpec {
    space: String,
    x0: Vec<f64>,
    branches: Vec<BranchSpec>,
    exhaustion: Option<ExhaustionSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum DomainSpec {
    Name(String),
    Inline(SpaceSpec),
}

#[derive(Debug, Deserialize)]
struct MapSpec {
    map: String,
    domain: DomainSpec,
    codomain_dim: usize,
    curves: Vec<BranchSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum DescriptorSpec {
    Map(MapSpec),
    Space(SpaceSpec),
}

fn load_descriptor(path: &Path) -> Result<Target, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let spec: DescriptorSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("bad descriptor {}: {e}", path.display())))?;
    match spec {
        DescriptorSpec::Space(s) => Ok(Target::Space(build_space(&s)?)),
        DescriptorSpec::Map(m) => Ok(Target::Map(build_map(&m)?)),
    }
}

fn build_space(spec: &SpaceSpec) -> Result<SpaceDescriptor, CliError> {
    let dim = spec.x0.len();
    if dim == 0 {
        return Err(CliError::Config("x0 must have coordinates".into()));
    }
    let mut rays = Vec::new();
    for b in &spec.branches {
        if b.form != "affine" {
            return Err(CliError::Config(format!(
                "space branches must be affine rays, got `{}`",
                b.form
            )));
        }
        if b.coefficients.len() != 2 * dim {
            return Err(CliError::Config(format!(
                "affine branch needs {} coefficients (origin then direction)",
                2 * dim
            )));
        }
        let (origin, direction) = b.coefficients.split_at(dim);
        rays.push(
            Ray::new(origin.to_vec(), direction.to_vec())
                .map_err(|e| CliError::Config(e.to_string()))?,
        );
    }
    SpaceDescriptor::new(spec.space.clone(), dim, rays).map_err(|e| CliError::Config(e.to_string()))
}

/// Builds the declared exhaustion and base point of a descriptor space.
pub fn build_compactified(path: &Path) -> Result<CompactifiedSpace, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let spec: SpaceSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("bad space descriptor: {e}")))?;
    let space = build_space(&spec)?;
    let exh_spec = spec
        .exhaustion
        .as_ref()
        .ok_or_else(|| CliError::Config("descriptor lacks an exhaustion".into()))?;
    let exh = build_exhaustion(&space, exh_spec)?;
    let x0 = Point::new(spec.x0.clone()).map_err(|e| CliError::Config(e.to_string()))?;
    CompactifiedSpace::new(space, x0, exh).map_err(|e| CliError::Config(e.to_string()))
}

fn build_exhaustion(
    space: &SpaceDescriptor,
    spec: &ExhaustionSpec,
) -> Result<Exhaustion, CliError> {
    if spec.intervals != "[0,n]" {
        return Err(CliError::Config(format!(
            "unsupported interval form `{}` (supported: \"[0,n]\")",
            spec.intervals
        )));
    }
    if spec.n_max < 2 {
        return Err(CliError::Config("n_max must be at least 2".into()));
    }
    let radius = |n: usize| -> Result<f64, CliError> {
        match spec.radii.as_str() {
            "1/n" => Ok(1.0 / n as f64),
            "1/n^2" => Ok(1.0 / (n * n) as f64),
            "2^-n" => Ok(0.5f64.powi(n as i32)),
            other => Err(CliError::Config(format!(
                "unsupported radius form `{other}` (supported: \"1/n\", \"1/n^2\", \"2^-n\")"
            ))),
        }
    };
    let branches = space.branches().len();
    let mut regions = Vec::with_capacity(spec.n_max);
    let mut radii = Vec::with_capacity(spec.n_max);
    for n in 1..=spec.n_max {
        regions.push(Region::RaySegments {
            intervals: vec![(0.0, n as f64); branches],
        });
        radii.push(radius(n)?);
    }
    Exhaustion::new(regions, radii).map_err(|e| CliError::Config(e.to_string()))
}

fn build_map(spec: &MapSpec) -> Result<MapInstance, CliError> {
    let domain = match &spec.domain {
        DomainSpec::Name(name) => {
            catalog::space(name).map_err(|e| CliError::Config(e.to_string()))?
        }
        DomainSpec::Inline(s) => build_space(s)?,
    };
    let mut curves = Vec::new();
    for c in &spec.curves {
        curves.push(build_curve(c, spec.codomain_dim)?);
    }
    MapInstance::new(spec.map.clone(), domain, spec.codomain_dim, curves, None)
        .map_err(|e| CliError::Config(e.to_string()))
}

fn build_curve(spec: &BranchSpec, codim: usize) -> Result<CurveForm, CliError> {
    let c = &spec.coefficients;
    let need = |n: usize| -> Result<(), CliError> {
        if c.len() != n {
            Err(CliError::Config(format!(
                "curve form `{}` needs {n} coefficients, got {}",
                spec.form,
                c.len()
            )))
        } else {
            Ok(())
        }
    };
    let curve = match spec.form.as_str() {
        "affine" => {
            need(2 * codim)?;
            let (origin, direction) = c.split_at(codim);
            CurveForm::Affine {
                origin: origin.to_vec(),
                direction: direction.to_vec(),
            }
        }
        "circle" => {
            need(4)?;
            CurveForm::Circle {
                center: [c[0], c[1]],
                radius: c[2],
                turns: c[3],
            }
        }
        "spiral" => {
            need(6)?;
            CurveForm::Spiral {
                center: [c[0], c[1]],
                base_radius: c[2],
                amplitude: c[3],
                decay: c[4],
                turns_per_unit: c[5],
            }
        }
        "eight" => {
            need(2)?;
            CurveForm::EightLobe {
                scale: c[0],
                sign: c[1],
            }
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown curve form `{other}` (supported: affine, circle, spiral, eight)"
            )))
        }
    };
    curve
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(curve)
}

/// Parses a probe point given as comma-separated coordinates with an optional
/// `@branch` suffix.
pub fn parse_point(text: &str) -> Result<Point, CliError> {
    let (coords_text, branch) = match text.split_once('@') {
        Some((c, b)) => {
            let branch: usize = b
                .parse()
                .map_err(|_| CliError::Config(format!("bad branch tag in `{text}`")))?;
            (c, Some(branch))
        }
        None => (text, None),
    };
    let coords: Result<Vec<f64>, _> = coords_text
        .split(',')
        .map(str::trim)
        .map(str::parse)
        .collect();
    let coords = coords.map_err(|_| CliError::Config(format!("bad point `{text}`")))?;
    let mut p = Point::new(coords).map_err(|e| CliError::Config(e.to_string()))?;
    if let Some(b) = branch {
        p = p.with_branch(b);
    }
    Ok(p)
}
