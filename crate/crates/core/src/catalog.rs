//! Built-in spaces and maps used throughout the test and verification
//! machinery. Names here double as the CLI identifiers.

use crate::compact::CompactifiedSpace;
use crate::curve::CurveForm;
use crate::exhaustion::Exhaustion;
use crate::maps::{KnownSet, MapInstance};
use crate::space::{DistanceKind, Ray, SpaceDescriptor};
use crate::{Error, Point, Result};

/// Default exhaustion depth. Deep enough that the vanishing-radius tail
/// condition certifies below 1e-3 and that parameters up to 1e4 evaluate
/// without hitting the depth guard.
pub const DEFAULT_DEPTH: usize = 12_000;

/// `[0, inf)` embedded as the nonnegative axis of R.
pub fn half_line() -> SpaceDescriptor {
    SpaceDescriptor::new(
        "half-line",
        1,
        vec![Ray::new(vec![0.0], vec![1.0]).unwrap()],
    )
    .unwrap()
}

/// The real line as two rays sharing the origin.
pub fn real_line() -> SpaceDescriptor {
    SpaceDescriptor::new(
        "line",
        1,
        vec![
            Ray::new(vec![0.0], vec![1.0]).unwrap(),
            Ray::new(vec![0.0], vec![-1.0]).unwrap(),
        ],
    )
    .unwrap()
}

/// Two disjoint copies of the half line embedded at height offset 2.
pub fn two_ray() -> SpaceDescriptor {
    SpaceDescriptor::new(
        "two-ray",
        2,
        vec![
            Ray::new(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap(),
            Ray::new(vec![0.0, 2.0], vec![1.0, 0.0]).unwrap(),
        ],
    )
    .unwrap()
}

/// Half line carrying the squared-difference oracle; the analytic
/// counterexample fixture for the axiom suites.
pub fn broken_square() -> SpaceDescriptor {
    SpaceDescriptor::new(
        "broken-square",
        1,
        vec![Ray::new(vec![0.0], vec![1.0]).unwrap()],
    )
    .unwrap()
    .with_distance(DistanceKind::SquaredEuclid)
}

pub fn space(name: &str) -> Result<SpaceDescriptor> {
    match name {
        "half-line" => Ok(half_line()),
        "line" => Ok(real_line()),
        "two-ray" => Ok(two_ray()),
        "broken-square" => Ok(broken_square()),
        other => Err(Error::Parameter(format!("unknown space `{other}`"))),
    }
}

pub fn space_names() -> &'static [&'static str] {
    &["half-line", "line", "two-ray", "broken-square"]
}

/// Compactification of a catalog space: base point at the first branch
/// origin, default interval exhaustion.
pub fn compactified(name: &str) -> Result<CompactifiedSpace> {
    let sp = space(name)?;
    if sp.name() == "broken-square" {
        return Err(Error::Parameter(
            "broken-square is an oracle fixture, not a compactifiable space".into(),
        ));
    }
    let x0 = sp.embed(0, 0.0);
    let exh = Exhaustion::unit_intervals(&sp, DEFAULT_DEPTH);
    CompactifiedSpace::new(sp, x0, exh)
}

/// Identity on the line. The inverse is continuous everywhere.
pub fn identity_map() -> MapInstance {
    let domain = real_line();
    let curves = vec![
        CurveForm::Affine {
            origin: vec![0.0],
            direction: vec![1.0],
        },
        CurveForm::Affine {
            origin: vec![0.0],
            direction: vec![-1.0],
        },
    ];
    MapInstance::new("identity", domain, 1, curves, Some(KnownSet::Empty)).unwrap()
}

/// Half line wrapped once around the unit circle; the terminal angle closes
/// onto the image of the origin, so the inverse is discontinuous exactly
/// there.
pub fn lollipop() -> MapInstance {
    let domain = half_line();
    let curves = vec![CurveForm::Circle {
        center: [0.0, 0.0],
        radius: 1.0,
        turns: 1.0,
    }];
    MapInstance::new(
        "lollipop",
        domain,
        2,
        curves,
        Some(KnownSet::BranchOrigin { branch: 0 }),
    )
    .unwrap()
}

/// The line folded onto a figure-eight; both ends approach the crossing at
/// the image of 0.
pub fn figure_eight() -> MapInstance {
    let domain = real_line();
    let curves = vec![
        CurveForm::EightLobe {
            scale: 1.0,
            sign: 1.0,
        },
        CurveForm::EightLobe {
            scale: 1.0,
            sign: -1.0,
        },
    ];
    MapInstance::new(
        "figure-eight",
        domain,
        2,
        curves,
        Some(KnownSet::BranchOrigin { branch: 0 }),
    )
    .unwrap()
}

/// Two-ray domain: one ray spirals down onto the unit circle from outside,
/// the other is the circle wrap. The discontinuity set of the inverse is the
/// whole circle, which itself splits one level further at (1, 0).
pub fn spiral_lollipop() -> MapInstance {
    let domain = two_ray();
    let curves = vec![
        CurveForm::Spiral {
            center: [0.0, 0.0],
            base_radius: 1.0,
            amplitude: 1.0,
            decay: 1.0,
            turns_per_unit: 1.0,
        },
        CurveForm::Circle {
            center: [0.0, 0.0],
            radius: 1.0,
            turns: 1.0,
        },
    ];
    MapInstance::new(
        "spiral-lollipop",
        domain,
        2,
        curves,
        Some(KnownSet::WholeBranch { branch: 1 }),
    )
    .unwrap()
}

pub fn map(name: &str) -> Result<MapInstance> {
    match name {
        "identity" => Ok(identity_map()),
        "lollipop" => Ok(lollipop()),
        "figure-eight" => Ok(figure_eight()),
        "spiral-lollipop" => Ok(spiral_lollipop()),
        other => Err(Error::Parameter(format!("unknown map `{other}`"))),
    }
}

pub fn map_names() -> &'static [&'static str] {
    &["identity", "lollipop", "figure-eight", "spiral-lollipop"]
}

/// Base point used when compactifying a map domain: the first branch origin,
/// which for the singleton-discontinuity catalog maps is the gluing point.
pub fn map_base_point(m: &MapInstance) -> Point {
    m.domain().embed(0, 0.0)
}
