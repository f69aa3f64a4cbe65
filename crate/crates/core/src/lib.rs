//! Computational metric geometry on ray-embedded spaces.
//!
//! The crate has three layers:
//!
//! * point/space primitives with metric-axiom checking, greedy epsilon nets
//!   and tail classification of sequences ([`space`], [`axioms`], [`net`],
//!   [`sequence`]);
//! * compact exhaustions of a noncompact space and the bounded metric they
//!   induce once a base point is glued to the escape end ([`exhaustion`],
//!   [`compact`]);
//! * a catalog of continuous bijections together with estimation of their
//!   escape limit sets, discontinuity strata, stratum metrics and
//!   homeomorphism certificates ([`maps`], [`limits`], [`strat`],
//!   [`stratum`], [`certificate`]).
//!
//! Everything is seeded and deterministic: identical inputs produce identical
//! outputs, bit for bit.

// `!(x > 0.0)` guards intentionally reject NaN parameters; `x <= 0.0` would
// let them through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod axioms;
pub mod catalog;
pub mod certificate;
pub mod compact;
pub mod curve;
pub mod error;
pub mod exhaustion;
pub mod limits;
pub mod maps;
pub mod net;
pub mod point;
pub mod region;
pub mod sequence;
pub mod space;
pub mod strat;
pub mod stratum;

pub use axioms::{check_metric_axioms, Axiom, AxiomReport, TriplePlan, Violation};
pub use compact::{
    escape_convergence_check, total_boundedness_net, CompactifiedSpace, EscapeReport,
};
pub use error::{Error, Result};
pub use exhaustion::{validate_exhaustion, Exhaustion, ExhaustionReport};
pub use limits::{escape_limit_set, EscapeKind, EscapeSampler, EscapeScan};
pub use maps::MapInstance;
pub use net::epsilon_net;
pub use point::Point;
pub use sequence::{cauchy_classify, SequenceClass};
pub use space::SpaceDescriptor;
pub use strat::{
    consistency_check, decompose_open_set, discontinuity_set, proper_neighborhood_test, stratify,
    Capture, ConsistencyReport, Decomposition, StratLevel, Stratification, StratifyOptions,
};
pub use stratum::StratumMetric;
