//! Analysis of self-maps that contract the perimeters of triangles.
//!
//! A map `T` on a metric space contracts perimeters when some `alpha < 1`
//! bounds `d(Tx,Ty) + d(Ty,Tz) + d(Tx,Tz)` by `alpha` times the perimeter of
//! `x, y, z` for every three pairwise distinct points. Such a map on a
//! complete space has a fixed point, and at most two, provided no non-fixed
//! point returns to itself after two steps.
//!
//! This crate computes the perimeter and Lipschitz coefficients of a map over
//! finite (or windowed) point sets, checks the period-two condition, runs the
//! fixed-point iteration with its a-priori bounds, and builds the standard
//! example spaces in exact arithmetic.
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]

extern crate alloc;

pub mod analysis;
pub mod error;
pub mod mapping;
pub mod metric;
pub mod paper;
pub mod scalar;
pub mod solver;

pub use analysis::{
    classify, classify_with, continuity_modulus_check, lipschitz_coefficient, perimeter_contraction_coefficient,
    perimeter_ratio, AnalysisReport, Candidate, ContinuityOutcome, TripleScan,
};
pub use error::{Error, NumericError};
pub use mapping::{
    apply, find_period_two_violation, fixed_points, orbit, MapKind, OrbitTrace, SelfMap, StopReason, TableMap,
};
pub use metric::{
    distance, is_between, perimeter, verify_metric_axioms, AxiomReport, AxiomViolation, FiniteSpace, MetricSpace,
    PointRef, SpaceKind, Triple,
};
pub use paper::{
    finite_triple_ratio, make_paper_space, make_three_point_example, prefix_distance, star_triple_ratio, step_distance,
    PaperSpace, PaperSpaceParams, ShiftMap, ThreePointVariant,
};
pub use scalar::{NumericMode, Ratio, Scalar, Tolerance};
pub use solver::{apriori_error_bound, perimeter_sequence, picard_solve, SolveResult, SolveStatus};
