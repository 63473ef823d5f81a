//! Coarse description of a geodesic: per-curve evolutions, isolation
//! intervals, shadows in the Farey graph and their backtracking, short
//! curve prediction and the order of isolation intervals.

pub mod ends;
pub mod isolation;
pub mod predict;
pub mod ray;
pub mod shadow;

pub use ends::{ends_consistency_check, EndsCase, EndsReport, PieceEnds, DEFAULT_ENDS_BOUND};
pub use isolation::{isolation_interval, IsolationInterval, DEFAULT_M0, ISOLATION_TOL};
pub use predict::{isolation_order_check, predict_short_curves, OrderEntry, OrderReport, PredictedCurve};
pub use ray::{evolution_of, foliation_slopes, total_twist, GeodesicRay, TimeRange, FOLIATION_DENOMINATOR};
pub use shadow::{
    backtrack_defect, defect_report, shadow, shadow_adaptive, DefectReport, ShadowSample, ShadowSequence,
    DEFAULT_SHADOW_STEP, MAX_SHADOW_JUMP,
};
