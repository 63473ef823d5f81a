//! Coarse geometry: extremal lengths, short markings and the distance
//! formula.

pub mod bounded;
pub mod distance;
pub mod extremal;
pub mod hyperbolic;
pub mod marking;

pub use bounded::{bounded_distance_check, check_markings, BoundedConfig, BoundedReport, ConditionResult};
pub use distance::{
    cutoff, distance_estimate, modified_log, DistanceBreakdown, DistanceTerm, TermKind, DEFAULT_THRESHOLD_C,
};
pub use extremal::{
    extremal_length, extremal_length_gamma, extremal_length_in_piece, extremal_length_torus, thick_thin, CurveId,
    PieceId, ThickThin, GAMMA_MODULUS_FLOOR,
};
pub use hyperbolic::{exp_map, geodesic_point, hyperbolic_distance, torus_teichmuller_distance, UHPoint};
pub use marking::{length_from_marking, short_marking, CoarseMarking, MarkedCurve, MarkingConfig, DEFAULT_SHORT_EXT};
