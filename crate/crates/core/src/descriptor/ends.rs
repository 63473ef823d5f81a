use serde::{Deserialize, Serialize};

use crate::coarse::{short_marking, CurveId, MarkingConfig, PieceId};
use crate::descriptor::isolation::{isolation_scan, IsolationInterval};
use crate::descriptor::ray::GeodesicRay;
use crate::error::{Error, Result};
use crate::farey::farey_distance;
use crate::flat::{Piece, Surface};
use crate::slope::Slope;

/// Default bound on the coarse equalities of the ends check.
pub const DEFAULT_ENDS_BOUND: u32 = 4;

/// How a window `[a, b]` meets an isolation interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndsCase {
    /// `I_Y ⊂ [a, b]`.
    Contained,
    /// `I_Y ∩ [a, b] = ∅`.
    Disjoint,
    /// Neither; only possible when `γ` is short relative to the piece at
    /// an endpoint.
    Straddling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceEnds {
    pub piece: Piece,
    pub isolation: IsolationInterval,
    pub case: EndsCase,
    pub slope_a: Slope,
    pub slope_b: Slope,
    /// `d_Y(μ_a, μ_b)`.
    pub window_distance: u32,
    /// `d_Y` between the markings at the ends of `I_Y`, when contained.
    pub interval_distance: Option<u32>,
    /// Not checked for a straddling window.
    pub passed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndsReport {
    pub a: f64,
    pub b: f64,
    pub bound: u32,
    pub pieces: Vec<PieceEnds>,
    pub holds: bool,
}

fn piece_slope(ray: &GeodesicRay, piece: Piece, t: f64) -> Slope {
    match ray.at(t) {
        Surface::Slit(s) => s.piece(piece).restricted_systole(s.slit_holonomy()).0,
        Surface::Torus(_) => unreachable!("slit ray"),
    }
}

/// Checks the dichotomy for a window `[a, b]` with thick ends: either
/// `I_Y ⊂ [a, b]` and `d_Y(μ_a, μ_b)` is within `bound` of the progress
/// made across `I_Y`, or `I_Y` misses `[a, b]` and `d_Y(μ_a, μ_b) ≤ bound`.
///
/// The ends are thick when no marking curve inside a piece is short; `γ`
/// itself is short throughout the slit-surface family.
pub fn ends_consistency_check(
    ray: &GeodesicRay,
    a: f64,
    b: f64,
    m0: f64,
    bound: u32,
    marking: &MarkingConfig,
) -> Result<EndsReport> {
    ray.require_slit()?;
    if !(a <= b && ray.contains(a) && ray.contains(b)) {
        let r = ray.t_range();
        return Err(Error::InvalidParameter(format!(
            "window [{a}, {b}] is not inside [{}, {}]",
            r.min, r.max
        )));
    }
    for t in [a, b] {
        let mu = short_marking(&ray.at(t), marking);
        if mu.short_curves().any(|c| c.curve != CurveId::Gamma) {
            return Err(Error::EndpointNotThick(t));
        }
    }
    let mut pieces = Vec::new();
    for piece in [Piece::Y, Piece::Z] {
        let scan = isolation_scan(ray, piece, m0)?;
        let iso = scan.iso;
        let case = match iso.interval {
            None => EndsCase::Disjoint,
            Some([lo, hi]) if hi < a || lo > b => EndsCase::Disjoint,
            Some([lo, hi]) if !scan.open_lo && !scan.open_hi && a <= lo && hi <= b => EndsCase::Contained,
            Some(_) => EndsCase::Straddling,
        };
        let (slope_a, slope_b) = (piece_slope(ray, piece, a), piece_slope(ray, piece, b));
        let window_distance = farey_distance(slope_a, slope_b)?;
        let (interval_distance, passed) = match (case, iso.interval) {
            (EndsCase::Contained, Some([lo, hi])) => {
                let d = farey_distance(piece_slope(ray, piece, lo), piece_slope(ray, piece, hi))?;
                (Some(d), Some(window_distance.abs_diff(d) <= bound))
            }
            (EndsCase::Disjoint, _) => (None, Some(window_distance <= bound)),
            _ => (None, None),
        };
        pieces.push(PieceEnds {
            piece,
            isolation: iso,
            case,
            slope_a,
            slope_b,
            window_distance,
            interval_distance,
            passed,
        });
    }
    let holds = pieces.iter().all(|p| p.passed != Some(false));
    Ok(EndsReport {
        a,
        b,
        bound,
        pieces,
        holds,
    })
}

impl EndsReport {
    pub fn piece(&self, piece: PieceId) -> Option<&PieceEnds> {
        self.pieces.iter().find(|p| PieceId::from(p.piece) == piece)
    }
}
