use serde::{Deserialize, Serialize};

use crate::coarse::hyperbolic::{hyperbolic_distance, UHPoint};
use crate::coarse::marking::{twist_difference, CoarseMarking};
use crate::error::{Error, Result};
use crate::farey::{farey_distance, farey_geodesic};
use crate::twist::annular_projection_distance;

pub const DEFAULT_THRESHOLD_C: f64 = 10.0;

/// Which sum of the distance formula a term belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermKind {
    /// Farey distance between the marking slopes of a common piece.
    Projection,
    /// Log of the twisting around a curve in neither pants decomposition.
    Annular,
    /// Log of `1/l` for a pants curve of only one marking.
    OneSided,
    /// Hyperbolic-plane distance for a pants curve of both markings.
    Hyperbolic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceTerm {
    pub kind: TermKind,
    /// Piece or curve the term is about.
    pub subject: String,
    /// Value before the threshold cutoff.
    pub raw: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceBreakdown {
    pub threshold: f64,
    pub terms: Vec<DistanceTerm>,
    pub total: f64,
}

impl DistanceBreakdown {
    pub fn sum_of(&self, kind: TermKind) -> f64 {
        self.terms.iter().filter(|t| t.kind == kind).map(|t| t.value).sum()
    }
}

/// `[a]_C`: `a` when `a ≥ C`, otherwise 0.
pub fn cutoff(a: f64, c: f64) -> f64 {
    if a >= c {
        a
    } else {
        0.0
    }
}

/// Logarithm modified to equal 1 on `a ≤ e`.
pub fn modified_log(a: f64) -> f64 {
    if a <= std::f64::consts::E {
        1.0
    } else {
        a.ln()
    }
}

/// Evaluates the distance formula between two short markings, term by
/// term:
///
/// - `[d_Y]_C` over common thick pieces, with `d_Y` the Farey distance of
///   the marking slopes;
/// - `[log d_β]_C` over curves `β` interior to the Farey geodesic between
///   those slopes;
/// - `log(1/l)` over pants curves of one marking only;
/// - `d_H((t, 1/l_x), (0, 1/l_y))` over pants curves of both, with `t`
///   the relative twisting of their transversals.
pub fn distance_estimate(x: &CoarseMarking, y: &CoarseMarking, c: f64) -> Result<DistanceBreakdown> {
    if x.topology != y.topology {
        return Err(Error::TopologyMismatch(x.topology.to_string(), y.topology.to_string()));
    }
    let mut terms = Vec::new();
    for (piece, &sx) in &x.thick_pieces {
        let Some(&sy) = y.thick_pieces.get(piece) else { continue };
        if sx == sy {
            continue;
        }
        let raw = farey_distance(sx, sy)? as f64;
        terms.push(DistanceTerm {
            kind: TermKind::Projection,
            subject: piece.to_string(),
            raw,
            value: cutoff(raw, c),
        });
        let path = farey_geodesic(sx, sy)?;
        let inner = &path.vertices()[1..path.len()];
        for &beta in inner {
            let d = annular_projection_distance(beta, sx, sy)? as f64;
            let raw = modified_log(d);
            terms.push(DistanceTerm {
                kind: TermKind::Annular,
                subject: format!("{piece}:{beta}"),
                raw,
                value: cutoff(raw, c),
            });
        }
    }
    for (a, b) in [(x, y), (y, x)] {
        for curve in &a.pants {
            if b.pants_curve(curve.curve).is_none() {
                let raw = modified_log(1.0 / curve.ext);
                terms.push(DistanceTerm {
                    kind: TermKind::OneSided,
                    subject: curve.curve.to_string(),
                    raw,
                    value: raw,
                });
            }
        }
    }
    for cx in &x.pants {
        let Some(cy) = y.pants_curve(cx.curve) else { continue };
        let t = twist_difference(cx, cy);
        let raw = hyperbolic_distance(
            UHPoint { x: t, y: 1.0 / cx.ext },
            UHPoint { x: 0.0, y: 1.0 / cy.ext },
        );
        terms.push(DistanceTerm {
            kind: TermKind::Hyperbolic,
            subject: cx.curve.to_string(),
            raw,
            value: raw,
        });
    }
    let total = terms.iter().map(|t| t.value).sum();
    Ok(DistanceBreakdown {
        threshold: c,
        terms,
        total,
    })
}
