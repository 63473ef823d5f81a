use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coarse::extremal::{
    extremal_length_gamma, extremal_length_in_piece, extremal_length_torus, CurveId, PieceId,
};
use crate::error::{Error, Result};
use crate::farey::intersection;
use crate::flat::{FlatTorus, Piece, SlitSurface, Surface, Topology};
use crate::slope::Slope;
use crate::twist::{normalized_slope, TwistCoordinate};

/// Default extremal length below which a pants curve counts as short.
pub const DEFAULT_SHORT_EXT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkingConfig {
    /// A pants curve is short when its extremal length is at most this.
    pub eps0: f64,
}

impl Default for MarkingConfig {
    fn default() -> Self {
        MarkingConfig {
            eps0: DEFAULT_SHORT_EXT,
        }
    }
}

/// A pants curve with its extremal length and transversal.
///
/// For a slope the transversal is the direction flat perpendicular to it;
/// `transversal_slope` is its slope after sending the curve to `1/0` and
/// `twist` that slope rounded. For `γ` there is no flat transversal
/// and `twist` is the gluing twist of the slit surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkedCurve {
    pub curve: CurveId,
    pub ext: f64,
    pub twist: TwistCoordinate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transversal_slope: Option<f64>,
    pub short: bool,
}

/// The short marking at a point: a pants decomposition with lengths and
/// transversals, the short curves among them, and the marking slope of
/// every thick piece.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoarseMarking {
    pub topology: Topology,
    pub eps0: f64,
    pub pants: Vec<MarkedCurve>,
    pub thick_pieces: BTreeMap<PieceId, Slope>,
}

fn slope_curve(curve: CurveId, torus: &FlatTorus, alpha: Slope, ext: f64, eps0: f64) -> MarkedCurve {
    let slope = torus.transversal_slope(alpha);
    MarkedCurve {
        curve,
        ext,
        twist: TwistCoordinate(slope.round() as i64),
        transversal_slope: Some(slope),
        short: ext <= eps0,
    }
}

fn torus_marking(t: &FlatTorus, eps0: f64) -> CoarseMarking {
    let (alpha, _) = t.systole();
    let curve = slope_curve(CurveId::Torus(alpha), t, alpha, extremal_length_torus(t, alpha), eps0);
    let mut thick_pieces = BTreeMap::new();
    if !curve.short {
        thick_pieces.insert(PieceId::Torus, alpha);
    }
    CoarseMarking {
        topology: Topology::Torus,
        eps0,
        pants: vec![curve],
        thick_pieces,
    }
}

fn slit_marking(s: &SlitSurface, eps0: f64) -> CoarseMarking {
    let ext = extremal_length_gamma(s);
    let mut pants = vec![MarkedCurve {
        curve: CurveId::Gamma,
        ext,
        twist: TwistCoordinate(s.rel_twist()),
        transversal_slope: None,
        short: ext <= eps0,
    }];
    let mut thick_pieces = BTreeMap::new();
    for piece in [Piece::Y, Piece::Z] {
        let torus = s.piece(piece);
        // marking curves must have a representative inside the piece,
        // i.e. a straight representative missing the slit
        let (alpha, _) = torus.restricted_systole(s.slit_holonomy());
        let ext = extremal_length_in_piece(s, piece, alpha);
        pants.push(slope_curve(CurveId::InPiece(piece, alpha), torus, alpha, ext, eps0));
        thick_pieces.insert(piece.into(), alpha);
    }
    CoarseMarking {
        topology: Topology::GenusTwo,
        eps0,
        pants,
        thick_pieces,
    }
}

/// The short marking at a surface, built greedily: the systole of each
/// thick piece (restricted to curves inside the piece), plus `γ` on a
/// slit surface.
pub fn short_marking(surface: &Surface, cfg: &MarkingConfig) -> CoarseMarking {
    match surface {
        Surface::Torus(t) => torus_marking(t, cfg.eps0),
        Surface::Slit(s) => slit_marking(s, cfg.eps0),
    }
}

impl CoarseMarking {
    /// A torus marking given directly by its pants curve, extremal length
    /// and a transversal slope.
    pub fn torus_curve(alpha: Slope, ext: f64, transversal: Slope, eps0: f64) -> Result<Self> {
        if !(ext > 0.0 && ext.is_finite()) {
            return Err(Error::InvalidParameter(format!("extremal length {ext} must be positive")));
        }
        if intersection(alpha, transversal) == 0 {
            return Err(Error::DisjointFromCore {
                around: alpha.to_string(),
                curve: transversal.to_string(),
            });
        }
        let [x, y] = transversal.homology();
        let slope = normalized_slope(alpha, [x as f64, y as f64]);
        let curve = MarkedCurve {
            curve: CurveId::Torus(alpha),
            ext,
            twist: TwistCoordinate(slope.round() as i64),
            transversal_slope: Some(slope),
            short: ext <= eps0,
        };
        let mut thick_pieces = BTreeMap::new();
        if !curve.short {
            thick_pieces.insert(PieceId::Torus, alpha);
        }
        Ok(CoarseMarking {
            topology: Topology::Torus,
            eps0,
            pants: vec![curve],
            thick_pieces,
        })
    }

    pub fn short_curves(&self) -> impl Iterator<Item = &MarkedCurve> {
        self.pants.iter().filter(|c| c.short)
    }

    pub fn pants_curve(&self, curve: CurveId) -> Option<&MarkedCurve> {
        self.pants.iter().find(|c| c.curve == curve)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("marking serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Real twisting of `a` relative to `b` around their common pants curve.
pub(crate) fn twist_difference(a: &MarkedCurve, b: &MarkedCurve) -> f64 {
    match (a.transversal_slope, b.transversal_slope) {
        (Some(ta), Some(tb)) => ta - tb,
        _ => (a.twist.0 - b.twist.0) as f64,
    }
}

/// Extremal length of `curve` estimated from a marking:
/// `Σ (1/l_α + l_α·t_α²)·i(α, curve)²` over the pants curves `α`, with
/// `t_α` the twisting of `curve` relative to the transversal of `α`.
///
/// With real-valued twists this is exact on flat tori.
pub fn length_from_marking(mu: &CoarseMarking, curve: CurveId) -> Result<f64> {
    if mu.pants_curve(curve).is_some() {
        return Err(Error::PantsCurve(curve.to_string()));
    }
    let (Some(target), Some(piece)) = (curve.slope(), curve.piece()) else {
        return Err(Error::InvalidParameter(format!(
            "{curve} is disjoint from every marking curve"
        )));
    };
    let expected = match piece {
        PieceId::Torus => Topology::Torus,
        _ => Topology::GenusTwo,
    };
    if expected != mu.topology {
        return Err(Error::TopologyMismatch(mu.topology.to_string(), curve.to_string()));
    }
    let [x, y] = target.homology();
    let dir = [x as f64, y as f64];
    let mut total = 0.0;
    for alpha in &mu.pants {
        let (Some(s), Some(tau)) = (alpha.curve.slope(), alpha.transversal_slope) else { continue };
        if alpha.curve.piece() != Some(piece) {
            continue;
        }
        let i = intersection(s, target) as f64;
        if i == 0.0 {
            continue;
        }
        let t = normalized_slope(s, dir) - tau;
        total += (1.0 / alpha.ext + alpha.ext * t * t) * i * i;
    }
    if total == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "{curve} is disjoint from every marking curve"
        )));
    }
    Ok(total)
}
