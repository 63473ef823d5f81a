use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flat::{FlatTorus, Piece, SlitSurface, Surface};
use crate::slope::Slope;

/// Smallest value used for `1/Ext(γ)`. When neither expanding annulus
/// has positive modulus, `γ` is not short and its extremal length is of
/// order one; the floor keeps the estimate finite.
pub const GAMMA_MODULUS_FLOOR: f64 = 0.5;

/// A thick piece of the decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceId {
    /// The whole torus.
    Torus,
    Y,
    Z,
}

impl From<Piece> for PieceId {
    fn from(p: Piece) -> Self {
        match p {
            Piece::Y => PieceId::Y,
            Piece::Z => PieceId::Z,
        }
    }
}

impl PieceId {
    pub fn as_piece(self) -> Option<Piece> {
        match self {
            PieceId::Torus => None,
            PieceId::Y => Some(Piece::Y),
            PieceId::Z => Some(Piece::Z),
        }
    }
}

impl fmt::Display for PieceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PieceId::Torus => f.write_str("torus"),
            PieceId::Y => f.write_str("Y"),
            PieceId::Z => f.write_str("Z"),
        }
    }
}

impl FromStr for PieceId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "torus" => Ok(PieceId::Torus),
            _ => Ok(s.parse::<Piece>()?.into()),
        }
    }
}

/// A curve on a torus or slit surface: a slope of the torus, a slope
/// inside one of the pieces, or the separating curve `γ`.
///
/// Written as `p/q`, `Y:p/q`, `Z:p/q` or `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveId {
    Torus(Slope),
    InPiece(Piece, Slope),
    Gamma,
}

impl CurveId {
    pub fn piece(&self) -> Option<PieceId> {
        match self {
            CurveId::Torus(_) => Some(PieceId::Torus),
            CurveId::InPiece(p, _) => Some((*p).into()),
            CurveId::Gamma => None,
        }
    }

    pub fn slope(&self) -> Option<Slope> {
        match self {
            CurveId::Torus(s) | CurveId::InPiece(_, s) => Some(*s),
            CurveId::Gamma => None,
        }
    }

    /// The curve of slope `s` in `piece`.
    pub fn in_piece(piece: PieceId, s: Slope) -> CurveId {
        match piece.as_piece() {
            None => CurveId::Torus(s),
            Some(p) => CurveId::InPiece(p, s),
        }
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveId::Torus(s) => write!(f, "{s}"),
            CurveId::InPiece(p, s) => write!(f, "{p}:{s}"),
            CurveId::Gamma => f.write_str("gamma"),
        }
    }
}

impl FromStr for CurveId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "gamma" {
            return Ok(CurveId::Gamma);
        }
        match s.split_once(':') {
            Some((p, slope)) => Ok(CurveId::InPiece(p.parse()?, slope.parse()?)),
            None => Ok(CurveId::Torus(s.parse()?)),
        }
    }
}

impl Serialize for CurveId {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CurveId {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Extremal length of a slope on a flat torus: `ℓ²/area`, which is exact.
pub fn extremal_length_torus(q: &FlatTorus, alpha: Slope) -> f64 {
    let l = q.flat_length(alpha).length;
    l * l / q.area()
}

/// Extremal length of a slope inside a piece of a slit surface:
/// `ℓ² / size²`.
pub fn extremal_length_in_piece(s: &SlitSurface, piece: Piece, alpha: Slope) -> f64 {
    let l = s.piece(piece).flat_length(alpha).length;
    let size = s.size(piece);
    (l / size).powi(2)
}

/// Extremal length of `γ` from the moduli of the two expanding annuli
/// around it; the flat annulus between them is degenerate.
pub fn extremal_length_gamma(s: &SlitSurface) -> f64 {
    let m = s.expanding_modulus(Piece::Y).max(0.0) + s.expanding_modulus(Piece::Z).max(0.0);
    1.0 / m.max(GAMMA_MODULUS_FLOOR)
}

/// Extremal length of a curve on either surface type.
pub fn extremal_length(surface: &Surface, curve: CurveId) -> Result<f64> {
    match (surface, curve) {
        (Surface::Torus(t), CurveId::Torus(s)) => Ok(extremal_length_torus(t, s)),
        (Surface::Slit(x), CurveId::InPiece(p, s)) => Ok(extremal_length_in_piece(x, p, s)),
        (Surface::Slit(x), CurveId::Gamma) => Ok(extremal_length_gamma(x)),
        (s, c) => Err(Error::TopologyMismatch(s.topology().to_string(), c.to_string())),
    }
}

/// The `(ε₀, ε₁)` thick-thin decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThickThin {
    pub short_set: BTreeSet<CurveId>,
    pub pieces: BTreeSet<PieceId>,
    pub eps0: f64,
    pub eps1: f64,
}

fn classify(curve: CurveId, ext: f64, eps0: f64, eps1: f64) -> Result<bool> {
    if ext <= eps1 {
        Ok(true)
    } else if ext <= eps0 {
        Err(Error::GapViolation {
            curve: curve.to_string(),
            ext,
            eps0,
            eps1,
        })
    } else {
        Ok(false)
    }
}

/// Splits a surface into short curves (extremal length at most `eps1`)
/// and thick pieces. A candidate curve with extremal length in
/// `(eps1, eps0]` makes the decomposition ambiguous and is reported as a
/// gap violation.
///
/// On a torus the only candidate is the systole; when it is short the
/// complement is a pair of pants and there are no thick pieces. On a slit
/// surface the candidates are `γ` and the systoles of `Y` and `Z`, and
/// both pieces are always listed.
pub fn thick_thin(surface: &Surface, eps0: f64, eps1: f64) -> Result<ThickThin> {
    if !(eps0 > eps1 && eps1 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need eps0 > eps1 > 0, got eps0 = {eps0}, eps1 = {eps1}"
        )));
    }
    let mut short_set = BTreeSet::new();
    let mut pieces = BTreeSet::new();
    match surface {
        Surface::Torus(t) => {
            let (alpha, _) = t.systole();
            let curve = CurveId::Torus(alpha);
            if classify(curve, extremal_length_torus(t, alpha), eps0, eps1)? {
                short_set.insert(curve);
            } else {
                pieces.insert(PieceId::Torus);
            }
        }
        Surface::Slit(s) => {
            if classify(CurveId::Gamma, extremal_length_gamma(s), eps0, eps1)? {
                short_set.insert(CurveId::Gamma);
            }
            for piece in [Piece::Y, Piece::Z] {
                let (alpha, _) = s.piece(piece).systole();
                let curve = CurveId::InPiece(piece, alpha);
                if classify(curve, extremal_length_in_piece(s, piece, alpha), eps0, eps1)? {
                    short_set.insert(curve);
                }
                pieces.insert(piece.into());
            }
        }
    }
    Ok(ThickThin {
        short_set,
        pieces,
        eps0,
        eps1,
    })
}
