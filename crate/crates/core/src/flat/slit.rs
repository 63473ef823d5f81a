use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flat::evolution::{balance_from_components, CurveEvolution, CurveRef};
use crate::flat::torus::FlatTorus;
use crate::lattice::norm;

/// Embedding margin: a slit is cut only if shorter than this fraction of
/// the systole of the torus it is cut in.
pub const SLIT_MARGIN: f64 = 0.5;

/// The two torus pieces of a slit surface, cut along `γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Piece {
    /// The small (scaled) torus.
    Y,
    /// The big torus.
    Z,
}

impl std::fmt::Display for Piece {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Piece::Y => f.write_str("Y"),
            Piece::Z => f.write_str("Z"),
        }
    }
}

impl std::str::FromStr for Piece {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Y" | "y" => Ok(Piece::Y),
            "Z" | "z" => Ok(Piece::Z),
            _ => Err(Error::InvalidParameter(format!("unknown piece `{s}`"))),
        }
    }
}

/// Genus-2 surface made of two flat tori glued along a slit. The
/// separating curve `γ` runs along both sides of the slit.
///
/// Flowing acts on both pieces and on the slit holonomy; since the action
/// is affine it keeps the slit embedded, so the margin is checked only
/// where the slit is cut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitSurface {
    big: FlatTorus,
    small: FlatTorus,
    slit_base: [f64; 2],
    time: f64,
    rel_twist: i64,
}

fn flow_vector(v: [f64; 2], t: f64) -> [f64; 2] {
    [v[0] * t.exp(), v[1] * (-t).exp()]
}

fn check_slit(slit: [f64; 2], torus: &FlatTorus) -> Result<()> {
    let systole = torus.systole().1;
    let len = norm(slit);
    if !(len > 0.0) || len >= SLIT_MARGIN * systole {
        return Err(Error::SlitNotEmbedded { slit: len, systole });
    }
    Ok(())
}

impl SlitSurface {
    /// Glues `big` and `small` along a slit with holonomy `slit`; the slit
    /// must be shorter than half the systole of each piece.
    pub fn glue(big: FlatTorus, small: FlatTorus, slit: [f64; 2], rel_twist: i64) -> Result<Self> {
        check_slit(slit, &big)?;
        check_slit(slit, &small)?;
        Ok(Self::from_parts(big, small, slit, 0.0, rel_twist))
    }

    /// Reassembles a surface from stored parts without the margin check
    /// (used for flowed surfaces and deserialization).
    pub fn from_parts(
        big: FlatTorus,
        small: FlatTorus,
        slit_base: [f64; 2],
        time: f64,
        rel_twist: i64,
    ) -> Self {
        SlitSurface {
            big,
            small,
            slit_base,
            time,
            rel_twist,
        }
    }

    pub fn big(&self) -> &FlatTorus {
        &self.big
    }

    pub fn small(&self) -> &FlatTorus {
        &self.small
    }

    pub fn piece(&self, piece: Piece) -> &FlatTorus {
        match piece {
            Piece::Y => &self.small,
            Piece::Z => &self.big,
        }
    }

    pub fn slit_base(&self) -> [f64; 2] {
        self.slit_base
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn rel_twist(&self) -> i64 {
        self.rel_twist
    }

    pub fn slit_holonomy(&self) -> [f64; 2] {
        flow_vector(self.slit_base, self.time)
    }

    pub fn slit_length(&self) -> f64 {
        norm(self.slit_holonomy())
    }

    /// Flat length of `γ`: twice the slit.
    pub fn gamma_length(&self) -> f64 {
        2.0 * self.slit_length()
    }

    pub fn flow(&self, t: f64) -> Self {
        SlitSurface {
            big: self.big.flow(t),
            small: self.small.flow(t),
            time: self.time + t,
            ..*self
        }
    }

    /// The same surface turned a quarter turn; see
    /// [`FlatTorus::quarter_turn`].
    pub fn quarter_turn(&self) -> Self {
        let [x, y] = self.slit_base;
        SlitSurface {
            big: self.big.quarter_turn(),
            small: self.small.quarter_turn(),
            slit_base: [y, -x],
            time: -self.time,
            rel_twist: self.rel_twist,
        }
    }

    /// Size of a piece: its scaled systole.
    pub fn size(&self, piece: Piece) -> f64 {
        self.piece(piece).systole().1
    }

    /// `log(size(piece) / ℓ(γ))`, the coarse modulus of the expanding
    /// annulus around `γ` on the side of `piece`; nonpositive values mean
    /// `γ` is not short relative to that piece.
    pub fn expanding_modulus(&self, piece: Piece) -> f64 {
        (self.size(piece) / self.gamma_length()).ln()
    }

    /// Length law of `γ`; the slit gluing has no flat cylinder around
    /// `γ`, so the total twist is zero.
    pub fn gamma_evolution(&self) -> Result<CurveEvolution> {
        let [x, y] = self.slit_holonomy();
        let (l, t) = balance_from_components(2.0 * x.abs(), 2.0 * y.abs(), CurveRef::Separating)?;
        Ok(CurveEvolution {
            curve: CurveRef::Separating,
            min_length: l,
            balance_time: t,
            total_twist: 0.0,
        })
    }
}

/// Parameters of the two-surface construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleParams {
    pub d: f64,
    pub c: f64,
    pub delta: f64,
}

impl CounterexampleParams {
    /// Slit size `ε = c·e^{−d/2}`.
    pub fn epsilon(&self) -> f64 {
        self.c * (-self.d / 2.0).exp()
    }
}

/// Builds `(q₀, q̄₀)`: the torus `T` on the Anosov axis glued to
/// `δ·T_{−d/2}` and to `δ·T_{−3d/2}`, where `T_s` is `T` with a slit of
/// size `ε` at angle `π/4` flowed for time `s`.
pub fn build_counterexample_pair(d: f64, c: f64, delta: f64) -> Result<(SlitSurface, SlitSurface)> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::InvalidParameter(format!("d = {d} must be positive")));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::InvalidParameter(format!("c = {c} must lie in (0, 1)")));
    }
    let params = CounterexampleParams { d, c, delta };
    let eps = params.epsilon();
    if !(delta > 0.0 && delta < eps / 10.0) {
        return Err(Error::InvalidParameter(format!(
            "delta = {delta} must lie in (0, {})",
            eps / 10.0
        )));
    }
    let t = FlatTorus::anosov_axis();
    let slit0 = [eps / 2f64.sqrt(), eps / 2f64.sqrt()];
    check_slit(slit0, &t)?;
    let build = |shift: f64| -> Result<SlitSurface> {
        let small = t.flow(shift).scaled(delta);
        let slit = flow_vector(slit0, shift);
        let slit = [delta * slit[0], delta * slit[1]];
        // the matching slit is cut in the big torus
        check_slit(slit, &t)?;
        Ok(SlitSurface::from_parts(t, small, slit, 0.0, 0))
    };
    Ok((build(-d / 2.0)?, build(-1.5 * d)?))
}
