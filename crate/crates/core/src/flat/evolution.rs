use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flat::torus::FlatTorus;
use crate::slope::Slope;

/// A curve on one of the implemented surfaces: a slope on a torus piece,
/// or the separating curve `γ` of a slit surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveRef {
    Slope(Slope),
    Separating,
}

impl std::fmt::Display for CurveRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurveRef::Slope(s) => write!(f, "{s}"),
            CurveRef::Separating => write!(f, "gamma"),
        }
    }
}

/// Flat length, twisting and cylinder modulus of a curve along the flow.
///
/// `min_length` and `balance_time` describe `ℓ_t = L·√cosh 2(t − t_bal)`;
/// `total_twist` is the relative twisting of the two foliations around
/// the curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveEvolution {
    pub curve: CurveRef,
    pub min_length: f64,
    pub balance_time: f64,
    pub total_twist: f64,
}

/// Minimum flat length and balance time from a horizontal/vertical split.
pub(crate) fn balance_from_components(h: f64, v: f64, curve: CurveRef) -> Result<(f64, f64)> {
    if !(h > 0.0 && v > 0.0) {
        return Err(Error::Unbalanced(curve.to_string()));
    }
    Ok(((2.0 * h * v).sqrt(), 0.5 * (v / h).ln()))
}

/// `(L, t_bal)` for a slope on a torus; times are relative to `q`.
pub fn balance_data(q: &FlatTorus, alpha: Slope) -> Result<CurveEvolution> {
    let fl = q.flat_length(alpha);
    let (min_length, balance_time) =
        balance_from_components(fl.horizontal, fl.vertical, CurveRef::Slope(alpha))?;
    Ok(CurveEvolution {
        curve: CurveRef::Slope(alpha),
        min_length,
        balance_time,
        total_twist: 0.0,
    })
}

impl CurveEvolution {
    pub fn with_twist(mut self, total_twist: f64) -> Self {
        self.total_twist = total_twist;
        self
    }

    /// Exact Euclidean length law of the torus model.
    pub fn predicted_length(&self, t: f64) -> f64 {
        self.min_length * (2.0 * (t - self.balance_time)).cosh().sqrt()
    }

    /// The coarse law `L·cosh(t − t_bal)`.
    pub fn coarse_length(&self, t: f64) -> f64 {
        self.min_length * (t - self.balance_time).cosh()
    }

    /// Shift of parametrization: the same curve seen from time `s` on.
    pub fn shifted(&self, s: f64) -> Self {
        CurveEvolution {
            balance_time: self.balance_time - s,
            ..*self
        }
    }
}

/// `T / cosh²(t − t_bal)`.
pub fn cylinder_modulus_profile(ev: &CurveEvolution, t: f64) -> f64 {
    let c = (t - ev.balance_time).cosh();
    if c.is_infinite() {
        return 0.0;
    }
    ev.total_twist / (c * c)
}

/// `T·L / cosh(t − t_bal)`.
pub fn cylinder_size_profile(ev: &CurveEvolution, t: f64) -> f64 {
    ev.total_twist * ev.min_length / (t - ev.balance_time).cosh()
}

/// `T / (1 + e^{−2(t − t_bal)})²`: rises from 0 to `T`, with `T/4` at
/// the balance time.
pub fn twist_profile(ev: &CurveEvolution, t: f64) -> f64 {
    let e = (-2.0 * (t - ev.balance_time)).exp();
    let d = 1.0 + e;
    ev.total_twist / (d * d)
}
