//! Twisting around a curve on the torus.
//!
//! After a change of marking sending the core `α` to `1/0`, a curve or
//! direction crossing `α` is recorded by its slope `y/x`, and one right
//! handed Dehn twist around `α` adds exactly 1 to that slope. Relative
//! twisting is the difference of these normalized slopes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::farey::{intersection, normalize_to_infinity};
use crate::slope::Slope;

/// Signed count of Dehn twists relative to an origin; defined up to ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TwistCoordinate(pub i64);

impl TwistCoordinate {
    pub fn value(self) -> i64 {
        self.0
    }
}

fn require_crossing(alpha: Slope, curve: Slope) -> Result<()> {
    if intersection(alpha, curve) == 0 {
        return Err(Error::DisjointFromCore {
            around: alpha.to_string(),
            curve: curve.to_string(),
        });
    }
    Ok(())
}

/// Nearest integer to `num/den`, halves rounded toward zero.
fn round_ratio(num: i128, den: i128) -> i64 {
    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
    let q = num.div_euclid(den);
    let r = num.rem_euclid(den);
    let twice = 2 * r;
    let out = if twice > den || (twice == den && q < 0) {
        q + 1
    } else {
        q
    };
    out as i64
}

/// Twisting of `beta` around `alpha` measured against `origin`.
pub fn twist_of(alpha: Slope, beta: Slope, origin: Slope) -> Result<TwistCoordinate> {
    require_crossing(alpha, beta)?;
    require_crossing(alpha, origin)?;
    let m = normalize_to_infinity(alpha);
    let [x1, y1] = m.apply(beta.homology());
    let [x2, y2] = m.apply(origin.homology());
    let num = y1 as i128 * x2 as i128 - y2 as i128 * x1 as i128;
    let den = x1 as i128 * x2 as i128;
    Ok(TwistCoordinate(round_ratio(num, den)))
}

/// Relative twisting `d_α(β1, β2)` in the annular complex of `alpha`.
pub fn annular_projection_distance(alpha: Slope, beta1: Slope, beta2: Slope) -> Result<u64> {
    Ok(twist_of(alpha, beta1, beta2)?.0.unsigned_abs())
}

/// Image of `beta` under `k` right-handed Dehn twists around `alpha`.
pub fn dehn_twist(alpha: Slope, beta: Slope, k: i64) -> Slope {
    let [ax, ay] = alpha.homology();
    let [x, y] = beta.homology();
    let c = k * (x * ay - y * ax);
    Slope::from_homology(x + c * ax, y + c * ay).expect("twist of a nonzero vector")
}

/// Slope of a real homology direction after sending `alpha` to `1/0`.
/// Infinite when the direction is parallel to `alpha`.
pub fn normalized_slope(alpha: Slope, direction: [f64; 2]) -> f64 {
    let [x, y] = normalize_to_infinity(alpha).apply_f64(direction);
    y / x
}

/// Real-valued relative twisting of two directions (foliations or
/// transversals) around `alpha`.
pub fn relative_twist(alpha: Slope, first: [f64; 2], second: [f64; 2]) -> f64 {
    normalized_slope(alpha, first) - normalized_slope(alpha, second)
}
