use serde::{Deserialize, Serialize};

use crate::descriptor::ray::GeodesicRay;
use crate::error::{Error, Result};
use crate::flat::{Piece, Surface};

/// Default isolation threshold `M₀`.
pub const DEFAULT_M0: f64 = 2.0;
/// Time tolerance of interval endpoints.
pub const ISOLATION_TOL: f64 = 1e-6;
/// Step of the outward scan from the balance time of `γ`.
pub const ISOLATION_SCAN_STEP: f64 = 0.05;

/// Where a piece is isolated along a slit-surface ray: the times around
/// the balance time of `γ` at which the expanding modulus on the piece's
/// side stays at least `threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsolationInterval {
    pub piece: Piece,
    pub interval: Option<[f64; 2]>,
    pub threshold: f64,
    /// Balance time of `γ`.
    pub balance_time: f64,
    /// Expanding modulus at the balance time.
    pub peak: f64,
}

impl IsolationInterval {
    pub fn is_empty(&self) -> bool {
        self.interval.is_none()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.interval.is_some_and(|[a, b]| a <= t && t <= b)
    }
}

/// Result of the outward scan; an open side ran into the ray's range.
pub(crate) struct Scan {
    pub iso: IsolationInterval,
    pub open_lo: bool,
    pub open_hi: bool,
}

fn modulus_at(ray: &GeodesicRay, piece: Piece, t: f64) -> f64 {
    match ray.at(t) {
        Surface::Slit(s) => s.expanding_modulus(piece),
        Surface::Torus(_) => unreachable!("slit ray"),
    }
}

/// Walks from `from` in direction `dir` while `M ≥ m0`; returns the exit
/// point to [`ISOLATION_TOL`], or the range bound when there is none.
fn walk(ray: &GeodesicRay, piece: Piece, m0: f64, from: f64, dir: f64) -> (f64, bool) {
    let bound = if dir > 0.0 { ray.t_range().max } else { ray.t_range().min };
    let m = |t: f64| modulus_at(ray, piece, t);
    let mut inside = from;
    loop {
        let next = inside + dir * ISOLATION_SCAN_STEP;
        let next = if (next - bound) * dir >= 0.0 { bound } else { next };
        if m(next) < m0 {
            let mut outside = next;
            while (outside - inside).abs() > ISOLATION_TOL {
                let mid = 0.5 * (inside + outside);
                if m(mid) >= m0 {
                    inside = mid;
                } else {
                    outside = mid;
                }
            }
            return (inside, false);
        }
        if next == bound {
            return (bound, true);
        }
        inside = next;
    }
}

pub(crate) fn isolation_scan(ray: &GeodesicRay, piece: Piece, m0: f64) -> Result<Scan> {
    if !(m0 > 0.0 && m0.is_finite()) {
        return Err(Error::InvalidParameter(format!("M0 = {m0} must be positive")));
    }
    let slit = ray.require_slit()?;
    let balance_time = slit.gamma_evolution()?.balance_time;
    let peak = slit.flow(balance_time).expanding_modulus(piece);
    let mut iso = IsolationInterval {
        piece,
        interval: None,
        threshold: m0,
        balance_time,
        peak,
    };
    if peak < m0 {
        return Ok(Scan {
            iso,
            open_lo: false,
            open_hi: false,
        });
    }
    if !ray.contains(balance_time) {
        let r = ray.t_range();
        return Err(Error::Unbracketed { lo: r.min, hi: r.max });
    }
    let (lo, open_lo) = walk(ray, piece, m0, balance_time, -1.0);
    let (hi, open_hi) = walk(ray, piece, m0, balance_time, 1.0);
    iso.interval = Some([lo, hi]);
    Ok(Scan { iso, open_lo, open_hi })
}

/// The isolation interval of `piece` at threshold `m0`.
///
/// Empty when the modulus at the balance time of `γ` is below `m0`;
/// otherwise the maximal interval around that time on which it stays at
/// least `m0`, found by an outward scan followed by bisection. Fails with
/// [`Error::Unbracketed`] when the interval reaches the end of the ray.
pub fn isolation_interval(ray: &GeodesicRay, piece: Piece, m0: f64) -> Result<IsolationInterval> {
    let scan = isolation_scan(ray, piece, m0)?;
    if scan.open_lo || scan.open_hi {
        let r = ray.t_range();
        return Err(Error::Unbracketed { lo: r.min, hi: r.max });
    }
    Ok(scan.iso)
}
