use serde::{Deserialize, Serialize};

use crate::coarse::CurveId;
use crate::error::{Error, Result};
use crate::farey::{continued_fraction_f64, convergents};
use crate::flat::{balance_data, CurveEvolution, FlatTorus, SlitSurface, Surface};
use crate::slope::Slope;

/// Largest denominator of the rational stand-ins for foliation
/// directions.
pub const FOLIATION_DENOMINATOR: i64 = 1_000_000;

/// The geodesic `t ↦ flow(start, t)` for `t` in a closed time range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicRay {
    start: Surface,
    t_min: f64,
    t_max: f64,
}

/// Closed time range of a ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeRange {
    pub min: f64,
    pub max: f64,
}

impl GeodesicRay {
    pub fn new(start: impl Into<Surface>, t_min: f64, t_max: f64) -> Result<Self> {
        if !(t_min.is_finite() && t_max.is_finite() && t_min <= t_max) {
            return Err(Error::InvalidParameter(format!(
                "time range [{t_min}, {t_max}] is empty"
            )));
        }
        Ok(GeodesicRay {
            start: start.into(),
            t_min,
            t_max,
        })
    }

    pub fn start(&self) -> &Surface {
        &self.start
    }

    pub fn t_range(&self) -> TimeRange {
        TimeRange {
            min: self.t_min,
            max: self.t_max,
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        self.t_min <= t && t <= self.t_max
    }

    /// The surface at time `t`.
    pub fn at(&self, t: f64) -> Surface {
        self.start.flow(t)
    }

    pub fn torus(&self) -> Option<&FlatTorus> {
        match &self.start {
            Surface::Torus(t) => Some(t),
            Surface::Slit(_) => None,
        }
    }

    pub fn slit(&self) -> Option<&SlitSurface> {
        match &self.start {
            Surface::Slit(s) => Some(s),
            Surface::Torus(_) => None,
        }
    }

    pub(crate) fn require_torus(&self) -> Result<&FlatTorus> {
        self.torus().ok_or_else(|| {
            Error::TopologyMismatch("genus_two".into(), "a torus ray is required".into())
        })
    }

    pub(crate) fn require_slit(&self) -> Result<&SlitSurface> {
        self.slit().ok_or_else(|| {
            Error::TopologyMismatch("torus".into(), "a slit-surface ray is required".into())
        })
    }

    /// The same geodesic run backwards: time `t` of the result is time
    /// `−t` of `self`, turned a quarter turn, which swaps the foliations.
    pub fn reversed(&self) -> Self {
        let start = match &self.start {
            Surface::Torus(t) => Surface::Torus(t.quarter_turn()),
            Surface::Slit(s) => Surface::Slit(s.quarter_turn()),
        };
        GeodesicRay {
            start,
            t_min: -self.t_max,
            t_max: -self.t_min,
        }
    }

    /// `n ≥ 2` evenly spaced times covering the range.
    pub fn sample_times(&self, n: usize) -> Vec<f64> {
        if n < 2 || self.t_min == self.t_max {
            return vec![self.t_min];
        }
        let step = (self.t_max - self.t_min) / (n - 1) as f64;
        (0..n)
            .map(|i| if i + 1 == n { self.t_max } else { self.t_min + step * i as f64 })
            .collect()
    }
}

/// Rational stand-in for a homology direction: its last continued
/// fraction convergent with denominator at most `max_den`.
pub(crate) fn direction_slope(dir: [f64; 2], max_den: i64) -> Slope {
    let [x, y] = dir;
    if x == 0.0 {
        return Slope::INFINITY;
    }
    let q = continued_fraction_f64(y / x, max_den);
    *convergents(&q).last().expect("a real has a convergent")
}

/// Rational stand-ins for the vertical and horizontal foliations.
pub fn foliation_slopes(torus: &FlatTorus) -> (Slope, Slope) {
    let f = torus.foliations();
    (
        direction_slope(f.vertical, FOLIATION_DENOMINATOR),
        direction_slope(f.horizontal, FOLIATION_DENOMINATOR),
    )
}

/// Total twist `T_α = d_α(λ−, λ+)`: the relative twisting of the two
/// foliations around `alpha`, rounded to the nearest integer.
///
/// It is read off the holonomy frame of `alpha` rather than from rational
/// stand-ins, which would need denominators far beyond that of `alpha`.
pub fn total_twist(torus: &FlatTorus, alpha: Slope) -> Result<u64> {
    let t = torus.foliation_twist(alpha);
    if !t.is_finite() {
        return Err(Error::Unbalanced(alpha.to_string()));
    }
    Ok(t.abs().round() as u64)
}

fn slope_evolution(torus: &FlatTorus, alpha: Slope) -> Result<CurveEvolution> {
    let ev = balance_data(torus, alpha)?;
    Ok(ev.with_twist(total_twist(torus, alpha)? as f64))
}

/// Length law and total twist of a curve along the ray; times are ray
/// times.
pub fn evolution_of(ray: &GeodesicRay, curve: CurveId) -> Result<CurveEvolution> {
    match (ray.start(), curve) {
        (Surface::Torus(t), CurveId::Torus(alpha)) => slope_evolution(t, alpha),
        (Surface::Slit(s), CurveId::InPiece(piece, alpha)) => {
            let mut ev = slope_evolution(s.piece(piece), alpha)?;
            ev.curve = crate::flat::CurveRef::Slope(alpha);
            Ok(ev)
        }
        (Surface::Slit(s), CurveId::Gamma) => s.gamma_evolution(),
        (surface, curve) => Err(Error::TopologyMismatch(
            surface.topology().to_string(),
            curve.to_string(),
        )),
    }
}
