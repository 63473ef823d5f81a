use serde::{Deserialize, Serialize};

use crate::coarse::CurveId;
use crate::descriptor::ray::{evolution_of, foliation_slopes, GeodesicRay};
use crate::error::{Error, Result};
use crate::farey::{farey_distance, farey_geodesic};
use crate::slope::Slope;

/// A slope predicted to become short along a torus ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictedCurve {
    pub slope: Slope,
    /// `T_α = d_α(λ−, λ+)`.
    pub total_twist: u64,
    pub balance_time: f64,
    pub min_length: f64,
}

/// Slopes with `T_α ≥ d1`, in order of balance time.
///
/// Candidates are the interior vertices of the Farey geodesic between
/// the rational stand-ins of the two foliations; any slope twisting the
/// foliations by at least 3 lies on every such geodesic.
pub fn predict_short_curves(ray: &GeodesicRay, d1: u64) -> Result<Vec<PredictedCurve>> {
    let torus = ray.require_torus()?;
    let (v, h) = foliation_slopes(torus);
    if v == h {
        return Err(Error::InvalidParameter(format!(
            "foliations share the slope {v}"
        )));
    }
    let path = farey_geodesic(h, v)?;
    let mut out = Vec::new();
    for &alpha in &path.vertices()[1..path.len()] {
        let Ok(ev) = evolution_of(ray, CurveId::Torus(alpha)) else { continue };
        let total_twist = ev.total_twist as u64;
        if total_twist >= d1 {
            out.push(PredictedCurve {
                slope: alpha,
                total_twist,
                balance_time: ev.balance_time,
                min_length: ev.min_length,
            });
        }
    }
    out.sort_by(|a, b| a.balance_time.total_cmp(&b.balance_time));
    Ok(out)
}

/// Placement of one tracked curve against the Farey geodesic between the
/// foliations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderEntry {
    pub curve: Slope,
    /// Centre of the curve's isolation interval, its balance time.
    pub balance_time: f64,
    /// Farey distance to the geodesic.
    pub offset: u32,
    /// Index of the closest geodesic vertex, counted from the end the ray
    /// leaves.
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderReport {
    /// Tracked curves by increasing balance time.
    pub entries: Vec<OrderEntry>,
    /// Curves further than 2 from the geodesic.
    pub off_geodesic: Vec<Slope>,
    /// Pairs out of order whose closest points are at least 2 apart.
    pub violations: Vec<(Slope, Slope)>,
    /// Pairs out of order within the adjacency slack.
    pub exempt: usize,
    pub passed: bool,
}

impl OrderReport {
    /// Tracked curves in time order.
    pub fn order(&self) -> Vec<Slope> {
        self.entries.iter().map(|e| e.curve).collect()
    }
}

/// Checks that tracked curves stay within 2 of the Farey geodesic from
/// `λ+` to `λ−` and that their balance times come in the order of their
/// closest points along it, pairs with equal or adjacent closest points
/// exempt.
pub fn isolation_order_check(ray: &GeodesicRay, curves: &[Slope]) -> Result<OrderReport> {
    if curves.is_empty() {
        return Err(Error::InvalidParameter("no curves to order".into()));
    }
    let torus = ray.require_torus()?;
    let (v, h) = foliation_slopes(torus);
    let path = farey_geodesic(h, v)?;
    let mut entries = Vec::with_capacity(curves.len());
    for &c in curves {
        let ev = evolution_of(ray, CurveId::Torus(c))?;
        let mut best = (u32::MAX, 0);
        for (i, &p) in path.vertices().iter().enumerate() {
            let d = farey_distance(c, p)?;
            if d < best.0 {
                best = (d, i);
            }
        }
        entries.push(OrderEntry {
            curve: c,
            balance_time: ev.balance_time,
            offset: best.0,
            position: best.1,
        });
    }
    entries.sort_by(|a, b| a.balance_time.total_cmp(&b.balance_time));
    let off_geodesic: Vec<_> = entries.iter().filter(|e| e.offset > 2).map(|e| e.curve).collect();
    let mut violations = Vec::new();
    let mut exempt = 0;
    for (i, a) in entries.iter().enumerate() {
        for b in &entries[i + 1..] {
            if a.position > b.position {
                if a.position - b.position <= 1 {
                    exempt += 1;
                } else {
                    violations.push((a.curve, b.curve));
                }
            }
        }
    }
    let passed = off_geodesic.is_empty() && violations.is_empty();
    Ok(OrderReport {
        entries,
        off_geodesic,
        violations,
        exempt,
        passed,
    })
}
