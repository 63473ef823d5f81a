use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::coarse::marking::{short_marking, twist_difference, CoarseMarking, MarkingConfig};
use crate::error::{Error, Result};
use crate::farey::farey_distance;
use crate::flat::Surface;

/// Bounds for the four hypotheses of the bounded-distance criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundedConfig {
    pub marking: MarkingConfig,
    /// Largest allowed Farey distance between marking slopes of a piece.
    pub projection_bound: u32,
    /// Largest allowed ratio of extremal lengths of a short curve.
    pub ratio_bound: f64,
    /// Largest allowed `|twist|·Ext` for a short curve.
    pub twist_bound: f64,
}

impl Default for BoundedConfig {
    fn default() -> Self {
        BoundedConfig {
            marking: MarkingConfig::default(),
            projection_bound: 4,
            ratio_bound: 4.0,
            twist_bound: 4.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub index: u8,
    pub passed: bool,
    /// The measured quantity compared against `bound`.
    pub value: f64,
    pub bound: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedReport {
    pub holds: bool,
    pub conditions: Vec<ConditionResult>,
}

impl BoundedReport {
    pub fn failed(&self) -> Vec<u8> {
        self.conditions.iter().filter(|c| !c.passed).map(|c| c.index).collect()
    }
}

/// Tests the hypotheses under which two points are a bounded distance
/// apart: (1) the same short curves, (2) close piece projections,
/// (3) comparable extremal lengths of the short curves and (4) bounded
/// twisting around them relative to their length.
pub fn bounded_distance_check(x: &Surface, y: &Surface, cfg: &BoundedConfig) -> Result<BoundedReport> {
    if x.topology() != y.topology() {
        return Err(Error::TopologyMismatch(x.topology().to_string(), y.topology().to_string()));
    }
    let mx = short_marking(x, &cfg.marking);
    let my = short_marking(y, &cfg.marking);
    check_markings(&mx, &my, cfg)
}

pub fn check_markings(mx: &CoarseMarking, my: &CoarseMarking, cfg: &BoundedConfig) -> Result<BoundedReport> {
    let sx: BTreeSet<_> = mx.short_curves().map(|c| c.curve).collect();
    let sy: BTreeSet<_> = my.short_curves().map(|c| c.curve).collect();
    let names = |s: &BTreeSet<_>| s.iter().map(|c: &crate::coarse::CurveId| c.to_string()).collect::<Vec<_>>().join(",");
    let same = sx == sy;
    let c1 = ConditionResult {
        index: 1,
        passed: same,
        value: if same { 0.0 } else { 1.0 },
        bound: 0.0,
        detail: format!("short curves {{{}}} vs {{{}}}", names(&sx), names(&sy)),
    };

    let mut worst = (0u32, String::from("none"));
    for (piece, &a) in &mx.thick_pieces {
        if let Some(&b) = my.thick_pieces.get(piece) {
            let d = farey_distance(a, b)?;
            if d > worst.0 || worst.1 == "none" {
                worst = (d, format!("piece {piece}: {a} vs {b}"));
            }
        }
    }
    let c2 = ConditionResult {
        index: 2,
        passed: worst.0 <= cfg.projection_bound,
        value: worst.0 as f64,
        bound: cfg.projection_bound as f64,
        detail: worst.1,
    };

    let mut ratio = (1.0f64, String::from("none"));
    let mut twist = (0.0f64, String::from("none"));
    for cx in mx.short_curves() {
        let Some(cy) = my.pants_curve(cx.curve) else { continue };
        let r = (cx.ext / cy.ext).max(cy.ext / cx.ext);
        if r > ratio.0 || ratio.1 == "none" {
            ratio = (r, format!("{}: {:.6} vs {:.6}", cx.curve, cx.ext, cy.ext));
        }
        let tw = twist_difference(cx, cy).abs() * cx.ext.max(cy.ext);
        if tw > twist.0 || twist.1 == "none" {
            twist = (tw, format!("{}", cx.curve));
        }
    }
    let c3 = ConditionResult {
        index: 3,
        passed: ratio.0 <= cfg.ratio_bound,
        value: ratio.0,
        bound: cfg.ratio_bound,
        detail: ratio.1,
    };
    let c4 = ConditionResult {
        index: 4,
        passed: twist.0 <= cfg.twist_bound,
        value: twist.0,
        bound: cfg.twist_bound,
        detail: twist.1,
    };
    let conditions = vec![c1, c2, c3, c4];
    Ok(BoundedReport {
        holds: conditions.iter().all(|c| c.passed),
        conditions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flat::FlatTorus;

    #[test]
    fn a_point_is_close_to_itself() {
        let x = Surface::Torus(FlatTorus::from_modulus(0.4, 1.1).unwrap());
        let r = bounded_distance_check(&x, &x, &BoundedConfig::default()).unwrap();
        assert!(r.holds);
        assert_eq!(r.conditions.len(), 4);
    }

    #[test]
    fn far_flow_breaks_short_set() {
        let x = Surface::Torus(FlatTorus::square());
        let y = Surface::Torus(FlatTorus::square().flow(3.0));
        let r = bounded_distance_check(&x, &y, &BoundedConfig::default()).unwrap();
        assert!(!r.holds);
        assert_eq!(r.failed()[0], 1);
    }
}
