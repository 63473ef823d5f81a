use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flat::FlatTorus;

/// A point `x + iy` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UHPoint {
    pub x: f64,
    pub y: f64,
}

impl UHPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidParameter(format!("({x}, {y}) is not in the upper half-plane")));
        }
        Ok(UHPoint { x, y })
    }
}

/// Distance in the curvature −1 metric.
pub fn hyperbolic_distance(p: UHPoint, q: UHPoint) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    // 2·asinh(half chord / √(y₁y₂)) is the cancellation-free form of
    // arccosh(1 + (dx² + dy²)/(2 y₁ y₂))
    let s = (dx * dx + dy * dy).sqrt() / (2.0 * (p.y * q.y).sqrt());
    2.0 * s.asinh()
}

/// Teichmüller distance between two marked flat tori: half the
/// hyperbolic distance of their moduli.
pub fn torus_teichmuller_distance(a: &FlatTorus, b: &FlatTorus) -> f64 {
    let (ax, ay) = a.modulus();
    let (bx, by) = b.modulus();
    0.5 * hyperbolic_distance(UHPoint { x: ax, y: ay }, UHPoint { x: bx, y: by })
}

/// Point at hyperbolic distance `s` from `p` along the geodesic leaving
/// `p` at `angle` from the upward vertical, counterclockwise.
///
/// Uses the rotation by `φ = angle/2` about `i` applied to `i·e^s`,
/// `(½ sin 2φ (1 − e^{2s}) + i e^s) / (cos²φ + e^{2s} sin²φ)`, which stays
/// accurate far out towards the boundary.
pub fn exp_map(p: UHPoint, angle: f64, s: f64) -> UHPoint {
    let (sin, cos) = (0.5 * angle).sin_cos();
    let e2 = (2.0 * s).exp();
    let den = cos * cos + e2 * sin * sin;
    let re = sin * cos * -(2.0 * s).exp_m1() / den;
    let im = s.exp() / den;
    UHPoint {
        x: p.x + p.y * re,
        y: p.y * im,
    }
}

/// Point a fraction `f ∈ [0, 1]` of the way along the geodesic from `p`
/// to `q`.
pub fn geodesic_point(p: UHPoint, q: UHPoint, f: f64) -> UHPoint {
    let d = hyperbolic_distance(p, q);
    if d == 0.0 {
        return p;
    }
    // direction of q after moving p to i
    let u = (q.x - p.x) / p.y;
    let v = q.y / p.y;
    let angle = (-2.0 * u).atan2((u * u + v * v) - 1.0);
    exp_map(p, angle, f * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pt(x: f64, y: f64) -> UHPoint {
        UHPoint::new(x, y).unwrap()
    }

    /// Hyperbolic length of the vertical segment from y0 to y1 by midpoint
    /// quadrature.
    fn vertical_length(y0: f64, y1: f64, n: usize) -> f64 {
        let h = (y1 - y0) / n as f64;
        (0..n)
            .map(|i| {
                let y = y0 + (i as f64 + 0.5) * h;
                h / y
            })
            .sum()
    }

    #[test]
    fn examples() {
        assert_eq!(hyperbolic_distance(pt(0.3, 2.0), pt(0.3, 2.0)), 0.0);
        assert_relative_eq!(hyperbolic_distance(pt(0.0, 1.0), pt(0.0, 2f64.exp())), 2.0, epsilon = 1e-14);
        assert_relative_eq!(
            hyperbolic_distance(pt(1.0, 1.0), pt(0.0, 1.0)),
            1.5f64.acosh(),
            epsilon = 1e-14
        );
        assert_relative_eq!(vertical_length(1.0, 2f64.exp(), 100_000), 2.0, epsilon = 1e-8);
    }

    #[test]
    fn geodesic_integration_matches_formula() {
        // integrate the metric along the semicircle through (1,1) and (0,1)
        let (c, r) = (0.5, 1.25f64.sqrt());
        let theta0 = 1.0f64.atan2(1.0 - c);
        let theta1 = 1.0f64.atan2(0.0 - c);
        let n = 200_000;
        let h = (theta1 - theta0) / n as f64;
        let mut len = 0.0;
        for i in 0..n {
            let th = theta0 + (i as f64 + 0.5) * h;
            len += r * h.abs() / (r * th.sin());
        }
        assert_relative_eq!(len, 1.5f64.acosh(), epsilon = 1e-8);
    }

    #[test]
    fn exp_map_moves_the_requested_distance() {
        let p = pt(0.4, 1.7);
        for k in 0..8 {
            let angle = k as f64 * 0.8;
            let q = exp_map(p, angle, 1.3);
            assert_relative_eq!(hyperbolic_distance(p, q), 1.3, epsilon = 1e-10);
        }
    }

    #[test]
    fn exp_map_directions() {
        let i = pt(0.0, 1.0);
        let up = exp_map(i, 0.0, 2.0);
        assert_relative_eq!(up.x, 0.0, epsilon = 1e-15);
        assert_relative_eq!(up.y, 2f64.exp(), max_relative = 1e-15);
        let down = exp_map(i, std::f64::consts::PI, 2.0);
        assert_relative_eq!(down.y, (-2f64).exp(), max_relative = 1e-14);
        // a quarter turn counterclockwise from up heads left
        assert!(exp_map(i, std::f64::consts::FRAC_PI_2, 0.1).x < 0.0);
    }

    #[test]
    fn long_geodesics_stay_accurate() {
        let p = pt(0.0, 1.0);
        let q = exp_map(p, 0.3, 40.0);
        assert_relative_eq!(hyperbolic_distance(p, q), 40.0, max_relative = 1e-12);
        let m = geodesic_point(p, q, 0.5);
        assert_relative_eq!(hyperbolic_distance(p, m), 20.0, max_relative = 1e-12);
    }

    #[test]
    fn geodesic_point_splits_distance() {
        let (p, q) = (pt(-1.0, 0.5), pt(2.0, 3.0));
        let d = hyperbolic_distance(p, q);
        for f in [0.0, 0.25, 0.5, 0.9, 1.0] {
            let m = geodesic_point(p, q, f);
            assert_relative_eq!(hyperbolic_distance(p, m), f * d, epsilon = 1e-9);
            assert_relative_eq!(hyperbolic_distance(m, q), (1.0 - f) * d, epsilon = 1e-9);
        }
    }

    #[test]
    fn flow_is_a_unit_speed_teichmuller_geodesic() {
        let q = FlatTorus::anosov_axis();
        for t in [0.5, 2.0, 7.0] {
            assert_relative_eq!(torus_teichmuller_distance(&q, &q.flow(t)), t, epsilon = 1e-9);
        }
    }
}
