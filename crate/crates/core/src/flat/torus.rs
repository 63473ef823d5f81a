use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use twofloat::TwoFloat;

use crate::farey::normalize_to_infinity;
use crate::lattice::{cross, dot, norm, Gram};
use crate::slope::Slope;

const UNIT_AREA_TOL: f64 = 1e-9;
const TIE_TOL: f64 = 1e-12;

/// Horizontal/vertical decomposition of a flat length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatLength {
    pub length: f64,
    pub horizontal: f64,
    pub vertical: f64,
}

/// Vertical (`λ−`) and horizontal (`λ+`) foliation directions, given as
/// real homology directions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoliationPair {
    pub vertical: [f64; 2],
    pub horizontal: [f64; 2],
}

fn slope_direction(s: f64) -> [f64; 2] {
    if s.is_infinite() {
        [0.0, 1.0]
    } else {
        [1.0, s]
    }
}

impl FoliationPair {
    /// Foliations by real slopes (`y/x` in homology coordinates); `±∞` is
    /// the direction of `1/0`.
    pub fn from_slopes(vertical: f64, horizontal: f64) -> Result<Self> {
        let pair = FoliationPair {
            vertical: slope_direction(vertical),
            horizontal: slope_direction(horizontal),
        };
        if cross(pair.vertical, pair.horizontal).abs() < 1e-15 || vertical.is_nan() || horizontal.is_nan() {
            return Err(Error::InvalidParameter(
                "vertical and horizontal foliations must be distinct".into(),
            ));
        }
        Ok(pair)
    }

    pub fn vertical_slope(&self) -> f64 {
        self.vertical[1] / self.vertical[0]
    }

    pub fn horizontal_slope(&self) -> f64 {
        self.horizontal[1] / self.horizontal[0]
    }

    pub fn swapped(&self) -> Self {
        FoliationPair {
            vertical: self.horizontal,
            horizontal: self.vertical,
        }
    }
}

type Dd = TwoFloat;

fn dd_dot(row: [Dd; 2], x: f64, y: f64) -> f64 {
    f64::from(row[0] * x + row[1] * y)
}

/// A marked flat torus of area `scale²`.
///
/// The basis columns are the holonomies of `0/1` and `1/0` at time zero;
/// the torus has been flowed for `time`, so the current basis is
/// `diag(e^time, e^-time) · base`. Keeping the flow time separately makes
/// repeated flows add exactly.
///
/// The base is kept in double-double precision. Flowing for time `t`
/// magnifies errors in the base by up to `e^{2t}`, so plain `f64` stops
/// resolving the short curves around `|t| ≈ 18`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatTorus {
    base: [[Dd; 2]; 2],
    time: f64,
    scale: f64,
}

impl FlatTorus {
    /// `basis[row][col]`, columns the holonomies of `0/1` and `1/0`.
    pub fn new(basis: [[f64; 2]; 2], scale: f64) -> Result<Self> {
        Self::with_time(basis, 0.0, scale)
    }

    pub fn with_time(basis: [[f64; 2]; 2], time: f64, scale: f64) -> Result<Self> {
        let b = basis.map(|row| row.map(Dd::from));
        Self::from_extended(b, time, scale)
    }

    /// Builds a torus from a double-double base.
    pub fn from_extended(basis: [[Dd; 2]; 2], time: f64, scale: f64) -> Result<Self> {
        let det = f64::from(basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0]);
        if !((det.abs() - 1.0).abs() <= UNIT_AREA_TOL) {
            return Err(Error::InvalidParameter(format!(
                "basis determinant {det} is not ±1"
            )));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter(format!("scale {scale} must be positive")));
        }
        if !time.is_finite() || basis.iter().flatten().any(|v| !v.hi().is_finite() || !v.lo().is_finite()) {
            return Err(Error::InvalidParameter("non-finite torus data".into()));
        }
        Ok(FlatTorus {
            base: basis,
            time,
            scale,
        })
    }

    pub fn square() -> Self {
        FlatTorus::new([[1.0, 0.0], [0.0, 1.0]], 1.0).expect("square torus")
    }

    /// The unit-area torus whose vertical and horizontal foliations are
    /// the given homology directions.
    pub fn from_foliations(f: &FoliationPair) -> Result<Self> {
        let dd = |v: [f64; 2]| v.map(Dd::from);
        FlatTorus::from_extended_directions(dd(f.vertical), dd(f.horizontal))
    }

    /// As [`FlatTorus::from_foliations`], with directions in double-double
    /// precision.
    pub fn from_extended_directions(vertical: [Dd; 2], horizontal: [Dd; 2]) -> Result<Self> {
        let (h, v) = (horizontal, vertical);
        let det = h[0] * v[1] - h[1] * v[0];
        if f64::from(det).abs() < 1e-15 || !f64::from(det).is_finite() {
            return Err(Error::InvalidParameter("degenerate foliation pair".into()));
        }
        // B [h v] = diag(a, b) with a b = det so that det B = 1
        let a = det.abs().sqrt();
        let b = det / a;
        let basis = [
            [a * v[1] / det, -(a * v[0]) / det],
            [-(b * h[1]) / det, b * h[0] / det],
        ];
        FlatTorus::from_extended(basis, 0.0, 1.0)
    }

    /// The unit-area torus with modulus `x + iy`, with `0/1` horizontal.
    pub fn from_modulus(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidParameter(format!("modulus ({x}, {y}) is not in the upper half-plane")));
        }
        let a = Dd::from(y).sqrt().recip();
        FlatTorus::from_extended([[a, a * x], [Dd::from(0.0), a * y]], 0.0, 1.0)
    }

    /// The torus on the axis of `[[2,1],[1,1]]` whose vertical foliation is
    /// the expanding eigendirection (slope `1/φ`) and horizontal foliation
    /// the contracting one (slope `−φ`).
    pub fn anosov_axis() -> Self {
        let one = Dd::from(1.0);
        let phi = (one + Dd::from(5.0).sqrt()) / 2.0;
        // eigenvectors of equal length, so the lattice is a rotated square
        FlatTorus::from_extended_directions([phi, one], [one, -phi]).expect("anosov torus")
    }

    /// Base basis rounded to `f64`.
    pub fn base_basis(&self) -> [[f64; 2]; 2] {
        self.base.map(|row| row.map(f64::from))
    }

    /// Base basis in double-double precision.
    pub fn extended_base(&self) -> [[Dd; 2]; 2] {
        self.base
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Current basis (unscaled).
    pub fn basis(&self) -> [[f64; 2]; 2] {
        let (e, f) = (self.time.exp(), (-self.time).exp());
        let b = self.base_basis();
        [[e * b[0][0], e * b[0][1]], [f * b[1][0], f * b[1][1]]]
    }

    /// Scaled current basis, i.e. the holonomy map on homology.
    pub fn holonomy_map(&self) -> [[f64; 2]; 2] {
        let b = self.basis();
        let s = self.scale;
        [[s * b[0][0], s * b[0][1]], [s * b[1][0], s * b[1][1]]]
    }

    pub fn area(&self) -> f64 {
        let b = &self.base;
        self.scale * self.scale * f64::from(b[0][0] * b[1][1] - b[0][1] * b[1][0]).abs()
    }

    pub fn flow(&self, t: f64) -> Self {
        FlatTorus {
            time: self.time + t,
            ..*self
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        FlatTorus {
            scale: self.scale * factor,
            ..*self
        }
    }

    /// The same torus turned a quarter turn, so that the flow runs
    /// backwards: `quarter_turn().flow(−t)` is `flow(t)` turned.
    pub fn quarter_turn(&self) -> Self {
        let b = self.base;
        FlatTorus {
            base: [b[1], [-b[0][0], -b[0][1]]],
            time: -self.time,
            scale: self.scale,
        }
    }

    /// Holonomy of a real homology vector; each component is accurate to
    /// `f64` relative precision.
    pub fn holonomy_of(&self, v: [f64; 2]) -> [f64; 2] {
        let s = self.scale;
        [
            s * self.time.exp() * dd_dot(self.base[0], v[0], v[1]),
            s * (-self.time).exp() * dd_dot(self.base[1], v[0], v[1]),
        ]
    }

    fn holonomy_int(&self, v: [i64; 2]) -> [f64; 2] {
        self.holonomy_of([v[0] as f64, v[1] as f64])
    }

    pub fn holonomy(&self, s: Slope) -> [f64; 2] {
        self.holonomy_int(s.homology())
    }

    pub fn flat_length(&self, s: Slope) -> FlatLength {
        let [x, y] = self.holonomy(s);
        FlatLength {
            length: x.hypot(y),
            horizontal: x.abs(),
            vertical: y.abs(),
        }
    }

    /// Homology direction of the vertical foliation `λ−`.
    pub fn vertical_direction(&self) -> [f64; 2] {
        let b = &self.base;
        // B⁻¹ (0, 1) up to the positive factor 1/|det B|
        let sign = f64::from(b[0][0] * b[1][1] - b[0][1] * b[1][0]).signum();
        [-f64::from(b[0][1]) * sign, f64::from(b[0][0]) * sign]
    }

    /// Homology direction of the horizontal foliation `λ+`.
    pub fn horizontal_direction(&self) -> [f64; 2] {
        let b = &self.base;
        let sign = f64::from(b[0][0] * b[1][1] - b[0][1] * b[1][0]).signum();
        [f64::from(b[1][1]) * sign, -f64::from(b[1][0]) * sign]
    }

    pub fn foliations(&self) -> FoliationPair {
        FoliationPair {
            vertical: self.vertical_direction(),
            horizontal: self.horizontal_direction(),
        }
    }

    /// Homology vector with the given holonomy (real coefficients).
    pub fn pull_back(&self, w: [f64; 2]) -> [f64; 2] {
        let m = self.holonomy_map();
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        [
            (m[1][1] * w[0] - m[0][1] * w[1]) / det,
            (-m[1][0] * w[0] + m[0][0] * w[1]) / det,
        ]
    }

    /// Holonomies `(w₁, w₂)` of the basis in which `alpha` is `1/0`:
    /// `w₂ = hol(alpha)` and `w₁` the holonomy of the companion vector of
    /// [`normalize_to_infinity`].
    pub fn normalized_frame(&self, alpha: Slope) -> ([f64; 2], [f64; 2]) {
        let inv = normalize_to_infinity(alpha).inverse();
        let w1 = self.holonomy_int(inv.apply([1, 0]));
        let w2 = self.holonomy_int(inv.apply([0, 1]));
        (w1, w2)
    }

    /// Normalized slope (after sending `alpha` to `1/0`) of the direction
    /// flat perpendicular to `alpha`: `−(w₁·w₂)/|w₂|²`.
    pub fn transversal_slope(&self, alpha: Slope) -> f64 {
        let (w1, w2) = self.normalized_frame(alpha);
        -dot(w1, w2) / dot(w2, w2)
    }

    /// Relative twisting of the vertical and horizontal foliations around
    /// `alpha`: the difference of their normalized slopes, `y₁/y₂ − x₁/x₂`
    /// in the normalized frame.
    pub fn foliation_twist(&self, alpha: Slope) -> f64 {
        let (w1, w2) = self.normalized_frame(alpha);
        w1[1] / w2[1] - w1[0] / w2[0]
    }

    fn best_of(&self, candidates: impl IntoIterator<Item = [i64; 2]>) -> Option<(Slope, f64)> {
        let mut best: Option<(Slope, f64)> = None;
        for v in candidates {
            let Ok(s) = Slope::from_homology(v[0], v[1]) else { continue };
            let len = norm(self.holonomy(s));
            best = match best {
                None => Some((s, len)),
                Some((bs, bl)) => {
                    if len < bl * (1.0 - TIE_TOL) || (len <= bl * (1.0 + TIE_TOL) && s < bs) {
                        Some((s, len.min(bl)))
                    } else {
                        Some((bs, bl))
                    }
                }
            };
        }
        best
    }

    /// Shortest slope and its flat length; exact ties go to the smaller
    /// slope in value order (infinity last).
    pub fn systole(&self) -> (Slope, f64) {
        let g = Gram::new(|v| self.holonomy_int(v));
        let min = g.minimum();
        self.best_of(g.enumerate(min * (1.0 + 1e-9)))
            .expect("a lattice has a shortest vector")
    }

    /// Shortest slope having a straight representative disjoint from a
    /// segment with holonomy `slit`: closed geodesics of slope `s` miss the
    /// segment iff `|slit × hol(s)| < area`.
    pub fn restricted_systole(&self, slit: [f64; 2]) -> (Slope, f64) {
        let area = self.area();
        let width = norm(slit);
        if width == 0.0 {
            return self.systole();
        }
        let dir = [slit[0] / width, slit[1] / width];
        let perp = [-dir[1], dir[0]];
        let band = area / width;
        let mut radius = self.systole().1;
        loop {
            let across = band.min(radius);
            // ellipse containing the rectangle |along| ≤ R, |across| ≤ band
            let g = Gram::new(|v| {
                let h = self.holonomy_int(v);
                [dot(dir, h) / radius, dot(perp, h) / across]
            });
            let allowed = g.enumerate(2.0).into_iter().filter(|&v| {
                let h = self.holonomy_int(v);
                cross(slit, h).abs() < area && norm(h) <= radius
            });
            if let Some(best) = self.best_of(allowed) {
                return best;
            }
            radius *= 2.0;
        }
    }

    /// Modulus `τ = hol(1/0) / hol(0/1)` in the upper half-plane, as `(re, im)`.
    pub fn modulus(&self) -> (f64, f64) {
        let a = self.holonomy_int([1, 0]);
        let b = self.holonomy_int([0, 1]);
        let den = dot(a, a);
        let re = dot(a, b) / den;
        // the flow has determinant 1, so hol(1/0) × hol(0/1) is the area;
        // evaluating the cross product directly cancels badly once flowed
        let im = self.area() / den;
        (re, im)
    }
}
