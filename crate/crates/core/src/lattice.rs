//! Integer 2×2 matrices and two-dimensional lattice enumeration.

use crate::slope::Slope;

/// Integer 2×2 matrix acting on homology vectors `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat2i(pub [[i64; 2]; 2]);

impl Mat2i {
    pub const IDENTITY: Mat2i = Mat2i([[1, 0], [0, 1]]);

    pub fn det(&self) -> i64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, v: [i64; 2]) -> [i64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn apply_f64(&self, v: [f64; 2]) -> [f64; 2] {
        let m = &self.0;
        [
            m[0][0] as f64 * v[0] + m[0][1] as f64 * v[1],
            m[1][0] as f64 * v[0] + m[1][1] as f64 * v[1],
        ]
    }

    /// Action on slopes through their homology classes.
    pub fn act(&self, s: Slope) -> Slope {
        let [x, y] = self.apply(s.homology());
        Slope::from_homology(x, y).expect("unimodular image of a nonzero vector")
    }

    pub fn mul(&self, other: &Mat2i) -> Mat2i {
        let (a, b) = (&self.0, &other.0);
        let mut out = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2i(out)
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Mat2i {
        let d = self.det();
        assert!(d == 1 || d == -1, "inverse of non-unimodular matrix");
        let m = &self.0;
        Mat2i([[m[1][1] * d, -m[0][1] * d], [-m[1][0] * d, m[0][0] * d]])
    }
}

pub(crate) fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub(crate) fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub(crate) fn norm(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

/// The positive definite form `v ↦ |M v|²` of a lattice, given by the
/// map `v ↦ M v` on integer vectors.
///
/// Reduction works on images of integer vectors rather than on Gram
/// entries, which cancel badly for long thin lattices; the image map can
/// therefore be evaluated in extended precision by the caller.
pub(crate) struct Gram<F> {
    image: F,
}

/// A reduced basis: `e` and `f` are the images of the columns of `u`.
#[derive(Debug, Clone, Copy)]
struct Reduced {
    e: [f64; 2],
    f: [f64; 2],
    u: Mat2i,
}

/// The lattice spanned by the columns of `m`.
#[cfg(test)]
pub(crate) fn of_rows(m: [[f64; 2]; 2]) -> Gram<impl Fn([i64; 2]) -> [f64; 2]> {
    Gram::new(move |v: [i64; 2]| {
        let (x, y) = (v[0] as f64, v[1] as f64);
        [m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y]
    })
}

impl<F: Fn([i64; 2]) -> [f64; 2]> Gram<F> {
    pub(crate) fn new(image: F) -> Self {
        Gram { image }
    }

    #[cfg(test)]
    pub(crate) fn eval(&self, v: [i64; 2]) -> f64 {
        let w = (self.image)(v);
        dot(w, w)
    }

    /// Lagrange–Gauss reduction with the unimodular change of basis.
    fn reduce(&self) -> Reduced {
        let mut u = Mat2i::IDENTITY;
        let col = |u: &Mat2i, j: usize| [u.0[0][j], u.0[1][j]];
        let mut e = (self.image)(col(&u, 0));
        let mut f = (self.image)(col(&u, 1));
        let swap = |u: &mut Mat2i| {
            u.0[0].swap(0, 1);
            u.0[1].swap(0, 1);
        };
        if dot(e, e) > dot(f, f) {
            swap(&mut u);
            std::mem::swap(&mut e, &mut f);
        }
        for _ in 0..10_000 {
            let mu = (dot(e, f) / dot(e, e)).round();
            if mu != 0.0 {
                let k = mu as i64;
                u.0[0][1] -= k * u.0[0][0];
                u.0[1][1] -= k * u.0[1][0];
                // recompute from integer coordinates to avoid drift
                f = (self.image)(col(&u, 1));
            }
            if dot(f, f) < dot(e, e) {
                swap(&mut u);
                std::mem::swap(&mut e, &mut f);
            } else {
                break;
            }
        }
        Reduced { e, f, u }
    }

    /// All nonzero integer vectors with `|M v|² <= bound`.
    pub(crate) fn enumerate(&self, bound: f64) -> Vec<[i64; 2]> {
        let r = self.reduce();
        let a = dot(r.e, r.e);
        let b = dot(r.e, r.f);
        let det = cross(r.e, r.f).powi(2);
        let mut out = Vec::new();
        if !(det > 0.0) || bound <= 0.0 {
            return out;
        }
        // pad the ellipse slightly so that rounding never drops a vector
        let pad = bound * (1.0 + 1e-9);
        let ymax = (pad * a / det).sqrt().floor() as i64;
        for y in -ymax..=ymax {
            let yf = y as f64;
            let rest = pad - (det / a) * yf * yf;
            if rest < 0.0 {
                continue;
            }
            let center = -b * yf / a;
            let half = (rest / a).sqrt();
            let lo = (center - half).ceil() as i64;
            let hi = (center + half).floor() as i64;
            for x in lo..=hi {
                if x == 0 && y == 0 {
                    continue;
                }
                let v = r.u.apply([x, y]);
                let w = (self.image)(v);
                if dot(w, w) <= bound {
                    out.push(v);
                }
            }
        }
        out
    }

    /// Length of the shortest nonzero vector (squared).
    pub(crate) fn minimum(&self) -> f64 {
        let r = self.reduce();
        dot(r.e, r.e)
    }
}
