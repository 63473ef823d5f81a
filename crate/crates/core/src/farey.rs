//! Intersection numbers, continued fractions and the Farey graph.
//!
//! Distances are computed by sending one endpoint to `1/0` and searching
//! the convergents of the image of the other endpoint. Every geodesic of
//! the Farey graph between `1/0` and `x` stays inside the ladder of
//! triangles crossed by the hyperbolic geodesic from `∞` to `x`, and a
//! geodesic can be routed through convergents only; fan vertices
//! `c_{k-1} + c_k` appear on geodesics exactly when the next partial
//! quotient is 2, so those are added when building explicit paths.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Mat2i;
use crate::slope::Slope;

/// Geometric intersection number `|ps − qr|` of two slopes.
pub fn intersection(a: Slope, b: Slope) -> u64 {
    let [x1, y1] = a.homology();
    let [x2, y2] = b.homology();
    (x1 as i128 * y2 as i128 - y1 as i128 * x2 as i128).unsigned_abs() as u64
}

pub fn adjacent(a: Slope, b: Slope) -> bool {
    intersection(a, b) == 1
}

/// Extended Euclid: `(g, s, t)` with `s·a + t·b = g = gcd(a, b) >= 0`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// An orientation-preserving change of marking sending `alpha` to `1/0`.
///
/// The result has determinant 1 and is the identity for `alpha = 1/0`.
pub fn normalize_to_infinity(alpha: Slope) -> Mat2i {
    let (p, q) = (alpha.numerator(), alpha.denominator());
    let (_, b, a) = ext_gcd(q, p);
    Mat2i([[p, -q], [b, a]])
}

/// Partial quotients of `p/q`, `q > 0`, with floor convention.
pub fn continued_fraction(p: i64, q: i64) -> Vec<i64> {
    assert!(q > 0, "continued fraction of a non-finite slope");
    let (mut p, mut q) = (p, q);
    let mut out = Vec::new();
    while q != 0 {
        let a = p.div_euclid(q);
        out.push(a);
        (p, q) = (q, p - a * q);
    }
    out
}

/// Convergents `p_k/q_k` of a partial-quotient sequence, as homology
/// vectors `(q_k, p_k)`.
pub fn convergent_vectors(quotients: &[i64]) -> Vec<[i64; 2]> {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut out = Vec::with_capacity(quotients.len());
    for &a in quotients {
        let h = a * h1 + h0;
        let k = a * k1 + k0;
        out.push([k, h]);
        (h0, h1) = (h1, h);
        (k0, k1) = (k1, k);
    }
    out
}

pub fn convergents(quotients: &[i64]) -> Vec<Slope> {
    convergent_vectors(quotients)
        .into_iter()
        .map(|[x, y]| Slope::from_homology(x, y).expect("convergent"))
        .collect()
}

/// Partial quotients of a real number, stopping once the next convergent
/// would have denominator above `max_denominator`.
pub fn continued_fraction_f64(x: f64, max_denominator: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut rest = x;
    let (mut k0, mut k1) = (1i64, 0i64);
    for _ in 0..64 {
        if !rest.is_finite() {
            break;
        }
        let a = rest.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let k = match a.checked_mul(k1).and_then(|v| v.checked_add(k0)) {
            Some(k) if k <= max_denominator => k,
            _ => break,
        };
        out.push(a);
        (k0, k1) = (k1, k);
        let frac = rest - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    out
}

/// Limits for Farey searches.
#[derive(Debug, Clone, Copy)]
pub struct FareyConfig {
    pub max_vertices: usize,
}

impl Default for FareyConfig {
    fn default() -> Self {
        FareyConfig {
            max_vertices: 100_000,
        }
    }
}

/// A path in the Farey graph: consecutive vertices adjacent, no repeats.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Slope>", into = "Vec<Slope>")]
pub struct FareyPath {
    vertices: Vec<Slope>,
}

impl FareyPath {
    pub fn new(vertices: Vec<Slope>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidParameter("empty Farey path".into()));
        }
        for w in vertices.windows(2) {
            if !adjacent(w[0], w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "{} and {} are not Farey neighbours",
                    w[0], w[1]
                )));
            }
        }
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::InvalidParameter(format!("vertex {v} repeats")));
            }
        }
        Ok(FareyPath { vertices })
    }

    pub fn vertices(&self) -> &[Slope] {
        &self.vertices
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl TryFrom<Vec<Slope>> for FareyPath {
    type Error = Error;
    fn try_from(v: Vec<Slope>) -> Result<Self> {
        FareyPath::new(v)
    }
}

impl From<FareyPath> for Vec<Slope> {
    fn from(p: FareyPath) -> Self {
        p.vertices
    }
}

/// Ladder between `b` (sent to infinity) and `a`, in normalized coordinates.
/// Index 0 is infinity and the last vertex is the image of `a`.
struct Ladder {
    to_original: Mat2i,
    vertices: Vec<Slope>,
}

impl Ladder {
    fn build(a: Slope, b: Slope, with_fans: bool, cfg: &FareyConfig) -> Result<Ladder> {
        let m = normalize_to_infinity(b);
        let x = m.act(a);
        debug_assert!(!x.is_infinite());
        let quotients = continued_fraction(x.numerator(), x.denominator());
        let conv = convergent_vectors(&quotients);
        let mut vertices = vec![Slope::INFINITY];
        let mut prev = [0i64, 1i64];
        for (k, &c) in conv.iter().enumerate() {
            vertices.push(Slope::from_homology(c[0], c[1])?);
            if with_fans && quotients.get(k + 1) == Some(&2) {
                vertices.push(Slope::from_homology(prev[0] + c[0], prev[1] + c[1])?);
            }
            prev = c;
        }
        if vertices.len() > cfg.max_vertices {
            return Err(Error::SearchBound {
                limit: cfg.max_vertices,
            });
        }
        // the image of `a` must be last for the search below
        let last = x;
        vertices.retain(|v| *v != last);
        vertices.push(last);
        Ok(Ladder {
            to_original: m.inverse(),
            vertices,
        })
    }

    /// BFS distances from vertex 0 (infinity).
    fn distances_from_infinity(&self) -> Vec<u32> {
        let n = self.vertices.len();
        let mut dist = vec![u32::MAX; n];
        dist[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if dist[j] == u32::MAX && adjacent(self.vertices[i], self.vertices[j]) {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        dist
    }
}

pub fn farey_distance(a: Slope, b: Slope) -> Result<u32> {
    farey_distance_with(a, b, &FareyConfig::default())
}

pub fn farey_distance_with(a: Slope, b: Slope, cfg: &FareyConfig) -> Result<u32> {
    if a == b {
        return Ok(0);
    }
    let ladder = Ladder::build(a, b, false, cfg)?;
    let dist = ladder.distances_from_infinity();
    Ok(*dist.last().expect("ladder is nonempty"))
}

pub fn farey_geodesic(a: Slope, b: Slope) -> Result<FareyPath> {
    farey_geodesic_with(a, b, &FareyConfig::default())
}

/// A shortest path from `a` to `b`. Among shortest paths, the one whose
/// vertex at the first point of divergence is smallest in
/// `(denominator, numerator)` is returned.
pub fn farey_geodesic_with(a: Slope, b: Slope, cfg: &FareyConfig) -> Result<FareyPath> {
    if a == b {
        return FareyPath::new(vec![a]);
    }
    let ladder = Ladder::build(a, b, true, cfg)?;
    let dist = ladder.distances_from_infinity();
    let original: Vec<Slope> = ladder
        .vertices
        .iter()
        .map(|&v| ladder.to_original.act(v))
        .collect();
    let mut cur = original.len() - 1;
    let mut path = vec![original[cur]];
    while dist[cur] > 0 {
        let next = (0..original.len())
            .filter(|&j| dist[j] + 1 == dist[cur] && adjacent(original[cur], original[j]))
            .min_by_key(|&j| original[j].height_key())
            .expect("BFS predecessor exists");
        path.push(original[next]);
        cur = next;
    }
    FareyPath::new(path)
}
