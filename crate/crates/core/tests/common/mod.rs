//! Generators and oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::VecDeque;

use rand::Rng;
use teichflow::coarse::{extremal_length_torus, short_marking, CoarseMarking, MarkingConfig};
use teichflow::flat::{FlatTorus, Surface};
use teichflow::Slope;

/// A torus with modulus in the standard fundamental domain, hence thick.
pub fn thick_torus(rng: &mut impl Rng) -> FlatTorus {
    let x: f64 = rng.gen_range(-0.5..0.5);
    let y = rng.gen_range((1.0 - x * x).sqrt()..1.6);
    FlatTorus::from_modulus(x, y).unwrap()
}

/// `q` with its marking changed by a random product of `1..=len`
/// generators of SL(2, Z): same flat torus, different point of
/// Teichmüller space.
pub fn remarked(q: &FlatTorus, rng: &mut impl Rng, len: usize) -> FlatTorus {
    let gens = [[[1, 1], [0, 1]], [[1, 0], [1, 1]], [[1, -1], [0, 1]], [[1, 0], [-1, 1]]];
    let mut m = [[1i64, 0], [0, 1]];
    for _ in 0..rng.gen_range(1..=len) {
        let g = gens[rng.gen_range(0..4)];
        m = [
            [m[0][0] * g[0][0] + m[0][1] * g[1][0], m[0][0] * g[0][1] + m[0][1] * g[1][1]],
            [m[1][0] * g[0][0] + m[1][1] * g[1][0], m[1][0] * g[0][1] + m[1][1] * g[1][1]],
        ];
    }
    let b = q.basis();
    let f = |i: usize, j: usize| b[i][0] * m[0][j] as f64 + b[i][1] * m[1][j] as f64;
    FlatTorus::new([[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]], 1.0).unwrap()
}

/// Modulus `hol(1/0) / hol(0/1)` from the basis columns.
pub fn oracle_modulus(q: &FlatTorus) -> (f64, f64) {
    let b = q.basis();
    let (a, c) = ((b[0][0], b[1][0]), (b[0][1], b[1][1]));
    let n = a.0 * a.0 + a.1 * a.1;
    ((c.0 * a.0 + c.1 * a.1) / n, (a.0 * c.1 - a.1 * c.0) / n)
}

/// `½·d_H` between the moduli.
pub fn oracle_distance(p: &FlatTorus, q: &FlatTorus) -> f64 {
    let (x1, y1) = oracle_modulus(p);
    let (x2, y2) = oracle_modulus(q);
    let chord = (x1 - x2).hypot(y1 - y2);
    (chord / (2.0 * (y1 * y2).sqrt())).asinh()
}

pub fn is_thick(q: &FlatTorus, cfg: &MarkingConfig) -> bool {
    extremal_length_torus(q, q.systole().0) > cfg.eps0
}

pub fn marking(q: &FlatTorus) -> CoarseMarking {
    short_marking(&Surface::Torus(*q), &MarkingConfig::default())
}

/// A thick pair at exact distance in `[lo, hi]`.
pub fn thick_pair(rng: &mut impl Rng, lo: f64, hi: f64) -> (FlatTorus, FlatTorus, f64) {
    let cfg = MarkingConfig::default();
    loop {
        let x = thick_torus(rng);
        let y = remarked(&thick_torus(rng), rng, 12);
        let d = oracle_distance(&x, &y);
        if (lo..=hi).contains(&d) && is_thick(&x, &cfg) && is_thick(&y, &cfg) {
            return (x, y, d);
        }
    }
}

/// Slopes in `[−1, 1]` with denominator at most [`MAX_DEN`], and `1/0`.
/// Farey geodesics between them stay inside this set, so breadth-first
/// search on the induced subgraph gives true distances.
pub const MAX_DEN: i64 = 20;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn small_slopes() -> Vec<(i64, i64)> {
    let mut out = vec![(1, 0)];
    for q in 1..=MAX_DEN {
        for p in -q..=q {
            if gcd(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

/// All-pairs distances by BFS on the induced subgraph.
pub fn bfs_oracle(v: &[(i64, i64)]) -> Vec<Vec<u32>> {
    let n = v.len();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| (v[i].0 * v[j].1 - v[i].1 * v[j].0).abs() == 1)
                .collect()
        })
        .collect();
    (0..n)
        .map(|s| {
            let mut dist = vec![u32::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if dist[w] == u32::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            dist
        })
        .collect()
}

pub fn slope(v: (i64, i64)) -> Slope {
    Slope::new(v.0, v.1).unwrap()
}

