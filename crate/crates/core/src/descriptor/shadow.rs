use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coarse::{CurveId, PieceId};
use crate::descriptor::ray::{evolution_of, GeodesicRay};
use crate::error::{Error, Result};
use crate::farey::farey_distance;
use crate::flat::{cylinder_modulus_profile, twist_profile, CurveEvolution, Surface};
use crate::slope::Slope;
use crate::table::{Cell, Table};

/// Default spacing of shadow samples.
pub const DEFAULT_SHADOW_STEP: f64 = 0.1;
/// Largest Farey jump between consecutive samples of an adaptive shadow.
pub const MAX_SHADOW_JUMP: u32 = 2;
/// Refinement stops below this time step.
pub const MIN_REFINE_STEP: f64 = 1e-6;

/// The marking slope of a piece at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShadowSample {
    pub time: f64,
    pub slope: Slope,
    /// Flat length of `slope`.
    pub length: f64,
    /// Twist accumulated around `slope` so far, `T/(1 + e^{−2(t − t_bal)})²`;
    /// missing when `slope` is a foliation direction.
    pub twist: Option<f64>,
    /// On a torus, the cylinder modulus of `slope`; on a slit piece, the
    /// expanding modulus of `γ` on the piece's side.
    pub modulus: Option<f64>,
}

/// Marking slopes of a piece at increasing times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowSequence {
    pub piece: PieceId,
    pub samples: Vec<ShadowSample>,
}

impl ShadowSequence {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.time).collect()
    }

    pub fn vertices(&self) -> Vec<Slope> {
        self.samples.iter().map(|s| s.slope).collect()
    }

    /// Largest Farey distance between consecutive vertices.
    pub fn max_jump(&self) -> Result<u32> {
        let mut best = 0;
        for w in self.samples.windows(2) {
            best = best.max(farey_distance(w[0].slope, w[1].slope)?);
        }
        Ok(best)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["time", "slope", "length", "twist", "modulus"]);
        for s in &self.samples {
            t.push(vec![
                Cell::real(s.time),
                Cell::text(s.slope),
                Cell::real(s.length),
                Cell::opt_real(s.twist),
                Cell::opt_real(s.modulus),
            ]);
        }
        t
    }

    pub fn to_tsv(&self) -> String {
        self.to_table().to_tsv()
    }
}

/// Samples a ray's marking slopes for one piece, caching evolutions.
struct Sampler<'a> {
    ray: &'a GeodesicRay,
    piece: PieceId,
    evolutions: BTreeMap<Slope, Option<CurveEvolution>>,
}

impl<'a> Sampler<'a> {
    fn new(ray: &'a GeodesicRay, piece: PieceId) -> Result<Self> {
        let ok = match (ray.start(), piece) {
            (Surface::Torus(_), PieceId::Torus) => true,
            (Surface::Slit(_), PieceId::Y | PieceId::Z) => true,
            _ => false,
        };
        if !ok {
            return Err(Error::TopologyMismatch(
                ray.start().topology().to_string(),
                format!("piece {piece}"),
            ));
        }
        Ok(Sampler {
            ray,
            piece,
            evolutions: BTreeMap::new(),
        })
    }

    fn sample(&mut self, time: f64) -> ShadowSample {
        let (slope, length, side_modulus) = match (self.ray.at(time), self.piece.as_piece()) {
            (Surface::Torus(t), _) => {
                let (s, l) = t.systole();
                (s, l, None)
            }
            (Surface::Slit(q), Some(p)) => {
                let (s, l) = q.piece(p).restricted_systole(q.slit_holonomy());
                (s, l, Some(q.expanding_modulus(p)))
            }
            (Surface::Slit(_), None) => unreachable!("checked in new"),
        };
        let (ray, piece) = (self.ray, self.piece);
        let ev = *self
            .evolutions
            .entry(slope)
            .or_insert_with(|| evolution_of(ray, CurveId::in_piece(piece, slope)).ok());
        let modulus = match side_modulus {
            Some(m) => Some(m),
            None => ev.map(|e| cylinder_modulus_profile(&e, time)),
        };
        ShadowSample {
            time,
            slope,
            length,
            twist: ev.map(|e| twist_profile(&e, time)),
            modulus,
        }
    }
}

/// Marking slope of `piece` at each of `times`: the systole on a torus,
/// the shortest slope missing the slit on a slit-surface piece.
pub fn shadow(ray: &GeodesicRay, piece: PieceId, times: &[f64]) -> Result<ShadowSequence> {
    for w in times.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::InvalidParameter("shadow times must increase strictly".into()));
        }
    }
    if let Some(&t) = times.iter().find(|&&t| !ray.contains(t)) {
        let r = ray.t_range();
        return Err(Error::InvalidParameter(format!(
            "time {t} lies outside [{}, {}]",
            r.min, r.max
        )));
    }
    let mut sampler = Sampler::new(ray, piece)?;
    Ok(ShadowSequence {
        piece,
        samples: times.iter().map(|&t| sampler.sample(t)).collect(),
    })
}

/// Shadow on a grid of spacing `step` over the whole ray, refined by
/// bisection wherever consecutive vertices are more than
/// [`MAX_SHADOW_JUMP`] apart.
pub fn shadow_adaptive(ray: &GeodesicRay, piece: PieceId, step: f64) -> Result<ShadowSequence> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParameter(format!("step {step} must be positive")));
    }
    let r = ray.t_range();
    let n = ((r.max - r.min) / step).ceil() as usize + 1;
    let times = ray.sample_times(n.max(2));
    let mut sampler = Sampler::new(ray, piece)?;
    let grid: Vec<_> = times.iter().map(|&t| sampler.sample(t)).collect();
    let mut samples = vec![grid[0]];
    for w in grid.windows(2) {
        refine(&mut sampler, w[0], w[1], &mut samples)?;
        samples.push(w[1]);
    }
    Ok(ShadowSequence { piece, samples })
}

fn refine(
    sampler: &mut Sampler,
    a: ShadowSample,
    b: ShadowSample,
    out: &mut Vec<ShadowSample>,
) -> Result<()> {
    if b.time - a.time <= MIN_REFINE_STEP || farey_distance(a.slope, b.slope)? <= MAX_SHADOW_JUMP {
        return Ok(());
    }
    let mid = sampler.sample(0.5 * (a.time + b.time));
    refine(sampler, a, mid, out)?;
    out.push(mid);
    refine(sampler, mid, b, out)
}

/// Summary of the reverse triangle defects
/// `d(v_r, v_s) + d(v_s, v_t) − d(v_r, v_t)` over triples `r < s < t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub max: u32,
    pub mean: f64,
    /// A triple attaining the maximum.
    pub argmax: [usize; 3],
    pub triples: u64,
}

/// Maximal reverse triangle defect of a vertex sequence.
pub fn backtrack_defect(s: &ShadowSequence) -> Result<u32> {
    Ok(defect_report(&s.vertices())?.max)
}

/// Defect statistics of a vertex sequence with at least three entries.
///
/// Runs of equal consecutive vertices are collapsed first; a triple with
/// two indices in one run has defect zero, so the maximum is unchanged
/// and the mean is recovered by weighting with run lengths.
pub fn defect_report(vertices: &[Slope]) -> Result<DefectReport> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "defect needs at least 3 vertices, got {n}"
        )));
    }
    let mut runs: Vec<(Slope, usize, u64)> = Vec::new();
    for (i, &v) in vertices.iter().enumerate() {
        match runs.last_mut() {
            Some(last) if last.0 == v => last.2 += 1,
            _ => runs.push((v, i, 1)),
        }
    }
    let m = runs.len();
    let mut dist = vec![0u32; m * m];
    for i in 0..m {
        for j in i + 1..m {
            let d = farey_distance(runs[i].0, runs[j].0)?;
            dist[i * m + j] = d;
            dist[j * m + i] = d;
        }
    }
    let mut best = (0u32, [0, 1, 2]);
    let mut weighted = 0u128;
    for r in 0..m {
        for s in r + 1..m {
            for t in s + 1..m {
                let defect = dist[r * m + s] + dist[s * m + t] - dist[r * m + t];
                if defect > best.0 {
                    best = (defect, [runs[r].1, runs[s].1, runs[t].1]);
                }
                weighted += defect as u128 * (runs[r].2 * runs[s].2 * runs[t].2) as u128;
            }
        }
    }
    let n = n as u64;
    let triples = n * (n - 1) * (n - 2) / 6;
    Ok(DefectReport {
        max: best.0,
        mean: weighted as f64 / triples as f64,
        argmax: best.1,
        triples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::{convergents, farey_geodesic};
    use crate::flat::FlatTorus;

    fn s(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    /// Defect by the plain triple scan.
    fn brute_defect(v: &[Slope]) -> (u32, f64) {
        let mut max = 0;
        let mut sum = 0u64;
        let mut count = 0u64;
        for r in 0..v.len() {
            for s in r + 1..v.len() {
                for t in s + 1..v.len() {
                    let d = farey_distance(v[r], v[s]).unwrap() + farey_distance(v[s], v[t]).unwrap()
                        - farey_distance(v[r], v[t]).unwrap();
                    max = max.max(d);
                    sum += d as u64;
                    count += 1;
                }
            }
        }
        (max, sum as f64 / count as f64)
    }

    #[test]
    fn golden_shadow_follows_convergents() {
        let ray = GeodesicRay::new(FlatTorus::anosov_axis(), 0.0, 8.0).unwrap();
        let sh = shadow_adaptive(&ray, PieceId::Torus, DEFAULT_SHADOW_STEP).unwrap();
        let mut distinct = sh.vertices();
        distinct.dedup();
        let mut quotients = vec![0];
        quotients.extend([1; 40]);
        let expected = convergents(&quotients);
        let start = expected.iter().position(|&c| c == distinct[0]).expect("starts at a convergent");
        assert_eq!(&expected[start..start + distinct.len()], &distinct[..]);
        assert!(distinct.contains(&s(3, 5)));
        assert!(sh.max_jump().unwrap() <= MAX_SHADOW_JUMP);
    }

    #[test]
    fn point_ray_has_one_vertex() {
        let ray = GeodesicRay::new(FlatTorus::square(), 0.5, 0.5).unwrap();
        let sh = shadow_adaptive(&ray, PieceId::Torus, 0.1).unwrap();
        assert_eq!(sh.samples.len(), 1);
        assert!(shadow(&ray, PieceId::Torus, &[0.6]).is_err());
        assert!(shadow(&ray, PieceId::Y, &[0.5]).is_err());
    }

    #[test]
    fn defect_examples() {
        assert_eq!(defect_report(&[s(1, 2); 5]).unwrap().max, 0);
        let path = farey_geodesic(s(0, 1), s(13, 21)).unwrap();
        let mut v: Vec<Slope> = Vec::new();
        for &x in path.vertices() {
            v.extend([x, x]);
        }
        assert_eq!(defect_report(&v).unwrap().max, 0);
        let back = vec![s(0, 1), s(1, 1), s(2, 1), s(3, 1), s(2, 1), s(3, 1), s(4, 1)];
        let r = defect_report(&back).unwrap();
        let (max, mean) = brute_defect(&back);
        assert_eq!(r.max, max);
        assert!((r.mean - mean).abs() < 1e-12);
        assert!(defect_report(&back[..2]).is_err());
    }

    #[test]
    fn weighted_mean_matches_brute_force() {
        let v = vec![s(0, 1), s(0, 1), s(1, 1), s(1, 2), s(1, 2), s(1, 2), s(1, 1), s(2, 1), s(2, 1), s(5, 1)];
        let r = defect_report(&v).unwrap();
        let (max, mean) = brute_defect(&v);
        assert_eq!(r.max, max);
        assert!((r.mean - mean).abs() < 1e-12);
        assert_eq!(r.triples, 120);
    }

    #[test]
    fn tsv_has_header_and_rows() {
        let ray = GeodesicRay::new(FlatTorus::anosov_axis(), 0.0, 1.0).unwrap();
        let sh = shadow(&ray, PieceId::Torus, &[0.0, 0.5, 1.0]).unwrap();
        let tsv = sh.to_tsv();
        let lines: Vec<_> = tsv.lines().collect();
        assert_eq!(lines[0], "time\tslope\tlength\ttwist\tmodulus");
        assert_eq!(lines.len(), 4);
    }
}
