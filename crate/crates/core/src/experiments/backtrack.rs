use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::coarse::PieceId;
use crate::descriptor::{defect_report, shadow_adaptive, GeodesicRay, DEFAULT_SHADOW_STEP};
use crate::error::{Error, Result};
use crate::experiments::{max_of, Scenario, ScenarioReport};
use crate::flat::FlatTorus;
use crate::table::{Cell, Table};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktrackConfig {
    pub n_rays: usize,
    pub seed: u64,
    /// Each ray covers `[−t_span/2, t_span/2]`.
    pub t_span: f64,
    pub step: f64,
    /// Partial quotients are uniform on `1..=max_quotient`.
    pub max_quotient: i64,
    /// Number of partial quotients per direction.
    pub depth: usize,
}

impl Default for BacktrackConfig {
    fn default() -> Self {
        BacktrackConfig {
            n_rays: 50,
            seed: 0,
            t_span: 20.0,
            step: DEFAULT_SHADOW_STEP,
            max_quotient: 9,
            depth: 30,
        }
    }
}

/// Defect statistics of one ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BacktrackRun {
    pub samples: usize,
    pub vertices: usize,
    pub max_jump: u32,
    pub defect: u32,
    pub mean_defect: f64,
    pub argmax: [usize; 3],
}

/// `[0; a₁, a₂, ...]` in double-double precision.
fn cf_value(quotients: &[i64]) -> TwoFloat {
    let one = TwoFloat::from(1.0);
    quotients
        .iter()
        .rev()
        .fold(TwoFloat::from(0.0), |acc, &a| one / (TwoFloat::from(a as f64) + acc))
}

/// A unit-area torus whose vertical foliation has slope `[0; a₁, ...]`
/// and horizontal foliation slope `−[0; b₁, ...]`, with quotients drawn
/// uniformly from `1..=max_quotient`. Returns the quotients too.
pub fn random_direction_torus(
    rng: &mut impl Rng,
    depth: usize,
    max_quotient: i64,
) -> Result<(FlatTorus, [Vec<i64>; 2])> {
    let mut draw = || -> Vec<i64> { (0..depth).map(|_| rng.gen_range(1..=max_quotient)).collect() };
    let (a, b) = (draw(), draw());
    let one = TwoFloat::from(1.0);
    let torus = FlatTorus::from_extended_directions([one, cf_value(&a)], [one, -cf_value(&b)])?;
    Ok((torus, [a, b]))
}

/// Adaptive shadow of a torus ray and its defect statistics.
pub fn backtrack_ray(torus: &FlatTorus, t_span: f64, step: f64) -> Result<BacktrackRun> {
    let ray = GeodesicRay::new(*torus, -t_span / 2.0, t_span / 2.0)?;
    let sh = shadow_adaptive(&ray, PieceId::Torus, step)?;
    let vertices = sh.vertices();
    let mut distinct = vertices.clone();
    distinct.dedup();
    let rep = defect_report(&vertices)?;
    Ok(BacktrackRun {
        samples: vertices.len(),
        vertices: distinct.len(),
        max_jump: sh.max_jump()?,
        defect: rep.max,
        mean_defect: rep.mean,
        argmax: rep.argmax,
    })
}

const COLUMNS: [&str; 9] = [
    "ray",
    "vertical_quotients",
    "horizontal_quotients",
    "samples",
    "vertices",
    "max_jump",
    "defect",
    "mean_defect",
    "argmax",
];

fn join(q: &[i64]) -> String {
    q.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
}

/// Shadows and defects of `n_rays` random torus rays. Ray `i` draws its
/// direction from a generator seeded with `seed + i`.
pub fn run_backtrack_suite(cfg: &BacktrackConfig) -> Result<ScenarioReport> {
    if cfg.n_rays == 0 {
        return Err(Error::InvalidParameter("n_rays must be at least 1".into()));
    }
    if !(cfg.t_span > 0.0 && cfg.t_span <= 40.0) {
        return Err(Error::InvalidParameter(format!(
            "t_span {} must lie in (0, 40]",
            cfg.t_span
        )));
    }
    if cfg.max_quotient < 1 || cfg.depth == 0 {
        return Err(Error::InvalidParameter("need positive quotients and depth".into()));
    }
    let runs: Vec<Result<([Vec<i64>; 2], BacktrackRun)>> = (0..cfg.n_rays)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64));
            let (torus, q) = random_direction_torus(&mut rng, cfg.depth, cfg.max_quotient)?;
            Ok((q, backtrack_ray(&torus, cfg.t_span, cfg.step)?))
        })
        .collect();
    let mut table = Table::new(&COLUMNS);
    for (i, run) in runs.into_iter().enumerate() {
        let ([a, b], r) = run?;
        table.push(vec![
            i.into(),
            Cell::text(join(&a)),
            Cell::text(join(&b)),
            r.samples.into(),
            r.vertices.into(),
            r.max_jump.into(),
            r.defect.into(),
            Cell::real(r.mean_defect),
            Cell::text(join(&r.argmax.map(|v| v as i64))),
        ]);
    }
    let summary = summarize(&table);
    Ok(ScenarioReport::new(Scenario::Backtrack, cfg, table, summary))
}

pub(crate) fn summarize(table: &Table) -> BTreeMap<String, f64> {
    let defects = table.values("defect");
    let means = table.values("mean_defect");
    let mut s = BTreeMap::new();
    s.insert("rays".into(), defects.len() as f64);
    s.insert("max_defect".into(), max_of(&defects));
    s.insert("mean_defect".into(), means.iter().sum::<f64>() / means.len() as f64);
    s.insert("max_jump".into(), max_of(&table.values("max_jump")));
    s
}
