use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coarse::MarkingConfig;
use crate::descriptor::{ends_consistency_check, EndsCase, EndsReport, GeodesicRay, DEFAULT_ENDS_BOUND, DEFAULT_M0};
use crate::error::{Error, Result};
use crate::experiments::{max_of, Scenario, ScenarioReport};
use crate::flat::build_counterexample_pair;
use crate::table::{Cell, Table};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndsCheckConfig {
    pub d_values: Vec<f64>,
    pub c: f64,
    pub delta_divisor: f64,
    pub m0: f64,
    pub bound: u32,
    /// Windows are `[−margin, d + margin]` and `[d + margin, 2d]`.
    pub margin: f64,
    pub marking: MarkingConfig,
    pub seed: u64,
}

impl Default for EndsCheckConfig {
    fn default() -> Self {
        EndsCheckConfig {
            d_values: vec![4.0, 6.0, 8.0, 10.0],
            c: 0.1,
            delta_divisor: 100.0,
            m0: DEFAULT_M0,
            bound: DEFAULT_ENDS_BOUND,
            margin: 1.0,
            marking: MarkingConfig::default(),
            seed: 0,
        }
    }
}

const COLUMNS: [&str; 11] = [
    "d",
    "a",
    "b",
    "piece",
    "case",
    "slope_a",
    "slope_b",
    "window_distance",
    "interval_distance",
    "I_lo",
    "I_hi",
];

fn case_name(c: EndsCase) -> &'static str {
    match c {
        EndsCase::Contained => "contained",
        EndsCase::Disjoint => "disjoint",
        EndsCase::Straddling => "straddling",
    }
}

fn run_one(cfg: &EndsCheckConfig, d: f64) -> Result<Vec<EndsReport>> {
    let delta = cfg.c * (-d / 2.0).exp() / cfg.delta_divisor;
    let (q, _) = build_counterexample_pair(d, cfg.c, delta)?;
    let ray = GeodesicRay::new(q, -d, 3.0 * d)?;
    let windows = [(-cfg.margin, d + cfg.margin), (d + cfg.margin, 2.0 * d)];
    windows
        .into_iter()
        .map(|(a, b)| ends_consistency_check(&ray, a, b, cfg.m0, cfg.bound, &cfg.marking))
        .collect()
}

/// The ends dichotomy on the first geodesic of the counterexample, for a
/// window around the isolation interval of `Y` and one after it.
pub fn run_ends_check(cfg: &EndsCheckConfig) -> Result<ScenarioReport> {
    if cfg.d_values.is_empty() || cfg.d_values.iter().any(|&d| !(d >= 2.0 && d.is_finite())) {
        return Err(Error::InvalidParameter("each d must be at least 2".into()));
    }
    if !(cfg.margin >= 0.0 && cfg.margin.is_finite()) {
        return Err(Error::InvalidParameter(format!("margin {} must be nonnegative", cfg.margin)));
    }
    let runs: Vec<_> = cfg.d_values.par_iter().map(|&d| run_one(cfg, d)).collect();
    let mut table = Table::new(&COLUMNS);
    for (&d, reports) in cfg.d_values.iter().zip(runs) {
        for rep in reports? {
            for p in &rep.pieces {
                let iv = p.isolation.interval;
                table.push(vec![
                    Cell::real(d),
                    Cell::real(rep.a),
                    Cell::real(rep.b),
                    Cell::text(p.piece),
                    Cell::text(case_name(p.case)),
                    Cell::text(p.slope_a),
                    Cell::text(p.slope_b),
                    p.window_distance.into(),
                    p.interval_distance.map_or(Cell::Missing(None), Cell::from),
                    Cell::opt_real(iv.map(|v| v[0])),
                    Cell::opt_real(iv.map(|v| v[1])),
                ]);
            }
        }
    }
    let summary = summarize(&table, cfg.bound);
    Ok(ScenarioReport::new(Scenario::EndsCheck, cfg, table, summary))
}

pub(crate) fn summarize(table: &Table, bound: u32) -> BTreeMap<String, f64> {
    let case = table.column("case").unwrap();
    let window = table.column("window_distance").unwrap();
    let interval = table.column("interval_distance").unwrap();
    let mut contained = Vec::new();
    let mut disjoint = Vec::new();
    let mut straddling = 0usize;
    for r in &table.rows {
        let w = r[window].as_f64().unwrap();
        match r[case].as_str() {
            Some("contained") => contained.push((w - r[interval].as_f64().unwrap()).abs()),
            Some("disjoint") => disjoint.push(w),
            _ => straddling += 1,
        }
    }
    let b = bound as f64;
    let failures = contained.iter().chain(&disjoint).filter(|&&v| v > b).count();
    let mut s = BTreeMap::new();
    s.insert("contained".into(), contained.len() as f64);
    s.insert("disjoint".into(), disjoint.len() as f64);
    s.insert("straddling".into(), straddling as f64);
    s.insert("failures".into(), failures as f64);
    s.insert("bound".into(), b);
    if !contained.is_empty() {
        s.insert("max_contained_discrepancy".into(), max_of(&contained));
    }
    if !disjoint.is_empty() {
        s.insert("max_disjoint_distance".into(), max_of(&disjoint));
    }
    s
}
