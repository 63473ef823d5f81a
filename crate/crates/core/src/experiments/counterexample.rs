use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coarse::{distance_estimate, short_marking, MarkingConfig, PieceId, DEFAULT_THRESHOLD_C};
use crate::descriptor::{isolation_interval, GeodesicRay, DEFAULT_M0};
use crate::error::{Error, Result};
use crate::experiments::{error_cell, fitted_slope, max_of, min_of, Scenario, ScenarioReport};
use crate::farey::farey_distance;
use crate::flat::{build_counterexample_pair, Piece, SlitSurface, Surface};
use crate::table::{Cell, Table};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleConfig {
    pub d_values: Vec<f64>,
    pub c: f64,
    /// `δ = c·e^{−d/2} / delta_divisor`.
    pub delta_divisor: f64,
    pub threshold_c: f64,
    pub m0: f64,
    pub marking: MarkingConfig,
    pub seed: u64,
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        CounterexampleConfig {
            d_values: vec![4.0, 6.0, 8.0, 10.0],
            c: 0.1,
            delta_divisor: 100.0,
            threshold_c: DEFAULT_THRESHOLD_C,
            m0: DEFAULT_M0,
            marking: MarkingConfig::default(),
            seed: 0,
        }
    }
}

impl CounterexampleConfig {
    pub fn delta(&self, d: f64) -> f64 {
        self.c * (-d / 2.0).exp() / self.delta_divisor
    }

    fn validate(&self) -> Result<()> {
        if self.d_values.is_empty() {
            return Err(Error::InvalidParameter("empty d sweep".into()));
        }
        if let Some(d) = self.d_values.iter().find(|&&d| !(d >= 2.0 && d.is_finite())) {
            return Err(Error::InvalidParameter(format!("d = {d} must be at least 2")));
        }
        if !(self.c > 0.0 && self.c < 1.0) {
            return Err(Error::InvalidParameter(format!("c = {} must lie in (0, 1)", self.c)));
        }
        if !(self.delta_divisor > 10.0 && self.delta_divisor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "delta divisor {} must exceed 10",
                self.delta_divisor
            )));
        }
        if !(self.threshold_c > 0.0 && self.m0 > 0.0) {
            return Err(Error::InvalidParameter("threshold C and M0 must be positive".into()));
        }
        Ok(())
    }
}

const COLUMNS: [&str; 15] = [
    "d",
    "delta",
    "estimate_0",
    "estimate_d",
    "estimate_2d",
    "dY_0",
    "dY_d",
    "dY_2d",
    "segment_lower_bound",
    "ratio",
    "I_lo",
    "I_hi",
    "Ibar_lo",
    "Ibar_hi",
    "error",
];

/// Everything recorded for one `d`.
struct Run {
    estimates: [f64; 3],
    d_y: [u32; 3],
    interval: Option<[f64; 2]>,
    interval_bar: Option<[f64; 2]>,
}

fn piece_slope(s: &SlitSurface, cfg: &MarkingConfig) -> crate::Slope {
    short_marking(&Surface::Slit(*s), cfg).thick_pieces[&PieceId::Y]
}

fn run_one(cfg: &CounterexampleConfig, d: f64) -> Result<Run> {
    let (q, qb) = build_counterexample_pair(d, cfg.c, cfg.delta(d))?;
    let mut estimates = [0.0; 3];
    let mut d_y = [0; 3];
    for (i, t) in [0.0, d, 2.0 * d].into_iter().enumerate() {
        let (x, xb) = (q.flow(t), qb.flow(t));
        let mx = short_marking(&Surface::Slit(x), &cfg.marking);
        let mb = short_marking(&Surface::Slit(xb), &cfg.marking);
        estimates[i] = distance_estimate(&mx, &mb, cfg.threshold_c)?.total;
        d_y[i] = farey_distance(piece_slope(&x, &cfg.marking), piece_slope(&xb, &cfg.marking))?;
    }
    let interval = isolation_interval(&GeodesicRay::new(q, -d, 3.0 * d)?, Piece::Y, cfg.m0)?.interval;
    let interval_bar = isolation_interval(&GeodesicRay::new(qb, -d, 3.0 * d)?, Piece::Y, cfg.m0)?.interval;
    Ok(Run {
        estimates,
        d_y,
        interval,
        interval_bar,
    })
}

fn row(cfg: &CounterexampleConfig, d: f64, run: &Result<Run>) -> Vec<Cell> {
    let mut r = vec![Cell::real(d), Cell::real(cfg.delta(d))];
    match run {
        Ok(run) => {
            r.extend(run.estimates.map(Cell::real));
            r.extend(run.d_y.map(Cell::from));
            let endpoint = run.estimates[0].max(run.estimates[2]);
            r.push(Cell::real(run.estimates[1] / 2.0));
            r.push(Cell::real(run.d_y[1] as f64 / endpoint));
            for iv in [run.interval, run.interval_bar] {
                r.push(Cell::opt_real(iv.map(|v| v[0])));
                r.push(Cell::opt_real(iv.map(|v| v[1])));
            }
            r.push(Cell::text(""));
        }
        Err(e) => {
            r.extend((0..12).map(|_| Cell::Missing(None)));
            r.push(error_cell(e));
        }
    }
    r
}

/// Builds the pair for each `d`, estimates the distance between the two
/// geodesics at times `0`, `d` and `2d`, and records the Farey distance
/// of the `Y` marking slopes together with both isolation intervals.
///
/// A failing `d` is recorded with its error and the sweep continues.
pub fn run_counterexample(cfg: &CounterexampleConfig) -> Result<ScenarioReport> {
    cfg.validate()?;
    let runs: Vec<_> = cfg.d_values.par_iter().map(|&d| run_one(cfg, d)).collect();
    let mut table = Table::new(&COLUMNS);
    for (&d, run) in cfg.d_values.iter().zip(&runs) {
        table.push(row(cfg, d, run));
    }
    let summary = summarize(&table);
    Ok(ScenarioReport::new(Scenario::Counterexample, cfg, table, summary))
}

/// Summary of a counterexample table, from its rows alone.
pub(crate) fn summarize(table: &Table) -> BTreeMap<String, f64> {
    let ok: Vec<&Vec<Cell>> = table
        .rows
        .iter()
        .filter(|r| r[table.column("error").unwrap()].as_str() == Some(""))
        .collect();
    let col = |name: &str| -> Vec<f64> {
        let i = table.column(name).unwrap();
        ok.iter().filter_map(|r| r[i].as_f64()).collect()
    };
    let mut endpoints = col("estimate_0");
    endpoints.extend(col("estimate_2d"));
    let (d, dy, mid, ratio) = (col("d"), col("dY_d"), col("estimate_d"), col("ratio"));
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let monotone = order.windows(2).all(|w| ratio[w[1]] > ratio[w[0]]);
    let mut s = BTreeMap::new();
    s.insert("runs".into(), table.rows.len() as f64);
    s.insert("failed_runs".into(), (table.rows.len() - ok.len()) as f64);
    if !ok.is_empty() {
        let (hi, lo) = (max_of(&endpoints), min_of(&endpoints));
        s.insert("endpoint_max".into(), hi);
        s.insert("endpoint_min".into(), lo);
        s.insert("endpoint_spread".into(), hi / lo);
        s.insert("ratio_monotone".into(), if monotone { 1.0 } else { 0.0 });
    }
    if let Some(v) = fitted_slope(&d, &dy) {
        s.insert("midpoint_dY_slope".into(), v);
    }
    if let Some(v) = fitted_slope(&d, &mid) {
        s.insert("midpoint_estimate_slope".into(), v);
    }
    s
}
