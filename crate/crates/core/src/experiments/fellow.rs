use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coarse::{exp_map, extremal_length_torus, geodesic_point, hyperbolic_distance, MarkingConfig, UHPoint};
use crate::descriptor::GeodesicRay;
use crate::error::{Error, Result};
use crate::experiments::{max_of, min_of, Scenario, ScenarioReport};
use crate::flat::FlatTorus;
use crate::table::{Cell, Table};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FellowTravelConfig {
    pub lengths: Vec<f64>,
    /// Torus Teichmüller distance by which each endpoint is moved.
    pub perturbation: f64,
    /// Matched times sampled along each ray.
    pub samples: usize,
    /// Modulus `(x, y)` of the base torus; the Anosov axis torus if absent.
    pub base_modulus: Option<[f64; 2]>,
    pub marking: MarkingConfig,
    pub seed: u64,
}

impl Default for FellowTravelConfig {
    fn default() -> Self {
        FellowTravelConfig {
            lengths: vec![5.0, 10.0, 20.0],
            perturbation: 1.0,
            samples: 200,
            base_modulus: None,
            marking: MarkingConfig::default(),
            seed: 0,
        }
    }
}

/// Divergence of a perturbed ray from its base.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FellowTravelRun {
    pub length: f64,
    pub perturbed_length: f64,
    pub start_divergence: f64,
    pub end_divergence: f64,
    pub max_divergence: f64,
    pub argmax_time: f64,
}

fn check_thick(t: &FlatTorus, time: f64, marking: &MarkingConfig) -> Result<()> {
    let (alpha, _) = t.systole();
    if extremal_length_torus(t, alpha) <= marking.eps0 {
        return Err(Error::EndpointNotThick(time));
    }
    Ok(())
}

/// Moves both endpoints of a torus ray by `perturbation` in directions
/// `angles`, joins them by the Teichmüller geodesic, and measures the
/// torus distance between the rays at proportionally matched times.
///
/// Torus Teichmüller space is the hyperbolic plane with distance
/// `½·d_H`, and the flow is a unit speed geodesic in it, so the base ray
/// is placed on the imaginary axis as `i·e^{2t}` and the perturbed ray is
/// exact. Torus moduli themselves approach the real axis along the ray,
/// where `f64` coordinates lose the distance to rounding.
pub fn fellow_travel(
    base: &GeodesicRay,
    perturbation: f64,
    angles: [f64; 2],
    samples: usize,
    marking: &MarkingConfig,
) -> Result<FellowTravelRun> {
    if !(0.0..=1.0).contains(&perturbation) {
        return Err(Error::InvalidParameter(format!(
            "perturbation {perturbation} must lie in [0, 1]"
        )));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples".into()));
    }
    let torus = base.require_torus()?;
    let r = base.t_range();
    let (x, y) = (torus.flow(r.min), torus.flow(r.max));
    check_thick(&x, r.min, marking)?;
    check_thick(&y, r.max, marking)?;
    let length = r.max - r.min;
    let point = |t: f64| UHPoint {
        x: 0.0,
        y: (2.0 * (t - r.min)).exp(),
    };
    let xb = exp_map(point(r.min), angles[0], 2.0 * perturbation);
    let yb = exp_map(point(r.max), angles[1], 2.0 * perturbation);
    let mut run = FellowTravelRun {
        length,
        perturbed_length: 0.5 * hyperbolic_distance(xb, yb),
        start_divergence: 0.0,
        end_divergence: 0.0,
        max_divergence: 0.0,
        argmax_time: r.min,
    };
    for (i, t) in base.sample_times(samples).into_iter().enumerate() {
        let f = if length > 0.0 { (t - r.min) / length } else { 0.0 };
        let d = 0.5 * hyperbolic_distance(point(t), geodesic_point(xb, yb, f));
        if i == 0 {
            run.start_divergence = d;
        }
        run.end_divergence = d;
        if d > run.max_divergence {
            run.max_divergence = d;
            run.argmax_time = t;
        }
    }
    Ok(run)
}

const COLUMNS: [&str; 8] = [
    "length",
    "angle_start",
    "angle_end",
    "perturbed_length",
    "start_divergence",
    "end_divergence",
    "max_divergence",
    "argmax_time",
];

/// Fellow traveling for each ray length, with seeded perturbation
/// directions.
pub fn run_fellow_travel(cfg: &FellowTravelConfig) -> Result<ScenarioReport> {
    if cfg.lengths.is_empty() || cfg.lengths.iter().any(|&l| !(l >= 0.0 && l.is_finite())) {
        return Err(Error::InvalidParameter("lengths must be nonnegative".into()));
    }
    let torus = match cfg.base_modulus {
        Some([x, y]) => FlatTorus::from_modulus(x, y)?,
        None => FlatTorus::anosov_axis(),
    };
    let runs: Vec<Result<([f64; 2], FellowTravelRun)>> = cfg
        .lengths
        .par_iter()
        .enumerate()
        .map(|(i, &len)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64));
            let tau = std::f64::consts::TAU;
            let angles = [rng.gen_range(0.0..tau), rng.gen_range(0.0..tau)];
            let ray = GeodesicRay::new(torus, 0.0, len)?;
            Ok((angles, fellow_travel(&ray, cfg.perturbation, angles, cfg.samples, &cfg.marking)?))
        })
        .collect();
    let mut table = Table::new(&COLUMNS);
    for run in runs {
        let ([a0, a1], r) = run?;
        table.push(vec![
            Cell::real(r.length),
            Cell::real(a0),
            Cell::real(a1),
            Cell::real(r.perturbed_length),
            Cell::real(r.start_divergence),
            Cell::real(r.end_divergence),
            Cell::real(r.max_divergence),
            Cell::real(r.argmax_time),
        ]);
    }
    let summary = summarize(&table);
    Ok(ScenarioReport::new(Scenario::FellowTravel, cfg, table, summary))
}

pub(crate) fn summarize(table: &Table) -> BTreeMap<String, f64> {
    let max = table.values("max_divergence");
    let mut ends = table.values("start_divergence");
    ends.extend(table.values("end_divergence"));
    let mut s = BTreeMap::new();
    s.insert("max_divergence".into(), max_of(&max));
    s.insert("divergence_growth".into(), max_of(&max) - min_of(&max));
    s.insert("max_endpoint_divergence".into(), max_of(&ends));
    s
}
