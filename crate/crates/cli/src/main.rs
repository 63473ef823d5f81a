//! Command line front end: describe rays, estimate distances, sample
//! shadows and run the experiment scenarios.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use teichflow::coarse::{distance_estimate, short_marking, CurveId, MarkingConfig, PieceId};
use teichflow::descriptor::{
    defect_report, evolution_of, isolation_interval, shadow_adaptive, GeodesicRay, DEFAULT_M0,
    DEFAULT_SHADOW_STEP,
};
use teichflow::experiments::{
    write_atomic, BacktrackConfig, CounterexampleConfig, EndsCheckConfig, FellowTravelConfig, Format,
    ScenarioConfig,
};
use teichflow::flat::{build_counterexample_pair, document, FlatTorus, Piece, Surface};
use teichflow::table::{fmt_sig, Cell, Table};
use teichflow::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "teichflow", version, about = "Coarse geometry of Teichmüller geodesics on flat tori and slit-torus surfaces")]
struct Cli {
    /// Seed for randomized scenarios.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory for output files; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value = "json", value_parser = parse_format)]
    format: Format,
    /// Threshold C of the distance formula.
    #[arg(long = "threshold-C", global = true, default_value_t = teichflow::coarse::DEFAULT_THRESHOLD_C)]
    threshold_c: f64,
    /// Isolation threshold M0.
    #[arg(long = "M0", global = true, default_value_t = DEFAULT_M0)]
    m0: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Length law and total twist of the curves met along a ray.
    Describe {
        /// Surface document, or `square`, `anosov`, `counterexample:D`, `counterexample-bar:D`.
        surface: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        to: f64,
    },
    /// Distance estimate between two surface documents, term by term.
    Distance { a: PathBuf, b: PathBuf },
    /// Marking slopes of a piece along a ray.
    Shadow {
        surface: String,
        /// `torus`, `Y` or `Z`.
        #[arg(long, default_value = "torus")]
        piece: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = DEFAULT_SHADOW_STEP)]
        step: f64,
    },
    /// Sweep of the fellow-traveling counterexample.
    Counterexample {
        #[arg(long = "d", value_delimiter = ',', default_values_t = [4.0, 6.0, 8.0, 10.0])]
        d: Vec<f64>,
        #[arg(long, default_value_t = 0.1)]
        c: f64,
        /// δ = c·e^{−d/2} / divisor.
        #[arg(long, default_value_t = 100.0)]
        delta_divisor: f64,
    },
    /// Divergence of perturbed torus rays.
    FellowTravel {
        #[arg(long, value_delimiter = ',', default_values_t = [5.0, 10.0, 20.0])]
        lengths: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        perturbation: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Base torus modulus `x,y`; the Anosov axis torus when absent.
        #[arg(long, value_delimiter = ',', num_args = 2, allow_hyphen_values = true)]
        modulus: Option<Vec<f64>>,
    },
    /// Backtracking of shadows of random torus rays.
    Backtrack {
        #[arg(long, default_value_t = 50)]
        rays: usize,
        #[arg(long, default_value_t = 20.0)]
        t_span: f64,
        #[arg(long, default_value_t = DEFAULT_SHADOW_STEP)]
        step: f64,
    },
    /// The ends dichotomy along the counterexample.
    EndsCheck {
        #[arg(long = "d", value_delimiter = ',', default_values_t = [4.0, 6.0, 8.0, 10.0])]
        d: Vec<f64>,
        #[arg(long, default_value_t = 0.1)]
        c: f64,
        #[arg(long, default_value_t = 100.0)]
        delta_divisor: f64,
        #[arg(long, default_value_t = 1.0)]
        margin: f64,
        #[arg(long, default_value_t = teichflow::descriptor::DEFAULT_ENDS_BOUND)]
        bound: u32,
    },
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A table with summary values, for the commands that are not scenarios.
struct Output {
    name: &'static str,
    table: Table,
    summary: BTreeMap<String, f64>,
}

impl Output {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Tsv => {
                let mut s = String::new();
                for (k, v) in &self.summary {
                    s.push_str(&format!("# summary {k}: {}\n", fmt_sig(*v)));
                }
                s + &self.table.to_tsv()
            }
            Format::Json => {
                let summary: BTreeMap<_, _> = self
                    .summary
                    .iter()
                    .map(|(k, v)| (k.clone(), teichflow::table::round_sig(*v)))
                    .collect();
                let value = serde_json::json!({
                    "schema_version": teichflow::experiments::REPORT_SCHEMA_VERSION,
                    "summary": summary,
                    "columns": self.table.columns,
                    "rows": self.table.rows,
                });
                serde_json::to_string_pretty(&value).expect("output serializes") + "\n"
            }
        }
    }
}

fn emit(text: &str, name: &str, cli: &Cli) -> Result<()> {
    match &cli.out {
        Some(dir) => {
            let path = dir.join(format!("{name}.{}", cli.format.extension()));
            write_atomic(&path, text.as_bytes())?;
            println!("{}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn load_surface(spec: &str) -> Result<Surface> {
    let builtin = |d: &str, second: bool| -> Result<Surface> {
        let d: f64 = d
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad d in `{spec}`")))?;
        let c = 0.1;
        let (q, qb) = build_counterexample_pair(d, c, c * (-d / 2.0).exp() / 100.0)?;
        Ok(Surface::Slit(if second { qb } else { q }))
    };
    match spec {
        "square" => Ok(Surface::Torus(FlatTorus::square())),
        "anosov" => Ok(Surface::Torus(FlatTorus::anosov_axis())),
        _ => {
            if let Some(d) = spec.strip_prefix("counterexample:") {
                return builtin(d, false);
            }
            if let Some(d) = spec.strip_prefix("counterexample-bar:") {
                return builtin(d, true);
            }
            read_document(Path::new(spec))
        }
    }
}

fn read_document(path: &Path) -> Result<Surface> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
    document::from_json(&text)
}

fn describe(surface: Surface, from: f64, to: f64, cli: &Cli) -> Result<Output> {
    let ray = GeodesicRay::new(surface, from, to)?;
    let mut curves = Vec::new();
    let pieces: &[PieceId] = match surface {
        Surface::Torus(_) => &[PieceId::Torus],
        Surface::Slit(_) => {
            curves.push(CurveId::Gamma);
            &[PieceId::Y, PieceId::Z]
        }
    };
    for &piece in pieces {
        let sh = shadow_adaptive(&ray, piece, DEFAULT_SHADOW_STEP)?;
        let mut v = sh.vertices();
        v.dedup();
        for s in v {
            let c = CurveId::in_piece(piece, s);
            if !curves.contains(&c) {
                curves.push(c);
            }
        }
    }
    let mut table = Table::new(&["curve", "min_length", "balance_time", "total_twist"]);
    for c in curves {
        let ev = evolution_of(&ray, c);
        table.push(vec![
            Cell::text(c),
            Cell::opt_real(ev.as_ref().ok().map(|e| e.min_length)),
            Cell::opt_real(ev.as_ref().ok().map(|e| e.balance_time)),
            Cell::opt_real(ev.as_ref().ok().map(|e| e.total_twist)),
        ]);
    }
    let mut summary = BTreeMap::new();
    if let Surface::Slit(_) = surface {
        for piece in [Piece::Y, Piece::Z] {
            if let Ok(iv) = isolation_interval(&ray, piece, cli.m0) {
                if let Some([a, b]) = iv.interval {
                    summary.insert(format!("isolation_{piece}_lo"), a);
                    summary.insert(format!("isolation_{piece}_hi"), b);
                }
            }
        }
    }
    Ok(Output {
        name: "describe",
        table,
        summary,
    })
}

fn distance(a: &Path, b: &Path, cli: &Cli) -> Result<Output> {
    let (x, y) = (read_document(a)?, read_document(b)?);
    if x.topology() != y.topology() {
        return Err(Error::TopologyMismatch(x.topology().to_string(), y.topology().to_string()));
    }
    let cfg = MarkingConfig::default();
    let bd = distance_estimate(&short_marking(&x, &cfg), &short_marking(&y, &cfg), cli.threshold_c)?;
    let mut table = Table::new(&["kind", "subject", "raw", "value"]);
    for t in &bd.terms {
        let kind = serde_json::to_value(t.kind).expect("kind serializes");
        table.push(vec![
            Cell::text(kind.as_str().unwrap_or_default()),
            Cell::text(&t.subject),
            Cell::real(t.raw),
            Cell::real(t.value),
        ]);
    }
    let summary = BTreeMap::from([("total".to_string(), bd.total), ("threshold".to_string(), bd.threshold)]);
    Ok(Output {
        name: "distance",
        table,
        summary,
    })
}

fn shadow_cmd(surface: Surface, piece: &str, from: f64, to: f64, step: f64) -> Result<Output> {
    let ray = GeodesicRay::new(surface, from, to)?;
    let sh = shadow_adaptive(&ray, piece.parse()?, step)?;
    let mut summary = BTreeMap::from([("max_jump".to_string(), sh.max_jump()? as f64)]);
    if sh.samples.len() >= 3 {
        let rep = defect_report(&sh.vertices())?;
        summary.insert("max_defect".into(), rep.max as f64);
        summary.insert("mean_defect".into(), rep.mean);
    }
    Ok(Output {
        name: "shadow",
        table: sh.to_table(),
        summary,
    })
}

fn scenario(cli: &Cli) -> Option<ScenarioConfig> {
    let marking = MarkingConfig::default();
    Some(match &cli.command {
        Command::Counterexample { d, c, delta_divisor } => ScenarioConfig::Counterexample(CounterexampleConfig {
            d_values: d.clone(),
            c: *c,
            delta_divisor: *delta_divisor,
            threshold_c: cli.threshold_c,
            m0: cli.m0,
            marking,
            seed: cli.seed,
        }),
        Command::FellowTravel {
            lengths,
            perturbation,
            samples,
            modulus,
        } => ScenarioConfig::FellowTravel(FellowTravelConfig {
            lengths: lengths.clone(),
            perturbation: *perturbation,
            samples: *samples,
            base_modulus: modulus.as_ref().map(|m| [m[0], m[1]]),
            marking,
            seed: cli.seed,
        }),
        Command::Backtrack { rays, t_span, step } => ScenarioConfig::Backtrack(BacktrackConfig {
            n_rays: *rays,
            seed: cli.seed,
            t_span: *t_span,
            step: *step,
            ..Default::default()
        }),
        Command::EndsCheck {
            d,
            c,
            delta_divisor,
            margin,
            bound,
        } => ScenarioConfig::EndsCheck(EndsCheckConfig {
            d_values: d.clone(),
            c: *c,
            delta_divisor: *delta_divisor,
            m0: cli.m0,
            bound: *bound,
            margin: *margin,
            marking,
            seed: cli.seed,
        }),
        _ => return None,
    })
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(cfg) = scenario(cli) {
        let report = cfg.run()?;
        return emit(&report.render(cli.format), &report.scenario.to_string(), cli);
    }
    let out = match &cli.command {
        Command::Describe { surface, from, to } => describe(load_surface(surface)?, *from, *to, cli)?,
        Command::Distance { a, b } => distance(a, b, cli)?,
        Command::Shadow {
            surface,
            piece,
            from,
            to,
            step,
        } => shadow_cmd(load_surface(surface)?, piece, *from, *to, *step)?,
        _ => unreachable!("scenarios handled above"),
    };
    emit(&out.render(cli.format), out.name, cli)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}
