//! Batch entry point for the loop-laboratory crates: configuration,
//! suite orchestration, and machine-readable reports.

mod config;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde_json::{Map, Value};

use looplab_core::spectral::{divergence_witness, trace_partial_sum};
use looplab_core::twistalg::{borel_weil_index, convolve, convolve_oracle, orbit_decompose};
use looplab_core::{
    DiracSpace, IndexClass, LevelData, Normalization, OscillatorModel, PartitionTable,
    TwistedElement,
};

use config::RunConfig;
use report::{fmt_float, index_value, render, report_skeleton, suites_value};
use verify::SuiteStatus;

#[derive(Parser)]
#[command(name = "looplab", version, about = "Desk-scale loop-group laboratory")]
struct Cli {
    /// Plain-text `key = value` configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Number of Fourier modes N.
    #[arg(long, global = true)]
    modes: Option<u32>,
    /// Total-energy cutoff E_max.
    #[arg(long, global = true)]
    emax: Option<u64>,
    /// Exact radical-rational arithmetic (default).
    #[arg(long, global = true)]
    exact: bool,
    /// Floating-point arithmetic.
    #[arg(long, global = true, conflicts_with = "exact")]
    float: bool,
    /// Torus level c.
    #[arg(long = "level-c", global = true)]
    level_c: Option<i64>,
    /// Twisting level k.
    #[arg(long = "level-k", global = true)]
    level_k: Option<i64>,
    /// Weight-window half width W.
    #[arg(long, global = true)]
    window: Option<i64>,
    /// Gauss-Hermite quadrature order per axis.
    #[arg(long = "quad-order", global = true)]
    quad_order: Option<usize>,
    /// Float-mode tolerance override.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Output directory for report.json and CSV files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every identity suite and write report.json.
    Verify,
    /// Compute the graded index, optionally via the lowest-weight preset.
    Index {
        /// Lowest weight λ for the level-(c,1) preset.
        #[arg(long = "borel-weil")]
        borel_weil: Option<i64>,
        /// Base index class as JSON, e.g. '{"0": 1}'.
        #[arg(long)]
        base: Option<String>,
    },
    /// Emit partition counts, trace terms, and divergence witnesses.
    Spectral {
        /// Exponents s (multiples of 1/2), comma separated.
        #[arg(long, value_delimiter = ',')]
        s: Vec<f64>,
        /// Number of CSV rows.
        #[arg(long, default_value_t = 200)]
        nmax: usize,
    },
    /// Emit the oscillator isometry table and rank-one report.
    Oscillator,
    /// Convolve two twisted elements ("n l re im" lines) and print the product.
    Algebra {
        /// Left factor file; omitted means a built-in demo pair.
        #[arg(long)]
        lhs: Option<PathBuf>,
        /// Right factor file.
        #[arg(long)]
        rhs: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        if let Err(msg) = cfg.apply_file(path) {
            eprintln!("config error: {msg}");
            return ExitCode::from(2);
        }
    }
    if let Some(v) = cli.modes {
        cfg.modes = v;
    }
    if let Some(v) = cli.emax {
        cfg.emax = v;
    }
    if cli.exact {
        cfg.exact = true;
    }
    if cli.float {
        cfg.exact = false;
    }
    if let Some(v) = cli.level_c {
        cfg.level_c = v;
    }
    if let Some(v) = cli.level_k {
        cfg.level_k = v;
    }
    if let Some(v) = cli.window {
        cfg.window = v;
    }
    if let Some(v) = cli.quad_order {
        cfg.quad_order = v;
    }
    if let Some(v) = cli.tolerance {
        cfg.tolerance = v;
    }
    if let Some(v) = cli.out {
        cfg.out = v;
    }
    if let Err(msg) = cfg.validate() {
        eprintln!("config error: {msg}");
        return ExitCode::from(2);
    }
    if let Err(e) = std::fs::create_dir_all(&cfg.out) {
        eprintln!("config error: cannot create {}: {e}", cfg.out.display());
        return ExitCode::from(2);
    }
    let outcome = match &cli.command {
        Command::Verify => cmd_verify(&cfg),
        Command::Index { borel_weil, base } => cmd_index(&cfg, *borel_weil, base.as_deref()),
        Command::Spectral { s, nmax } => cmd_spectral(&cfg, s, *nmax),
        Command::Oscillator => cmd_oscillator(&cfg),
        Command::Algebra { lhs, rhs } => cmd_algebra(&cfg, lhs.as_deref(), rhs.as_deref()),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn cmd_verify(cfg: &RunConfig) -> Result<ExitCode, String> {
    let suites = verify::run_all(cfg);
    let all_pass = suites.iter().all(|s| s.status != SuiteStatus::Fail);
    let mut map = report_skeleton("verify", cfg);
    map.insert("suites".into(), suites_value(&suites));
    map.insert("pass".into(), Value::from(all_pass));
    let path = cfg.out.join("report.json");
    std::fs::write(&path, render(map)).map_err(|e| format!("writing report: {e}"))?;
    for s in &suites {
        println!(
            "suite {}: {} (max deviation {})",
            s.name,
            s.status.as_str(),
            fmt_float(s.max_deviation)
        );
    }
    println!("report: {}", path.display());
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn parse_index_class(text: &str) -> Result<IndexClass, String> {
    let map: Map<String, Value> =
        serde_json::from_str(text).map_err(|e| format!("bad index class JSON: {e}"))?;
    let mut out = IndexClass::default();
    for (key, value) in map {
        let class: i64 = key.parse().map_err(|_| format!("bad class '{key}'"))?;
        let mult = value
            .as_i64()
            .ok_or_else(|| format!("bad multiplicity for class {key}"))?;
        out.add(class, mult);
    }
    Ok(out)
}

/// Tensor product of index classes: classes add, multiplicities multiply.
fn combine_classes(a: &IndexClass, b: &IndexClass) -> IndexClass {
    let mut out = IndexClass::default();
    for (ca, ma) in a.iter() {
        for (cb, mb) in b.iter() {
            out.add(ca + cb, ma * mb);
        }
    }
    out
}

fn cmd_index(
    cfg: &RunConfig,
    borel_weil: Option<i64>,
    base: Option<&str>,
) -> Result<ExitCode, String> {
    let mut map = report_skeleton("index", cfg);
    let index = if let Some(lambda) = borel_weil {
        let level = LevelData::new(cfg.level_c, cfg.level_k).map_err(|e| e.to_string())?;
        let (index, weights) =
            borel_weil_index(lambda, level, cfg.window).map_err(|e| e.to_string())?;
        map.insert("lambda".into(), Value::from(lambda));
        map.insert("weights".into(), Value::Array(weights.into_iter().map(Value::from).collect()));
        index
    } else {
        let space = DiracSpace::new(cfg.modes, cfg.emax);
        let loop_factor = if cfg.exact {
            space.kernel_index_exact(true)
        } else {
            space.kernel_index_float(true)
        }
        .map_err(|e| e.to_string())?;
        let base = match base {
            Some(text) => parse_index_class(text)?,
            None => [(0i64, 1i64)].into_iter().collect(),
        };
        map.insert("loop_factor".into(), index_value(&loop_factor));
        map.insert("base".into(), index_value(&base));
        combine_classes(&base, &loop_factor)
    };
    map.insert("index".into(), index_value(&index));
    print!("{}", render(map));
    Ok(ExitCode::SUCCESS)
}

fn cmd_spectral(cfg: &RunConfig, s_list: &[f64], nmax: usize) -> Result<ExitCode, String> {
    const WITNESS_RANGE: usize = 5000;
    const WITNESS_BOUND: u64 = 1_000_000;
    let mut two_s_list = Vec::new();
    for &s in s_list {
        let doubled = 2.0 * s;
        if s <= 0.0 || (doubled - doubled.round()).abs() > 1e-9 {
            eprintln!("config error: s must be a positive multiple of 1/2, got {s}");
            return Ok(ExitCode::from(2));
        }
        two_s_list.push(doubled.round() as u32);
    }
    let table_max = if s_list.is_empty() { nmax } else { nmax.max(WITNESS_RANGE) };
    let table = PartitionTable::new(table_max);
    let mut csv = String::from("n,p,q");
    for &s in s_list {
        csv.push_str(&format!(",term_s{s}"));
    }
    csv.push('\n');
    for n in 0..=nmax {
        csv.push_str(&format!("{n},{},{}", table.p(n), table.q(n)));
        let q = table.q(n).to_f64().unwrap_or(f64::INFINITY);
        for &s in s_list {
            let term = q * (1.0 + n as f64).powf(-s);
            csv.push_str(&format!(",{}", fmt_float(term)));
        }
        csv.push('\n');
    }
    let path = cfg.out.join("spectral.csv");
    std::fs::write(&path, csv).map_err(|e| format!("writing csv: {e}"))?;
    let mut map = report_skeleton("spectral", cfg);
    let mut witnesses = Vec::new();
    for (&s, &two_s) in s_list.iter().zip(&two_s_list) {
        let mut w = Map::new();
        w.insert("s".into(), Value::from(s.to_string()));
        match divergence_witness(&table, two_s, WITNESS_BOUND, WITNESS_RANGE) {
            Some(n_star) => {
                w.insert("n_star".into(), Value::from(n_star as u64));
            }
            None => {
                w.insert("n_star".into(), Value::Null);
            }
        }
        // Exact partial sums at integer s document the growing trace.
        if two_s % 2 == 0 {
            let sum = trace_partial_sum(&table, two_s / 2, Normalization::OnePlusFourN, 60);
            w.insert("partial_sum_60".into(), Value::from(sum.to_string()));
        }
        witnesses.push(Value::Object(w));
    }
    map.insert("bound".into(), Value::from(WITNESS_BOUND));
    map.insert("witnesses".into(), Value::Array(witnesses));
    map.insert("csv".into(), Value::from(path.display().to_string()));
    print!("{}", render(map));
    Ok(ExitCode::SUCCESS)
}

fn cmd_oscillator(cfg: &RunConfig) -> Result<ExitCode, String> {
    let model = OscillatorModel::new(looplab_core::oscillator::DEFAULT_N_MAX, cfg.quad_order)
        .map_err(|e| e.to_string())?;
    let table = model.isometry_table(4, 4).map_err(|e| e.to_string())?;
    let mut csv = String::from("k,l,m,n,ratio_re,ratio_im,expected\n");
    for e in &table.entries {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            e.k,
            e.l,
            e.m,
            e.n,
            fmt_float(e.ratio.re),
            fmt_float(e.ratio.im),
            fmt_float(e.expected)
        ));
    }
    let path = cfg.out.join("isometry.csv");
    std::fs::write(&path, csv).map_err(|e| format!("writing csv: {e}"))?;
    let rank = model.rank_one_check(16).map_err(|e| e.to_string())?;
    let mut map = report_skeleton("oscillator", cfg);
    map.insert(
        "isometry_max_diagonal_relative".into(),
        Value::from(fmt_float(table.max_diagonal_relative_error())),
    );
    map.insert(
        "isometry_max_off_diagonal".into(),
        Value::from(fmt_float(table.max_off_diagonal_error())),
    );
    map.insert("equivariance_norm".into(), Value::from(fmt_float(model.equivariance_norm())));
    let mut r = Map::new();
    r.insert("ratio".into(), Value::from(fmt_float(rank.ratio)));
    r.insert("vacuum_overlap".into(), Value::from(fmt_float(rank.vacuum_overlap)));
    r.insert("constant".into(), Value::from(fmt_float(rank.constant)));
    r.insert("doubled".into(), Value::from(rank.doubled));
    map.insert("rank_one".into(), Value::Object(r));
    map.insert("csv".into(), Value::from(path.display().to_string()));
    print!("{}", render(map));
    Ok(ExitCode::SUCCESS)
}

fn read_element(level: LevelData, path: &std::path::Path) -> Result<TwistedElement, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    TwistedElement::from_lines(level, &text).map_err(|e| e.to_string())
}

fn cmd_algebra(
    cfg: &RunConfig,
    lhs: Option<&std::path::Path>,
    rhs: Option<&std::path::Path>,
) -> Result<ExitCode, String> {
    let level = LevelData::new(cfg.level_c, cfg.level_k).map_err(|e| e.to_string())?;
    let (f, g) = match (lhs, rhs) {
        (Some(a), Some(b)) => (read_element(level, a)?, read_element(level, b)?),
        (None, None) => {
            // Demo pair: a unit shift that matches the product condition
            // plus an off-condition term that must be annihilated.
            let mut f = TwistedElement::basis(level, 1, 3 * level.stride());
            f.accumulate(0, 1, Complex64::new(0.5, 0.0));
            let g = TwistedElement::basis(level, 1, 2 * level.stride());
            (f, g)
        }
        _ => return Err("--lhs and --rhs must be given together".into()),
    };
    let product = convolve(&f, &g).map_err(|e| e.to_string())?;
    let oracle = convolve_oracle(&f, &g).map_err(|e| e.to_string())?;
    if product.iter().collect::<Vec<_>>() != oracle.iter().collect::<Vec<_>>() {
        return Err("convolution disagrees with the integral oracle".into());
    }
    print!("{}", product.to_lines());
    if level.k != 0 {
        let orbits = orbit_decompose(&product).map_err(|e| e.to_string())?;
        let classes: Vec<String> = orbits.keys().map(|c| c.to_string()).collect();
        eprintln!("orbit classes: [{}]", classes.join(", "));
    }
    Ok(ExitCode::SUCCESS)
}
