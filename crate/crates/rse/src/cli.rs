//! Batch command-line harness: resonant traces, scaling sweeps,
//! superposition preparation, angle optimization, gate export, and SVG
//! rendering of CSV results.
//!
//! Exit codes: 0 success, 2 configuration/domain error, 3 I/O error,
//! 4 fidelity threshold miss (with `--require-fidelity`).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{coherent_state, fidelity, fock_state, recommended_dim, BosonicState, FockSpace};
use crate::gates::{GateEngine, GateSequence};
use crate::optimizer::{
    fit_scaling_exponent, minimal_iterations, optimize, OptimizedRecord, OptimizerConfig,
};
use crate::protocol::{
    continuous_fidelity_trace, discrete_protocol, fidelity_at_fn, first_passage_refined,
    pre_rotation_gate, resonant_crossing_time, time_grid, write_trace_csv,
};
use crate::subspace::{build_subspace, reduced_hamiltonian, resonance_weights, transfer_time, SubspaceModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_THRESHOLD: i32 = 4;

/// One component of a superposition target.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TargetComponent {
    pub level: usize,
    pub weight: f64,
    #[serde(default)]
    pub phase: f64,
}

/// Scenario parameters; a JSON config file populates this, and command
/// line flags override individual fields.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    /// Target Fock level for single-target experiments.
    pub n: usize,
    /// Superposition target components (used when non-empty).
    pub target: Vec<TargetComponent>,
    /// Reference coherent amplitude (real).
    pub alpha: f64,
    /// Reference weight Ω.
    pub omega: f64,
    /// Diagonal ratio for the mismatched trace: H11 = mismatch · H22.
    pub mismatch: f64,
    pub horizon: f64,
    pub grid_step: f64,
    /// Iteration count N for optimize/superpose.
    pub iterations: usize,
    /// Scan bound for minimal-iteration searches.
    pub n_max: usize,
    /// Photon numbers for the scaling sweep.
    pub n_values: Vec<usize>,
    pub fidelity_threshold: f64,
    pub restarts: usize,
    pub max_evals: usize,
    pub seed: u64,
    /// Truncation override; default is the recommended-dim policy.
    pub dim: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: 100,
            target: Vec::new(),
            alpha: 10.0,
            omega: 1.0,
            mismatch: 0.8,
            horizon: 20.0,
            grid_step: 0.01,
            iterations: 4,
            n_max: 8,
            n_values: vec![16, 25, 50, 100, 200, 400],
            fidelity_threshold: 0.995,
            restarts: 64,
            max_evals: 4000,
            seed: 0,
            dim: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let cfg: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.target.is_empty() {
            let total: f64 = self.target.iter().map(|c| c.weight).sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::Config(format!(
                    "superposition weights sum to {total}, expected 1"
                )));
            }
            let mut levels: Vec<usize> = self.target.iter().map(|c| c.level).collect();
            levels.sort_unstable();
            levels.dedup();
            if levels.len() != self.target.len() {
                return Err(Error::Config("duplicate levels in superposition target".into()));
            }
        }
        if self.grid_step <= 0.0 || self.horizon <= 0.0 {
            return Err(Error::Config("horizon and grid_step must be positive".into()));
        }
        Ok(())
    }

    fn max_level(&self) -> usize {
        if self.target.is_empty() {
            self.n
        } else {
            self.target.iter().map(|c| c.level).max().unwrap_or(0)
        }
    }

    fn space(&self) -> Result<FockSpace> {
        let alpha = Complex64::new(self.alpha, 0.0);
        let dim = self
            .dim
            .unwrap_or_else(|| recommended_dim(alpha, self.max_level()));
        if dim <= self.max_level() {
            return Err(Error::Config(format!(
                "dim {} does not contain target level {}",
                dim,
                self.max_level()
            )));
        }
        FockSpace::new(dim)
    }

    fn target_levels(&self) -> Vec<usize> {
        if self.target.is_empty() {
            vec![self.n]
        } else {
            self.target.iter().map(|c| c.level).collect()
        }
    }

    /// Reduced coordinates of the target in the [targets..., complement]
    /// basis.
    fn target_coords(&self) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = if self.target.is_empty() {
            vec![Complex64::new(1.0, 0.0)]
        } else {
            self.target
                .iter()
                .map(|c| Complex64::from_polar(c.weight.sqrt(), c.phase))
                .collect()
        };
        let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        for c in &mut v {
            *c /= norm;
        }
        v.push(Complex64::new(0.0, 0.0));
        v
    }

    fn model(&self) -> Result<SubspaceModel> {
        let space = self.space()?;
        let targets = self
            .target_levels()
            .iter()
            .map(|&n| fock_state(space, n))
            .collect::<Result<Vec<_>>>()?;
        let reference = coherent_state(space, Complex64::new(self.alpha, 0.0));
        build_subspace(targets, reference)
    }

    fn full_target(&self, space: FockSpace) -> Result<BosonicState> {
        let coords = self.target_coords();
        let mut amps = ndarray::Array1::zeros(space.dim());
        for (level, c) in self.target_levels().iter().zip(coords.iter()) {
            amps[*level] = *c;
        }
        BosonicState::new(space, amps)
    }

    fn optimizer_config(&self) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts,
            max_evals: self.max_evals,
            seed: self.seed,
            ..Default::default()
        }
    }
}

#[derive(Parser)]
#[command(name = "rse", about = "Resonant subspace engineering experiments", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// JSON config file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Truncation override.
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Exit with code 4 when the achieved fidelity falls below this.
    #[arg(long, global = true)]
    require_fidelity: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Matched and mismatched resonant fidelity traces plus a summary.
    Trace {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long)]
        mismatch: Option<f64>,
    },
    /// Transfer-time and minimal-iteration sweep over photon number.
    Scaling {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Optimize and verify a superposition target in the full space.
    Superpose {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        iterations: Option<usize>,
    },
    /// Optimize oracle angles for the configured target.
    Optimize {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        iterations: Option<usize>,
    },
    /// Compile optimized parameters into a displacement/SNAP program.
    ExportGates {
        #[command(flatten)]
        common: CommonArgs,
        /// Optimized parameter record (JSON) produced by `optimize`.
        #[arg(long)]
        params: PathBuf,
    },
    /// Render CSV traces or tables as an SVG line chart.
    Plot {
        #[command(flatten)]
        common: CommonArgs,
        /// Input CSV files (first column = x, remaining columns = series).
        inputs: Vec<PathBuf>,
        #[arg(long, default_value = "plot.svg")]
        output: PathBuf,
    },
}

/// Parse argv and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) => EXIT_IO,
                _ => EXIT_CONFIG,
            }
        }
    }
}

fn load_config(common: &CommonArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(dim) = common.dim {
        cfg.dim = Some(dim);
    }
    Ok(cfg)
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Trace { common, n, alpha, horizon, mismatch } => {
            let mut cfg = load_config(&common)?;
            if let Some(n) = n {
                cfg.n = n;
            }
            if let Some(alpha) = alpha {
                cfg.alpha = alpha;
            }
            if let Some(horizon) = horizon {
                cfg.horizon = horizon;
            }
            if let Some(mismatch) = mismatch {
                cfg.mismatch = mismatch;
            }
            cfg.validate()?;
            run_trace(&cfg, &common.out, common.require_fidelity)
        }
        Command::Scaling { common } => {
            let cfg = load_config(&common)?;
            run_scaling(&cfg, &common.out)
        }
        Command::Superpose { common, iterations } => {
            let mut cfg = load_config(&common)?;
            if let Some(n) = iterations {
                cfg.iterations = n;
            }
            cfg.validate()?;
            run_superposition(&cfg, &common.out, common.require_fidelity)
        }
        Command::Optimize { common, n, iterations } => {
            let mut cfg = load_config(&common)?;
            if let Some(n) = n {
                cfg.n = n;
            }
            if let Some(it) = iterations {
                cfg.iterations = it;
            }
            cfg.validate()?;
            run_optimize(&cfg, &common.out, common.require_fidelity)
        }
        Command::ExportGates { common, params } => {
            let cfg = load_config(&common)?;
            export_gates(&cfg, &params, &common.out)
        }
        Command::Plot { common, inputs, output } => {
            let _ = load_config(&common)?;
            run_plot(&inputs, &common.out.join(output))
        }
    }
}

#[derive(Debug, Serialize)]
struct TraceSummary {
    n: usize,
    alpha: f64,
    omega: f64,
    mismatch: f64,
    overlap: f64,
    resonant_target_weight: f64,
    transfer_time_closed_form: f64,
    transfer_time_bound: f64,
    threshold: f64,
    predicted_crossing: f64,
    measured_first_passage: Option<f64>,
    matched_peak: f64,
    mismatched_peak: f64,
}

/// `trace`: matched and mismatched CSV traces plus summary.json.
pub fn run_trace(cfg: &ExperimentConfig, out: &Path, require_fidelity: Option<f64>) -> Result<i32> {
    fs::create_dir_all(out)?;
    let model = single_target_model(cfg)?;
    let omega_n = resonance_weights(&model, cfg.omega)?;
    let matched_h = reduced_hamiltonian(&model, cfg.omega, &[omega_n])?;
    // H11 = mismatch · H22 by rescaling the target weight
    let h22 = matched_h.matrix()[[1, 1]].re;
    let mu2 = model.overlaps()[0].norm_sqr();
    let mismatched_w = cfg.mismatch * h22 - cfg.omega * mu2;
    let mismatched_h = reduced_hamiltonian(&model, cfg.omega, &[mismatched_w])?;

    let space = model.space();
    let mut engine = GateEngine::new(space);
    let init = engine.apply_sequence(&pre_rotation_gate(cfg.n), model.reference())?;
    let target = fock_state(space, cfg.n)?;
    let grid = time_grid(cfg.horizon, cfg.grid_step);

    let matched = continuous_fidelity_trace(&model, &matched_h, &init, &target, &grid)?;
    let mismatched = continuous_fidelity_trace(&model, &mismatched_h, &init, &target, &grid)?;

    let tt = transfer_time(&model, &matched_h)?;
    let threshold = 0.999;
    let predicted = resonant_crossing_time(&model, &matched_h, threshold)?;
    let f_at = fidelity_at_fn(&model, &matched_h, &init, &target)?;
    let measured = first_passage_refined(&matched, threshold, f_at);

    write_file(&out.join("trace_matched.csv"), |w| write_trace_csv(&matched, w))?;
    write_file(&out.join("trace_mismatched.csv"), |w| write_trace_csv(&mismatched, w))?;

    let summary = TraceSummary {
        n: cfg.n,
        alpha: cfg.alpha,
        omega: cfg.omega,
        mismatch: cfg.mismatch,
        overlap: model.overlaps()[0].norm(),
        resonant_target_weight: omega_n,
        transfer_time_closed_form: tt.time,
        transfer_time_bound: tt.bound,
        threshold,
        predicted_crossing: predicted,
        measured_first_passage: measured,
        matched_peak: matched.peak(),
        mismatched_peak: mismatched.peak(),
    };
    fs::write(
        out.join("summary.json"),
        serde_json::to_string_pretty(&summary).map_err(|e| Error::Config(e.to_string()))? + "\n",
    )?;
    println!(
        "trace: T = {:.4}, bound = {:.4}, first passage({threshold}) = {:?}, matched peak = {:.6}, mismatched peak = {:.6}",
        tt.time, tt.bound, measured, matched.peak(), mismatched.peak()
    );
    if let Some(req) = require_fidelity {
        if matched.peak() < req {
            return Ok(EXIT_THRESHOLD);
        }
    }
    Ok(EXIT_OK)
}

fn single_target_model(cfg: &ExperimentConfig) -> Result<SubspaceModel> {
    let space = cfg.space()?;
    let target = fock_state(space, cfg.n)?;
    let reference = coherent_state(space, Complex64::new(cfg.alpha, 0.0));
    build_subspace(vec![target], reference)
}

#[derive(Debug, Clone)]
struct ScalingRow {
    n: usize,
    t_eq5: f64,
    t_bound: f64,
    n_min: Option<usize>,
}

/// `scaling`: per-n closed-form times with α = √n, minimal iteration
/// counts, and the fitted log-log exponents.
pub fn run_scaling(cfg: &ExperimentConfig, out: &Path) -> Result<i32> {
    fs::create_dir_all(out)?;
    let mut rows: Vec<ScalingRow> = cfg
        .n_values
        .par_iter()
        .map(|&n| -> Result<ScalingRow> {
            let alpha = (n as f64).sqrt();
            let mut scenario = cfg.clone();
            scenario.n = n;
            scenario.alpha = alpha;
            scenario.target = Vec::new();
            scenario.dim = cfg.dim;
            let model = single_target_model(&scenario)?;
            let omega_n = resonance_weights(&model, cfg.omega)?;
            let h = reduced_hamiltonian(&model, cfg.omega, &[omega_n])?;
            let tt = transfer_time(&model, &h)?;
            let target = scenario.target_coords();
            let found = minimal_iterations(
                &model,
                &target,
                cfg.n_max,
                cfg.fidelity_threshold,
                &scenario.optimizer_config(),
            )?;
            Ok(ScalingRow { n, t_eq5: tt.time, t_bound: tt.bound, n_min: found.map(|f| f.0) })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.n);

    let t5: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.t_eq5)).collect();
    let tb: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.t_bound)).collect();
    let fit5 = fit_scaling_exponent(&t5)?;
    let fitb = fit_scaling_exponent(&tb)?;

    let mut text = String::from("n,T_eq5,T_bound,N_min\n");
    for r in &rows {
        let nmin = r.n_min.map_or(String::from(""), |n| n.to_string());
        text.push_str(&format!("{},{:.16e},{:.16e},{}\n", r.n, r.t_eq5, r.t_bound, nmin));
    }
    text.push_str(&format!(
        "# fit,T_eq5,exponent={:.16e},intercept={:.16e}\n",
        fit5.0, fit5.1
    ));
    text.push_str(&format!(
        "# fit,T_bound,exponent={:.16e},intercept={:.16e}\n",
        fitb.0, fitb.1
    ));
    fs::write(out.join("scaling.csv"), text)?;
    println!(
        "scaling: {} photon numbers, T_eq5 exponent = {:.4}, T_bound exponent = {:.4}",
        rows.len(),
        fit5.0,
        fitb.0
    );
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct SuperposeSummary {
    levels: Vec<usize>,
    weights: Vec<f64>,
    alpha: f64,
    iterations: usize,
    reduced_fidelity: f64,
    full_fidelity: f64,
    difference: f64,
    seed: u64,
}

/// `superpose`: optimize angles, then re-simulate the compiled gate
/// sequence in the full space and report both fidelities.
pub fn run_superposition(
    cfg: &ExperimentConfig,
    out: &Path,
    require_fidelity: Option<f64>,
) -> Result<i32> {
    if cfg.target.is_empty() {
        return Err(Error::Config("superpose requires a non-empty target list".into()));
    }
    fs::create_dir_all(out)?;
    let model = cfg.model()?;
    let target_coords = cfg.target_coords();
    let (params, reduced_f) =
        optimize(&model, &target_coords, cfg.iterations, &cfg.optimizer_config())?;

    let space = model.space();
    let seq = discrete_protocol(&params, Complex64::new(cfg.alpha, 0.0), &cfg.target_levels())?;
    let mut engine = GateEngine::new(space);
    let prepared = engine.apply_sequence(&seq, model.reference())?;
    let full_target = cfg.full_target(space)?;
    let full_f = fidelity(&full_target, &prepared)?;

    let record = OptimizedRecord::from_params(&params, reduced_f, cfg.seed);
    fs::write(
        out.join("optimized_params.json"),
        serde_json::to_string_pretty(&record).map_err(|e| Error::Config(e.to_string()))? + "\n",
    )?;
    let summary = SuperposeSummary {
        levels: cfg.target_levels(),
        weights: cfg.target.iter().map(|c| c.weight).collect(),
        alpha: cfg.alpha,
        iterations: cfg.iterations,
        reduced_fidelity: reduced_f,
        full_fidelity: full_f,
        difference: (reduced_f - full_f).abs(),
        seed: cfg.seed,
    };
    fs::write(
        out.join("superpose_summary.json"),
        serde_json::to_string_pretty(&summary).map_err(|e| Error::Config(e.to_string()))? + "\n",
    )?;
    println!(
        "superpose: N = {}, reduced F = {:.9}, full F = {:.9}, |diff| = {:.3e}",
        cfg.iterations,
        reduced_f,
        full_f,
        (reduced_f - full_f).abs()
    );
    if let Some(req) = require_fidelity {
        if full_f < req {
            return Ok(EXIT_THRESHOLD);
        }
    }
    Ok(EXIT_OK)
}

/// `optimize`: angle optimization for the configured target; writes the
/// parameter record.
pub fn run_optimize(cfg: &ExperimentConfig, out: &Path, require_fidelity: Option<f64>) -> Result<i32> {
    fs::create_dir_all(out)?;
    let model = cfg.model()?;
    let target_coords = cfg.target_coords();
    let (params, f) = optimize(&model, &target_coords, cfg.iterations, &cfg.optimizer_config())?;
    let record = OptimizedRecord::from_params(&params, f, cfg.seed);
    fs::write(
        out.join("optimized_params.json"),
        serde_json::to_string_pretty(&record).map_err(|e| Error::Config(e.to_string()))? + "\n",
    )?;
    println!("optimize: N = {}, achieved fidelity = {:.9}", cfg.iterations, f);
    if let Some(req) = require_fidelity {
        if f < req {
            return Ok(EXIT_THRESHOLD);
        }
    }
    Ok(EXIT_OK)
}

/// `export-gates`: compile a parameter record into the one-gate-per-line
/// program, verifying the text round-trips.
pub fn export_gates(cfg: &ExperimentConfig, params_path: &Path, out: &Path) -> Result<i32> {
    fs::create_dir_all(out)?;
    let text = fs::read_to_string(params_path)?;
    let record: OptimizedRecord =
        serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
    let params = record.to_params()?;
    let seq = discrete_protocol(&params, Complex64::new(cfg.alpha, 0.0), &cfg.target_levels())?;
    let program = seq.to_text();
    let reparsed = GateSequence::parse_text(&program)?;
    if reparsed != seq {
        return Err(Error::Parse("gate program did not round-trip".into()));
    }
    fs::write(out.join("gates.txt"), program)?;
    println!("export-gates: {} gates written", seq.len());
    Ok(EXIT_OK)
}

/// A named series parsed from CSV.
#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

/// Parse a CSV file (header row, first column x, `#` comments ignored)
/// into one series per remaining column; empty cells are skipped.
pub fn read_csv_series(path: &Path) -> Result<Vec<Series>> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse(format!("{}: empty file", path.display())))?;
    let columns: Vec<&str> = header.split(',').collect();
    if columns.len() < 2 {
        return Err(Error::Parse(format!("{}: need at least two columns", path.display())));
    }
    let mut series: Vec<Series> = columns[1..]
        .iter()
        .map(|name| Series { name: name.to_string(), points: Vec::new() })
        .collect();
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != columns.len() {
            return Err(Error::Parse(format!("{}: ragged row `{line}`", path.display())));
        }
        let x: f64 = cells[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad x value `{}`", cells[0])))?;
        for (i, cell) in cells[1..].iter().enumerate() {
            if cell.is_empty() {
                continue;
            }
            let y: f64 = cell
                .parse()
                .map_err(|_| Error::Parse(format!("bad value `{cell}`")))?;
            series[i].points.push((x, y));
        }
    }
    Ok(series)
}

/// `plot`: render CSV series as a deterministic standalone SVG.
pub fn run_plot(inputs: &[PathBuf], output: &Path) -> Result<i32> {
    if inputs.is_empty() {
        return Err(Error::Config("plot requires at least one input CSV".into()));
    }
    let mut all = Vec::new();
    for input in inputs {
        let mut series = read_csv_series(input)?;
        if inputs.len() > 1 {
            let stem = input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            for s in &mut series {
                s.name = format!("{stem}:{}", s.name);
            }
        }
        all.extend(series);
    }
    let svg = render_svg(&all)?;
    if let Some(parent) = output.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(output, svg)?;
    println!("plot: wrote {}", output.display());
    Ok(EXIT_OK)
}

const SVG_COLORS: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

/// Standalone SVG line chart: axes, labels, one polyline per series.
/// Byte-deterministic for identical input.
pub fn render_svg(series: &[Series]) -> Result<String> {
    if series.is_empty() || series.iter().all(|s| s.points.is_empty()) {
        return Err(Error::Config("no data to plot".into()));
    }
    let (width, height) = (640.0, 480.0);
    let (ml, mr, mt, mb) = (60.0, 20.0, 20.0, 45.0);
    let points = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| ml + (x - x0) / (x1 - x0) * (width - ml - mr);
    let sy = |y: f64| height - mb - (y - y0) / (y1 - y0) * (height - mt - mb);
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        height - mb,
        width - mr,
        height - mb
    ));
    svg.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{}\" stroke=\"black\"/>\n",
        height - mb
    ));
    svg.push_str(&format!(
        "<text x=\"{ml}\" y=\"{}\" font-size=\"12\">{:.4}</text>\n",
        height - mb + 16.0,
        x0
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{:.4}</text>\n",
        width - mr,
        height - mb + 16.0,
        x1
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{:.4}</text>\n",
        ml - 6.0,
        height - mb,
        y0
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{:.4}</text>\n",
        ml - 6.0,
        mt + 10.0,
        y1
    ));
    for (i, s) in series.iter().enumerate() {
        if s.points.is_empty() {
            continue;
        }
        let color = SVG_COLORS[i % SVG_COLORS.len()];
        let coords: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            coords.join(" ")
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{color}\">{}</text>\n",
            ml + 8.0,
            mt + 14.0 + 14.0 * i as f64,
            s.name
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn write_file(path: &Path, f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_weight_validation() {
        let mut cfg = ExperimentConfig::default();
        cfg.target = vec![
            TargetComponent { level: 70, weight: 0.3, phase: 0.0 },
            TargetComponent { level: 100, weight: 0.6, phase: 0.0 },
        ];
        assert!(cfg.validate().is_err());
        cfg.target[1].weight = 0.7;
        assert!(cfg.validate().is_ok());
        cfg.target[1].level = 70;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn svg_polyline_counts() {
        let two_points = Series { name: "f".into(), points: vec![(0.0, 0.1), (1.0, 0.9)] };
        let svg = render_svg(std::slice::from_ref(&two_points)).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg.matches("points=\"").count(), 1);
        let svg2 = render_svg(&[two_points.clone(), two_points]).unwrap();
        assert_eq!(svg2.matches("<polyline").count(), 2);
        assert!(render_svg(&[]).is_err());
        assert!(render_svg(&[Series { name: "e".into(), points: vec![] }]).is_err());
    }

    #[test]
    fn svg_deterministic() {
        let s = Series { name: "f".into(), points: vec![(0.0, 0.25), (2.0, 0.5), (4.0, 1.0)] };
        let a = render_svg(std::slice::from_ref(&s)).unwrap();
        let b = render_svg(std::slice::from_ref(&s)).unwrap();
        assert_eq!(a, b);
    }
}
