//! Command-line front end: single runs and Δt sweeps with CSV/JSON output.

mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use config::{resolve, CommonArgs, Resolved};
use serde_json::json;
use swe_rexi::benchmarks::{
    linf_error, load_reference, reference_filename, reference_solution, run_sweep, save_reference,
    stiffness_sweep_configs, write_sweep_csv, BenchmarkSpec, ErrorField, RowStatus, SweepCase, SweepRow,
};
use swe_rexi::integrators::{integrate, parse_stepper_id, Stepper};
use swe_rexi::parallel::{TimingBreakdown, TimingRecord};
use swe_rexi::swe::{PrognosticState, SweModel};
use swe_rexi::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "swe-rexi", version, about = "Shallow-water runs with exponential and classical time steppers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one configuration and compare it with the reference.
    Run(RunArgs),
    /// Error and wallclock tables over a grid of steppers and Δt.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Stepper identifier, e.g. lg_rexi_lc_n_erk_ver1.
    #[arg(long)]
    stepper: Option<String>,
    /// Time step (s); must divide the horizon.
    #[arg(long)]
    dt: Option<f64>,
    /// Repeat the run this many times and keep the fastest timings.
    #[arg(long, default_value_t = 1)]
    ensemble: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Comma-separated stepper identifiers.
    #[arg(long, value_delimiter = ',')]
    steppers: Vec<String>,
    /// Comma-separated Δt values (s).
    #[arg(long, value_delimiter = ',')]
    dts: Vec<f64>,
    /// Repeat the sweep for mean depths 2000..18000 m.
    #[arg(long)]
    stiffness: bool,
    #[command(flatten)]
    common: CommonArgs,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } | Error::Csv(_) | Error::Json(_) => 1,
        Error::Parse { .. } => 2,
        Error::Config(_) | Error::Data(_) | Error::Contour(_) => 3,
        Error::Divergence { .. } => 4,
        Error::Solver { .. } | Error::PoleCollision { .. } | Error::Worker { .. } => 5,
    }
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn prepare_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })
}

/// Loads `--reference`, or reuses/creates the content-named RK4 snapshot in
/// the output directory.
fn obtain_reference(
    cfg: &Resolved,
    spec: &BenchmarkSpec,
    model: &SweModel,
    u0: &PrognosticState,
    explicit: Option<&Path>,
) -> Result<(PrognosticState, PathBuf)> {
    if let Some(p) = explicit {
        return Ok((load_reference(p, model)?, p.to_path_buf()));
    }
    let path = cfg.out.join(reference_filename(spec, cfg.trunc, cfg.reference_dt));
    if path.exists() {
        return Ok((load_reference(&path, model)?, path));
    }
    eprintln!("generating reference {}", path.display());
    let r = reference_solution(spec, model, u0, cfg.reference_dt, None)?;
    save_reference(&path, model, &r)?;
    Ok((r, path))
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let (cfg, _) = resolve(&args.common, args.stepper.as_deref(), args.dt)?;
    let id = cfg
        .stepper
        .clone()
        .ok_or_else(|| Error::Config("--stepper is required".into()))?;
    let dt = cfg.dt.ok_or_else(|| Error::Config("--dt is required".into()))?;
    let spec_id = parse_stepper_id(&id)?;
    if args.ensemble == 0 {
        return Err(Error::Config("--ensemble must be at least 1".into()));
    }
    let model = cfg.benchmark.model(cfg.trunc)?;
    let u0 = cfg.benchmark.initial_state(&model)?;
    let horizon = cfg.benchmark.horizon_seconds();
    prepare_out(&cfg.out)?;
    write(&cfg.out.join("resolved_config.txt"), cfg.describe())?;

    let mut final_state = None;
    let mut records = Vec::new();
    let mut residue = 0.0f64;
    let mut steps = 0;
    for member in 0..args.ensemble {
        let mut stepper = Stepper::new(spec_id, model.clone(), dt, cfg.stepper_options())?;
        let out = integrate(&mut stepper, &u0, horizon, &mut |_, _, _| {})?;
        residue = residue.max(stepper.max_rexi_residue());
        steps = out.steps;
        records.push(TimingRecord {
            breakdown: *stepper.timing(),
            workers: cfg.workers,
            num_terms: if spec_id.uses_rexi() { cfg.rexi.num_poles() } else { 0 },
            ensemble: member,
        });
        final_state = Some(out.state);
    }
    let u = final_state.expect("at least one ensemble member");

    let (reference, ref_path) = obtain_reference(&cfg, &cfg.benchmark, &model, &u0, cfg.reference.as_deref())?;
    let report = json!({
        "stepper_id": spec_id.canonical(),
        "dt_seconds": dt,
        "trunc": cfg.trunc,
        "benchmark": cfg.benchmark.name.as_str(),
        "horizon_hours": cfg.benchmark.horizon_hours,
        "steps": steps,
        "linf_h_error_m": linf_error(&model, &u, &reference, ErrorField::H)?,
        "linf_vort_error": linf_error(&model, &u, &reference, ErrorField::Vort)?,
        "linf_div_error": linf_error(&model, &u, &reference, ErrorField::Div)?,
        "max_rexi_residue": residue,
        "reference": ref_path.file_name().map(|s| s.to_string_lossy().into_owned()),
        "rexi": cfg.rexi.describe(),
    });
    write(&cfg.out.join("error_report.json"), serde_json::to_string_pretty(&report)?)?;

    let snap = cfg.out.join(format!(
        "snapshot_{}_T{}_dt{}_h{}_{}.bin",
        cfg.benchmark.name,
        cfg.trunc,
        dt,
        cfg.benchmark.horizon_hours,
        spec_id.canonical()
    ));
    save_reference(&snap, &model, &u)?;

    let min = TimingBreakdown::min_over(&records.iter().map(|r| r.breakdown).collect::<Vec<_>>())
        .expect("at least one ensemble member");
    let timing = json!({
        "runs": records,
        "min": TimingRecord {
            breakdown: min,
            ensemble: records.len(),
            ..records[0]
        },
    });
    write(&cfg.out.join("timing.json"), serde_json::to_string_pretty(&timing)?)?;
    println!(
        "{} dt={dt} T{}: linf_h={:.6e} m after {steps} steps",
        spec_id.canonical(),
        cfg.trunc,
        report["linf_h_error_m"].as_f64().unwrap_or(f64::NAN)
    );
    Ok(())
}

fn sweep_one(cfg: &Resolved, spec: &BenchmarkSpec, ids: &[&str], dts: &[f64], explicit_ref: Option<&Path>) -> Result<Vec<SweepRow>> {
    let model = spec.model(cfg.trunc)?;
    let u0 = spec.initial_state(&model)?;
    let (reference, _) = obtain_reference(cfg, spec, &model, &u0, explicit_ref)?;
    let case = SweepCase {
        model: &model,
        initial: &u0,
        reference: &reference,
        horizon: spec.horizon_seconds(),
    };
    Ok(run_sweep(ids, dts, &case, &cfg.stepper_options()))
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let (cfg, file) = resolve(&args.common, None, None)?;
    let list = |flag: &[String], key: &str| -> Vec<String> {
        if !flag.is_empty() {
            flag.to_vec()
        } else {
            file.get(key)
                .map(|v| v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect())
                .unwrap_or_default()
        }
    };
    let ids = list(&args.steppers, "steppers");
    let dts: Vec<f64> = if args.dts.is_empty() {
        list(&[], "dts")
            .iter()
            .map(|v| v.parse().map_err(|_| Error::Config(format!("bad Δt '{v}' in config"))))
            .collect::<Result<_>>()?
    } else {
        args.dts.clone()
    };
    if dts.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
        return Err(Error::Config("every Δt must be positive".into()));
    }
    for id in &ids {
        parse_stepper_id(id)?;
    }
    let ids: Vec<&str> = ids.iter().map(String::as_str).collect();
    prepare_out(&cfg.out)?;
    write(&cfg.out.join("resolved_config.txt"), cfg.describe())?;

    if args.stiffness {
        if cfg.reference.is_some() {
            return Err(Error::Config("--reference cannot be combined with --stiffness".into()));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["mean_depth_m", "stepper_id", "dt_seconds", "linf_h_error_m", "status", "wallclock_s"])?;
        for base in stiffness_sweep_configs() {
            let mut spec = base;
            spec.horizon_hours = cfg.benchmark.horizon_hours;
            spec.name = cfg.benchmark.name;
            let depth = spec.mean_geopotential / spec.gravity;
            for r in sweep_one(&cfg, &spec, &ids, &dts, None)? {
                w.write_record([
                    depth.to_string(),
                    r.stepper_id.clone(),
                    r.dt.to_string(),
                    error_cell(&r),
                    r.status.as_str().to_string(),
                    format!("{:.6}", r.wallclock),
                ])?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Data(e.to_string()))?;
        write(&cfg.out.join("stiffness.csv"), bytes)?;
        return Ok(());
    }

    let rows = sweep_one(&cfg, &cfg.benchmark, &ids, &dts, cfg.reference.as_deref())?;
    let mut buf = Vec::new();
    write_sweep_csv(&rows, &mut buf)?;
    write(&cfg.out.join("sweep.csv"), buf)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["stepper_id", "dt_seconds", "wallclock_s", "linf_h_error_m"])?;
    for r in rows.iter().filter(|r| r.is_stable()) {
        w.write_record([
            r.stepper_id.clone(),
            r.dt.to_string(),
            format!("{:.6}", r.wallclock),
            error_cell(r),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Data(e.to_string()))?;
    write(&cfg.out.join("wallclock_vs_error.csv"), bytes)?;
    for r in &rows {
        println!("{:<28} dt={:<8} {:>14} {}", r.stepper_id, r.dt, error_cell(r), r.status.as_str());
    }
    Ok(())
}

fn error_cell(r: &SweepRow) -> String {
    match (&r.status, r.linf_h_error) {
        (RowStatus::Diverged, _) => "DIVERGED".into(),
        (_, Some(e)) => format!("{e:.9e}"),
        (_, None) => String::new(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
