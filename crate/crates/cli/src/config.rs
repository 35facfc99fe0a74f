use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use swe_rexi::benchmarks::{BenchmarkName, BenchmarkSpec, DEFAULT_REFERENCE_DT};
use swe_rexi::integrators::StepperOptions;
use swe_rexi::parallel::ReduceMode;
use swe_rexi::rexi::{RexiConfig, DEFAULT_BASE_DT, DEFAULT_BASE_RADIUS};
use swe_rexi::{Error, Result};

/// Flags shared by `run` and `sweep`. Every value is optional here so the
/// config file and defaults can fill the gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Key=value file; command-line flags take precedence over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Spectral truncation T.
    #[arg(long)]
    pub trunc: Option<usize>,
    /// barotropic_instability, barotropic_instability_no_bump or
    /// linear_gravity_wave.
    #[arg(long)]
    pub benchmark: Option<String>,
    /// Simulated time in hours (default 24).
    #[arg(long)]
    pub horizon_hours: Option<f64>,
    /// Mean fluid depth in metres (Φ̄ = g·depth).
    #[arg(long)]
    pub mean_depth: Option<f64>,
    /// Real axis crossing of the shifted REXI contour.
    #[arg(long)]
    pub rexi_p0: Option<f64>,
    /// Imaginary axis crossing ±i·p1 of the shifted REXI contour.
    #[arg(long)]
    pub rexi_p1_imag: Option<f64>,
    /// Number of REXI poles N.
    #[arg(long)]
    pub rexi_n: Option<usize>,
    /// Use a centred circle whose radius scales with Δt instead of the
    /// shifted contour.
    #[arg(long)]
    pub rexi_radius_scaling: bool,
    /// Lower bound on the scaled circle's radius.
    #[arg(long)]
    pub rexi_min_radius: Option<f64>,
    /// REXI worker threads.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Reference snapshot; generated with RK4 when absent.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Step of the generated RK4 reference (s).
    #[arg(long)]
    pub reference_dt: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Fully resolved settings, echoed to the output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub stepper: Option<String>,
    pub dt: Option<f64>,
    pub trunc: usize,
    pub benchmark: BenchmarkSpec,
    pub rexi: RexiConfig,
    pub workers: usize,
    pub reference: Option<PathBuf>,
    pub reference_dt: f64,
    pub out: PathBuf,
}

fn read_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("{}:{}: expected key=value", path.display(), i + 1)))?;
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("config key '{key}': cannot parse '{v}'")))
}

const FILE_KEYS: [&str; 16] = [
    "stepper",
    "dt",
    "trunc",
    "benchmark",
    "horizon_hours",
    "mean_depth",
    "rexi_p0",
    "rexi_p1_imag",
    "rexi_n",
    "rexi_radius_scaling",
    "rexi_min_radius",
    "workers",
    "reference",
    "reference_dt",
    "out",
    "steppers",
];

pub fn resolve(args: &CommonArgs, stepper: Option<&str>, dt: Option<f64>) -> Result<(Resolved, BTreeMap<String, String>)> {
    let file = match &args.config {
        Some(p) => read_file(p)?,
        None => BTreeMap::new(),
    };
    for k in file.keys() {
        if !FILE_KEYS.contains(&k.as_str()) && k != "dts" {
            return Err(Error::Config(format!("unknown config key '{k}'")));
        }
    }
    macro_rules! pick {
        ($flag:expr, $key:literal) => {
            match $flag {
                Some(v) => Some(v),
                None => file.get($key).map(|v| parse($key, v)).transpose()?,
            }
        };
    }
    let trunc: usize = pick!(args.trunc, "trunc").unwrap_or(42);
    let name: BenchmarkName = pick!(args.benchmark.clone(), "benchmark")
        .unwrap_or_else(|| "barotropic_instability".to_string())
        .parse()?;
    let mut benchmark = BenchmarkSpec::new(name);
    if let Some(h) = pick!(args.horizon_hours, "horizon_hours") {
        benchmark = benchmark.with_horizon_hours(h);
    }
    if let Some(d) = pick!(args.mean_depth, "mean_depth") {
        benchmark = benchmark.with_mean_depth(d);
    }
    benchmark.validate()?;

    let scaling = args.rexi_radius_scaling
        || file
            .get("rexi_radius_scaling")
            .map(|v| parse::<bool>("rexi_radius_scaling", v))
            .transpose()?
            .unwrap_or(false);
    let rexi = if scaling {
        let n: usize = pick!(args.rexi_n, "rexi_n").unwrap_or(32);
        let min_radius: f64 = pick!(args.rexi_min_radius, "rexi_min_radius").unwrap_or(5.0);
        RexiConfig::ScaledCircle {
            base_radius: DEFAULT_BASE_RADIUS,
            base_dt: DEFAULT_BASE_DT,
            min_radius,
            num_poles: n,
        }
    } else {
        let d = RexiConfig::default();
        let (p0, p1, n) = match d {
            RexiConfig::Shifted { p0, p1_imag, num_poles } => (p0, p1_imag, num_poles),
            _ => unreachable!("default contour is shifted"),
        };
        RexiConfig::Shifted {
            p0: pick!(args.rexi_p0, "rexi_p0").unwrap_or(p0),
            p1_imag: pick!(args.rexi_p1_imag, "rexi_p1_imag").unwrap_or(p1),
            num_poles: pick!(args.rexi_n, "rexi_n").unwrap_or(n),
        }
    };
    // validate the contour up front
    rexi.contour(dt.unwrap_or(DEFAULT_BASE_DT))?;

    let workers: usize = pick!(args.workers, "workers").unwrap_or(1);
    if workers == 0 {
        return Err(Error::Config("--workers must be at least 1".into()));
    }
    let stepper = stepper.map(str::to_string).or_else(|| file.get("stepper").cloned());
    let dt = match dt {
        Some(v) => Some(v),
        None => file.get("dt").map(|v| parse("dt", v)).transpose()?,
    };
    if let Some(v) = dt {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Config(format!("--dt must be positive, got {v}")));
        }
    }
    // coarser reference step at lower truncation, snapped to divide the horizon
    let horizon = benchmark.horizon_seconds();
    let target = DEFAULT_REFERENCE_DT * 42.0 / trunc as f64;
    let default_ref_dt = horizon / (horizon / target).ceil();
    let reference_dt: f64 = pick!(args.reference_dt, "reference_dt").unwrap_or(default_ref_dt);
    let reference: Option<PathBuf> = pick!(args.reference.clone(), "reference");
    let out: PathBuf = pick!(args.out.clone(), "out").unwrap_or_else(|| PathBuf::from("out"));
    Ok((
        Resolved {
            stepper,
            dt,
            trunc,
            benchmark,
            rexi,
            workers,
            reference,
            reference_dt,
            out,
        },
        file,
    ))
}

impl Resolved {
    pub fn stepper_options(&self) -> StepperOptions {
        StepperOptions {
            rexi: self.rexi.clone(),
            workers: self.workers,
            reduce: ReduceMode::FixedTree,
        }
    }

    /// `key=value` echo of every resolved setting.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        if let Some(id) = &self.stepper {
            s.push_str(&format!("stepper={id}\n"));
        }
        if let Some(dt) = self.dt {
            s.push_str(&format!("dt={dt}\n"));
        }
        s.push_str(&format!("trunc={}\n", self.trunc));
        s.push_str(&format!("rexi={}\n", self.rexi.describe()));
        s.push_str(&format!("workers={}\n", self.workers));
        s.push_str(&format!("reference_dt={}\n", self.reference_dt));
        if let Some(r) = &self.reference {
            s.push_str(&format!("reference={}\n", r.display()));
        }
        s.push_str(&format!("out={}\n", self.out.display()));
        for line in self.benchmark.to_key_value().lines().filter(|l| !l.starts_with('#')) {
            s.push_str("benchmark.");
            s.push_str(line);
            s.push('\n');
        }
        s
    }
}
