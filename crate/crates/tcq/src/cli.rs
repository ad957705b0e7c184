//! Command-line front end. `run` parses argv, dispatches one subcommand and
//! returns the process exit code: 0 on success, 1 when a computation is
//! refused (expansion gate, tail mass, failed oracle check), 2 on bad
//! arguments.
//!
//! Output goes to `--output` (format from `--format` or the file
//! extension) or to stdout, where the default is a short text table.
//! Every JSON document carries the resolved [`RunConfig`] under `config`,
//! and `--config` accepts either a bare config or such a document.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bench::{run_scaling, Target};
use crate::error::{Error, Result};
use crate::observables::{driven_signal, sweep_n, thermal_jz, Convention, ShiftReport};
use crate::fit::FitKind;
use crate::regimes::regime_report;
use crate::robustness::{eigen_shift_bound, verify_shift_bound, DEFAULT_THRESHOLD};
use crate::thermo::{delta_energy, delta_helmholtz, distribution, z_exact, z_pert, Axis, DEFAULT_DELTA};
use crate::units::{ModelParams, PRESET_G0, PRESET_OMEGA0, PRESET_TEMP};

/// Largest ensemble accepted by `oracle-compare`.
pub const ORACLE_COMPARE_MAX_N: u64 = 64;

pub const DISTRIBUTION_JK_HEADER: [&str; 3] = ["twice_j", "k", "log_weight"];
pub const DISTRIBUTION_KM_HEADER: [&str; 3] = ["k", "twice_m", "log_weight"];
pub const SHIFTS_HEADER: [&str; 3] = ["n", "fractional_mean_shift", "fractional_variance_shift"];
pub const JZ_SHIFT_HEADER: [&str; 3] = ["n", "jz_shift_hz", "jz_net_shift_hz"];
pub const BENCH_HEADER: [&str; 3] = ["target", "n", "median_seconds"];
pub const PARTITION_HEADER: [&str; 8] =
    ["n", "temp_kelvin", "log_z0", "ratio", "error_bound", "minus_beta_delta_a", "delta_e_joules", "delta_e_quanta"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Everything a run depends on besides the subcommand's own flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub n: Option<u64>,
    pub omega0_rad_per_s: f64,
    pub g0_rad_per_s: f64,
    pub temp_kelvin: f64,
    pub delta: f64,
    pub threads: Option<usize>,
    pub output_path: Option<PathBuf>,
    pub output_format: Option<OutputFormat>,
}

impl RunConfig {
    /// the preset frequencies and temperature
    pub fn preset() -> Self {
        Self {
            n: None,
            omega0_rad_per_s: PRESET_OMEGA0,
            g0_rad_per_s: PRESET_G0,
            temp_kelvin: PRESET_TEMP,
            delta: DEFAULT_DELTA,
            threads: None,
            output_path: None,
            output_format: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {x}")))
            }
        };
        positive("omega0", self.omega0_rad_per_s)?;
        positive("temp", self.temp_kelvin)?;
        if !(self.g0_rad_per_s >= 0.0 && self.g0_rad_per_s.is_finite()) {
            return Err(Error::InvalidArgument(format!("g0 must be non-negative, got {}", self.g0_rad_per_s)));
        }
        if !(self.delta > 0.0 && self.delta <= 1e-3) {
            return Err(Error::InvalidArgument(format!("delta must lie in (0, 1e-3], got {}", self.delta)));
        }
        if self.n == Some(0) {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidArgument("threads must be at least 1".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses a bare config or any output document with a `config` field.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut value: serde_json::Value = serde_json::from_str(text)?;
        if let Some(inner) = value.get_mut("config") {
            value = inner.take();
        }
        let cfg: Self = serde_json::from_value(value)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn params(&self) -> Result<ModelParams> {
        let n = self.n.ok_or_else(|| Error::InvalidArgument("--n is required for this subcommand".into()))?;
        self.params_for(n)
    }

    fn params_for(&self, n: u64) -> Result<ModelParams> {
        ModelParams::new(n, self.omega0_rad_per_s, self.g0_rad_per_s)
            .map_err(|e| Error::InvalidArgument(e.to_string()))
    }

    fn format(&self) -> Option<OutputFormat> {
        self.output_format.or_else(|| {
            let ext = self.output_path.as_deref()?.extension()?.to_str()?;
            Some(if ext.eq_ignore_ascii_case("json") { OutputFormat::Json } else { OutputFormat::Csv })
        })
    }
}

/// An inclusive `var=start:stop:step` grid. Only `n` can be swept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sweep {
    pub values: Vec<u64>,
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (var, range) = s.split_once('=').ok_or("expected var=start:stop:step")?;
        if var.trim() != "n" {
            return Err(format!("only n can be swept, got {var:?}"));
        }
        let parts: Vec<u64> = range
            .split(':')
            .map(|p| p.trim().parse::<u64>().map_err(|e| format!("{p:?}: {e}")))
            .collect::<std::result::Result<_, _>>()?;
        let [start, stop, step] = parts[..] else {
            return Err("expected start:stop:step".into());
        };
        if start == 0 || step == 0 || stop < start {
            return Err("need 1 <= start <= stop and step >= 1".into());
        }
        Ok(Self { values: (start..=stop).step_by(step as usize).collect() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Paper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AxisArg {
    Jk,
    Km,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Physical,
    ShiftedBasis,
    Printed,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Physical => Convention::Physical,
            ConventionArg::ShiftedBasis => Convention::ShiftedBasis,
            ConventionArg::Printed => Convention::Printed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TargetArg {
    ZpertFirstOrder,
    ZpertHigher,
    ZExact,
}

impl From<TargetArg> for Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::ZpertFirstOrder => Target::ZpertFirstOrder,
            TargetArg::ZpertHigher => Target::ZpertHigher,
            TargetArg::ZExact => Target::ZExact,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "tcq", version, about = "Thermal Tavis-Cummings ensembles in the (j,k) block basis")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// start from a JSON config (or an earlier JSON output)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// named parameter set; `paper` is ω₀=2π·1e10, g₀=2π·100 rad/s, T=0.3 K
    #[arg(long, global = true, value_enum)]
    preset: Option<Preset>,
    #[arg(long, global = true)]
    n: Option<u64>,
    /// cavity and spin frequency, rad/s
    #[arg(long, global = true)]
    omega0: Option<f64>,
    /// single-spin coupling, rad/s
    #[arg(long, global = true)]
    g0: Option<f64>,
    /// kelvin
    #[arg(long, global = true)]
    temp: Option<f64>,
    /// read --omega0 and --g0 as Hz
    #[arg(long, global = true)]
    hz: bool,
    /// truncation target, in (0, 1e-3]
    #[arg(long, global = true)]
    delta: Option<f64>,
    #[arg(long, global = true, env = "TCQ_THREADS")]
    threads: Option<usize>,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Z₀, Z_pert, their ratio and the free-energy and energy shifts
    Partition,
    /// thermal populations over (j,k) or (k,m)
    Distribution {
        #[arg(long, value_enum, default_value = "jk")]
        axis: AxisArg,
    },
    /// cutoff temperature, critical size, Dicke population
    Regime,
    /// fractional photon mean and variance shifts over an n grid
    Shifts {
        #[arg(long, default_value = "n=100:1000:100")]
        sweep: Sweep,
        #[arg(long, value_enum, default_value = "physical")]
        convention: ConventionArg,
    },
    /// ⟨J_z⟩ shift over an n grid, in Hz
    JzShift {
        #[arg(long, default_value = "n=100:1000:100")]
        sweep: Sweep,
        #[arg(long, value_enum, default_value = "physical")]
        convention: ConventionArg,
    },
    /// sin(Ωt)⟨J_z⟩ after a resonant drive
    Driven {
        /// Rabi frequency, rad/s
        #[arg(long)]
        rabi: f64,
        /// seconds
        #[arg(long)]
        t: f64,
    },
    /// randomized check of the ordered-eigenvalue shift bound
    Robustness {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        max_dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// also report the budget for a perturbation of this Frobenius norm, rad/s
        #[arg(long)]
        perturbation_norm: Option<f64>,
    },
    /// single-threaded wall-time scaling of a partition path
    Bench {
        #[arg(long, value_enum, default_value = "zpert-first-order")]
        target: TargetArg,
        #[arg(long, value_delimiter = ',', default_value = "400,1600,6400")]
        grid: Vec<u64>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
    },
    /// exact diagonalization against Z₀ + Z_pert and its error bound
    OracleCompare,
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let result = resolve(&cli.common, err).and_then(|cfg| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads.unwrap_or(0))
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        // dispatch writes to a buffer so the pool never touches `out`
        let mut buf = Vec::new();
        let r = pool.install(|| dispatch(&cli.command, &cfg, &mut buf));
        out.write_all(&buf)?;
        r
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Maps a library error to the process exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::Domain(_) | Error::TooLarge { .. } => 2,
        _ => 1,
    }
}

fn resolve(args: &CommonArgs, log: &mut dyn Write) -> Result<RunConfig> {
    // a config file wins over the preset; explicit flags win over both
    let mut cfg = match (&args.config, args.preset) {
        (Some(path), _) => RunConfig::from_json(&std::fs::read_to_string(path)?)?,
        (None, Some(Preset::Paper)) => RunConfig::preset(),
        (None, None) => {
            let missing: Vec<&str> = [("--omega0", args.omega0), ("--g0", args.g0), ("--temp", args.temp)]
                .iter()
                .filter(|(_, v)| v.is_none())
                .map(|(name, _)| *name)
                .collect();
            if !missing.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "missing {} (or pass --preset paper)",
                    missing.join(", ")
                )));
            }
            RunConfig { omega0_rad_per_s: 0.0, g0_rad_per_s: 0.0, ..RunConfig::preset() }
        }
    };
    let scale = if args.hz { 2.0 * std::f64::consts::PI } else { 1.0 };
    if args.hz {
        let _ = writeln!(log, "note: --hz given, multiplying --omega0 and --g0 by 2π");
    }
    if let Some(w) = args.omega0 {
        cfg.omega0_rad_per_s = w * scale;
    }
    if let Some(g) = args.g0 {
        cfg.g0_rad_per_s = g * scale;
    }
    if let Some(t) = args.temp {
        cfg.temp_kelvin = t;
    }
    if let Some(d) = args.delta {
        cfg.delta = d;
    }
    cfg.n = args.n.or(cfg.n);
    cfg.threads = args.threads.or(cfg.threads);
    cfg.output_path = args.output.clone().or(cfg.output_path);
    cfg.output_format = args.format.or(cfg.output_format);
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    config: &'a RunConfig,
    result: T,
}

/// Where a subcommand's data goes.
enum Sink<'a> {
    Text(&'a mut dyn Write),
    Csv(Box<dyn Write + 'a>),
    Json(Box<dyn Write + 'a>),
}

fn sink<'a>(cfg: &RunConfig, out: &'a mut dyn Write) -> Result<Sink<'a>> {
    let target: Box<dyn Write + 'a> = match &cfg.output_path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => match cfg.format() {
            None => return Ok(Sink::Text(out)),
            Some(_) => Box::new(out),
        },
    };
    Ok(match cfg.format().unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => Sink::Csv(target),
        OutputFormat::Json => Sink::Json(target),
    })
}

fn write_json<T: Serialize>(w: &mut dyn Write, cfg: &RunConfig, result: T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, &Document { config: cfg, result })?;
    writeln!(w)?;
    Ok(())
}

fn write_csv<R: IntoIterator<Item = Vec<String>>>(w: &mut dyn Write, header: &[&str], rows: R) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(header)?;
    for row in rows {
        csv.write_record(&row)?;
    }
    csv.flush()?;
    Ok(())
}

/// Emits one result as text, CSV rows or a JSON document.
fn emit<T: Serialize>(
    cfg: &RunConfig,
    out: &mut dyn Write,
    result: &T,
    header: &[&str],
    rows: Vec<Vec<String>>,
    text: impl FnOnce() -> String,
) -> Result<()> {
    match sink(cfg, out)? {
        Sink::Text(w) => write!(w, "{}", text())?,
        Sink::Csv(mut w) => write_csv(&mut *w, header, rows)?,
        Sink::Json(mut w) => write_json(&mut *w, cfg, result)?,
    }
    Ok(())
}

fn fmt_rows(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in rows {
        let pad = width - k.chars().count();
        let _ = writeln!(s, "{k}{}  {v}", " ".repeat(pad));
    }
    s
}

fn dispatch(command: &Command, cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let temp = cfg.temp_kelvin;
    let delta = cfg.delta;
    match command {
        Command::Partition => {
            let params = cfg.params()?;
            let z = z_pert(&params, temp, delta)?;
            let a = delta_helmholtz(&params, temp, delta)?;
            let e = delta_energy(&params, temp, delta)?;
            #[derive(Serialize)]
            struct Partition {
                decomposition: crate::thermo::PartitionDecomposition,
                helmholtz: crate::thermo::HelmholtzShift,
                energy: crate::thermo::EnergyShift,
            }
            let row = vec![
                params.spins().to_string(),
                num(temp),
                num(z.log_z0),
                num(z.ratio),
                num(z.error_bound),
                num(a.minus_beta_delta_a),
                num(e.joules),
                num(e.in_quanta),
            ];
            let result = Partition { decomposition: z, helmholtz: a, energy: e };
            emit(cfg, out, &result, &PARTITION_HEADER, vec![row], || {
                fmt_rows(&[
                    ("n", params.spins().to_string()),
                    ("T [K]", num(temp)),
                    ("ln Z0", format!("{:.12e}", z.log_z0)),
                    ("Z_pert/Z0", format!("{:.6e}", z.ratio)),
                    ("error bound", format!("{:.3e}", z.error_bound)),
                    ("-beta dA", format!("{:.6e}", a.minus_beta_delta_a)),
                    ("dA [J]", format!("{:.6e}", a.joules)),
                    ("dE [J]", format!("{:.6e}", e.joules)),
                    ("dE [quanta]", format!("{:.6e}", e.in_quanta)),
                    ("blocks", z.truncation.blocks.to_string()),
                    ("k_max", z.truncation.k_max.to_string()),
                ])
            })
        }
        Command::Distribution { axis } => {
            let params = cfg.params()?;
            let axis = match axis {
                AxisArg::Jk => Axis::Jk,
                AxisArg::Km => Axis::Km,
            };
            let d = distribution(&params, temp, axis, delta)?;
            let opt = |x: Option<i64>| x.map(|v| v.to_string()).unwrap_or_default();
            let rows: Vec<Vec<String>> = d
                .entries
                .iter()
                .map(|e| match axis {
                    Axis::Jk => vec![opt(e.twice_j.map(|v| v as i64)), e.k.to_string(), num(e.log_weight)],
                    Axis::Km => vec![e.k.to_string(), opt(e.twice_m), num(e.log_weight)],
                })
                .collect();
            let header = match axis {
                Axis::Jk => DISTRIBUTION_JK_HEADER,
                Axis::Km => DISTRIBUTION_KM_HEADER,
            };
            emit(cfg, out, &d, &header, rows, || {
                let top = d.entries.iter().max_by(|a, b| a.log_weight.total_cmp(&b.log_weight));
                let mut s = fmt_rows(&[
                    ("cells", d.entries.len().to_string()),
                    ("ln Z", format!("{:.12e}", d.log_z)),
                    ("full spectra", d.exact.to_string()),
                ]);
                if let Some(e) = top {
                    let _ = writeln!(
                        s,
                        "most populated: twice_j={:?} k={} twice_m={:?} p={:.4e}",
                        e.twice_j,
                        e.k,
                        e.twice_m,
                        (e.log_weight - d.log_z).exp()
                    );
                }
                s.push_str("(use --format csv or --output for the table)\n");
                s
            })
        }
        Command::Regime => {
            let params = cfg.params()?;
            let r = regime_report(&params, temp)?;
            let row = vec![
                params.spins().to_string(),
                num(temp),
                num(r.t_cutoff),
                r.n_critical.to_string(),
                num(r.dicke_population.estimate),
                r.dicke_population.exact.map(num).unwrap_or_default(),
                num(r.crossover_limit),
            ];
            let header =
                ["n", "temp_kelvin", "t_cutoff", "n_critical", "dicke_estimate", "dicke_exact", "crossover_limit"];
            emit(cfg, out, &r, &header, vec![row], || {
                fmt_rows(&[
                    ("T_c [K]", format!("{:.4}", r.t_cutoff)),
                    (&format!("N_c at {temp} K"), r.n_critical.to_string()),
                    ("Dicke population (estimate)", format!("{:.6e}", r.dicke_population.estimate)),
                    (
                        "Dicke population (exact)",
                        r.dicke_population.exact.map_or("n/a (n > 256)".into(), |x| format!("{x:.6e}")),
                    ),
                    ("crossover limit [K]", format!("{:.4}", r.crossover_limit)),
                ])
            })
        }
        Command::Shifts { sweep, convention } => {
            let params = cfg.params_for(sweep.values[0])?;
            let sets = sweep_n(&params, &sweep.values, temp, delta, (*convention).into())?;
            let grid: Vec<f64> = sweep.values.iter().map(|&n| n as f64).collect();
            let mean: Vec<f64> = sets.iter().map(|s| s.photon_mean.pert_term).collect();
            let var: Vec<f64> = sets.iter().map(|s| s.photon_variance_shift.pert_term).collect();
            let ratio: Vec<f64> = sets.iter().map(|s| s.ratio).collect();
            let kind = if grid.len() >= 2 { FitKind::Linear } else { return sweep_too_short() };
            #[derive(Serialize)]
            struct Shifts {
                sets: Vec<crate::observables::ShiftSet>,
                fits: Vec<ShiftReport>,
            }
            let fits = vec![
                ShiftReport::new("fractional_mean_shift", "n", grid.clone(), mean.clone(), kind)?,
                ShiftReport::new("fractional_variance_shift", "n", grid.clone(), var.clone(), kind)?,
                ShiftReport::new("zpert_ratio", "n", grid.clone(), ratio, kind)?,
            ];
            let rows = sweep
                .values
                .iter()
                .zip(mean.iter().zip(&var))
                .map(|(n, (m, v))| vec![n.to_string(), num(m), num(v)])
                .collect();
            let result = Shifts { sets: sets.clone(), fits };
            emit(cfg, out, &result, &SHIFTS_HEADER, rows, || {
                let mut s = String::new();
                let _ = writeln!(s, "{:>6}  {:>14}  {:>14}  {:>14}", "n", "mean shift", "variance shift", "Z_pert/Z0");
                for set in &sets {
                    let _ = writeln!(
                        s,
                        "{:>6}  {:>14.6e}  {:>14.6e}  {:>14.6e}",
                        set.n, set.photon_mean.pert_term, set.photon_variance_shift.pert_term, set.ratio
                    );
                }
                for f in &result.fits {
                    let _ = writeln!(s, "{}: {}", f.label, describe_fit(&f.fit));
                }
                s
            })
        }
        Command::JzShift { sweep, convention } => {
            let params = cfg.params_for(sweep.values[0])?;
            let sets = sweep_n(&params, &sweep.values, temp, delta, (*convention).into())?;
            let grid: Vec<f64> = sweep.values.iter().map(|&n| n as f64).collect();
            let hz: Vec<_> = sets.iter().map(|s| s.jz_hz(params.omega0)).collect();
            let values: Vec<f64> = hz.iter().map(|c| c.pert_term).collect();
            if grid.len() < 3 {
                return sweep_too_short();
            }
            let report = ShiftReport::new("jz_shift_hz", "n", grid, values, FitKind::Quadratic)?;
            let rows = sweep
                .values
                .iter()
                .zip(&hz)
                .map(|(n, c)| vec![n.to_string(), num(c.pert_term), num(c.net)])
                .collect();
            emit(cfg, out, &report, &JZ_SHIFT_HEADER, rows, || {
                let mut s = String::new();
                let _ = writeln!(s, "{:>6}  {:>14}  {:>14}", "n", "shift [Hz]", "net [Hz]");
                for (n, c) in sweep.values.iter().zip(&hz) {
                    let _ = writeln!(s, "{n:>6}  {:>14.6e}  {:>14.6e}", c.pert_term, c.net);
                }
                let _ = writeln!(s, "fit: {}", describe_fit(&report.fit));
                s
            })
        }
        Command::Driven { rabi, t } => {
            let params = cfg.params()?;
            if !rabi.is_finite() || !t.is_finite() {
                return Err(Error::InvalidArgument("--rabi and --t must be finite".into()));
            }
            let signal = driven_signal(&params, temp, *rabi, *t, delta)?;
            let amplitude = thermal_jz(&params, temp, delta)?;
            #[derive(Serialize)]
            struct Driven {
                rabi: f64,
                t: f64,
                signal: f64,
                thermal_jz: f64,
            }
            let result = Driven { rabi: *rabi, t: *t, signal, thermal_jz: amplitude };
            let row = vec![num(rabi), num(t), num(signal), num(amplitude)];
            emit(cfg, out, &result, &["rabi", "t", "signal", "thermal_jz"], vec![row], || {
                fmt_rows(&[
                    ("<J_z> thermal", format!("{amplitude:.12e}")),
                    ("sin(rabi t) <J_z>", format!("{signal:.12e}")),
                ])
            })
        }
        Command::Robustness { trials, max_dim, seed, perturbation_norm } => {
            let check = verify_shift_bound(*trials, *max_dim, *seed)?;
            let budget = perturbation_norm
                .map(|norm| eigen_shift_bound(norm, cfg.omega0_rad_per_s, DEFAULT_THRESHOLD))
                .transpose()?;
            #[derive(Serialize)]
            struct Robustness {
                check: crate::robustness::BoundCheck,
                budget: Option<crate::robustness::PerturbationBudget>,
            }
            let result = Robustness { check, budget };
            let row = vec![check.trials.to_string(), check.violations.to_string(), num(check.worst_ratio)];
            emit(cfg, out, &result, &["trials", "violations", "worst_ratio"], vec![row], || {
                let mut rows = vec![
                    ("trials", check.trials.to_string()),
                    ("violations", check.violations.to_string()),
                    ("worst shift/norm", format!("{:.6}", check.worst_ratio)),
                ];
                if let Some(b) = budget {
                    rows.push(("admissible", b.admissible.to_string()));
                    rows.push(("shift bound [rad/s]", format!("{:.6e}", b.shift_bound)));
                }
                fmt_rows(&rows)
            })?;
            if check.violations > 0 {
                return Err(Error::CheckFailed(format!(
                    "{} of {} trials violated the shift bound",
                    check.violations, check.trials
                )));
            }
            Ok(())
        }
        Command::Bench { target, grid, reps } => {
            let params = cfg.params_for(*grid.first().ok_or_else(|| Error::InvalidArgument("empty grid".into()))?)?;
            let run = run_scaling((*target).into(), grid, &params, temp, *reps)?;
            let rows = run
                .n_grid
                .iter()
                .zip(&run.wall_times)
                .map(|(n, t)| vec![run.target_op.name().to_string(), n.to_string(), num(t)])
                .collect();
            emit(cfg, out, &run, &BENCH_HEADER, rows, || {
                let mut s = String::new();
                for (n, t) in run.n_grid.iter().zip(&run.wall_times) {
                    let _ = writeln!(s, "{} n={n:<8} {t:.4e} s", run.target_op.name());
                }
                let _ = writeln!(s, "fitted exponent: {:.3}", run.fitted_exponent);
                s
            })
        }
        Command::OracleCompare => {
            let params = cfg.params()?;
            let n = params.spins();
            if n > ORACLE_COMPARE_MAX_N {
                return Err(Error::InvalidArgument(format!(
                    "oracle-compare accepts n <= {ORACLE_COMPARE_MAX_N}, got {n}"
                )));
            }
            let exact = z_exact(&params, temp, delta)?;
            let pert = z_pert(&params, temp, delta)?;
            let difference = (exact.excess_ratio - pert.ratio).abs();
            // the exact path truncates its own k tail at the same δ
            let exact_tail = exact.tail_estimate * exact.excess_ratio.abs();
            let bound = pert.error_bound + exact_tail;
            #[derive(Serialize)]
            struct Compare {
                exact_excess_ratio: f64,
                zpert_ratio: f64,
                difference: f64,
                error_bound: f64,
                exact_truncation: f64,
                within_bound: bool,
            }
            let result = Compare {
                exact_excess_ratio: exact.excess_ratio,
                zpert_ratio: pert.ratio,
                difference,
                error_bound: pert.error_bound,
                exact_truncation: exact_tail,
                within_bound: difference <= bound,
            };
            let row = vec![
                n.to_string(),
                num(exact.excess_ratio),
                num(pert.ratio),
                num(difference),
                num(pert.error_bound),
                num(exact_tail),
            ];
            let header = ["n", "exact_excess_ratio", "zpert_ratio", "difference", "error_bound", "exact_truncation"];
            emit(cfg, out, &result, &header, vec![row], || {
                fmt_rows(&[
                    ("(Z_exact - Z0)/Z0", format!("{:.12e}", exact.excess_ratio)),
                    ("Z_pert/Z0", format!("{:.12e}", pert.ratio)),
                    ("|Z_exact - Z0 - Z_pert|/Z0", format!("{difference:.3e}")),
                    ("error bound", format!("{:.3e}", pert.error_bound)),
                    ("exact-path truncation", format!("{exact_tail:.3e}")),
                    ("within bound", result.within_bound.to_string()),
                ])
            })?;
            if !result.within_bound {
                return Err(Error::CheckFailed(format!(
                    "difference {difference:.3e} exceeds the combined bound {bound:.3e}"
                )));
            }
            Ok(())
        }
    }
}

/// shortest round-trip text, in exponent form outside [1e-4, 1e15)
fn num<X: std::borrow::Borrow<f64>>(x: X) -> String {
    let x = *x.borrow();
    if x == 0.0 || (1e-4..1e15).contains(&x.abs()) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

fn sweep_too_short() -> Result<()> {
    Err(Error::InvalidArgument("sweep needs more grid points for the fit".into()))
}

fn describe_fit(f: &crate::fit::Fit) -> String {
    let c = &f.coefficients;
    let poly = match f.kind {
        FitKind::Linear => format!("{:.4e}·n + {:.4e}", c[1], c[0]),
        FitKind::Quadratic => format!("{:.4e}·n² + {:.4e}·n + {:.4e}", c[2], c[1], c[0]),
    };
    format!("{poly}  (r² = {:.6})", f.r_squared)
}

/// Reads a config file; a thin wrapper kept for callers outside the CLI.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    RunConfig::from_json(&std::fs::read_to_string(path)?)
}
