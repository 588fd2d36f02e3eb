//! `atomfield` command line: `trace`, `steady` and `validate`.
//!
//! Exit codes: 0 success, 1 bad configuration, 2 physics or validation
//! failure, 3 I/O error. Output goes to `--out` or standard output; CSV floats
//! carry nine significant digits so identical configurations give identical
//! bytes.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::amplitudes::upper_classical_amplitudes;
use crate::config::{parse_complex, Command, Curve, OutputFormat, RunConfig, SweepSpec};
use crate::entropy::{entropy_trace, reduced_density, steady_state, time_grid, DEFAULT_T_END};
use crate::error::Error;
use crate::oracle::{build_bath, integrate, oracle_reduced_density, StepPlan};
use crate::params::{Field, InitialAtomState, PhysParams, Scheme};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "atomfield", version, about = "Atom-photon entanglement of a driven three-level atom")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Entropy and populations against γt
    Trace(TraceArgs),
    /// Steady-state entropy over a parameter sweep
    Steady(SteadyArgs),
    /// Compare closed forms with the discretized-bath integrator
    Validate(ValidateArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// key = value file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    /// upper | lower
    #[arg(long)]
    scheme: Option<String>,
    /// classical | quantized
    #[arg(long)]
    field: Option<String>,
    /// classical Rabi frequency, `re` or `re,im`
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    /// per-photon coupling, `re` or `re,im`
    #[arg(long, allow_hyphen_values = true)]
    g: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mean_photons: Option<f64>,
    /// coherent-state phase θ
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// photon-number cutoff (default: smallest with tail < 1e-12)
    #[arg(long)]
    n_max: Option<usize>,
    /// Δ (upper scheme) or Δ′ (lower scheme)
    #[arg(long, visible_alias = "delta", allow_hyphen_values = true)]
    detuning: Option<f64>,
    /// initial amplitude of |c⟩, `re` or `re,im`
    #[arg(long, allow_hyphen_values = true)]
    c0: Option<String>,
    /// initial amplitude of |a⟩, `re` or `re,im`
    #[arg(long, allow_hyphen_values = true)]
    a0: Option<String>,
    /// fig2a, fig2b, fig3, fig4a, fig4b, fig5 (trace) or fig6 (steady)
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[command(flatten)]
    common: Common,
    /// final γt
    #[arg(long, allow_hyphen_values = true)]
    t_end: Option<f64>,
    /// number of time samples, both ends included
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Args, Debug)]
struct SteadyArgs {
    #[command(flatten)]
    common: Common,
    /// detuning | omega | g | mean_photons
    #[arg(long)]
    sweep: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[command(flatten)]
    common: Common,
    /// final γt (default 10 upper, 5 lower)
    #[arg(long, allow_hyphen_values = true)]
    t_end: Option<f64>,
    /// number of bath modes N
    #[arg(long)]
    modes: Option<usize>,
    /// bath half-width W
    #[arg(long, allow_hyphen_values = true)]
    bandwidth: Option<f64>,
    /// RK4 step
    #[arg(long, allow_hyphen_values = true)]
    dt: Option<f64>,
    /// one threshold for every check, overriding the shipped ones
    #[arg(long, allow_hyphen_values = true)]
    tolerance: Option<f64>,
    /// N = 1000 and t_end = 5
    #[arg(long)]
    quick: bool,
}

#[derive(Debug)]
enum Failure {
    Config(Error),
    Physics(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Physics(_) => EXIT_FAILURE,
            Failure::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::Truncation { .. } => Failure::Config(e),
            other => Failure::Physics(other.to_string()),
        }
    }
}

/// Parses `args` (program name first) and runs the command. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = match &f {
                Failure::Config(e) => writeln!(stderr, "error: {e}"),
                Failure::Physics(msg) => writeln!(stderr, "error: {msg}"),
                Failure::Io(msg) => writeln!(stderr, "error: {msg}"),
            };
            f.code()
        }
    }
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let cfg = build_config(cli)?;
    let (text, code) = match cfg.command {
        Command::Trace => (cmd_trace(&cfg)?, EXIT_OK),
        Command::Steady => {
            if cfg.preset.is_none() && cfg.scheme() == Scheme::UpperLevel {
                let _ = writeln!(
                    stderr,
                    "note: the upper-level scheme disentangles; S_infinity is zero apart from any uncoupled |c> component"
                );
            }
            (cmd_steady(&cfg)?, EXIT_OK)
        }
        Command::Validate => {
            let report = cmd_validate(&cfg)?;
            for d in &report.diagnostics {
                let _ = writeln!(stderr, "{d}");
            }
            let code = match report.worst_failure() {
                None => EXIT_OK,
                Some(c) => {
                    let _ = writeln!(
                        stderr,
                        "validation failed; worst offender {}/{}: error {:.3e} vs threshold {:.3e}",
                        c.variant, c.check, c.max_error, c.threshold
                    );
                    EXIT_FAILURE
                }
            };
            (report.render(cfg.format()), code)
        }
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?,
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("cannot write to standard output: {e}")))?,
    }
    Ok(code)
}

fn build_config(cli: Cli) -> Result<RunConfig, Failure> {
    let (command, common) = match &cli.command {
        Cmd::Trace(a) => (Command::Trace, &a.common),
        Cmd::Steady(a) => (Command::Steady, &a.common),
        Cmd::Validate(a) => (Command::Validate, &a.common),
    };
    let mut cfg = RunConfig::new(command);
    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("cannot read config {}: {e}", path.display())))?;
        cfg.apply_file(&text)?;
    }
    macro_rules! take {
        ($slot:expr, $val:expr) => {
            if let Some(v) = $val {
                $slot = Some(v);
            }
        };
    }
    take!(cfg.gamma, common.gamma);
    take!(cfg.scheme, common.scheme.as_deref().map(str::parse).transpose()?);
    take!(cfg.field_kind, common.field.as_deref().map(str::parse).transpose()?);
    take!(cfg.omega, common.omega.as_deref().map(|s| parse_complex("omega", s)).transpose()?);
    take!(cfg.g, common.g.as_deref().map(|s| parse_complex("g", s)).transpose()?);
    take!(cfg.mean_photons, common.mean_photons);
    take!(cfg.theta, common.theta);
    take!(cfg.n_max, common.n_max);
    take!(cfg.detuning, common.detuning);
    take!(cfg.c0, common.c0.as_deref().map(|s| parse_complex("c0", s)).transpose()?);
    take!(cfg.a0, common.a0.as_deref().map(|s| parse_complex("a0", s)).transpose()?);
    take!(cfg.preset, common.preset.as_deref().map(str::parse).transpose()?);
    take!(cfg.format, common.format.as_deref().map(str::parse).transpose()?);
    take!(cfg.out, common.out.clone());
    match cli.command {
        Cmd::Trace(a) => {
            take!(cfg.t_end, a.t_end);
            take!(cfg.points, a.points);
        }
        Cmd::Steady(a) => {
            take!(cfg.sweep, a.sweep.as_deref().map(str::parse).transpose()?);
            take!(cfg.sweep_min, a.min);
            take!(cfg.sweep_max, a.max);
            take!(cfg.sweep_steps, a.steps);
        }
        Cmd::Validate(a) => {
            take!(cfg.t_end, a.t_end);
            cfg.validate.modes = a.modes;
            cfg.validate.bandwidth = a.bandwidth;
            cfg.validate.dt = a.dt;
            cfg.validate.tolerance = a.tolerance;
            cfg.validate.quick = a.quick;
        }
    }
    if cfg.preset.is_some() && command == Command::Validate {
        return Err(Failure::Config(Error::InvalidParameter {
            key: "preset",
            reason: "presets apply to trace and steady".into(),
        }));
    }
    Ok(cfg)
}

fn curves(cfg: &RunConfig) -> Result<Vec<Curve>, Error> {
    match cfg.preset {
        Some(p) => p.curves(cfg),
        None => Ok(vec![Curve { label: String::new(), config: cfg.clone() }]),
    }
}

fn num(x: f64) -> String {
    format!("{x:.8e}")
}

fn complex_text(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{},{}", z.re, z.im)
    }
}

fn describe(params: &PhysParams, init: &InitialAtomState) -> Vec<(&'static str, String)> {
    let mut out = vec![
        ("scheme", params.scheme().name().to_string()),
        ("gamma", params.gamma().to_string()),
        ("detuning", params.detuning().to_string()),
    ];
    match *params.field() {
        Field::Classical { rabi } => {
            out.push(("field", "classical".into()));
            out.push(("omega", complex_text(rabi)));
        }
        Field::Quantized { g, coherent } => {
            out.push(("field", "quantized".into()));
            out.push(("g", complex_text(g)));
            out.push(("mean_photons", coherent.mean_photons().to_string()));
            out.push(("theta", coherent.phase().to_string()));
            out.push(("n_max", coherent.n_max().to_string()));
        }
    }
    if params.scheme() == Scheme::UpperLevel {
        out.push(("c0", complex_text(init.c0())));
        out.push(("a0", complex_text(init.a0())));
    }
    out
}

fn describe_json(d: &[(&'static str, String)]) -> Value {
    Value::Object(d.iter().map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect())
}

fn describe_line(d: &[(&'static str, String)]) -> String {
    d.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

/// Entropy and populations on a uniform γt grid, one block per curve.
pub fn cmd_trace(cfg: &RunConfig) -> Result<String, Error> {
    let mut csv = String::from("# atomfield trace\n");
    let mut blocks = Vec::new();
    let list = curves(cfg)?;
    for (i, curve) in list.iter().enumerate() {
        let c = &curve.config;
        let params = c.params()?;
        let init = c.initial_state()?;
        let (t_end, points) = c.grid_spec(DEFAULT_T_END)?;
        let trace = entropy_trace(&params, &init, &time_grid(t_end, points))?;
        let desc = describe(&params, &init);
        let labels = trace.basis.labels();
        if i > 0 {
            csv.push_str("\n\n");
        }
        if !curve.label.is_empty() {
            let _ = writeln!(csv, "# curve: {}", curve.label);
        }
        let _ = writeln!(csv, "# {}", describe_line(&desc));
        let _ = writeln!(csv, "# basis: pop_1={} pop_2={} pop_3={}", labels[0], labels[1], labels[2]);
        csv.push_str("t_gamma,S,pop_1,pop_2,pop_3\n");
        for ((t, s), p) in trace.times.iter().zip(&trace.entropy).zip(&trace.populations) {
            let _ = writeln!(csv, "{},{},{},{},{}", num(*t), num(*s), num(p[0]), num(p[1]), num(p[2]));
        }
        blocks.push(json!({
            "label": curve.label,
            "parameters": describe_json(&desc),
            "basis": labels,
            "t_gamma": trace.times,
            "S": trace.entropy,
            "pop_1": trace.populations.iter().map(|p| p[0]).collect::<Vec<_>>(),
            "pop_2": trace.populations.iter().map(|p| p[1]).collect::<Vec<_>>(),
            "pop_3": trace.populations.iter().map(|p| p[2]).collect::<Vec<_>>(),
        }));
    }
    Ok(match cfg.format() {
        OutputFormat::Csv => csv,
        OutputFormat::Json => json_text(json!({ "command": "trace", "curves": blocks })),
    })
}

fn json_text(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Closed-form S_∞ over a sweep grid, one block per curve.
pub fn cmd_steady(cfg: &RunConfig) -> Result<String, Error> {
    let mut csv = String::from("# atomfield steady\n");
    let mut blocks = Vec::new();
    let list = curves(cfg)?;
    for (i, curve) in list.iter().enumerate() {
        let c = &curve.config;
        let spec: SweepSpec = c.sweep_spec()?;
        let init = c.initial_state()?;
        let values = spec.values();
        let entropy = values
            .par_iter()
            .map(|&v| {
                let params = c.params_at(Some((spec.parameter, v)))?;
                Ok(steady_state(&params, &init)?.entropy)
            })
            .collect::<Result<Vec<f64>, Error>>()?;
        let desc = describe(&c.params()?, &init);
        let column = spec.parameter.column();
        if i > 0 {
            csv.push_str("\n\n");
        }
        if !curve.label.is_empty() {
            let _ = writeln!(csv, "# curve: {}", curve.label);
        }
        let _ = writeln!(csv, "# {} swept over [{}, {}] in {} steps", describe_line(&desc), spec.min, spec.max, spec.steps);
        let _ = writeln!(csv, "{column},S_infinity");
        for (v, s) in values.iter().zip(&entropy) {
            let _ = writeln!(csv, "{},{}", num(*v), num(*s));
        }
        blocks.push(json!({
            "label": curve.label,
            "parameters": describe_json(&desc),
            "sweep": column,
            column: values,
            "S_infinity": entropy,
        }));
    }
    Ok(match cfg.format() {
        OutputFormat::Csv => csv,
        OutputFormat::Json => json_text(json!({ "command": "steady", "curves": blocks })),
    })
}

/// Bath half-width the shipped thresholds were calibrated at, in units of γ.
pub const REFERENCE_BANDWIDTH: f64 = 40.0;
pub const REFERENCE_MODES: usize = 4000;
pub const QUICK_MODES: usize = 1000;
pub const QUICK_T_END: f64 = 5.0;

/// Calibrated worst-case errors at W = 40γ; they scale like γ/W.
const AMPLITUDE_THRESHOLD: f64 = 1e-2;
const DENSITY_THRESHOLD: f64 = 2.5e-2;
const ENTROPY_THRESHOLD: f64 = 5e-2;
const SURVIVAL_THRESHOLD: f64 = 2e-2;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub variant: String,
    pub check: &'static str,
    pub max_error: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub bandwidth: f64,
    pub modes: usize,
    pub dt: f64,
    pub checks: Vec<Check>,
    pub diagnostics: Vec<String>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Failed check with the largest error-to-threshold ratio.
    pub fn worst_failure(&self) -> Option<&Check> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .max_by(|a, b| {
                let ra = if a.max_error.is_nan() { f64::INFINITY } else { a.max_error / a.threshold };
                let rb = if b.max_error.is_nan() { f64::INFINITY } else { b.max_error / b.threshold };
                ra.total_cmp(&rb)
            })
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => {
                let mut s = format!(
                    "# atomfield validate: bandwidth={} modes={} dt={}\nvariant,check,max_error,threshold,status\n",
                    self.bandwidth, self.modes, self.dt
                );
                for c in &self.checks {
                    let status = if c.passed { "pass" } else { "fail" };
                    let _ = writeln!(s, "{},{},{},{},{status}", c.variant, c.check, num(c.max_error), num(c.threshold));
                }
                for d in &self.diagnostics {
                    let _ = writeln!(s, "# {d}");
                }
                s
            }
            OutputFormat::Json => json_text(json!({
                "command": "validate",
                "bandwidth": self.bandwidth,
                "modes": self.modes,
                "dt": self.dt,
                "passed": self.all_passed(),
                "checks": self.checks.iter().map(|c| json!({
                    "variant": c.variant,
                    "check": c.check,
                    "max_error": if c.max_error.is_nan() { Value::Null } else { json!(c.max_error) },
                    "threshold": c.threshold,
                    "passed": c.passed,
                })).collect::<Vec<_>>(),
                "diagnostics": self.diagnostics,
            })),
        }
    }
}

/// Reference cases: Δ = 0.1γ, Ω = 0.5γ classical or g = 0.25γ, m = 4 quantized.
pub fn reference_cases() -> Vec<(String, PhysParams, InitialAtomState)> {
    let upper = InitialAtomState::equal_superposition();
    let lower = InitialAtomState::excited();
    vec![
        ("upper-classical".into(), PhysParams::upper_classical(0.1, 0.5).expect("valid"), upper),
        ("upper-quantized".into(), PhysParams::upper_quantized(0.1, 0.25, 4.0).expect("valid"), upper),
        ("lower-classical".into(), PhysParams::lower_classical(0.1, 0.5).expect("valid"), lower),
        ("lower-quantized".into(), PhysParams::lower_quantized(0.1, 0.25, 4.0).expect("valid"), lower),
    ]
}

fn variant_name(params: &PhysParams) -> String {
    let field = if params.field().is_quantized() { "quantized" } else { "classical" };
    format!("{}-{field}", params.scheme().name())
}

/// Runs the oracle against the closed forms. Integration errors become failed
/// checks with a diagnostic; only configuration errors abort.
pub fn cmd_validate(cfg: &RunConfig) -> Result<ValidationReport, Error> {
    let cases = if cfg.has_physics() {
        let params = cfg.params()?;
        vec![(variant_name(&params), params, cfg.initial_state()?)]
    } else {
        reference_cases()
    };
    let v = cfg.validate;
    let bandwidth = v.bandwidth.unwrap_or(REFERENCE_BANDWIDTH);
    let modes = v.modes.unwrap_or(if v.quick { QUICK_MODES } else { REFERENCE_MODES });
    let gamma = cases[0].1.gamma();
    let dt = v.dt.unwrap_or((2.5e-3 / gamma).min(0.1 / bandwidth));
    if let Some(tol) = v.tolerance {
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter { key: "tolerance", reason: format!("must be positive, got {tol}") });
        }
    }
    let scale = REFERENCE_BANDWIDTH * gamma / bandwidth;
    let threshold = |base: f64| v.tolerance.unwrap_or(base * scale);
    let record_every = ((0.1 / gamma / dt).round() as usize).max(1);

    let mut report = ValidationReport { bandwidth, modes, dt, checks: Vec::new(), diagnostics: Vec::new() };
    for (name, params, init) in cases {
        let t_end = cfg.t_end.unwrap_or(if v.quick {
            QUICK_T_END / gamma
        } else {
            match params.scheme() {
                Scheme::UpperLevel => 10.0 / gamma,
                Scheme::LowerLevel => 5.0 / gamma,
            }
        });
        let plan = StepPlan { t_end, dt, record_every };
        let outcome = build_bath(params.gamma(), bandwidth, modes).and_then(|bath| integrate(&params, &init, &bath, &plan));
        let trajectory = match outcome {
            Ok(t) => t,
            Err(e @ Error::InvalidParameter { .. }) => return Err(e),
            Err(e) => {
                report.diagnostics.push(format!("{name}: {e}"));
                report.checks.push(Check {
                    variant: name,
                    check: "integration",
                    max_error: f64::NAN,
                    threshold: 0.0,
                    passed: false,
                });
                continue;
            }
        };
        let mut density: f64 = 0.0;
        let mut entropy: f64 = 0.0;
        let mut amplitude: f64 = 0.0;
        let mut survival: f64 = 0.0;
        for (idx, &t) in trajectory.times.iter().enumerate() {
            let exact = reduced_density(&params, &init, t)?;
            let approx = match oracle_reduced_density(&trajectory, t) {
                Ok(r) => r,
                Err(e) => {
                    report.diagnostics.push(format!("{name}: {e} at t = {t}"));
                    density = f64::NAN;
                    break;
                }
            };
            density = density.max(approx.max_abs_diff(&exact));
            entropy = entropy.max((approx.entropy() - exact.entropy()).abs());
            let sector = &trajectory.sectors[0].amplitudes[idx];
            match (params.scheme(), params.field()) {
                (Scheme::UpperLevel, Field::Classical { .. }) => {
                    let ex = upper_classical_amplitudes(&params, &init, t)?;
                    let dc = (sector.c().unwrap_or_default() - ex.c().unwrap_or_default()).norm();
                    amplitude = amplitude.max(dc.max((sector.a() - ex.a()).norm()));
                }
                (Scheme::LowerLevel, Field::Classical { .. }) => {
                    let decay = (-params.gamma() * t / 2.0).exp();
                    survival = survival.max((sector.a().norm() - decay).abs() / decay);
                }
                _ => {}
            }
        }
        let mut push = |check: &'static str, err: f64, base: f64| {
            let th = threshold(base);
            report.checks.push(Check { variant: name.clone(), check, max_error: err, threshold: th, passed: err <= th });
        };
        match (params.scheme(), params.field().is_quantized()) {
            (Scheme::UpperLevel, false) => push("amplitudes", amplitude, AMPLITUDE_THRESHOLD),
            (Scheme::LowerLevel, false) => push("survival", survival, SURVIVAL_THRESHOLD),
            _ => {}
        }
        push("density", density, DENSITY_THRESHOLD);
        push("entropy", entropy, ENTROPY_THRESHOLD);
    }
    Ok(report)
}
