//! Run configuration shared by the command-line front end and its config files.
//!
//! A config file is plain `key = value` lines; `#` starts a comment. Keys:
//!
//! | key | value |
//! |---|---|
//! | `gamma` | decay rate, default 1 |
//! | `scheme` | `upper` or `lower` |
//! | `field_kind` | `classical` or `quantized` |
//! | `omega_re`, `omega_im` | classical Rabi frequency |
//! | `g_re`, `g_im` | per-photon coupling |
//! | `mean_photons`, `theta`, `n_max` | coherent state of a quantized laser |
//! | `detuning` | Δ (upper) or Δ′ (lower) |
//! | `c0_re`, `c0_im`, `a0_re`, `a0_im` | initial atomic amplitudes |
//! | `t_end`, `points` | time grid |
//! | `sweep`, `sweep_min`, `sweep_max`, `sweep_steps` | steady-state sweep |
//! | `format` | `csv` or `json` |
//!
//! Unknown keys are rejected. Command-line flags override file values.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::{CoherentField, Field, InitialAtomState, PhysParams, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Trace,
    Steady,
    Validate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Classical,
    Quantized,
}

/// Parameter varied by a steady-state sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Detuning,
    Omega,
    G,
    MeanPhotons,
}

impl SweepParam {
    /// Column name in sweep output.
    pub fn column(self) -> &'static str {
        match self {
            SweepParam::Detuning => "detuning",
            SweepParam::Omega => "omega",
            SweepParam::G => "g",
            SweepParam::MeanPhotons => "mean_photons",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParam,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl SweepSpec {
    /// `steps` evenly spaced values from `min` to `max` inclusive.
    pub fn values(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.min],
            n => {
                // weighted form keeps a symmetric range exactly symmetric
                let last = (n - 1) as f64;
                (0..n)
                    .map(|i| (self.min * (last - i as f64) + self.max * i as f64) / last)
                    .collect()
            }
        }
    }
}

/// Figure parameter sets. Each expands to one or more curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig2a,
    Fig2b,
    Fig3,
    Fig4a,
    Fig4b,
    Fig5,
    Fig6,
}

fn invalid(key: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { key, reason: reason.into() }
}

macro_rules! keyword_enum {
    ($ty:ty, $key:literal, { $($text:literal => $val:expr),+ $(,)? }) => {
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($text => Ok($val),)+
                    other => Err(invalid($key, format!(
                        "unknown value `{other}`, expected one of: {}",
                        [$($text),+].join(", ")
                    ))),
                }
            }
        }
    };
}

keyword_enum!(Scheme, "scheme", { "upper" => Scheme::UpperLevel, "lower" => Scheme::LowerLevel });
keyword_enum!(FieldKind, "field_kind", { "classical" => FieldKind::Classical, "quantized" => FieldKind::Quantized });
keyword_enum!(OutputFormat, "format", { "csv" => OutputFormat::Csv, "json" => OutputFormat::Json });
keyword_enum!(SweepParam, "sweep", {
    "detuning" => SweepParam::Detuning,
    "omega" => SweepParam::Omega,
    "g" => SweepParam::G,
    "mean_photons" => SweepParam::MeanPhotons,
    "mean-photons" => SweepParam::MeanPhotons,
});
keyword_enum!(Preset, "preset", {
    "fig2a" => Preset::Fig2a,
    "fig2b" => Preset::Fig2b,
    "fig3" => Preset::Fig3,
    "fig4a" => Preset::Fig4a,
    "fig4b" => Preset::Fig4b,
    "fig5" => Preset::Fig5,
    "fig6" => Preset::Fig6,
});

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldKind::Classical => "classical",
            FieldKind::Quantized => "quantized",
        })
    }
}

/// Parses `re` or `re,im`.
pub fn parse_complex(key: &'static str, text: &str) -> Result<C64> {
    let mut parts = text.split(',');
    let re = parse_f64(key, parts.next().unwrap_or(""))?;
    let im = match parts.next() {
        Some(s) => parse_f64(key, s)?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(invalid(key, format!("expected `re` or `re,im`, got `{text}`")));
    }
    Ok(C64::new(re, im))
}

pub fn parse_f64(key: &'static str, text: &str) -> Result<f64> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| invalid(key, format!("`{}` is not a number", text.trim())))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(key, format!("`{}` is not finite", text.trim())))
    }
}

fn parse_usize(key: &'static str, text: &str) -> Result<usize> {
    text.trim()
        .parse()
        .map_err(|_| invalid(key, format!("`{}` is not a non-negative integer", text.trim())))
}

/// Oracle validation settings.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ValidateSpec {
    pub modes: Option<usize>,
    pub bandwidth: Option<f64>,
    pub dt: Option<f64>,
    pub tolerance: Option<f64>,
    pub quick: bool,
}

/// Everything one CLI invocation needs. Unset fields take per-command defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub gamma: Option<f64>,
    pub scheme: Option<Scheme>,
    pub field_kind: Option<FieldKind>,
    pub omega: Option<C64>,
    pub g: Option<C64>,
    pub mean_photons: Option<f64>,
    pub theta: Option<f64>,
    pub n_max: Option<usize>,
    pub detuning: Option<f64>,
    pub c0: Option<C64>,
    pub a0: Option<C64>,
    pub t_end: Option<f64>,
    pub points: Option<usize>,
    pub sweep: Option<SweepParam>,
    pub sweep_min: Option<f64>,
    pub sweep_max: Option<f64>,
    pub sweep_steps: Option<usize>,
    pub preset: Option<Preset>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub validate: ValidateSpec,
}

/// Tolerance for accepting rounded initial amplitudes such as 0.7071.
pub const INIT_NORM_SLACK: f64 = 1e-3;

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            gamma: None,
            scheme: None,
            field_kind: None,
            omega: None,
            g: None,
            mean_photons: None,
            theta: None,
            n_max: None,
            detuning: None,
            c0: None,
            a0: None,
            t_end: None,
            points: None,
            sweep: None,
            sweep_min: None,
            sweep_max: None,
            sweep_steps: None,
            preset: None,
            out: None,
            format: None,
            validate: ValidateSpec::default(),
        }
    }

    /// Reads `key = value` lines into this config.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                invalid("config", format!("line {}: expected `key = value`, got `{line}`", lineno + 1))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Sets one config-file key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn part(slot: &mut Option<C64>, re: Option<f64>, im: Option<f64>) {
            let mut z = slot.unwrap_or_default();
            if let Some(re) = re {
                z.re = re;
            }
            if let Some(im) = im {
                z.im = im;
            }
            *slot = Some(z);
        }
        match key {
            "gamma" => self.gamma = Some(parse_f64("gamma", value)?),
            "scheme" => self.scheme = Some(value.parse()?),
            "field_kind" => self.field_kind = Some(value.parse()?),
            "omega_re" => part(&mut self.omega, Some(parse_f64("omega_re", value)?), None),
            "omega_im" => part(&mut self.omega, None, Some(parse_f64("omega_im", value)?)),
            "g_re" => part(&mut self.g, Some(parse_f64("g_re", value)?), None),
            "g_im" => part(&mut self.g, None, Some(parse_f64("g_im", value)?)),
            "mean_photons" => self.mean_photons = Some(parse_f64("mean_photons", value)?),
            "theta" => self.theta = Some(parse_f64("theta", value)?),
            "n_max" => self.n_max = Some(parse_usize("n_max", value)?),
            "detuning" => self.detuning = Some(parse_f64("detuning", value)?),
            "c0_re" => part(&mut self.c0, Some(parse_f64("c0_re", value)?), None),
            "c0_im" => part(&mut self.c0, None, Some(parse_f64("c0_im", value)?)),
            "a0_re" => part(&mut self.a0, Some(parse_f64("a0_re", value)?), None),
            "a0_im" => part(&mut self.a0, None, Some(parse_f64("a0_im", value)?)),
            "t_end" => self.t_end = Some(parse_f64("t_end", value)?),
            "points" => self.points = Some(parse_usize("points", value)?),
            "sweep" => self.sweep = Some(value.parse()?),
            "sweep_min" => self.sweep_min = Some(parse_f64("sweep_min", value)?),
            "sweep_max" => self.sweep_max = Some(parse_f64("sweep_max", value)?),
            "sweep_steps" => self.sweep_steps = Some(parse_usize("sweep_steps", value)?),
            "format" => self.format = Some(value.parse()?),
            other => return Err(invalid("config", format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// True when any physical parameter has been set explicitly.
    pub fn has_physics(&self) -> bool {
        self.gamma.is_some()
            || self.scheme.is_some()
            || self.field_kind.is_some()
            || self.omega.is_some()
            || self.g.is_some()
            || self.mean_photons.is_some()
            || self.theta.is_some()
            || self.n_max.is_some()
            || self.detuning.is_some()
            || self.c0.is_some()
            || self.a0.is_some()
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme.unwrap_or(Scheme::UpperLevel)
    }

    pub fn field_kind(&self) -> FieldKind {
        self.field_kind.unwrap_or(FieldKind::Classical)
    }

    /// Physical parameters, with `sweep` (if given) overriding one of them.
    pub fn params_at(&self, sweep: Option<(SweepParam, f64)>) -> Result<PhysParams> {
        let mut detuning = self.detuning.unwrap_or(0.0);
        let mut omega = self.omega.unwrap_or(C64::new(1.0, 0.0));
        let mut g = self.g.unwrap_or(C64::new(0.1, 0.0));
        let mut mean = self.mean_photons.unwrap_or(100.0);
        let kind = self.field_kind();
        if let Some((param, value)) = sweep {
            match (param, kind) {
                (SweepParam::Detuning, _) => detuning = value,
                (SweepParam::Omega, FieldKind::Classical) => omega = C64::new(value, 0.0),
                (SweepParam::G, FieldKind::Quantized) => g = C64::new(value, 0.0),
                (SweepParam::MeanPhotons, FieldKind::Quantized) => mean = value,
                (p, k) => {
                    return Err(invalid("sweep", format!("`{}` cannot be swept for a {k} laser", p.column())));
                }
            }
        }
        let field = match kind {
            FieldKind::Classical => Field::Classical { rabi: omega },
            FieldKind::Quantized => {
                let theta = self.theta.unwrap_or(0.0);
                let coherent = match self.n_max {
                    Some(n) => CoherentField::new(mean, theta, n)?,
                    None => CoherentField::with_auto_truncation(mean, theta)?,
                };
                Field::Quantized { g, coherent }
            }
        };
        PhysParams::new(self.gamma.unwrap_or(1.0), self.scheme(), detuning, field)
    }

    pub fn params(&self) -> Result<PhysParams> {
        self.params_at(None)
    }

    /// Initial atomic state. Defaults: (|c⟩ + |a⟩)/√2 for the upper scheme,
    /// |a⟩ for the lower one. Amplitudes whose squared norm is within
    /// [`INIT_NORM_SLACK`] of one are rescaled, so rounded inputs are accepted.
    pub fn initial_state(&self) -> Result<InitialAtomState> {
        let (c0, a0) = match self.scheme() {
            Scheme::UpperLevel => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                (self.c0.unwrap_or(C64::new(h, 0.0)), self.a0.unwrap_or(C64::new(h, 0.0)))
            }
            Scheme::LowerLevel => (self.c0.unwrap_or_default(), self.a0.unwrap_or(C64::new(1.0, 0.0))),
        };
        let norm = c0.norm_sqr() + a0.norm_sqr();
        if !((norm - 1.0).abs() <= INIT_NORM_SLACK) {
            return Err(invalid("c0/a0", format!("|c0|^2 + |a0|^2 = {norm} is not 1")));
        }
        let init = InitialAtomState::normalized(c0, a0)?;
        if self.scheme() == Scheme::LowerLevel && !init.is_excited() {
            return Err(invalid("c0/a0", "the lower-level scheme starts with the atom in |a>: use c0 = 0, a0 = 1"));
        }
        Ok(init)
    }

    pub fn grid_spec(&self, default_t_end: f64) -> Result<(f64, usize)> {
        let t_end = self.t_end.unwrap_or(default_t_end);
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(invalid("t_end", format!("must be positive, got {t_end}")));
        }
        let points = self.points.unwrap_or(crate::entropy::DEFAULT_POINTS);
        if points < 2 {
            return Err(invalid("points", format!("need at least 2 points, got {points}")));
        }
        Ok((t_end, points))
    }

    /// Sweep for `steady`; defaults to Δ′ ∈ [-5, 5] in 101 steps.
    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let spec = SweepSpec {
            parameter: self.sweep.unwrap_or(SweepParam::Detuning),
            min: self.sweep_min.unwrap_or(-5.0),
            max: self.sweep_max.unwrap_or(5.0),
            steps: self.sweep_steps.unwrap_or(101),
        };
        if spec.steps == 0 {
            return Err(invalid("sweep_steps", "need at least one step"));
        }
        if spec.max < spec.min {
            return Err(invalid("sweep_max", format!("{} is below sweep_min {}", spec.max, spec.min)));
        }
        Ok(spec)
    }

    pub fn format(&self) -> OutputFormat {
        self.format.unwrap_or_default()
    }
}

/// A labelled run produced by a preset.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub config: RunConfig,
}

impl Preset {
    pub fn command(self) -> Command {
        match self {
            Preset::Fig6 => Command::Steady,
            _ => Command::Trace,
        }
    }

    /// Expands the preset over `base`, which must not set physical parameters.
    ///
    /// The quantized captions list (g = 0.1, m = 100) twice; it appears once here.
    pub fn curves(self, base: &RunConfig) -> Result<Vec<Curve>> {
        if base.has_physics() {
            return Err(invalid("preset", "a preset fixes the physical parameters; drop the explicit flags"));
        }
        if base.command != self.command() {
            return Err(invalid("preset", "this preset belongs to a different subcommand"));
        }
        let mut base = base.clone();
        base.detuning = Some(0.1);
        let curve = |label: String, f: &dyn Fn(&mut RunConfig)| {
            let mut config = base.clone();
            f(&mut config);
            Curve { label, config }
        };
        let classical = |scheme: Scheme, omegas: &[f64]| {
            omegas
                .iter()
                .map(|&w| {
                    curve(format!("omega={w}"), &|c| {
                        c.scheme = Some(scheme);
                        c.field_kind = Some(FieldKind::Classical);
                        c.omega = Some(C64::new(w, 0.0));
                    })
                })
                .collect::<Vec<_>>()
        };
        let quantized = |scheme: Scheme, pairs: &[(f64, f64)]| {
            pairs
                .iter()
                .map(|&(g, m)| {
                    curve(format!("g={g} m={m}"), &|c| {
                        c.scheme = Some(scheme);
                        c.field_kind = Some(FieldKind::Quantized);
                        c.g = Some(C64::new(g, 0.0));
                        c.mean_photons = Some(m);
                    })
                })
                .collect::<Vec<_>>()
        };
        let mut curves = match self {
            Preset::Fig2a | Preset::Fig3 => classical(Scheme::UpperLevel, &[0.1, 0.2, 1.0]),
            Preset::Fig2b => quantized(Scheme::UpperLevel, &[(0.1, 100.0), (0.1, 4.0)]),
            Preset::Fig4a | Preset::Fig5 => classical(Scheme::LowerLevel, &[0.1, 0.2, 1.0, 0.5]),
            Preset::Fig4b => quantized(Scheme::LowerLevel, &[(0.1, 100.0), (0.1, 4.0), (0.5, 100.0)]),
            Preset::Fig6 => {
                let mut v = classical(Scheme::LowerLevel, &[0.1, 1.0, 5.0]);
                for c in &mut v {
                    c.config.detuning = None;
                }
                v
            }
        };
        let t_end = match self {
            Preset::Fig2a | Preset::Fig2b | Preset::Fig3 => 50.0,
            _ => 60.0,
        };
        for c in &mut curves {
            c.config.t_end.get_or_insert(t_end);
        }
        Ok(curves)
    }
}
