//! Physical parameter sets and the coherent-state photon-number distribution.
//!
//! Every frequency (detuning, Rabi frequency, per-photon coupling) is an
//! angular frequency in the same unit as the decay rate `gamma`. With the
//! default `gamma = 1` all numbers are read directly in units of γ and times
//! in units of 1/γ.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Tail mass of the coherent photon-number distribution that truncation may discard.
pub const TRUNCATION_TAIL: f64 = 1e-12;

/// Which pair of levels the coupling laser drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Laser drives |c⟩ ↔ |a⟩; |a⟩ decays to the ground state |b⟩.
    UpperLevel,
    /// Laser drives |c⟩ ↔ |b⟩; |a⟩ decays to |b⟩.
    LowerLevel,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::UpperLevel => "upper",
            Scheme::LowerLevel => "lower",
        }
    }
}

/// Coherent state of the coupling laser mode, truncated at `n_max` photons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentField {
    mean_photons: f64,
    phase: f64,
    n_max: usize,
}

impl CoherentField {
    /// Builds a field with an explicit truncation index. Rejects `n_max`
    /// whose discarded mass is not below [`TRUNCATION_TAIL`].
    pub fn new(mean_photons: f64, phase: f64, n_max: usize) -> Result<Self> {
        check_mean(mean_photons)?;
        if !phase.is_finite() {
            return Err(Error::InvalidParameter {
                key: "theta",
                reason: format!("phase must be finite, got {phase}"),
            });
        }
        let tail = discarded_mass(mean_photons, n_max);
        if tail >= TRUNCATION_TAIL {
            return Err(Error::Truncation {
                n_max,
                tail,
                minimal: auto_truncation(mean_photons),
            });
        }
        Ok(Self { mean_photons, phase, n_max })
    }

    /// Builds a field truncated at the smallest admissible index.
    pub fn with_auto_truncation(mean_photons: f64, phase: f64) -> Result<Self> {
        check_mean(mean_photons)?;
        Self::new(mean_photons, phase, auto_truncation(mean_photons))
    }

    pub fn mean_photons(&self) -> f64 {
        self.mean_photons
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Poisson weights |w_n|², n = 0..=n_max.
    pub fn probabilities(&self) -> Vec<f64> {
        poisson_log_pmf(self.mean_photons, self.n_max)
            .into_iter()
            .map(f64::exp)
            .collect()
    }

    pub fn weights(&self) -> Vec<C64> {
        coherent_weights(self)
    }
}

fn check_mean(mean_photons: f64) -> Result<()> {
    if mean_photons.is_finite() && mean_photons >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            key: "mean_photons",
            reason: format!("mean photon number must be finite and >= 0, got {mean_photons}"),
        })
    }
}

/// Number-state amplitudes w_n = e^{-m/2} m^{n/2} e^{inθ} / √(n!) for n = 0..=n_max.
///
/// Magnitudes come from the log-domain recurrence ln w_n = ln w_{n-1} + ½ ln(m/n),
/// so no factorial or large power is ever formed.
pub fn coherent_weights(field: &CoherentField) -> Vec<C64> {
    poisson_log_pmf(field.mean_photons, field.n_max)
        .into_iter()
        .enumerate()
        .map(|(n, log_p)| {
            let magnitude = (0.5 * log_p).exp();
            if field.phase == 0.0 || magnitude == 0.0 {
                C64::new(magnitude, 0.0)
            } else {
                C64::from_polar(magnitude, n as f64 * field.phase)
            }
        })
        .collect()
}

/// ln p_n of the Poisson distribution with mean `m`, n = 0..=n_max.
/// Entries are `-inf` where p_n = 0 (only for m = 0, n ≥ 1).
fn poisson_log_pmf(m: f64, n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(-m);
    if m == 0.0 {
        out.resize(n_max + 1, f64::NEG_INFINITY);
        return out;
    }
    let ln_m = m.ln();
    let mut acc = -m;
    for n in 1..=n_max {
        acc += ln_m - (n as f64).ln();
        out.push(acc);
    }
    out
}

/// Poisson mass strictly above `n_max`, summed term by term.
pub fn poisson_tail(m: f64, n_max: usize) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    let ln_m = m.ln();
    let mut log_p = -m;
    for n in 1..=n_max + 1 {
        log_p += ln_m - (n as f64).ln();
    }
    // terms beyond the mode decrease geometrically; stop once they are negligible
    let mut tail = 0.0;
    let mut n = n_max + 1;
    loop {
        let term = log_p.exp();
        tail += term;
        if (n as f64) > m && (term <= tail * 1e-18 || term == 0.0) {
            break;
        }
        n += 1;
        log_p += ln_m - (n as f64).ln();
    }
    tail
}

const TRUNC_SIGMAS: f64 = 8.0;
const TRUNC_OFFSET: f64 = 12.0;

/// Mass lost by truncating at `n_max`: the larger of the summed Poisson tail
/// and 1 - Σ|w_n|² over the retained weights as evaluated in floating point.
fn discarded_mass(m: f64, n_max: usize) -> f64 {
    let retained: f64 = poisson_log_pmf(m, n_max)
        .into_iter()
        .map(|lp| (0.5 * lp).exp().powi(2))
        .sum();
    poisson_tail(m, n_max).max(1.0 - retained)
}

/// Smallest photon-number cutoff whose discarded mass is below 1e-12.
///
/// The search starts from ⌈m + 8√m + 12⌉ and moves to the exact boundary.
/// Each candidate is checked both by direct tail summation and by the
/// rounding-affected retained sum, so 1 - Σ|w_n|² < 1e-12 holds as computed.
pub fn auto_truncation(m: f64) -> usize {
    assert!(m.is_finite() && m >= 0.0, "mean photon number must be >= 0");
    if m == 0.0 {
        return 0;
    }
    let mut n = (m + TRUNC_SIGMAS * m.sqrt() + TRUNC_OFFSET).ceil() as usize;
    while discarded_mass(m, n) >= TRUNCATION_TAIL {
        n += 1;
    }
    while n > 0 && discarded_mass(m, n - 1) < TRUNCATION_TAIL {
        n -= 1;
    }
    n
}

/// Coupling laser, either a classical field or a quantized coherent mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Field {
    Classical { rabi: C64 },
    Quantized { g: C64, coherent: CoherentField },
}

impl Field {
    pub fn is_quantized(&self) -> bool {
        matches!(self, Field::Quantized { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    gamma: f64,
    detuning: f64,
    scheme: Scheme,
    field: Field,
}

impl PhysParams {
    pub fn new(gamma: f64, scheme: Scheme, detuning: f64, field: Field) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidParameter {
                key: "gamma",
                reason: format!("decay rate must be positive and finite, got {gamma}"),
            });
        }
        if !detuning.is_finite() {
            return Err(Error::InvalidParameter {
                key: "detuning",
                reason: format!("detuning must be finite, got {detuning}"),
            });
        }
        let (key, value) = match field {
            Field::Classical { rabi } => ("omega", rabi),
            Field::Quantized { g, .. } => ("g", g),
        };
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::InvalidParameter {
                key,
                reason: format!("coupling must be finite, got {value}"),
            });
        }
        Ok(Self { gamma, detuning, scheme, field })
    }

    /// Upper-level scheme, classical laser, γ = 1.
    pub fn upper_classical(detuning: f64, rabi: impl Into<C64>) -> Result<Self> {
        Self::new(1.0, Scheme::UpperLevel, detuning, Field::Classical { rabi: rabi.into() })
    }

    /// Lower-level scheme, classical laser, γ = 1.
    pub fn lower_classical(detuning: f64, rabi: impl Into<C64>) -> Result<Self> {
        Self::new(1.0, Scheme::LowerLevel, detuning, Field::Classical { rabi: rabi.into() })
    }

    /// Upper-level scheme, coherent quantized laser with θ = 0 and automatic truncation, γ = 1.
    pub fn upper_quantized(detuning: f64, g: impl Into<C64>, mean_photons: f64) -> Result<Self> {
        let coherent = CoherentField::with_auto_truncation(mean_photons, 0.0)?;
        Self::new(1.0, Scheme::UpperLevel, detuning, Field::Quantized { g: g.into(), coherent })
    }

    /// Lower-level scheme, coherent quantized laser with θ = 0 and automatic truncation, γ = 1.
    pub fn lower_quantized(detuning: f64, g: impl Into<C64>, mean_photons: f64) -> Result<Self> {
        let coherent = CoherentField::with_auto_truncation(mean_photons, 0.0)?;
        Self::new(1.0, Scheme::LowerLevel, detuning, Field::Quantized { g: g.into(), coherent })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Δ for the upper scheme, Δ′ for the lower scheme.
    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn field(&self) -> &Field {
        &self.field
    }
}

/// Pure initial atomic state C(0)|c⟩ + A(0)|a⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialAtomState {
    c0: C64,
    a0: C64,
}

impl InitialAtomState {
    pub fn new(c0: C64, a0: C64) -> Result<Self> {
        let norm = c0.norm_sqr() + a0.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter {
                key: "c0/a0",
                reason: format!("|c0|^2 + |a0|^2 must equal 1 within 1e-12, got {norm}"),
            });
        }
        Ok(Self { c0, a0 })
    }

    /// Rescales (c0, a0) to unit norm; fails only for the zero vector.
    pub fn normalized(c0: C64, a0: C64) -> Result<Self> {
        let norm = (c0.norm_sqr() + a0.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidParameter {
                key: "c0/a0",
                reason: "initial amplitudes must not both vanish".into(),
            });
        }
        Ok(Self { c0: c0 / norm, a0: a0 / norm })
    }

    /// Atom in the excited level |a⟩.
    pub fn excited() -> Self {
        Self { c0: C64::new(0.0, 0.0), a0: C64::new(1.0, 0.0) }
    }

    /// (|c⟩ + |a⟩)/√2.
    pub fn equal_superposition() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self { c0: C64::new(h, 0.0), a0: C64::new(h, 0.0) }
    }

    pub fn c0(&self) -> C64 {
        self.c0
    }

    pub fn a0(&self) -> C64 {
        self.a0
    }

    pub fn is_excited(&self) -> bool {
        self.c0 == C64::new(0.0, 0.0) && self.a0 == C64::new(1.0, 0.0)
    }
}

impl Default for InitialAtomState {
    fn default() -> Self {
        Self::excited()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_weights() {
        let f = CoherentField::new(0.0, 0.0, 4).unwrap();
        let w = f.weights();
        assert_eq!(w.len(), 5);
        assert_eq!(w[0], C64::new(1.0, 0.0));
        assert!(w[1..].iter().all(|z| *z == C64::new(0.0, 0.0)));
        assert_eq!(auto_truncation(0.0), 0);
    }

    #[test]
    fn poisson_mass_at_four() {
        // e^-4 4^4 / 4!
        let expected = (-4.0f64).exp() * 256.0 / 24.0;
        let f = CoherentField::with_auto_truncation(4.0, 0.0).unwrap();
        let w4 = f.weights()[4].norm_sqr();
        assert!((w4 - expected).abs() < 1e-15);
        assert!((w4 - 0.19537).abs() < 1e-5);
    }

    #[test]
    fn phase_winds_with_n() {
        let f = CoherentField::with_auto_truncation(2.0, 0.3).unwrap();
        let w = f.weights();
        for (n, z) in w.iter().enumerate().take(6) {
            let expected = C64::from_polar(z.norm(), 0.3 * n as f64);
            assert!((z - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn truncation_rejected_with_minimal_bound() {
        let err = CoherentField::new(100.0, 0.0, 110).unwrap_err();
        match err {
            Error::Truncation { minimal, tail, .. } => {
                assert_eq!(minimal, auto_truncation(100.0));
                assert!(tail > 1e-12);
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(CoherentField::new(100.0, 0.0, auto_truncation(100.0)).is_ok());
        assert!(CoherentField::new(100.0, 0.0, auto_truncation(100.0) - 1).is_err());
    }

    #[test]
    fn auto_truncation_is_smallest() {
        for m in [0.5, 1.0, 4.0, 25.0, 100.0, 400.0] {
            let n = auto_truncation(m);
            assert!(discarded_mass(m, n) < TRUNCATION_TAIL, "m = {m}");
            assert!(discarded_mass(m, n - 1) >= TRUNCATION_TAIL, "m = {m}");
            let total: f64 = coherent_weights(&CoherentField::new(m, 0.3, n).unwrap()).iter().map(|w| w.norm_sqr()).sum();
            assert!(1.0 - total < TRUNCATION_TAIL, "m = {m}");
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(PhysParams::new(0.0, Scheme::UpperLevel, 0.0, Field::Classical { rabi: 1.0.into() }).is_err());
        assert!(PhysParams::new(-1.0, Scheme::UpperLevel, 0.0, Field::Classical { rabi: 1.0.into() }).is_err());
        assert!(PhysParams::upper_classical(f64::NAN, 1.0).is_err());
        assert!(CoherentField::with_auto_truncation(-1.0, 0.0).is_err());
        assert!(InitialAtomState::new(C64::new(0.7071, 0.0), C64::new(0.7071, 0.0)).is_err());
        assert!(InitialAtomState::normalized(C64::new(0.0, 0.0), C64::new(0.0, 0.0)).is_err());
    }
}
