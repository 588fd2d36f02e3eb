//! Closed-form Weisskopf–Wigner probability amplitudes.
//!
//! Upper-level scheme: the laser-coupled pair (|c⟩, |a⟩) obeys
//!
//! ```text
//!   dC/dt = -i Ω A e^{iΔt}
//!   dA/dt = -i Ω* C e^{-iΔt} - (γ/2) A
//! ```
//!
//! once the vacuum modes are eliminated. Its solution is a pair of damped
//! exponentials with exponents [`UpperRoots`]. A quantized laser splits the
//! problem into photon sectors with Ω replaced by g√n.
//!
//! Lower-level scheme: the excited level decays untouched by the laser, and
//! the laser only dresses the two lower levels ([`DressedBasis`]).

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::{Field, InitialAtomState, PhysParams, Scheme};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Relative size of β below which the two exponents are treated as one repeated root.
pub const CONFLUENT_THRESHOLD: f64 = 1e-9;

/// Exponents of the upper-scheme solution for one effective coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperRoots {
    /// γ/2 + iΔ
    pub alpha: C64,
    /// principal root of α*² - 4|Ω|²
    pub beta: C64,
    pub x1: C64,
    pub x2: C64,
    pub y1: C64,
    pub y2: C64,
    /// |β| < 1e-9 γ: the two roots coincide and the repeated-root form is used.
    pub confluent: bool,
}

pub fn upper_roots(params: &PhysParams, omega_eff: C64) -> UpperRoots {
    roots(params.gamma(), params.detuning(), omega_eff)
}

fn roots(gamma: f64, detuning: f64, omega: C64) -> UpperRoots {
    let alpha = C64::new(gamma / 2.0, detuning);
    let ac = alpha.conj();
    let disc = ac * ac - 4.0 * omega.norm_sqr();
    // + 0.0 turns a signed -0.0 imaginary part into +0.0 so the principal branch is taken
    let beta = C64::new(disc.re, disc.im + 0.0).sqrt();
    UpperRoots {
        alpha,
        beta,
        x1: -(ac + beta) / 2.0,
        x2: -(ac - beta) / 2.0,
        y1: -(alpha + beta) / 2.0,
        y2: -(alpha - beta) / 2.0,
        confluent: beta.norm() < CONFLUENT_THRESHOLD * gamma,
    }
}

/// Amplitudes of the atomic levels that are not yet emptied into the vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AmplitudeSet {
    /// `c` is `None` for photon index 0 of a quantized laser, where |c, n-1⟩ does not exist.
    Upper { c: Option<C64>, a: C64 },
    Lower { a: C64 },
}

impl AmplitudeSet {
    pub fn c(&self) -> Option<C64> {
        match self {
            AmplitudeSet::Upper { c, .. } => *c,
            AmplitudeSet::Lower { .. } => None,
        }
    }

    pub fn a(&self) -> C64 {
        match self {
            AmplitudeSet::Upper { a, .. } | AmplitudeSet::Lower { a } => *a,
        }
    }
}

/// Two-level (C, A) solution with coupling `omega` from atomic amplitudes (c0, a0).
pub(crate) fn upper_pair(gamma: f64, detuning: f64, omega: C64, c0: C64, a0: C64, t: f64) -> (C64, C64) {
    let r = roots(gamma, detuning, omega);
    if r.confluent {
        let y = -r.alpha / 2.0;
        let x = -r.alpha.conj() / 2.0;
        let a_dot0 = -I * omega.conj() * c0 - gamma / 2.0 * a0;
        let c_dot0 = -I * omega * a0;
        let a = (a0 + (a_dot0 - y * a0) * t) * (y * t).exp();
        let c = (c0 + (c_dot0 - x * c0) * t) * (x * t).exp();
        return (c, a);
    }
    let (c1, c2, a1, a2) = upper_coefficients(&r, omega, c0, a0);
    let c = c1 * (r.x1 * t).exp() + c2 * (r.x2 * t).exp();
    let a = a1 * (r.y1 * t).exp() + a2 * (r.y2 * t).exp();
    (c, a)
}

/// (C⁽¹⁾, C⁽²⁾, A⁽¹⁾, A⁽²⁾). The coupling enters A⁽¹⁾ conjugated and C⁽¹⁾ plain,
/// as follows from the equations of motion for complex Ω.
fn upper_coefficients(r: &UpperRoots, omega: C64, c0: C64, a0: C64) -> (C64, C64, C64, C64) {
    let delta_i = C64::new(0.0, r.alpha.im);
    let a1 = -(a0 * (r.y1 + delta_i) - I * c0 * omega.conj()) / r.beta;
    let c1 = -(c0 * (r.x1 + r.alpha.conj()) - I * a0 * omega) / r.beta;
    (c1, c0 - c1, a1, a0 - a1)
}

fn require(params: &PhysParams, scheme: Scheme, quantized: bool) -> Result<()> {
    if params.scheme() != scheme || params.field().is_quantized() != quantized {
        return Err(Error::InvalidParameter {
            key: "scheme",
            reason: format!(
                "expected {} scheme with {} field",
                scheme.name(),
                if quantized { "quantized" } else { "classical" }
            ),
        });
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { key: "t", reason: format!("time must be finite and >= 0, got {t}") })
    }
}

/// C(t) and A(t) for the upper scheme driven by a classical laser.
pub fn upper_classical_amplitudes(params: &PhysParams, init: &InitialAtomState, t: f64) -> Result<AmplitudeSet> {
    require(params, Scheme::UpperLevel, false)?;
    check_time(t)?;
    let Field::Classical { rabi } = *params.field() else { unreachable!() };
    let (c, a) = upper_pair(params.gamma(), params.detuning(), rabi, init.c0(), init.a0(), t);
    Ok(AmplitudeSet::Upper { c: Some(c), a })
}

/// C_n(t) and A_n(t) for the upper scheme driven by a coherent quantized laser.
///
/// A_n carries the weight w_n and evolves with coupling g√n; C_n carries
/// w_{n-1} and evolves with coupling g√(n-1). Both brackets start from the
/// atomic amplitudes, so at t = 0 the atom and the laser mode are in a
/// product state.
pub fn upper_quantized_amplitudes(
    params: &PhysParams,
    init: &InitialAtomState,
    n: usize,
    t: f64,
) -> Result<AmplitudeSet> {
    require(params, Scheme::UpperLevel, true)?;
    check_time(t)?;
    let Field::Quantized { g, coherent } = *params.field() else { unreachable!() };
    let weights = coherent.weights();
    let weight = |k: usize| weights.get(k).copied().unwrap_or_default();
    let sector = |k: usize| {
        upper_pair(params.gamma(), params.detuning(), g * (k as f64).sqrt(), init.c0(), init.a0(), t)
    };
    let a = weight(n) * sector(n).1;
    let c = (n >= 1).then(|| weight(n - 1) * sector(n - 1).0);
    Ok(AmplitudeSet::Upper { c, a })
}

/// Eigenbasis of the laser-coupled lower pair:
/// |χ₊⟩ = ε|c⟩ + η|b⟩ and |χ₋⟩ = -η*|c⟩ + ε|b⟩ with eigenvalues λ₁ ≥ λ₂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedBasis {
    pub epsilon: f64,
    pub eta: C64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl DressedBasis {
    /// λ₁ - λ₂ = √(Δ′² + 4|Ω|²)
    pub fn splitting(&self) -> f64 {
        self.lambda1 - self.lambda2
    }
}

/// λ₁,₂ = (Δ′ ± √(Δ′² + 4|Ω|²))/2, ε = λ₁/√(λ₁² + |Ω|²), η = Ω/√(λ₁² + |Ω|²).
///
/// Ω = 0 is taken as the limit Ω → 0⁺ at fixed Δ′, which keeps the basis
/// continuous in the coupling: (ε, η) = (1, 0) for Δ′ > 0, (0, 1) for Δ′ < 0
/// and (1/√2, 1/√2) at Δ′ = 0.
pub fn dressed_basis(detuning: f64, omega_eff: C64) -> DressedBasis {
    let r = omega_eff.norm_sqr();
    if r == 0.0 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (epsilon, eta) = if detuning > 0.0 {
            (1.0, 0.0)
        } else if detuning < 0.0 {
            (0.0, 1.0)
        } else {
            (h, h)
        };
        return DressedBasis {
            epsilon,
            eta: C64::new(eta, 0.0),
            lambda1: detuning.max(0.0),
            lambda2: detuning.min(0.0),
        };
    }
    let s = (detuning * detuning + 4.0 * r).sqrt();
    // the smaller-magnitude root comes from λ₁λ₂ = -|Ω|² to avoid cancellation
    let (lambda1, lambda2) = if detuning >= 0.0 {
        let l1 = (detuning + s) / 2.0;
        (l1, -r / l1)
    } else {
        let l2 = (detuning - s) / 2.0;
        (-r / l2, l2)
    };
    let norm = (lambda1 * lambda1 + r).sqrt();
    DressedBasis { epsilon: lambda1 / norm, eta: omega_eff / norm, lambda1, lambda2 }
}

/// Survival amplitude A(t) = e^{-γt/2} of the excited level in the lower scheme.
///
/// The laser acts only after the photon is emitted, so neither Ω nor Δ′ enter.
/// For a quantized laser this is the atomic factor of every sector amplitude;
/// see [`lower_quantized_amplitude`].
pub fn lower_survival_amplitude(params: &PhysParams, t: f64) -> Result<C64> {
    if params.scheme() != Scheme::LowerLevel {
        return Err(Error::InvalidParameter { key: "scheme", reason: "expected lower scheme".into() });
    }
    check_time(t)?;
    Ok(C64::new((-params.gamma() * t / 2.0).exp(), 0.0))
}

/// A_n(t) = w_n e^{-γt/2}.
pub fn lower_quantized_amplitude(params: &PhysParams, n: usize, t: f64) -> Result<AmplitudeSet> {
    require(params, Scheme::LowerLevel, true)?;
    let Field::Quantized { coherent, .. } = *params.field() else { unreachable!() };
    let w = coherent.weights().get(n).copied().unwrap_or_default();
    Ok(AmplitudeSet::Lower { a: w * lower_survival_amplitude(params, t)? })
}
