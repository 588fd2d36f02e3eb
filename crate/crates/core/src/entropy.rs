//! Reduced atomic state, atom–photon entanglement entropy and populations.
//!
//! The atom and the emitted field start in a pure product state and the
//! joint evolution is unitary, so the entropy of the atomic reduced state
//! equals that of the field and measures their entanglement.
//!
//! Photon-number sums always run in ascending n, so results are bit-identical
//! however the time points are scheduled.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::amplitudes::{dressed_basis, upper_pair, DressedBasis};
use crate::density::{Basis, DensityMatrix3, Matrix3};
use crate::error::{Error, Result};
use crate::params::{Field, InitialAtomState, PhysParams, Scheme};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Default time grid: 600 uniform points over γt ∈ [0, 50].
pub const DEFAULT_T_END: f64 = 50.0;
pub const DEFAULT_POINTS: usize = 600;

/// `n_points` uniform samples of [0, t_end], both ends included.
pub fn time_grid(t_end: f64, n_points: usize) -> Vec<f64> {
    match n_points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n_points).map(|i| t_end * i as f64 / (n_points - 1) as f64).collect(),
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Gram matrix for the upper scheme from the partial sums
/// P = ⟨P|P⟩, Q = ⟨Q|Q⟩ and X = ⟨P|Q⟩. ⟨R|R⟩ closes the trace.
fn upper_matrix(p: f64, q: f64, x: C64) -> Matrix3 {
    [
        [real(p), x, ZERO],
        [x.conj(), real(q), ZERO],
        [ZERO, ZERO, real(1.0 - p - q)],
    ]
}

/// γ ε η* [1 - e^{i(λ₁-λ₂)t - γt}] / (γ - i(λ₁-λ₂)), the ⟨R|Q⟩ overlap of one dressed manifold.
/// `decay` is e^{-γt}; pass 0 for the t → ∞ limit.
fn dressed_coherence(gamma: f64, d: &DressedBasis, t: f64, decay: f64) -> C64 {
    let split = d.splitting();
    let transient = if decay == 0.0 { ZERO } else { C64::from_polar(decay, split * t) };
    gamma * d.epsilon * d.eta.conj() * (1.0 - transient) / C64::new(gamma, -split)
}

/// Lower-scheme partial sums accumulated over dressed manifolds with weights `p`.
#[derive(Default)]
struct LowerSums {
    excited: f64,
    plus: f64,
    minus: f64,
    coherence: C64,
}

impl LowerSums {
    fn add(&mut self, weight: f64, gamma: f64, d: &DressedBasis, t: f64, decay: f64) {
        let emitted = 1.0 - decay;
        self.excited += weight * decay;
        self.plus += weight * d.eta.norm_sqr() * emitted;
        self.minus += weight * d.epsilon * d.epsilon * emitted;
        self.coherence += weight * dressed_coherence(gamma, d, t, decay);
    }

    fn matrix(&self) -> Matrix3 {
        [
            [real(self.excited), ZERO, ZERO],
            [ZERO, real(self.plus), self.coherence.conj()],
            [ZERO, self.coherence, real(self.minus)],
        ]
    }
}

fn check_inputs(params: &PhysParams, init: &InitialAtomState, t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter { key: "t", reason: format!("time must be finite and >= 0, got {t}") });
    }
    if params.scheme() == Scheme::LowerLevel && !init.is_excited() {
        return Err(Error::InvalidParameter {
            key: "c0/a0",
            reason: "the lower-level scheme always starts with the atom in |a>".into(),
        });
    }
    Ok(())
}

/// Atomic reduced density matrix at time `t`.
///
/// Upper scheme, basis (|c⟩, |a⟩, |b⟩); lower scheme, basis (|a⟩, |χ₊⟩, |χ₋⟩).
/// A quantized laser contributes one term per photon number n with weight |w_n|²
/// and coupling g√n. Fails if the assembled matrix breaks Hermiticity, unit
/// trace or positivity beyond the documented tolerances.
pub fn reduced_density(params: &PhysParams, init: &InitialAtomState, t: f64) -> Result<DensityMatrix3> {
    check_inputs(params, init, t)?;
    let gamma = params.gamma();
    let detuning = params.detuning();
    let (matrix, basis) = match (params.scheme(), *params.field()) {
        (Scheme::UpperLevel, Field::Classical { rabi }) => {
            let (c, a) = upper_pair(gamma, detuning, rabi, init.c0(), init.a0(), t);
            (upper_matrix(c.norm_sqr(), a.norm_sqr(), c.conj() * a), Basis::Bare)
        }
        (Scheme::UpperLevel, Field::Quantized { g, coherent }) => {
            // Σ|C_n|², Σ|A_n|² and Σ C*_{n+1} A_n: C_{n+1} and A_n both carry w_n and coupling g√n
            let (mut p, mut q, mut x) = (0.0, 0.0, ZERO);
            for (n, weight) in coherent.probabilities().into_iter().enumerate() {
                let omega = g * (n as f64).sqrt();
                let (c, a) = upper_pair(gamma, detuning, omega, init.c0(), init.a0(), t);
                p += weight * c.norm_sqr();
                q += weight * a.norm_sqr();
                x += weight * c.conj() * a;
            }
            (upper_matrix(p, q, x), Basis::Bare)
        }
        (Scheme::LowerLevel, Field::Classical { rabi }) => {
            let mut sums = LowerSums::default();
            sums.add(1.0, gamma, &dressed_basis(detuning, rabi), t, (-gamma * t).exp());
            (sums.matrix(), Basis::Dressed)
        }
        (Scheme::LowerLevel, Field::Quantized { g, coherent }) => {
            let decay = (-gamma * t).exp();
            let mut sums = LowerSums::default();
            for (n, weight) in coherent.probabilities().into_iter().enumerate() {
                let d = dressed_basis(detuning, g * (n as f64).sqrt());
                sums.add(weight, gamma, &d, t, decay);
            }
            (sums.matrix(), Basis::Dressed)
        }
    };
    DensityMatrix3::new(matrix, basis)
}

/// Entropy and level populations sampled on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyTrace {
    pub basis: Basis,
    /// γt
    pub times: Vec<f64>,
    /// nats
    pub entropy: Vec<f64>,
    pub populations: Vec<[f64; 3]>,
}

impl EntropyTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Entropy at the grid point closest to `t`.
    pub fn entropy_at(&self, t: f64) -> Option<f64> {
        let idx = self
            .times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))?
            .0;
        Some(self.entropy[idx])
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    let ascending = grid.windows(2).all(|w| w[0] < w[1]);
    let valid = grid.iter().all(|t| t.is_finite() && *t >= 0.0);
    if ascending && valid {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            key: "time_grid",
            reason: "time grid must be strictly ascending, finite and non-negative".into(),
        })
    }
}

fn densities(params: &PhysParams, init: &InitialAtomState, grid: &[f64]) -> Result<Vec<DensityMatrix3>> {
    check_grid(grid)?;
    grid.par_iter().map(|&t| reduced_density(params, init, t)).collect()
}

pub fn entropy_trace(params: &PhysParams, init: &InitialAtomState, grid: &[f64]) -> Result<EntropyTrace> {
    let rhos = densities(params, init, grid)?;
    let basis = match params.scheme() {
        Scheme::UpperLevel => Basis::Bare,
        Scheme::LowerLevel => Basis::Dressed,
    };
    Ok(EntropyTrace {
        basis,
        times: grid.to_vec(),
        entropy: rhos.iter().map(DensityMatrix3::entropy).collect(),
        populations: rhos.iter().map(DensityMatrix3::populations).collect(),
    })
}

/// Diagonal of the reduced density matrix at every grid point.
pub fn populations(params: &PhysParams, init: &InitialAtomState, grid: &[f64]) -> Result<Vec<[f64; 3]>> {
    Ok(densities(params, init, grid)?.iter().map(DensityMatrix3::populations).collect())
}

/// t → ∞ limit of the reduced state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub rho: DensityMatrix3,
    pub entropy: f64,
}

/// Closed-form t → ∞ limit, evaluated by dropping every decaying term.
///
/// Lower scheme: ⟨Q|Q⟩ = |η|², ⟨R|R⟩ = |ε|², ⟨R|Q⟩ = γεη*/(γ - i(λ₁-λ₂)),
/// averaged over photon number for a quantized laser. `init` is ignored.
///
/// Upper scheme: every coupled amplitude decays, leaving the atom in |b⟩.
/// A component with zero effective coupling (Ω = 0, or the n = 0 term of a
/// quantized laser) keeps its |c⟩ population.
pub fn steady_state(params: &PhysParams, init: &InitialAtomState) -> Result<SteadyState> {
    let gamma = params.gamma();
    let detuning = params.detuning();
    let (matrix, basis) = match (params.scheme(), *params.field()) {
        (Scheme::LowerLevel, field) => {
            let mut sums = LowerSums::default();
            match field {
                Field::Classical { rabi } => sums.add(1.0, gamma, &dressed_basis(detuning, rabi), 0.0, 0.0),
                Field::Quantized { g, coherent } => {
                    for (n, weight) in coherent.probabilities().into_iter().enumerate() {
                        sums.add(weight, gamma, &dressed_basis(detuning, g * (n as f64).sqrt()), 0.0, 0.0);
                    }
                }
            }
            (sums.matrix(), Basis::Dressed)
        }
        (Scheme::UpperLevel, field) => {
            let dark_weight = match field {
                Field::Classical { rabi } => {
                    if rabi.norm_sqr() == 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                }
                Field::Quantized { g, coherent } => {
                    let probs = coherent.probabilities();
                    if g.norm_sqr() == 0.0 {
                        probs.iter().sum()
                    } else {
                        probs[0]
                    }
                }
            };
            (upper_matrix(dark_weight * init.c0().norm_sqr(), 0.0, ZERO), Basis::Bare)
        }
    };
    let rho = DensityMatrix3::new(matrix, basis)?;
    Ok(SteadyState { rho, entropy: rho.entropy() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

    #[test]
    fn lower_starts_in_excited_state() {
        for p in [
            PhysParams::lower_classical(0.1, 0.5).unwrap(),
            PhysParams::lower_quantized(0.1, 0.1, 4.0).unwrap(),
        ] {
            let rho = reduced_density(&p, &InitialAtomState::excited(), 0.0).unwrap();
            let pops = rho.populations();
            assert!((pops[0] - 1.0).abs() < 1e-12 && pops[1] == 0.0 && pops[2] == 0.0);
            assert!(rho.max_abs_diff(&DensityMatrix3::new(
                [[real(1.0), ZERO, ZERO], [ZERO; 3], [ZERO; 3]],
                Basis::Dressed
            ).unwrap()) < 1e-12);
            assert!(rho.entropy() < 1e-10);
        }
    }

    #[test]
    fn lower_without_laser_decays_to_ground() {
        let p = PhysParams::lower_classical(0.3, 0.0).unwrap();
        let rho = reduced_density(&p, &InitialAtomState::excited(), 80.0).unwrap();
        let pops = rho.populations();
        assert!(pops[0] < 1e-30 && pops[1] == 0.0 && (pops[2] - 1.0).abs() < 1e-15);
        assert!(rho.entropy() < 1e-12);
        let ss = steady_state(&p, &InitialAtomState::excited()).unwrap();
        assert_eq!(ss.entropy, 0.0);
    }

    #[test]
    fn lower_rejects_other_initial_states() {
        let p = PhysParams::lower_classical(0.3, 1.0).unwrap();
        assert!(reduced_density(&p, &InitialAtomState::equal_superposition(), 1.0).is_err());
    }

    #[test]
    fn upper_quantized_initial_state_is_pure() {
        let p = PhysParams::upper_quantized(0.1, 0.1, 4.0).unwrap();
        let rho = reduced_density(&p, &InitialAtomState::equal_superposition(), 0.0).unwrap();
        let ev = rho.eigenvalues();
        assert!((ev[0] - 1.0).abs() < 1e-12 && ev[1].abs() < 1e-12);
        assert!(rho.entropy() < 1e-10);
    }

    #[test]
    fn upper_initial_populations() {
        let p = PhysParams::upper_classical(0.1, 0.1).unwrap();
        let pops = populations(&p, &InitialAtomState::equal_superposition(), &[0.0]).unwrap();
        assert!((pops[0][0] - 0.5).abs() < 1e-15 && (pops[0][1] - 0.5).abs() < 1e-15);
        assert!(pops[0][2].abs() < 1e-15);
    }

    #[test]
    fn resonant_steady_state_pair() {
        // Δ′ = 0: ρ_∞ block [[1/2, q*], [q, 1/2]], q = γ/(2(γ - 2iΩ))
        let omega = 5.0;
        let p = PhysParams::lower_classical(0.0, omega).unwrap();
        let ss = steady_state(&p, &InitialAtomState::excited()).unwrap();
        let q = 1.0 / (2.0 * C64::new(1.0, -2.0 * omega));
        assert!((ss.rho.get(2, 1) - q).norm() < 1e-15);
        let (l1, l2) = (0.5 + q.norm(), 0.5 - q.norm());
        let expected = -l1 * l1.ln() - l2 * l2.ln();
        assert!((ss.entropy - expected).abs() < 1e-14);
        assert!(ss.entropy <= LN_2 && LN_2 - ss.entropy < 0.01);
    }

    #[test]
    fn upper_steady_state() {
        let init = InitialAtomState::equal_superposition();
        let p = PhysParams::upper_classical(0.1, 0.2).unwrap();
        assert_eq!(steady_state(&p, &init).unwrap().entropy, 0.0);
        let dark = PhysParams::upper_classical(0.1, 0.0).unwrap();
        let ss = steady_state(&dark, &init).unwrap();
        assert!((ss.entropy - LN_2).abs() < 1e-15);
        let late = reduced_density(&dark, &init, 200.0).unwrap();
        assert!(late.max_abs_diff(&ss.rho) < 1e-15);
    }

    #[test]
    fn trace_rejects_bad_grid() {
        let p = PhysParams::upper_classical(0.1, 0.2).unwrap();
        let init = InitialAtomState::new(FRAC_1_SQRT_2.into(), FRAC_1_SQRT_2.into()).unwrap();
        assert!(entropy_trace(&p, &init, &[0.0, 2.0, 1.0]).is_err());
        assert!(entropy_trace(&p, &init, &[-1.0, 2.0]).is_err());
        let tr = entropy_trace(&p, &init, &time_grid(10.0, 11)).unwrap();
        assert_eq!(tr.len(), 11);
        assert_eq!(tr.entropy[0], 0.0);
        assert_eq!(tr.entropy_at(5.1), Some(tr.entropy[5]));
    }

    #[test]
    fn grid_shape() {
        let g = time_grid(50.0, 600);
        assert_eq!(g.len(), 600);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[599], 50.0);
    }
}
