use std::f64::consts::{LN_2, PI};

use approx::assert_abs_diff_eq;
use atomfield::amplitudes::{upper_classical_amplitudes, upper_quantized_amplitudes};
use atomfield::{
    coherent_weights, dressed_basis, entropy_trace, reduced_density, steady_state, time_grid, CoherentField, Field,
    InitialAtomState, PhysParams, Scheme,
};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn binary_entropy(p: f64) -> f64 {
    [p, 1.0 - p].iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

/// S_∞ of a classical lower scheme from the 2×2 block determinant
/// |Ω|² / (γ² + Δ′² + 4|Ω|²).
fn steady_entropy_formula(gamma: f64, detuning: f64, omega: f64) -> f64 {
    let det = omega * omega / (gamma * gamma + detuning * detuning + 4.0 * omega * omega);
    binary_entropy(0.5 + (0.25 - det).max(0.0).sqrt())
}

fn complex(max: f64) -> impl Strategy<Value = C64> {
    (0.0..max, -PI..PI).prop_map(|(r, phi)| C64::from_polar(r, phi))
}

fn upper_state() -> impl Strategy<Value = InitialAtomState> {
    (complex(1.0), complex(1.0))
        .prop_filter("non-zero", |(c, a)| c.norm() + a.norm() > 1e-3)
        .prop_map(|(c, a)| InitialAtomState::normalized(c, a).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lower_steady_entropy_matches_formula(gamma in 0.2..3.0f64, detuning in -6.0..6.0f64, omega in 0.0..6.0f64, phase in -PI..PI) {
        let p = PhysParams::new(gamma, Scheme::LowerLevel, detuning, Field::Classical { rabi: C64::from_polar(omega, phase) }).unwrap();
        let s = steady_state(&p, &InitialAtomState::excited()).unwrap().entropy;
        prop_assert!((s - steady_entropy_formula(gamma, detuning, omega)).abs() < 1e-10);
        prop_assert!(s <= LN_2 + 1e-15);
    }

    #[test]
    fn steady_entropy_symmetric_in_detuning(detuning in 0.0..6.0f64, omega in 0.0..6.0f64) {
        let s = |d: f64| steady_state(&PhysParams::lower_classical(d, omega).unwrap(), &InitialAtomState::excited()).unwrap().entropy;
        prop_assert!((s(detuning) - s(-detuning)).abs() <= 1e-12);
        prop_assert!(s(0.0) >= s(detuning) - 1e-15);
    }

    #[test]
    fn dressed_basis_is_orthonormal_eigenbasis(detuning in -6.0..6.0f64, omega in complex(6.0)) {
        let d = dressed_basis(detuning, omega);
        prop_assert!((d.epsilon * d.epsilon + d.eta.norm_sqr() - 1.0).abs() < 1e-14);
        // trace and determinant of the 2×2 coupling block
        prop_assert!((d.lambda1 + d.lambda2 - detuning).abs() < 1e-12 * (1.0 + detuning.abs()));
        prop_assert!((d.lambda1 * d.lambda2 + omega.norm_sqr()).abs() < 1e-12 * (1.0 + omega.norm_sqr() + detuning * detuning));
        prop_assert!(d.lambda1 >= d.lambda2);
    }

    #[test]
    fn reduced_state_invariants(upper in any::<bool>(), gamma in 0.3..3.0f64, detuning in -5.0..5.0f64,
                                omega in complex(5.0), init in upper_state(), t in 0.0..80.0f64) {
        let (scheme, init) = if upper { (Scheme::UpperLevel, init) } else { (Scheme::LowerLevel, InitialAtomState::excited()) };
        let p = PhysParams::new(gamma, scheme, detuning, Field::Classical { rabi: omega }).unwrap();
        let rho = reduced_density(&p, &init, t).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() < 1e-10);
        prop_assert!(rho.hermiticity_error() < 1e-12);
        prop_assert!(rho.eigenvalues()[2] > -1e-10);
        let s = rho.entropy();
        prop_assert!(s >= 0.0 && s <= 3f64.ln() + 1e-12);
    }

    #[test]
    fn coherent_weights_normalized(m in 0.0..400.0f64, theta in -PI..PI) {
        let field = CoherentField::with_auto_truncation(m, theta).unwrap();
        let total: f64 = coherent_weights(&field).iter().map(|w| w.norm_sqr()).sum();
        prop_assert!(1.0 - total < 1e-12);
        prop_assert!(total < 1.0 + 1e-12);
    }

    #[test]
    fn quantized_upper_entropy_independent_of_phase(theta in -PI..PI, t in 0.0..20.0f64) {
        let init = InitialAtomState::equal_superposition();
        let field = |theta| Field::Quantized { g: C64::new(0.2, 0.0), coherent: CoherentField::with_auto_truncation(9.0, theta).unwrap() };
        let a = PhysParams::new(1.0, Scheme::UpperLevel, 0.1, field(theta)).unwrap();
        let b = PhysParams::new(1.0, Scheme::UpperLevel, 0.1, field(0.0)).unwrap();
        let sa = reduced_density(&a, &init, t).unwrap().entropy();
        let sb = reduced_density(&b, &init, t).unwrap().entropy();
        prop_assert!((sa - sb).abs() < 1e-12);
    }
}

#[test]
fn uncoupled_quantized_sector_decays_bare() {
    let init = InitialAtomState::equal_superposition();
    let p = PhysParams::upper_quantized(0.3, 0.0, 5.0).unwrap();
    let Field::Quantized { coherent, .. } = *p.field() else { unreachable!() };
    let w = coherent.weights();
    for n in [1, 4, 9] {
        let amp = upper_quantized_amplitudes(&p, &init, n, 2.0).unwrap();
        assert_abs_diff_eq!((amp.a() - w[n] * init.a0() * (-1.0f64).exp()).norm(), 0.0, epsilon = 1e-15);
    }
}

#[test]
fn upper_classical_norm_only_leaks_to_ground() {
    // d/dt(|C|² + |A|²) = -γ|A|²: integrate with the trapezoid rule on a fine grid
    let p = PhysParams::upper_classical(0.4, C64::new(0.3, 0.2)).unwrap();
    let init = InitialAtomState::equal_superposition();
    let grid = time_grid(6.0, 6001);
    let amps: Vec<(C64, C64)> = grid
        .iter()
        .map(|&t| {
            let a = upper_classical_amplitudes(&p, &init, t).unwrap();
            (a.c().unwrap(), a.a())
        })
        .collect();
    let mut leaked = 0.0;
    for k in 1..grid.len() {
        let h = grid[k] - grid[k - 1];
        leaked += h * 0.5 * (amps[k].1.norm_sqr() + amps[k - 1].1.norm_sqr());
    }
    let last = amps.last().unwrap();
    assert_abs_diff_eq!(last.0.norm_sqr() + last.1.norm_sqr() + leaked, 1.0, epsilon = 1e-6);
}

#[test]
fn lower_trace_approaches_steady_state() {
    for omega in [0.2, 0.5, 1.0, 3.0] {
        let p = PhysParams::lower_classical(0.1, omega).unwrap();
        let init = InitialAtomState::excited();
        let trace = entropy_trace(&p, &init, &time_grid(60.0, 121)).unwrap();
        let s_inf = steady_state(&p, &init).unwrap().entropy;
        assert_abs_diff_eq!(*trace.entropy.last().unwrap(), s_inf, epsilon = 1e-12);
        assert!(trace.entropy[0] == 0.0);
    }
}

#[test]
fn quantized_lower_approaches_classical_for_large_m() {
    let init = InitialAtomState::excited();
    let classical = PhysParams::lower_classical(0.1, 1.0).unwrap();
    let mut previous = f64::INFINITY;
    for m in [4.0f64, 25.0, 100.0, 400.0] {
        let quantized = PhysParams::lower_quantized(0.1, 1.0 / m.sqrt(), m).unwrap();
        let gap = (steady_state(&quantized, &init).unwrap().entropy - steady_state(&classical, &init).unwrap().entropy).abs();
        assert!(gap < previous, "m = {m}: gap {gap} did not shrink");
        previous = gap;
    }
    assert!(previous < 1e-3);
}
