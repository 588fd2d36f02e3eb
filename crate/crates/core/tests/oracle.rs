use atomfield::oracle::{build_bath, integrate, integrate_sectors, oracle_reduced_density, StepPlan};
use atomfield::{reduced_density, Error, InitialAtomState, PhysParams};
use num_complex::Complex64 as C64;

fn max_density_error(params: &PhysParams, init: &InitialAtomState, bandwidth: f64, t_end: f64) -> f64 {
    let spacing = 0.02;
    let n_modes = (2.0 * bandwidth / spacing).round() as usize;
    let dt = (2.5e-3f64).min(0.1 / bandwidth);
    let record_every = (0.05 / dt).round() as usize;
    let bath = build_bath(1.0, bandwidth, n_modes).unwrap();
    let traj = integrate(params, init, &bath, &StepPlan { t_end, dt, record_every }).unwrap();
    assert!(traj.max_norm_drift() < 1e-8);
    traj.times
        .iter()
        .map(|&t| {
            let approx = oracle_reduced_density(&traj, t).unwrap();
            approx.max_abs_diff(&reduced_density(params, init, t).unwrap())
        })
        .fold(0.0, f64::max)
}

#[test]
fn lower_error_shrinks_with_bandwidth() {
    let p = PhysParams::lower_classical(0.1, 0.5).unwrap();
    let init = InitialAtomState::excited();
    let narrow = max_density_error(&p, &init, 40.0, 2.0);
    let wide = max_density_error(&p, &init, 80.0, 2.0);
    assert!(narrow < 2.5e-2, "W = 40: {narrow}");
    assert!(wide < 0.65 * narrow, "W = 40: {narrow}, W = 80: {wide}");
}

#[test]
fn upper_error_shrinks_with_bandwidth() {
    let p = PhysParams::upper_classical(0.1, C64::new(0.4, 0.3)).unwrap();
    let init = InitialAtomState::normalized(C64::new(0.6, 0.1), C64::new(0.2, -0.7)).unwrap();
    let narrow = max_density_error(&p, &init, 40.0, 3.0);
    let wide = max_density_error(&p, &init, 80.0, 3.0);
    assert!(narrow < 2.5e-2, "W = 40: {narrow}");
    assert!(wide < 0.65 * narrow, "W = 40: {narrow}, W = 80: {wide}");
}

#[test]
fn lower_survival_is_exponential() {
    let p = PhysParams::lower_classical(0.1, 1.0).unwrap();
    let bath = build_bath(1.0, 40.0, 4000).unwrap();
    let traj = integrate(&p, &InitialAtomState::excited(), &bath, &StepPlan { t_end: 5.0, dt: 2.5e-3, record_every: 20 }).unwrap();
    for (t, amp) in traj.times.iter().zip(&traj.sectors[0].amplitudes) {
        let exact = (-t / 2.0).exp();
        assert!((amp.a().norm() - exact).abs() / exact < 2e-2, "t = {t}");
    }
}

#[test]
fn sectors_are_independent_of_order() {
    let p = PhysParams::upper_quantized(0.1, 0.25, 4.0).unwrap();
    let init = InitialAtomState::equal_superposition();
    let bath = build_bath(1.0, 40.0, 400).unwrap();
    let plan = StepPlan { t_end: 2.0, dt: 2.5e-3, record_every: 40 };
    let forward = integrate_sectors(&p, &init, &bath, &plan, &[2, 5, 3]).unwrap();
    let backward = integrate_sectors(&p, &init, &bath, &plan, &[3, 5, 2]).unwrap();
    for run in &forward.sectors {
        let twin = backward.sectors.iter().find(|s| s.photons == run.photons).unwrap();
        assert_eq!(run, twin);
    }
}

#[test]
fn quantized_oracle_matches_closed_form() {
    let bath = build_bath(1.0, 40.0, 400).unwrap();
    let plan = StepPlan { t_end: 3.0, dt: 2.5e-3, record_every: 40 };
    let cases = [
        (PhysParams::upper_quantized(0.1, 0.25, 4.0).unwrap(), InitialAtomState::equal_superposition()),
        (PhysParams::lower_quantized(0.1, 0.25, 4.0).unwrap(), InitialAtomState::excited()),
    ];
    for (p, init) in cases {
        let traj = integrate(&p, &init, &bath, &plan).unwrap();
        for &t in &traj.times {
            let err = oracle_reduced_density(&traj, t).unwrap().max_abs_diff(&reduced_density(&p, &init, t).unwrap());
            assert!(err < 2.5e-2, "{:?} t = {t}: {err}", p.scheme());
        }
    }
}

#[test]
fn lower_scheme_needs_excited_start() {
    let p = PhysParams::lower_classical(0.1, 0.5).unwrap();
    let bath = build_bath(1.0, 40.0, 400).unwrap();
    let plan = StepPlan { t_end: 1.0, dt: 2.5e-3, record_every: 40 };
    let err = integrate(&p, &InitialAtomState::equal_superposition(), &bath, &plan).unwrap_err();
    assert!(matches!(err, Error::InvalidParameter { .. }));
}
