//! Brute-force check of the Weisskopf–Wigner closed forms.
//!
//! The vacuum continuum is replaced by N modes with detunings δ_k spread
//! uniformly over [-W, W] and a flat coupling g_k with 2π g_k²/Δω = γ. The
//! full interaction-picture amplitude equations, atom plus every mode, are
//! integrated with fixed-step classical RK4. Nothing is damped explicitly;
//! decay at rate γ emerges from the bath, so the global norm is conserved
//! up to integration error.
//!
//! A quantized laser conserves the excitation number, so each photon sector
//! is an independent run with coupling g√n, combined afterwards with weight
//! |w_n|².

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::amplitudes::{dressed_basis, AmplitudeSet, DressedBasis};
use crate::density::{Basis, DensityMatrix3};
use crate::error::{Error, Result};
use crate::params::{Field, InitialAtomState, PhysParams, Scheme};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Sectors lighter than this are not integrated.
pub const SECTOR_WEIGHT_CUTOFF: f64 = 1e-14;
/// Norm drift beyond this aborts a run.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;

/// Discretized flat vacuum continuum.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeBath {
    gamma: f64,
    bandwidth: f64,
    deltas: Vec<f64>,
    coupling: f64,
}

/// N modes at the midpoints of N equal cells covering [-W, W], each coupled
/// with g_k = √(γ Δω / 2π).
pub fn build_bath(gamma: f64, bandwidth: f64, n_modes: usize) -> Result<ModeBath> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::Bath(format!("decay rate must be positive, got {gamma}")));
    }
    if !(bandwidth.is_finite() && bandwidth > 0.0) {
        return Err(Error::Bath(format!("bandwidth must be positive, got {bandwidth}")));
    }
    if n_modes < 2 {
        return Err(Error::Bath(format!("need at least 2 modes, got {n_modes}")));
    }
    let spacing = 2.0 * bandwidth / n_modes as f64;
    let deltas = (0..n_modes)
        .map(|k| -bandwidth + (k as f64 + 0.5) * spacing)
        .collect();
    Ok(ModeBath { gamma, bandwidth, deltas, coupling: (gamma * spacing / (2.0 * PI)).sqrt() })
}

impl ModeBath {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn n_modes(&self) -> usize {
        self.deltas.len()
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.bandwidth / self.deltas.len() as f64
    }

    /// 2π/Δω: after this time the discrete bath rephases and re-excites the atom.
    pub fn recurrence_time(&self) -> f64 {
        2.0 * PI / self.spacing()
    }

    /// Required: W ≥ 20γ + 4·(largest splitting of the emission lines).
    pub fn check_covers(&self, splitting: f64) -> Result<()> {
        let needed = 20.0 * self.gamma + 4.0 * splitting;
        if self.bandwidth < needed {
            return Err(Error::Bath(format!(
                "bandwidth W = {} does not cover the emission sidebands; need W >= {needed}",
                self.bandwidth
            )));
        }
        Ok(())
    }
}

/// Fixed-step schedule for one integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPlan {
    pub t_end: f64,
    pub dt: f64,
    /// store overlaps every this many steps (t = 0 and t_end are always stored)
    pub record_every: usize,
}

impl StepPlan {
    fn steps(&self) -> usize {
        ((self.t_end / self.dt) - 1e-9).ceil().max(0.0) as usize
    }
}

/// Field-state overlaps of one sector at one instant, from explicit mode sums.
///
/// Upper scheme: P ↔ |c⟩, Q ↔ |a⟩, R ↔ |b⟩ with ⟨P|Q⟩ = C*A.
/// Lower scheme: P ↔ |a⟩, Q ↔ |χ₊⟩, R ↔ |χ₋⟩ with ⟨Q|R⟩ = Σ_k X⁺_k* X⁻_k.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Overlaps {
    pub pp: f64,
    pub qq: f64,
    pub rr: f64,
    pub pq: C64,
    pub qr: C64,
}

impl Overlaps {
    pub fn norm(&self) -> f64 {
        self.pp + self.qq + self.rr
    }
}

/// One integrated photon sector (or the single classical run).
#[derive(Debug, Clone, PartialEq)]
pub struct SectorRun {
    /// photon number for a quantized laser
    pub photons: Option<usize>,
    /// |w_n|², 1 for a classical laser
    pub weight: f64,
    /// recorded atomic amplitudes: (C, A) upper, A lower
    pub amplitudes: Vec<AmplitudeSet>,
    pub overlaps: Vec<Overlaps>,
    /// full state at t_end, atomic amplitudes followed by all mode amplitudes
    pub final_state: Vec<C64>,
    pub max_norm_drift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleTrajectory {
    pub scheme: Scheme,
    pub times: Vec<f64>,
    pub sectors: Vec<SectorRun>,
}

impl OracleTrajectory {
    /// Worst |norm - 1| over every sector and step.
    pub fn max_norm_drift(&self) -> f64 {
        self.sectors.iter().map(|s| s.max_norm_drift).fold(0.0, f64::max)
    }

    /// Index of the recorded time equal to `t` (within 1e-9).
    pub fn index_of(&self, t: f64) -> Option<usize> {
        self.times.iter().position(|&s| (s - t).abs() <= 1e-9 * t.abs().max(1.0))
    }
}

/// Right-hand side of one sector's amplitude equations.
enum Dynamics {
    Upper { omega: C64, detuning: f64 },
    Lower { basis: DressedBasis },
}

struct PhaseCache {
    slots: [(f64, Vec<C64>); 2],
    next: usize,
}

impl PhaseCache {
    fn new(n: usize) -> Self {
        Self { slots: [(f64::NAN, vec![ZERO; n]), (f64::NAN, vec![ZERO; n])], next: 0 }
    }

    /// e^{iδ_k t} for all k.
    fn get(&mut self, t: f64, deltas: &[f64]) -> &[C64] {
        if let Some(i) = self.slots.iter().position(|s| s.0 == t) {
            return &self.slots[i].1;
        }
        let i = self.next;
        self.next = 1 - i;
        let slot = &mut self.slots[i];
        slot.0 = t;
        for (p, &d) in slot.1.iter_mut().zip(deltas) {
            *p = C64::from_polar(1.0, d * t);
        }
        &slot.1
    }
}

struct SectorSystem<'a> {
    bath: &'a ModeBath,
    dynamics: Dynamics,
    phases: PhaseCache,
}

impl SectorSystem<'_> {
    fn derivative(&mut self, t: f64, y: &[C64], dy: &mut [C64]) {
        let n = self.bath.n_modes();
        let g = self.bath.coupling;
        let phases = self.phases.get(t, &self.bath.deltas);
        match self.dynamics {
            Dynamics::Upper { omega, detuning } => {
                let (c, a) = (y[0], y[1]);
                let laser = C64::from_polar(1.0, detuning * t);
                // ordered reduction over k
                let mut field = ZERO;
                for (b, p) in y[2..].iter().zip(phases) {
                    field += b * p;
                }
                dy[0] = -I * omega * a * laser;
                dy[1] = -I * omega.conj() * c * laser.conj() - I * g * field;
                let drive = -I * g * a;
                for (d, p) in dy[2..].iter_mut().zip(phases) {
                    *d = drive * p.conj();
                }
            }
            Dynamics::Lower { basis } => {
                let a = y[0];
                let (plus, minus) = y[1..].split_at(n);
                let rot1 = C64::from_polar(1.0, basis.lambda1 * t);
                let rot2 = C64::from_polar(1.0, basis.lambda2 * t);
                let (mut s_plus, mut s_minus) = (ZERO, ZERO);
                for ((xp, xm), p) in plus.iter().zip(minus).zip(phases) {
                    s_plus += xp * p.conj();
                    s_minus += xm * p.conj();
                }
                dy[0] = -I * g * (basis.eta * s_plus * rot1.conj() + basis.epsilon * s_minus * rot2.conj());
                let drive_plus = -I * g * basis.eta.conj() * a * rot1;
                let drive_minus = -I * g * basis.epsilon * a * rot2;
                let (d_plus, d_minus) = dy[1..].split_at_mut(n);
                for ((dp, dm), p) in d_plus.iter_mut().zip(d_minus).zip(phases) {
                    *dp = drive_plus * p;
                    *dm = drive_minus * p;
                }
            }
        }
    }

    fn overlaps(&self, y: &[C64]) -> (AmplitudeSet, Overlaps) {
        match self.dynamics {
            Dynamics::Upper { .. } => {
                let (c, a) = (y[0], y[1]);
                let rr = y[2..].iter().map(|b| b.norm_sqr()).sum();
                (
                    AmplitudeSet::Upper { c: Some(c), a },
                    Overlaps { pp: c.norm_sqr(), qq: a.norm_sqr(), rr, pq: c.conj() * a, qr: ZERO },
                )
            }
            Dynamics::Lower { .. } => {
                let n = self.bath.n_modes();
                let (plus, minus) = y[1..].split_at(n);
                let mut ov = Overlaps { pp: y[0].norm_sqr(), ..Default::default() };
                for (xp, xm) in plus.iter().zip(minus) {
                    ov.qq += xp.norm_sqr();
                    ov.rr += xm.norm_sqr();
                    ov.qr += xp.conj() * xm;
                }
                (AmplitudeSet::Lower { a: y[0] }, ov)
            }
        }
    }
}

fn rk4_run(system: &mut SectorSystem, y0: Vec<C64>, plan: &StepPlan) -> Result<(Vec<f64>, SectorRun)> {
    let steps = plan.steps();
    let dt = if steps == 0 { 0.0 } else { plan.t_end / steps as f64 };
    let dim = y0.len();
    let mut y = y0;
    let (mut k1, mut k2, mut k3, mut k4) = (vec![ZERO; dim], vec![ZERO; dim], vec![ZERO; dim], vec![ZERO; dim]);
    let mut tmp = vec![ZERO; dim];
    let norm0: f64 = y.iter().map(|z| z.norm_sqr()).sum();
    let mut times = Vec::new();
    let mut run = SectorRun {
        photons: None,
        weight: 1.0,
        amplitudes: Vec::new(),
        overlaps: Vec::new(),
        final_state: Vec::new(),
        max_norm_drift: 0.0,
    };
    let every = plan.record_every.max(1);
    for step in 0..=steps {
        let t = step as f64 * dt;
        let norm: f64 = y.iter().map(|z| z.norm_sqr()).sum();
        let drift = (norm - norm0).abs();
        run.max_norm_drift = run.max_norm_drift.max(drift);
        if drift > NORM_DRIFT_LIMIT {
            return Err(Error::NormDrift { drift, t });
        }
        if step % every == 0 || step == steps {
            let (amp, ov) = system.overlaps(&y);
            times.push(t);
            run.amplitudes.push(amp);
            run.overlaps.push(ov);
        }
        if step == steps {
            break;
        }
        let half = t + dt / 2.0;
        let next = (step + 1) as f64 * dt;
        system.derivative(t, &y, &mut k1);
        for i in 0..dim {
            tmp[i] = y[i] + k1[i] * (dt / 2.0);
        }
        system.derivative(half, &tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = y[i] + k2[i] * (dt / 2.0);
        }
        system.derivative(half, &tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = y[i] + k3[i] * dt;
        }
        system.derivative(next, &tmp, &mut k4);
        for i in 0..dim {
            y[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
        }
    }
    run.final_state = y;
    Ok((times, run))
}

/// Largest spacing between emission lines of any sector in the run.
fn max_splitting(params: &PhysParams) -> f64 {
    let top = match *params.field() {
        Field::Classical { rabi } => rabi.norm(),
        Field::Quantized { g, coherent } => g.norm() * (coherent.n_max() as f64).sqrt(),
    };
    match params.scheme() {
        Scheme::UpperLevel => 2.0 * top + params.detuning().abs(),
        Scheme::LowerLevel => (params.detuning().powi(2) + 4.0 * top * top).sqrt(),
    }
}

fn check_plan(params: &PhysParams, bath: &ModeBath, plan: &StepPlan) -> Result<()> {
    if (bath.gamma - params.gamma()).abs() > 1e-12 * params.gamma() {
        return Err(Error::Bath(format!(
            "bath built for gamma = {} but parameters use gamma = {}",
            bath.gamma,
            params.gamma()
        )));
    }
    if !(plan.t_end.is_finite() && plan.t_end >= 0.0) {
        return Err(Error::InvalidParameter { key: "t_end", reason: format!("must be >= 0, got {}", plan.t_end) });
    }
    let dt_max = (0.01 / params.gamma()).min(0.1 / bath.bandwidth);
    if !(plan.dt > 0.0 && plan.dt <= dt_max * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter {
            key: "dt",
            reason: format!("step {} must lie in (0, {dt_max}] to resolve decay and bath phases", plan.dt),
        });
    }
    bath.check_covers(max_splitting(params))?;
    if plan.t_end >= bath.recurrence_time() {
        return Err(Error::Bath(format!(
            "mode spacing {:.4} gives recurrence time {:.3} <= t_end = {}; the discrete bath \
             would re-excite the atom, use more modes",
            bath.spacing(),
            bath.recurrence_time(),
            plan.t_end
        )));
    }
    Ok(())
}

/// Photon numbers integrated for a quantized laser (weights above the cutoff).
pub fn active_sectors(params: &PhysParams) -> Vec<usize> {
    match *params.field() {
        Field::Classical { .. } => Vec::new(),
        Field::Quantized { coherent, .. } => coherent
            .probabilities()
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= SECTOR_WEIGHT_CUTOFF)
            .map(|(n, _)| n)
            .collect(),
    }
}

fn run_sector(
    params: &PhysParams,
    init: &InitialAtomState,
    bath: &ModeBath,
    plan: &StepPlan,
    photons: Option<usize>,
) -> Result<(Vec<f64>, SectorRun)> {
    let n = bath.n_modes();
    let (omega, weight) = match (*params.field(), photons) {
        (Field::Classical { rabi }, _) => (rabi, 1.0),
        (Field::Quantized { g, coherent }, Some(k)) => {
            (g * (k as f64).sqrt(), coherent.probabilities().get(k).copied().unwrap_or(0.0))
        }
        (Field::Quantized { .. }, None) => unreachable!("quantized runs are per sector"),
    };
    let (dynamics, y0) = match params.scheme() {
        Scheme::UpperLevel => {
            let mut y0 = vec![ZERO; 2 + n];
            y0[0] = init.c0();
            y0[1] = init.a0();
            (Dynamics::Upper { omega, detuning: params.detuning() }, y0)
        }
        Scheme::LowerLevel => {
            if !init.is_excited() {
                return Err(Error::InvalidParameter {
                    key: "c0/a0",
                    reason: "the lower-level scheme always starts with the atom in |a>".into(),
                });
            }
            let mut y0 = vec![ZERO; 1 + 2 * n];
            y0[0] = C64::new(1.0, 0.0);
            (Dynamics::Lower { basis: dressed_basis(params.detuning(), omega) }, y0)
        }
    };
    let mut system = SectorSystem { bath, dynamics, phases: PhaseCache::new(n) };
    let (times, mut run) = rk4_run(&mut system, y0, plan)?;
    run.photons = photons;
    run.weight = weight;
    Ok((times, run))
}

/// Integrates the full atom-plus-bath amplitude equations.
pub fn integrate(params: &PhysParams, init: &InitialAtomState, bath: &ModeBath, plan: &StepPlan) -> Result<OracleTrajectory> {
    match params.field() {
        Field::Classical { .. } => {
            check_plan(params, bath, plan)?;
            let (times, run) = run_sector(params, init, bath, plan, None)?;
            Ok(OracleTrajectory { scheme: params.scheme(), times, sectors: vec![run] })
        }
        Field::Quantized { .. } => integrate_sectors(params, init, bath, plan, &active_sectors(params)),
    }
}

/// Integrates the listed photon sectors of a quantized run, in the given order.
/// Sectors are independent; they run in parallel and are stored in list order.
pub fn integrate_sectors(
    params: &PhysParams,
    init: &InitialAtomState,
    bath: &ModeBath,
    plan: &StepPlan,
    sectors: &[usize],
) -> Result<OracleTrajectory> {
    if !params.field().is_quantized() {
        return Err(Error::InvalidParameter { key: "field", reason: "photon sectors need a quantized laser".into() });
    }
    check_plan(params, bath, plan)?;
    let runs = sectors
        .par_iter()
        .map(|&k| run_sector(params, init, bath, plan, Some(k)))
        .collect::<Result<Vec<_>>>()?;
    let times = runs.first().map(|r| r.0.clone()).unwrap_or_default();
    Ok(OracleTrajectory {
        scheme: params.scheme(),
        times,
        sectors: runs.into_iter().map(|r| r.1).collect(),
    })
}

/// Reduced density matrix at a recorded time, from the explicit mode sums.
///
/// Sectors are summed in stored order with their weights and the result is
/// divided by its trace, which differs from one only by integration drift
/// and the discarded photon-number tail.
pub fn oracle_reduced_density(trajectory: &OracleTrajectory, t: f64) -> Result<DensityMatrix3> {
    let idx = trajectory.index_of(t).ok_or_else(|| Error::InvalidParameter {
        key: "t",
        reason: format!("t = {t} is not a recorded time of the trajectory"),
    })?;
    let mut acc = Overlaps::default();
    for s in &trajectory.sectors {
        let o = &s.overlaps[idx];
        acc.pp += s.weight * o.pp;
        acc.qq += s.weight * o.qq;
        acc.rr += s.weight * o.rr;
        acc.pq += s.weight * o.pq;
        acc.qr += s.weight * o.qr;
    }
    let norm = acc.norm();
    let r = |x: f64| C64::new(x / norm, 0.0);
    let (pq, qr) = (acc.pq / norm, acc.qr / norm);
    let matrix = [
        [r(acc.pp), pq, ZERO],
        [pq.conj(), r(acc.qq), qr],
        [ZERO, qr.conj(), r(acc.rr)],
    ];
    let basis = match trajectory.scheme {
        Scheme::UpperLevel => Basis::Bare,
        Scheme::LowerLevel => Basis::Dressed,
    };
    DensityMatrix3::new(matrix, basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bath_arithmetic() {
        let bath = build_bath(1.0, 40.0, 4000).unwrap();
        assert!((bath.spacing() - 0.02).abs() < 1e-15);
        assert!((bath.coupling().powi(2) - 0.02 / (2.0 * PI)).abs() < 1e-15);
        assert!((bath.coupling().powi(2) - 3.1831e-3).abs() < 1e-7);
        assert!((2.0 * PI * bath.coupling().powi(2) / bath.spacing() - 1.0).abs() < 1e-12);
        let doubled = build_bath(1.0, 40.0, 8000).unwrap();
        assert!((doubled.coupling().powi(2) * 2.0 - bath.coupling().powi(2)).abs() < 1e-15);
        assert!((bath.deltas()[0] + 39.99).abs() < 1e-12 && (bath.deltas()[3999] - 39.99).abs() < 1e-12);
    }

    #[test]
    fn bath_rejects_bad_input() {
        assert!(build_bath(1.0, 40.0, 1).is_err());
        assert!(build_bath(1.0, 0.0, 100).is_err());
        assert!(build_bath(0.0, 40.0, 100).is_err());
        let bath = build_bath(1.0, 30.0, 100).unwrap();
        assert!(bath.check_covers(2.0).is_ok());
        assert!(bath.check_covers(3.0).is_err());
    }

    #[test]
    fn uncoupled_upper_state_is_frozen() {
        let params = PhysParams::upper_classical(0.1, 0.0).unwrap();
        let init = InitialAtomState::new(1.0.into(), 0.0.into()).unwrap();
        let bath = build_bath(1.0, 40.0, 400).unwrap();
        let plan = StepPlan { t_end: 2.0, dt: 2.5e-3, record_every: 100 };
        let traj = integrate(&params, &init, &bath, &plan).unwrap();
        assert_eq!(traj.times.len(), 9);
        for amp in &traj.sectors[0].amplitudes {
            assert_eq!(amp.c(), Some(C64::new(1.0, 0.0)));
            assert_eq!(amp.a(), ZERO);
        }
        assert!(traj.sectors[0].final_state[2..].iter().all(|b| *b == ZERO));
    }

    #[test]
    fn plan_preconditions() {
        let params = PhysParams::lower_classical(0.1, 0.5).unwrap();
        let init = InitialAtomState::excited();
        let bath = build_bath(1.0, 40.0, 400).unwrap();
        let coarse = StepPlan { t_end: 1.0, dt: 0.01, record_every: 1 };
        assert!(matches!(integrate(&params, &init, &bath, &coarse), Err(Error::InvalidParameter { key: "dt", .. })));
        let long = StepPlan { t_end: 40.0, dt: 2.5e-3, record_every: 100 };
        assert!(matches!(integrate(&params, &init, &bath, &long), Err(Error::Bath(_))));
        let narrow = build_bath(1.0, 10.0, 400).unwrap();
        let plan = StepPlan { t_end: 1.0, dt: 2.5e-3, record_every: 100 };
        assert!(matches!(integrate(&params, &init, &narrow, &plan), Err(Error::Bath(_))));
        let other_gamma = build_bath(2.0, 60.0, 400).unwrap();
        let plan = StepPlan { t_end: 1.0, dt: 1e-3, record_every: 100 };
        assert!(integrate(&params, &init, &other_gamma, &plan).is_err());
    }

    #[test]
    fn initial_density_matches_closed_form() {
        let bath = build_bath(1.0, 40.0, 200).unwrap();
        let plan = StepPlan { t_end: 0.1, dt: 2.5e-3, record_every: 10 };
        let init = InitialAtomState::equal_superposition();
        let cases = [
            (PhysParams::upper_classical(0.1, 0.5).unwrap(), init),
            (PhysParams::lower_classical(0.1, 0.5).unwrap(), InitialAtomState::excited()),
        ];
        for (params, init) in cases {
            let traj = integrate(&params, &init, &bath, &plan).unwrap();
            let oracle = oracle_reduced_density(&traj, 0.0).unwrap();
            let exact = crate::entropy::reduced_density(&params, &init, 0.0).unwrap();
            assert!(oracle.max_abs_diff(&exact) < 1e-15);
        }
    }

    #[test]
    fn unrecorded_time_rejected() {
        let params = PhysParams::lower_classical(0.1, 0.5).unwrap();
        let bath = build_bath(1.0, 40.0, 200).unwrap();
        let plan = StepPlan { t_end: 0.1, dt: 2.5e-3, record_every: 10 };
        let traj = integrate(&params, &InitialAtomState::excited(), &bath, &plan).unwrap();
        assert!(oracle_reduced_density(&traj, 0.05).is_ok());
        assert!(oracle_reduced_density(&traj, 0.051).is_err());
    }
}
