//! Brute-force check of the closed forms: the vacuum is replaced by N modes
//! spread over [-W, W] with flat coupling, and the full amplitude equations
//! are integrated with RK4. The residual difference is the finite-bandwidth
//! correction to exponential decay, which falls roughly like γ/W.
//!
//!     cargo run --release --example bath_oracle

use atomfield::{build_bath, integrate, oracle_reduced_density, reduced_density, InitialAtomState, PhysParams, StepPlan};

fn main() -> atomfield::Result<()> {
    let params = PhysParams::lower_classical(0.1, 0.5)?;
    let init = InitialAtomState::excited();
    for bandwidth in [40.0, 80.0] {
        let modes = (bandwidth * 100.0) as usize;
        let dt = 0.1 / bandwidth;
        let bath = build_bath(1.0, bandwidth, modes)?;
        let plan = StepPlan { t_end: 3.0, dt, record_every: (0.5 / dt) as usize };
        let trajectory = integrate(&params, &init, &bath, &plan)?;
        println!("W = {bandwidth}, N = {modes}, recurrence time {:.0}/gamma", bath.recurrence_time());
        for &t in &trajectory.times {
            let oracle = oracle_reduced_density(&trajectory, t)?;
            let exact = reduced_density(&params, &init, t)?;
            println!(
                "  gt = {t:.1}: S oracle {:.5}, S closed form {:.5}, max |drho| {:.2e}",
                oracle.entropy(),
                exact.entropy(),
                oracle.max_abs_diff(&exact)
            );
        }
        println!("  norm drift {:.1e}", trajectory.max_norm_drift());
    }
    Ok(())
}
