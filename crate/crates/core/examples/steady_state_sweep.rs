//! Long-time entanglement of the lower-level scheme against laser detuning.
//! The peak sits at resonance and approaches ln 2 for strong driving.

use atomfield::{steady_state, InitialAtomState, PhysParams};

fn main() -> atomfield::Result<()> {
    let init = InitialAtomState::excited();
    let detunings: Vec<f64> = (0..=20).map(|i| (-5.0 * (20 - i) as f64 + 5.0 * i as f64) / 20.0).collect();
    print!("{:>8}", "Delta'");
    for omega in [0.1, 1.0, 5.0] {
        print!("  S(Omega={omega:<3})");
    }
    println!();
    for d in detunings {
        print!("{d:>8.2}");
        for omega in [0.1, 1.0, 5.0] {
            let s = steady_state(&PhysParams::lower_classical(d, omega)?, &init)?.entropy;
            print!("  {s:>12.6}");
        }
        println!();
    }
    let top = steady_state(&PhysParams::lower_classical(0.0, 5.0)?, &init)?.entropy;
    println!("\nS_inf(0, 5) = {top:.6}; ln 2 = {:.6}", std::f64::consts::LN_2);
    Ok(())
}
