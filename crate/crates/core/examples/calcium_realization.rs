//! Times and laser strengths in laboratory units for calcium.
//!
//! Upper-level scheme: 4s6p ¹P₁ decays to the 4s² ¹S₀ ground state at
//! γ ≈ 48 MHz and is coupled to the metastable 4s3d ¹D₂ at 504 nm. With a
//! transition dipole of 9.5e-30 C·m, Ω = γ needs a field of about 530 V/m.
//! Lower-level scheme: 4s4p ¹P₁ decays at γ ≈ 216 MHz while a 657 nm diode
//! laser couples 4s² ¹S₀ to 4s4p ³P₁.

use atomfield::{entropy_trace, steady_state, time_grid, InitialAtomState, PhysParams};

const HBAR: f64 = 1.054_571_817e-34;

fn main() -> atomfield::Result<()> {
    let gamma_upper = 48e6;
    let dipole = 9.5e-30;
    let field = HBAR * gamma_upper / dipole;
    println!("upper scheme: Omega = gamma needs E = {field:.0} V/m");

    let params = PhysParams::upper_classical(0.1, 1.0)?;
    let trace = entropy_trace(&params, &InitialAtomState::equal_superposition(), &time_grid(10.0, 6))?;
    for (t, s) in trace.times.iter().zip(&trace.entropy) {
        println!("  t = {:>6.1} ns: S = {s:.4}", t / gamma_upper * 1e9);
    }

    let gamma_lower = 216e6;
    println!("lower scheme: steady entanglement reached after ~{:.0} ns", 20.0 / gamma_lower * 1e9);
    for omega in [0.5, 1.0, 5.0] {
        let s = steady_state(&PhysParams::lower_classical(0.0, omega)?, &InitialAtomState::excited())?.entropy;
        println!("  Omega = {:>6.0} MHz: S_inf = {s:.4}", omega * gamma_lower / 1e6);
    }
    Ok(())
}
