//! Entropy and level populations of the upper-level scheme with a classical
//! laser, for three drive strengths at Δ = 0.1γ, starting from (|c⟩ + |a⟩)/√2.
//!
//! Weak driving leaves |c⟩ nearly dark: it only empties through the detuned
//! |a⟩, so entanglement lingers long after |a⟩ has decayed.
//!
//!     cargo run --release --example upper_scheme_trace

use atomfield::{entropy_trace, time_grid, InitialAtomState, PhysParams};

fn main() -> atomfield::Result<()> {
    let init = InitialAtomState::equal_superposition();
    let grid = time_grid(50.0, 11);
    for omega in [0.1, 0.2, 1.0] {
        let params = PhysParams::upper_classical(0.1, omega)?;
        let trace = entropy_trace(&params, &init, &grid)?;
        println!("Omega = {omega} gamma");
        println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "gt", "S", "|c|^2", "|a|^2", "|b|^2");
        for ((t, s), p) in trace.times.iter().zip(&trace.entropy).zip(&trace.populations) {
            println!("{t:>6.1} {s:>10.5} {:>10.5} {:>10.5} {:>10.5}", p[0], p[1], p[2]);
        }
        println!();
    }
    Ok(())
}
