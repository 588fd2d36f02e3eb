//! A coherent quantized laser with mean photon number m and per-photon
//! coupling g acts like a classical field of Rabi frequency g√m once m is
//! large. For small m the photon-number spread washes the Rabi dynamics out.
//!
//!     cargo run --release --example quantized_vs_classical

use atomfield::{entropy_trace, time_grid, InitialAtomState, PhysParams, Scheme};

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn main() -> atomfield::Result<()> {
    let grid = time_grid(20.0, 401);
    for scheme in [Scheme::UpperLevel, Scheme::LowerLevel] {
        let (init, classical) = match scheme {
            Scheme::UpperLevel => (InitialAtomState::equal_superposition(), PhysParams::upper_classical(0.1, 1.0)?),
            Scheme::LowerLevel => (InitialAtomState::excited(), PhysParams::lower_classical(0.1, 1.0)?),
        };
        let reference = entropy_trace(&classical, &init, &grid)?.entropy;
        println!("{} scheme, classical Omega = 1:", scheme.name());
        for m in [4.0, 25.0, 100.0, 400.0] {
            let g = 1.0 / f64::sqrt(m);
            let quantized = match scheme {
                Scheme::UpperLevel => PhysParams::upper_quantized(0.1, g, m)?,
                Scheme::LowerLevel => PhysParams::lower_quantized(0.1, g, m)?,
            };
            let s = entropy_trace(&quantized, &init, &grid)?.entropy;
            println!("  m = {m:>5}, g = {g:.3}: max |dS| over gt <= 20 is {:.2e}", max_gap(&s, &reference));
        }
    }
    Ok(())
}
