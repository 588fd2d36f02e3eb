//! Lower-level scheme in the dressed basis: the coupled pair |c⟩, |b⟩ is
//! rotated into |χ±⟩ and the emitted photon leaves the atom in a mixture
//! whose weights are set by the laser.
//!
//!     cargo run --release --example dressed_populations

use atomfield::{dressed_basis, populations, reduced_density, time_grid, InitialAtomState, PhysParams};
use num_complex::Complex64 as C64;

fn main() -> atomfield::Result<()> {
    let init = InitialAtomState::excited();
    for omega in [0.1, 0.2, 0.5, 1.0] {
        let basis = dressed_basis(0.1, C64::new(omega, 0.0));
        println!(
            "Omega = {omega}: lambda = ({:.4}, {:.4}), epsilon = {:.4}, eta = {:.4}",
            basis.lambda1, basis.lambda2, basis.epsilon, basis.eta.re
        );
        let params = PhysParams::lower_classical(0.1, omega)?;
        let grid = time_grid(10.0, 6);
        for (t, p) in grid.iter().zip(populations(&params, &init, &grid)?) {
            println!("  gt = {t:>4.1}: a {:.4}  chi+ {:.4}  chi- {:.4}", p[0], p[1], p[2]);
        }
        let rho = reduced_density(&params, &init, 60.0)?;
        println!("  coherence <chi+|chi-> at gt = 60: {:.4}\n", rho.get(1, 2));
    }
    Ok(())
}
