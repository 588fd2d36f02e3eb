//! Closed-form probability amplitudes of the upper-level scheme, the
//! characteristic roots behind them, and the repeated-root case at Ω = γ/4.

use atomfield::{upper_classical_amplitudes, upper_roots, InitialAtomState, PhysParams};
use num_complex::Complex64 as C64;

fn main() -> atomfield::Result<()> {
    let params = PhysParams::upper_classical(0.1, 0.5)?;
    let roots = upper_roots(&params, C64::new(0.5, 0.0));
    println!("alpha = {:.4}, beta = {:.4}", roots.alpha, roots.beta);
    println!("C exponents {:.4} {:.4}", roots.x1, roots.x2);
    println!("A exponents {:.4} {:.4}", roots.y1, roots.y2);

    let init = InitialAtomState::equal_superposition();
    for t in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let amp = upper_classical_amplitudes(&params, &init, t)?;
        let c = amp.c().expect("upper scheme carries C");
        println!("gt = {t:>4}: C = {c:.5}, A = {:.5}", amp.a());
    }

    // β vanishes here; the solver switches to the (a0 + (ȧ0 - y a0) t) e^{yt} form
    let confluent = PhysParams::upper_classical(0.0, 0.25)?;
    let roots = upper_roots(&confluent, C64::new(0.25, 0.0));
    let amp = upper_classical_amplitudes(&confluent, &InitialAtomState::excited(), 2.0)?;
    println!("Delta = 0, Omega = gamma/4: confluent = {}, A(2) = {:.6}", roots.confluent, amp.a());
    Ok(())
}
