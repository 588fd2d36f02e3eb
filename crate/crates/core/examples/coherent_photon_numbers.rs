//! Number-state weights of the coupling laser's coherent state and the
//! truncation the quantized sums use.

use atomfield::{auto_truncation, CoherentField};

fn main() -> atomfield::Result<()> {
    for m in [1.0, 4.0, 100.0, 1e4] {
        let n_max = auto_truncation(m);
        let field = CoherentField::new(m, 0.0, n_max)?;
        let p = field.probabilities();
        let kept: f64 = p.iter().sum();
        let mode = p.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(n, _)| n).unwrap_or(0);
        println!("m = {m:>7}: n_max = {n_max:>6}, most likely n = {mode:>5}, 1 - sum p_n = {:.1e}", 1.0 - kept);
    }
    match CoherentField::new(100.0, 0.0, 150) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("n_max = 150 for m = 100: {e}"),
    }
    Ok(())
}
