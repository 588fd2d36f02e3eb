use atomfield::density::Matrix3;
use atomfield::{eig3_hermitian, Basis, DensityMatrix3};
use nalgebra::{Complex, Matrix3 as NaMatrix3};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn to_nalgebra(m: &Matrix3) -> NaMatrix3<Complex<f64>> {
    NaMatrix3::from_fn(|i, j| Complex::new(m[i][j].re, m[i][j].im))
}

fn reference_eigenvalues(m: &Matrix3) -> [f64; 3] {
    let mut ev: Vec<f64> = to_nalgebra(m).symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    [ev[0], ev[1], ev[2]]
}

/// ρ = B B† / Tr(B B†) for a random complex B.
fn density_from(entries: &[(f64, f64)]) -> Matrix3 {
    let b: Vec<C64> = entries.iter().map(|&(re, im)| C64::new(re, im)).collect();
    let mut rho = [[C64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                rho[i][j] += b[3 * i + k] * b[3 * j + k].conj();
            }
        }
    }
    let trace: f64 = (0..3).map(|i| rho[i][i].re).sum();
    for row in &mut rho {
        for z in row.iter_mut() {
            *z /= trace;
        }
    }
    rho
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn jacobi_matches_dense_solver(entries in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 9)) {
        let rho = density_from(&entries);
        prop_assume!((0..3).map(|i| rho[i][i].re).sum::<f64>().is_finite());
        let ours = eig3_hermitian(&rho);
        let reference = reference_eigenvalues(&rho);
        for k in 0..3 {
            prop_assert!((ours[k] - reference[k]).abs() < 1e-10, "{:?} vs {:?}", ours, reference);
        }
        let dm = DensityMatrix3::new(rho, Basis::Bare).unwrap();
        prop_assert!(dm.entropy() >= 0.0 && dm.entropy() <= 3f64.ln() + 1e-12);
    }

    #[test]
    fn rank_deficient_states(a in (-1.0..1.0f64, -1.0..1.0f64), b in (-1.0..1.0f64, -1.0..1.0f64), c in (-1.0..1.0f64, -1.0..1.0f64)) {
        // a rank-one B B† gives a pure state with entropy zero
        let v = [C64::new(a.0, a.1), C64::new(b.0, b.1), C64::new(c.0, c.1)];
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        prop_assume!(norm > 1e-6);
        let mut rho = [[C64::new(0.0, 0.0); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                rho[i][j] = v[i] * v[j].conj() / norm;
            }
        }
        let ev = eig3_hermitian(&rho);
        prop_assert!((ev[0] - 1.0).abs() < 1e-12 && ev[1].abs() < 1e-12 && ev[2].abs() < 1e-12);
        let dm = DensityMatrix3::new(rho, Basis::Dressed).unwrap();
        prop_assert!(dm.entropy() < 1e-10);
    }
}

#[test]
fn degenerate_spectrum() {
    let third = C64::new(1.0 / 3.0, 0.0);
    let z = C64::new(0.0, 0.0);
    let rho = [[third, z, z], [z, third, z], [z, z, third]];
    let ev = eig3_hermitian(&rho);
    let reference = reference_eigenvalues(&rho);
    for k in 0..3 {
        assert!((ev[k] - reference[k]).abs() < 1e-15);
    }
}
