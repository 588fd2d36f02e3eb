//! Atomic reduced density matrix, its spectrum and its von Neumann entropy.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in [-CLAMP_TOL, 0) are rounding noise and are set to zero before logs.
pub const CLAMP_TOL: f64 = 1e-10;

pub type Matrix3 = [[C64; 3]; 3];

/// Ordered atomic basis the matrix is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Basis {
    /// (|c⟩, |a⟩, |b⟩), upper-level scheme.
    Bare,
    /// (|a⟩, |χ₊⟩, |χ₋⟩), lower-level scheme.
    Dressed,
}

impl Basis {
    pub fn labels(self) -> [&'static str; 3] {
        match self {
            Basis::Bare => ["c", "a", "b"],
            Basis::Dressed => ["a", "chi+", "chi-"],
        }
    }
}

/// 3×3 reduced state of the atom.
///
/// Entry (i, j) is the overlap ⟨F_i|F_j⟩ of the field states conditioned on
/// atomic levels i and j. This is the transpose of the usual Tr_F|Ψ⟩⟨Ψ|
/// ordering and shares its spectrum, populations and entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix3 {
    rho: Matrix3,
    basis: Basis,
}

impl DensityMatrix3 {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(rho: Matrix3, basis: Basis) -> Result<Self> {
        let dm = Self { rho, basis };
        let herm = dm.hermiticity_error();
        if !(herm < HERMITICITY_TOL) {
            return Err(Error::Inconsistent { check: "hermiticity", value: herm });
        }
        let trace = dm.trace();
        if !((trace - 1.0).abs() < TRACE_TOL) {
            return Err(Error::Inconsistent { check: "unit trace", value: trace });
        }
        let lowest = dm.eigenvalues()[2];
        if lowest < -CLAMP_TOL {
            return Err(Error::Inconsistent { check: "positivity", value: lowest });
        }
        Ok(dm)
    }

    pub fn matrix(&self) -> &Matrix3 {
        &self.rho
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.rho[i][j]
    }

    pub fn trace(&self) -> f64 {
        (0..3).map(|i| self.rho[i][i].re).sum()
    }

    pub fn populations(&self) -> [f64; 3] {
        [self.rho[0][0].re, self.rho[1][1].re, self.rho[2][2].re]
    }

    /// max |ρ_ij - ρ_ji*|
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.rho[i][j] - self.rho[j][i].conj()).norm());
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> [f64; 3] {
        eig3_hermitian(&self.rho)
    }

    pub fn entropy(&self) -> f64 {
        von_neumann_entropy(self)
    }

    /// max_ij |ρ_ij - σ_ij|
    pub fn max_abs_diff(&self, other: &DensityMatrix3) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.rho[i][j] - other.rho[i][j]).norm());
            }
        }
        worst
    }
}

const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a Hermitian 3×3 matrix, in descending order.
///
/// Cyclic complex Jacobi: each pivot is first made real by a diagonal phase and
/// then annihilated by a real plane rotation. Quadratic convergence brings the
/// off-diagonal mass below rounding within a handful of sweeps, giving
/// eigenvalues accurate to a few ulps of the matrix norm. Only the Hermitian
/// part of the input is used.
pub fn eig3_hermitian(m: &Matrix3) -> [f64; 3] {
    let mut a = *m;
    for i in 0..3 {
        a[i][i] = C64::new(a[i][i].re, 0.0);
        for j in (i + 1)..3 {
            let h = (a[i][j] + a[j][i].conj()) / 2.0;
            a[i][j] = h;
            a[j][i] = h.conj();
        }
    }
    let scale: f64 = a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>();
    if scale == 0.0 {
        return [0.0; 3];
    }
    for _ in 0..MAX_SWEEPS {
        let off = a[0][1].norm_sqr() + a[0][2].norm_sqr() + a[1][2].norm_sqr();
        if off <= scale * 1e-34 {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            rotate(&mut a, p, q);
        }
    }
    let mut ev = [a[0][0].re, a[1][1].re, a[2][2].re];
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

fn rotate(a: &mut Matrix3, p: usize, q: usize) {
    let b = a[p][q];
    let mag = b.norm();
    if mag == 0.0 {
        return;
    }
    // phase on column q makes the pivot real and positive
    let phase = b / mag;
    for r in 0..3 {
        a[r][q] *= phase.conj();
    }
    for r in 0..3 {
        a[q][r] *= phase;
    }
    let app = a[p][p].re;
    let aqq = a[q][q].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    for r in 0..3 {
        if r == p || r == q {
            continue;
        }
        let arp = a[r][p];
        let arq = a[r][q];
        a[r][p] = arp * c - arq * s;
        a[r][q] = arp * s + arq * c;
        a[p][r] = a[r][p].conj();
        a[q][r] = a[r][q].conj();
    }
    a[p][p] = C64::new(app - t * mag, 0.0);
    a[q][q] = C64::new(aqq + t * mag, 0.0);
    a[p][q] = C64::new(0.0, 0.0);
    a[q][p] = C64::new(0.0, 0.0);
}

/// S = -Σ λ ln λ in nats, with 0 ln 0 = 0.
pub fn von_neumann_entropy(rho: &DensityMatrix3) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues())
}

pub(crate) fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum::<f64>()
        .max(0.0)
}
