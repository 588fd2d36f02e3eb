//! Entanglement between a laser-driven three-level atom and its
//! spontaneous-emission field.
//!
//! The crate evaluates closed-form Weisskopf–Wigner amplitudes for the
//! upper-level (|c⟩ ↔ |a⟩ driven) and lower-level (|c⟩ ↔ |b⟩ driven) schemes,
//! with the coupling laser treated either as a classical field or as a
//! quantized coherent mode, assembles the atomic reduced density matrix and
//! reports its von Neumann entropy. A brute-force integrator over a
//! discretized vacuum continuum ([`oracle`]) checks the closed forms.
//!
//! ```
//! use atomfield::{entropy_trace, time_grid, InitialAtomState, PhysParams};
//!
//! let params = PhysParams::lower_classical(0.1, 1.0).unwrap();
//! let trace = entropy_trace(&params, &InitialAtomState::excited(), &time_grid(60.0, 601)).unwrap();
//! assert!(trace.entropy[0] == 0.0 && trace.entropy[600] > 0.5);
//! ```

pub mod amplitudes;
pub mod cli;
pub mod config;
pub mod density;
pub mod entropy;
pub mod error;
pub mod oracle;
pub mod params;

pub use amplitudes::{
    dressed_basis, lower_quantized_amplitude, lower_survival_amplitude, upper_classical_amplitudes,
    upper_quantized_amplitudes, upper_roots, AmplitudeSet, DressedBasis, UpperRoots,
};
pub use density::{eig3_hermitian, von_neumann_entropy, Basis, DensityMatrix3};
pub use entropy::{
    entropy_trace, populations, reduced_density, steady_state, time_grid, EntropyTrace, SteadyState,
};
pub use error::{Error, Result};
pub use oracle::{build_bath, integrate, oracle_reduced_density, ModeBath, OracleTrajectory, StepPlan};
pub use params::{auto_truncation, coherent_weights, CoherentField, Field, InitialAtomState, PhysParams, Scheme};
