//! Coherent states of a spinless charged particle in an ideal Penning trap.
//!
//! The crate follows one chain of constructions, each step checked against an
//! independent route:
//!
//! * [`trap`]: parameters `(b, v)`, the stability region, the generator matrix
//!   `Lambda` of the Heisenberg equations and the three mode frequencies.
//! * [`spectral`]: eigenvectors and eigenforms of `Lambda` in closed form, the
//!   unit decomposition and the propagator `exp(Lambda t)`.
//! * [`ladder`]: first-degree operators, commutators, the ladder operators of
//!   the three modes and the factorized Hamiltonian
//!   `H = w1 N1 - w2 N2 + w3 N3 + E_000`.
//! * [`states`]: the extremal Gaussian state, coherent-state labels,
//!   wavefunctions and Fock-basis coefficients.
//! * [`observables`]: moments, uncertainty products and energy statistics.
//! * [`fock`]: a truncated Fock-space backend used as a numerical oracle.
//! * [`cli`]: the `penning` command-line front end.
//!
//! Units have `m = hbar = 1`. The phase-space vector is always ordered as
//! `(X, Y, Z, Px, Py, Pz)`.

pub mod cli;
pub mod error;
pub mod expm;
pub mod fock;
pub mod grid;
pub mod ladder;
pub mod observables;
pub mod spectral;
pub mod states;
pub mod trap;

pub use error::{Error, Result};
pub use ladder::{
    build_ladder, commutator, energy, hamiltonian_residual, ModeSign, ModeSystem,
    PhaseSpaceOperator,
};
pub use observables::{
    coherent_moments, energy_mean, energy_variance, extremal_moments, MomentReport,
};
pub use spectral::{decompose, propagator, unit_decomposition, EigenPairSet};
pub use states::{
    aocs_coefficients, coherent_label, extract_alpha_beta, phi0, phi_z, solve_gaussian,
    CoherentLabel, GaussianState, LadderVectors,
};
pub use trap::{
    build_lambda, frequencies, GeneratorMatrix, Instability, ModeFrequencies, StabilityVerdict,
    TrapParams,
};

/// Complex scalar used throughout.
pub use num_complex::Complex64;

/// Everything derived from one parameter pair, built once.
#[derive(Debug, Clone)]
pub struct Trap {
    pub params: TrapParams,
    pub lambda: GeneratorMatrix,
    pub freqs: ModeFrequencies,
    pub pairs: EigenPairSet,
    pub modes: ModeSystem,
    pub vectors: LadderVectors,
    pub ground: GaussianState,
}

impl Trap {
    pub fn new(params: TrapParams) -> Result<Self> {
        let lambda = build_lambda(params)?;
        let freqs = frequencies(params)?;
        let pairs = decompose(&lambda, &freqs)?;
        let modes = build_ladder(&pairs);
        let vectors = extract_alpha_beta(&modes);
        let ground = solve_gaussian(&vectors)?;
        Ok(Self {
            params,
            lambda,
            freqs,
            pairs,
            modes,
            vectors,
            ground,
        })
    }

    pub fn label(&self, z: [Complex64; 3]) -> Result<CoherentLabel> {
        coherent_label(z, self.params)
    }
}

// Book chapters are compiled as doc-tests so the guide cannot drift.
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/trap.md")]
mod book_trap {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/normal-modes.md")]
mod book_normal_modes {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/ladder.md")]
mod book_ladder {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/extremal-state.md")]
mod book_extremal_state {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/coherent-states.md")]
mod book_coherent_states {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/observables.md")]
mod book_observables {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/fock-oracle.md")]
mod book_fock_oracle {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
