use thiserror::Error;

use crate::trap::Instability;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("trap parameters are outside the stability region: {0}")]
    Unstable(Instability),

    #[error("modified-cyclotron and magnetron frequencies are degenerate (|w1 - w2| = {gap:e})")]
    DegenerateMode { gap: f64 },

    #[error("ladder momentum vectors are numerically singular (condition number {condition:e})")]
    SingularAlpha { condition: f64 },

    #[error("solved Gaussian matrix is not symmetric (max |a - a^T| = {asymmetry:e})")]
    AsymmetricGaussian { asymmetry: f64 },

    #[error(
        "Gaussian matrix has no positive-definite real part; the state is not square integrable"
    )]
    NotNormalizable,

    #[error(
        "|z{mode}|^2 = {modulus_sq} exceeds the Fock cutoff {cutoff}; truncation is unreliable"
    )]
    OverflowGuard {
        mode: usize,
        modulus_sq: f64,
        cutoff: usize,
    },

    #[error("Fock space of {requested} states exceeds the configured budget of {budget}")]
    Capacity { requested: usize, budget: usize },
}
