//! Right eigenvectors and left eigenforms of the generator matrix, their
//! duality normalization, and the Heisenberg propagator `exp(Lambda t)`.
//!
//! The eigenpairs are written down in closed form rather than obtained from a
//! numerical eigensolver, which fixes every phase. The normalization constants
//! `t_k` are real and positive and chosen so that the ladder operators built
//! from the eigenforms have commutators `(+1, -1, +1)`.

use nalgebra::{Matrix6, RowVector6, Vector6};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::trap::{GeneratorMatrix, ModeFrequencies};

/// Below this `|w1 - w2|` the duality normalization is meaningless.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// The three eigenpairs `(lambda_k, u_k, f_k)` with `lambda_k = i w_k`. The
/// partners belonging to `-lambda_k` are the complex conjugates.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairSet {
    freqs: ModeFrequencies,
    lambdas: [Complex64; 3],
    vectors: [Vector6<Complex64>; 3],
    forms: [RowVector6<Complex64>; 3],
    t: [f64; 3],
}

impl EigenPairSet {
    pub fn freqs(&self) -> ModeFrequencies {
        self.freqs
    }

    pub fn eigenvalue(&self, k: usize) -> Complex64 {
        self.lambdas[k]
    }

    /// Right eigenvector `u_k`.
    pub fn vector(&self, k: usize) -> &Vector6<Complex64> {
        &self.vectors[k]
    }

    /// Left eigenform `f_k`.
    pub fn form(&self, k: usize) -> &RowVector6<Complex64> {
        &self.forms[k]
    }

    /// Eigenform normalization constants `t_k`.
    pub fn t(&self) -> [f64; 3] {
        self.t
    }

    /// Eigenvector normalization constants `s_k` fixed by duality:
    /// `(1/(4 t1), 1/(4 t2), 1/(2 t3))`.
    pub fn s(&self) -> [f64; 3] {
        [0.25 / self.t[0], 0.25 / self.t[1], 0.5 / self.t[2]]
    }

    /// All six eigenvectors: `u_1, u_2, u_3, u_1*, u_2*, u_3*`.
    pub fn all_vectors(&self) -> [Vector6<Complex64>; 6] {
        let [a, b, c] = self.vectors;
        [a, b, c, a.conjugate(), b.conjugate(), c.conjugate()]
    }

    /// All six eigenforms in the same order as [`EigenPairSet::all_vectors`].
    pub fn all_forms(&self) -> [RowVector6<Complex64>; 6] {
        let [a, b, c] = self.forms;
        [a, b, c, a.conjugate(), b.conjugate(), c.conjugate()]
    }

    /// The 6x6 table of pairings `f_j . u_k` over all six partners, which
    /// duality requires to be the identity.
    pub fn duality_table(&self) -> Matrix6<Complex64> {
        let fs = self.all_forms();
        let us = self.all_vectors();
        Matrix6::from_fn(|j, k| (fs[j] * us[k])[(0, 0)])
    }

    /// Largest deviation of the duality table from the identity.
    pub fn duality_residual(&self) -> f64 {
        max_abs(&(self.duality_table() - Matrix6::identity()))
    }

    /// Largest eigen-equation residual over the three `u_k` and `f_k`.
    pub fn eigen_residual(&self, lambda: &GeneratorMatrix) -> f64 {
        let m = lambda.as_matrix().map(Complex64::from);
        (0..3)
            .flat_map(|k| {
                let l = self.lambdas[k];
                let right = (m * self.vectors[k] - self.vectors[k] * l).camax();
                let left = (self.forms[k] * m - self.forms[k] * l).camax();
                [right, left]
            })
            .fold(0.0, f64::max)
    }
}

fn max_abs(m: &Matrix6<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Closed-form eigenpairs for the trap described by `lambda_matrix`.
pub fn decompose(lambda_matrix: &GeneratorMatrix, freqs: &ModeFrequencies) -> Result<EigenPairSet> {
    let gap = freqs.omega1 - freqs.omega2;
    if gap.is_nan() || gap.abs() < DEGENERACY_THRESHOLD {
        return Err(Error::DegenerateMode { gap: gap.abs() });
    }
    // q = sqrt(b^2 + v), w = sqrt(-2 v)
    let q = 0.5 * gap;
    let w = freqs.omega3;
    let t1 = 1.0 / (2.0 * gap).sqrt();
    let t3 = 1.0 / (2.0 * w).sqrt();
    let (s1, s3) = (0.25 / t1, 0.5 / t3);

    let c = |re: f64, im: f64| Complex64::new(re, im);
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);

    let u1 =
        Vector6::new(c(1.0 / q, 0.0), c(0.0, -1.0 / q), zero, i, one, zero) * Complex64::from(s1);
    let u2 =
        Vector6::new(c(-1.0 / q, 0.0), c(0.0, 1.0 / q), zero, i, one, zero) * Complex64::from(s1);
    let u3 = Vector6::new(zero, zero, c(0.0, -1.0 / w), zero, zero, one) * Complex64::from(s3);

    let f1 = RowVector6::new(c(q, 0.0), c(0.0, q), zero, -i, one, zero) * Complex64::from(t1);
    let f2 = RowVector6::new(c(-q, 0.0), c(0.0, -q), zero, -i, one, zero) * Complex64::from(t1);
    let f3 = RowVector6::new(zero, zero, c(0.0, w), zero, zero, one) * Complex64::from(t3);

    let pairs = EigenPairSet {
        freqs: *freqs,
        lambdas: [
            c(0.0, freqs.omega1),
            c(0.0, freqs.omega2),
            c(0.0, freqs.omega3),
        ],
        vectors: [u1, u2, u3],
        forms: [f1, f2, f3],
        t: [t1, t1, t3],
    };
    debug_assert!(pairs.eigen_residual(lambda_matrix) < 1e-8 * (1.0 + freqs.omega1 * freqs.omega1));
    Ok(pairs)
}

/// Eigenvalues of `Lambda` from a general-purpose dense solver, sorted by
/// imaginary part.
pub fn numerical_eigenvalues(lambda: &GeneratorMatrix) -> [Complex64; 6] {
    let mut ev: Vec<Complex64> = lambda
        .as_matrix()
        .complex_eigenvalues()
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| a.im.total_cmp(&b.im));
    std::array::from_fn(|k| ev[k])
}

/// Largest distance between the solver's eigenvalues and `{+-i w_k}`.
pub fn numerical_eigenvalue_residual(lambda: &GeneratorMatrix, freqs: &ModeFrequencies) -> f64 {
    let mut expected: Vec<f64> = freqs.as_array().iter().flat_map(|w| [*w, -*w]).collect();
    expected.sort_by(f64::total_cmp);
    numerical_eigenvalues(lambda)
        .iter()
        .zip(expected)
        .map(|(l, w)| (l - Complex64::new(0.0, w)).norm())
        .fold(0.0, f64::max)
}

/// `sum_k (u_k (x) f_k + u_k* (x) f_k*)`, which equals the identity.
pub fn unit_decomposition(pairs: &EigenPairSet) -> Matrix6<Complex64> {
    spectral_sum(pairs, |_| (Complex64::from(1.0), Complex64::from(1.0)))
}

/// `sum_k lambda_k (u_k (x) f_k - u_k* (x) f_k*)`, which equals `Lambda`.
pub fn lambda_reconstruction(pairs: &EigenPairSet) -> Matrix6<Complex64> {
    spectral_sum(pairs, |l| (l, -l))
}

/// Complex form of the propagator before the (vanishing) imaginary part is
/// discarded.
pub fn propagator_complex(pairs: &EigenPairSet, t: f64) -> Matrix6<Complex64> {
    spectral_sum(pairs, |l| ((l * t).exp(), (-l * t).exp()))
}

/// Heisenberg propagator `exp(Lambda t)`, so that `eta(t) = exp(Lambda t) eta`.
pub fn propagator(pairs: &EigenPairSet, t: f64) -> Matrix6<f64> {
    propagator_complex(pairs, t).map(|z| z.re)
}

fn spectral_sum(
    pairs: &EigenPairSet,
    weights: impl Fn(Complex64) -> (Complex64, Complex64),
) -> Matrix6<Complex64> {
    (0..3).fold(Matrix6::zeros(), |acc, k| {
        let (w, w_conj) = weights(pairs.lambdas[k]);
        let u = pairs.vectors[k];
        let f = pairs.forms[k];
        acc + (u * f) * w + (u.conjugate() * f.conjugate()) * w_conj
    })
}
