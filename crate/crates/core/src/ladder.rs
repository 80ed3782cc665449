//! First-degree phase-space operators, their commutators, and the ladder
//! operators of the three trap modes.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix6, Vector6};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::spectral::{decompose, EigenPairSet};
use crate::trap::{build_lambda, frequencies, ModeFrequencies, TrapParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The operator `c . eta + offset`, with `eta = (X, Y, Z, Px, Py, Pz)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceOperator {
    pub coeffs: Vector6<Complex64>,
    pub offset: Complex64,
}

impl PhaseSpaceOperator {
    pub fn new(coeffs: Vector6<Complex64>) -> Self {
        Self {
            coeffs,
            offset: Complex64::from(0.0),
        }
    }

    /// `eta_index` alone: 0..3 are positions, 3..6 momenta.
    pub fn coordinate(index: usize) -> Self {
        let mut coeffs = Vector6::zeros();
        coeffs[index] = Complex64::from(1.0);
        Self::new(coeffs)
    }

    pub fn position(axis: usize) -> Self {
        assert!(axis < 3);
        Self::coordinate(axis)
    }

    pub fn momentum(axis: usize) -> Self {
        assert!(axis < 3);
        Self::coordinate(axis + 3)
    }

    pub fn with_offset(mut self, offset: Complex64) -> Self {
        self.offset = offset;
        self
    }

    /// Hermitian adjoint; `eta` is Hermitian so only the coefficients conjugate.
    pub fn adjoint(&self) -> Self {
        Self {
            coeffs: self.coeffs.conjugate(),
            offset: self.offset.conj(),
        }
    }

    /// Position part `c[0..3]`.
    pub fn position_part(&self) -> nalgebra::Vector3<Complex64> {
        self.coeffs.fixed_rows::<3>(0).into_owned()
    }

    /// Momentum part `c[3..6]`.
    pub fn momentum_part(&self) -> nalgebra::Vector3<Complex64> {
        self.coeffs.fixed_rows::<3>(3).into_owned()
    }
}

impl Add for PhaseSpaceOperator {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            coeffs: self.coeffs + rhs.coeffs,
            offset: self.offset + rhs.offset,
        }
    }
}

impl Sub for PhaseSpaceOperator {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for PhaseSpaceOperator {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            coeffs: -self.coeffs,
            offset: -self.offset,
        }
    }
}

impl Mul<Complex64> for PhaseSpaceOperator {
    type Output = Self;
    fn mul(self, k: Complex64) -> Self {
        Self {
            coeffs: self.coeffs * k,
            offset: self.offset * k,
        }
    }
}

/// The canonical commutator table `K[j][k] = [eta_j, eta_k]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorForm(Matrix6<Complex64>);

impl CommutatorForm {
    pub fn canonical() -> Self {
        let mut k = Matrix6::zeros();
        for j in 0..3 {
            k[(j, j + 3)] = I;
            k[(j + 3, j)] = -I;
        }
        Self(k)
    }

    pub fn matrix(&self) -> &Matrix6<Complex64> {
        &self.0
    }

    /// `[c . eta, d . eta] = c^T K d`.
    pub fn bracket(&self, c: &Vector6<Complex64>, d: &Vector6<Complex64>) -> Complex64 {
        (c.transpose() * self.0 * d)[(0, 0)]
    }
}

/// `[A, B]`; always a multiple of the identity.
pub fn commutator(a: &PhaseSpaceOperator, b: &PhaseSpaceOperator) -> Complex64 {
    CommutatorForm::canonical().bracket(&a.coeffs, &b.coeffs)
}

/// A Weyl-ordered polynomial of degree at most two in `eta`:
/// `sum_jk quad[j][k] sym(eta_j eta_k) + linear . eta + scalar`, where
/// `sym(ab) = (ab + ba)/2` and `quad` is kept symmetric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticForm {
    pub quad: Matrix6<Complex64>,
    pub linear: Vector6<Complex64>,
    pub scalar: Complex64,
}

impl QuadraticForm {
    pub fn zero() -> Self {
        Self {
            quad: Matrix6::zeros(),
            linear: Vector6::zeros(),
            scalar: Complex64::from(0.0),
        }
    }

    pub fn constant(c: f64) -> Self {
        Self {
            scalar: Complex64::from(c),
            ..Self::zero()
        }
    }

    /// Expands the operator product `A B` in Weyl-ordered form. The ordering
    /// correction `eta_j eta_k = sym(eta_j eta_k) + K_jk / 2` lands in the
    /// scalar.
    pub fn product(a: &PhaseSpaceOperator, b: &PhaseSpaceOperator) -> Self {
        let outer = a.coeffs * b.coeffs.transpose();
        Self {
            quad: (outer + outer.transpose()) * Complex64::from(0.5),
            linear: a.coeffs * b.offset + b.coeffs * a.offset,
            scalar: commutator(a, b) * 0.5 + a.offset * b.offset,
        }
    }

    /// The trap Hamiltonian
    /// `P^2/2 + b (X Py - Y Px) + [(b^2 + v)(X^2 + Y^2) - 2 v Z^2]/2`.
    pub fn hamiltonian(params: TrapParams) -> Self {
        let TrapParams { b, v } = params;
        let mut h = Matrix6::<f64>::zeros();
        h[(0, 0)] = 0.5 * (b * b + v);
        h[(1, 1)] = 0.5 * (b * b + v);
        h[(2, 2)] = -v;
        for p in 3..6 {
            h[(p, p)] = 0.5;
        }
        // X Py and Y Px commute, so the symmetric split is exact.
        h[(0, 4)] = 0.5 * b;
        h[(4, 0)] = 0.5 * b;
        h[(1, 3)] = -0.5 * b;
        h[(3, 1)] = -0.5 * b;
        Self {
            quad: h.map(Complex64::from),
            ..Self::zero()
        }
    }

    pub fn scale(self, k: f64) -> Self {
        let k = Complex64::from(k);
        Self {
            quad: self.quad * k,
            linear: self.linear * k,
            scalar: self.scalar * k,
        }
    }

    /// Largest absolute coefficient difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let q = (self.quad - other.quad)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let l = (self.linear - other.linear)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        q.max(l).max((self.scalar - other.scalar).norm())
    }
}

impl Add for QuadraticForm {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            quad: self.quad + rhs.quad,
            linear: self.linear + rhs.linear,
            scalar: self.scalar + rhs.scalar,
        }
    }
}

/// Global sign with which a mode's number operator enters the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModeSign {
    Positive,
    Negative,
}

impl ModeSign {
    pub fn value(self) -> f64 {
        match self {
            ModeSign::Positive => 1.0,
            ModeSign::Negative => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderPair {
    pub annihilation: PhaseSpaceOperator,
    pub creation: PhaseSpaceOperator,
}

/// The three independent oscillators of the trap.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSystem {
    pub freqs: ModeFrequencies,
    /// `L_k = f_k* . eta`, before the annihilator is picked.
    pub raw: [PhaseSpaceOperator; 3],
    pub ladder: [LadderPair; 3],
    pub signs: [ModeSign; 3],
    pub ground_energy: f64,
}

impl ModeSystem {
    pub fn from_params(params: TrapParams) -> Result<Self> {
        let lambda = build_lambda(params)?;
        let pairs = decompose(&lambda, &frequencies(params)?)?;
        Ok(build_ladder(&pairs))
    }

    pub fn annihilator(&self, k: usize) -> &PhaseSpaceOperator {
        &self.ladder[k].annihilation
    }

    pub fn creator(&self, k: usize) -> &PhaseSpaceOperator {
        &self.ladder[k].creation
    }

    /// Largest deviation of `[B_j, B_k^dag]` from `delta_jk` and of
    /// `[B_j, B_k]` from zero.
    pub fn commutator_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..3 {
            for k in 0..3 {
                let delta = if j == k { 1.0 } else { 0.0 };
                let mixed = commutator(self.annihilator(j), self.creator(k)) - delta;
                let same = commutator(self.annihilator(j), self.annihilator(k));
                worst = worst.max(mixed.norm()).max(same.norm());
            }
        }
        worst
    }

    /// `sum_k sigma_k w_k B_k^dag B_k + E_000` expanded in Weyl order.
    pub fn factorized_hamiltonian(&self) -> QuadraticForm {
        let w = self.freqs.as_array();
        (0..3).fold(QuadraticForm::constant(self.ground_energy), |acc, k| {
            let number = QuadraticForm::product(self.creator(k), self.annihilator(k));
            acc + number.scale(self.signs[k].value() * w[k])
        })
    }
}

/// Builds `L_k = f_k* . eta` and picks the annihilator of each mode from the
/// sign of `[L_k, L_k^dag]`: `B_k = L_k` when it is `+1`, `B_k = L_k^dag` when
/// it is `-1`.
pub fn build_ladder(pairs: &EigenPairSet) -> ModeSystem {
    let raw: [PhaseSpaceOperator; 3] =
        std::array::from_fn(|k| PhaseSpaceOperator::new(pairs.form(k).transpose().conjugate()));
    let signs = raw.map(|l| {
        if commutator(&l, &l.adjoint()).re > 0.0 {
            ModeSign::Positive
        } else {
            ModeSign::Negative
        }
    });
    let ladder = std::array::from_fn(|k| {
        let (a, c) = match signs[k] {
            ModeSign::Positive => (raw[k], raw[k].adjoint()),
            ModeSign::Negative => (raw[k].adjoint(), raw[k]),
        };
        LadderPair {
            annihilation: a,
            creation: c,
        }
    });
    let freqs = pairs.freqs();
    ModeSystem {
        freqs,
        raw,
        ladder,
        signs,
        ground_energy: freqs.ground_energy(),
    }
}

/// Largest coefficient mismatch between the trap Hamiltonian and its
/// factorized form `w1 N1 - w2 N2 + w3 N3 + E_000`.
pub fn hamiltonian_residual(system: &ModeSystem, params: TrapParams) -> f64 {
    system
        .factorized_hamiltonian()
        .max_abs_diff(&QuadraticForm::hamiltonian(params))
}

/// `E(n1, n2, n3) = w1 (n1 + 1/2) - w2 (n2 + 1/2) + w3 (n3 + 1/2)`.
pub fn energy(n: [u64; 3], freqs: &ModeFrequencies) -> f64 {
    freqs.omega1 * (n[0] as f64 + 0.5) - freqs.omega2 * (n[1] as f64 + 0.5)
        + freqs.omega3 * (n[2] as f64 + 0.5)
}
