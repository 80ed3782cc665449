//! Trap parameters, the phase-space generator matrix and the analytic mode
//! frequencies.
//!
//! Units have the mass and the reduced Planck constant set to one. The
//! operator vector is always ordered as `eta = (X, Y, Z, Px, Py, Pz)`.

use std::fmt;

use nalgebra::Matrix6;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Magnetic parameter `b` and quadrupole parameter `v` of an ideal Penning
/// trap.
///
/// The Hamiltonian is
/// `H = P^2/2 + b Lz + [(b^2 + v)(X^2 + Y^2) - 2 v Z^2] / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapParams {
    pub b: f64,
    pub v: f64,
}

/// Which confinement condition a parameter pair violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Instability {
    NonFinite,
    /// `b <= 0`; only the positive-field branch is supported.
    BNonPositive,
    /// `v >= 0`; no axial confinement.
    VNonnegative,
    /// `b^2 + v <= 0`; the magnetic field cannot overcome the radial repulsion.
    /// The boundary `b^2 + v = 0` lands here because the cyclotron and magnetron
    /// modes merge there.
    Radial,
}

impl Instability {
    pub fn as_str(self) -> &'static str {
        match self {
            Instability::NonFinite => "non_finite",
            Instability::BNonPositive => "b_nonpositive",
            Instability::VNonnegative => "v_nonnegative",
            Instability::Radial => "radial",
        }
    }
}

impl fmt::Display for Instability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self {
            Instability::NonFinite => "parameters must be finite",
            Instability::BNonPositive => "b must be positive",
            Instability::VNonnegative => "v must be negative for axial confinement",
            Instability::Radial => "b^2 + v must be positive for radial confinement",
        };
        write!(f, "{what} [{}]", self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityVerdict {
    Stable,
    Unstable(Instability),
}

impl StabilityVerdict {
    pub fn is_stable(self) -> bool {
        matches!(self, StabilityVerdict::Stable)
    }
}

impl TrapParams {
    pub fn new(b: f64, v: f64) -> Self {
        Self { b, v }
    }

    /// Classifies the pair with strict inequalities on the exact inputs.
    pub fn validate(&self) -> StabilityVerdict {
        let Self { b, v } = *self;
        if !b.is_finite() || !v.is_finite() {
            StabilityVerdict::Unstable(Instability::NonFinite)
        } else if b <= 0.0 {
            StabilityVerdict::Unstable(Instability::BNonPositive)
        } else if v >= 0.0 {
            StabilityVerdict::Unstable(Instability::VNonnegative)
        } else if b * b + v <= 0.0 {
            StabilityVerdict::Unstable(Instability::Radial)
        } else {
            StabilityVerdict::Stable
        }
    }

    pub fn ensure_stable(&self) -> Result<()> {
        match self.validate() {
            StabilityVerdict::Stable => Ok(()),
            StabilityVerdict::Unstable(why) => Err(Error::Unstable(why)),
        }
    }

    /// `sqrt(b^2 + v)`, half the splitting between cyclotron and magnetron.
    pub(crate) fn radial_root(&self) -> f64 {
        (self.b * self.b + self.v).sqrt()
    }

    /// `sqrt(-2 v)`, the axial frequency.
    pub(crate) fn axial_root(&self) -> f64 {
        (-2.0 * self.v).sqrt()
    }
}

/// The real 6x6 matrix `Lambda` with `[iH, eta] = Lambda eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorMatrix {
    params: TrapParams,
    entries: Matrix6<f64>,
}

impl GeneratorMatrix {
    pub fn params(&self) -> TrapParams {
        self.params
    }

    pub fn as_matrix(&self) -> &Matrix6<f64> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    /// Coefficients `[c0, c1, ..., c6]` of `det(Lambda - lambda I) = sum c_k lambda^k`,
    /// obtained numerically with the Faddeev-LeVerrier recursion.
    pub fn characteristic_polynomial(&self) -> [f64; 7] {
        faddeev_leverrier(&self.entries)
    }
}

/// Builds `Lambda` for stable parameters.
pub fn build_lambda(params: TrapParams) -> Result<GeneratorMatrix> {
    params.ensure_stable()?;
    let TrapParams { b, v } = params;
    let k = -b * b - v;
    #[rustfmt::skip]
    let entries = Matrix6::new(
        0.0, -b,  0.0,     1.0, 0.0, 0.0,
        b,   0.0, 0.0,     0.0, 1.0, 0.0,
        0.0, 0.0, 0.0,     0.0, 0.0, 1.0,
        k,   0.0, 0.0,     0.0, -b,  0.0,
        0.0, k,   0.0,     b,   0.0, 0.0,
        0.0, 0.0, 2.0 * v, 0.0, 0.0, 0.0,
    );
    Ok(GeneratorMatrix { params, entries })
}

/// Closed-form characteristic polynomial
/// `lambda^6 + 4 b^2 lambda^4 - v (8 b^2 + 3 v) lambda^2 - 2 v^3`,
/// returned in ascending powers.
pub fn characteristic_coefficients(params: TrapParams) -> [f64; 7] {
    let TrapParams { b, v } = params;
    [
        -2.0 * v * v * v,
        0.0,
        -v * (8.0 * b * b + 3.0 * v),
        0.0,
        4.0 * b * b,
        0.0,
        1.0,
    ]
}

fn faddeev_leverrier(a: &Matrix6<f64>) -> [f64; 7] {
    // det(lambda I - A) = sum c_k lambda^k with c_6 = 1; det(A - lambda I)
    // differs by (-1)^6 = 1.
    let n = 6;
    let mut coeffs = [0.0; 7];
    coeffs[n] = 1.0;
    let mut m = Matrix6::<f64>::zeros();
    for k in 1..=n {
        m = a * m + Matrix6::identity() * coeffs[n + 1 - k];
        let am = a * m;
        coeffs[n - k] = -am.trace() / k as f64;
    }
    coeffs
}

/// Modified-cyclotron, magnetron and axial frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeFrequencies {
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
}

impl ModeFrequencies {
    pub fn as_array(&self) -> [f64; 3] {
        [self.omega1, self.omega2, self.omega3]
    }

    /// Energy of the extremal state, `(w1 - w2 + w3) / 2`.
    pub fn ground_energy(&self) -> f64 {
        0.5 * (self.omega1 - self.omega2 + self.omega3)
    }
}

pub fn frequencies(params: TrapParams) -> Result<ModeFrequencies> {
    params.ensure_stable()?;
    let root = params.radial_root();
    Ok(ModeFrequencies {
        omega1: params.b + root,
        omega2: params.b - root,
        omega3: params.axial_root(),
    })
}
