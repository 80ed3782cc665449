//! The extremal state, coherent-state labels and wavefunctions.
//!
//! Every annihilator is written as `B_j = i P . alpha_j + R . beta_j`. The
//! extremal wavefunction `c exp(-r^T a r / 2)` is annihilated by all three
//! when `a alpha_j = beta_j`. Coherent states are obtained by displacing it:
//! `D(z) = exp(i (Sigma . R - Gamma . P)) = C(z) exp(i Sigma . R) exp(-i Gamma . P)`.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{central_gradient, Grid3};
use crate::ladder::ModeSystem;
use crate::trap::TrapParams;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Condition number above which the alpha matrix counts as singular.
pub const SINGULAR_CONDITION: f64 = 1e12;

/// Momentum (`alpha_j`) and position (`beta_j`) parts of the annihilators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderVectors {
    pub alpha: [Vector3<Complex64>; 3],
    pub beta: [Vector3<Complex64>; 3],
}

impl LadderVectors {
    /// Closed forms for the Penning trap, independent of the eigenform route.
    pub fn closed_form(params: TrapParams) -> Result<Self> {
        params.ensure_stable()?;
        let q = params.radial_root();
        let w = params.axial_root();
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let k = 0.5 / q.sqrt();
        let alpha = [
            Vector3::new(c(k, 0.0), c(0.0, -k), c(0.0, 0.0)),
            Vector3::new(c(-k, 0.0), c(0.0, -k), c(0.0, 0.0)),
            Vector3::new(
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, -1.0 / (2.0f64.sqrt() * w.sqrt())),
            ),
        ];
        let scale = [q, q, w];
        let beta = std::array::from_fn(|j| alpha[j] * Complex64::from(scale[j]));
        Ok(Self { alpha, beta })
    }

    /// Applies `B_j - eigenvalue` to `psi` at `r`, with `P = -i grad`
    /// evaluated by central differences of step `h`.
    pub fn apply_fd<F>(
        &self,
        j: usize,
        eigenvalue: Complex64,
        psi: &F,
        r: &Vector3<f64>,
        h: f64,
    ) -> Complex64
    where
        F: Fn(&Vector3<f64>) -> Complex64 + ?Sized,
    {
        // i P . alpha = alpha . grad
        let grad = central_gradient(psi, r, h);
        let kinetic: Complex64 = (0..3).map(|k| self.alpha[j][k] * grad[k]).sum();
        let potential: Complex64 = (0..3).map(|k| self.beta[j][k] * r[k]).sum();
        kinetic + (potential - eigenvalue) * psi(r)
    }

    /// Relative residual `||(B_j - eigenvalue) psi|| / ||psi||`, with both
    /// norms taken as discrete sums over `grid`.
    pub fn residual_on_grid<F>(
        &self,
        j: usize,
        eigenvalue: Complex64,
        psi: &F,
        grid: &Grid3,
        h: f64,
    ) -> f64
    where
        F: Fn(&Vector3<f64>) -> Complex64 + Sync,
    {
        let (num, den) = grid
            .points()
            .par_iter()
            .map(|r| {
                (
                    self.apply_fd(j, eigenvalue, psi, r, h).norm_sqr(),
                    psi(r).norm_sqr(),
                )
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        (num / den).sqrt()
    }
}

/// Splits each annihilator into its momentum and position parts.
pub fn extract_alpha_beta(system: &ModeSystem) -> LadderVectors {
    let alpha = std::array::from_fn(|j| system.annihilator(j).momentum_part() / I);
    let beta = std::array::from_fn(|j| system.annihilator(j).position_part());
    LadderVectors { alpha, beta }
}

/// `exp(-r^T a r / 2)` scaled to unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub a: Matrix3<Complex64>,
    pub norm_const: f64,
}

impl GaussianState {
    pub fn phi0(&self, r: &Vector3<f64>) -> Complex64 {
        let rc = r.map(Complex64::from);
        let exponent = (rc.transpose() * self.a * rc)[(0, 0)];
        (exponent * -0.5).exp() * self.norm_const
    }

    /// Covariance `(2 Re a)^-1` of the density `|phi0|^2`.
    pub fn position_covariance(&self) -> Matrix3<f64> {
        let re = self.a.map(|z| z.re);
        (re * 2.0)
            .try_inverse()
            .expect("real part of a is positive definite")
    }

    /// Standard deviations of `|phi0|^2` along each axis.
    pub fn widths(&self) -> Vector3<f64> {
        self.position_covariance().diagonal().map(f64::sqrt)
    }
}

/// Solves `a [alpha_1 alpha_2 alpha_3] = [beta_1 beta_2 beta_3]` and fixes the
/// normalization `c = det(Re a)^(1/4) pi^(-3/4)`, real and positive.
pub fn solve_gaussian(vectors: &LadderVectors) -> Result<GaussianState> {
    let alphas = Matrix3::from_columns(&vectors.alpha);
    let betas = Matrix3::from_columns(&vectors.beta);
    let sv = alphas.singular_values();
    let condition = sv.max() / sv.min();
    if condition.is_nan() || condition > SINGULAR_CONDITION {
        return Err(Error::SingularAlpha { condition });
    }
    let inverse = alphas.try_inverse().ok_or(Error::SingularAlpha {
        condition: f64::INFINITY,
    })?;
    let a = betas * inverse;

    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let asymmetry = (a - a.transpose())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if asymmetry > 1e-12 * scale {
        return Err(Error::AsymmetricGaussian { asymmetry });
    }
    let re = a.map(|z| z.re);
    let re = (re + re.transpose()) * 0.5;
    if re.cholesky().is_none() {
        return Err(Error::NotNormalizable);
    }
    let norm_const = re.determinant().powf(0.25) * PI.powf(-0.75);
    Ok(GaussianState { a, norm_const })
}

/// Extremal-state wavefunction `c exp(-r^T a r / 2)`.
pub fn phi0(state: &GaussianState, r: &Vector3<f64>) -> Complex64 {
    state.phi0(r)
}

/// `Gamma = 2 Re sum_j z_j alpha_j*` and `Sigma = 2 Im sum_j z_j beta_j*`,
/// read off from `sum_j z_j B_j^dag - z_j* B_j = i (Sigma . R - Gamma . P)`.
pub fn displacement_from_ladder(
    z: [Complex64; 3],
    vectors: &LadderVectors,
) -> (Vector3<f64>, Vector3<f64>) {
    let mut gamma = Vector3::zeros();
    let mut sigma = Vector3::zeros();
    for ((alpha, beta), zj) in vectors.alpha.iter().zip(&vectors.beta).zip(z) {
        gamma += alpha.conjugate().map(|x| 2.0 * (x * zj).re);
        sigma += beta.conjugate().map(|x| 2.0 * (x * zj).im);
    }
    (gamma, sigma)
}

/// A coherent-state label `z = (z1, z2, z3)` with the position shift `Gamma`,
/// momentum kick `Sigma` and phase `C(z) = exp(-i Gamma . Sigma / 2)` of its
/// displacement operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentLabel {
    pub z: [Complex64; 3],
    pub params: TrapParams,
    pub gamma: Vector3<f64>,
    pub sigma: Vector3<f64>,
    pub phase: Complex64,
}

pub fn coherent_label(z: [Complex64; 3], params: TrapParams) -> Result<CoherentLabel> {
    params.ensure_stable()?;
    let TrapParams { b, v } = params;
    let radial = (b * b + v).powf(0.25);
    let axial_gamma = (-v / 2.0).powf(-0.25);
    let axial_sigma = (-8.0 * v).powf(0.25);
    let [z1, z2, z3] = z;
    let gamma = Vector3::new(
        (z1 - z2).re / radial,
        -(z1 + z2).im / radial,
        -axial_gamma * z3.im,
    );
    let sigma = Vector3::new(
        radial * (z1 - z2).im,
        radial * (z1 + z2).re,
        axial_sigma * z3.re,
    );
    let phase = Complex64::new(0.0, -0.5 * gamma.dot(&sigma)).exp();
    Ok(CoherentLabel {
        z,
        params,
        gamma,
        sigma,
        phase,
    })
}

impl CoherentLabel {
    pub fn vacuum(params: TrapParams) -> Result<Self> {
        coherent_label([Complex64::from(0.0); 3], params)
    }

    pub fn modulus_sq(&self) -> [f64; 3] {
        self.z.map(|z| z.norm_sqr())
    }

    /// The coordinate shift written directly in terms of `z`:
    /// `phi0(x - Re[z1 - z2]/(b^2+v)^(1/4), y + Im[z1 + z2]/(b^2+v)^(1/4), z + (-2/v)^(1/4) Im[z3])`
    /// evaluates `phi0` at `r - shift`.
    pub fn coordinate_shift(&self) -> Vector3<f64> {
        let TrapParams { b, v } = self.params;
        let radial = (b * b + v).powf(0.25);
        let [z1, z2, z3] = self.z;
        Vector3::new(
            (z1 - z2).re / radial,
            -(z1 + z2).im / radial,
            -(-2.0 / v).powf(0.25) * z3.im,
        )
    }

    /// `C(z)` expanded in real and imaginary parts of the labels:
    /// `exp{i (Re z1 Im z2 + Re z2 Im z1 + Re z3 Im z3)}`.
    pub fn phase_expanded(&self) -> Complex64 {
        let [z1, z2, z3] = self.z;
        Complex64::new(0.0, z1.re * z2.im + z2.re * z1.im + z3.re * z3.im).exp()
    }

    /// `F(r) = exp(i Sigma . r)`.
    pub fn momentum_kick(&self, r: &Vector3<f64>) -> Complex64 {
        Complex64::new(0.0, self.sigma.dot(r)).exp()
    }
}

/// Coherent-state wavefunction `C(z) F(r) phi0(r - Gamma)`.
pub fn phi_z(state: &GaussianState, label: &CoherentLabel, r: &Vector3<f64>) -> Complex64 {
    label.phase * label.momentum_kick(r) * state.phi0(&(r - label.gamma))
}

/// Fock-basis coefficients `c_{n1 n2 n3}` of a coherent state for
/// `0 <= n_j <= cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct AocsTable {
    cutoff: usize,
    coeffs: Vec<Complex64>,
    norm_deficit: f64,
}

impl AocsTable {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn index(&self, n: [usize; 3]) -> usize {
        let d = self.dim();
        (n[0] * d + n[1]) * d + n[2]
    }

    pub fn get(&self, n: [usize; 3]) -> Complex64 {
        self.coeffs[self.index(n)]
    }

    /// Flat coefficients with `n1` slowest and `n3` fastest.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `1 - sum |c|^2` over the table, computed from the Poisson tails so
    /// that tiny deficits are not lost to cancellation.
    pub fn norm_deficit(&self) -> f64 {
        self.norm_deficit
    }
}

/// `c_n = exp(-(|z1|^2 + |z2|^2 + |z3|^2)/2) z1^n1 z2^n2 z3^n3 / sqrt(n1! n2! n3!)`.
pub fn aocs_coefficients(label: &CoherentLabel, cutoff: usize) -> Result<AocsTable> {
    for (mode, x) in label.modulus_sq().into_iter().enumerate() {
        if x > cutoff as f64 {
            return Err(Error::OverflowGuard {
                mode: mode + 1,
                modulus_sq: x,
                cutoff,
            });
        }
    }
    let factors = label.z.map(|z| single_mode_coefficients(z, cutoff));
    let d = cutoff + 1;
    let mut coeffs = Vec::with_capacity(d * d * d);
    for c1 in &factors[0] {
        for c2 in &factors[1] {
            for c3 in &factors[2] {
                coeffs.push(c1 * c2 * c3);
            }
        }
    }
    let log_kept: f64 = label
        .modulus_sq()
        .into_iter()
        .map(|x| (-poisson_tail(x, cutoff)).ln_1p())
        .sum();
    Ok(AocsTable {
        cutoff,
        coeffs,
        norm_deficit: -log_kept.exp_m1(),
    })
}

/// `exp(-|z|^2/2) z^n / sqrt(n!)` by the recurrence `c_{n+1} sqrt(n+1) = z c_n`.
pub fn single_mode_coefficients(z: Complex64, cutoff: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(cutoff + 1);
    let mut c = Complex64::from((-0.5 * z.norm_sqr()).exp());
    out.push(c);
    for n in 0..cutoff {
        c = c * z / ((n + 1) as f64).sqrt();
        out.push(c);
    }
    out
}

/// `exp(-x) sum_{n > cutoff} x^n / n!`.
fn poisson_tail(x: f64, cutoff: usize) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    // log of the first omitted term
    let ln_fact: f64 = (1..=cutoff + 1).map(|k| (k as f64).ln()).sum();
    let mut term = (-x + (cutoff + 1) as f64 * x.ln() - ln_fact).exp();
    let mut sum = 0.0;
    let mut n = cutoff + 1;
    while term > 1e-18 * sum || sum == 0.0 {
        sum += term;
        n += 1;
        term *= x / n as f64;
        if term == 0.0 {
            break;
        }
    }
    sum.min(1.0)
}
