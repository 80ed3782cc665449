//! Truncated Fock-space representation of the three trap modes.
//!
//! Operators are kept as sums of Kronecker products of per-mode
//! `(N+1) x (N+1)` factors and only assembled into dense `(N+1)^3` matrices
//! on request. The basis index of `|n1, n2, n3>` is `(n1 (N+1) + n2)(N+1) + n3`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::states::CoherentLabel;
use crate::trap::ModeFrequencies;

/// Largest supported per-mode cutoff.
pub const MAX_CUTOFF: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockBudget {
    /// Cap on `(N+1)^3`.
    pub max_states: usize,
    /// Cap on `(N+1)^6`, the entry count of an assembled operator.
    pub max_dense_entries: usize,
}

impl Default for FockBudget {
    fn default() -> Self {
        let d = MAX_CUTOFF + 1;
        Self {
            max_states: d * d * d,
            max_dense_entries: 1 << 24,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    cutoff: usize,
    budget: FockBudget,
}

impl FockSpace {
    pub fn new(cutoff: usize) -> Result<Self> {
        Self::with_budget(cutoff, FockBudget::default())
    }

    pub fn with_budget(cutoff: usize, budget: FockBudget) -> Result<Self> {
        let requested = (cutoff + 1).checked_pow(3).unwrap_or(usize::MAX);
        if requested > budget.max_states {
            return Err(Error::Capacity {
                requested,
                budget: budget.max_states,
            });
        }
        Ok(Self { cutoff, budget })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn mode_dim(&self) -> usize {
        self.cutoff + 1
    }

    pub fn dim(&self) -> usize {
        self.mode_dim().pow(3)
    }

    pub fn index(&self, n: [usize; 3]) -> usize {
        let d = self.mode_dim();
        (n[0] * d + n[1]) * d + n[2]
    }

    pub fn occupations(&self, index: usize) -> [usize; 3] {
        let d = self.mode_dim();
        [index / (d * d), (index / d) % d, index % d]
    }

    pub fn vacuum(&self) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.dim());
        v[0] = Complex64::from(1.0);
        v
    }
}

/// Single-mode annihilator: `sqrt(n)` on the superdiagonal.
pub fn annihilation_matrix(cutoff: usize) -> DMatrix<Complex64> {
    let d = cutoff + 1;
    DMatrix::from_fn(d, d, |i, j| {
        if j == i + 1 {
            Complex64::from((j as f64).sqrt())
        } else {
            Complex64::from(0.0)
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
struct Term {
    coeff: Complex64,
    /// `None` is the identity on that mode.
    factors: [Option<DMatrix<Complex64>>; 3],
}

/// An operator on the truncated three-mode space, stored as a sum of
/// Kronecker products.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    space: FockSpace,
    terms: Vec<Term>,
}

impl FockOperator {
    pub fn identity(space: FockSpace) -> Self {
        Self::scalar(space, Complex64::from(1.0))
    }

    pub fn scalar(space: FockSpace, c: Complex64) -> Self {
        Self {
            space,
            terms: vec![Term {
                coeff: c,
                factors: [None, None, None],
            }],
        }
    }

    /// `matrix` acting on `mode` (0-based), identity elsewhere.
    pub fn single_mode(space: FockSpace, mode: usize, matrix: DMatrix<Complex64>) -> Self {
        assert_eq!(matrix.nrows(), space.mode_dim());
        let mut factors = [None, None, None];
        factors[mode] = Some(matrix);
        Self {
            space,
            terms: vec![Term {
                coeff: Complex64::from(1.0),
                factors,
            }],
        }
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn scale(mut self, k: Complex64) -> Self {
        for t in &mut self.terms {
            t.coeff *= k;
        }
        self
    }

    pub fn plus(mut self, other: &Self) -> Self {
        self.terms.extend(other.terms.iter().cloned());
        self
    }

    pub fn adjoint(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: t.coeff.conj(),
                factors: t.factors.clone().map(|f| f.map(|m| m.adjoint())),
            })
            .collect();
        Self {
            space: self.space,
            terms,
        }
    }

    /// Operator product `self * other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let factors = std::array::from_fn(|m| match (&a.factors[m], &b.factors[m]) {
                    (None, None) => None,
                    (Some(x), None) => Some(x.clone()),
                    (None, Some(y)) => Some(y.clone()),
                    (Some(x), Some(y)) => Some(x * y),
                });
                terms.push(Term {
                    coeff: a.coeff * b.coeff,
                    factors,
                });
            }
        }
        Self {
            space: self.space,
            terms,
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other)
            .plus(&other.compose(self).scale(Complex64::from(-1.0)))
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        assert_eq!(v.len(), self.space.dim());
        let mut out = DVector::zeros(v.len());
        for t in &self.terms {
            let mut w = v.clone();
            for (mode, f) in t.factors.iter().enumerate() {
                if let Some(m) = f {
                    w = apply_on_mode(self.space.mode_dim(), mode, m, &w);
                }
            }
            out.axpy(t.coeff, &w, Complex64::from(1.0));
        }
        out
    }

    /// Dense `(N+1)^3 x (N+1)^3` matrix.
    pub fn assemble(&self) -> Result<DMatrix<Complex64>> {
        let n = self.space.dim();
        let entries = n.saturating_mul(n);
        let budget = self.space.budget.max_dense_entries;
        if entries > budget {
            return Err(Error::Capacity {
                requested: entries,
                budget,
            });
        }
        let d = self.space.mode_dim();
        let eye = DMatrix::<Complex64>::identity(d, d);
        let mut out = DMatrix::zeros(n, n);
        for t in &self.terms {
            let f = |m: usize| t.factors[m].as_ref().unwrap_or(&eye);
            out += f(0).kronecker(&f(1).kronecker(f(2))) * t.coeff;
        }
        Ok(out)
    }
}

fn apply_on_mode(
    d: usize,
    mode: usize,
    m: &DMatrix<Complex64>,
    v: &DVector<Complex64>,
) -> DVector<Complex64> {
    let stride = d.pow(2 - mode as u32);
    let mut out = DVector::zeros(v.len());
    for base in 0..v.len() {
        // base enumerates indices whose `mode` digit is zero.
        if !(base / stride).is_multiple_of(d) {
            continue;
        }
        for i in 0..d {
            let mut acc = Complex64::from(0.0);
            for j in 0..d {
                let mij = m[(i, j)];
                if mij != Complex64::from(0.0) {
                    acc += mij * v[base + j * stride];
                }
            }
            out[base + i * stride] = acc;
        }
    }
    out
}

/// Ladder, number and Hamiltonian operators of the truncated trap.
#[derive(Debug, Clone)]
pub struct FockOperators {
    pub space: FockSpace,
    pub freqs: ModeFrequencies,
    pub annihilation: [FockOperator; 3],
    pub creation: [FockOperator; 3],
    pub number: [FockOperator; 3],
    /// `w1 N1 - w2 N2 + w3 N3 + E_000`.
    pub hamiltonian: FockOperator,
}

impl FockOperators {
    /// Diagonal of the Hamiltonian, `E(n1, n2, n3)` in basis order.
    pub fn hamiltonian_diagonal(&self) -> DVector<f64> {
        let w = self.freqs.as_array();
        let signs = [1.0, -1.0, 1.0];
        DVector::from_fn(self.space.dim(), |idx, _| {
            let n = self.space.occupations(idx);
            self.freqs.ground_energy() + (0..3).map(|k| signs[k] * w[k] * n[k] as f64).sum::<f64>()
        })
    }

    /// `<psi|H|psi>` and `<psi|H^2|psi> - <psi|H|psi>^2`.
    pub fn energy_statistics(&self, psi: &DVector<Complex64>) -> (f64, f64) {
        let h_psi = self.hamiltonian.apply(psi);
        let mean = psi.dotc(&h_psi).re;
        let second = h_psi.norm_squared();
        (mean, second - mean * mean)
    }
}

pub fn build_fock(freqs: &ModeFrequencies, cutoff: usize) -> Result<FockOperators> {
    build_fock_in(freqs, FockSpace::new(cutoff)?)
}

pub fn build_fock_in(freqs: &ModeFrequencies, space: FockSpace) -> Result<FockOperators> {
    let a = annihilation_matrix(space.cutoff());
    let annihilation: [FockOperator; 3] =
        std::array::from_fn(|k| FockOperator::single_mode(space, k, a.clone()));
    let creation = annihilation.clone().map(|op| op.adjoint());
    let number: [FockOperator; 3] = std::array::from_fn(|k| creation[k].compose(&annihilation[k]));
    let w = freqs.as_array();
    let signs = [1.0, -1.0, 1.0];
    let hamiltonian = (0..3).fold(
        FockOperator::scalar(space, Complex64::from(freqs.ground_energy())),
        |acc, k| acc.plus(&number[k].clone().scale(Complex64::from(signs[k] * w[k]))),
    );
    Ok(FockOperators {
        space,
        freqs: *freqs,
        annihilation,
        creation,
        number,
        hamiltonian,
    })
}

/// `D(z)|0,0,0>` with each `D_j = exp(z_j a^dag - z_j* a)` exponentiated in
/// its own truncated mode and the three results combined by Kronecker product.
pub fn docs_vector(label: &CoherentLabel, cutoff: usize) -> Result<DVector<Complex64>> {
    docs_vector_in(label, FockSpace::new(cutoff)?)
}

pub fn docs_vector_in(label: &CoherentLabel, space: FockSpace) -> Result<DVector<Complex64>> {
    let a = annihilation_matrix(space.cutoff());
    let ad = a.adjoint();
    let columns = label.z.map(|z| {
        let generator = &ad * z - &a * z.conj();
        expm(&generator).column(0).into_owned()
    });
    let d = space.mode_dim();
    let mut out = DVector::zeros(space.dim());
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                out[space.index([i, j, k])] = columns[0][i] * columns[1][j] * columns[2][k];
            }
        }
    }
    Ok(out)
}

/// `max_j ||(B_j - z_j) zeta||` over components with `n_j < N`; the top level
/// of each mode always violates the eigenrelation after truncation and is
/// excluded.
pub fn eigenrelation_residual(label: &CoherentLabel, cutoff: usize) -> Result<f64> {
    let space = FockSpace::new(cutoff)?;
    let psi = docs_vector_in(label, space)?;
    let a = annihilation_matrix(cutoff);
    let mut worst: f64 = 0.0;
    for j in 0..3 {
        let op = FockOperator::single_mode(space, j, a.clone());
        let r = op.apply(&psi) - &psi * label.z[j];
        let sq: f64 = r
            .iter()
            .enumerate()
            .filter(|(idx, _)| space.occupations(*idx)[j] < cutoff)
            .map(|(_, x)| x.norm_sqr())
            .sum();
        worst = worst.max(sq.sqrt());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::coherent_label;
    use crate::trap::{frequencies, TrapParams};

    fn reference() -> (TrapParams, ModeFrequencies) {
        let p = TrapParams::new(1.0, -0.5);
        (p, frequencies(p).unwrap())
    }

    #[test]
    fn truncated_single_mode_commutator() {
        let n = 6;
        let a = annihilation_matrix(n);
        assert_eq!(a[(2, 3)], Complex64::from(3f64.sqrt()));
        assert_eq!(a.iter().filter(|x| x.norm() != 0.0).count(), n);
        let c = &a * a.adjoint() - a.adjoint() * &a;
        for i in 0..=n {
            for j in 0..=n {
                let want = match (i == j, i == n) {
                    (true, true) => -(n as f64),
                    (true, false) => 1.0,
                    _ => 0.0,
                };
                assert!((c[(i, j)] - want).norm() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn hamiltonian_is_the_intrinsic_spectrum() {
        let (_, w) = reference();
        let ops = build_fock(&w, 2).unwrap();
        let h = ops.hamiltonian.assemble().unwrap();
        let idx = ops.space.index([0, 1, 0]);
        assert!((h[(idx, idx)].re - 0.914_213_562_373_095).abs() < 1e-12);
        let diag = ops.hamiltonian_diagonal();
        for i in 0..27 {
            for j in 0..27 {
                let want = if i == j { diag[i] } else { 0.0 };
                assert!((h[(i, j)] - want).norm() < 1e-12);
            }
        }
        let e = crate::ladder::energy([2, 1, 0], &w);
        assert!((diag[ops.space.index([2, 1, 0])] - e).abs() < 1e-12);
    }

    #[test]
    fn mixed_commutators_vanish_exactly() {
        let (_, w) = reference();
        let ops = build_fock(&w, 5).unwrap();
        let c = ops.annihilation[0]
            .commutator(&ops.creation[1])
            .assemble()
            .unwrap();
        assert!(c.iter().all(|z| *z == Complex64::from(0.0)));
        let nn = ops.number[0].commutator(&ops.number[2]).assemble().unwrap();
        assert!(nn.iter().all(|z| *z == Complex64::from(0.0)));
    }

    #[test]
    fn apply_matches_assembled() {
        let (_, w) = reference();
        let ops = build_fock(&w, 3).unwrap();
        let v = DVector::from_fn(64, |i, _| {
            Complex64::new(i as f64 * 0.1, 1.0 - i as f64 * 0.02)
        });
        for op in ops
            .annihilation
            .iter()
            .chain(std::iter::once(&ops.hamiltonian))
        {
            let dense = op.assemble().unwrap();
            assert!((dense * &v - op.apply(&v)).camax() < 1e-12);
        }
    }

    #[test]
    fn capacity_limits() {
        assert!(matches!(
            FockSpace::new(MAX_CUTOFF + 1),
            Err(Error::Capacity { .. })
        ));
        let (_, w) = reference();
        let ops = build_fock(&w, 30).unwrap();
        assert!(matches!(
            ops.hamiltonian.assemble(),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn vacuum_docs() {
        let (p, _) = reference();
        let vac = CoherentLabel::vacuum(p).unwrap();
        let psi = docs_vector(&vac, 4).unwrap();
        assert_eq!(psi, FockSpace::new(4).unwrap().vacuum());
        assert_eq!(eigenrelation_residual(&vac, 4).unwrap(), 0.0);
    }

    #[test]
    fn docs_is_an_eigenstate() {
        let (p, _) = reference();
        let z = [
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(-0.3, 0.0),
        ];
        let l = coherent_label(z, p).unwrap();
        assert!(eigenrelation_residual(&l, 30).unwrap() < 1e-10);
        assert!((docs_vector(&l, 30).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_cutoff_breaks_the_eigenrelation() {
        let (p, _) = reference();
        let l = coherent_label([Complex64::new(1.0, 0.0), 0.0.into(), 0.0.into()], p).unwrap();
        assert!(eigenrelation_residual(&l, 3).unwrap() > 1e-3);
    }
}
