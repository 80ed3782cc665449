//! Dense matrix exponential by scaling and squaring around a degree-13 Padé
//! approximant (Higham 2005).

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Padé(13) numerator coefficients `b_0 ..= b_13`.
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which the unscaled Padé(13) approximant is accurate to
/// double precision.
const THETA13: f64 = 5.371_920_351_148_152;

pub fn one_norm(a: &DMatrix<Complex64>) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(a)` for a square complex matrix.
///
/// # Panics
///
/// Panics if `a` is not square.
pub fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }

    let norm = one_norm(a);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * Complex64::from(2f64.powi(-squarings));

    let mut result = pade13(&scaled);
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

fn pade13(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    let b = |k: usize| Complex64::from(PADE13[k]);
    let ident = DMatrix::<Complex64>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * b(13) + &a4 * b(11) + &a2 * b(9);
    let u_tail = &a6 * b(7) + &a4 * b(5) + &a2 * b(3) + &ident * b(1);
    let u = a * (&a6 * u_inner + u_tail);

    let v_inner = &a6 * b(12) + &a4 * b(10) + &a2 * b(8);
    let v = &a6 * v_inner + &a6 * b(6) + &a4 * b(4) + &a2 * b(2) + &ident * b(0);

    let numer = &v + &u;
    let denom = &v - &u;
    denom
        .lu()
        .solve(&numer)
        .expect("Padé denominator is nonsingular for scaled arguments")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn taylor(a: &DMatrix<Complex64>, terms: usize) -> DMatrix<Complex64> {
        let n = a.nrows();
        let mut term = DMatrix::<Complex64>::identity(n, n);
        let mut sum = term.clone();
        for k in 1..terms {
            term = &term * a / Complex64::from(k as f64);
            sum += &term;
        }
        sum
    }

    #[test]
    fn agrees_with_taylor_series_for_small_norm() {
        let a = DMatrix::from_fn(4, 4, |i, j| {
            Complex64::new(0.1 * (i as f64 - j as f64), 0.05 * (i + 2 * j) as f64)
        });
        let diff = expm(&a) - taylor(&a, 40);
        assert!(diff.iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn rotation_generator() {
        // exp([[0, -t], [t, 0]]) is a rotation by t, exercised past THETA13.
        let t = 40.0;
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -t, t, 0.0].map(Complex64::from));
        let e = expm(&a);
        assert!((e[(0, 0)].re - t.cos()).abs() < 1e-12);
        assert!((e[(1, 0)].re - t.sin()).abs() < 1e-12);
        assert!((e[(0, 1)].re + t.sin()).abs() < 1e-12);
    }

    #[test]
    fn diagonal_is_exponentiated_entrywise() {
        let d = [
            Complex64::new(-3.0, 1.0),
            Complex64::new(0.5, -7.0),
            Complex64::new(12.0, 0.0),
        ];
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&d));
        let e = expm(&a);
        for (k, z) in d.iter().enumerate() {
            assert!(((e[(k, k)] - z.exp()) / z.exp()).norm() < 1e-13);
        }
    }
}
