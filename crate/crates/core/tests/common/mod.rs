#![allow(dead_code)]

use nalgebra::Vector3;
use penning::grid::Grid3;
use penning::{phi_z, CoherentLabel, Complex64, Trap, TrapParams};
use rand::Rng;

/// `b` in `[0.2, 3]` and `v = -frac b^2` with `frac` away from both stability
/// edges.
pub fn random_params<R: Rng>(rng: &mut R) -> TrapParams {
    let b = rng.random_range(0.2..3.0);
    let frac = rng.random_range(0.05..0.95);
    TrapParams::new(b, -frac * b * b)
}

/// Three labels drawn uniformly from the disk of radius `max_modulus`.
pub fn random_z<R: Rng>(rng: &mut R, max_modulus: f64) -> [Complex64; 3] {
    std::array::from_fn(|_| {
        let r = max_modulus * rng.random_range(0.0f64..1.0).sqrt();
        Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
    })
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Moments of `phi_z` by direct summation on a grid.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub norm: f64,
    pub mean_r: [f64; 3],
    pub mean_p: [f64; 3],
    pub var_r: [f64; 3],
    pub var_p: [f64; 3],
}

impl Quadrature {
    pub fn uncertainty_products(&self) -> [f64; 3] {
        std::array::from_fn(|j| (self.var_r[j] * self.var_p[j]).sqrt())
    }
}

/// Fourth-order central difference.
fn gradient4<F: Fn(&Vector3<f64>) -> Complex64>(f: &F, r: &Vector3<f64>, h: f64) -> [Complex64; 3] {
    std::array::from_fn(|k| {
        let mut e = Vector3::zeros();
        e[k] = h;
        (f(&(r - 2.0 * e)) - f(&(r + 2.0 * e)) + (f(&(r + e)) - f(&(r - e))) * 8.0) / (12.0 * h)
    })
}

/// Integrates `|phi|^2`, `r |phi|^2`, `phi* (-i grad) phi` and `|grad phi|^2`
/// over a box of `+-8` widths around `Gamma`, two samples per width.
pub fn quadrature_moments(trap: &Trap, label: &CoherentLabel) -> Quadrature {
    let grid = Grid3::around(label.gamma, trap.ground.widths(), 8.0, 2.0);
    let dv = grid.cell_volume();
    let psi = |r: &Vector3<f64>| phi_z(&trap.ground, label, r);
    let mut norm = 0.0;
    let mut r1 = [0.0; 3];
    let mut r2 = [0.0; 3];
    let mut p1 = [0.0; 3];
    let mut p2 = [0.0; 3];
    for r in grid.points() {
        let phi = psi(&r);
        let rho = phi.norm_sqr();
        let g = gradient4(&psi, &r, 1e-3);
        norm += rho;
        for j in 0..3 {
            r1[j] += rho * r[j];
            r2[j] += rho * r[j] * r[j];
            p1[j] += (phi.conj() * g[j]).im;
            p2[j] += g[j].norm_sqr();
        }
    }
    let norm_total = norm * dv;
    let mean = |s: [f64; 3]| s.map(|x| x * dv / norm_total);
    let (mean_r, sq_r, mean_p, sq_p) = (mean(r1), mean(r2), mean(p1), mean(p2));
    Quadrature {
        norm: norm_total,
        mean_r,
        mean_p,
        var_r: std::array::from_fn(|j| sq_r[j] - mean_r[j] * mean_r[j]),
        var_p: std::array::from_fn(|j| sq_p[j] - mean_p[j] * mean_p[j]),
    }
}

/// `<phi_z | phi_w>` by summation on a grid covering both states.
pub fn quadrature_overlap(trap: &Trap, z: &CoherentLabel, w: &CoherentLabel) -> Complex64 {
    let center = (z.gamma + w.gamma) * 0.5;
    let widths = trap.ground.widths();
    let spread = (z.gamma - w.gamma).abs().component_div(&widths);
    let half_span = 8.0 + 0.5 * spread.max();
    let grid = Grid3::around(center, widths, half_span, 2.0);
    let sum: Complex64 = grid
        .points()
        .iter()
        .map(|r| phi_z(&trap.ground, z, r).conj() * phi_z(&trap.ground, w, r))
        .sum();
    sum * grid.cell_volume()
}

/// `exp(-(|z|^2 + |w|^2) / 2 + z* . w)` summed over the three modes.
pub fn gaussian_overlap(z: &[Complex64; 3], w: &[Complex64; 3]) -> Complex64 {
    (0..3)
        .map(|j| -0.5 * (z[j].norm_sqr() + w[j].norm_sqr()) + z[j].conj() * w[j])
        .sum::<Complex64>()
        .exp()
}
