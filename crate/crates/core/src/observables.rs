//! First and second moments, uncertainty products and energy statistics in
//! the extremal state and in coherent states.

use nalgebra::Matrix6;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::ladder::ModeSystem;
use crate::states::CoherentLabel;
use crate::trap::{ModeFrequencies, TrapParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentReport {
    pub mean_r: [f64; 3],
    pub mean_p: [f64; 3],
    pub var_r: [f64; 3],
    pub var_p: [f64; 3],
    /// `<R_j P_j>`.
    pub cross: [Complex64; 3],
    /// `sqrt(var_r[j] var_p[j])`.
    pub uncertainty_products: [f64; 3],
}

/// Closed-form moments of the extremal state: zero means,
/// `<X^2> = <Y^2> = [4 (b^2+v)]^(-1/2)`, `<Z^2> = (-8 v)^(-1/2)`,
/// `<Px^2> = <Py^2> = [(b^2+v)/4]^(1/2)`, `<Pz^2> = (-v/2)^(1/2)` and
/// `<R_j P_j> = i/2`.
pub fn extremal_moments(params: TrapParams) -> Result<MomentReport> {
    params.ensure_stable()?;
    let TrapParams { b, v } = params;
    let radial = b * b + v;
    let var_r = [
        (4.0 * radial).powf(-0.5),
        (4.0 * radial).powf(-0.5),
        (-8.0 * v).powf(-0.5),
    ];
    let var_p = [
        (radial / 4.0).sqrt(),
        (radial / 4.0).sqrt(),
        (-v / 2.0).sqrt(),
    ];
    Ok(MomentReport {
        mean_r: [0.0; 3],
        mean_p: [0.0; 3],
        var_r,
        var_p,
        cross: [Complex64::new(0.0, 0.5); 3],
        uncertainty_products: uncertainty(&var_r, &var_p),
    })
}

fn uncertainty(var_r: &[f64; 3], var_p: &[f64; 3]) -> [f64; 3] {
    std::array::from_fn(|j| (var_r[j] * var_p[j]).sqrt())
}

/// Moments in the coherent state `label`: means shift to `(Gamma, Sigma)`,
/// variances are those of the extremal state, and
/// `<R_j P_j> = i/2 + Gamma_j Sigma_j`.
pub fn coherent_moments(params: TrapParams, label: &CoherentLabel) -> Result<MomentReport> {
    let base = extremal_moments(params)?;
    let gamma: [f64; 3] = label.gamma.into();
    let sigma: [f64; 3] = label.sigma.into();
    Ok(MomentReport {
        mean_r: gamma,
        mean_p: sigma,
        cross: std::array::from_fn(|j| base.cross[j] + gamma[j] * sigma[j]),
        ..base
    })
}

/// `<H>_z = w1 |z1|^2 - w2 |z2|^2 + w3 |z3|^2 + E_000`.
pub fn energy_mean(freqs: &ModeFrequencies, label: &CoherentLabel) -> f64 {
    let [a, b, c] = label.modulus_sq();
    freqs.omega1 * a - freqs.omega2 * b + freqs.omega3 * c + freqs.ground_energy()
}

/// `(Delta H)^2_z = (b + sqrt(b^2+v))^2 |z1|^2 + (b - sqrt(b^2+v))^2 |z2|^2 - 2 v |z3|^2`.
pub fn energy_variance(params: TrapParams, label: &CoherentLabel) -> Result<f64> {
    params.ensure_stable()?;
    let TrapParams { b, v } = params;
    let root = params.radial_root();
    let [a, m, c] = label.modulus_sq();
    Ok((b + root).powi(2) * a + (b - root).powi(2) * m - 2.0 * v * c)
}

/// All products `<eta_j eta_k>` in the extremal state, derived from the
/// ladder operators alone.
///
/// Inverting `(B_1, B_2, B_3, B_1^dag, B_2^dag, B_3^dag) = M eta` writes each
/// `eta_j` in terms of annihilators and creators; only the ordering
/// `B_k B_k^dag` survives in the extremal state, with value one.
pub fn second_moments(system: &ModeSystem) -> Matrix6<Complex64> {
    let rows: [_; 6] = std::array::from_fn(|r| {
        let op = if r < 3 {
            system.annihilator(r)
        } else {
            system.creator(r - 3)
        };
        op.coeffs.transpose()
    });
    let m = Matrix6::from_rows(&rows);
    let inv = m.try_inverse().expect("ladder operators span phase space");
    Matrix6::from_fn(|a, b| (0..3).map(|k| inv[(a, k)] * inv[(b, k + 3)]).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::coherent_label;
    use crate::trap::frequencies;

    fn reference() -> TrapParams {
        TrapParams::new(1.0, -0.5)
    }

    #[test]
    fn extremal_table() {
        let m = extremal_moments(reference()).unwrap();
        assert!((m.var_r[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(m.cross, [Complex64::new(0.0, 0.5); 3]);
        for u in m.uncertainty_products {
            assert!((u - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn twenty_one_products_from_ladder_algebra() {
        let p = reference();
        let sys = ModeSystem::from_params(p).unwrap();
        let g = second_moments(&sys);
        let m = extremal_moments(p).unwrap();
        for j in 0..3 {
            assert!((g[(j, j)] - m.var_r[j]).norm() < 1e-12);
            assert!((g[(j + 3, j + 3)] - m.var_p[j]).norm() < 1e-12);
            assert!((g[(j, j + 3)] - m.cross[j]).norm() < 1e-12);
            assert!((g[(j + 3, j)] + m.cross[j]).norm() < 1e-12);
        }
        // The other twelve independent products vanish.
        for a in 0..6 {
            for b in a..6 {
                if a == b || b == a + 3 {
                    continue;
                }
                assert!(
                    g[(a, b)].norm() < 1e-12,
                    "<eta_{a} eta_{b}> = {}",
                    g[(a, b)]
                );
            }
        }
    }

    #[test]
    fn coherent_reference_values() {
        let p = reference();
        let w = frequencies(p).unwrap();
        let l = coherent_label([Complex64::new(1.0, 0.0), 0.0.into(), 0.0.into()], p).unwrap();
        let m = coherent_moments(p, &l).unwrap();
        assert!((m.mean_r[0] - 1.189_207_115_002_721).abs() < 1e-12);
        assert!((energy_mean(&w, &l) - 2.914_213_562_373_095).abs() < 1e-12);
        assert!((energy_variance(p, &l).unwrap() - w.omega1.powi(2)).abs() < 1e-12);

        let axial = coherent_label([0.0.into(), 0.0.into(), Complex64::new(1.0, 0.0)], p).unwrap();
        assert!((energy_variance(p, &axial).unwrap() - 1.0).abs() < 1e-15);

        let vac = crate::states::CoherentLabel::vacuum(p).unwrap();
        assert_eq!(
            coherent_moments(p, &vac).unwrap(),
            extremal_moments(p).unwrap()
        );
        assert_eq!(energy_variance(p, &vac).unwrap(), 0.0);
    }

    #[test]
    fn magnetron_excitation_lowers_the_mean_energy() {
        let p = reference();
        let w = frequencies(p).unwrap();
        // |z2|^2 > E_000 / w2 ~ 4.12
        let l = coherent_label([0.0.into(), Complex64::new(2.1, 0.0), 0.0.into()], p).unwrap();
        assert!(energy_mean(&w, &l) < 0.0);
    }
}
