//! Rectangular position grids and central-difference derivatives.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Default step for central differences.
pub const FD_STEP: f64 = 1e-3;

/// Default half-width of a grid, in standard deviations of the density.
pub const DEFAULT_HALF_SPAN: f64 = 6.0;

/// Points `min, min + step, ...` not exceeding `max` (up to rounding).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(min: f64, max: f64, step: f64) -> Self {
        Self { min, max, step }
    }

    /// `center +- half_span`, sampled with `step`; the center is a grid point
    /// when the span is a multiple of the step.
    pub fn centered(center: f64, half_span: f64, step: f64) -> Self {
        Self {
            min: center - half_span,
            max: center + half_span,
            step,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.min.is_finite()
            && self.max.is_finite()
            && self.step.is_finite()
            && self.step > 0.0
            && self.max >= self.min
    }

    pub fn len(&self) -> usize {
        ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, i: usize) -> f64 {
        self.min + i as f64 * self.step
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid3 {
    pub axes: [Axis; 3],
}

impl Grid3 {
    pub fn new(axes: [Axis; 3]) -> Self {
        Self { axes }
    }

    /// `center_j +- half_span * width_j` per axis with `per_width` samples per
    /// width.
    pub fn around(
        center: Vector3<f64>,
        widths: Vector3<f64>,
        half_span: f64,
        per_width: f64,
    ) -> Self {
        let axes = std::array::from_fn(|j| {
            let step = widths[j] / per_width;
            Axis::centered(center[j], (half_span * per_width).round() * step, step)
        });
        Self { axes }
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(Axis::len).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.step).product()
    }

    /// Points in row-major order, `x` slowest and `z` fastest.
    pub fn points(&self) -> Vec<Vector3<f64>> {
        let [ax, ay, az] = &self.axes;
        let mut out = Vec::with_capacity(self.len());
        for x in ax.points() {
            for y in ay.points() {
                for z in az.points() {
                    out.push(Vector3::new(x, y, z));
                }
            }
        }
        out
    }
}

/// Second-order central-difference gradient of `psi` at `r`.
pub fn central_gradient<F>(psi: &F, r: &Vector3<f64>, h: f64) -> Vector3<Complex64>
where
    F: Fn(&Vector3<f64>) -> Complex64 + ?Sized,
{
    Vector3::from_fn(|j, _| {
        let mut e = Vector3::zeros();
        e[j] = h;
        (psi(&(r + e)) - psi(&(r - e))) / (2.0 * h)
    })
}
