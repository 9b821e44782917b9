//! The cube-to-hemisphere parametrization `h: [-ρ, ρ]^{d-1} -> U`.
//!
//! `h` is the ∞-norm radial map: with `u = x/ρ` and `θ = (π/2)‖u‖∞`,
//! `h(x) = (sin θ · u/|u|, cos θ)`. It is a bijection from the cube onto the
//! closed upper hemisphere, smooth off the ridge set where two coordinates
//! share the maximal modulus, and for `d = 2, ρ = π/2` it is exactly
//! `x ↦ (sin x, cos x)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::point::{euclidean_norm, max_norm};

/// Relative finite-difference step used for every Jacobian of `h` and `F`.
pub const FD_STEP: f64 = 1e-6;

/// Tolerance on `| |w| - 1 |` accepted by [`HemisphereParam::inverse`].
pub const UNIT_TOL: f64 = 1e-9;

const POLE_EPS: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HemisphereParam {
    dim: usize,
    half_side: f64,
}

/// Sampled extreme singular values of the derivative of `F` on `H_{=0}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularBounds {
    pub least: f64,
    pub greatest: f64,
    pub samples: usize,
    pub samples_per_axis: usize,
}

impl HemisphereParam {
    pub fn new(dim: usize, half_side: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter("dimension must be at least 2"));
        }
        if !(half_side.is_finite() && half_side > 0.0) {
            return Err(Error::InvalidParameter("half side must be positive and finite"));
        }
        Ok(HemisphereParam { dim, half_side })
    }

    /// `d = 2, ρ = π/2`, where `h(x) = (sin x, cos x)`.
    pub fn planar() -> Self {
        HemisphereParam {
            dim: 2,
            half_side: FRAC_PI_2,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_side(&self) -> f64 {
        self.half_side
    }

    pub fn is_planar(&self) -> bool {
        self.dim == 2 && (self.half_side - FRAC_PI_2).abs() <= 4.0 * f64::EPSILON
    }

    /// `h(x)` for `x` in the closed cube.
    pub fn map(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_cube_point(x)?;
        let mut out = vec![0.0; self.dim];
        out[..self.dim - 1].copy_from_slice(x);
        self.map_in_place(&mut out);
        Ok(out)
    }

    /// Inverse of [`map`](Self::map) on the closed upper hemisphere.
    pub fn inverse(&self, w: &[f64]) -> Result<Vec<f64>> {
        if w.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: w.len(),
            });
        }
        let norm = euclidean_norm(w);
        let last = w[self.dim - 1];
        if (norm - 1.0).abs() > UNIT_TOL || last < 0.0 {
            return Err(Error::NotOnHemisphere { norm, last });
        }
        let mut out = vec![0.0; self.dim - 1];
        self.inverse_into(w, &mut out);
        Ok(out)
    }

    /// `out[..d-1]` holds a cube point on entry and `h` of it on exit.
    pub(crate) fn map_in_place(&self, out: &mut [f64]) {
        let n = self.dim - 1;
        let rho = self.half_side;
        let inf = max_norm(&out[..n]) / rho;
        if inf == 0.0 {
            out[..n].fill(0.0);
            out[n] = 1.0;
            return;
        }
        let theta = FRAC_PI_2 * inf.min(1.0);
        let two = euclidean_norm(&out[..n]);
        let (sin, cos) = (libm::sin(theta), libm::cos(theta));
        let scale = sin / two;
        for v in &mut out[..n] {
            *v *= scale;
        }
        out[n] = cos;
    }

    /// Assumes `w` is (numerically) on the upper hemisphere.
    pub(crate) fn inverse_into(&self, w: &[f64], out: &mut [f64]) {
        let n = self.dim - 1;
        let horizontal = &w[..n];
        let s = euclidean_norm(horizontal);
        let theta = libm::atan2(s, w[n].max(0.0));
        if libm::sin(theta) < POLE_EPS || s == 0.0 {
            out[..n].fill(0.0);
            return;
        }
        let e_inf = max_norm(horizontal) / s;
        let radius = self.half_side * (2.0 * theta / PI).min(1.0);
        let scale = radius / (s * e_inf);
        for (o, v) in out[..n].iter_mut().zip(horizontal) {
            *o = v * scale;
        }
    }

    fn check_cube_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim - 1 {
            return Err(Error::DimensionMismatch {
                expected: self.dim - 1,
                found: x.len(),
            });
        }
        let m = max_norm(x);
        if !(m <= self.half_side * (1.0 + 1e-12)) {
            return Err(Error::OutsideCube {
                max_norm: m,
                half_side: self.half_side,
            });
        }
        Ok(())
    }

    /// Distance (in cube coordinates) from `x` to the set where `h` fails to be
    /// smooth as a map into `R^d` restricted to one beam: the ridge set and `∂Q`.
    pub(crate) fn kink_distance(&self, x: &[f64]) -> f64 {
        let n = x.len();
        let mut first = 0.0_f64;
        let mut second = 0.0_f64;
        for v in x {
            let a = v.abs();
            if a > first {
                second = first;
                first = a;
            } else if a > second {
                second = a;
            }
        }
        let boundary = self.half_side - first;
        if n >= 2 {
            boundary.min(first - second)
        } else {
            boundary
        }
    }

    /// Central-difference derivative of `F` at `(x, 0)`: columns `∂h/∂x_j`, then `h(x)`.
    pub(crate) fn surface_jacobian(&self, x: &[f64], scratch: &mut [f64]) -> Matrix {
        let d = self.dim;
        let n = d - 1;
        let step = FD_STEP * self.half_side;
        let mut jac = Matrix::zeros(d, d);
        let mut plus = vec![0.0; d];
        for j in 0..n {
            plus[..n].copy_from_slice(x);
            plus[j] += step;
            self.map_in_place(&mut plus);
            scratch[..n].copy_from_slice(x);
            scratch[j] -= step;
            self.map_in_place(scratch);
            for i in 0..d {
                jac.set(i, j, (plus[i] - scratch[i]) / (2.0 * step));
            }
        }
        scratch[..n].copy_from_slice(x);
        self.map_in_place(scratch);
        jac.set_column(n, &scratch[..d]);
        jac
    }

    /// Extreme singular values of `DF` on `H_{=0}` over a cell-centred grid of `Q`.
    ///
    /// Grid nodes that fall near the ridge set or `∂Q` are pushed onto the
    /// smooth side at distance `4·FD_STEP·ρ`, so the extremes (which for this
    /// `h` are only approached at the ridge) are resolved up to the step size.
    /// Nodes closer than that to the centre, where all regions meet, are skipped.
    pub fn sample_dh_singular_bounds(&self, samples_per_axis: usize) -> Result<SingularBounds> {
        if samples_per_axis < 8 {
            return Err(Error::InvalidParameter("samples_per_axis must be at least 8"));
        }
        let n = self.dim - 1;
        let rho = self.half_side;
        let cell = 2.0 / samples_per_axis as f64;
        let margin = 4.0 * FD_STEP;
        let total = samples_per_axis
            .checked_pow(n as u32)
            .ok_or(Error::InvalidParameter("sampling grid too large"))?;

        let mut least = f64::INFINITY;
        let mut greatest = 0.0_f64;
        let mut samples = 0;
        let mut idx = vec![0usize; n];
        let mut u = vec![0.0; n];
        let mut x = vec![0.0; n];
        let mut scratch = vec![0.0; self.dim];
        for _ in 0..total {
            for (uj, &k) in u.iter_mut().zip(&idx) {
                *uj = -1.0 + (k as f64 + 0.5) * cell;
            }
            if nudge_to_smooth_side(&mut u, cell, margin) {
                for (xj, uj) in x.iter_mut().zip(&u) {
                    *xj = rho * uj;
                }
                let jac = self.surface_jacobian(&x, &mut scratch);
                let (lo, hi) = jac.singular_extremes();
                if !(lo.is_finite() && hi.is_finite()) || lo <= 1e-12 * hi {
                    return Err(Error::RankDeficient);
                }
                least = least.min(lo);
                greatest = greatest.max(hi);
                samples += 1;
            }
            // odometer
            for k in idx.iter_mut() {
                *k += 1;
                if *k < samples_per_axis {
                    break;
                }
                *k = 0;
            }
        }
        if samples == 0 {
            return Err(Error::EmptySample);
        }
        Ok(SingularBounds {
            least,
            greatest,
            samples,
            samples_per_axis,
        })
    }
}

/// Snaps `u` (unit cube coordinates) from within one grid cell of the ridge
/// set or of `∂[-1, 1]^n` onto the smooth side at distance `margin` from it.
/// Returns `false` for points too close to the centre.
fn nudge_to_smooth_side(u: &mut [f64], cell: f64, margin: f64) -> bool {
    let mut lead = 0;
    for j in 1..u.len() {
        if u[j].abs() > u[lead].abs() {
            lead = j;
        }
    }
    let mut top = u[lead].abs();
    if top > 1.0 - cell {
        top = 1.0 - margin;
    }
    if top < 2.0 * margin {
        return false;
    }
    u[lead] = libm::copysign(top, u[lead]);
    for (j, v) in u.iter_mut().enumerate() {
        if j != lead && v.abs() > top - cell {
            *v = libm::copysign(top - margin, *v);
        }
    }
    true
}
