//! The Zorich map `F`, the family `f_a = F - ā`, and the constants that
//! control its contraction and expansion.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::{HemisphereParam, SingularBounds, FD_STEP};
use crate::linalg::Matrix;
use crate::point::Point;

/// Which side of the hyperplane `x_d = level` a half-space keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Above,
    AboveOrOn,
    Below,
    BelowOrOn,
    On,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfSpace {
    pub level: f64,
    pub sense: Sense,
}

impl HalfSpace {
    pub fn new(level: f64, sense: Sense) -> Self {
        HalfSpace { level, sense }
    }

    pub fn contains(&self, x: &Point) -> bool {
        let v = x.last();
        match self.sense {
            Sense::Above => v > self.level,
            Sense::AboveOrOn => v >= self.level,
            Sense::Below => v < self.level,
            Sense::BelowOrOn => v <= self.level,
            Sense::On => v == self.level,
        }
    }
}

/// Contraction/expansion constants of a Zorich map, estimated by sampling.
///
/// `dilation_min ≤ ℓ(DF(x)) e^{-x_d}` and `|DF(x)| e^{-x_d} ≤ dilation_max`
/// a.e.; `DF` is at most `alpha` below `contraction_level` and at least
/// `1/alpha` above `expansion_level`. The branch constants bound the
/// derivative of every inverse branch `Λ` by `[branch_min, branch_max]/|x + ā|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedConstants {
    pub alpha: f64,
    pub contraction_level: f64,
    pub expansion_level: f64,
    pub dilation_min: f64,
    pub dilation_max: f64,
    pub branch_min: f64,
    pub branch_max: f64,
    /// Grid resolution the dilation bounds were sampled at; 0 for unit constants.
    pub samples_per_axis: usize,
}

impl DerivedConstants {
    pub fn derive(param: &HemisphereParam, alpha: f64, samples_per_axis: usize) -> Result<Self> {
        let bounds = param.sample_dh_singular_bounds(samples_per_axis)?;
        Self::from_bounds(&bounds, alpha)
    }

    pub fn from_bounds(bounds: &SingularBounds, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter("alpha must lie in (0, 1)"));
        }
        if !(bounds.least > 0.0) {
            return Err(Error::EmptySample);
        }
        let c1 = bounds.least;
        let c2 = bounds.greatest;
        Ok(DerivedConstants {
            alpha,
            contraction_level: libm::log(alpha / c2),
            expansion_level: libm::log(1.0 / (alpha * c1)).max(0.0),
            dilation_min: c1,
            dilation_max: c2,
            branch_min: 1.0 / c2,
            branch_max: 1.0 / c1,
            samples_per_axis: bounds.samples_per_axis,
        })
    }

    /// All dilation and branch constants set to one.
    pub fn unit(alpha: f64) -> Result<Self> {
        let b = SingularBounds {
            least: 1.0,
            greatest: 1.0,
            samples: 0,
            samples_per_axis: 0,
        };
        Self::from_bounds(&b, alpha)
    }

    /// `e^M - m`, the least `a` for which `f_a` has the attracting fixed point.
    pub fn min_parameter(&self) -> f64 {
        libm::exp(self.expansion_level) - self.contraction_level
    }

    pub fn check_parameter(&self, a: f64) -> Result<()> {
        let required = self.min_parameter();
        if !(a >= required) {
            return Err(Error::FixedPointCondition { a, required });
        }
        Ok(())
    }
}

/// Lattice cell containing `x'` and the local coordinates inside it.
///
/// `r_j = round(x_j / 2ρ)` with half-integers rounded toward `-∞`, and
/// `u_j = x_j - 2ρ r_j ∈ [-ρ, ρ]`.
pub fn cell_of(half_side: f64, x: &[f64]) -> (Vec<i64>, Vec<f64>) {
    let mut r = vec![0i64; x.len()];
    let mut u = vec![0.0; x.len()];
    for j in 0..x.len() {
        let (rj, uj) = cell_coordinate(half_side, x[j]);
        r[j] = rj;
        u[j] = uj;
    }
    (r, u)
}

#[inline]
fn cell_coordinate(half_side: f64, x: f64) -> (i64, f64) {
    let r = libm::ceil(x / (2.0 * half_side) - 0.5);
    let u = (x - 2.0 * half_side * r).clamp(-half_side, half_side);
    (r as i64, u)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZorichMap {
    param: HemisphereParam,
    constants: DerivedConstants,
}

impl ZorichMap {
    pub fn new(param: HemisphereParam, constants: DerivedConstants) -> Self {
        ZorichMap { param, constants }
    }

    /// Derives the constants by sampling `h` at `samples_per_axis` nodes per axis.
    pub fn calibrated(param: HemisphereParam, alpha: f64, samples_per_axis: usize) -> Result<Self> {
        let constants = DerivedConstants::derive(&param, alpha, samples_per_axis)?;
        Ok(Self::new(param, constants))
    }

    pub fn param(&self) -> &HemisphereParam {
        &self.param
    }

    pub fn constants(&self) -> &DerivedConstants {
        &self.constants
    }

    pub fn with_constants(&self, constants: DerivedConstants) -> Self {
        ZorichMap {
            param: self.param,
            constants,
        }
    }

    pub fn dim(&self) -> usize {
        self.param.dim()
    }

    pub fn half_side(&self) -> f64 {
        self.param.half_side()
    }

    /// `F(x)`.
    pub fn eval(&self, x: &Point) -> Point {
        let mut out = vec![0.0; self.dim()];
        self.eval_into(x.coords(), &mut out);
        Point::from_vec_unchecked(out)
    }

    /// `f_a(x) = F(x) - ā`.
    pub fn eval_shifted(&self, a: f64, x: &Point) -> Point {
        let mut out = vec![0.0; self.dim()];
        self.eval_shifted_into(a, x.coords(), &mut out);
        Point::from_vec_unchecked(out)
    }

    pub fn eval_shifted_into(&self, a: f64, x: &[f64], out: &mut [f64]) {
        self.eval_into(x, out);
        out[self.dim() - 1] -= a;
    }

    /// `F(x)` written into `out`; `x` and `out` have length `d`.
    pub fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        let d = self.dim();
        let rho = self.half_side();
        let mut parity = 0i64;
        for j in 0..d - 1 {
            let (r, u) = cell_coordinate(rho, x[j]);
            parity = parity.wrapping_add(r);
            out[j] = if r.rem_euclid(2) == 0 { u } else { -u };
        }
        self.param.map_in_place(out);
        let growth = libm::exp(x[d - 1]);
        for v in &mut out[..d - 1] {
            *v *= growth;
        }
        let sign = if parity.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        out[d - 1] *= sign * growth;
    }

    /// Distance from `x'` to the nearest fold hyperplane or ridge, measured in
    /// the folded cube coordinates.
    pub fn kink_distance(&self, x: &Point) -> f64 {
        let (_, u) = cell_of(self.half_side(), x.horizontal());
        self.param.kink_distance(&u)
    }

    /// Central-difference Jacobian of `F`; the last column is `F(x)` itself.
    pub fn jacobian(&self, x: &Point) -> Result<Matrix> {
        let d = self.dim();
        let step = FD_STEP * self.half_side();
        if self.kink_distance(x) <= 2.0 * step {
            return Err(Error::NonSmoothPoint);
        }
        let mut jac = Matrix::zeros(d, d);
        let mut plus = vec![0.0; d];
        let mut minus = vec![0.0; d];
        let mut probe = x.coords().to_vec();
        for j in 0..d - 1 {
            probe[j] = x[j] + step;
            self.eval_into(&probe, &mut plus);
            probe[j] = x[j] - step;
            self.eval_into(&probe, &mut minus);
            probe[j] = x[j];
            for i in 0..d {
                jac.set(i, j, (plus[i] - minus[i]) / (2.0 * step));
            }
        }
        self.eval_into(x.coords(), &mut plus);
        jac.set_column(d - 1, &plus);
        Ok(jac)
    }

    /// The attracting fixed point `ξ_a` of `f_a`, found by iterating from `-ā`.
    pub fn fixed_point(&self, a: f64) -> Result<Point> {
        self.constants.check_parameter(a)?;
        let d = self.dim();
        let mut x = Point::vertical(d, -a).into_coords();
        let mut next = vec![0.0; d];
        for _ in 0..10_000 {
            self.eval_shifted_into(a, &x, &mut next);
            let mut diff = 0.0_f64;
            for (p, q) in x.iter().zip(&next) {
                diff = diff.max((p - q).abs());
            }
            core::mem::swap(&mut x, &mut next);
            if diff < 1e-12 {
                return Ok(Point::from_vec_unchecked(x));
            }
        }
        Err(Error::NoConvergence { iterations: 10_000 })
    }
}
