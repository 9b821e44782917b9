//! The planar case: `f_a` is conjugate to the exponential family.
//!
//! With `d = 2`, `ρ = π/2` and `z = x + iy`, `F(z) = i e^{-iz}`, so
//! `f_a = L ∘ E_λ ∘ L^{-1}` for `E_λ(w) = λ e^w`, `λ = e^{-a}` and
//! `L(w) = i(w - a)`.

use core::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::point::Point;
use crate::zorich::ZorichMap;

/// `re + i·im`, identified with the point `(re, im)` of the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexPoint {
    pub re: f64,
    pub im: f64,
}

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Self {
        ComplexPoint { re, im }
    }

    pub fn abs(&self) -> f64 {
        libm::hypot(self.re, self.im)
    }

    pub fn distance(&self, other: &ComplexPoint) -> f64 {
        libm::hypot(self.re - other.re, self.im - other.im)
    }

    pub fn to_point(self) -> Point {
        Point::from_vec_unchecked(alloc::vec![self.re, self.im])
    }
}

impl TryFrom<&Point> for ComplexPoint {
    type Error = Error;

    fn try_from(p: &Point) -> Result<Self> {
        if p.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: p.dim(),
            });
        }
        Ok(ComplexPoint::new(p[0], p[1]))
    }
}

/// `E_λ(z) = λ e^z`.
pub fn exp_lambda(lambda: f64, z: ComplexPoint) -> Result<ComplexPoint> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter("lambda must be positive"));
    }
    let m = lambda * libm::exp(z.re);
    let (s, c) = libm::sincos(z.im);
    let w = ComplexPoint::new(m * c, m * s);
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::Overflow);
    }
    Ok(w)
}

/// `L(w) = i(w - a)`.
pub fn to_plane(a: f64, w: ComplexPoint) -> ComplexPoint {
    ComplexPoint::new(-w.im, w.re - a)
}

/// `L^{-1}(z) = a - iz`.
pub fn from_plane(a: f64, z: ComplexPoint) -> ComplexPoint {
    ComplexPoint::new(z.im + a, -z.re)
}

/// The real attracting fixed point of `E_λ`, `0 < λ < 1/e`.
pub fn lambda_fixed_point(lambda: f64) -> Result<ComplexPoint> {
    if !(lambda > 0.0 && lambda < 1.0 / core::f64::consts::E) {
        return Err(Error::InvalidParameter("lambda must lie in (0, 1/e)"));
    }
    // λe^q = q has its smaller root in (0, 1); Newton from 0 increases monotonically to it.
    let mut q = 0.0;
    for i in 0..100 {
        let e = lambda * libm::exp(q);
        let step = (e - q) / (e - 1.0);
        q -= step;
        if step.abs() <= 1e-16 * q.abs().max(1.0) {
            return Ok(ComplexPoint::new(q, 0.0));
        }
        if i == 99 {
            break;
        }
    }
    Err(Error::NoConvergence { iterations: 100 })
}

fn require_canonical(map: &ZorichMap) -> Result<()> {
    if map.dim() != 2 || map.half_side() != FRAC_PI_2 {
        return Err(Error::InvalidParameter("conjugacy needs d = 2 and rho = pi/2"));
    }
    Ok(())
}

/// `|f_a(z) - L(E_λ(L^{-1}(z)))|` with `λ = e^{-a}`.
pub fn conjugacy_defect(map: &ZorichMap, a: f64, z: ComplexPoint) -> Result<f64> {
    require_canonical(map)?;
    if !(a > 0.0) {
        return Err(Error::InvalidParameter("a must be positive"));
    }
    let lhs = map.eval_shifted(a, &z.to_point());
    let rhs = to_plane(a, exp_lambda(libm::exp(-a), from_plane(a, z))?);
    Ok(libm::hypot(lhs[0] - rhs.re, lhs[1] - rhs.im))
}

/// Distance between `f_a^n(z)` and its conjugate `L(E_λ^n(L^{-1} z))`.
pub fn orbit_defect(map: &ZorichMap, a: f64, z: ComplexPoint, n: usize) -> Result<f64> {
    require_canonical(map)?;
    let lambda = libm::exp(-a);
    let mut x = z.to_point();
    let mut w = from_plane(a, z);
    for _ in 0..n {
        x = map.eval_shifted(a, &x);
        w = exp_lambda(lambda, w)?;
    }
    Ok(ComplexPoint::try_from(&x)?.distance(&to_plane(a, w)))
}
