//! Inverse branches `Λ^r: H_{≥M} → T(r)` of `f_a`.
//!
//! On the beam over the cell `P(r)`, `r ∈ S`, the map `f_a` is a bijection
//! onto `H_{>-a}`, so every `y` with `y_d ≥ M` has exactly one preimage in
//! the tract `T(r) = P(r) × (M, ∞)`. The branch is computed in closed form:
//! the direction of `y + ā` is pulled back through the hemisphere
//! parametrization and the height is `log |y + ā|`.
//!
//! Reflections fold odd cells, so `Λ^r(y) = Λ(P_r y) + (2ρr, 0)` where `P_r`
//! negates `y_j` for every odd `r_j`. When all `r_j` are even, `P_r` is the
//! identity and the branches are plain translates of `Λ = Λ^0`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom::FD_STEP;
use crate::linalg::Matrix;
use crate::point::Point;
use crate::zorich::ZorichMap;

/// A vector `r ∈ Z^{d-1}`; it lies in `S` when `Σ r_j` is even.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeIndex(Vec<i64>);

impl LatticeIndex {
    pub fn new(components: Vec<i64>) -> Self {
        LatticeIndex(components)
    }

    pub fn zero(len: usize) -> Self {
        LatticeIndex(vec![0; len])
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parity(&self) -> u8 {
        (self.0.iter().sum::<i64>().rem_euclid(2)) as u8
    }

    pub fn is_even(&self) -> bool {
        self.parity() == 0
    }

    pub fn norm_sq(&self) -> i64 {
        self.0.iter().map(|r| r * r).sum()
    }
}

/// `T(r) = P(r) × (M, ∞)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tract {
    pub index: LatticeIndex,
    pub half_side: f64,
    pub level: f64,
}

impl Tract {
    /// Membership with the open inequalities relaxed by `tol`.
    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        let rho = self.half_side;
        let inside = x
            .horizontal()
            .iter()
            .zip(self.index.components())
            .all(|(xj, rj)| (xj - 2.0 * rho * *rj as f64).abs() < rho + tol);
        inside && x.last() > self.level - tol
    }
}

/// `P_r y`: negate `y_j` for each odd `r_j`.
pub fn fold_reflection(r: &LatticeIndex, y: &Point) -> Point {
    let mut out = y.clone();
    for (v, rj) in out.coords_mut().iter_mut().zip(r.components()) {
        if rj.rem_euclid(2) == 1 {
            *v = -*v;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCheck {
    /// `|Λ(x) - Λ(y)|`.
    pub lhs: f64,
    /// `α |x - y|`.
    pub rhs_contraction: f64,
    /// `c₄ π |x - y| / min(|x + ā|, |y + ā|)`.
    pub rhs_lipschitz: f64,
}

/// The inverse branches of `f_a` for a fixed parameter `a ≥ e^M - m`.
#[derive(Clone, Copy, Debug)]
pub struct Branches<'m> {
    map: &'m ZorichMap,
    a: f64,
}

impl<'m> Branches<'m> {
    pub fn new(map: &'m ZorichMap, a: f64) -> Result<Self> {
        map.constants().check_parameter(a)?;
        Ok(Branches { map, a })
    }

    pub fn map(&self) -> &'m ZorichMap {
        self.map
    }

    pub fn parameter(&self) -> f64 {
        self.a
    }

    pub fn level(&self) -> f64 {
        self.map.constants().expansion_level
    }

    pub fn tract(&self, r: &LatticeIndex) -> Tract {
        Tract {
            index: r.clone(),
            half_side: self.map.half_side(),
            level: self.level(),
        }
    }

    /// `Λ^r(y)`.
    pub fn invert(&self, r: &LatticeIndex, y: &Point) -> Result<Point> {
        self.check(r.components(), y.coords())?;
        let mut out = vec![0.0; self.map.dim()];
        self.invert_unchecked(r.components(), y.coords(), &mut out);
        Ok(Point::from_vec_unchecked(out))
    }

    pub(crate) fn check(&self, r: &[i64], y: &[f64]) -> Result<()> {
        let d = self.map.dim();
        if y.len() != d || r.len() != d - 1 {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: y.len(),
            });
        }
        let level = self.level();
        if !(y[d - 1] >= level) {
            return Err(Error::BelowExpansionLevel {
                last: y[d - 1],
                level,
            });
        }
        if r.iter().sum::<i64>().rem_euclid(2) != 0 {
            return Err(Error::OddParity);
        }
        Ok(())
    }

    /// Requires `y_d > -a`; no parity or level checks.
    pub(crate) fn invert_unchecked(&self, r: &[i64], y: &[f64], out: &mut [f64]) {
        let d = self.map.dim();
        let rho = self.map.half_side();
        let mut w = [0.0; 16];
        let mut heap;
        let w: &mut [f64] = if d <= 16 {
            &mut w[..d]
        } else {
            heap = vec![0.0; d];
            &mut heap
        };
        w.copy_from_slice(y);
        w[d - 1] += self.a;
        let n = libm::sqrt(w.iter().map(|v| v * v).sum::<f64>());
        w.iter_mut().for_each(|v| *v /= n);
        self.map.param().inverse_into(w, &mut out[..d - 1]);
        for j in 0..d - 1 {
            let t = out[j];
            let u = if r[j].rem_euclid(2) == 0 { t } else { -t };
            out[j] = 2.0 * rho * r[j] as f64 + u;
        }
        out[d - 1] = libm::log(n);
    }

    /// Central-difference Jacobian of `Λ^r` at `y`.
    ///
    /// Fails with [`Error::NonSmoothPoint`] when the stencil image crosses a
    /// ridge or face of the parameter cube.
    pub fn jacobian(&self, r: &LatticeIndex, y: &Point) -> Result<Matrix> {
        self.check(r.components(), y.coords())?;
        let d = self.map.dim();
        let scale = y.shifted_norm(self.a);
        let step = 10.0 * FD_STEP * scale;
        let image = self.invert(r, y)?;
        let (_, local) = crate::zorich::cell_of(self.map.half_side(), image.horizontal());
        let reach = 4.0 * self.map.constants().branch_max * step / scale;
        if self.map.param().kink_distance(&local) <= reach {
            return Err(Error::NonSmoothPoint);
        }
        let mut jac = Matrix::zeros(d, d);
        let mut plus = vec![0.0; d];
        let mut minus = vec![0.0; d];
        let mut probe = y.coords().to_vec();
        for j in 0..d {
            probe[j] = y[j] + step;
            self.invert_unchecked(r.components(), &probe, &mut plus);
            probe[j] = y[j] - step;
            self.invert_unchecked(r.components(), &probe, &mut minus);
            probe[j] = y[j];
            for i in 0..d {
                jac.set(i, j, (plus[i] - minus[i]) / (2.0 * step));
            }
        }
        Ok(jac)
    }

    /// `(c₃/|x + ā|, c₄/|x + ā|)`, the envelope for the singular values of `DΛ(x)`.
    pub fn derivative_envelope(&self, x: &Point) -> Result<(f64, f64)> {
        self.check(&vec![0; self.map.dim() - 1], x.coords())?;
        let n = x.shifted_norm(self.a);
        let c = self.map.constants();
        Ok((c.branch_min / n, c.branch_max / n))
    }

    /// Both sides of the contraction and Lipschitz estimates for `Λ = Λ^0`.
    pub fn bound_check(&self, x: &Point, y: &Point) -> Result<BoundCheck> {
        let zero = LatticeIndex::zero(self.map.dim() - 1);
        let lx = self.invert(&zero, x)?;
        let ly = self.invert(&zero, y)?;
        let gap = x.distance(y);
        let near = x.shifted_norm(self.a).min(y.shifted_norm(self.a));
        let c = self.map.constants();
        Ok(BoundCheck {
            lhs: lx.distance(&ly),
            rhs_contraction: c.alpha * gap,
            rhs_lipschitz: c.branch_max * PI * gap / near,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::HemisphereParam;
    use core::f64::consts::{E, FRAC_PI_2};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn planar() -> ZorichMap {
        ZorichMap::calibrated(HemisphereParam::planar(), 0.5, 64).unwrap()
    }

    fn cube3() -> ZorichMap {
        ZorichMap::calibrated(HemisphereParam::new(3, 1.0).unwrap(), 0.5, 256).unwrap()
    }

    fn pt(v: &[f64]) -> Point {
        Point::from_slice(v).unwrap()
    }

    fn random_even(rng: &mut ChaCha8Rng, len: usize, bound: i64) -> LatticeIndex {
        loop {
            let r: Vec<i64> = (0..len).map(|_| rng.gen_range(-bound..=bound)).collect();
            let r = LatticeIndex::new(r);
            if r.is_even() && r.norm_sq() <= bound * bound {
                return r;
            }
        }
    }

    #[test]
    fn planar_example() {
        let f = planar();
        let br = Branches::new(&f, 3.0).unwrap();
        let x = br.invert(&LatticeIndex::zero(1), &pt(&[0.0, E * E - 3.0])).unwrap();
        assert!(x[0].abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn round_trip_from_tract() {
        let f = cube3();
        let a = 20.0;
        let br = Branches::new(&f, a).unwrap();
        let m = br.level();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut n = 0;
        while n < 500 {
            let x = pt(&[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(m..m + 4.0)]);
            let y = f.eval_shifted(a, &x);
            if y.last() < m {
                continue;
            }
            let back = br.invert(&LatticeIndex::zero(2), &y).unwrap();
            assert!(back.distance(&x) < 1e-10);
            n += 1;
        }
    }

    #[test]
    fn branches_invert_shifted_map() {
        for f in [planar(), cube3()] {
            let a = f.constants().min_parameter() + 5.0;
            let br = Branches::new(&f, a).unwrap();
            let d = f.dim();
            let mut rng = ChaCha8Rng::seed_from_u64(10);
            for _ in 0..2000 {
                let r = random_even(&mut rng, d - 1, 20);
                let mut y: Vec<f64> = (0..d - 1).map(|_| rng.gen_range(-5.0 * a..5.0 * a)).collect();
                y.push(br.level() + rng.gen_range(0.0..5.0 * a));
                let y = pt(&y);
                let x = br.invert(&r, &y).unwrap();
                assert!(f.eval_shifted(a, &x).distance(&y) < 1e-10);
                assert!(br.tract(&r).contains(&x, 1e-12));
            }
        }
    }

    #[test]
    fn translation_law() {
        let f = cube3();
        let br = Branches::new(&f, 10.0).unwrap();
        let y = pt(&[3.0, -7.5, 4.0]);
        let zero = LatticeIndex::zero(2);
        for r in [vec![2, 0], vec![-4, 6], vec![1, 1], vec![3, -5]] {
            let r = LatticeIndex::new(r);
            let lhs = br.invert(&r, &y).unwrap();
            let base = br.invert(&zero, &fold_reflection(&r, &y)).unwrap();
            let shift: Vec<f64> = r.components().iter().map(|v| 2.0 * *v as f64).chain([0.0]).collect();
            assert_eq!(lhs, base.add(&pt(&shift)));
        }
        // (1,1) is in S but odd per coordinate: the literal translate is not a branch.
        let r = LatticeIndex::new(vec![1, 1]);
        let literal = br.invert(&zero, &y).unwrap().add(&pt(&[2.0, 2.0, 0.0]));
        assert!(f.eval_shifted(10.0, &literal).distance(&y) > 1.0);
        assert!(f.eval_shifted(10.0, &br.invert(&r, &y).unwrap()).distance(&y) < 1e-10);
    }

    #[test]
    fn planar_translation_is_literal() {
        let f = planar();
        let br = Branches::new(&f, 4.0).unwrap();
        let y = pt(&[-2.0, 3.0]);
        let base = br.invert(&LatticeIndex::zero(1), &y).unwrap();
        for k in [-6, -2, 2, 8] {
            let x = br.invert(&LatticeIndex::new(vec![k]), &y).unwrap();
            assert_eq!(x, base.add(&pt(&[2.0 * FRAC_PI_2 * k as f64, 0.0])));
        }
    }

    #[test]
    fn errors() {
        let f = planar();
        let br = Branches::new(&f, 4.0).unwrap();
        assert!(matches!(
            br.invert(&LatticeIndex::zero(1), &pt(&[0.0, -1.0])),
            Err(Error::BelowExpansionLevel { .. })
        ));
        assert_eq!(br.invert(&LatticeIndex::new(vec![1]), &pt(&[0.0, 2.0])), Err(Error::OddParity));
        assert!(Branches::new(&f, 1.0).is_err());
    }

    #[test]
    fn contraction_and_lipschitz_estimates() {
        for f in [planar(), cube3()] {
            let a = f.constants().min_parameter() + 2.0;
            let br = Branches::new(&f, a).unwrap();
            let d = f.dim();
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let x = pt(&vec![0.5; d].iter().enumerate().map(|(i, v)| if i + 1 == d { br.level() + 1.0 } else { *v }).collect::<Vec<_>>());
            let same = br.bound_check(&x, &x).unwrap();
            assert_eq!(same.lhs, 0.0);
            let draw = |rng: &mut ChaCha8Rng| {
                loop {
                    let mut v: Vec<f64> = (0..d - 1).map(|_| rng.gen_range(-10.0 * a..10.0 * a)).collect();
                    v.push(rng.gen_range(br.level()..10.0 * a));
                    let p = pt(&v);
                    if p.norm() <= 10.0 * a {
                        return p;
                    }
                }
            };
            for _ in 0..1000 {
                let (x, y) = (draw(&mut rng), draw(&mut rng));
                let b = br.bound_check(&x, &y).unwrap();
                assert!(b.lhs <= b.rhs_contraction + 1e-9);
                assert!(b.lhs <= b.rhs_lipschitz + 1e-9);
            }
        }
    }

    #[test]
    fn shrinking_with_distance() {
        let f = cube3();
        let br = Branches::new(&f, 20.0).unwrap();
        let m = br.level();
        let mut last = f64::INFINITY;
        for k in 0..6 {
            let h = m + 10.0 * (1 << k) as f64;
            let b = br.bound_check(&pt(&[0.3, 0.1, h]), &pt(&[0.8, -0.2, h])).unwrap();
            assert!(b.lhs < last);
            last = b.lhs;
        }
    }

    #[test]
    fn planar_branch_derivative_is_conformal() {
        let f = planar();
        let a = 5.0;
        let br = Branches::new(&f, a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..1000 {
            let y = pt(&[rng.gen_range(-50.0..50.0), rng.gen_range(br.level() + 0.01..50.0)]);
            let r = LatticeIndex::new(vec![2 * rng.gen_range(-5i64..=5)]);
            let jac = br.jacobian(&r, &y).unwrap();
            let (lo, hi) = jac.singular_extremes();
            let expect = 1.0 / y.shifted_norm(a);
            assert!((lo - expect).abs() <= 1e-5 * expect);
            assert!((hi - expect).abs() <= 1e-5 * expect);
            let (el, eu) = br.derivative_envelope(&y).unwrap();
            assert!(el > 0.0 && el <= eu);
        }
    }

    #[test]
    fn branch_jacobian_respects_envelope() {
        let f = cube3();
        let a = 15.0;
        let br = Branches::new(&f, a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut n = 0;
        while n < 1000 {
            let y = pt(&[rng.gen_range(-60.0..60.0), rng.gen_range(-60.0..60.0), rng.gen_range(br.level()..60.0)]);
            let r = random_even(&mut rng, 2, 10);
            let Ok(jac) = br.jacobian(&r, &y) else { continue };
            let (lo, hi) = jac.singular_extremes();
            let (el, eu) = br.derivative_envelope(&y).unwrap();
            assert!(lo >= el - 1e-6 * eu, "{lo} < {el}");
            assert!(hi <= eu + 1e-6 * eu, "{hi} > {eu}");
            n += 1;
        }
    }
}
