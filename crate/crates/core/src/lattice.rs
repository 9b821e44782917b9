//! The even lattice `S = {r ∈ Z^{d-1} : Σ r_j even}` and the sums
//! `Σ_{r ∈ S, |r| ≤ N} (|r|² + b²)^{-t/2}` with closed-form brackets.
//!
//! Sums are accumulated over the nonnegative orthant, each point weighted
//! by the number of its sign images (negation preserves parity). The
//! orthant is cut into slabs by the first coordinate; each slab is summed
//! in a fixed order and slabs are merged in ascending order, both with
//! Neumaier compensation, so a parallel caller that evaluates slabs
//! independently reproduces the sequential value bit for bit.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Neumaier's compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `⌊N²⌋`, the largest admissible `|r|²`, with a few ulps of slack so that
/// `N = √k` computed in floating point still admits `k`.
pub fn norm_sq_cap(n: f64) -> i64 {
    if !(n >= 0.0) {
        return -1;
    }
    libm::floor(n * n * (1.0 + 4.0 * f64::EPSILON)) as i64
}

fn isqrt(v: i64) -> i64 {
    if v < 0 {
        return -1;
    }
    let mut s = libm::sqrt(v as f64) as i64;
    while s * s > v {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= v {
        s += 1;
    }
    s
}

/// Streams `r ∈ S` with `|r| ≤ N`, scanning the box `[-⌊N⌋, ⌊N⌋]^{d-1}` in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct EvenLattice {
    current: Vec<i64>,
    bound: i64,
    cap: i64,
    done: bool,
}

impl EvenLattice {
    pub fn new(n: f64, dim: usize) -> Self {
        let cap = norm_sq_cap(n);
        let bound = isqrt(cap);
        EvenLattice {
            current: vec![-bound.max(0); dim.saturating_sub(1)],
            bound,
            cap,
            done: cap < 0 || dim < 2,
        }
    }

    fn advance(&mut self) {
        for c in self.current.iter_mut().rev() {
            if *c < self.bound {
                *c += 1;
                return;
            }
            *c = -self.bound;
        }
        self.done = true;
    }
}

impl Iterator for EvenLattice {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        while !self.done {
            let r = self.current.clone();
            self.advance();
            let norm: i64 = r.iter().map(|v| v * v).sum();
            if norm <= self.cap && r.iter().sum::<i64>().rem_euclid(2) == 0 {
                return Some(r);
            }
        }
        None
    }
}

/// Visits even orthant points `(k, r_2, …)` with `r_j ≥ 0`, reporting
/// `(|r|², number of sign images)`.
fn visit_slab<F: FnMut(i64, u64)>(dim: usize, cap: i64, k: i64, f: &mut F) {
    fn rec<F: FnMut(i64, u64)>(rem: usize, cap: i64, norm: i64, parity: i64, weight: u64, f: &mut F) {
        if rem == 0 {
            if parity % 2 == 0 {
                f(norm, weight);
            }
            return;
        }
        let top = isqrt(cap - norm);
        for v in 0..=top {
            let w = if v > 0 { 2 * weight } else { weight };
            rec(rem - 1, cap, norm + v * v, parity + v, w, f);
        }
    }
    if k * k > cap {
        return;
    }
    let weight = if k > 0 { 2 } else { 1 };
    rec(dim - 2, cap, k * k, k, weight, f);
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeSumQuery {
    pub t: f64,
    pub b: f64,
    pub n: f64,
    pub dim: usize,
}

impl LatticeSumQuery {
    pub fn new(t: f64, b: f64, n: f64, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter("dimension must be at least 2"));
        }
        if !(t > 0.0) || !(b > 0.0) || !(n >= 0.0) || !t.is_finite() || !b.is_finite() || !n.is_finite() {
            return Err(Error::InvalidParameter("lattice sum needs t > 0, b > 0, N >= 0"));
        }
        Ok(LatticeSumQuery { t, b, n, dim })
    }

    /// Number of slabs; slab `k` holds the points with `|r_1| = k`.
    pub fn slab_count(&self) -> usize {
        (isqrt(norm_sq_cap(self.n)) + 1) as usize
    }

    /// Compensated partial sum over slab `k`.
    pub fn slab(&self, k: usize) -> f64 {
        let b2 = self.b * self.b;
        let e = -0.5 * self.t;
        let mut acc = CompensatedSum::default();
        visit_slab(self.dim, norm_sq_cap(self.n), k as i64, &mut |norm, w| {
            acc.add(w as f64 * libm::pow(norm as f64 + b2, e));
        });
        acc.value()
    }

    /// Merges slab partial sums given in slab order.
    pub fn merge(slabs: &[f64]) -> f64 {
        let mut acc = CompensatedSum::default();
        slabs.iter().for_each(|v| acc.add(*v));
        acc.value()
    }
}

pub fn lattice_sum(q: &LatticeSumQuery) -> f64 {
    let slabs: Vec<f64> = (0..q.slab_count()).map(|k| q.slab(k)).collect();
    LatticeSumQuery::merge(&slabs)
}

/// `2π^{(d-1)/2} / Γ((d-1)/2)`, the area of the unit sphere in `R^{d-1}`.
pub fn sphere_area(dim: usize) -> f64 {
    let h = (dim as f64 - 1.0) / 2.0;
    2.0 * libm::pow(PI, h) / libm::tgamma(h)
}

/// Constant of the upper bracket.
pub fn upper_constant(t: f64, dim: usize) -> f64 {
    libm::exp2(1.5 * t - dim as f64 + 1.0) * sphere_area(dim) * 2.0
}

/// Constant of the lower bracket.
pub fn lower_constant(t: f64, dim: usize) -> f64 {
    libm::pow(6.0, 1.0 - dim as f64) * libm::exp2(-t) * sphere_area(dim)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket {
    pub lower: f64,
    /// Absent for `t = d - 1`, where the full sum diverges.
    pub upper: Option<f64>,
}

pub fn sum_bracket(q: &LatticeSumQuery) -> Result<Bracket> {
    let d = q.dim as f64;
    if q.b < 3.0 * libm::sqrt(d - 1.0) {
        return Err(Error::Hypothesis("b >= 3 sqrt(d-1)"));
    }
    if q.n < q.b {
        return Err(Error::Hypothesis("N >= b"));
    }
    let excess = q.t - (d - 1.0);
    if excess == 0.0 {
        return Ok(Bracket {
            lower: lower_constant(q.t, q.dim) * libm::log(q.n / q.b),
            upper: None,
        });
    }
    if !(excess > 0.0 && q.t <= d) {
        return Err(Error::Domain("bracket needs d-1 < t <= d or t = d-1"));
    }
    let tail = libm::pow(q.b, -excess) / excess;
    let cut = 1.0 - libm::pow(q.n / q.b, -excess);
    Ok(Bracket {
        lower: lower_constant(q.t, q.dim) * tail * cut,
        upper: Some(upper_constant(q.t, q.dim) * tail),
    })
}

/// `|r|²` values up to this are kept as exact classes.
pub const EXACT_CLASS_LIMIT: i64 = 1 << 20;
/// Ratio between consecutive `|r|²` bins beyond [`EXACT_CLASS_LIMIT`].
pub const BIN_RATIO: f64 = 1.0 + 1.0 / 4096.0;

/// A group of lattice points sharing (an upper estimate of) `|r|²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialClass {
    /// Largest `|r|²` in the class.
    pub norm_sq: i64,
    pub multiplicity: u64,
}

/// Counts `r ∈ S, |r| ≤ N` by `|r|²`; exact up to [`EXACT_CLASS_LIMIT`],
/// geometric bins beyond. Slabs may be counted in separate counters and
/// merged.
#[derive(Clone, Debug)]
pub struct RadialCounter {
    dim: usize,
    cap: i64,
    exact: Vec<u64>,
    bins: Vec<(u64, i64)>,
}

impl RadialCounter {
    pub fn new(n: f64, dim: usize) -> Self {
        let cap = norm_sq_cap(n);
        let exact_len = (cap.min(EXACT_CLASS_LIMIT) + 1).max(0) as usize;
        let bins = if cap > EXACT_CLASS_LIMIT { Self::bin_of(cap) + 1 } else { 0 };
        RadialCounter {
            dim,
            cap,
            exact: vec![0; exact_len],
            bins: vec![(0, 0); bins],
        }
    }

    fn bin_of(k: i64) -> usize {
        let v = libm::log(k as f64 / EXACT_CLASS_LIMIT as f64) / libm::log(BIN_RATIO);
        libm::floor(v) as usize
    }

    pub fn slab_count(&self) -> usize {
        (isqrt(self.cap) + 1) as usize
    }

    pub fn count_slab(&mut self, k: usize) {
        let (exact, bins) = (&mut self.exact, &mut self.bins);
        visit_slab(self.dim, self.cap, k as i64, &mut |norm, w| {
            if norm <= EXACT_CLASS_LIMIT {
                exact[norm as usize] += w;
            } else {
                let slot = &mut bins[Self::bin_of(norm)];
                slot.0 += w;
                slot.1 = slot.1.max(norm);
            }
        });
    }

    pub fn merge(&mut self, other: &RadialCounter) {
        self.exact.iter_mut().zip(&other.exact).for_each(|(a, b)| *a += b);
        for (a, b) in self.bins.iter_mut().zip(&other.bins) {
            a.0 += b.0;
            a.1 = a.1.max(b.1);
        }
    }

    /// Nonempty classes in increasing `|r|²`.
    pub fn finish(&self) -> Vec<RadialClass> {
        let exact = self.exact.iter().enumerate().filter(|(_, m)| **m > 0);
        let exact = exact.map(|(k, m)| RadialClass {
            norm_sq: k as i64,
            multiplicity: *m,
        });
        let binned = self.bins.iter().filter(|(m, _)| *m > 0).map(|(m, k)| RadialClass {
            norm_sq: *k,
            multiplicity: *m,
        });
        exact.chain(binned).collect()
    }
}

pub fn radial_classes(n: f64, dim: usize) -> Vec<RadialClass> {
    let mut counter = RadialCounter::new(n, dim);
    for k in 0..counter.slab_count() {
        counter.count_slab(k);
    }
    counter.finish()
}
