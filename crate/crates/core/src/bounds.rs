//! Dimension bounds for the Julia set of `f_a`.
//!
//! *Upper*: the covering criterion `τ(t) = c₇ a^{d-1-t} / (t-d+1) < 1`
//! bounds the dimension of the radial Julia set by `t`; the root of
//! `τ(t) = 1` is the best such `t`.
//!
//! *Lower*: the two-level maps `Λ^s ∘ Λ^r`, `r, s ∈ S`, `|r|, |s| ≤ N`, form
//! an IFS on `K = B(-ā, R) ∩ H_{≥M}` with `R = 8ρN` whose contraction floors
//! are `b_{r,s} = c₃² / (2√2 R √(ρ²|r|² + L²))`, `L = a + log R`. The root of
//! the Moran equation `Σ b_{r,s}^t = 1` bounds the dimension of the limit
//! set, hence of the bounded-orbit Julia set, from below.

use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::lattice::{upper_constant, CompensatedSum, RadialClass};
use crate::solve::{bisect_decreasing, Root};
use crate::zorich::DerivedConstants;

/// The covering sum `τ` as a function of `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperBoundModel {
    pub dim: usize,
    pub half_side: f64,
    pub branch_max: f64,
    /// Force `c₇ = 1`.
    pub unit: bool,
}

impl UpperBoundModel {
    pub fn new(dim: usize, half_side: f64, constants: &DerivedConstants, unit: bool) -> Result<Self> {
        if dim < 2 || !(half_side > 0.0) {
            return Err(Error::InvalidParameter("need d >= 2 and rho > 0"));
        }
        Ok(UpperBoundModel {
            dim,
            half_side,
            branch_max: constants.branch_max,
            unit,
        })
    }

    /// `c₇(t) = c₆(t) (c₄π)^t / ρ^{d-1}`.
    pub fn c7(&self, t: f64) -> f64 {
        if self.unit {
            return 1.0;
        }
        let d = self.dim as f64;
        upper_constant(t, self.dim) * libm::pow(self.branch_max * PI, t) / libm::pow(self.half_side, d - 1.0)
    }

    pub fn tau(&self, t: f64, a: f64) -> Result<f64> {
        let excess = t - (self.dim as f64 - 1.0);
        if !(excess > 0.0) {
            return Err(Error::Domain("tau needs t > d-1"));
        }
        if !(a > 1.0) {
            return Err(Error::Domain("tau needs a > 1"));
        }
        Ok(self.c7(t) * libm::pow(a, -excess) / excess)
    }

    /// Root of `τ(t) = 1` in `(d-1, d]`.
    pub fn solve(&self, a: f64) -> Result<Root> {
        let d = self.dim as f64;
        if !(a > 1.0) {
            return Err(Error::Domain("tau needs a > 1"));
        }
        if a / self.half_side < libm::sqrt(d - 1.0) / 7.0 {
            return Err(Error::Hypothesis("a/rho >= sqrt(d-1)/7"));
        }
        let tau_at_d = self.tau(d, a)?;
        if tau_at_d >= 1.0 {
            return Err(Error::ATooSmall { tau_at_d });
        }
        let lo = (d - 1.0) * (1.0 + 4.0 * f64::EPSILON);
        bisect_decreasing(|t| self.tau(t, a).unwrap_or(f64::INFINITY), lo, d, 1.0)
    }
}

pub fn upper_bound_dimension(
    a: f64,
    constants: &DerivedConstants,
    dim: usize,
    half_side: f64,
    unit: bool,
) -> Result<Root> {
    UpperBoundModel::new(dim, half_side, constants, unit)?.solve(a)
}

/// A finite multiset of contraction ratios, stored as `(ratio, multiplicity)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FactorMultiset {
    entries: Vec<(f64, f64)>,
}

impl FactorMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_values(values: &[f64]) -> Self {
        let mut m = Self::new();
        values.iter().for_each(|v| m.push(*v, 1.0));
        m
    }

    pub fn push(&mut self, factor: f64, multiplicity: f64) {
        self.entries.push((factor, multiplicity));
    }

    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// `Σ b^t`, accumulated in storage order.
    pub fn sum(&self, t: f64) -> f64 {
        let mut acc = CompensatedSum::default();
        self.entries.iter().for_each(|(b, m)| acc.add(m * libm::pow(*b, t)));
        acc.value()
    }
}

/// Root of the Moran equation `Σ b_j^t = 1`.
pub fn moran_solve(factors: &FactorMultiset) -> Result<Root> {
    if factors.entries().is_empty() {
        return Err(Error::InvalidParameter("empty factor multiset"));
    }
    if factors.entries().iter().any(|(b, m)| !(*b > 0.0 && *b < 1.0) || !(*m > 0.0)) {
        return Err(Error::InvalidParameter("factors must lie in (0, 1)"));
    }
    if factors.total() <= 1.0 {
        return Err(Error::NoRoot);
    }
    let mut hi = 1.0;
    while factors.sum(hi) >= 1.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::NoRoot);
        }
    }
    bisect_decreasing(|t| factors.sum(t), 0.0, hi, 1.0)
}

/// Factors of all `(r, s)` with `|r|²` in one class.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactorClass {
    pub norm_sq: i64,
    pub factor: f64,
    /// Number of `r` in the class.
    pub multiplicity: u64,
}

/// The two-level IFS of the lower bound.
#[derive(Clone, Debug, PartialEq)]
pub struct IfsSpec {
    pub a: f64,
    pub n: u64,
    pub half_side: f64,
    pub dim: usize,
    /// `R = 8ρN`.
    pub radius: f64,
    /// `L = a + log R`.
    pub height: f64,
    /// `M`; `K` is the part of `B(-ā, R)` above it.
    pub level: f64,
    pub branch_min: f64,
    pub classes: Vec<FactorClass>,
    /// Number of admissible `s`, equal to the number of admissible `r`.
    pub s_count: u64,
}

impl IfsSpec {
    pub fn build(a: f64, constants: &DerivedConstants, dim: usize, half_side: f64, n: u64) -> Result<Self> {
        let classes = crate::lattice::radial_classes(n as f64, dim);
        Self::from_classes(a, constants, dim, half_side, n, &classes)
    }

    /// As [`IfsSpec::build`], with the `|r|²` classes for radius `N` supplied.
    pub fn from_classes(
        a: f64,
        constants: &DerivedConstants,
        dim: usize,
        half_side: f64,
        n: u64,
        classes: &[RadialClass],
    ) -> Result<Self> {
        if dim < 2 || !(half_side > 0.0) {
            return Err(Error::InvalidParameter("need d >= 2 and rho > 0"));
        }
        if constants.check_parameter(a).is_err() {
            return Err(Error::Hypothesis("a >= e^M - m"));
        }
        let rho = half_side;
        let nf = n as f64;
        if nf < a / rho {
            return Err(Error::Hypothesis("N >= a/rho"));
        }
        let radius = 8.0 * rho * nf;
        let height = a + libm::log(radius);
        let level = constants.expansion_level;
        if radius < level + a {
            return Err(Error::Hypothesis("R >= M + a (K non-empty)"));
        }
        let dm = dim as f64 - 1.0;
        if dm * rho * rho > 7.0 * height * height {
            return Err(Error::Hypothesis("(d-1) rho^2 <= 7 L^2"));
        }
        let reach = rho * (2.0 * nf + libm::sqrt(dm));
        if reach * reach + height * height > radius * radius {
            return Err(Error::Hypothesis("images of admissible tracts lie in K"));
        }
        let mut spec = IfsSpec {
            a,
            n,
            half_side,
            dim,
            radius,
            height,
            level,
            branch_min: constants.branch_min,
            classes: Vec::with_capacity(classes.len()),
            s_count: classes.iter().map(|c| c.multiplicity).sum(),
        };
        for c in classes {
            if c.norm_sq as f64 > nf * nf * (1.0 + 4.0 * f64::EPSILON) {
                return Err(Error::InvalidParameter("radial class outside |r| <= N"));
            }
            let factor = spec.factor(c.norm_sq);
            if !(factor > 0.0 && factor < 1.0) {
                return Err(Error::Hypothesis("contraction floors in (0, 1)"));
            }
            spec.classes.push(FactorClass {
                norm_sq: c.norm_sq,
                factor,
                multiplicity: c.multiplicity,
            });
        }
        Ok(spec)
    }

    /// `b_{r,s}` for `|r|² = norm_sq`; independent of `s`.
    pub fn factor(&self, norm_sq: i64) -> f64 {
        let rho = self.half_side;
        let c3 = self.branch_min;
        let inner = rho * rho * norm_sq as f64 + self.height * self.height;
        c3 * c3 / (2.0 * SQRT_2 * self.radius * libm::sqrt(inner))
    }

    /// Number of maps `Λ^s ∘ Λ^r`.
    pub fn map_count(&self) -> u128 {
        self.s_count as u128 * self.s_count as u128
    }

    pub fn multiset(&self) -> FactorMultiset {
        let mut m = FactorMultiset::new();
        let s = self.s_count as f64;
        self.classes.iter().for_each(|c| m.push(c.factor, c.multiplicity as f64 * s));
        m
    }

    /// `Σ_{r,s} b_{r,s}^t`.
    pub fn moran_sum(&self, t: f64) -> f64 {
        self.multiset().sum(t)
    }

    pub fn solve(&self) -> Result<Root> {
        moran_solve(&self.multiset())
    }

    /// `K = B(-ā, R) ∩ H_{≥M}` membership with tolerance.
    pub fn in_ball(&self, x: &[f64], tol: f64) -> bool {
        let (h, last) = x.split_at(x.len() - 1);
        let v = last[0] + self.a;
        let n2: f64 = h.iter().map(|c| c * c).sum::<f64>() + v * v;
        libm::sqrt(n2) <= self.radius + tol && last[0] >= self.level - tol
    }
}

/// `γ(a)` and `log β(a) = 1/γ(a)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schedule {
    pub gamma: f64,
    pub log_beta: f64,
}

pub fn gamma_beta(a: f64) -> Result<Schedule> {
    if !(a > libm::exp(core::f64::consts::E)) {
        return Err(Error::Domain("gamma needs a > e^e"));
    }
    let l1 = libm::log(a);
    let l2 = libm::log(l1);
    let l3 = libm::log(l2);
    let gamma = 0.5 * l2 / l1 - l3 / l1;
    if !(gamma > 0.0) {
        return Err(Error::Domain("gamma(a) <= 0"));
    }
    Ok(Schedule {
        gamma,
        log_beta: 1.0 / gamma,
    })
}

/// How `N` was chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NSource {
    /// Supplied by the caller.
    Explicit,
    /// `⌈aβ(a)/ρ⌉`, below the cap.
    Schedule,
    /// `⌈aβ(a)/ρ⌉` exceeded the cap.
    Truncated,
    /// `γ(a)` undefined; the cap is used.
    Cap,
}

/// Default radius `min(⌈aβ(a)/ρ⌉, N_cap)`, raised to `⌈a/ρ⌉` if necessary.
pub fn default_radius(a: f64, half_side: f64, n_cap: u64) -> (u64, NSource) {
    let floor = libm::ceil(a / half_side).max(1.0) as u64;
    let (n, src) = match gamma_beta(a) {
        Err(_) => (n_cap, NSource::Cap),
        Ok(s) => {
            let log_n = libm::log(a) + s.log_beta - libm::log(half_side);
            if log_n >= libm::log(n_cap as f64) {
                (n_cap, NSource::Truncated)
            } else {
                ((libm::ceil(libm::exp(log_n)) as u64).min(n_cap), NSource::Schedule)
            }
        }
    };
    (n.max(floor), src)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LowerBound {
    pub root: Root,
    pub n_used: u64,
    pub source: NSource,
    pub map_count: u128,
}

pub fn lower_bound_dimension(
    a: f64,
    constants: &DerivedConstants,
    dim: usize,
    half_side: f64,
    n: Option<u64>,
    n_cap: u64,
) -> Result<LowerBound> {
    let (n, source) = match n {
        Some(n) => (n, NSource::Explicit),
        None => default_radius(a, half_side, n_cap),
    };
    let spec = IfsSpec::build(a, constants, dim, half_side, n)?;
    Ok(LowerBound {
        root: spec.solve()?,
        n_used: n,
        source,
        map_count: spec.map_count(),
    })
}
