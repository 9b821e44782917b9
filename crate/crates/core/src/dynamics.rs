//! Finite-horizon orbit classification, chaos-game sampling of the IFS
//! limit set and box-counting dimension estimates.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::IfsSpec;
use crate::branches::Branches;
use crate::error::{Error, Result};
use crate::lattice::norm_sq_cap;
use crate::point::{euclidean_norm, Point};
use crate::zorich::ZorichMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Attracted,
    Escaping,
    Bounded,
    Undecided,
}

impl Label {
    pub const ALL: [Label; 4] = [Label::Attracted, Label::Escaping, Label::Bounded, Label::Undecided];

    /// Export code: 0 attracted, 1 escaping, 2 bounded, 3 undecided.
    pub fn code(self) -> u8 {
        match self {
            Label::Attracted => 0,
            Label::Escaping => 1,
            Label::Bounded => 2,
            Label::Undecided => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<Label> {
        Label::ALL.get(code as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::Attracted => "attracted",
            Label::Escaping => "escaping",
            Label::Bounded => "bounded",
            Label::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitParams {
    pub n_max: usize,
    /// An orbit escapes once `x_d` exceeds this for `window_len` consecutive steps.
    pub escape_threshold: f64,
    pub window_len: usize,
    pub attract_tol: f64,
    /// Orbits that stay in `B(-ā, radius_cap)` for `n_max` steps are bounded.
    pub radius_cap: f64,
}

impl OrbitParams {
    /// Defaults for parameter `a`: threshold `log(10(a+1))`, window 3,
    /// tolerance `1e-8`, cap `10(a + R)` with `R = 8ρ⌈a/ρ⌉`.
    pub fn defaults(a: f64, half_side: f64) -> Self {
        let n = libm::ceil(a / half_side).max(1.0);
        let radius = 8.0 * half_side * n;
        OrbitParams {
            n_max: 1000,
            escape_threshold: libm::log(10.0 * (a + 1.0)),
            window_len: 3,
            attract_tol: 1e-8,
            radius_cap: 10.0 * (a + radius),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max < 1 || self.window_len < 1 {
            return Err(Error::InvalidParameter("n_max and window_len must be at least 1"));
        }
        if !(self.attract_tol > 0.0) || !(self.radius_cap > 0.0) || self.escape_threshold.is_nan() {
            return Err(Error::InvalidParameter("orbit tolerances must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitVerdict {
    pub label: Label,
    pub iterations: usize,
    pub final_point: Point,
    pub max_last_coordinate: f64,
    /// The orbit overflowed to a non-finite value (labelled escaping).
    pub overflow: bool,
}

/// Iterates `f_a` from `x0`; `xi` is the attracting fixed point.
pub fn iterate_orbit(map: &ZorichMap, a: f64, xi: &Point, x0: &Point, params: &OrbitParams) -> OrbitVerdict {
    let d = map.dim();
    let mut x = x0.coords().to_vec();
    let mut next = vec![0.0; d];
    let mut max_last = x[d - 1];
    let mut above = 0;
    let mut left_ball = false;
    let done = |label, iterations, x: Vec<f64>, max_last, overflow| OrbitVerdict {
        label,
        iterations,
        final_point: Point::from_vec_unchecked(x),
        max_last_coordinate: max_last,
        overflow,
    };
    for it in 0..=params.n_max {
        if !x.iter().all(|v| v.is_finite()) {
            return done(Label::Escaping, it, x, f64::INFINITY, true);
        }
        let gap = euclidean_norm(&x.iter().zip(xi.coords()).map(|(p, q)| p - q).collect::<Vec<_>>());
        if gap < params.attract_tol {
            return done(Label::Attracted, it, x, max_last, false);
        }
        if x[d - 1] > params.escape_threshold {
            above += 1;
            if above >= params.window_len {
                return done(Label::Escaping, it, x, max_last, false);
            }
        } else {
            above = 0;
        }
        let mut shifted = x.clone();
        shifted[d - 1] += a;
        if euclidean_norm(&shifted) > params.radius_cap {
            left_ball = true;
        }
        if it == params.n_max {
            break;
        }
        map.eval_shifted_into(a, &x, &mut next);
        core::mem::swap(&mut x, &mut next);
        max_last = max_last.max(x[d - 1]);
    }
    let label = if left_ball { Label::Undecided } else { Label::Bounded };
    done(label, params.n_max, x, max_last, false)
}

/// A regular grid over an axis-aligned box; node `k` along axis `j` sits at
/// `lo_j + (hi_j - lo_j) k / (res_j - 1)`. Flat node indices run with axis 0
/// fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub resolution: Vec<usize>,
}

impl GridSpec {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, resolution: Vec<usize>) -> Result<Self> {
        if lo.len() < 2 || lo.len() != hi.len() || lo.len() != resolution.len() {
            return Err(Error::InvalidParameter("grid box and resolution must share dimension >= 2"));
        }
        if resolution.iter().any(|r| *r < 2) {
            return Err(Error::InvalidParameter("grid resolution must be at least 2 per axis"));
        }
        if lo.iter().zip(&hi).any(|(l, h)| !(l.is_finite() && h.is_finite() && l <= h)) {
            return Err(Error::InvalidParameter("grid box must have finite lo <= hi"));
        }
        Ok(GridSpec { lo, hi, resolution })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn node_count(&self) -> usize {
        self.resolution.iter().product()
    }

    pub fn node(&self, mut index: usize) -> Point {
        let x = (0..self.dim())
            .map(|j| {
                let res = self.resolution[j];
                let k = index % res;
                index /= res;
                self.lo[j] + (self.hi[j] - self.lo[j]) * k as f64 / (res - 1) as f64
            })
            .collect();
        Point::from_vec_unchecked(x)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabelGrid {
    pub grid: GridSpec,
    pub labels: Vec<Label>,
}

impl LabelGrid {
    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|l| **l == label).count()
    }
}

/// Labels of the nodes `range` of `grid`; the building block for parallel callers.
pub fn classify_nodes(
    map: &ZorichMap,
    a: f64,
    xi: &Point,
    grid: &GridSpec,
    range: core::ops::Range<usize>,
    params: &OrbitParams,
) -> Vec<Label> {
    range
        .map(|i| iterate_orbit(map, a, xi, &grid.node(i), params).label)
        .collect()
}

pub fn classify_grid(map: &ZorichMap, a: f64, grid: &GridSpec, params: &OrbitParams) -> Result<LabelGrid> {
    if grid.dim() != map.dim() {
        return Err(Error::DimensionMismatch {
            expected: map.dim(),
            found: grid.dim(),
        });
    }
    params.validate()?;
    let xi = map.fixed_point(a)?;
    let labels = classify_nodes(map, a, &xi, grid, 0..grid.node_count(), params);
    Ok(LabelGrid {
        grid: grid.clone(),
        labels,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChaosParams {
    pub n_points: usize,
    pub burn_in: usize,
    pub seed: u64,
    /// Independent generator streams; stream `k` emits a contiguous block.
    pub streams: usize,
}

/// Samples of the limit set of the IFS, stored flat (`dim` values per point).
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    pub dim: usize,
    pub coords: Vec<f64>,
    pub params: ChaosParams,
}

impl PointCloud {
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }
}

/// Start of every stream: on the axis of `K`, halfway up its vertical extent.
pub fn chaos_start(ifs: &IfsSpec) -> Vec<f64> {
    let mut x = vec![0.0; ifs.dim];
    x[ifs.dim - 1] = ifs.level.max(0.5 * (ifs.level + ifs.radius - ifs.a));
    x
}

/// Number of points emitted by stream `k`.
pub fn stream_len(params: &ChaosParams, k: usize) -> usize {
    let base = params.n_points / params.streams;
    base + usize::from(k < params.n_points % params.streams)
}

fn draw_index(rng: &mut ChaCha8Rng, out: &mut [i64], bound: i64, cap: i64) {
    loop {
        out.iter_mut().for_each(|v| *v = rng.gen_range(-bound..=bound));
        let norm: i64 = out.iter().map(|v| v * v).sum();
        if norm <= cap && out.iter().sum::<i64>().rem_euclid(2) == 0 {
            return;
        }
    }
}

/// Points of stream `k`, burn-in discarded.
pub fn chaos_stream(map: &ZorichMap, ifs: &IfsSpec, params: &ChaosParams, k: usize) -> Result<Vec<f64>> {
    let branches = Branches::new(map, ifs.a)?;
    let d = ifs.dim;
    let cap = norm_sq_cap(ifs.n as f64);
    let bound = ifs.n as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(k as u64);
    let mut x = chaos_start(ifs);
    let mut mid = vec![0.0; d];
    let mut r = vec![0i64; d - 1];
    let mut s = vec![0i64; d - 1];
    let count = stream_len(params, k);
    let mut out = Vec::with_capacity(count * d);
    for step in 0..params.burn_in + count {
        draw_index(&mut rng, &mut r, bound, cap);
        draw_index(&mut rng, &mut s, bound, cap);
        branches.invert_unchecked(&s, &x, &mut mid);
        branches.invert_unchecked(&r, &mid, &mut x);
        if step >= params.burn_in {
            out.extend_from_slice(&x);
        }
    }
    Ok(out)
}

pub fn chaos_game(map: &ZorichMap, ifs: &IfsSpec, params: &ChaosParams) -> Result<PointCloud> {
    if params.n_points < 1 || params.streams < 1 {
        return Err(Error::InvalidParameter("chaos game needs n_points >= 1 and streams >= 1"));
    }
    if map.dim() != ifs.dim || map.half_side() != ifs.half_side {
        return Err(Error::InvalidParameter("IFS and map configurations differ"));
    }
    let mut coords = Vec::with_capacity(params.n_points * ifs.dim);
    for k in 0..params.streams {
        coords.extend(chaos_stream(map, ifs, params, k)?);
    }
    Ok(PointCloud {
        dim: ifs.dim,
        coords,
        params: *params,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxCount {
    pub estimate: f64,
    /// Coefficient of determination of the log-log fit.
    pub fit_r2: f64,
    /// `(ε, N(ε))`, coarsest first.
    pub counts: Vec<(f64, usize)>,
}

/// Boxes of side `eps` anchored at `anchor` that contain a point.
pub fn occupied_boxes(coords: &[f64], dim: usize, anchor: &[f64], eps: f64) -> usize {
    let mut keys: Vec<Vec<i64>> = coords
        .chunks_exact(dim)
        .map(|p| {
            p.iter()
                .zip(anchor)
                .map(|(x, o)| libm::floor((x - o) / eps) as i64)
                .collect()
        })
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys.len()
}

/// Slope of `log N(ε)` against `log(1/ε)` by least squares.
pub fn fit_counts(counts: &[(f64, usize)]) -> BoxCount {
    let pts: Vec<(f64, f64)> = counts
        .iter()
        .map(|(e, n)| (-libm::log(*e), libm::log(*n as f64)))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let fit_r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    BoxCount {
        estimate: slope,
        fit_r2,
        counts: counts.to_vec(),
    }
}

/// Box-counting dimension over the given scales (distinct, any order).
pub fn box_counting_dimension(coords: &[f64], dim: usize, anchor: &[f64], scales: &[f64]) -> Result<BoxCount> {
    check_scales(coords, dim, anchor, scales)?;
    let mut scales = scales.to_vec();
    scales.sort_by(|a, b| b.total_cmp(a));
    let counts: Vec<(f64, usize)> = scales
        .iter()
        .map(|e| (*e, occupied_boxes(coords, dim, anchor, *e)))
        .collect();
    Ok(fit_counts(&counts))
}

/// Rejects clouds under 10³ points and fewer than 4 scales or a span below 4×.
pub fn check_scales(coords: &[f64], dim: usize, anchor: &[f64], scales: &[f64]) -> Result<()> {
    if dim < 1 || anchor.len() != dim || !coords.len().is_multiple_of(dim) {
        return Err(Error::InvalidParameter("cloud and anchor dimensions differ"));
    }
    if coords.len() / dim < 1000 || scales.len() < 4 {
        return Err(Error::InsufficientScaleRange);
    }
    if scales.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::InvalidParameter("box sizes must be positive"));
    }
    let hi = scales.iter().cloned().fold(f64::MIN, f64::max);
    let lo = scales.iter().cloned().fold(f64::MAX, f64::min);
    if hi < 4.0 * lo {
        return Err(Error::InsufficientScaleRange);
    }
    Ok(())
}

/// Halving scales from a quarter of the cloud's extent, stopping before the
/// count saturates at `n/20` occupied boxes (finer boxes mostly hold single
/// samples and measure the sample size, not the set).
pub fn auto_scales(coords: &[f64], dim: usize, anchor: &[f64]) -> Result<Vec<f64>> {
    let n = coords.len() / dim.max(1);
    let extent = coords
        .chunks_exact(dim)
        .flat_map(|p| p.iter().zip(anchor).map(|(x, o)| (x - o).abs()))
        .fold(0.0, f64::max);
    if !(extent > 0.0) || n < 1000 {
        return Err(Error::InsufficientScaleRange);
    }
    let mut scales = Vec::new();
    let mut eps = extent / 4.0;
    while scales.len() < 40 && occupied_boxes(coords, dim, anchor, eps) <= n / 20 {
        scales.push(eps);
        eps *= 0.5;
    }
    if scales.len() < 4 {
        return Err(Error::InsufficientScaleRange);
    }
    Ok(scales)
}
