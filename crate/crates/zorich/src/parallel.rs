//! Thread-parallel drivers around the core algorithms. Work is split into
//! fixed partitions and reassembled in partition order, so every result is
//! independent of the number of worker threads.

use rayon::prelude::*;

use zorich_core::bounds::{default_radius, IfsSpec, LowerBound, NSource};
use zorich_core::dynamics::{
    check_scales, chaos_stream, classify_nodes, fit_counts, occupied_boxes, BoxCount, ChaosParams, GridSpec,
    LabelGrid, OrbitParams, PointCloud,
};
use zorich_core::lattice::{LatticeSumQuery, RadialClass, RadialCounter};
use zorich_core::zorich::{DerivedConstants, ZorichMap};
use zorich_core::{Error, Result};

/// Worker threads: explicit count, else `ZORICH_THREADS`, else rayon's default.
pub fn thread_pool(threads: Option<usize>) -> rayon::ThreadPool {
    let env = std::env::var("ZORICH_THREADS").ok().and_then(|v| v.parse().ok());
    let n = threads.or(env).unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .expect("thread pool")
}

const GRID_CHUNK: usize = 256;

pub fn classify_grid(map: &ZorichMap, a: f64, grid: &GridSpec, params: &OrbitParams) -> Result<LabelGrid> {
    if grid.dim() != map.dim() {
        return Err(Error::DimensionMismatch {
            expected: map.dim(),
            found: grid.dim(),
        });
    }
    params.validate()?;
    let xi = map.fixed_point(a)?;
    let total = grid.node_count();
    let chunks: Vec<Vec<_>> = (0..total.div_ceil(GRID_CHUNK))
        .into_par_iter()
        .map(|c| {
            let range = c * GRID_CHUNK..((c + 1) * GRID_CHUNK).min(total);
            classify_nodes(map, a, &xi, grid, range, params)
        })
        .collect();
    Ok(LabelGrid {
        grid: grid.clone(),
        labels: chunks.concat(),
    })
}

pub fn chaos_game(map: &ZorichMap, ifs: &IfsSpec, params: &ChaosParams) -> Result<PointCloud> {
    if params.n_points < 1 || params.streams < 1 {
        return Err(Error::InvalidParameter("chaos game needs n_points >= 1 and streams >= 1"));
    }
    let streams: Vec<Vec<f64>> = (0..params.streams)
        .into_par_iter()
        .map(|k| chaos_stream(map, ifs, params, k))
        .collect::<Result<_>>()?;
    Ok(PointCloud {
        dim: ifs.dim,
        coords: streams.concat(),
        params: *params,
    })
}

pub fn lattice_sum(q: &LatticeSumQuery) -> f64 {
    let slabs: Vec<f64> = (0..q.slab_count()).into_par_iter().map(|k| q.slab(k)).collect();
    LatticeSumQuery::merge(&slabs)
}

pub fn radial_classes(n: f64, dim: usize) -> Vec<RadialClass> {
    let slabs = RadialCounter::new(n, dim).slab_count();
    (0..slabs)
        .into_par_iter()
        .fold(
            || RadialCounter::new(n, dim),
            |mut c, k| {
                c.count_slab(k);
                c
            },
        )
        .reduce(
            || RadialCounter::new(n, dim),
            |mut a, b| {
                a.merge(&b);
                a
            },
        )
        .finish()
}

pub fn lower_bound_dimension(
    a: f64,
    constants: &DerivedConstants,
    dim: usize,
    half_side: f64,
    n: Option<u64>,
    n_cap: u64,
) -> Result<(IfsSpec, LowerBound)> {
    let (n, source) = match n {
        Some(n) => (n, NSource::Explicit),
        None => default_radius(a, half_side, n_cap),
    };
    let classes = radial_classes(n as f64, dim);
    let spec = IfsSpec::from_classes(a, constants, dim, half_side, n, &classes)?;
    let root = spec.solve()?;
    let bound = LowerBound {
        root,
        n_used: n,
        source,
        map_count: spec.map_count(),
    };
    Ok((spec, bound))
}

pub fn box_counting_dimension(coords: &[f64], dim: usize, anchor: &[f64], scales: &[f64]) -> Result<BoxCount> {
    check_scales(coords, dim, anchor, scales)?;
    let mut scales = scales.to_vec();
    scales.sort_by(|a, b| b.total_cmp(a));
    let counts: Vec<(f64, usize)> = scales
        .par_iter()
        .map(|e| (*e, occupied_boxes(coords, dim, anchor, *e)))
        .collect();
    Ok(fit_counts(&counts))
}
