//! Acceptance suite: one line per criterion, `PASS` or `FAIL`, with the
//! measured quantities. Exits non-zero when any criterion fails.
//!
//! Run with `cargo test -p zorich --test acceptance`.

use std::f64::consts::{E, FRAC_PI_2, PI};
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zorich::commands;
use zorich::config::RunConfig;
use zorich::parallel::{self, thread_pool};
use zorich_core::bounds::{moran_solve, upper_bound_dimension, FactorMultiset, IfsSpec, UpperBoundModel};
use zorich_core::branches::{fold_reflection, Branches, LatticeIndex};
use zorich_core::dynamics::{auto_scales, box_counting_dimension, chaos_game, ChaosParams};
use zorich_core::expmap::{conjugacy_defect, ComplexPoint};
use zorich_core::geom::HemisphereParam;
use zorich_core::lattice::{lattice_sum, sum_bracket, LatticeSumQuery};
use zorich_core::zorich::{DerivedConstants, ZorichMap};
use zorich_core::Point;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn run(n: u32, limit: Option<Duration>, f: impl FnOnce() -> Verdict) -> bool {
    let t = Instant::now();
    let v = f();
    let elapsed = t.elapsed();
    let in_time = limit.is_none_or(|l| elapsed < l);
    let pass = v.pass && in_time;
    let budget = match limit {
        Some(l) => format!("{:.2}s, limit {:.0}s", elapsed.as_secs_f64(), l.as_secs_f64()),
        None => format!("{:.2}s", elapsed.as_secs_f64()),
    };
    println!(
        "[criterion {n:>2}] {} ({budget}) {}",
        if pass { "PASS" } else { "FAIL" },
        v.detail
    );
    pass
}

fn planar() -> ZorichMap {
    ZorichMap::calibrated(HemisphereParam::planar(), 0.5, 64).unwrap()
}

fn cube3() -> ZorichMap {
    ZorichMap::calibrated(HemisphereParam::new(3, 1.0).unwrap(), 0.5, 256).unwrap()
}

/// Root of `e^y - y = a` below zero, by Newton from `-a`.
fn newton_fixed_height(a: f64) -> f64 {
    let mut y = -a;
    for _ in 0..100 {
        y -= (y.exp() - y - a) / (y.exp() - 1.0);
    }
    y
}

fn criterion_1() -> Verdict {
    let f = planar();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let worst = (0..10_000)
        .map(|_| ComplexPoint::new(rng.gen_range(-PI..PI), rng.gen_range(-5.0..5.0)))
        .map(|z| conjugacy_defect(&f, 3.0, z).unwrap())
        .fold(0.0, f64::max);
    verdict(worst < 1e-9, format!("conjugacy: max defect {worst:.3e} < 1e-9 over 10^4 points"))
}

fn criterion_2() -> Verdict {
    let xi = planar().fixed_point(3.0).unwrap();
    let oracle = newton_fixed_height(3.0);
    let err = xi[0].abs().max((xi[1] - oracle).abs());
    let frozen = (oracle - (-2.947530902542285)).abs() < 1e-12;
    verdict(
        err < 1e-8 && frozen,
        format!("fixed point: y = {:.12} vs Newton {oracle:.12}, error {err:.2e} < 1e-8", xi[1]),
    )
}

fn random_even(rng: &mut ChaCha8Rng, len: usize, bound: i64) -> LatticeIndex {
    loop {
        let r = LatticeIndex::new((0..len).map(|_| rng.gen_range(-bound..=bound)).collect());
        if r.is_even() && r.norm_sq() <= bound * bound {
            return r;
        }
    }
}

fn random_upper(rng: &mut ChaCha8Rng, d: usize, a: f64, level: f64) -> Point {
    loop {
        let mut v: Vec<f64> = (0..d - 1).map(|_| rng.gen_range(-10.0 * a..10.0 * a)).collect();
        v.push(rng.gen_range(level..9.0 * a));
        let p = Point::new(v).unwrap();
        if p.shifted_norm(a) <= 10.0 * a {
            return p;
        }
    }
}

fn criterion_3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut notes = Vec::new();
    let mut pass = true;
    for (f, a) in [(planar(), 3.0), (cube3(), 10.0)] {
        let d = f.dim();
        let br = Branches::new(&f, a).unwrap();
        let (mut worst, mut outside, mut translation) = (0.0f64, 0, 0.0f64);
        for _ in 0..10_000 {
            let r = random_even(&mut rng, d - 1, 20);
            let y = random_upper(&mut rng, d, a, br.level());
            let x = br.invert(&r, &y).unwrap();
            worst = worst.max(f.eval_shifted(a, &x).distance(&y));
            outside += usize::from(!br.tract(&r).contains(&x, 1e-12));
            let base = br.invert(&LatticeIndex::zero(d - 1), &fold_reflection(&r, &y)).unwrap();
            for j in 0..d {
                let shift = if j + 1 < d { 2.0 * f.half_side() * r.components()[j] as f64 } else { 0.0 };
                translation = translation.max((x[j] - (base[j] + shift)).abs());
            }
        }
        pass &= worst < 1e-10 && outside == 0 && translation <= 1e-14;
        notes.push(format!(
            "d={d}: round trip {worst:.2e} < 1e-10, {outside} outside tract, translation {translation:.1e} <= 1e-14"
        ));
    }
    verdict(pass, format!("inverse branches: {}", notes.join("; ")))
}

fn criterion_4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let f = cube3();
    let a = 10.0;
    let br = Branches::new(&f, a).unwrap();
    let (mut excess, mut n) = (0.0f64, 0);
    while n < 1000 {
        let y = random_upper(&mut rng, 3, a, br.level());
        let Ok(jac) = br.jacobian(&random_even(&mut rng, 2, 10), &y) else { continue };
        let (lo, hi) = jac.singular_extremes();
        let (el, eu) = br.derivative_envelope(&y).unwrap();
        excess = excess.max((el - lo) / eu).max((hi - eu) / eu);
        n += 1;
    }
    let p = planar();
    let c = p.constants();
    let tight = (c.branch_min - 1.0).abs().max((c.branch_max - 1.0).abs());
    let bp = Branches::new(&p, 3.0).unwrap();
    let mut planar_err = 0.0f64;
    for _ in 0..1000 {
        let y = random_upper(&mut rng, 2, 3.0, bp.level() + 1e-3);
        let jac = bp.jacobian(&random_even(&mut rng, 1, 20), &y).unwrap();
        let expect = 1.0 / y.shifted_norm(3.0);
        let (lo, hi) = jac.singular_extremes();
        planar_err = planar_err.max((lo - expect).abs() / expect).max((hi - expect).abs() / expect);
    }
    verdict(
        excess <= 1e-4 && tight < 1e-6 && planar_err < 1e-5,
        format!(
            "envelopes: d=3 relative excursion {excess:.2e} <= 1e-4 over 10^3 points; d=2 |c3-1|,|c4-1| = {tight:.1e}, \
             |DΛ| vs 1/|x+ā| relative error {planar_err:.2e} < 1e-5"
        ),
    )
}

fn criterion_5() -> Verdict {
    let q = LatticeSumQuery::new(2.0, 1.0, 2.0, 3).unwrap();
    let example = (lattice_sum(&q) - 47.0 / 15.0).abs();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut queries, mut bad, mut log_cases, mut log_bad) = (0, 0, 0, 0);
    for _ in 0..150 {
        let d = rng.gen_range(2..=4);
        let dm = d as f64 - 1.0;
        let b = rng.gen_range(3.0 * dm.sqrt()..15.0);
        let n = rng.gen_range(b..if d == 4 { 30.0 } else { 150.0 });
        let log_case = rng.gen_bool(0.25);
        let t = if log_case { dm } else { dm + rng.gen_range(1e-3..=1.0) };
        let q = LatticeSumQuery::new(t, b, n, d).unwrap();
        let s = lattice_sum(&q);
        let br = sum_bracket(&q).unwrap();
        if log_case {
            log_cases += 1;
            log_bad += usize::from(s < br.lower);
        } else {
            queries += 1;
            bad += usize::from(s < br.lower || br.upper.is_some_and(|u| s > u));
        }
    }
    verdict(
        example < 1e-12 && queries >= 100 && bad == 0 && log_bad == 0,
        format!(
            "lattice sums: |sum - 47/15| = {example:.1e} < 1e-12; bracket held on {}/{queries} queries; \
             log lower bound held on {}/{log_cases} t=d-1 queries",
            queries - bad,
            log_cases - log_bad
        ),
    )
}

fn criterion_6() -> Verdict {
    let thirds = FactorMultiset::from_values(&[1.0 / 3.0; 4]);
    let mut twentieths = FactorMultiset::new();
    twentieths.push(0.05, 81.0);
    let mut pass = true;
    let mut notes = Vec::new();
    for (m, exact, label) in [
        (thirds, 4f64.ln() / 3f64.ln(), "log4/log3"),
        (twentieths, 81f64.ln() / 20f64.ln(), "log81/log20"),
    ] {
        let r = moran_solve(&m).unwrap();
        let err = (r.t - exact).abs();
        let sign = m.sum(r.t - 1e-6) > 1.0 && m.sum(r.t + 1e-6) < 1.0;
        pass &= err < 1e-9 && sign && r.residual.abs() <= 1e-9;
        notes.push(format!("{label}: t* = {:.9} (error {err:.1e}, sign change {sign})", r.t));
    }
    verdict(pass, format!("Moran: {}", notes.join("; ")))
}

/// Root of `e^{-cu} = u` by plain bisection on `[0, 1]`.
fn scalar_oracle(c: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (-c * mid).exp() > mid {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn criterion_7() -> Verdict {
    let a = (E * E).exp();
    let unit = DerivedConstants::unit(0.5).unwrap();
    let root = upper_bound_dimension(a, &unit, 3, 1.0, true).unwrap();
    let oracle = 2.0 + scalar_oracle(E * E);
    let err = (root.t - oracle).abs();
    let cap = 2.0 + 2.0 / (E * E);
    verdict(
        err < 1e-6 && root.t <= cap && (oracle - 2.210_736_740_680_987).abs() < 1e-12,
        format!(
            "upper root (unit constants, d=3, a=e^(e^2)): t_upper = {:.10}, bisection oracle {oracle:.10}, \
             error {err:.1e} < 1e-6; t_upper <= 2 + 2/e^2 = {cap:.10}",
            root.t
        ),
    )
}

fn criterion_8() -> Verdict {
    let f = cube3();
    let c = f.constants();
    let a = 50.0;
    let build = |n: u64| IfsSpec::from_classes(a, c, 3, 1.0, n, &parallel::radial_classes(n as f64, 3)).unwrap();
    let main = build(200);
    let t_main = main.solve().unwrap().t;
    let primary = t_main > 2.0;

    let radii = [50u64, 100, 200, 400, 1000, 2000, 4000, 10_000];
    let specs: Vec<IfsSpec> = radii.iter().map(|n| build(*n)).collect();
    let ts: Vec<f64> = specs.iter().map(|s| s.solve().unwrap().t).collect();
    let monotone = ts.windows(2).all(|w| w[1] > w[0]) && ts[0] > 0.0;
    // Divergence proxy: the t = d-1 sum gains a fixed amount per doubling of N
    // once ρN exceeds L, i.e. it grows like log N.
    let sums: Vec<f64> = specs.iter().map(|s| s.moran_sum(2.0)).collect();
    let doubling: Vec<f64> = [(4, 5), (5, 6)]
        .iter()
        .map(|(i, j)| (sums[*j] - sums[*i]) / (radii[*j] as f64 / radii[*i] as f64).ln())
        .collect();
    let proxy = sums.windows(2).all(|w| w[1] > w[0]) && (doubling[1] / doubling[0] - 1.0).abs() < 0.1;
    let fallback = monotone && proxy;
    // The primary claim is unattainable when no tested N up to the cap (10^4) lifts
    // t_lower above d-1; the criterion then requires the fallback properties.
    let best = ts.iter().cloned().fold(f64::MIN, f64::max);
    let unattainable = !primary && best <= 2.0 && *radii.last().unwrap() == 10_000;
    verdict(
        primary || (unattainable && fallback),
        format!(
            "IFS lower bound d=3, a=50, N=200: t_lower = {t_main:.6} {} 2 = d-1{}; \
             t_lower(N) for N in {radii:?} = [{}] (positive, increasing: {monotone}); \
             t=2 Moran sum [{}] grows by {:.3e}, {:.3e} per unit log N (log-N proxy: {proxy})",
            if primary { ">" } else { "<=" },
            if unattainable { ", unattainable up to N_cap = 10^4, fallback checked" } else { "" },
            ts.iter().map(|t| format!("{t:.4}")).collect::<Vec<_>>().join(", "),
            sums.iter().map(|s| format!("{s:.3e}")).collect::<Vec<_>>().join(", "),
            doubling[0],
            doubling[1],
        ),
    )
}

fn criterion_9() -> Verdict {
    let f = planar();
    let c = f.constants();
    let model = UpperBoundModel::new(2, FRAC_PI_2, c, false).unwrap();
    let mut rows = Vec::new();
    let mut pass = true;
    let mut any = false;
    for a in [150.0, 300.0, 1000.0, 3000.0, 10_000.0] {
        let Ok(upper) = model.solve(a) else { continue };
        let Ok((_, lower)) = parallel::lower_bound_dimension(a, c, 2, FRAC_PI_2, None, 10_000) else { continue };
        any = true;
        let (tl, tu) = (lower.root.t, upper.t);
        let ok = tl < tu && tl > 1.0 && tl <= 2.0 && tu > 1.0 && tu <= 2.0;
        pass &= ok;
        rows.push(format!("a={a}: t_lower={tl:.4} (N={}), t_upper={tu:.4}", lower.n_used));
    }
    verdict(
        any && pass,
        format!("bracket ordering d=2 (needs t_lower < t_upper, both in (1, 2]): {}", rows.join("; ")),
    )
}

fn criterion_10() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let corners = [(0.0, 0.0), (2.0, 0.0), (0.0, 2.0), (2.0, 2.0)];
    let (mut x, mut y) = (0.5, 0.5);
    let mut dust = Vec::with_capacity(200_000);
    for i in 0..100_050 {
        let (cx, cy) = corners[rng.gen_range(0..4)];
        x = (x + cx) / 3.0;
        y = (y + cy) / 3.0;
        if i >= 50 {
            dust.extend([x, y]);
        }
    }
    let scales: Vec<f64> = (1..=6).map(|k| 0.999 * 3f64.powi(-k)).collect();
    let cantor = box_counting_dimension(&dust, 2, &[0.0, 0.0], &scales).unwrap().estimate;
    let cantor_ok = (1.16..=1.36).contains(&cantor);

    let f = cube3();
    let ifs = IfsSpec::build(50.0, f.constants(), 3, 1.0, 200).unwrap();
    let t_star = ifs.solve().unwrap().t;
    let params = ChaosParams {
        n_points: 100_000,
        burn_in: 20,
        seed: 10,
        streams: 8,
    };
    let cloud = chaos_game(&f, &ifs, &params).unwrap();
    let anchor = [-ifs.radius, -ifs.radius, ifs.level];
    let scales = auto_scales(&cloud.coords, 3, &anchor).unwrap();
    let est = box_counting_dimension(&cloud.coords, 3, &anchor, &scales).unwrap().estimate;
    verdict(
        cantor_ok && est >= t_star - 0.2,
        format!(
            "box counting: Cantor dust estimate {cantor:.4} in [1.16, 1.36]; Zorich IFS cloud (d=3, a=50, N=200) \
             estimate {est:.4} >= t_star - 0.2 = {:.4}",
            t_star - 0.2
        ),
    )
}

fn read_all(dir: &Path, names: &[&str]) -> Vec<Vec<u8>> {
    names.iter().map(|n| std::fs::read(dir.join(n)).unwrap()).collect()
}

fn criterion_11() -> Verdict {
    let root = tempfile::tempdir().unwrap();
    let names = ["classify.csv", "classify.json", "attractor.csv", "attractor.json"];
    let mut outputs = Vec::new();
    for (run, threads) in [(0, 1), (1, 1), (2, 8)] {
        let cfg = RunConfig {
            out: root.path().join(format!("run{run}")),
            seed: 11,
            ..RunConfig::default()
        };
        thread_pool(Some(threads)).install(|| {
            commands::cmd_classify(&cfg).unwrap();
            commands::cmd_attractor(&cfg).unwrap();
        });
        outputs.push(read_all(&cfg.out, &names));
    }
    let repeat = outputs[0] == outputs[1];
    let threads = outputs[0] == outputs[2];
    let bytes: usize = outputs[0].iter().map(|f| f.len()).sum();
    verdict(
        repeat && threads,
        format!(
            "determinism: classify+attractor outputs ({bytes} bytes) identical across runs: {repeat}, \
             1 vs 8 threads: {threads}"
        ),
    )
}

fn main() {
    let s = Duration::from_secs;
    let results = [
        run(1, Some(s(1)), criterion_1),
        run(2, Some(s(1)), criterion_2),
        run(3, Some(s(5)), criterion_3),
        run(4, Some(s(5)), criterion_4),
        run(5, Some(s(10)), criterion_5),
        run(6, Some(s(1)), criterion_6),
        run(7, Some(s(1)), criterion_7),
        run(8, Some(s(120)), criterion_8),
        run(9, Some(s(120)), criterion_9),
        run(10, Some(s(30)), criterion_10),
        run(11, None, criterion_11),
    ];
    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
