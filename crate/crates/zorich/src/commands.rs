//! The subcommands. Each validates its configuration, computes, and writes
//! its outputs atomically; failures carry the process exit code.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use zorich_core::bounds::{moran_solve, FactorMultiset, IfsSpec, NSource, UpperBoundModel};
use zorich_core::branches::{fold_reflection, Branches, LatticeIndex};
use zorich_core::dynamics::{auto_scales, chaos_start, Label};
use zorich_core::expmap::{conjugacy_defect, lambda_fixed_point, to_plane, ComplexPoint};
use zorich_core::geom::HemisphereParam;
use zorich_core::lattice::{sum_bracket, LatticeSumQuery};
use zorich_core::zorich::{DerivedConstants, ZorichMap};
use zorich_core::{bounds, Error, Point};

use crate::config::RunConfig;
use crate::output::{self, opt_real, real, Provenance};
use crate::parallel;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub files: Vec<PathBuf>,
    /// Human-readable summary, or the JSON payload for `sum`.
    pub summary: String,
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn precondition(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PRECONDITION,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::precondition(e.to_string())
    }
}

type CmdResult = Result<Outcome, Failure>;

fn write(files: Vec<(PathBuf, Vec<u8>)>) -> Result<Vec<PathBuf>, Failure> {
    output::write_atomic(&files).map_err(|e| Failure::precondition(format!("cannot write outputs: {e}")))?;
    Ok(files.into_iter().map(|f| f.0).collect())
}

/// The Zorich map of the configuration with sampled or unit constants.
pub fn build_map(cfg: &RunConfig) -> Result<ZorichMap, Failure> {
    let param = HemisphereParam::new(cfg.dim, cfg.half_side())?;
    let nodes = (cfg.samples_per_axis as f64).powi(cfg.dim as i32 - 1);
    if nodes > 2e7 {
        return Err(Failure::precondition(format!(
            "samples_per_axis^(d-1) = {nodes:.0} grid nodes is too many; lower samples_per_axis"
        )));
    }
    let constants = if cfg.unit_constants {
        DerivedConstants::unit(cfg.alpha)?
    } else {
        DerivedConstants::derive(&param, cfg.alpha, cfg.samples_per_axis)?
    };
    Ok(ZorichMap::new(param, constants))
}

#[derive(Serialize)]
struct ConstantsReport {
    c1: String,
    c2: String,
    c3: String,
    c4: String,
    m: String,
    #[serde(rename = "M")]
    big_m: String,
    min_parameter: String,
}

fn constants_report(c: &DerivedConstants) -> ConstantsReport {
    ConstantsReport {
        c1: real(c.dilation_min),
        c2: real(c.dilation_max),
        c3: real(c.branch_min),
        c4: real(c.branch_max),
        m: real(c.contraction_level),
        big_m: real(c.expansion_level),
        min_parameter: real(c.min_parameter()),
    }
}

fn source_name(s: NSource) -> &'static str {
    match s {
        NSource::Explicit => "explicit",
        NSource::Schedule => "schedule",
        NSource::Truncated => "schedule-truncated-at-cap",
        NSource::Cap => "cap",
    }
}

#[derive(Serialize)]
struct BoundReport {
    provenance: Provenance,
    a: String,
    d: usize,
    rho: String,
    alpha: String,
    unit_constants: bool,
    samples_per_axis: usize,
    constants: ConstantsReport,
    t_upper: Option<String>,
    upper_residual: Option<String>,
    upper_iterations: Option<usize>,
    upper_error: Option<String>,
    t_lower: Option<String>,
    lower_residual: Option<String>,
    lower_error: Option<String>,
    n_used: Option<u64>,
    n_source: Option<&'static str>,
    map_count: Option<String>,
    gamma: Option<String>,
    log_beta: Option<String>,
    beta: Option<String>,
    certificates: &'static str,
    ordered: Option<bool>,
    constants_ms: f64,
    upper_ms: f64,
    lower_ms: f64,
}

fn millis(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

pub fn cmd_bounds(cfg: &RunConfig) -> CmdResult {
    let t0 = Instant::now();
    let map = build_map(cfg)?;
    let constants_ms = millis(t0);
    let c = *map.constants();
    c.check_parameter(cfg.a)?;
    let (d, rho, a) = (cfg.dim, cfg.half_side(), cfg.a);

    let t1 = Instant::now();
    let upper = UpperBoundModel::new(d, rho, &c, cfg.unit_constants).and_then(|m| m.solve(a));
    let upper_ms = millis(t1);
    let t2 = Instant::now();
    let lower = parallel::lower_bound_dimension(a, &c, d, rho, cfg.lattice_n, cfg.n_cap);
    let lower_ms = millis(t2);
    let schedule = bounds::gamma_beta(a).ok();

    let certificates = match (&upper, &lower) {
        (Ok(_), Ok(_)) => "both",
        (Ok(_), Err(_)) => "upper",
        (Err(_), Ok(_)) => "lower",
        (Err(_), Err(_)) => "none",
    };
    let ordered = match (&upper, &lower) {
        (Ok(u), Ok((_, l))) => Some(l.root.t < u.t),
        _ => None,
    };
    let report = BoundReport {
        provenance: Provenance::new(cfg.hash(), cfg.seed),
        a: real(a),
        d,
        rho: real(rho),
        alpha: real(cfg.alpha),
        unit_constants: cfg.unit_constants,
        samples_per_axis: cfg.samples_per_axis,
        constants: constants_report(&c),
        t_upper: upper.as_ref().ok().map(|r| real(r.t)),
        upper_residual: upper.as_ref().ok().map(|r| real(r.residual)),
        upper_iterations: upper.as_ref().ok().map(|r| r.iterations),
        upper_error: upper.as_ref().err().map(|e| e.to_string()),
        t_lower: lower.as_ref().ok().map(|(_, l)| real(l.root.t)),
        lower_residual: lower.as_ref().ok().map(|(_, l)| real(l.root.residual)),
        lower_error: lower.as_ref().err().map(|e| e.to_string()),
        n_used: lower.as_ref().ok().map(|(_, l)| l.n_used),
        n_source: lower.as_ref().ok().map(|(_, l)| source_name(l.source)),
        map_count: lower.as_ref().ok().map(|(_, l)| l.map_count.to_string()),
        gamma: opt_real(schedule.map(|s| s.gamma)),
        log_beta: opt_real(schedule.map(|s| s.log_beta)),
        beta: opt_real(schedule.map(|s| s.log_beta.exp())),
        certificates,
        ordered,
        constants_ms,
        upper_ms,
        lower_ms,
    };
    let path = cfg.out.join("bounds.json");
    let files = write(vec![(path, output::json_bytes(&report))])?;
    let code = match certificates {
        "both" => EXIT_OK,
        "none" => EXIT_PRECONDITION,
        _ => EXIT_PARTIAL,
    };
    let show = |v: &Option<String>| v.clone().unwrap_or_else(|| "-".into());
    let summary = format!(
        "t_lower = {}  t_upper = {}  certificates: {certificates}{}{}",
        show(&report.t_lower),
        show(&report.t_upper),
        report.upper_error.as_ref().map(|e| format!("\nupper: {e}")).unwrap_or_default(),
        report.lower_error.as_ref().map(|e| format!("\nlower: {e}")).unwrap_or_default(),
    );
    Ok(Outcome { code, files, summary })
}

#[derive(Serialize)]
struct LabelCount {
    code: u8,
    label: &'static str,
    count: usize,
}

#[derive(Serialize)]
struct OrbitReport {
    n_max: usize,
    escape_threshold: String,
    window_len: usize,
    attract_tol: String,
    radius_cap: String,
}

#[derive(Serialize)]
struct ClassifyReport {
    provenance: Provenance,
    a: String,
    d: usize,
    rho: String,
    lo: Vec<String>,
    hi: Vec<String>,
    resolution: Vec<usize>,
    layout: &'static str,
    fixed_point: Vec<String>,
    orbit: OrbitReport,
    counts: Vec<LabelCount>,
}

pub fn cmd_classify(cfg: &RunConfig) -> CmdResult {
    let map = build_map(cfg)?;
    map.constants().check_parameter(cfg.a)?;
    let grid = cfg.grid_spec()?;
    let params = cfg.orbit_params();
    let labels = parallel::classify_grid(&map, cfg.a, &grid, &params)?;
    let xi = map.fixed_point(cfg.a)?;
    let report = ClassifyReport {
        provenance: Provenance::new(cfg.hash(), cfg.seed),
        a: real(cfg.a),
        d: cfg.dim,
        rho: real(cfg.half_side()),
        lo: grid.lo.iter().map(|v| real(*v)).collect(),
        hi: grid.hi.iter().map(|v| real(*v)).collect(),
        resolution: grid.resolution.clone(),
        layout: "one line per run of axis-0 nodes; later axes vary slower",
        fixed_point: xi.coords().iter().map(|v| real(*v)).collect(),
        orbit: OrbitReport {
            n_max: params.n_max,
            escape_threshold: real(params.escape_threshold),
            window_len: params.window_len,
            attract_tol: real(params.attract_tol),
            radius_cap: real(params.radius_cap),
        },
        counts: Label::ALL
            .iter()
            .map(|l| LabelCount {
                code: l.code(),
                label: l.name(),
                count: labels.count(*l),
            })
            .collect(),
    };
    let files = write(vec![
        (cfg.out.join("classify.csv"), output::grid_csv(&labels).into_bytes()),
        (cfg.out.join("classify.json"), output::json_bytes(&report)),
    ])?;
    let counts: Vec<String> = report.counts.iter().map(|c| format!("{} {}", c.label, c.count)).collect();
    Ok(Outcome {
        code: EXIT_OK,
        files,
        summary: counts.join(", "),
    })
}

#[derive(Serialize)]
struct ScaleCount {
    eps: String,
    count: usize,
}

#[derive(Serialize)]
struct AttractorReport {
    provenance: Provenance,
    a: String,
    d: usize,
    rho: String,
    lattice_n: u64,
    radius: String,
    height: String,
    level: String,
    map_count: String,
    n_points: usize,
    burn_in: usize,
    streams: usize,
    start: Vec<String>,
    t_star: Option<String>,
    t_star_error: Option<String>,
    box_estimate: Option<String>,
    fit_r2: Option<String>,
    box_error: Option<String>,
    anchor: Vec<String>,
    counts: Vec<ScaleCount>,
}

pub fn cmd_attractor(cfg: &RunConfig) -> CmdResult {
    let map = build_map(cfg)?;
    let c = *map.constants();
    c.check_parameter(cfg.a)?;
    let (d, rho, a) = (cfg.dim, cfg.half_side(), cfg.a);
    let n = cfg.lattice_n.unwrap_or_else(|| (a / rho).ceil().max(1.0) as u64);
    let classes = parallel::radial_classes(n as f64, d);
    let ifs = IfsSpec::from_classes(a, &c, d, rho, n, &classes)?;
    let t_star = ifs.solve();
    let cloud = parallel::chaos_game(&map, &ifs, &cfg.chaos_params())?;
    let anchor: Vec<f64> = (0..d).map(|j| if j + 1 == d { ifs.level } else { -ifs.radius }).collect();
    let fit = auto_scales(&cloud.coords, d, &anchor)
        .and_then(|s| parallel::box_counting_dimension(&cloud.coords, d, &anchor, &s));
    let report = AttractorReport {
        provenance: Provenance::new(cfg.hash(), cfg.seed),
        a: real(a),
        d,
        rho: real(rho),
        lattice_n: n,
        radius: real(ifs.radius),
        height: real(ifs.height),
        level: real(ifs.level),
        map_count: ifs.map_count().to_string(),
        n_points: cloud.len(),
        burn_in: cfg.chaos.burn_in,
        streams: cfg.chaos.streams,
        start: chaos_start(&ifs).iter().map(|v| real(*v)).collect(),
        t_star: t_star.as_ref().ok().map(|r| real(r.t)),
        t_star_error: t_star.as_ref().err().map(|e| e.to_string()),
        box_estimate: fit.as_ref().ok().map(|f| real(f.estimate)),
        fit_r2: fit.as_ref().ok().map(|f| real(f.fit_r2)),
        box_error: fit.as_ref().err().map(|e| e.to_string()),
        anchor: anchor.iter().map(|v| real(*v)).collect(),
        counts: fit
            .as_ref()
            .map(|f| {
                f.counts
                    .iter()
                    .map(|(e, n)| ScaleCount { eps: real(*e), count: *n })
                    .collect()
            })
            .unwrap_or_default(),
    };
    let files = write(vec![
        (cfg.out.join("attractor.csv"), output::cloud_csv(&cloud).into_bytes()),
        (cfg.out.join("attractor.json"), output::json_bytes(&report)),
    ])?;
    let show = |v: &Option<String>| v.clone().unwrap_or_else(|| "-".into());
    Ok(Outcome {
        code: EXIT_OK,
        files,
        summary: format!(
            "{} points, t_star = {}, box estimate = {}",
            cloud.len(),
            show(&report.t_star),
            show(&report.box_estimate)
        ),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed value of the checked quantity.
    pub value: String,
    pub tolerance: String,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, value: f64, tolerance: f64, detail: String) -> Check {
    Check {
        name,
        passed,
        value: real(value),
        tolerance: real(tolerance),
        detail,
    }
}

fn check_conjugacy(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let planar = ZorichMap::new(HemisphereParam::planar(), DerivedConstants::unit(0.5).expect("unit constants"));
    let canonical = cfg.dim == 2 && cfg.half_side() == FRAC_PI_2;
    let a = if canonical { cfg.a } else { 3.0 };
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let z = ComplexPoint::new(rng.gen_range(-PI..PI), rng.gen_range(-5.0..5.0));
        worst = worst.max(conjugacy_defect(&planar, a, z).unwrap_or(f64::INFINITY));
    }
    let mut out = vec![check(
        "conjugacy",
        worst < 1e-9,
        worst,
        1e-9,
        format!("max |f_a - L E_lambda L^-1| over 10^4 points of [-pi,pi]x[-5,5], a = {a}"),
    )];
    let gap = lambda_fixed_point((-a).exp())
        .ok()
        .zip(planar.fixed_point(a).ok())
        .map(|(q, xi)| to_plane(a, q).to_point().distance(&xi))
        .unwrap_or(f64::INFINITY);
    out.push(check(
        "fixed_point",
        gap < 1e-8,
        gap,
        1e-8,
        format!("planar fixed point against the transported E_lambda fixed point, a = {a}"),
    ));
    out
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

/// A point of `H_{≥M} ∩ B(-ā, 10a)`.
fn random_upper(rng: &mut ChaCha8Rng, d: usize, a: f64, level: f64) -> Point {
    loop {
        let mut v: Vec<f64> = (0..d - 1).map(|_| rng.gen_range(-10.0 * a..10.0 * a)).collect();
        v.push(rng.gen_range(level..level.max(10.0 * a - a)));
        let p = Point::new(v).expect("dimension >= 2");
        if p.shifted_norm(a) <= 10.0 * a {
            return p;
        }
    }
}

fn check_branches(cfg: &RunConfig, map: &ZorichMap, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let d = cfg.dim;
    let a = cfg.a.max(map.constants().min_parameter() + 1.0);
    let Ok(br) = Branches::new(map, a) else {
        return vec![check("branches", false, f64::NAN, 0.0, "no admissible parameter".into())];
    };
    let level = br.level();
    let (mut worst, mut outside, mut translation) = (0.0f64, 0usize, 0.0f64);
    for _ in 0..10_000 {
        let r = random_even(rng, d - 1, 20);
        let y = random_upper(rng, d, a, level);
        match br.invert(&r, &y) {
            Ok(x) => {
                worst = worst.max(map.eval_shifted(a, &x).distance(&y));
                if !br.tract(&r).contains(&x, 1e-12) {
                    outside += 1;
                }
                let base = br.invert(&LatticeIndex::zero(d - 1), &fold_reflection(&r, &y)).expect("same level");
                for j in 0..d - 1 {
                    let shift = 2.0 * cfg.half_side() * r.components()[j] as f64;
                    translation = translation.max((x[j] - (base[j] + shift)).abs());
                }
                translation = translation.max((x.last() - base.last()).abs());
            }
            Err(_) => worst = f64::INFINITY,
        }
    }
    let mut out = vec![
        check(
            "branch_round_trip",
            worst < 1e-10 && outside == 0,
            worst,
            1e-10,
            format!("max |f_a(Lambda^r(y)) - y| over 10^4 draws, |r| <= 20, a = {a}; {outside} outside their tract"),
        ),
        check(
            "translation_law",
            translation <= 1e-14 * (1.0 + 2.0 * cfg.half_side() * 20.0),
            translation,
            1e-14 * (1.0 + 2.0 * cfg.half_side() * 20.0),
            "Lambda^r(y) = Lambda(P_r y) + 2 rho r".into(),
        ),
    ];

    let (mut excess, mut n) = (0.0f64, 0);
    while n < 1000 {
        let y = random_upper(rng, d, a, level);
        let r = random_even(rng, d - 1, 10);
        let Ok(jac) = br.jacobian(&r, &y) else { continue };
        let (lo, hi) = jac.singular_extremes();
        let (el, eu) = br.derivative_envelope(&y).expect("y above M");
        excess = excess.max((el - lo) / eu).max((hi - eu) / eu);
        n += 1;
    }
    out.push(check(
        "derivative_envelope",
        excess <= 1e-4,
        excess,
        1e-4,
        "largest relative excursion of FD singular values outside [c3, c4]/|x + a e_d| over 10^3 points".into(),
    ));

    let mut slack = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let (x, y) = (random_upper(rng, d, a, level), random_upper(rng, d, a, level));
        if let Ok(b) = br.bound_check(&x, &y) {
            slack = slack.max(b.lhs - b.rhs_contraction).max(b.lhs - b.rhs_lipschitz);
        }
    }
    out.push(check(
        "branch_lipschitz",
        slack <= 1e-9,
        slack,
        1e-9,
        "max of |Lambda x - Lambda y| minus alpha|x-y| and c4 pi |x-y| / min|.+a e_d| over 10^3 pairs".into(),
    ));
    out
}

fn check_lattice(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let q = LatticeSumQuery::new(2.0, 1.0, 2.0, 3).expect("valid query");
    let err = (parallel::lattice_sum(&q) - 47.0 / 15.0).abs();
    let mut out = vec![check("lattice_sum_example", err < 1e-12, err, 1e-12, "d=3, t=2, b=1, N=2 against 47/15".into())];
    let d = cfg.dim.min(4);
    let dm = d as f64 - 1.0;
    let (mut bad, mut lower_bad, mut worst) = (0, 0, f64::NEG_INFINITY);
    for i in 0..120 {
        let b = rng.gen_range(3.0 * dm.sqrt()..12.0);
        let n = rng.gen_range(b..if d == 4 { 25.0 } else { 80.0 });
        let t = if i % 5 == 0 { dm } else { dm + rng.gen_range(1e-3..=1.0) };
        let q = LatticeSumQuery::new(t, b, n, d).expect("valid query");
        let s = parallel::lattice_sum(&q);
        let Ok(br) = sum_bracket(&q) else {
            bad += 1;
            continue;
        };
        worst = worst.max(br.lower / s);
        if let Some(u) = br.upper {
            worst = worst.max(s / u);
        }
        if s < br.lower {
            if t == dm {
                lower_bad += 1;
            } else {
                bad += 1;
            }
        } else if br.upper.is_some_and(|u| s > u) {
            bad += 1;
        }
    }
    out.push(check(
        "lattice_brackets",
        bad == 0 && lower_bad == 0,
        worst,
        1.0,
        format!("120 random queries in d = {d}; worst ratio bound/sum; {bad} bracket and {lower_bad} log-bound violations"),
    ));
    out
}

fn check_moran() -> Vec<Check> {
    let thirds = FactorMultiset::from_values(&[1.0 / 3.0; 4]);
    let mut twentieths = FactorMultiset::new();
    twentieths.push(0.05, 81.0);
    let mut err = 0.0f64;
    let mut sign_change = true;
    for (m, exact) in [(thirds, 4f64.ln() / 3f64.ln()), (twentieths, 81f64.ln() / 20f64.ln())] {
        match moran_solve(&m) {
            Ok(r) => {
                err = err.max((r.t - exact).abs());
                sign_change &= m.sum(r.t - 1e-6) > 1.0 && m.sum(r.t + 1e-6) < 1.0;
            }
            Err(_) => err = f64::INFINITY,
        }
    }
    vec![check(
        "moran_closed_forms",
        err < 1e-9 && sign_change,
        err,
        1e-9,
        format!("log4/log3 and log81/log20; sign change at t* +- 1e-6: {sign_change}"),
    )]
}

#[derive(Serialize)]
struct VerifyReport {
    provenance: Provenance,
    passed: bool,
    perturb_c4: Option<String>,
    checks: Vec<Check>,
}

pub fn run_checks(cfg: &RunConfig) -> Result<Vec<Check>, Failure> {
    let mut map = build_map(cfg)?;
    if let Some(p) = cfg.perturb_c4 {
        let mut c = *map.constants();
        c.branch_max *= p;
        map = map.with_constants(c);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = check_conjugacy(cfg, &mut rng);
    checks.extend(check_branches(cfg, &map, &mut rng));
    checks.extend(check_lattice(cfg, &mut rng));
    checks.extend(check_moran());
    Ok(checks)
}

pub fn cmd_verify(cfg: &RunConfig) -> CmdResult {
    let checks = run_checks(cfg)?;
    let passed = checks.iter().all(|c| c.passed);
    let report = VerifyReport {
        provenance: Provenance::new(cfg.hash(), cfg.seed),
        passed,
        perturb_c4: opt_real(cfg.perturb_c4),
        checks,
    };
    let files = write(vec![(cfg.out.join("verify.json"), output::json_bytes(&report))])?;
    let lines: Vec<String> = report
        .checks
        .iter()
        .map(|c| format!("{} {} ({})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value))
        .collect();
    Ok(Outcome {
        code: if passed { EXIT_OK } else { EXIT_VERIFY },
        files,
        summary: lines.join("\n"),
    })
}

#[derive(Serialize)]
struct SumQueryReport {
    t: String,
    b: String,
    #[serde(rename = "N")]
    n: String,
    d: usize,
}

#[derive(Serialize)]
struct SumReport {
    provenance: Provenance,
    query: SumQueryReport,
    sum: String,
    lower: Option<String>,
    upper: Option<String>,
    bracket_error: Option<String>,
}

pub fn cmd_sum(cfg: &RunConfig, t: f64, b: f64) -> CmdResult {
    let n = cfg
        .lattice_n
        .ok_or_else(|| Failure::precondition("sum needs --lattice-N"))? as f64;
    let q = LatticeSumQuery::new(t, b, n, cfg.dim)?;
    let s = parallel::lattice_sum(&q);
    let bracket = sum_bracket(&q);
    let report = SumReport {
        provenance: Provenance::new(cfg.hash(), cfg.seed),
        query: SumQueryReport {
            t: real(t),
            b: real(b),
            n: real(n),
            d: cfg.dim,
        },
        sum: real(s),
        lower: bracket.as_ref().ok().map(|br| real(br.lower)),
        upper: bracket.as_ref().ok().and_then(|br| br.upper.map(real)),
        bracket_error: bracket.as_ref().err().map(|e| e.to_string()),
    };
    let json = String::from_utf8(output::json_bytes(&report)).expect("utf-8 json");
    Ok(Outcome {
        code: EXIT_OK,
        files: Vec::new(),
        summary: json.trim_end().to_string(),
    })
}
