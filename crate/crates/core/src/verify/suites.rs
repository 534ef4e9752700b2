//! Named suites: each runs its checker over a generated family or a fixed
//! corpus of maps, or over a single user-supplied map.

use rayon::prelude::*;

use crate::corpus::{example_rows, EXAMPLE_TOL};
use crate::error::{Error, Result};
use crate::geometry::{
    derive_seed, draw_unit, sample_ball, sample_cone, sample_halfspace, sample_rng, Cone,
};
use crate::quaternion::{Quaternion, UnitImaginary};
use crate::series::{RegularSeries, SliceFunction};
use crate::verify::ball::{
    ball_pairs, boundary_points, check_boundary_schwarz, check_hopf, check_julia,
    check_julia_caratheodory, check_lindelof, lindelof_margins, lindelof_points,
    record_boundary_schwarz, record_hopf, record_lindelof, record_schwarz_pick,
};
use crate::verify::estimate::{estimate_boundary_data, richardson, ESTIMATOR_TOL};
use crate::verify::generators::{
    blaschke_product, bounded_coefficient_map, fix_boundary_point, random_moebius,
};
use crate::verify::halfspace::{
    check_schwarz_pick_halfspace, estimate_c_halfspace, ray_direction, ray_radii,
    record_range_rigidity, record_rigidity, RigidityMode,
};
use crate::verify::maps::{cayley_conjugate, Affine, Constant, FnMap, Reciprocal};
use crate::verify::report::{Report, ReportBuilder};
use crate::verify::SampleConfig;

/// Suite names accepted by [`run_suite`].
pub const SUITES: [&str; 10] = [
    "schwarz_pick",
    "julia",
    "julia_caratheodory",
    "hopf",
    "lindelof",
    "boundary_schwarz",
    "halfspace",
    "rigidity",
    "paper_examples",
    "all",
];

const PAIR_STREAM: u64 = 0x5C7A;
const EQUALITY_STREAM: u64 = 0xE0A1;
const FIXED_STREAM: u64 = 0xF1ED;
const SELF_MAP_STREAM: u64 = 0x5E1F;
const HALF_STREAM: u64 = 0x4A1F;
const RATIO_STREAM: u64 = 0x7A71;

/// Equality-family maps drawn per suite.
const EQUALITY_MAPS: usize = 20;
/// Aperture of cones used by the half-space suites.
const GAMMA: f64 = 0.5;
/// Wider cone and radius range for the fresh samples of the pointwise
/// half-space bound.
const RATIO_GAMMA: f64 = 0.05;
const RATIO_RADII: (f64, f64) = (1.0 / 64.0, 1_048_576.0);

/// What a suite runs on: a user map in the ball or half-space context, or
/// the built-in families when both are absent.
#[derive(Default)]
pub struct SuiteInput {
    pub ball: Option<RegularSeries>,
    pub halfspace: Option<Box<dyn SliceFunction>>,
    /// Orisphere parameter for `julia`; all of `0.5, 1, 2` when absent.
    pub k: Option<f64>,
}

impl SuiteInput {
    pub fn ball(f: RegularSeries) -> Self {
        SuiteInput {
            ball: Some(f),
            ..SuiteInput::default()
        }
    }

    pub fn halfspace(f: Box<dyn SliceFunction>) -> Self {
        SuiteInput {
            halfspace: Some(f),
            ..SuiteInput::default()
        }
    }
}

pub fn run_suite(name: &str, input: &SuiteInput, cfg: &SampleConfig) -> Result<Report> {
    cfg.validate()?;
    if let Some(k) = input.k {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidConfig(format!("k must be positive, got {k}")));
        }
    }
    let needs_halfspace = matches!(name, "halfspace" | "rigidity");
    if input.halfspace.is_some() && !needs_halfspace {
        return Err(Error::InvalidConfig(format!(
            "suite {name} takes a map of the ball"
        )));
    }
    if input.ball.is_some() && (needs_halfspace || matches!(name, "paper_examples" | "all")) {
        return Err(Error::InvalidConfig(format!(
            "suite {name} does not take a map of the ball"
        )));
    }
    match name {
        "schwarz_pick" => schwarz_pick(input, cfg),
        "julia" => julia(input, cfg),
        "julia_caratheodory" => julia_caratheodory(input, cfg),
        "hopf" => hopf(input, cfg),
        "lindelof" => lindelof(input, cfg),
        "boundary_schwarz" => boundary_schwarz(input, cfg),
        "halfspace" => halfspace(input, cfg),
        "rigidity" => rigidity(input, cfg),
        "paper_examples" => paper_examples(cfg),
        "all" => all(cfg),
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

/// Spot-check that a user map sends ball samples into the ball.
fn require_self_map(f: &RegularSeries, cfg: &SampleConfig) -> Result<()> {
    let pts = sample_ball(derive_seed(cfg.seed, SELF_MAP_STREAM), cfg.count)?;
    let values: Vec<f64> = pts.par_iter().map(|&q| f.eval(q).norm()).collect();
    for (&q, m) in pts.iter().zip(values) {
        if !(m < 1.0 + cfg.tol_eq) {
            return Err(Error::HypothesisViolated(format!(
                "|f(q)| = {m} at q = {q}: not a self-map of the ball"
            )));
        }
    }
    Ok(())
}

fn moebius_family(cfg: &SampleConfig) -> Result<Vec<RegularSeries>> {
    (0..EQUALITY_MAPS)
        .map(|i| {
            RegularSeries::moebius_with_order(
                random_moebius(derive_seed(cfg.seed, EQUALITY_STREAM), i),
                cfg.truncation,
            )
        })
        .collect()
}

fn schwarz_pick(input: &SuiteInput, cfg: &SampleConfig) -> Result<Report> {
    let mut b = ReportBuilder::new("schwarz_pick", cfg);
    if let Some(f) = &input.ball {
        require_self_map(f, cfg)?;
        record_schwarz_pick(
            &mut b,
            "contraction margin",
            f,
            &ball_pairs(cfg, PAIR_STREAM, 0)?,
            false,
        );
        return Ok(b.finish());
    }
    for i in 0..cfg.functions {
        let f = blaschke_product(cfg.seed, i, cfg.truncation);
        record_schwarz_pick(
            &mut b,
            "blaschke products",
            &f,
            &ball_pairs(cfg, PAIR_STREAM, i)?,
            false,
        );
    }
    for (i, m) in moebius_family(cfg)?.iter().enumerate() {
        record_schwarz_pick(
            &mut b,
            "moebius equality",
            m,
            &ball_pairs(cfg, EQUALITY_STREAM, i)?,
            true,
        );
    }
    Ok(b.finish())
}

fn julia_corpus(cfg: &SampleConfig) -> Result<Vec<(String, RegularSeries)>> {
    Ok(vec![
        ("q".to_string(), RegularSeries::identity()),
        (
            "moebius(1/2)".to_string(),
            RegularSeries::moebius_with_order(Quaternion::real(0.5), cfg.truncation)?,
        ),
        ("q^2".to_string(), RegularSeries::power(2)),
    ])
}

fn julia(input: &SuiteInput, cfg: &SampleConfig) -> Result<Report> {
    let ks = input.k.map_or(vec![0.5, 1.0, 2.0], |k| vec![k]);
    let maps = match &input.ball {
        Some(f) => {
            require_self_map(f, cfg)?;
            vec![("f".to_string(), f.clone())]
        }
        None => julia_corpus(cfg)?,
    };
    let mut b = ReportBuilder::new("julia", cfg);
    for (name, f) in &maps {
        let bd = estimate_boundary_data(f, cfg);
        for &k in &ks {
            let r = check_julia(f, k, &bd, cfg)?;
            b.absorb(&format!("{name}, k={k}"), &r);
        }
    }
    Ok(b.finish())
}

fn julia_caratheodory(input: &SuiteInput, cfg: &SampleConfig) -> Result<Report> {
    let mut b = ReportBuilder::new("julia_caratheodory", cfg);
    if let Some(f) = &input.ball {
        require_self_map(f, cfg)?;
        b.absorb("f", &check_julia_caratheodory(f, cfg)?);
        return Ok(b.finish());
    }
    // closed-form angular derivatives on the real slice
    let u = 0.5;
    let m = RegularSeries::moebius_with_order(Quaternion::real(u), cfg.truncation)?;
    let bd = estimate_boundary_data(&m, cfg);
    let alpha = (1.0 + u) / (1.0 - u);
    b.equality(
        "moebius(1/2): alpha",
        None,
        bd.alpha - alpha,
        ESTIMATOR_TOL,
        None,
    );
    b.equality(
        "moebius(1/2): eta",
        None,
        (bd.eta - Quaternion::ONE).norm(),
        1e-6,
        Some(bd.eta),
    );
    b.equality(
        "moebius(1/2): f'(1)",
        None,
        (bd.fprime1 - alpha).norm(),
        ESTIMATOR_TOL,
        Some(bd.fprime1),
    );
    b.absorb("moebius(1/2)", &check_julia_caratheodory(&m, cfg)?);

    let sq = RegularSeries::power(2);
    let bd = estimate_boundary_data(&sq, cfg);
    b.equality("q^2: alpha", None, bd.alpha - 2.0, ESTIMATOR_TOL, None);
    b.absorb("q^2", &check_julia_caratheodory(&sq, cfg)?);
    b.absorb(
        "q",
        &check_julia_caratheodory(&RegularSeries::identity(), cfg)?,
    );

    // f'(1) = beta with |beta| < n forces alpha = infinity
    let beta = Quaternion::new(1.0, 1.0, 0.0, 0.0);
    for n in 2..=4usize {
        let f = RegularSeries::monomial(n, beta / n as f64);
        let bd = estimate_boundary_data(&f, cfg);
        b.flag(
            &format!("q^{n} beta/{n}: divergence flagged"),
            bd.divergent,
            None,
        );
    }

    for i in 0..cfg.functions {
        let f = blaschke_product(cfg.seed, i, cfg.truncation);
        let r = check_julia_caratheodory(&f, cfg)?;
        b.absorb("blaschke products", &r);
    }
    Ok(b.finish())
}

fn hopf(input: &SuiteInput, cfg: &SampleConfig) -> Result<Report> {
    let mut b = ReportBuilder::new("hopf", cfg);
    if let Some(f) = &input.ball {
        require_self_map(f, cfg)?;
        let n = crate::boundary::vanishing_order(f, crate::boundary::VANISHING_TOL).unwrap_or(0);
        b.absorb("f", &check_hopf(f, n, cfg)?);
        return Ok(b.finish());
    }
    // real u = 1/2: f'(1) = (1 + u)/(1 - u) = 3 equals the bound
    let m = RegularSeries::moebius_fixing_one(Quaternion::real(0.5), cfg.truncation)?;
    let bd = estimate_boundary_data(&m, cfg);
    b.equality(
        "moebius(1/2): f'(1) = 3",
        None,
        (bd.fprime1 - 3.0).norm(),
        1e-6,
        Some(bd.fprime1),
    );
    record_hopf(&mut b, &m, 0, cfg, true)?;

    let mixed = RegularSeries::new(vec![
        Quaternion::ZERO,
        Quaternion::real(0.5),
        Quaternion::real(0.5),
    ])?;
    let bd = estimate_boundary_data(&mixed, cfg);
    let bound = crate::boundary::hopf_bound(&mixed, 0)?;
    b.at_least(
        "(q + q^2)/2: margin over bound",
        None,
        bd.fprime1.re() - bound,
        0.16,
        Some(bd.fprime1),
    );
    record_hopf(&mut b, &mixed, 0, cfg, false)?;

    for n in 1..=4usize {
        record_hopf(&mut b, &RegularSeries::power(n), n, cfg, true)?;
    }
    let seed = derive_seed(cfg.seed, EQUALITY_STREAM);
    for i in 0..EQUALITY_MAPS {
        let n = i % 3;
        let f =
            RegularSeries::moebius_fixing_one(random_moebius(seed, i), cfg.truncation)?.shift(n);
        record_hopf(&mut b, &f, n, cfg, true)?;
    }
    for i in 0..cfg.functions {
        let f = fix_boundary_point(
            &blaschke_product(cfg.seed, i, cfg.truncation),
            Quaternion::ONE,
        )?;
        let n = crate::boundary::vanishing_order(&f, crate::boundary::VANISHING_TOL).unwrap_or(0);
        record_hopf(&mut b, &f, n, cfg, false)?;
    }
    Ok(b.finish())
}

fn lindelof(input: &SuiteInput, cfg: &SampleConfig) -> Result<Report> {
    let mut b = ReportBuilder::new("lindelof", cfg);
    if let Some(f) = &input.ball {
        require_self_map(f, cfg)?;
        b.absorb("f", &check_lindelof(f, cfg)?);
        return Ok(b.finish());
    }
    for i in 0..cfg.functions {
        let f = bounded_coefficient_map(cfg.seed, i);
        record_lindelof(&mut b, &f, &lindelof_points(cfg, i)?);
    }
    let tol = cfg.tol_eq;
    for (i, m) in moebius_family(cfg)?.iter().enumerate() {
        let pts = lindelof_points(cfg, cfg.functions + i)?;
        let margins: Vec<f64> = pts
            .par_iter()
            .map(|&q| lindelof_margins(m, q).centered)
            .collect();
        for (&q, d) in pts.iter().zip(margins) {
            b.equality(
                "moebius equality in centered estimate",
                Some(q),
                d,
                tol,
                None,
            );
        }
    }
    let seed = derive_seed(cfg.seed, EQUALITY_STREAM);
    for n in 1..=4usize {
        let u = draw_unit(&mut sample_rng(seed, n as u64));
        let f = RegularSeries::monomial(n, u);
        let pts = lindelof_points(cfg, cfg.functions + EQUALITY_MAPS + n)?;
        for &q in &pts {
            let (lo, hi) = lindelof_margins(&f, q)
                .vanishing
                .expect("vanishing order n");
            b.equality(
                "q^n u equality in vanishing-order bounds",
                Some(q),
                lo,
                tol,
                None,
            );
            b.equality(
                "q^n u equality in vanishing-order bounds",
                Some(q),
                hi,
                tol,
                None,
            );
        }
    }
    Ok(b.finish())
}

fn boundary_schwarz(input: &SuiteInput, cfg: &SampleConfig) -> Result<Report> {
    let mut b = ReportBuilder::new("boundary_schwarz", cfg);
    if let Some(f) = &input.ball {
        b.absorb("f", &check_boundary_schwarz(f, cfg)?);
        return Ok(b.finish());
    }
    for i in 0..cfg.functions {
        let f = blaschke_product(cfg.seed, i, cfg.truncation);
        record_boundary_schwarz(&mut b, &f, &boundary_points(cfg, i), cfg)?;
    }
    // maps fixing 0 and a non-real boundary point
    let fixed_points = boundary_points(cfg, usize::MAX);
    for i in 0..EQUALITY_MAPS {
        let xi = fixed_points[i % fixed_points.len()];
        let f = RegularSeries::identity().star(&blaschke_product(
            derive_seed(cfg.seed, FIXED_STREAM),
            i,
            cfg.truncation,
        ));
        let f = fix_boundary_point(&f, xi)?;
        record_boundary_schwarz(&mut b, &f, &[xi], cfg)?;
    }
    let id = RegularSeries::identity();
    let pts: Vec<Quaternion> = fixed_points.iter().copied().take(EQUALITY_MAPS).collect();
    record_boundary_schwarz(&mut b, &id, &pts, cfg)?;
    for n in 1..=4usize {
        let f = RegularSeries::power(n);
        for &xi in &pts {
            let v = crate::boundary::boundary_schwarz_quantity(&f, xi)?;
            b.equality(
                "q^n: quantity equals n",
                Some(xi),
                v - n as f64,
                cfg.tol_eq,
                Some(Quaternion::real(v)),
            );
        }
    }
    Ok(b.finish())
}

fn halfspace_pairs(cfg: &SampleConfig, index: usize) -> Result<Vec<(Quaternion, Quaternion)>> {
    let seed = derive_seed(derive_seed(cfg.seed, HALF_STREAM), index as u64);
    let pts = sample_halfspace(seed, 2 * cfg.count, (1.0 / 16.0, 16.0))?;
    Ok(pts.chunks(2).map(|c| (c[0], c[1])).collect())
}

fn record_halfspace_pick<F: SliceFunction + ?Sized>(
    b: &mut ReportBuilder,
    label: &str,
    f: &F,
    pairs: &[(Quaternion, Quaternion)],
    equality: bool,
) {
    let margins: Vec<f64> = pairs
        .par_iter()
        .map(|&(q0, q)| check_schwarz_pick_halfspace(f, q0, q).unwrap_or(f64::NAN))
        .collect();
    let tol = b.tol_eq();
    for (&(_, q), m) in pairs.iter().zip(margins) {
        if equality {
            b.equality(label, Some(q), m, tol, None);
        } else {
            b.inequality(label, Some(q), m, None);
        }
    }
}

/// `Re f(q) / Re q >= c - tol` on fresh samples of a wider cone.
fn record_ratio_bound<F: SliceFunction + ?Sized>(
    b: &mut ReportBuilder,
    label: &str,
    f: &F,
    c: f64,
    cfg: &SampleConfig,
) -> Result<()> {
    let cone = Cone::new(RATIO_GAMMA)?;
    let pts = sample_cone(
        &cone,
        derive_seed(cfg.seed, RATIO_STREAM),
        cfg.count,
        RATIO_RADII,
    )?;
    let ratios: Vec<f64> = pts.par_iter().map(|&q| f.eval(q).re() / q.re()).collect();
    for (&q, r) in pts.iter().zip(ratios) {
        b.at_least(label, Some(q), r - c, -ESTIMATOR_TOL, None);
    }
    Ok(())
}

/// Records `c`, the ray limits of `q^{-1} f` and `f'`, and the pointwise
/// bound. `expected` pins `c` and the limits to a closed form.
fn record_c<F: SliceFunction + ?Sized>(
    b: &mut ReportBuilder,
    label: &str,
    f: &F,
    expected: Option<(f64, f64)>,
    cfg: &SampleConfig,
) -> Result<f64> {
    let est = estimate_c_halfspace(f, GAMMA, cfg)?;
    let tol = ESTIMATOR_TOL * (1.0 + est.c);
    b.equality(
        &format!("{label}: quotient limit equals c"),
        None,
        (est.ray_quotient - est.c).norm(),
        tol,
        Some(est.ray_quotient),
    );
    b.equality(
        &format!("{label}: derivative limit equals c"),
        None,
        (est.ray_derivative - est.c).norm(),
        tol,
        Some(est.ray_derivative),
    );
    if let Some((c, derivative_tol)) = expected {
        b.equality(
            &format!("{label}: c"),
            None,
            est.c - c,
            ESTIMATOR_TOL,
            Some(Quaternion::real(est.c)),
        );
        b.equality(
            &format!("{label}: derivative limit"),
            None,
            (est.ray_derivative - c).norm(),
            derivative_tol,
            Some(est.ray_derivative),
        );
    }
    record_ratio_bound(b, &format!("{label}: Re f / Re q above c"), f, est.c, cfg)?;
    Ok(est.c)
}

fn halfspace(input: &SuiteInput, cfg: &SampleConfig) -> Result<Report> {
    let mut b = ReportBuilder::new("halfspace", cfg);
    if let Some(f) = &input.halfspace {
        record_halfspace_pick(
            &mut b,
            "contraction margin",
            f.as_ref(),
            &halfspace_pairs(cfg, 0)?,
            false,
        );
        record_c(&mut b, "f", f.as_ref(), None, cfg)?;
        return Ok(b.finish());
    }
    let one = Quaternion::ONE;
    let identity = Affine::identity();
    let shift = Affine::new(one, one);
    let automorphism = Affine::new(Quaternion::real(2.0), Quaternion::J);
    record_halfspace_pick(
        &mut b,
        "q: equality",
        &identity,
        &halfspace_pairs(cfg, 0)?,
        true,
    );
    record_halfspace_pick(
        &mut b,
        "2q + j: equality",
        &automorphism,
        &halfspace_pairs(cfg, 1)?,
        true,
    );
    record_halfspace_pick(&mut b, "q + 1", &shift, &halfspace_pairs(cfg, 2)?, false);
    let funcs = cfg.functions.min(EQUALITY_MAPS);
    for i in 0..funcs {
        let g = cayley_conjugate(blaschke_product(cfg.seed, i, cfg.truncation));
        record_halfspace_pick(
            &mut b,
            "cayley conjugates",
            &g,
            &halfspace_pairs(cfg, 3 + i)?,
            false,
        );
    }
    for (i, m) in moebius_family(cfg)?.into_iter().enumerate() {
        let g = cayley_conjugate(m);
        record_halfspace_pick(
            &mut b,
            "moebius conjugates: equality",
            &g,
            &halfspace_pairs(cfg, 3 + funcs + i)?,
            true,
        );
    }

    record_c(&mut b, "q", &identity, Some((1.0, ESTIMATOR_TOL)), cfg)?;
    record_c(
        &mut b,
        "constant 1",
        &Constant(one),
        Some((0.0, ESTIMATOR_TOL)),
        cfg,
    )?;
    record_c(
        &mut b,
        "2q + i",
        &Affine::new(Quaternion::real(2.0), Quaternion::I),
        Some((2.0, 1e-6)),
        cfg,
    )?;
    record_c(
        &mut b,
        "q + (q+1)^-1",
        &FnMap::new(|q: Quaternion| q + (q + 1.0).inverse().unwrap_or(Quaternion::ZERO)),
        Some((1.0, ESTIMATOR_TOL)),
        cfg,
    )?;

    // self-maps with the interior fixed point 1
    for i in 0..funcs {
        let mut f = RegularSeries::identity().star(&blaschke_product(
            derive_seed(cfg.seed, FIXED_STREAM),
            i,
            cfg.truncation,
        ));
        if i % 2 == 0 {
            // also fixing -1 keeps infinity fixed, so c > 0
            f = fix_boundary_point(&f, -one)?;
        }
        let g = cayley_conjugate(f);
        record_rigidity(
            &mut b,
            "fixed point 1",
            &g,
            GAMMA,
            RigidityMode::FixedPoint(one),
            cfg,
        )?;
    }

    // lim q f(q) along a cone ray against 1/c of the regular reciprocal
    let reciprocals: [(&str, Affine); 3] = [
        ("(q + 1)^-1", Affine::new(one, one)),
        ("(2q + 1)^-1", Affine::new(Quaternion::real(2.0), one)),
        ("(q + 1 + j)^-1", Affine::new(one, one + Quaternion::J)),
    ];
    let dir = ray_direction(GAMMA, cfg.seed);
    for (label, inner) in reciprocals {
        let f = Reciprocal(inner);
        let c = estimate_c_halfspace(&Reciprocal(&f), GAMMA, cfg)?.c;
        let values: Vec<Quaternion> = ray_radii()
            .into_iter()
            .map(|r| dir * r * f.eval(dir * r))
            .collect();
        let beta = richardson(&values);
        b.equality(
            &format!("{label}: lim q f(q) = 1/c of reciprocal"),
            None,
            (beta - 1.0 / c).norm(),
            ESTIMATOR_TOL * (1.0 + 1.0 / c),
            Some(beta),
        );
    }
    let far = dir * *ray_radii().last().expect("non-empty ray");
    b.flag(
        "constant 1: q f(q) unbounded",
        far.norm() > 1.0 / ESTIMATOR_TOL,
        None,
    );
    Ok(b.finish())
}

fn expect_verdict(
    b: &mut ReportBuilder,
    label: &str,
    outcome: Result<(bool, f64, Option<f64>)>,
    rigid: bool,
) -> Result<f64> {
    let (verdict, limit, _) = outcome?;
    b.flag(
        &format!(
            "{label}: verdict {}",
            if rigid { "rigid" } else { "not rigid" }
        ),
        verdict == rigid,
        None,
    );
    Ok(limit)
}

fn rigidity(input: &SuiteInput, cfg: &SampleConfig) -> Result<Report> {
    let mut b = ReportBuilder::new("rigidity", cfg);
    if let Some(f) = &input.halfspace {
        record_rigidity(
            &mut b,
            "f",
            f.as_ref(),
            GAMMA,
            RigidityMode::BurnsKrantz,
            cfg,
        )?;
        return Ok(b.finish());
    }
    let one = Quaternion::ONE;
    let mut sub = b.clone();
    let id = Affine::identity();
    let perturbed = FnMap::new(|q: Quaternion| q + (q + 1.0).inverse().unwrap_or(Quaternion::ZERO));
    expect_verdict(
        &mut b,
        "q",
        record_rigidity(&mut sub, "q", &id, GAMMA, RigidityMode::BurnsKrantz, cfg),
        true,
    )?;
    let limit = expect_verdict(
        &mut b,
        "q + (q+1)^-1",
        record_rigidity(
            &mut sub,
            "q + (q+1)^-1",
            &perturbed,
            GAMMA,
            RigidityMode::BurnsKrantz,
            cfg,
        ),
        false,
    )?;
    b.equality(
        "q + (q+1)^-1: |lim q (f - q)| = 1",
        None,
        limit - 1.0,
        1e-3,
        None,
    );
    let steep = Affine::new(Quaternion::real(2.0), Quaternion::I);
    expect_verdict(
        &mut b,
        "2q + i",
        record_rigidity(
            &mut sub,
            "2q + i",
            &steep,
            GAMMA,
            RigidityMode::BurnsKrantz,
            cfg,
        ),
        false,
    )?;

    let conj_id = cayley_conjugate(RegularSeries::identity());
    expect_verdict(
        &mut b,
        "fixed point, identity",
        record_rigidity(
            &mut sub,
            "fixed point, identity",
            &conj_id,
            GAMMA,
            RigidityMode::FixedPoint(one),
            cfg,
        ),
        true,
    )?;
    let half = Affine::new(Quaternion::real(0.5), Quaternion::real(0.5));
    expect_verdict(
        &mut b,
        "fixed point, (q + 1)/2",
        record_rigidity(
            &mut sub,
            "fixed point, (q + 1)/2",
            &half,
            GAMMA,
            RigidityMode::FixedPoint(one),
            cfg,
        ),
        false,
    )?;

    let ray = RigidityMode::ZeroLimit {
        unit: UnitImaginary::J,
        theta: 0.0,
    };
    let recip = Reciprocal(Affine::new(one, one));
    let limit = expect_verdict(
        &mut b,
        "zero limit, (q+1)^-1",
        record_rigidity(&mut sub, "zero limit, (q+1)^-1", &recip, GAMMA, ray, cfg),
        false,
    )?;
    b.equality("(q+1)^-1: liminf r |f| = 1", None, limit - 1.0, 0.1, None);
    expect_verdict(
        &mut b,
        "zero limit, 0",
        record_rigidity(
            &mut sub,
            "zero limit, 0",
            &Constant(Quaternion::ZERO),
            GAMMA,
            ray,
            cfg,
        ),
        true,
    )?;

    let shifted = RegularSeries::new(vec![one, one])?;
    expect_verdict(
        &mut b,
        "ball, 0",
        record_range_rigidity(&mut sub, "ball, 0", &RegularSeries::zero(), cfg)
            .map(|(r, l)| (r, l, None)),
        true,
    )?;
    expect_verdict(
        &mut b,
        "ball, 1 + q",
        record_range_rigidity(&mut sub, "ball, 1 + q", &shifted, cfg).map(|(r, l)| (r, l, None)),
        false,
    )?;
    let squared = shifted.star(&shifted);
    b.flag(
        "ball, (1 + q)^2: range hypothesis rejected",
        matches!(
            record_range_rigidity(&mut sub, "ball, (1 + q)^2", &squared, cfg),
            Err(Error::RangeHypothesisViolated { .. })
        ),
        None,
    );
    b.flag(
        "constant -1: mode hypothesis rejected",
        matches!(
            record_rigidity(
                &mut sub,
                "constant -1",
                &Constant(-one),
                GAMMA,
                RigidityMode::BurnsKrantz,
                cfg
            ),
            Err(Error::ModeHypothesisViolated(_))
        ),
        None,
    );
    b.absorb("spot checks", &sub.finish());
    Ok(b.finish())
}

fn paper_examples(cfg: &SampleConfig) -> Result<Report> {
    let mut b = ReportBuilder::new("paper_examples", cfg);
    for r in example_rows(cfg.truncation)? {
        b.equality(r.label, None, r.deviation(), EXAMPLE_TOL, Some(r.computed));
    }
    Ok(b.finish())
}

fn all(cfg: &SampleConfig) -> Result<Report> {
    let mut b = ReportBuilder::new("all", cfg);
    let input = SuiteInput::default();
    for name in SUITES.iter().filter(|s| **s != "all") {
        let r = run_suite(name, &input, cfg)?;
        b.absorb(name, &r);
    }
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SampleConfig {
        SampleConfig {
            count: 50,
            functions: 5,
            ..SampleConfig::default()
        }
    }

    #[test]
    fn every_suite_passes_on_small_config() {
        for name in SUITES.iter().filter(|s| **s != "all") {
            let r = run_suite(name, &SuiteInput::default(), &small()).unwrap();
            assert!(r.pass, "{}", r.to_text());
        }
    }

    #[test]
    fn unknown_suite_and_wrong_context() {
        assert!(matches!(
            run_suite("nope", &SuiteInput::default(), &small()),
            Err(Error::UnknownSuite(_))
        ));
        let input = SuiteInput::halfspace(Box::new(Affine::identity()));
        assert!(matches!(
            run_suite("lindelof", &input, &small()),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn user_map_outside_ball_is_a_hypothesis_violation() {
        let f = RegularSeries::monomial(1, Quaternion::real(2.0));
        let err = run_suite("schwarz_pick", &SuiteInput::ball(f), &small()).unwrap_err();
        assert!(err.is_hypothesis_violation());
    }
}
