//! Checks for regular self-maps of the right half-space, given pointwise.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{
    derive_seed, draw_unit_imaginary, sample_ball, sample_cone, sample_halfspace, sample_rng, Cone,
    DEFAULT_CONE_RADII,
};
use crate::quaternion::{Quaternion, UnitImaginary};
use crate::series::{quotient_eval, RegularSeries, SliceFunction};
use crate::verify::estimate::{richardson, tail_min, ESTIMATOR_TOL};
use crate::verify::maps::{Constant, PrecomposeCayley, Sum};
use crate::verify::report::{Report, ReportBuilder};
use crate::verify::SampleConfig;

const CONE_STREAM: u64 = 0xC0DE;
const RAY_STREAM: u64 = 0x0EA1;
const SPOT_STREAM: u64 = 0x5907;
const RANGE_STREAM: u64 = 0x7A26;

/// Radii `2^m`, `m = 4..=20`, of the rays limits are taken along.
pub(crate) fn ray_radii() -> Vec<f64> {
    (4..=20).map(|m| 2f64.powi(m)).collect()
}

/// Radius range of spot-check samples.
const SPOT_RADII: (f64, f64) = (1.0 / 16.0, 16.0);
/// Agreement required when a detector declares a map rigid.
pub const SPOT_TOL: f64 = 1e-6;

/// `|(q + conj q0)^{-*} * (q - q0)|(q) - |(f + conj f(q0))^{-*} * (f - f(q0))|(q)`.
/// Nonnegative for self-maps of the half-space, zero for its automorphisms.
pub fn check_schwarz_pick_halfspace<F: SliceFunction + ?Sized>(
    f: &F,
    q0: Quaternion,
    q: Quaternion,
) -> Result<f64> {
    let id_den = RegularSeries::new(vec![q0.conj(), Quaternion::ONE])?;
    let id_num = RegularSeries::linear(q0);
    let lhs = quotient_eval(&id_den, &id_num, q)?.norm();
    let w = f.eval(q0);
    let den = Sum(f, Constant(w.conj()));
    let num = Sum(f, Constant(-w));
    let rhs = quotient_eval(&den, &num, q)?.norm();
    Ok(lhs - rhs)
}

/// Estimate of `c = inf Re f(q) / Re q` and the limits along a cone ray.
#[derive(Clone, Debug, PartialEq)]
pub struct CEstimate {
    /// Minimum of `Re f / Re q` over cone samples.
    pub c: f64,
    /// Extrapolated limit of `q^{-1} f(q)` along the ray.
    pub ray_quotient: Quaternion,
    /// Extrapolated limit of `f'(q)` along the ray.
    pub ray_derivative: Quaternion,
    /// Unit direction of the ray.
    pub direction: Quaternion,
}

/// Unit direction inside the cone of aperture `gamma`, on a slice chosen by
/// the seed.
pub(crate) fn ray_direction(gamma: f64, seed: u64) -> Quaternion {
    let unit = draw_unit_imaginary(&mut sample_rng(derive_seed(seed, RAY_STREAM), 0));
    let cos = 0.5 * (1.0 + gamma);
    Quaternion::real(cos) + unit * (1.0 - cos * cos).sqrt()
}

pub fn estimate_c_halfspace<F: SliceFunction + ?Sized>(
    f: &F,
    gamma: f64,
    cfg: &SampleConfig,
) -> Result<CEstimate> {
    let cone = Cone::new(gamma)?;
    let pts = sample_cone(
        &cone,
        derive_seed(cfg.seed, CONE_STREAM),
        cfg.count,
        DEFAULT_CONE_RADII,
    )?;
    let c = pts
        .par_iter()
        .map(|&q| f.eval(q).re() / q.re())
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let direction = ray_direction(gamma, cfg.seed);
    let ray: Vec<Quaternion> = ray_radii().into_iter().map(|r| direction * r).collect();
    let quotients: Vec<Quaternion> = ray
        .iter()
        .map(|&q| q.inverse().map_or(Quaternion::ZERO, |inv| inv * f.eval(q)))
        .collect();
    let derivatives: Vec<Quaternion> = ray.iter().map(|&q| f.derivative_at(q)).collect();
    Ok(CEstimate {
        c,
        ray_quotient: richardson(&quotients),
        ray_derivative: richardson(&derivatives),
        direction,
    })
}

/// Which rigidity statement a detector tests.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RigidityMode {
    /// `f(q) = q + o(1/q)` along a cone ray forces `f = id`.
    BurnsKrantz,
    /// A self-map with the given interior fixed point has `c <= 1`, with
    /// equality only for the identity.
    FixedPoint(Quaternion),
    /// A map into the closed half-space with `liminf r |f(r e^{I theta})| = 0`
    /// vanishes identically.
    ZeroLimit { unit: UnitImaginary, theta: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RigidityOutcome {
    pub rigid: bool,
    /// `|lim q (f(q) - q)|`, `c`, or `liminf r |f|` depending on the mode.
    pub limit: f64,
    pub c: Option<f64>,
    pub report: Report,
}

fn spot_points(cfg: &SampleConfig) -> Result<Vec<Quaternion>> {
    sample_halfspace(derive_seed(cfg.seed, SPOT_STREAM), cfg.count, SPOT_RADII)
}

fn require_range<F: SliceFunction + ?Sized>(f: &F, pts: &[Quaternion], floor: f64) -> Result<()> {
    let values: Vec<Quaternion> = pts.par_iter().map(|&q| f.eval(q)).collect();
    for (&q, v) in pts.iter().zip(values) {
        if !(v.re() > floor) {
            return Err(Error::ModeHypothesisViolated(format!(
                "Re f = {:e} at {q}",
                v.re()
            )));
        }
    }
    Ok(())
}

fn max_deviation<F: SliceFunction + ?Sized>(
    f: &F,
    pts: &[Quaternion],
    target: impl Fn(Quaternion) -> Quaternion + Sync,
) -> f64 {
    pts.par_iter()
        .map(|&q| (f.eval(q) - target(q)).norm())
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max)
}

pub(crate) fn record_rigidity<F: SliceFunction + ?Sized>(
    b: &mut ReportBuilder,
    label: &str,
    f: &F,
    gamma: f64,
    mode: RigidityMode,
    cfg: &SampleConfig,
) -> Result<(bool, f64, Option<f64>)> {
    let pts = spot_points(cfg)?;
    match mode {
        RigidityMode::BurnsKrantz => {
            require_range(f, &pts, 0.0)?;
            let est = estimate_c_halfspace(f, gamma, cfg)?;
            let values: Vec<Quaternion> = ray_radii()
                .into_iter()
                .map(|r| {
                    let q = est.direction * r;
                    q * (f.eval(q) - q)
                })
                .collect();
            let limit = richardson(&values).norm();
            let rigid = (est.c - 1.0).abs() <= ESTIMATOR_TOL && limit <= ESTIMATOR_TOL;
            let spread = max_deviation(f, &pts, |q| q);
            if rigid {
                b.flag(
                    &format!("{label}: identity on samples"),
                    spread <= SPOT_TOL,
                    None,
                );
            } else {
                b.flag(
                    &format!("{label}: differs from identity on samples"),
                    spread > SPOT_TOL,
                    None,
                );
            }
            Ok((rigid, limit, Some(est.c)))
        }
        RigidityMode::FixedPoint(q0) => {
            require_range(f, &pts, 0.0)?;
            let miss = (f.eval(q0) - q0).norm();
            if !(q0.re() > 0.0) || miss > 1e-8 * (1.0 + q0.norm()) {
                return Err(Error::ModeHypothesisViolated(format!(
                    "{q0} is not an interior fixed point (|f(q0) - q0| = {miss:e})"
                )));
            }
            let est = estimate_c_halfspace(f, gamma, cfg)?;
            b.at_least(
                &format!("{label}: c at most 1"),
                Some(q0),
                1.0 + SPOT_TOL - est.c,
                0.0,
                None,
            );
            let rigid = (est.c - 1.0).abs() <= ESTIMATOR_TOL;
            if rigid {
                let spread = max_deviation(f, &pts, |q| q);
                b.flag(
                    &format!("{label}: identity on samples"),
                    spread <= SPOT_TOL,
                    None,
                );
            }
            Ok((rigid, est.c, Some(est.c)))
        }
        RigidityMode::ZeroLimit { unit, theta } => {
            if !(theta.abs() < FRAC_PI_2) {
                return Err(Error::ModeHypothesisViolated(format!(
                    "angle {theta} outside (-pi/2, pi/2)"
                )));
            }
            require_range(f, &pts, cfg.tol_strict)?;
            let dir = Quaternion::on_slice(theta.cos(), theta.sin(), unit);
            let values: Vec<f64> = ray_radii()
                .into_iter()
                .map(|r| r * f.eval(dir * r).norm())
                .collect();
            let limit = tail_min(&values);
            let rigid = limit <= ESTIMATOR_TOL;
            let spread = max_deviation(f, &pts, |_| Quaternion::ZERO);
            if rigid {
                b.flag(
                    &format!("{label}: zero on samples"),
                    spread <= SPOT_TOL,
                    None,
                );
            } else {
                b.flag(
                    &format!("{label}: nonzero on samples"),
                    spread > SPOT_TOL,
                    None,
                );
            }
            Ok((rigid, limit, None))
        }
    }
}

/// Rigidity detector for self-maps of the half-space.
pub fn check_rigidity<F: SliceFunction + ?Sized>(
    f: &F,
    gamma: f64,
    mode: RigidityMode,
    cfg: &SampleConfig,
) -> Result<RigidityOutcome> {
    cfg.validate()?;
    let mut b = ReportBuilder::new("rigidity", cfg);
    let (rigid, limit, c) = record_rigidity(&mut b, "detector", f, gamma, mode, cfg)?;
    Ok(RigidityOutcome {
        rigid,
        limit,
        c,
        report: b.finish(),
    })
}

pub(crate) fn record_range_rigidity(
    b: &mut ReportBuilder,
    label: &str,
    f: &RegularSeries,
    cfg: &SampleConfig,
) -> Result<(bool, f64)> {
    let pts = sample_ball(derive_seed(cfg.seed, RANGE_STREAM), cfg.count)?;
    let worst = pts.iter().map(|&q| (q, f.eval(q).re())).fold(
        None,
        |acc: Option<(Quaternion, f64)>, (q, re)| match acc {
            Some((_, r)) if r <= re => acc,
            _ => Some((q, re)),
        },
    );
    if let Some((at, re)) = worst {
        if re < cfg.tol_strict {
            return Err(Error::RangeHypothesisViolated { at, re });
        }
    }
    let g = PrecomposeCayley(f);
    let mode = RigidityMode::ZeroLimit {
        unit: UnitImaginary::I,
        theta: 0.0,
    };
    let (rigid, limit, _) = record_rigidity(b, label, &g, 0.5, mode, cfg)?;
    Ok((rigid, limit))
}

/// A map of the ball into the closed half-space that is `o(|q + 1|)` at `-1`
/// vanishes: checked through the Cayley map and the zero-limit detector.
pub fn check_range_rigidity(f: &RegularSeries, cfg: &SampleConfig) -> Result<RigidityOutcome> {
    cfg.validate()?;
    let mut b = ReportBuilder::new("rigidity", cfg);
    let (rigid, limit) = record_range_rigidity(&mut b, "ball vanishing", f, cfg)?;
    Ok(RigidityOutcome {
        rigid,
        limit,
        c: None,
        report: b.finish(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::maps::{Affine, FnMap};

    fn cfg() -> SampleConfig {
        SampleConfig {
            count: 200,
            ..SampleConfig::default()
        }
    }

    #[test]
    fn halfspace_schwarz_pick_values() {
        let q0 = Quaternion::new(0.5, 0.2, 0.0, -0.3);
        let q = Quaternion::new(2.0, -1.0, 0.5, 0.0);
        assert!(
            check_schwarz_pick_halfspace(&Affine::identity(), q0, q)
                .unwrap()
                .abs()
                < 1e-15
        );
        let shift = Affine::new(Quaternion::ONE, Quaternion::ONE);
        let m =
            check_schwarz_pick_halfspace(&shift, Quaternion::ONE, Quaternion::real(2.0)).unwrap();
        assert!((m - 2.0 / 15.0).abs() < 1e-15);
        let one = Constant(Quaternion::ONE);
        assert!(
            check_schwarz_pick_halfspace(&one, q0, q).is_err()
                || check_schwarz_pick_halfspace(&one, q0, q).unwrap() >= 0.0
        );
    }

    #[test]
    fn c_estimates() {
        let est = estimate_c_halfspace(&Affine::identity(), 0.5, &cfg()).unwrap();
        assert!((est.c - 1.0).abs() < 1e-12);
        assert!((est.ray_quotient - Quaternion::ONE).norm() < 1e-4);
        assert!((est.ray_derivative - Quaternion::ONE).norm() < 1e-4);
        let est = estimate_c_halfspace(&Constant(Quaternion::ONE), 0.5, &cfg()).unwrap();
        assert!(est.c.abs() < 1e-4);
        let est = estimate_c_halfspace(
            &Affine::new(Quaternion::real(2.0), Quaternion::I),
            0.5,
            &cfg(),
        )
        .unwrap();
        assert!((est.c - 2.0).abs() < 1e-12);
        assert!((est.ray_derivative - Quaternion::real(2.0)).norm() < 1e-6);
    }

    #[test]
    fn burns_krantz_detector() {
        let out =
            check_rigidity(&Affine::identity(), 0.5, RigidityMode::BurnsKrantz, &cfg()).unwrap();
        assert!(out.rigid && out.report.pass);
        let f = FnMap::new(|q: Quaternion| q + (q + 1.0).inverse().unwrap());
        let out = check_rigidity(&f, 0.5, RigidityMode::BurnsKrantz, &cfg()).unwrap();
        assert!(!out.rigid && out.report.pass);
        assert!((out.limit - 1.0).abs() < 1e-3, "{}", out.limit);
    }

    #[test]
    fn zero_limit_detector() {
        let f = FnMap::new(|q: Quaternion| (q + 1.0).inverse().unwrap());
        let mode = RigidityMode::ZeroLimit {
            unit: UnitImaginary::J,
            theta: 0.0,
        };
        let out = check_rigidity(&f, 0.5, mode, &cfg()).unwrap();
        assert!(!out.rigid);
        assert!((out.limit - 1.0).abs() < 0.1);
        let zero = Constant(Quaternion::ZERO);
        assert!(check_rigidity(&zero, 0.5, mode, &cfg()).unwrap().rigid);
    }

    #[test]
    fn range_rigidity_cases() {
        assert!(
            check_range_rigidity(&RegularSeries::zero(), &cfg())
                .unwrap()
                .rigid
        );
        let one_plus_q = RegularSeries::new(vec![Quaternion::ONE, Quaternion::ONE]).unwrap();
        let out = check_range_rigidity(&one_plus_q, &cfg()).unwrap();
        assert!(!out.rigid && out.report.pass);
        let square = one_plus_q.star(&one_plus_q);
        assert!(matches!(
            check_range_rigidity(&square, &cfg()),
            Err(Error::RangeHypothesisViolated { .. })
        ));
    }

    #[test]
    fn fixed_point_mode_requires_fixed_point() {
        let f = Affine::new(Quaternion::real(0.5), Quaternion::real(0.5));
        let out =
            check_rigidity(&f, 0.5, RigidityMode::FixedPoint(Quaternion::ONE), &cfg()).unwrap();
        assert!(!out.rigid && out.report.pass);
        assert!((out.c.unwrap() - 0.5).abs() < 1e-5);
        assert!(matches!(
            check_rigidity(
                &f,
                0.5,
                RigidityMode::FixedPoint(Quaternion::real(2.0)),
                &cfg()
            ),
            Err(Error::ModeHypothesisViolated(_))
        ));
    }
}
