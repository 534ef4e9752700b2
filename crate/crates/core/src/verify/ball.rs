//! Checks for self-maps of the unit ball.

use rayon::prelude::*;

use crate::boundary::{
    boundary_schwarz_quantity, check_regular_on_closed_ball, fixed_point_quantity, hopf_bound,
    hopf_bound_at_one, hopf_bound_at_one_weak, vanishing_order, BOUNDARY_TOL, VANISHING_TOL,
};
use crate::error::{Error, Result};
use crate::geometry::{
    derive_seed, draw_unit, radial_path, sample_ball, sample_orisphere, sample_rng, Orisphere,
};
use crate::quaternion::Quaternion;
use crate::series::{quotient_eval, RegularSeries};
use crate::verify::estimate::{
    estimate_boundary_data, richardson_real, BoundaryData, ESTIMATOR_TOL,
};
use crate::verify::report::{Report, ReportBuilder};
use crate::verify::SampleConfig;

const ORISPHERE_STREAM: u64 = 0x0415;
const LINDELOF_STREAM: u64 = 0x11DE;
const BOUNDARY_STREAM: u64 = 0xB0DA;

/// Tolerance of the Hopf checks, which rely on the estimated `f'(1)`.
pub(crate) const HOPF_TOL: f64 = 1e-6;

/// `|(1 - q conj q0)^{-*} * (q - q0)|(q) - |(1 - f conj f(q0))^{-*} * (f - f(q0))|(q)`:
/// how much `f` contracts the pseudo-hyperbolic distance from `q0` to `q`.
/// Nonnegative for self-maps, zero for Moebius maps.
pub fn check_schwarz_pick_ball(f: &RegularSeries, q0: Quaternion, q: Quaternion) -> Result<f64> {
    let one = RegularSeries::one();
    let id_den = RegularSeries::new(vec![Quaternion::ONE, -q0.conj()])?;
    let id_num = RegularSeries::linear(q0);
    let lhs = quotient_eval(&id_den, &id_num, q)?.norm();

    let w = f.eval(q0);
    let f_den = one.sub(&f.right_mul(w.conj()));
    let f_num = f.sub(&RegularSeries::constant(w));
    let rhs = quotient_eval(&f_den, &f_num, q)?.norm();
    Ok(lhs - rhs)
}

pub(crate) fn record_schwarz_pick(
    b: &mut ReportBuilder,
    label: &str,
    f: &RegularSeries,
    pairs: &[(Quaternion, Quaternion)],
    equality: bool,
) {
    let margins: Vec<Result<f64>> = pairs
        .par_iter()
        .map(|&(q0, q)| check_schwarz_pick_ball(f, q0, q))
        .collect();
    let tol = b.tol_eq();
    for (&(_, q), m) in pairs.iter().zip(margins) {
        let m = m.unwrap_or(f64::NAN);
        if equality {
            b.equality(label, Some(q), m, tol, None);
        } else {
            b.inequality(label, Some(q), m, None);
        }
    }
}

/// Point pairs `(q0, q)` in the ball for function `index`.
pub(crate) fn ball_pairs(
    cfg: &SampleConfig,
    stream: u64,
    index: usize,
) -> Result<Vec<(Quaternion, Quaternion)>> {
    let seed = derive_seed(derive_seed(cfg.seed, stream), index as u64);
    let pts = sample_ball(seed, 2 * cfg.count)?;
    Ok(pts.chunks(2).map(|c| (c[0], c[1])).collect())
}

pub(crate) fn record_julia(
    b: &mut ReportBuilder,
    f: &RegularSeries,
    k: f64,
    bd: &BoundaryData,
    cfg: &SampleConfig,
    stream: u64,
) -> Result<()> {
    if bd.divergent {
        return Err(Error::HypothesisViolated(
            "angular derivative at 1 is infinite; the orisphere inclusion is vacuous".into(),
        ));
    }
    let source = Orisphere::new(Quaternion::ONE, k)?;
    let image = Orisphere::new(bd.eta, bd.alpha * k)?;
    let seed = derive_seed(derive_seed(cfg.seed, ORISPHERE_STREAM), stream);
    let pts = sample_orisphere(&source, seed, cfg.count)?;
    let values: Vec<Quaternion> = pts.par_iter().map(|&q| f.eval(q)).collect();
    for (&q, &p) in pts.iter().zip(&values) {
        b.inequality("image inside orisphere", Some(q), image.margin(p), Some(p));
    }
    for (&q, &p) in pts.iter().zip(&values) {
        let lhs =
            bd.alpha * (Quaternion::ONE - q).norm_sqr() / (q.one_minus_norm() * (1.0 + q.norm()));
        let rhs = (bd.eta - p).norm_sqr() / (p.one_minus_norm() * (1.0 + p.norm()));
        b.inequality("julia inequality", Some(q), lhs - rhs, Some(p));
    }
    Ok(())
}

/// Samples the orisphere `S(1, k)` and checks that `f` maps it into
/// `S(eta, alpha k)`, both as set inclusion and in inequality form.
pub fn check_julia(
    f: &RegularSeries,
    k: f64,
    bd: &BoundaryData,
    cfg: &SampleConfig,
) -> Result<Report> {
    cfg.validate()?;
    let mut b = ReportBuilder::new("julia", cfg);
    record_julia(&mut b, f, k, bd, cfg, 0)?;
    Ok(b.finish())
}

pub(crate) fn record_julia_caratheodory(
    b: &mut ReportBuilder,
    f: &RegularSeries,
    cfg: &SampleConfig,
) -> BoundaryData {
    let bd = estimate_boundary_data(f, cfg);
    b.flag("finite angular derivative", !bd.divergent, None);
    if bd.divergent {
        return bd;
    }
    let scale = ESTIMATOR_TOL * (1.0 + bd.alpha);
    let last = *radial_path(cfg.k_radial)
        .last()
        .expect("non-empty radial path");
    let boundary_modulus = f.eval(Quaternion::real(last)).norm();
    b.equality(
        "boundary value on the sphere",
        None,
        1.0 - boundary_modulus,
        scale,
        Some(bd.eta),
    );
    b.equality(
        "f'(1) = alpha eta",
        None,
        (bd.fprime1 - bd.eta * bd.alpha).norm(),
        scale,
        Some(bd.fprime1),
    );
    b.equality(
        "non-tangential quotient limit",
        None,
        bd.alpha_nontangential - bd.alpha,
        scale,
        None,
    );
    b.equality(
        "non-tangential derivative limit",
        None,
        (bd.derivative_nontangential - bd.fprime1).norm(),
        scale,
        Some(bd.derivative_nontangential),
    );
    let a0 = f.coeff(0).norm();
    b.at_least(
        "alpha above Julia floor",
        None,
        bd.alpha - (1.0 - a0) / (1.0 + a0),
        -ESTIMATOR_TOL,
        None,
    );
    bd
}

/// Consistency of the boundary data at `1`: finite `alpha`, `f'(1) = alpha
/// eta`, and matching radial and non-tangential limits.
pub fn check_julia_caratheodory(f: &RegularSeries, cfg: &SampleConfig) -> Result<Report> {
    cfg.validate()?;
    let mut b = ReportBuilder::new("julia_caratheodory", cfg);
    record_julia_caratheodory(&mut b, f, cfg);
    Ok(b.finish())
}

pub(crate) fn record_hopf(
    b: &mut ReportBuilder,
    f: &RegularSeries,
    n: usize,
    cfg: &SampleConfig,
    equality: bool,
) -> Result<()> {
    let bound = hopf_bound(f, n)?;
    let strong = hopf_bound_at_one(f, n)?;
    let weak = hopf_bound_at_one_weak(f, n)?;
    let bd = estimate_boundary_data(f, cfg);
    if bd.divergent || (bd.eta - Quaternion::ONE).norm() > HOPF_TOL {
        return Err(Error::HypothesisViolated(format!(
            "f(1) = 1 is required, radial estimate gives {}",
            bd.eta
        )));
    }
    let fp = bd.fprime1;
    b.equality("f'(1) is real", None, fp.im_norm(), HOPF_TOL, Some(fp));
    b.at_least(
        "f'(1) above modulus bound",
        None,
        fp.re() - bound,
        -HOPF_TOL,
        Some(fp),
    );
    b.at_least(
        "f'(1) above bound at 1",
        None,
        fp.re() - strong,
        -HOPF_TOL,
        Some(fp),
    );
    b.at_least(
        "f'(1) above weak bound at 1",
        None,
        fp.re() - weak,
        -HOPF_TOL,
        Some(fp),
    );
    if equality {
        b.equality(
            "equality in weak bound",
            None,
            fp.re() - weak,
            HOPF_TOL,
            Some(fp),
        );
    }
    Ok(())
}

/// Lower bounds for `f'(1)` when `f(1) = 1` and the first `n` coefficients
/// vanish.
pub fn check_hopf(f: &RegularSeries, n: usize, cfg: &SampleConfig) -> Result<Report> {
    cfg.validate()?;
    let mut b = ReportBuilder::new("hopf", cfg);
    record_hopf(&mut b, f, n, cfg, false)?;
    Ok(b.finish())
}

/// Margins of the Lindelöf-type estimates at one point. Each is
/// `bound - value` (or `value - bound` for lower bounds), so nonnegative
/// margins mean the estimate holds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LindelofMargins {
    /// `|f(q) - c a_0|` against `|q|(1 - |a_0|^2) / (1 - |q|^2 |a_0|^2)`.
    pub centered: f64,
    pub modulus_lower: f64,
    pub modulus_upper: f64,
    /// `|f(q) - a_0|` against `|q|(1 - |a_0|^2) / (1 - |q||a_0|)`.
    pub increment: f64,
    /// Upper bound on `|f(q)|` that also uses `|f'(0)|`.
    pub refined: Option<f64>,
    /// Two-sided bounds for maps vanishing to order `n >= 1` at 0.
    pub vanishing: Option<(f64, f64)>,
}

pub fn lindelof_margins(f: &RegularSeries, q: Quaternion) -> LindelofMargins {
    let a0 = f.coeff(0);
    let m0 = a0.norm();
    let a1 = f.coeff(1).norm();
    let r = q.norm();
    let fq = f.eval(q);
    let fm = fq.norm();
    let den = 1.0 - r * r * m0 * m0;

    let centered = r * (1.0 - m0 * m0) / den - (fq - a0 * ((1.0 - r * r) / den)).norm();
    let modulus_lower = fm - (m0 - r) / (1.0 - r * m0);
    let modulus_upper = (r + m0) / (1.0 + r * m0) - fm;
    let increment = r * (1.0 - m0 * m0) / (1.0 - r * m0) - (fq - a0).norm();

    let refined_den = 1.0 - m0 * m0 + r * a1;
    let refined = (refined_den > 0.0).then(|| {
        let t = r * (r * (1.0 - m0 * m0) + a1) / refined_den;
        (m0 + t) / (1.0 + m0 * t) - fm
    });

    let vanishing = match vanishing_order(f, VANISHING_TOL) {
        Some(n) if n >= 1 => {
            let c = f.coeff(n).norm();
            let rn = r.powi(n as i32);
            let lower = fm - (c - r) / (1.0 - r * c) * rn;
            let upper = (r + c) / (1.0 + r * c) * rn - fm;
            Some((lower, upper))
        }
        _ => None,
    };

    LindelofMargins {
        centered,
        modulus_lower,
        modulus_upper,
        increment,
        refined,
        vanishing,
    }
}

pub(crate) fn record_lindelof(b: &mut ReportBuilder, f: &RegularSeries, pts: &[Quaternion]) {
    let margins: Vec<LindelofMargins> = pts.par_iter().map(|&q| lindelof_margins(f, q)).collect();
    for (&q, m) in pts.iter().zip(&margins) {
        b.inequality("centered estimate", Some(q), m.centered, None);
        b.inequality("modulus lower bound", Some(q), m.modulus_lower, None);
        b.inequality("modulus upper bound", Some(q), m.modulus_upper, None);
        b.inequality("increment estimate", Some(q), m.increment, None);
        if let Some(r) = m.refined {
            b.inequality("refined modulus bound", Some(q), r, None);
        }
        if let Some((lo, hi)) = m.vanishing {
            b.inequality("vanishing-order lower bound", Some(q), lo, None);
            b.inequality("vanishing-order upper bound", Some(q), hi, None);
        }
    }
}

pub(crate) fn lindelof_points(cfg: &SampleConfig, index: usize) -> Result<Vec<Quaternion>> {
    sample_ball(
        derive_seed(derive_seed(cfg.seed, LINDELOF_STREAM), index as u64),
        cfg.count,
    )
}

/// Lindelöf-type estimates of `|f(q)|` and `|f(q) - f(0)|` at sampled points.
pub fn check_lindelof(f: &RegularSeries, cfg: &SampleConfig) -> Result<Report> {
    cfg.validate()?;
    let mut b = ReportBuilder::new("lindelof", cfg);
    record_lindelof(&mut b, f, &lindelof_points(cfg, 0)?);
    Ok(b.finish())
}

/// Non-real unit quaternions for function `index`.
pub(crate) fn boundary_points(cfg: &SampleConfig, index: usize) -> Vec<Quaternion> {
    let seed = derive_seed(derive_seed(cfg.seed, BOUNDARY_STREAM), index as u64);
    (0..cfg.count)
        .map(|i| {
            let mut rng = sample_rng(seed, i as u64);
            loop {
                let xi = draw_unit(&mut rng);
                if xi.im_norm() > 1e-3 {
                    return xi;
                }
            }
        })
        .collect()
}

/// `lim (1 - |f(r xi)|) / (1 - r)` along the dyadic radius.
fn radial_modulus_derivative(f: &RegularSeries, xi: Quaternion, cfg: &SampleConfig) -> f64 {
    let values: Vec<f64> = radial_path(cfg.k_radial)
        .iter()
        .map(|&r| f.eval(xi * r).one_minus_norm() / (1.0 - r))
        .collect();
    richardson_real(&values)
}

fn is_identity(f: &RegularSeries) -> bool {
    f.coeffs().iter().enumerate().all(|(n, c)| {
        (*c - if n == 1 {
            Quaternion::ONE
        } else {
            Quaternion::ZERO
        })
        .norm()
            <= 1e-12
    })
}

pub(crate) fn record_boundary_schwarz(
    b: &mut ReportBuilder,
    f: &RegularSeries,
    points: &[Quaternion],
    cfg: &SampleConfig,
) -> Result<()> {
    check_regular_on_closed_ball(f)?;
    let n = vanishing_order(f, VANISHING_TOL).unwrap_or(0);
    let bound = hopf_bound(f, n)?;
    let rows: Vec<Result<(f64, f64, f64, Option<f64>)>> = points
        .par_iter()
        .map(|&xi| {
            let fx = f.eval(xi);
            if (fx.norm() - 1.0).abs() > BOUNDARY_TOL {
                return Err(Error::HypothesisViolated(format!(
                    "|f(xi)| = {} at xi = {xi}",
                    fx.norm()
                )));
            }
            let lambda = boundary_schwarz_quantity(f, xi)?;
            let radial = radial_modulus_derivative(f, xi, cfg);
            let fp = f.eval_derivative(xi).norm();
            let fixed = if f.coeff(0).norm() <= BOUNDARY_TOL && (fx - xi).norm() <= BOUNDARY_TOL {
                Some(fixed_point_quantity(f, xi)?)
            } else {
                None
            };
            Ok((lambda, radial, fp, fixed))
        })
        .collect();
    let identity = is_identity(f);
    for (&xi, row) in points.iter().zip(rows) {
        let (lambda, radial, fp, fixed) = row?;
        let value = Some(Quaternion::real(lambda));
        b.at_least(
            "schwarz quantity above hopf bound",
            Some(xi),
            lambda - bound,
            -b.tol_eq(),
            value,
        );
        b.at_least(
            "schwarz quantity positive",
            Some(xi),
            lambda,
            f64::MIN_POSITIVE,
            value,
        );
        b.at_least(
            "|f'(xi)| above schwarz quantity",
            Some(xi),
            fp - lambda,
            -b.tol_eq(),
            value,
        );
        b.equality(
            "schwarz quantity equals radial derivative of |f|",
            Some(xi),
            radial - lambda,
            ESTIMATOR_TOL * (1.0 + lambda),
            value,
        );
        if let Some(v) = fixed {
            b.equality(
                "fixed-point quantity equals schwarz quantity",
                Some(xi),
                v - lambda,
                b.tol_eq() * (1.0 + lambda),
                Some(Quaternion::real(v)),
            );
            if identity {
                b.equality(
                    "fixed-point quantity of identity",
                    Some(xi),
                    v - 1.0,
                    b.tol_eq(),
                    None,
                );
            } else {
                b.at_least(
                    "fixed-point quantity above 1",
                    Some(xi),
                    v - 1.0,
                    1e-6,
                    Some(Quaternion::real(v)),
                );
                b.at_least(
                    "|f'(xi)| above 1 at fixed point",
                    Some(xi),
                    fp - 1.0,
                    1e-6,
                    None,
                );
            }
        }
    }
    Ok(())
}

/// The boundary Schwarz quantity at sampled non-real boundary points: lower
/// bounds, positivity, agreement with the radial derivative of `|f|`, and
/// the fixed-point inequalities when `f(0) = 0` and `f(xi) = xi`.
pub fn check_boundary_schwarz(f: &RegularSeries, cfg: &SampleConfig) -> Result<Report> {
    cfg.validate()?;
    let mut b = ReportBuilder::new("boundary_schwarz", cfg);
    record_boundary_schwarz(&mut b, f, &boundary_points(cfg, 0), cfg)?;
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schwarz_pick_identity_and_moebius() {
        let q0 = Quaternion::new(0.1, 0.2, -0.3, 0.1);
        let q = Quaternion::new(-0.4, 0.0, 0.3, 0.5);
        assert!(
            check_schwarz_pick_ball(&RegularSeries::identity(), q0, q)
                .unwrap()
                .abs()
                < 1e-15
        );
        let m = RegularSeries::moebius(Quaternion::new(0.0, 0.5, 0.0, 0.0)).unwrap();
        assert!(check_schwarz_pick_ball(&m, q0, q).unwrap().abs() < 1e-12);
    }

    #[test]
    fn schwarz_pick_strict_for_non_moebius() {
        let f = RegularSeries::new(vec![
            Quaternion::ZERO,
            Quaternion::real(0.5),
            Quaternion::real(0.5),
        ])
        .unwrap();
        let m = check_schwarz_pick_ball(&f, Quaternion::real(0.2), Quaternion::real(0.6)).unwrap();
        // real slice: (0.6-0.2)/(1-0.12) - (f(0.6)-f(0.2))/(1-f(0.6)f(0.2))
        let (a, b) = (0.48, 0.12);
        let expected = 0.4 / 0.88 - (a - b) / (1.0 - a * b);
        assert!((m - expected).abs() < 1e-15 && m > 0.0);
    }

    #[test]
    fn lindelof_constant_margin() {
        let c = Quaternion::new(0.3, 0.2, 0.0, -0.1);
        let f = RegularSeries::constant(c);
        let q = Quaternion::new(0.1, 0.5, 0.2, 0.0);
        let (mc, r) = (c.norm(), q.norm());
        let expected = (1.0 - mc * r) * r * (1.0 - mc * mc) / (1.0 - r * r * mc * mc);
        assert!((lindelof_margins(&f, q).centered - expected).abs() < 1e-15);
    }

    #[test]
    fn lindelof_equality_cases() {
        let q = Quaternion::new(0.2, -0.3, 0.4, 0.1);
        let m = RegularSeries::moebius(Quaternion::new(0.1, 0.2, 0.3, -0.2)).unwrap();
        assert!(lindelof_margins(&m, q).centered.abs() < 1e-12);
        let u = Quaternion::new(0.0, 0.6, 0.0, 0.8);
        let (lo, hi) = lindelof_margins(&RegularSeries::monomial(3, u), q)
            .vanishing
            .unwrap();
        assert!(lo.abs() < 1e-15 && hi.abs() < 1e-15);
    }
}
