//! Limits along dyadic sequences, with first-order Richardson extrapolation.

use serde::Serialize;

use crate::geometry::radial_path;
use crate::quaternion::Quaternion;
use crate::series::SliceFunction;
use crate::verify::SampleConfig;

/// Tolerance of the boundary estimators.
pub const ESTIMATOR_TOL: f64 = 1e-4;
/// Number of trailing sequence points a limit inferior is taken over.
pub const LIMINF_TAIL: usize = 4;
/// Ratio of consecutive quotients above which they are treated as blowing up.
pub const DIVERGENCE_RATIO: f64 = 1.9;

/// Limit of a sequence sampled at steps `eps_m = 2^{-m}` (or radii `2^m`),
/// assuming an error linear in `eps`: `R_m = 2 v_m - v_{m-1}`. Returns the
/// `R_m` that agrees best with its predecessor, so the choice stops before
/// rounding error takes over. Sequences of fewer than three terms return
/// their last element.
pub fn richardson(values: &[Quaternion]) -> Quaternion {
    let n = values.len();
    if n == 0 {
        return Quaternion::ZERO;
    }
    if n < 3 {
        return values[n - 1];
    }
    let r: Vec<Quaternion> = (1..n).map(|m| values[m] * 2.0 - values[m - 1]).collect();
    let mut best = r.len() - 1;
    let mut best_gap = f64::INFINITY;
    for m in 1..r.len() {
        let gap = (r[m] - r[m - 1]).norm();
        if gap <= best_gap {
            best_gap = gap;
            best = m;
        }
    }
    r[best]
}

pub fn richardson_real(values: &[f64]) -> f64 {
    let q: Vec<Quaternion> = values.iter().map(|v| Quaternion::real(*v)).collect();
    richardson(&q).re()
}

/// Minimum over the last [`LIMINF_TAIL`] terms.
pub fn tail_min(values: &[f64]) -> f64 {
    let start = values.len().saturating_sub(LIMINF_TAIL);
    values[start..]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Boundary behaviour at `1` of a self-map of the ball, estimated along the
/// radius `r_m = 1 - 2^{-m}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryData {
    /// Minimum of `(1 - |f(r)|) / (1 - r)` over the tail of the path.
    pub alpha_raw: f64,
    pub alpha: f64,
    /// `f(r_K)` normalized to modulus one.
    pub eta_raw: Quaternion,
    pub eta: Quaternion,
    /// Difference quotient `(f(r) - eta) / (r - 1)` at the last radius.
    pub fprime1_raw: Quaternion,
    pub fprime1: Quaternion,
    /// Limit of `(1 - |f(q)|) / (1 - |q|)` along `q = 1 - e + e i / 2`.
    pub alpha_nontangential: f64,
    /// Limit of `f'(q)` along the same non-tangential path.
    pub derivative_nontangential: Quaternion,
    /// The radial quotient blows up: the angular derivative is infinite.
    pub divergent: bool,
}

impl BoundaryData {
    /// `|f'(1) - alpha eta| <= 1e-4 (1 + alpha)`.
    pub fn angular_consistent(&self) -> bool {
        (self.fprime1 - self.eta * self.alpha).norm() <= ESTIMATOR_TOL * (1.0 + self.alpha)
    }
}

fn normalize(q: Quaternion) -> Quaternion {
    let n = q.norm();
    if n > 0.0 {
        q / n
    } else {
        q
    }
}

/// Estimates `alpha`, `eta = f(1)` and `f'(1)` for a self-map of the ball.
pub fn estimate_boundary_data<F: SliceFunction + ?Sized>(
    f: &F,
    cfg: &SampleConfig,
) -> BoundaryData {
    let radii = radial_path(cfg.k_radial);
    let values: Vec<Quaternion> = radii.iter().map(|&r| f.eval(Quaternion::real(r))).collect();
    let quotients: Vec<f64> = radii
        .iter()
        .zip(&values)
        .map(|(&r, v)| v.one_minus_norm() / (1.0 - r))
        .collect();

    let alpha_raw = tail_min(&quotients);
    let alpha = richardson_real(&quotients);
    let n = quotients.len();
    let blowing_up =
        n >= 2 && quotients[n - 1] >= DIVERGENCE_RATIO * quotients[n - 2] && quotients[n - 2] > 0.0;
    let divergent = !alpha_raw.is_finite() || alpha_raw > 1.0 / ESTIMATOR_TOL || blowing_up;

    let eta_raw = normalize(values[n - 1]);
    let eta = normalize(richardson(&values));

    let diff: Vec<Quaternion> = radii
        .iter()
        .zip(&values)
        .map(|(&r, v)| (*v - eta) / (r - 1.0))
        .collect();
    let fprime1_raw = diff[n - 1];
    let fprime1 = richardson(&diff);

    let steps: Vec<f64> = (4..=cfg.k_radial).map(|m| 0.5f64.powi(m as i32)).collect();
    let nt_points: Vec<Quaternion> = steps
        .iter()
        .map(|&e| Quaternion::new(1.0 - e, 0.5 * e, 0.0, 0.0))
        .collect();
    let nt_quotients: Vec<f64> = nt_points
        .iter()
        .map(|&q| f.eval(q).one_minus_norm() / q.one_minus_norm())
        .collect();
    let nt_derivs: Vec<Quaternion> = nt_points.iter().map(|&q| f.derivative_at(q)).collect();

    BoundaryData {
        alpha_raw,
        alpha,
        eta_raw,
        eta,
        fprime1_raw,
        fprime1,
        alpha_nontangential: richardson_real(&nt_quotients),
        derivative_nontangential: richardson(&nt_derivs),
        divergent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::RegularSeries;

    #[test]
    fn richardson_removes_first_order_error() {
        let v: Vec<Quaternion> = (4..20)
            .map(|m| {
                let e = 0.5f64.powi(m);
                Quaternion::real(3.0 + 5.0 * e)
            })
            .collect();
        assert!((richardson(&v).re() - 3.0).abs() < 1e-13);
        assert_eq!(richardson(&[Quaternion::I]), Quaternion::I);
        assert_eq!(tail_min(&[5.0, 1.0, 4.0, 3.0, 2.0, 6.0]), 2.0);
    }

    #[test]
    fn identity_and_square() {
        let cfg = SampleConfig::default();
        let bd = estimate_boundary_data(&RegularSeries::identity(), &cfg);
        assert!((bd.alpha - 1.0).abs() < 1e-12 && (bd.alpha_raw - 1.0).abs() < 1e-9);
        assert!((bd.eta - Quaternion::ONE).norm() < 1e-12);
        assert!((bd.fprime1 - Quaternion::ONE).norm() < 1e-8);
        assert!(!bd.divergent && bd.angular_consistent());

        let bd = estimate_boundary_data(&RegularSeries::power(2), &cfg);
        assert!((bd.alpha - 2.0).abs() < 1e-6);
        assert!((bd.alpha_nontangential - 2.0).abs() < 1e-4);
        assert!((bd.derivative_nontangential - Quaternion::real(2.0)).norm() < 1e-6);
    }

    #[test]
    fn moebius_half() {
        let cfg = SampleConfig::default();
        let f = RegularSeries::moebius(Quaternion::real(0.5)).unwrap();
        let bd = estimate_boundary_data(&f, &cfg);
        // classical angular derivative (1 + u) / (1 - u)
        assert!((bd.alpha - 3.0).abs() < 1e-6, "{bd:?}");
        assert!((bd.eta - Quaternion::ONE).norm() < 1e-9);
        assert!((bd.fprime1 - Quaternion::real(3.0)).norm() < 1e-5, "{bd:?}");
        assert!(bd.angular_consistent());
    }

    #[test]
    fn divergent_when_boundary_modulus_below_one() {
        let cfg = SampleConfig::default();
        let beta = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        let f = RegularSeries::monomial(3, beta / 3.0);
        assert!(estimate_boundary_data(&f, &cfg).divergent);
    }
}
