//! Spherical expansions at non-real points and the boundary quantities built
//! from them: the Lie-bracket corrected Schwarz quantity at a boundary point,
//! Hopf-type lower bounds and the fixed-point quantity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::{lie_bracket, Quaternion, EPS_REAL};
use crate::series::RegularSeries;

/// Tolerance on `|xi| = 1` and on fixed-point hypotheses.
pub const BOUNDARY_TOL: f64 = 1e-10;
/// Relative tolerance for quantities that must come out real.
pub const REALNESS_TOL: f64 = 1e-8;
/// Relative agreement required between the closed-form and division-path jets.
pub const JET_TOL: f64 = 1e-8;
/// Relative threshold under which leading coefficients count as vanishing.
pub const VANISHING_TOL: f64 = 1e-12;
/// Relative bound on the coefficient tail of a series regular on the closed ball.
pub const TAIL_TOL: f64 = 1e-10;

/// Coefficients `A_0, ..., A_m` of the expansion
/// `f(q) = sum_n D(q)^n (A_{2n} + (q - q0) A_{2n+1})`,
/// with `D(q) = (q - x0)^2 + y0^2` and `q0 = x0 + y0 I`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphericalJet {
    pub q0: Quaternion,
    #[serde(rename = "A")]
    pub a: Vec<Quaternion>,
}

impl SphericalJet {
    /// `D(q) = (q - x0)^2 + y0^2`, which vanishes exactly on the sphere of `q0`.
    pub fn delta(&self, q: Quaternion) -> Quaternion {
        let x0 = self.q0.re();
        let y0 = self.q0.im_norm();
        let s = q - x0;
        s * s + y0 * y0
    }

    /// Partial sum of the spherical series using every stored coefficient.
    pub fn reconstruct(&self, q: Quaternion) -> Quaternion {
        self.reconstruct_to(q, self.a.len() - 1)
    }

    /// Partial sum using `A_0, ..., A_order`.
    pub fn reconstruct_to(&self, q: Quaternion, order: usize) -> Quaternion {
        let d = self.delta(q);
        let lin = q - self.q0;
        let last = order.min(self.a.len() - 1);
        let mut sum = Quaternion::ZERO;
        let mut dpow = Quaternion::ONE;
        let mut n = 0;
        while 2 * n <= last {
            let mut term = self.a[2 * n];
            if 2 * n < last {
                term += lin * self.a[2 * n + 1];
            }
            sum += dpow * term;
            dpow *= d;
            n += 1;
        }
        sum
    }
}

fn require_non_real(q0: Quaternion) -> Result<()> {
    if q0.im_norm() < EPS_REAL {
        return Err(Error::RealPoint(q0));
    }
    Ok(())
}

fn require_boundary(xi: Quaternion) -> Result<()> {
    if (xi.norm() - 1.0).abs() > BOUNDARY_TOL {
        return Err(Error::NotOnBoundary(xi));
    }
    require_non_real(xi)
}

/// Coefficient magnitude used for relative tolerances; never zero.
fn tol_scale(f: &RegularSeries) -> f64 {
    f.coeff_scale().max(f64::MIN_POSITIVE)
}

fn require_real(value: Quaternion, scale: f64) -> Result<f64> {
    let defect = value.im_norm();
    let tolerance = REALNESS_TOL * scale;
    if defect > tolerance {
        return Err(Error::NotReal {
            value,
            defect,
            tolerance,
        });
    }
    Ok(value.re())
}

/// `(q0 - conj q0)^{-1} (f(q0) - f(conj q0))`.
pub fn spherical_derivative(f: &RegularSeries, q0: Quaternion) -> Result<Quaternion> {
    require_non_real(q0)?;
    let qb = q0.conj();
    Ok((q0 - qb).inverse()? * (f.eval(q0) - f.eval(qb)))
}

/// Jet of order `order >= 2`. `A_1` and `A_2` come from closed forms and
/// are cross-checked against repeated division by `q - q0` and `q - conj q0`,
/// which also supplies the higher coefficients.
pub fn spherical_jet(f: &RegularSeries, q0: Quaternion, order: usize) -> Result<SphericalJet> {
    require_non_real(q0)?;
    let order = order.max(2);
    let qb = q0.conj();

    let a1 = spherical_derivative(f, q0)?;
    let two_im = q0.im() * 2.0;
    let a2 = two_im.inverse()? * (f.eval_derivative(q0) - a1);

    let mut a = Vec::with_capacity(order + 1);
    a.push(f.eval(q0));
    let mut g = f.clone();
    for n in 1..=order {
        let (divide_at, eval_at) = if n % 2 == 1 { (q0, qb) } else { (qb, q0) };
        g = g.divide_linear(divide_at)?;
        a.push(g.eval(eval_at));
    }

    let mismatch = (a[1] - a1).norm().max((a[2] - a2).norm());
    if mismatch > JET_TOL * tol_scale(f) {
        return Err(Error::JetMismatch(mismatch));
    }
    a[1] = a1;
    a[2] = a2;
    Ok(SphericalJet { q0, a })
}

/// `df/dv (q0) = v A_1 + (q0 v - v conj q0) A_2` for a unit direction `v`.
pub fn directional_derivative(
    f: &RegularSeries,
    q0: Quaternion,
    v: Quaternion,
) -> Result<Quaternion> {
    if (v.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnit(v));
    }
    let jet = spherical_jet(f, q0, 2)?;
    Ok(v * jet.a[1] + (q0 * v - v * q0.conj()) * jet.a[2])
}

/// Real number `Re L` where
/// `L = conj(xi) (f(xi) conj f'(xi) + [conj xi, f(xi) conj A_2])`.
/// When `|f(xi)| = 1` this is the radial derivative of `|f|` at `xi`.
pub fn boundary_schwarz_quantity(f: &RegularSeries, xi: Quaternion) -> Result<f64> {
    require_boundary(xi)?;
    let jet = spherical_jet(f, xi, 2)?;
    let fx = jet.a[0];
    let fp = f.eval_derivative(xi);
    let xb = xi.conj();
    let lambda = xb * (fx * fp.conj() + lie_bracket(xb, fx * jet.a[2].conj()));
    require_real(lambda, tol_scale(f))
}

/// `f'(xi) - [xi, A_2]` for a map with `f(0) = 0` fixing the boundary point `xi`.
pub fn fixed_point_quantity(f: &RegularSeries, xi: Quaternion) -> Result<f64> {
    require_boundary(xi)?;
    let at_zero = f.coeff(0).norm();
    if at_zero > BOUNDARY_TOL {
        return Err(Error::FixedPointViolated(format!("|f(0)| = {at_zero:e}")));
    }
    let jet = spherical_jet(f, xi, 2)?;
    let miss = (jet.a[0] - xi).norm();
    if miss > BOUNDARY_TOL {
        return Err(Error::FixedPointViolated(format!(
            "|f(xi) - xi| = {miss:e}"
        )));
    }
    let value = f.eval_derivative(xi) - lie_bracket(xi, jet.a[2]);
    require_real(value, tol_scale(f))
}

/// Index of the first coefficient above `tol * scale`, or `None` for the
/// zero series.
pub fn vanishing_order(f: &RegularSeries, tol: f64) -> Option<usize> {
    let threshold = tol * f.coeff_scale();
    f.coeffs().iter().position(|c| c.norm() > threshold)
}

fn require_vanishing(f: &RegularSeries, n: usize) -> Result<()> {
    let threshold = VANISHING_TOL * f.coeff_scale();
    for index in 0..n {
        let modulus = f.coeff(index).norm();
        if modulus > threshold {
            return Err(Error::VanishingHypothesisViolated {
                order: n,
                index,
                modulus,
            });
        }
    }
    Ok(())
}

/// `num / den` with the convention that a vanishing numerator gives zero.
fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Lower bound for the boundary Schwarz quantity of a self-map of the ball
/// whose first `n` coefficients vanish:
/// `n + 2(1 - |a_n|)^2 / (1 - |a_n|^2 + |a_{n+1}|)`.
pub fn hopf_bound(f: &RegularSeries, n: usize) -> Result<f64> {
    require_vanishing(f, n)?;
    let an = f.coeff(n).norm();
    let an1 = f.coeff(n + 1).norm();
    let frac = ratio(2.0 * (1.0 - an).powi(2), 1.0 - an * an + an1);
    Ok(n as f64 + frac)
}

/// Lower bound for `f'(1)` when `f(1) = 1`:
/// `n + 2|1 - a_n|^2 / (1 - |a_n|^2 + |a_{n+1}|)`.
pub fn hopf_bound_at_one(f: &RegularSeries, n: usize) -> Result<f64> {
    require_vanishing(f, n)?;
    let an = f.coeff(n);
    let an1 = f.coeff(n + 1).norm();
    let frac = ratio(
        2.0 * (Quaternion::ONE - an).norm_sqr(),
        1.0 - an.norm_sqr() + an1,
    );
    Ok(n as f64 + frac)
}

/// Weaker form `n + |1 - a_n|^2 / (1 - |a_n|^2)`, attained by Moebius maps
/// fixing `1` multiplied by `q^n`.
pub fn hopf_bound_at_one_weak(f: &RegularSeries, n: usize) -> Result<f64> {
    require_vanishing(f, n)?;
    let an = f.coeff(n);
    let frac = ratio((Quaternion::ONE - an).norm_sqr(), 1.0 - an.norm_sqr());
    Ok(n as f64 + frac)
}

/// Accepts series that are numerically convergent on the closed ball: exact
/// polynomials, or truncated series whose upper half of coefficients has
/// negligible mass.
pub fn check_regular_on_closed_ball(f: &RegularSeries) -> Result<()> {
    if !f.is_truncated() {
        return Ok(());
    }
    let tail = f.tail_mass(f.order() / 2 + 1);
    if tail > TAIL_TOL * f.coeff_scale() {
        return Err(Error::NotRegularOnClosedBall { tail });
    }
    Ok(())
}
