//! Slice regular functions as truncated power series `f(q) = sum q^n a_n`
//! centred at the origin, with the regular (`*`) product and the pointwise
//! formulas that turn regular products and quotients into ordinary
//! quaternion arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::{slice_decompose, Quaternion, UnitImaginary, EPS_REAL};

/// Default truncation order `N` of constructed series.
pub const DEFAULT_TRUNCATION: usize = 128;
/// Default degree cap of `*`-products.
pub const DEFAULT_STAR_CAP: usize = 256;
/// Relative threshold of the zero-denominator guards.
pub const EPS_DEN: f64 = 1e-12;
/// Relative residual allowed by [`RegularSeries::divide_linear`].
pub const DIVISION_RESIDUAL_TOL: f64 = 1e-9;
/// Step of the finite-difference holomorphy check.
pub const HOLOMORPHY_STEP: f64 = 1e-5;

/// A function that can be evaluated pointwise on (part of) a slice domain,
/// together with its regular conjugate.
pub trait SliceFunction: Send + Sync {
    fn eval(&self, q: Quaternion) -> Quaternion;

    /// `f^c(q)`. The default recovers it from `f(q)` and `f(conj q)` through
    /// the representation formula: on `C_I`, `f = a + I b` and
    /// `f^c = conj(a) + I conj(b)`.
    fn eval_conj(&self, q: Quaternion) -> Quaternion {
        representation_conjugate(|p| self.eval(p), q)
    }

    /// Slice derivative; the default is a central difference along the real
    /// direction, where it agrees with `df/dx`.
    fn derivative_at(&self, q: Quaternion) -> Quaternion {
        let h = 1e-5 * q.norm().max(1.0);
        (self.eval(q + h) - self.eval(q - h)) / (2.0 * h)
    }

    /// Magnitude the zero-denominator guards are scaled by.
    fn scale(&self) -> f64 {
        1.0
    }
}

impl<T: SliceFunction + ?Sized> SliceFunction for &T {
    fn eval(&self, q: Quaternion) -> Quaternion {
        (**self).eval(q)
    }
    fn eval_conj(&self, q: Quaternion) -> Quaternion {
        (**self).eval_conj(q)
    }
    fn derivative_at(&self, q: Quaternion) -> Quaternion {
        (**self).derivative_at(q)
    }
    fn scale(&self) -> f64 {
        (**self).scale()
    }
}

impl<T: SliceFunction + ?Sized> SliceFunction for Box<T> {
    fn eval(&self, q: Quaternion) -> Quaternion {
        (**self).eval(q)
    }
    fn eval_conj(&self, q: Quaternion) -> Quaternion {
        (**self).eval_conj(q)
    }
    fn derivative_at(&self, q: Quaternion) -> Quaternion {
        (**self).derivative_at(q)
    }
    fn scale(&self) -> f64 {
        (**self).scale()
    }
}

/// `f^c(q)` from two evaluations of `f` on the slice through `q`.
pub fn representation_conjugate(f: impl Fn(Quaternion) -> Quaternion, q: Quaternion) -> Quaternion {
    let s = slice_decompose(q);
    if s.y < EPS_REAL {
        return f(q).conj();
    }
    let unit = s.unit.get();
    let at = f(q);
    let at_conj = f(q.conj());
    let a = (at + at_conj) * 0.5;
    let b = -(unit * (at - at_conj)) * 0.5;
    a.conj() + unit * b.conj()
}

/// Truncated power series `sum_{n=0}^{N} q^n a_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularSeries {
    coeffs: Vec<Quaternion>,
    truncated: bool,
}

/// On-disk form: `{"truncation": N, "coeffs": [[x0,x1,x2,x3], ...]}`.
#[derive(Serialize, Deserialize)]
struct CoefficientFile {
    truncation: usize,
    coeffs: Vec<Quaternion>,
}

impl RegularSeries {
    pub fn new(coeffs: Vec<Quaternion>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidSeries);
        }
        Ok(RegularSeries {
            coeffs,
            truncated: false,
        })
    }

    fn from_parts(coeffs: Vec<Quaternion>, truncated: bool) -> Self {
        debug_assert!(!coeffs.is_empty());
        RegularSeries { coeffs, truncated }
    }

    pub fn constant(c: Quaternion) -> Self {
        Self::from_parts(vec![c], false)
    }

    pub fn zero() -> Self {
        Self::constant(Quaternion::ZERO)
    }

    pub fn one() -> Self {
        Self::constant(Quaternion::ONE)
    }

    pub fn identity() -> Self {
        Self::from_parts(vec![Quaternion::ZERO, Quaternion::ONE], false)
    }

    /// `q^n a`.
    pub fn monomial(n: usize, a: Quaternion) -> Self {
        let mut coeffs = vec![Quaternion::ZERO; n + 1];
        coeffs[n] = a;
        Self::from_parts(coeffs, false)
    }

    /// `q^n`.
    pub fn power(n: usize) -> Self {
        Self::monomial(n, Quaternion::ONE)
    }

    /// `q - c`, the linear factor of regular division.
    pub fn linear(c: Quaternion) -> Self {
        Self::from_parts(vec![-c, Quaternion::ONE], false)
    }

    /// Regular Moebius map `(1 - q conj(u))^{-*} * (q - u)` truncated at
    /// [`DEFAULT_TRUNCATION`].
    pub fn moebius(u: Quaternion) -> Result<Self> {
        Self::moebius_with_order(u, DEFAULT_TRUNCATION)
    }

    /// Closed form: `c_0 = -u`, `c_n = conj(u)^{n-1} (1 - |u|^2)`.
    pub fn moebius_with_order(u: Quaternion, order: usize) -> Result<Self> {
        if !(u.norm() < 1.0) {
            return Err(Error::ParameterOutOfBall(u));
        }
        let ub = u.conj();
        let w = 1.0 - u.norm_sqr();
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(-u);
        let mut p = Quaternion::ONE;
        for _ in 1..=order {
            coeffs.push(p * w);
            p *= ub;
        }
        let truncated = order > 0 && p.norm() * w > f64::EPSILON;
        Ok(Self::from_parts(coeffs, truncated))
    }

    /// The Moebius map right-multiplied by `(1 - conj(u))(1 - u)^{-1}`, so
    /// that it fixes `1`.
    pub fn moebius_fixing_one(u: Quaternion, order: usize) -> Result<Self> {
        let m = Self::moebius_with_order(u, order)?;
        let unit = (Quaternion::ONE - u.conj()) * (Quaternion::ONE - u).inverse()?;
        Ok(m.right_mul(unit))
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    /// Coefficient `a_n`, zero past the truncation order.
    pub fn coeff(&self, n: usize) -> Quaternion {
        self.coeffs.get(n).copied().unwrap_or(Quaternion::ZERO)
    }

    /// Truncation order `N` (the series has `N + 1` coefficients).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn with_truncated(mut self, flag: bool) -> Self {
        self.truncated = flag;
        self
    }

    /// `max_k |a_k|`.
    pub fn coeff_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `sum_{n >= from} |a_n|`.
    pub fn tail_mass(&self, from: usize) -> f64 {
        self.coeffs.iter().skip(from).map(|c| c.norm()).sum()
    }

    /// `sum_n |a_n|`.
    pub fn l1_norm(&self) -> f64 {
        self.tail_mass(0)
    }

    /// Horner evaluation from the top coefficient.
    pub fn eval(&self, q: Quaternion) -> Quaternion {
        horner(self.coeffs.iter().copied(), q)
    }

    /// `f^c(q)` without building the conjugate series.
    pub fn eval_conj(&self, q: Quaternion) -> Quaternion {
        horner(self.coeffs.iter().map(|c| c.conj()), q)
    }

    /// `f'(q)` without building the derivative series.
    pub fn eval_derivative(&self, q: Quaternion) -> Quaternion {
        horner(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| *c * n as f64),
            q,
        )
    }

    /// Regular product with the default cap.
    pub fn star(&self, g: &RegularSeries) -> RegularSeries {
        self.star_capped(g, DEFAULT_STAR_CAP)
    }

    /// Coefficient convolution `c_n = sum_k a_k b_{n-k}`, kept up to degree
    /// `min(N_f + N_g, max(N_f, N_g, cap))`. The result is flagged as
    /// truncated when the dropped coefficients are not negligible.
    pub fn star_capped(&self, g: &RegularSeries, cap: usize) -> RegularSeries {
        let (nf, ng) = (self.order(), g.order());
        let full = nf + ng;
        let degree = full.min(nf.max(ng).max(cap));
        let conv = |n: usize| -> Quaternion {
            let lo = n.saturating_sub(ng);
            let hi = n.min(nf);
            (lo..=hi).map(|k| self.coeffs[k] * g.coeffs[n - k]).sum()
        };
        let coeffs: Vec<Quaternion> = (0..=degree).map(conv).collect();
        let mut truncated = self.truncated || g.truncated;
        if degree < full {
            let dropped: f64 = (degree + 1..=full).map(|n| conv(n).norm()).sum();
            let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
            truncated |= dropped > f64::EPSILON * scale.max(f64::MIN_POSITIVE);
        }
        Self::from_parts(coeffs, truncated)
    }

    /// Regular conjugate: coefficients `conj(a_n)`.
    pub fn conj_regular(&self) -> RegularSeries {
        Self::from_parts(
            self.coeffs.iter().map(|c| c.conj()).collect(),
            self.truncated,
        )
    }

    /// Symmetrization `f^s = f * f^c`; its coefficients are real.
    pub fn symmetrize(&self) -> RegularSeries {
        self.star(&self.conj_regular())
    }

    /// Regular reciprocal truncated at `max(N, DEFAULT_TRUNCATION)`.
    pub fn reciprocal(&self) -> Result<RegularSeries> {
        self.reciprocal_to(self.order().max(DEFAULT_TRUNCATION))
    }

    /// `f^{-*} = (f^s)^{-1} f^c`: the real series `f^s` is inverted by the
    /// usual recursion and the result is `*`-multiplied by `f^c`.
    pub fn reciprocal_to(&self, order: usize) -> Result<RegularSeries> {
        let threshold = EPS_DEN * self.coeff_scale();
        let a0 = self.coeffs[0].norm();
        if !(a0 > threshold) {
            return Err(Error::ZeroConstantTerm {
                modulus: a0,
                threshold,
            });
        }
        let sym: Vec<f64> = (0..=order)
            .map(|n| {
                let lo = n.saturating_sub(self.order());
                let hi = n.min(self.order());
                (lo..=hi)
                    .map(|k| (self.coeffs[k] * self.coeffs[n - k].conj()).re())
                    .sum()
            })
            .collect();
        let mut inv = vec![0.0; order + 1];
        inv[0] = 1.0 / sym[0];
        for n in 1..=order {
            let acc: f64 = (1..=n).map(|k| sym[k] * inv[n - k]).sum();
            inv[n] = -acc / sym[0];
        }
        let coeffs: Vec<Quaternion> = (0..=order)
            .map(|n| {
                let lo = n.saturating_sub(self.order());
                (lo..=n).map(|k| self.coeffs[n - k].conj() * inv[k]).sum()
            })
            .collect();
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let truncated = self.truncated || coeffs[order].norm() > f64::EPSILON * scale;
        Ok(Self::from_parts(coeffs, truncated))
    }

    /// Slice derivative: `n a_n` shifted down one degree.
    pub fn derivative(&self) -> RegularSeries {
        if self.order() == 0 {
            return Self::from_parts(vec![Quaternion::ZERO], self.truncated);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| *c * n as f64)
            .collect();
        Self::from_parts(coeffs, self.truncated)
    }

    /// `g = R_{q0} f` with `(q - q0) * g = f - f(q0)`, by synthetic division
    /// from the top: `b_{N-1} = c_N`, `b_{n-1} = c_n + q0 b_n`.
    pub fn divide_linear(&self, q0: Quaternion) -> Result<RegularSeries> {
        let n = self.order();
        if n == 0 {
            return Ok(Self::from_parts(vec![Quaternion::ZERO], self.truncated));
        }
        let value = self.eval(q0);
        let mut b = vec![Quaternion::ZERO; n];
        b[n - 1] = self.coeffs[n];
        for k in (1..n).rev() {
            b[k - 1] = self.coeffs[k] + q0 * b[k];
        }
        let residual = (self.coeffs[0] - value + q0 * b[0]).norm();
        let tolerance = DIVISION_RESIDUAL_TOL * self.term_scale(q0);
        if !(residual <= tolerance) {
            return Err(Error::ResidualTooLarge {
                residual,
                tolerance,
            });
        }
        Ok(Self::from_parts(b, self.truncated))
    }

    /// `max_n |a_n| max(1, |q|)^n`, the size of the largest term summed when
    /// evaluating at `q`.
    fn term_scale(&self, q: Quaternion) -> f64 {
        let r = q.norm().max(1.0);
        let mut p = 1.0;
        let mut m: f64 = 0.0;
        for c in &self.coeffs {
            m = m.max(c.norm() * p);
            p *= r;
        }
        m
    }

    pub fn add(&self, g: &RegularSeries) -> RegularSeries {
        let n = self.order().max(g.order());
        let coeffs = (0..=n).map(|k| self.coeff(k) + g.coeff(k)).collect();
        Self::from_parts(coeffs, self.truncated || g.truncated)
    }

    pub fn sub(&self, g: &RegularSeries) -> RegularSeries {
        let n = self.order().max(g.order());
        let coeffs = (0..=n).map(|k| self.coeff(k) - g.coeff(k)).collect();
        Self::from_parts(coeffs, self.truncated || g.truncated)
    }

    /// `f(q) c`, coefficientwise `a_n c`.
    pub fn right_mul(&self, c: Quaternion) -> RegularSeries {
        Self::from_parts(self.coeffs.iter().map(|a| *a * c).collect(), self.truncated)
    }

    /// `c f(q)` for a constant `c`, which is `c * f`.
    pub fn left_mul(&self, c: Quaternion) -> RegularSeries {
        Self::from_parts(self.coeffs.iter().map(|a| c * *a).collect(), self.truncated)
    }

    /// `q^m f(q)`.
    pub fn shift(&self, m: usize) -> RegularSeries {
        let mut coeffs = vec![Quaternion::ZERO; m];
        coeffs.extend_from_slice(&self.coeffs);
        Self::from_parts(coeffs, self.truncated)
    }

    /// Keeps at most `order + 1` coefficients.
    pub fn truncate_to(&self, order: usize) -> RegularSeries {
        if order >= self.order() {
            return self.clone();
        }
        let dropped = self.tail_mass(order + 1);
        let coeffs = self.coeffs[..=order].to_vec();
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let truncated = self.truncated || dropped > f64::EPSILON * scale;
        Self::from_parts(coeffs, truncated)
    }

    pub fn to_json(&self) -> String {
        let file = CoefficientFile {
            truncation: self.order(),
            coeffs: self.coeffs.clone(),
        };
        serde_json::to_string_pretty(&file).expect("coefficient file serializes")
    }

    pub fn from_json(text: &str) -> Result<RegularSeries> {
        let file: CoefficientFile =
            serde_json::from_str(text).map_err(|e| Error::CoefficientFile(e.to_string()))?;
        if file.coeffs.len() != file.truncation + 1 {
            return Err(Error::CoefficientFile(format!(
                "truncation {} needs {} coefficients, found {}",
                file.truncation,
                file.truncation + 1,
                file.coeffs.len()
            )));
        }
        RegularSeries::new(file.coeffs)
    }
}

impl SliceFunction for RegularSeries {
    fn eval(&self, q: Quaternion) -> Quaternion {
        RegularSeries::eval(self, q)
    }
    fn eval_conj(&self, q: Quaternion) -> Quaternion {
        RegularSeries::eval_conj(self, q)
    }
    fn derivative_at(&self, q: Quaternion) -> Quaternion {
        self.eval_derivative(q)
    }
    fn scale(&self) -> f64 {
        self.coeff_scale()
    }
}

/// `a_0 + q(a_1 + q(a_2 + ...))` given the coefficients in ascending order.
fn horner<It>(coeffs: It, q: Quaternion) -> Quaternion
where
    It: DoubleEndedIterator<Item = Quaternion>,
{
    coeffs.rev().fold(Quaternion::ZERO, |acc, c| q * acc + c)
}

/// `f * g (q) = f(q) g(f(q)^{-1} q f(q))`, or `0` where `f(q) = 0`.
pub fn pointwise_star<F, G>(f: &F, g: &G, q: Quaternion) -> Quaternion
where
    F: SliceFunction + ?Sized,
    G: SliceFunction + ?Sized,
{
    let fq = f.eval(q);
    match q.conjugate_by(fq) {
        Ok(moved) => fq * g.eval(moved),
        Err(_) => Quaternion::ZERO,
    }
}

/// `T_f(q) = f^c(q)^{-1} q f^c(q)`.
pub fn t_map<F: SliceFunction + ?Sized>(f: &F, q: Quaternion) -> Result<Quaternion> {
    let c = f.eval_conj(q);
    let modulus = c.norm();
    if !(modulus > EPS_DEN * f.scale()) {
        return Err(Error::ZeroDenominator { at: q, modulus });
    }
    q.conjugate_by(c)
}

/// `f^s(q)` evaluated as `f^c * f (q) = f^c(q) f(T_f(q))`.
pub fn symmetrization_at<F: SliceFunction + ?Sized>(f: &F, q: Quaternion) -> Quaternion {
    let c = f.eval_conj(q);
    match q.conjugate_by(c) {
        Ok(t) => c * f.eval(t),
        Err(_) => Quaternion::ZERO,
    }
}

/// Regular quotient `f^{-*} * g` at `q`, as `f(T_f(q))^{-1} g(T_f(q))`.
pub fn quotient_eval<F, G>(f: &F, g: &G, q: Quaternion) -> Result<Quaternion>
where
    F: SliceFunction + ?Sized,
    G: SliceFunction + ?Sized,
{
    let scale = f.scale();
    let c = f.eval_conj(q);
    let cn = c.norm();
    if !(cn > EPS_DEN * scale) {
        return Err(Error::NearZeroSet {
            at: q,
            modulus: 0.0,
        });
    }
    let t = q.conjugate_by(c)?;
    let ft = f.eval(t);
    let sym = cn * ft.norm();
    if !(sym > EPS_DEN * scale * scale) {
        return Err(Error::NearZeroSet {
            at: q,
            modulus: sym,
        });
    }
    Ok(ft.inverse()? * g.eval(t))
}

/// Largest modulus of the finite-difference Cauchy-Riemann operator
/// `(d/dx + I d/dy) f / 2` over points `x + yI` of the slice `C_I`.
pub fn holomorphy_defect(
    f: impl Fn(Quaternion) -> Quaternion,
    unit: UnitImaginary,
    samples: &[(f64, f64)],
) -> f64 {
    let h = HOLOMORPHY_STEP;
    let i = unit.get();
    samples
        .iter()
        .map(|&(x, y)| {
            let at = |dx: f64, dy: f64| f(Quaternion::on_slice(x + dx, y + dy, unit));
            let dfdx = (at(h, 0.0) - at(-h, 0.0)) / (2.0 * h);
            let dfdy = (at(0.0, h) - at(0.0, -h)) / (2.0 * h);
            ((dfdx + i * dfdy) * 0.5).norm()
        })
        .fold(0.0, f64::max)
}
