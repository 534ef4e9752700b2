//! Hamilton quaternions, the unit sphere of imaginary units, and slice
//! coordinates `q = x + yI`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Moduli at or below this are treated as zero by [`Quaternion::inverse`].
pub const EPS_ZERO: f64 = 1e-300;
/// Points with `|Im q|` below this are treated as real.
pub const EPS_REAL: f64 = 1e-12;
/// Default tolerance of [`same_sphere`].
pub const SPHERE_TOL: f64 = 1e-10;

/// `x0 + x1 i + x2 j + x3 k`. Serialized as `[x0, x1, x2, x3]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Quaternion { x0, x1, x2, x3 }
    }

    #[inline]
    pub const fn real(x: f64) -> Self {
        Quaternion::new(x, 0.0, 0.0, 0.0)
    }

    /// The point `x + y I` of the slice `C_I`.
    #[inline]
    pub fn on_slice(x: f64, y: f64, unit: UnitImaginary) -> Self {
        Quaternion::real(x) + unit.get() * y
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    #[inline]
    pub fn re(self) -> f64 {
        self.x0
    }

    #[inline]
    pub fn im(self) -> Quaternion {
        Quaternion::new(0.0, self.x1, self.x2, self.x3)
    }

    #[inline]
    pub fn conj(self) -> Quaternion {
        Quaternion::new(self.x0, -self.x1, -self.x2, -self.x3)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `|Im q|`.
    #[inline]
    pub fn im_norm(self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }

    /// Euclidean inner product on `R^4`, `Re(p conj(q))`.
    #[inline]
    pub fn dot(self, other: Quaternion) -> f64 {
        self.x0 * other.x0 + self.x1 * other.x1 + self.x2 * other.x2 + self.x3 * other.x3
    }

    #[inline]
    pub fn scale(self, s: f64) -> Quaternion {
        Quaternion::new(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }

    pub fn is_finite(self) -> bool {
        self.x0.is_finite() && self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    pub fn max_abs(self) -> f64 {
        self.x0
            .abs()
            .max(self.x1.abs())
            .max(self.x2.abs())
            .max(self.x3.abs())
    }

    /// `q^{-1} = conj(q) / |q|^2`, computed on a rescaled copy so tiny moduli
    /// do not underflow.
    pub fn inverse(self) -> Result<Quaternion> {
        let m = self.max_abs();
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::ZeroDivision(self.norm()));
        }
        let s = self.scale(1.0 / m);
        let modulus = m * s.norm();
        if modulus <= EPS_ZERO {
            return Err(Error::ZeroDivision(modulus));
        }
        Ok(s.conj().scale(1.0 / (s.norm_sqr() * m)))
    }

    /// `p q^{-1}`.
    pub fn right_div(self, q: Quaternion) -> Result<Quaternion> {
        Ok(self * q.inverse()?)
    }

    /// `q^{-1} p`.
    pub fn left_div(self, q: Quaternion) -> Result<Quaternion> {
        Ok(q.inverse()? * self)
    }

    /// `q^{-1} self q`, the conjugation that moves a point along its sphere.
    pub fn conjugate_by(self, q: Quaternion) -> Result<Quaternion> {
        Ok(q.inverse()? * self * q)
    }

    pub fn powi(self, n: u32) -> Quaternion {
        let mut acc = Quaternion::ONE;
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn is_real(self, tol: f64) -> bool {
        self.im_norm() < tol
    }

    pub fn distance(self, other: Quaternion) -> f64 {
        (self - other).norm()
    }

    /// `1 - |q|`, evaluated as `(1 - |q|^2) / (1 + |q|)` with the real part
    /// handled as `(1 - x0)(1 + x0)` to limit cancellation near the sphere.
    pub fn one_minus_norm(self) -> f64 {
        let one_minus_sq = (1.0 - self.x0) * (1.0 + self.x0)
            - (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3);
        one_minus_sq / (1.0 + self.norm())
    }
}

impl From<[f64; 4]> for Quaternion {
    fn from(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl From<f64> for Quaternion {
    fn from(x: f64) -> Self {
        Quaternion::real(x)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |x: f64| if x.is_sign_negative() { '-' } else { '+' };
        match f.precision() {
            Some(p) => write!(
                f,
                "{:.p$} {} {:.p$}i {} {:.p$}j {} {:.p$}k",
                self.x0,
                sign(self.x1),
                self.x1.abs(),
                sign(self.x2),
                self.x2.abs(),
                sign(self.x3),
                self.x3.abs(),
                p = p
            ),
            None => write!(
                f,
                "{} {} {}i {} {}j {} {}k",
                self.x0,
                sign(self.x1),
                self.x1.abs(),
                sign(self.x2),
                self.x2.abs(),
                sign(self.x3),
                self.x3.abs()
            ),
        }
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, r: Quaternion) -> Quaternion {
        Quaternion::new(
            self.x0 + r.x0,
            self.x1 + r.x1,
            self.x2 + r.x2,
            self.x3 + r.x3,
        )
    }
}

impl Add<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn add(self, r: f64) -> Quaternion {
        Quaternion::new(self.x0 + r, self.x1, self.x2, self.x3)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, r: Quaternion) -> Quaternion {
        Quaternion::new(
            self.x0 - r.x0,
            self.x1 - r.x1,
            self.x2 - r.x2,
            self.x3 - r.x3,
        )
    }
}

impl Sub<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn sub(self, r: f64) -> Quaternion {
        Quaternion::new(self.x0 - r, self.x1, self.x2, self.x3)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.x0, -self.x1, -self.x2, -self.x3)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, r: Quaternion) -> Quaternion {
        let (a1, b1, c1, d1) = (self.x0, self.x1, self.x2, self.x3);
        let (a2, b2, c2, d2) = (r.x0, r.x1, r.x2, r.x3);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn mul(self, s: f64) -> Quaternion {
        self.scale(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    #[inline]
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.x0 / s, self.x1 / s, self.x2 / s, self.x3 / s)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, r: Quaternion) {
        *self = *self + r;
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, r: Quaternion) {
        *self = *self - r;
    }
}

impl MulAssign for Quaternion {
    #[inline]
    fn mul_assign(&mut self, r: Quaternion) {
        *self = *self * r;
    }
}

impl Sum for Quaternion {
    fn sum<It: Iterator<Item = Quaternion>>(iter: It) -> Quaternion {
        iter.fold(Quaternion::ZERO, Add::add)
    }
}

/// `[p, q] = pq - qp`. Always purely imaginary.
#[inline]
pub fn lie_bracket(p: Quaternion, q: Quaternion) -> Quaternion {
    p * q - q * p
}

/// An element of the sphere `S = {q : q^2 = -1}` of imaginary units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Quaternion", into = "Quaternion")]
pub struct UnitImaginary(Quaternion);

impl UnitImaginary {
    pub const I: UnitImaginary = UnitImaginary(Quaternion::I);
    pub const J: UnitImaginary = UnitImaginary(Quaternion::J);
    pub const K: UnitImaginary = UnitImaginary(Quaternion::K);

    /// Accepts `q` only if `Re q = 0` and `|q| = 1` within `1e-12`.
    pub fn new(q: Quaternion) -> Result<Self> {
        if q.x0.abs() <= 1e-12 && (q.norm() - 1.0).abs() <= 1e-12 {
            Ok(UnitImaginary(q.im()))
        } else {
            Err(Error::NotUnit(q))
        }
    }

    /// Normalizes the imaginary part of `q`.
    pub fn from_imaginary_part(q: Quaternion) -> Result<Self> {
        let n = q.im_norm();
        if n < EPS_REAL {
            return Err(Error::RealPoint(q));
        }
        Ok(UnitImaginary(q.im().scale(1.0 / n)))
    }

    #[inline]
    pub fn get(self) -> Quaternion {
        self.0
    }
}

impl TryFrom<Quaternion> for UnitImaginary {
    type Error = Error;
    fn try_from(q: Quaternion) -> Result<Self> {
        UnitImaginary::new(q)
    }
}

impl From<UnitImaginary> for Quaternion {
    fn from(u: UnitImaginary) -> Quaternion {
        u.0
    }
}

/// `q = x + y I` with `y >= 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceCoords {
    pub x: f64,
    pub y: f64,
    pub unit: UnitImaginary,
}

impl SliceCoords {
    pub fn to_quaternion(self) -> Quaternion {
        Quaternion::on_slice(self.x, self.y, self.unit)
    }
}

/// Splits `q` as `x + y I`. Real points (`|Im q| < EPS_REAL`) get `I = i`.
pub fn slice_decompose(q: Quaternion) -> SliceCoords {
    let y = q.im_norm();
    if y < EPS_REAL {
        SliceCoords {
            x: q.x0,
            y,
            unit: UnitImaginary::I,
        }
    } else {
        SliceCoords {
            x: q.x0,
            y,
            unit: UnitImaginary(q.im().scale(1.0 / y)),
        }
    }
}

/// Whether `q` lies on the sphere `[p]`: same real part and same modulus.
pub fn same_sphere(p: Quaternion, q: Quaternion) -> bool {
    same_sphere_tol(p, q, SPHERE_TOL)
}

pub fn same_sphere_tol(p: Quaternion, q: Quaternion, tol: f64) -> bool {
    (p.re() - q.re()).abs() <= tol && (p.norm() - q.norm()).abs() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;
    const ONE: Quaternion = Quaternion::ONE;

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn basic_algebra() {
        assert_eq!((ONE + I + J).conj(), ONE - I - J);
        assert_eq!((Quaternion::real(3.0) + I * 4.0).norm(), 5.0);
        let q = Quaternion::real(2.0) + J;
        assert_eq!(q.re(), 2.0);
        assert_eq!(q.im(), J);
    }

    #[test]
    fn basis_products() {
        assert_eq!(I * J, K);
        assert_eq!(J * I, -K);
        assert_eq!(J * K, I);
        assert_eq!(K * I, J);
        assert_eq!(I * I, -ONE);
        assert_eq!(I * J * K, -ONE);
        // (1+i)(1+j) = 1 + j + i + ij
        assert_eq!((ONE + I) * (ONE + J), ONE + I + J + K);
    }

    #[test]
    fn inverses() {
        assert_eq!(
            Quaternion::real(2.0).inverse().unwrap(),
            Quaternion::real(0.5)
        );
        assert_eq!(I.inverse().unwrap(), -I);
        let q = Quaternion::new(2.0, 1.0, -1.0, 0.0);
        assert!(close(q * q.inverse().unwrap(), ONE, 1e-15));
        assert!(matches!(
            Quaternion::ZERO.inverse(),
            Err(Error::ZeroDivision(_))
        ));
        let tiny = Quaternion::new(1e-200, 0.0, 1e-200, 0.0);
        assert!(close(tiny * tiny.inverse().unwrap(), ONE, 1e-14));
    }

    #[test]
    fn brackets() {
        assert_eq!(lie_bracket(I, J), K * 2.0);
        let q = Quaternion::new(0.3, -1.0, 2.0, 0.5);
        assert_eq!(lie_bracket(q, q), Quaternion::ZERO);
        let b = lie_bracket(-J, (K * -2.0 - ONE) / 3.0);
        assert!(close(b, I * (4.0 / 3.0), 1e-15));
    }

    #[test]
    fn slices() {
        let s = slice_decompose(ONE + I * 2.0);
        assert_eq!((s.x, s.y, s.unit), (1.0, 2.0, UnitImaginary::I));
        let s = slice_decompose(Quaternion::real(5.0));
        assert_eq!((s.x, s.y, s.unit), (5.0, 0.0, UnitImaginary::I));
        let s = slice_decompose(ONE + J + K);
        assert_eq!(s.x, 1.0);
        assert!((s.y - 2f64.sqrt()).abs() < 1e-15);
        assert!(close(s.unit.get(), (J + K) / 2f64.sqrt(), 1e-15));
        let u = s.unit.get();
        assert!(close(u * u, -ONE, 1e-12));
    }

    #[test]
    fn spheres() {
        assert!(same_sphere(I, J));
        assert!(same_sphere(ONE + I, ONE + K));
        assert!(!same_sphere(ONE + I, ONE + I * 2.0));
    }

    #[test]
    fn unit_imaginary_validation() {
        assert!(UnitImaginary::new(ONE).is_err());
        assert!(UnitImaginary::new(I * 2.0).is_err());
        assert!(UnitImaginary::from_imaginary_part(Quaternion::real(3.0)).is_err());
        let u: UnitImaginary = serde_json::from_str("[0.0, 0.0, 1.0, 0.0]").unwrap();
        assert_eq!(u, UnitImaginary::J);
    }

    #[test]
    fn serializes_as_array() {
        let q = Quaternion::new(1.0, -2.5, 0.0, 3.0);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[1.0,-2.5,0.0,3.0]");
        assert_eq!(serde_json::from_str::<Quaternion>(&s).unwrap(), q);
    }

    #[test]
    fn one_minus_norm_is_accurate_near_sphere() {
        let eps = 2f64.powi(-40);
        let q = Quaternion::new(1.0 - eps, 0.0, 0.0, 0.0);
        assert_eq!(q.one_minus_norm(), eps);
    }
}
