//! Pointwise-evaluable regular functions, mainly for the right half-space
//! where power series at the origin are unavailable.

use crate::geometry::cayley;
use crate::quaternion::Quaternion;
use crate::series::{pointwise_star, quotient_eval, SliceFunction};

fn undefined() -> Quaternion {
    Quaternion::new(f64::NAN, f64::NAN, f64::NAN, f64::NAN)
}

/// `q a + b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub a: Quaternion,
    pub b: Quaternion,
}

impl Affine {
    pub fn new(a: Quaternion, b: Quaternion) -> Self {
        Affine { a, b }
    }

    pub fn identity() -> Self {
        Affine::new(Quaternion::ONE, Quaternion::ZERO)
    }
}

impl SliceFunction for Affine {
    fn eval(&self, q: Quaternion) -> Quaternion {
        q * self.a + self.b
    }
    fn eval_conj(&self, q: Quaternion) -> Quaternion {
        q * self.a.conj() + self.b.conj()
    }
    fn derivative_at(&self, _q: Quaternion) -> Quaternion {
        self.a
    }
    fn scale(&self) -> f64 {
        self.a.norm().max(self.b.norm())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constant(pub Quaternion);

impl SliceFunction for Constant {
    fn eval(&self, _q: Quaternion) -> Quaternion {
        self.0
    }
    fn eval_conj(&self, _q: Quaternion) -> Quaternion {
        self.0.conj()
    }
    fn derivative_at(&self, _q: Quaternion) -> Quaternion {
        Quaternion::ZERO
    }
    fn scale(&self) -> f64 {
        self.0.norm()
    }
}

/// A closure taken to be slice regular. The regular conjugate comes from the
/// representation formula.
pub struct FnMap<F> {
    f: F,
}

impl<F> FnMap<F>
where
    F: Fn(Quaternion) -> Quaternion + Send + Sync,
{
    pub fn new(f: F) -> Self {
        FnMap { f }
    }
}

impl<F> SliceFunction for FnMap<F>
where
    F: Fn(Quaternion) -> Quaternion + Send + Sync,
{
    fn eval(&self, q: Quaternion) -> Quaternion {
        (self.f)(q)
    }
}

/// Regular conjugate `f^c`.
pub struct Conj<F>(pub F);

impl<F: SliceFunction> SliceFunction for Conj<F> {
    fn eval(&self, q: Quaternion) -> Quaternion {
        self.0.eval_conj(q)
    }
    fn eval_conj(&self, q: Quaternion) -> Quaternion {
        self.0.eval(q)
    }
    fn scale(&self) -> f64 {
        self.0.scale()
    }
}

/// `f + g`.
pub struct Sum<F, G>(pub F, pub G);

impl<F: SliceFunction, G: SliceFunction> SliceFunction for Sum<F, G> {
    fn eval(&self, q: Quaternion) -> Quaternion {
        self.0.eval(q) + self.1.eval(q)
    }
    fn eval_conj(&self, q: Quaternion) -> Quaternion {
        self.0.eval_conj(q) + self.1.eval_conj(q)
    }
    fn derivative_at(&self, q: Quaternion) -> Quaternion {
        self.0.derivative_at(q) + self.1.derivative_at(q)
    }
    fn scale(&self) -> f64 {
        self.0.scale().max(self.1.scale())
    }
}

/// Regular product `f * g`, evaluated pointwise.
pub struct Star<F, G>(pub F, pub G);

impl<F: SliceFunction, G: SliceFunction> SliceFunction for Star<F, G> {
    fn eval(&self, q: Quaternion) -> Quaternion {
        pointwise_star(&self.0, &self.1, q)
    }
    fn eval_conj(&self, q: Quaternion) -> Quaternion {
        // (f * g)^c = g^c * f^c
        pointwise_star(&Conj(&self.1), &Conj(&self.0), q)
    }
    fn scale(&self) -> f64 {
        self.0.scale() * self.1.scale()
    }
}

/// `f(q) c` for a constant `c`.
pub struct RightMul<F> {
    pub f: F,
    pub c: Quaternion,
}

impl<F: SliceFunction> SliceFunction for RightMul<F> {
    fn eval(&self, q: Quaternion) -> Quaternion {
        self.f.eval(q) * self.c
    }
    fn eval_conj(&self, q: Quaternion) -> Quaternion {
        // (f * c)^c = conj(c) * f^c
        pointwise_star(&Constant(self.c.conj()), &Conj(&self.f), q)
    }
    fn derivative_at(&self, q: Quaternion) -> Quaternion {
        self.f.derivative_at(q) * self.c
    }
    fn scale(&self) -> f64 {
        self.f.scale() * self.c.norm()
    }
}

/// Regular reciprocal `f^{-*}`; `NaN` on the zero set of `f^s`.
pub struct Reciprocal<F>(pub F);

impl<F: SliceFunction> SliceFunction for Reciprocal<F> {
    fn eval(&self, q: Quaternion) -> Quaternion {
        quotient_eval(&self.0, &Constant(Quaternion::ONE), q).unwrap_or_else(|_| undefined())
    }
    fn eval_conj(&self, q: Quaternion) -> Quaternion {
        quotient_eval(&Conj(&self.0), &Constant(Quaternion::ONE), q).unwrap_or_else(|_| undefined())
    }
    fn scale(&self) -> f64 {
        1.0
    }
}

/// `f(phi(q))` with the Cayley map `phi`, which preserves every slice, so the
/// composition stays regular.
pub struct PrecomposeCayley<F>(pub F);

impl<F: SliceFunction> SliceFunction for PrecomposeCayley<F> {
    fn eval(&self, q: Quaternion) -> Quaternion {
        cayley(q).map_or_else(|_| undefined(), |p| self.0.eval(p))
    }
    fn eval_conj(&self, q: Quaternion) -> Quaternion {
        cayley(q).map_or_else(|_| undefined(), |p| self.0.eval_conj(p))
    }
    fn scale(&self) -> f64 {
        self.0.scale()
    }
}

/// `(1 + h)^{-*} * (1 - h)`: turns a map into the unit ball into a map into
/// the right half-space, and back.
pub struct CayleyConjugate<H>(pub H);

fn cayley_quotient(
    h_at: impl Fn(Quaternion) -> Quaternion,
    hc: Quaternion,
    q: Quaternion,
) -> Quaternion {
    let c = Quaternion::ONE + hc;
    let t = match q.conjugate_by(c) {
        Ok(t) => t,
        Err(_) => return undefined(),
    };
    let ht = h_at(t);
    (Quaternion::ONE + ht)
        .inverse()
        .map_or_else(|_| undefined(), |inv| inv * (Quaternion::ONE - ht))
}

impl<H: SliceFunction> SliceFunction for CayleyConjugate<H> {
    fn eval(&self, q: Quaternion) -> Quaternion {
        cayley_quotient(|t| self.0.eval(t), self.0.eval_conj(q), q)
    }
    fn eval_conj(&self, q: Quaternion) -> Quaternion {
        // the factors 1 - h^c and 1 + h^c commute
        cayley_quotient(|t| self.0.eval_conj(t), self.0.eval(q), q)
    }
}

/// Half-space map obtained from a self-map `f` of the ball:
/// `(1 + f o phi)^{-*} * (1 - f o phi)`. Fixes `1` when `f(0) = 0`.
pub fn cayley_conjugate<F: SliceFunction>(f: F) -> CayleyConjugate<PrecomposeCayley<F>> {
    CayleyConjugate(PrecomposeCayley(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::RegularSeries;

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn sample_points() -> Vec<Quaternion> {
        vec![
            Quaternion::new(0.3, 0.1, -0.2, 0.4),
            Quaternion::new(2.0, 0.0, 1.0, 0.0),
            Quaternion::new(0.7, -0.5, 0.5, 0.5),
        ]
    }

    #[test]
    fn combinators_agree_with_series() {
        let f = RegularSeries::new(vec![
            Quaternion::ONE,
            Quaternion::I * 0.5,
            Quaternion::J * 0.25,
        ])
        .unwrap();
        let g = RegularSeries::new(vec![
            Quaternion::K * 0.3,
            Quaternion::new(0.1, 0.2, 0.0, 0.1),
        ])
        .unwrap();
        let c = Quaternion::new(0.2, -0.4, 0.1, 0.3);
        let product = f.star(&g);
        let scaled = f.right_mul(c);
        let recip = f.reciprocal().unwrap();
        for q in sample_points().into_iter().map(|q| q * 0.4) {
            let s = Star(&f, &g);
            assert!(close(s.eval(q), product.eval(q), 1e-14));
            assert!(close(s.eval_conj(q), product.eval_conj(q), 1e-14));
            let r = RightMul { f: &f, c };
            assert!(close(r.eval(q), scaled.eval(q), 1e-14));
            assert!(close(r.eval_conj(q), scaled.eval_conj(q), 1e-14));
            let inv = Reciprocal(&f);
            assert!(close(inv.eval(q), recip.eval(q), 1e-12));
            assert!(close(inv.eval_conj(q), recip.eval_conj(q), 1e-12));
            let sum = Sum(&f, &g);
            assert!(close(sum.eval_conj(q), f.add(&g).eval_conj(q), 1e-15));
        }
    }

    #[test]
    fn cayley_conjugate_of_identity_is_identity() {
        let id = cayley_conjugate(RegularSeries::identity());
        for q in sample_points() {
            assert!(close(id.eval(q), q, 1e-14));
            assert!(close(id.eval_conj(q), q, 1e-14));
        }
    }

    #[test]
    fn cayley_conjugate_maps_into_halfspace_and_fixes_one() {
        let f = RegularSeries::identity()
            .star(&RegularSeries::moebius(Quaternion::new(0.1, 0.3, -0.2, 0.1)).unwrap())
            .right_mul(Quaternion::new(0.0, 0.6, 0.0, 0.8));
        let g = cayley_conjugate(&f);
        assert!(close(g.eval(Quaternion::ONE), Quaternion::ONE, 1e-14));
        for q in sample_points() {
            assert!(g.eval(q).re() > 0.0);
        }
    }

    #[test]
    fn affine_and_closure_conjugates() {
        let a = Affine::new(Quaternion::new(1.0, 2.0, 0.0, 0.0), Quaternion::J);
        let m = FnMap::new(move |q: Quaternion| {
            q * Quaternion::new(1.0, 2.0, 0.0, 0.0) + Quaternion::J
        });
        for q in sample_points() {
            assert!(close(a.eval_conj(q), m.eval_conj(q), 1e-14));
            assert!(close(a.derivative_at(q), m.derivative_at(q), 1e-8));
        }
    }
}
