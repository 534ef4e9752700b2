//! Boundary geometry of the unit ball and the right half-space: orispheres,
//! non-tangential regions, cones, the Cayley map and deterministic samplers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quaternion::{Quaternion, EPS_REAL};

/// Draws allowed per sample before a rejection sampler gives up.
pub const REJECTION_BUDGET: usize = 100_000;
/// Default number of dyadic radii in [`radial_path`].
pub const DEFAULT_RADIAL_STEPS: usize = 24;
/// Default radius range for samples in cones of the half-space.
pub const DEFAULT_CONE_RADII: (f64, f64) = (1.0, 1_048_576.0);

/// Ball `|p - q|^2 < k (1 - |q|^2)` tangent to the unit sphere at `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Orisphere {
    p: Quaternion,
    k: f64,
}

impl Orisphere {
    pub fn new(p: Quaternion, k: f64) -> Result<Self> {
        if (p.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidRegion(format!(
                "tangency point {p} is not unit"
            )));
        }
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidRegion(format!(
                "orisphere parameter k = {k} must be positive"
            )));
        }
        Ok(Orisphere { p, k })
    }

    pub fn p(&self) -> Quaternion {
        self.p
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn center(&self) -> Quaternion {
        self.p / (1.0 + self.k)
    }

    pub fn radius(&self) -> f64 {
        self.k / (1.0 + self.k)
    }

    /// `k (1 - |q|^2) - |p - q|^2`, positive inside.
    pub fn margin(&self, q: Quaternion) -> f64 {
        let one_minus = q.one_minus_norm() * (1.0 + q.norm());
        self.k * one_minus - (self.p - q).norm_sqr()
    }
}

/// Region `|q - 1| < k (1 - |q|)` approaching `1` non-tangentially.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NTRegion {
    k: f64,
}

impl NTRegion {
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 1.0 && k.is_finite()) {
            return Err(Error::InvalidRegion(format!(
                "region parameter k = {k} must exceed 1"
            )));
        }
        Ok(NTRegion { k })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `k (1 - |q|) - |q - 1|`, positive inside.
    pub fn margin(&self, q: Quaternion) -> f64 {
        self.k * q.one_minus_norm() - (q - 1.0).norm()
    }
}

/// Cone `Re q > gamma |q|` around the positive real axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cone {
    gamma: f64,
}

impl Cone {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::InvalidRegion(format!(
                "cone aperture gamma = {gamma} must lie in (0, 1)"
            )));
        }
        Ok(Cone { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `Re q - gamma |q|`, positive inside.
    pub fn margin(&self, q: Quaternion) -> f64 {
        q.re() - self.gamma * q.norm()
    }
}

pub fn orisphere_margin(s: &Orisphere, q: Quaternion) -> f64 {
    s.margin(q)
}

pub fn nt_margin(r: &NTRegion, q: Quaternion) -> f64 {
    r.margin(q)
}

pub fn cone_margin(c: &Cone, q: Quaternion) -> f64 {
    c.margin(q)
}

/// `(1 + q)^{-1} (1 - q)`: swaps the right half-space and the unit ball and
/// is its own inverse.
pub fn cayley(q: Quaternion) -> Result<Quaternion> {
    let den = Quaternion::ONE + q;
    if den.norm() <= EPS_REAL {
        return Err(Error::PoleAtMinusOne(q));
    }
    Ok(den.inverse()? * (Quaternion::ONE - q))
}

/// Radii `1 - 2^{-m}` for `m = 4, ..., k`.
pub fn radial_path(k: usize) -> Vec<f64> {
    (4..=k).map(|m| 1.0 - 0.5f64.powi(m as i32)).collect()
}

/// SplitMix64 step, used to derive independent sub-seeds.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Sub-seed for the stream labelled `label` under `seed`.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    splitmix64(seed ^ splitmix64(label))
}

/// Generator for sample `index`; independent of how samples are scheduled.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn fill<F>(seed: u64, n: usize, draw: F) -> Result<Vec<Quaternion>>
where
    F: Fn(&mut ChaCha8Rng, usize) -> Result<Quaternion> + Sync,
{
    if n == 0 {
        return Err(Error::InvalidConfig(
            "sample count must be at least 1".into(),
        ));
    }
    (0..n)
        .into_par_iter()
        .map(|i| draw(&mut sample_rng(seed, i as u64), i))
        .collect()
}

/// Uniform point of the open unit ball, by rejection from the cube.
pub fn draw_ball(rng: &mut ChaCha8Rng) -> Result<Quaternion> {
    for _ in 0..REJECTION_BUDGET {
        let q = Quaternion::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if q.norm_sqr() < 1.0 {
            return Ok(q);
        }
    }
    Err(Error::RejectionBudgetExceeded(REJECTION_BUDGET))
}

/// Uniform unit quaternion.
pub fn draw_unit(rng: &mut ChaCha8Rng) -> Quaternion {
    loop {
        let q = Quaternion::new(
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        );
        let n = q.norm();
        if n > 1e-8 {
            return q / n;
        }
    }
}

/// Uniform unit imaginary quaternion.
pub fn draw_unit_imaginary(rng: &mut ChaCha8Rng) -> Quaternion {
    loop {
        let q = Quaternion::new(
            0.0,
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        );
        let n = q.norm();
        if n > 1e-8 {
            return q / n;
        }
    }
}

pub fn sample_ball(seed: u64, n: usize) -> Result<Vec<Quaternion>> {
    fill(seed, n, |rng, _| draw_ball(rng))
}

/// Uniform points of the orisphere ball, each with strictly positive margin.
pub fn sample_orisphere(s: &Orisphere, seed: u64, n: usize) -> Result<Vec<Quaternion>> {
    let (c, r) = (s.center(), s.radius());
    fill(seed, n, |rng, _| {
        for _ in 0..REJECTION_BUDGET {
            let q = c + draw_ball(rng)? * r;
            if s.margin(q) > 0.0 {
                return Ok(q);
            }
        }
        Err(Error::RejectionBudgetExceeded(REJECTION_BUDGET))
    })
}

/// Uniform points of the ball inside the non-tangential region.
pub fn sample_nt_region(region: &NTRegion, seed: u64, n: usize) -> Result<Vec<Quaternion>> {
    fill(seed, n, |rng, _| {
        for _ in 0..REJECTION_BUDGET {
            let q = draw_ball(rng)?;
            if region.margin(q) > 0.0 {
                return Ok(q);
            }
        }
        Err(Error::RejectionBudgetExceeded(REJECTION_BUDGET))
    })
}

/// `i`-th of `n` log-spaced radii in `[lo, hi]`.
fn log_radius(i: usize, n: usize, (lo, hi): (f64, f64)) -> f64 {
    if n <= 1 {
        return lo;
    }
    let t = i as f64 / (n - 1) as f64;
    (lo.ln() + t * (hi.ln() - lo.ln())).exp()
}

/// Points of the cone with uniformly distributed directions (by rejection)
/// and log-spaced radii across `radii`.
pub fn sample_cone(c: &Cone, seed: u64, n: usize, radii: (f64, f64)) -> Result<Vec<Quaternion>> {
    if !(radii.0 > 0.0 && radii.1 >= radii.0) {
        return Err(Error::InvalidConfig(format!("bad radius range {radii:?}")));
    }
    fill(seed, n, |rng, i| {
        let r = log_radius(i, n, radii);
        for _ in 0..REJECTION_BUDGET {
            let q = draw_unit(rng) * r;
            if c.margin(q) > 0.0 {
                return Ok(q);
            }
        }
        Err(Error::RejectionBudgetExceeded(REJECTION_BUDGET))
    })
}

/// Points of the open right half-space with uniform directions and
/// log-spaced radii.
pub fn sample_halfspace(seed: u64, n: usize, radii: (f64, f64)) -> Result<Vec<Quaternion>> {
    if !(radii.0 > 0.0 && radii.1 >= radii.0) {
        return Err(Error::InvalidConfig(format!("bad radius range {radii:?}")));
    }
    fill(seed, n, |rng, i| {
        let r = log_radius(i, n, radii);
        for _ in 0..REJECTION_BUDGET {
            let u = draw_unit(rng);
            if u.re() > 0.0 {
                return Ok(u * r);
            }
            if u.re() < 0.0 {
                return Ok(Quaternion::new(-u.x0, u.x1, u.x2, u.x3) * r);
            }
        }
        Err(Error::RejectionBudgetExceeded(REJECTION_BUDGET))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn orisphere_margins() {
        let p = Quaternion::new(0.0, 0.6, 0.0, 0.8);
        for k in [0.5, 1.0, 2.0] {
            let s = Orisphere::new(p, k).unwrap();
            assert!((s.margin(Quaternion::ZERO) - (k - 1.0)).abs() < 1e-15);
            // |p - c|^2 = (k/(1+k))^2 and 1 - |c|^2 = k(k+2)/(1+k)^2
            let expected = k * k / (1.0 + k);
            assert!((s.margin(s.center()) - expected).abs() < 1e-14);
            assert!(s.margin(p).abs() < 1e-15);
        }
        assert!(Orisphere::new(Quaternion::ONE * 2.0, 1.0).is_err());
        assert!(Orisphere::new(Quaternion::ONE, 0.0).is_err());
    }

    #[test]
    fn nt_and_cone_margins() {
        let region = NTRegion::new(3.0).unwrap();
        for r in [0.1, 0.5, 0.99] {
            let m = region.margin(Quaternion::real(r));
            assert!((m - 2.0 * (1.0 - r)).abs() < 1e-15);
        }
        assert!(NTRegion::new(1.0).is_err());
        let cone = Cone::new(0.25).unwrap();
        assert!((cone.margin(Quaternion::real(4.0)) - 3.0).abs() < 1e-15);
        assert_eq!(cone.margin(Quaternion::I), -0.25);
        assert!(Cone::new(1.0).is_err());
        assert!(Cone::new(0.0).is_err());
    }

    #[test]
    fn cayley_values() {
        assert_eq!(cayley(Quaternion::ONE).unwrap(), Quaternion::ZERO);
        assert_eq!(cayley(Quaternion::ZERO).unwrap(), Quaternion::ONE);
        let q = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        let back = cayley(cayley(q).unwrap()).unwrap();
        assert!((back - q).norm() < 1e-15);
        assert!(matches!(
            cayley(-Quaternion::ONE),
            Err(Error::PoleAtMinusOne(_))
        ));
        // stays on the slice through q
        let s = cayley(Quaternion::new(0.3, 0.0, 0.4, 0.0)).unwrap();
        assert_eq!((s.x1, s.x3), (0.0, 0.0));
    }

    #[test]
    fn radial_path_values() {
        assert_eq!(radial_path(6), vec![0.9375, 0.96875, 0.984375]);
        assert_eq!(radial_path(DEFAULT_RADIAL_STEPS).len(), 21);
        assert!(radial_path(3).is_empty());
    }

    #[test]
    fn samplers_respect_regions() {
        let pts = sample_ball(7, 100).unwrap();
        assert_eq!(pts.len(), 100);
        assert!(pts.iter().all(|q| q.norm() < 1.0));

        let s = Orisphere::new(Quaternion::ONE, 2.0).unwrap();
        assert!(sample_orisphere(&s, 1, 50)
            .unwrap()
            .iter()
            .all(|q| s.margin(*q) > 0.0));

        let region = NTRegion::new(2.0).unwrap();
        assert!(sample_nt_region(&region, 3, 50)
            .unwrap()
            .iter()
            .all(|q| region.margin(*q) > 0.0));

        let cone = Cone::new(0.5).unwrap();
        let pts = sample_cone(&cone, 5, 40, DEFAULT_CONE_RADII).unwrap();
        assert!(pts.iter().all(|q| cone.margin(*q) > 0.0));
        assert!((pts[0].norm() - 1.0).abs() < 1e-12);
        assert!((pts[39].norm() - DEFAULT_CONE_RADII.1).abs() < 1e-6);

        assert!(sample_halfspace(9, 30, (0.5, 8.0))
            .unwrap()
            .iter()
            .all(|q| q.re() > 0.0));
        assert!(matches!(sample_ball(1, 0), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn narrow_cone_exhausts_budget() {
        let cone = Cone::new(1.0 - 1e-12).unwrap();
        assert!(matches!(
            sample_cone(&cone, 1, 1, (1.0, 1.0)),
            Err(Error::RejectionBudgetExceeded(_))
        ));
    }

    #[test]
    fn samplers_are_schedule_independent() {
        let a = sample_ball(11, 500).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| sample_ball(11, 500).unwrap());
        assert_eq!(a, b);
        // a prefix of a longer run is the shorter run
        assert_eq!(&sample_ball(11, 600).unwrap()[..500], &a[..]);
        assert_ne!(sample_ball(12, 500).unwrap(), a);
    }

    #[test]
    fn orisphere_is_euclidean_ball() {
        let s = Orisphere::new(Quaternion::new(0.5, 0.5, 0.5, 0.5), 0.7).unwrap();
        let pts = sample_ball(21, 10_000).unwrap();
        for q in pts {
            let inside = (q - s.center()).norm() < s.radius();
            let m = s.margin(q);
            if m.abs() > 1e-12 {
                assert_eq!(inside, m > 0.0, "q = {q}");
            }
        }
    }

    fn quat(r: f64) -> impl Strategy<Value = Quaternion> {
        (-r..r, -r..r, -r..r, -r..r).prop_map(|(a, b, c, d)| Quaternion::new(a, b, c, d))
    }

    proptest! {
        #[test]
        fn cayley_swaps_halfspace_and_ball(q in quat(5.0)) {
            prop_assume!((q + 1.0).norm() > 1e-3);
            let p = cayley(q).unwrap();
            if q.re().abs() > 1e-9 {
                prop_assert_eq!(p.norm() < 1.0, q.re() > 0.0);
            }
            let back = cayley(p).unwrap();
            prop_assert!((back - q).norm() <= 1e-12 * (1.0 + q.norm()).powi(2));
        }
    }
}
