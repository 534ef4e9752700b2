//! Seeded generators of self-maps of the unit ball.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::{derive_seed, draw_ball, draw_unit, sample_rng};
use crate::quaternion::Quaternion;
use crate::series::RegularSeries;

const BLASCHKE_STREAM: u64 = 0xB1A5;
const BOUNDED_STREAM: u64 = 0xB0DE;
const MOEBIUS_STREAM: u64 = 0x30EB;

/// Largest modulus of generated Moebius parameters. Keeps the geometric
/// coefficient decay fast enough that truncated series stay exact on the
/// closed ball.
pub const MAX_PARAMETER: f64 = 0.5;

fn draw_parameter(rng: &mut ChaCha8Rng) -> Quaternion {
    draw_ball(rng).expect("cube rejection succeeds") * MAX_PARAMETER
}

/// Moebius parameter `u` with `|u| <= 1/2` for function `index`.
pub fn random_moebius(seed: u64, index: usize) -> Quaternion {
    draw_parameter(&mut sample_rng(
        derive_seed(seed, MOEBIUS_STREAM),
        index as u64,
    ))
}

/// `q^m * M_{u_1} * ... * M_{u_k} c` with `m <= 2`, `1 <= k <= 3`,
/// `|u_i| <= 1/2` and a unimodular constant `c`.
pub fn blaschke_product(seed: u64, index: usize, truncation: usize) -> RegularSeries {
    let mut rng = sample_rng(derive_seed(seed, BLASCHKE_STREAM), index as u64);
    let m = rng.random_range(0..=2usize);
    let factors = rng.random_range(1..=3usize);
    let mut f = RegularSeries::power(m);
    for _ in 0..factors {
        let u = draw_parameter(&mut rng);
        let mf =
            RegularSeries::moebius_with_order(u, truncation).expect("parameter inside the ball");
        f = f.star(&mf);
    }
    f.right_mul(draw_unit(&mut rng))
}

/// Polynomial of degree at most 8 with `sum |a_n|` drawn from `[1/2, 1]`,
/// hence a self-map of the ball.
pub fn bounded_coefficient_map(seed: u64, index: usize) -> RegularSeries {
    let mut rng = sample_rng(derive_seed(seed, BOUNDED_STREAM), index as u64);
    let degree = rng.random_range(1..=8usize);
    let weights: Vec<f64> = (0..=degree).map(|_| rng.random_range(0.0..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mass = rng.random_range(0.5..=1.0);
    let coeffs = weights
        .iter()
        .map(|w| draw_unit(&mut rng) * (mass * w / total))
        .collect();
    RegularSeries::new(coeffs).expect("finite coefficients")
}

/// `f(q) f(xi)^{-1} xi`, which fixes the boundary point `xi` when
/// `|f(xi)| = 1`.
pub fn fix_boundary_point(f: &RegularSeries, xi: Quaternion) -> Result<RegularSeries> {
    let c = f.eval(xi).inverse()? * xi;
    Ok(f.right_mul(c / c.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample_ball;

    #[test]
    fn blaschke_products_are_self_maps() {
        let pts = sample_ball(3, 1000).unwrap();
        for i in 0..10 {
            let f = blaschke_product(1, i, 128);
            assert!(pts.iter().all(|q| f.eval(*q).norm() < 1.0), "map {i}");
            // boundary to boundary
            let xi = Quaternion::new(0.5, -0.5, 0.5, 0.5);
            assert!((f.eval(xi).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bounded_maps_have_unit_mass_at_most() {
        for i in 0..20 {
            let f = bounded_coefficient_map(5, i);
            assert!(f.l1_norm() <= 1.0 + 1e-15);
            assert!(f.l1_norm() >= 0.5 - 1e-15);
        }
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(blaschke_product(9, 4, 64), blaschke_product(9, 4, 64));
        assert_ne!(blaschke_product(9, 4, 64), blaschke_product(9, 5, 64));
        assert_eq!(random_moebius(2, 0), random_moebius(2, 0));
        assert!(random_moebius(2, 0).norm() <= MAX_PARAMETER);
    }

    #[test]
    fn fixing_a_boundary_point() {
        let f = blaschke_product(4, 2, 128);
        let xi = Quaternion::new(0.0, 0.6, 0.8, 0.0);
        let g = fix_boundary_point(&f, xi).unwrap();
        assert!((g.eval(xi) - xi).norm() < 1e-13);
    }
}
