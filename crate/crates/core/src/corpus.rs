//! The two worked examples on the slice through `i` and `j`: a Moebius map
//! with a non-real boundary point where the Lie bracket correction is
//! nonzero, and a fixed-point map derived from it.

use crate::boundary::{boundary_schwarz_quantity, fixed_point_quantity, hopf_bound, spherical_jet};
use crate::error::Result;
use crate::quaternion::{lie_bracket, Quaternion};
use crate::series::RegularSeries;

/// Agreement required between computed and closed-form example values.
pub const EXAMPLE_TOL: f64 = 1e-10;

const I: Quaternion = Quaternion::I;
const J: Quaternion = Quaternion::J;
const K: Quaternion = Quaternion::K;

/// `f(q) = (1 + q i/2)^{-*} * (q - i/2)`, built by reciprocal and product at
/// the given truncation.
pub fn example_one(truncation: usize) -> Result<RegularSeries> {
    let den = RegularSeries::new(vec![Quaternion::ONE, I * 0.5])?;
    let num = RegularSeries::linear(I * 0.5);
    let f = den
        .reciprocal_to(truncation)?
        .star(&num)
        .truncate_to(truncation);
    Ok(f)
}

/// `g(q) = -q f(q) j`, which fixes `j` and `0`.
pub fn example_two(truncation: usize) -> Result<RegularSeries> {
    Ok(example_one(truncation)?
        .shift(1)
        .right_mul(-J)
        .truncate_to(truncation))
}

/// A computed example value next to its closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct ExampleRow {
    pub label: &'static str,
    pub computed: Quaternion,
    pub expected: Quaternion,
    /// Closed form as printed in tables.
    pub expected_text: &'static str,
}

impl ExampleRow {
    pub fn deviation(&self) -> f64 {
        (self.computed - self.expected).norm()
    }

    pub fn pass(&self) -> bool {
        self.deviation() <= EXAMPLE_TOL
    }
}

fn row(
    label: &'static str,
    computed: Quaternion,
    expected: Quaternion,
    expected_text: &'static str,
) -> ExampleRow {
    ExampleRow {
        label,
        computed,
        expected,
        expected_text,
    }
}

/// Every value reproduced by the `examples` command and the example suite.
pub fn example_rows(truncation: usize) -> Result<Vec<ExampleRow>> {
    let f = example_one(truncation)?;
    let fj = f.eval(J);
    let jet = spherical_jet(&f, J, 2)?;
    let bracket = lie_bracket(J.conj(), fj * jet.a[2].conj());

    let g = example_two(truncation)?;
    let gjet = spherical_jet(&g, J, 2)?;

    Ok(vec![
        row("f(j)", fj, J, "j"),
        row(
            "f'(j)",
            f.eval_derivative(J),
            Quaternion::real(5.0 / 3.0) + K * (4.0 / 3.0),
            "5/3 + 4/3 k",
        ),
        row("A1 of f at j", jet.a[1], Quaternion::ONE, "1"),
        row(
            "A2 of f at j",
            jet.a[2],
            -(I * 2.0 + J) / 3.0,
            "-(2i + j)/3",
        ),
        row("bracket", bracket, I * (4.0 / 3.0), "4/3 i"),
        row(
            "boundary Schwarz quantity",
            Quaternion::real(boundary_schwarz_quantity(&f, J)?),
            Quaternion::real(5.0 / 3.0),
            "5/3",
        ),
        row(
            "Hopf-type bound",
            Quaternion::real(hopf_bound(&f, 0)?),
            Quaternion::real(1.0 / 3.0),
            "1/3",
        ),
        row("g(j)", g.eval(J), J, "j"),
        row(
            "g'(j)",
            g.eval_derivative(J),
            Quaternion::real(8.0 / 3.0) - K * (4.0 / 3.0),
            "8/3 - 4/3 k",
        ),
        row(
            "bracket [j, A2 of g]",
            lie_bracket(J, gjet.a[2]),
            K * (-4.0 / 3.0),
            "-4/3 k",
        ),
        row(
            "fixed-point quantity",
            Quaternion::real(fixed_point_quantity(&g, J)?),
            Quaternion::real(8.0 / 3.0),
            "8/3",
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::DEFAULT_TRUNCATION;

    #[test]
    fn example_one_is_the_moebius_map() {
        let f = example_one(DEFAULT_TRUNCATION).unwrap();
        let m = RegularSeries::moebius(I * 0.5).unwrap();
        assert_eq!(f.order(), DEFAULT_TRUNCATION);
        for (a, b) in f.coeffs().iter().zip(m.coeffs()) {
            assert!((*a - *b).norm() < 1e-15);
        }
    }

    #[test]
    fn all_rows_reproduce() {
        for r in example_rows(DEFAULT_TRUNCATION).unwrap() {
            assert!(r.pass(), "{}: {} vs {}", r.label, r.computed, r.expected);
        }
    }
}
