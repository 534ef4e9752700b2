//! Numerical verification of the boundary theory: inequality margins,
//! boundary-limit estimators, equality cases and rigidity detectors, each
//! summarized in a [`Report`].

mod ball;
mod estimate;
mod generators;
mod halfspace;
mod maps;
mod report;
mod suites;

pub use ball::{
    check_boundary_schwarz, check_hopf, check_julia, check_julia_caratheodory, check_lindelof,
    check_schwarz_pick_ball, lindelof_margins, LindelofMargins,
};
pub use estimate::{
    estimate_boundary_data, richardson, richardson_real, tail_min, BoundaryData, ESTIMATOR_TOL,
};
pub use generators::{
    blaschke_product, bounded_coefficient_map, fix_boundary_point, random_moebius,
};
pub use halfspace::{
    check_range_rigidity, check_rigidity, check_schwarz_pick_halfspace, estimate_c_halfspace,
    CEstimate, RigidityMode, RigidityOutcome,
};
pub use maps::{
    cayley_conjugate, Affine, CayleyConjugate, Conj, Constant, FnMap, PrecomposeCayley, Reciprocal,
    RightMul, Star, Sum,
};
pub use report::{CheckSummary, ConfigEcho, Report, ReportBuilder, Witness, LIMINF_POLICY};
pub use suites::{run_suite, SuiteInput, SUITES};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::DEFAULT_TRUNCATION;

/// Sampling and tolerance settings shared by every check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleConfig {
    pub seed: u64,
    /// Samples (points or point pairs) per function.
    pub count: usize,
    /// Number of generated functions in suites that draw random maps.
    pub functions: usize,
    pub truncation: usize,
    pub tol_eq: f64,
    /// Floor for inequalities that hold up to rounding; slightly negative.
    pub tol_strict: f64,
    pub k_radial: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: 0,
            count: 1000,
            functions: 100,
            truncation: DEFAULT_TRUNCATION,
            tol_eq: 1e-8,
            tol_strict: -1e-9,
            k_radial: crate::geometry::DEFAULT_RADIAL_STEPS,
        }
    }
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.count < 1 {
            return bad("count must be at least 1");
        }
        if self.functions < 1 {
            return bad("functions must be at least 1");
        }
        if self.truncation < 2 {
            return bad("truncation must be at least 2");
        }
        if !(self.tol_eq > 0.0) {
            return bad("tol_eq must be positive");
        }
        if !(self.tol_strict <= 0.0) {
            return bad("tol_strict must not be positive");
        }
        if !(8..=48).contains(&self.k_radial) {
            return bad("k_radial must lie in 8..=48");
        }
        Ok(())
    }
}
