//! Slice regular functions of a quaternionic variable: power series with the
//! regular product, spherical expansions at boundary points, and numerical
//! verification of boundary Schwarz, Julia and Lindelöf type inequalities.

pub mod boundary;
pub mod corpus;
pub mod error;
pub mod geometry;
pub mod quaternion;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use quaternion::{lie_bracket, Quaternion, UnitImaginary};
pub use series::{RegularSeries, SliceFunction};
