//! Exact-arithmetic toolkit for multijoint configurations of planes over
//! prime fields: tableau construction, handicap search, and factorisation
//! certificates.

pub mod config;
pub mod error;
pub mod factorization;
pub mod field;
pub mod generator;
pub mod geometry;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod runner;
pub mod search;
pub mod tableau;

pub use error::{Error, Result};
pub use field::PrimeField;
pub use geometry::{AffinePlane, Configuration, GrassmannElement, Multijoints, Point, Witness};
pub use linalg::Rational;
pub use search::WeightFunction;
pub use tableau::{build_tableau, Handicap, Tableau};
