//! Simulation of projective measurements on small Hilbert spaces under the
//! Lüders and von Neumann rules, with tools for running alternative
//! measurement routes of one observable and comparing the states they leave
//! behind.

pub mod error;
pub mod linalg;
pub mod measurement;
pub mod probe;
pub mod routes;
pub mod scenarios;

pub use error::{Error, Result, ValidationIssue};
pub use linalg::{ComplexMatrix, ComplexScalar, DensityMatrix};
pub use measurement::{EigenGroup, Observable, ProjectionRule};
pub use probe::{PointerRegister, TotalState};
pub use routes::{ComparisonReport, Route, Verdict};
pub use scenarios::{InitialState, Scenario};
