//! Fidelity measures, derived metrics and bounds for finite-dimensional
//! quantum states.

pub mod bench;
pub mod bloch;
pub mod bounds;
pub mod error;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod metrics;
pub mod optimize;
pub mod rng;
pub mod states;
pub mod suites;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use measures::{evaluate, MeasureId, MeasureValue};
pub use states::DensityMatrix;
