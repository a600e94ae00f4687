//! Covariant quantum cloning for N-level systems.
//!
//! The crate builds Bell-state families and Cerf cloning states, derives the
//! amplitude patterns that make a cloner covariant in two bases, optimizes
//! the fidelity trade-off between the two clones, and evaluates the
//! resulting key-distribution security figures.
//!
//! ```
//! use cloneforge::{covariance::{BasisPair, Reduction}, optimize::Problem, Rule};
//!
//! let pattern = BasisPair::CompFourier.pattern(Rule::Fourier)?.reduce(Reduction::Border)?;
//! let best = Problem::new(pattern, Rule::Fourier, true)?.symmetric_optimum()?;
//! assert!((best.report.F_A - 0.75).abs() < 1e-6);
//! # Ok::<(), cloneforge::Error>(())
//! ```

#![allow(clippy::needless_range_loop)]

pub mod bases;
pub mod bell;
pub mod cloner;
pub mod covariance;
pub mod error;
pub mod optimize;
pub mod qlinalg;
pub mod qubit_theorem;
pub mod report;
pub mod verify;

pub use bases::{IndexGroup, OrthonormalBasis};
pub use bell::{BellFamily, Rule};
pub use cloner::{AmplitudeMatrix, CloneReport, CloningState};
pub use covariance::{AmplitudePattern, BasisPair, Reduction};
pub use error::{Error, Result};
pub use optimize::{OptimalCloner, Problem, TradeoffCurve};
pub use qlinalg::{Ket, Op};
