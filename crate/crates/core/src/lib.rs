//! Semi-invariants of quiver representations and their stretching
//! behavior.
//!
//! The crate computes `dim SI(Q, alpha)_sigma` for acyclic quivers in two
//! independent ways (a Cauchy/Littlewood-Richardson count and a randomized
//! evaluation oracle), tabulates `n -> dim SI(Q, alpha)_{n sigma_beta}`, and
//! checks the saturation, Fulton and KTT predictions on those tables. Tuples
//! of partitions translate to weights on flag quivers, which relates the same
//! numbers to `SL_r` tensor invariants.
//!
//! ```
//! use std::sync::Arc;
//! use quiver_si::quiver::{DimensionVector, Quiver};
//! use quiver_si::si::stretch_function;
//!
//! let kronecker = Arc::new(Quiver::from_edges(2, &[(0, 1), (0, 1)]).unwrap());
//! let one = DimensionVector::new(&kronecker, vec![1, 1]).unwrap();
//! let table = stretch_function(&kronecker, &one, &one, 4, None).unwrap();
//! assert_eq!(table.values, vec![2, 3, 4, 5]);
//! ```

pub mod error;
pub mod flag;
pub mod generic;
pub mod lab;
pub mod linalg;
pub mod lr;
pub mod partition;
pub mod quiver;
pub mod rep;
pub mod rng;
pub mod si;
pub mod suite;

pub use error::{Error, Result};
pub use partition::Partition;
pub use quiver::{DimensionVector, Quiver, QuiverSpec, Weight};
