//! Integral cohomology of no-r-equal configuration spaces rConf(k, ℝⁿ) and
//! the connectivity estimates of the Taylor tower for r-immersions.
//!
//! The pipeline is: enumerate the r-equal partition lattice Π_{k,r}
//! ([`partition`]), build order complexes of its intervals ([`complex`]),
//! take exact integral homology ([`homology`], [`matrix`]), and assemble the
//! cohomology of the complement ([`arrangement`]). [`cube`] checks the
//! total-cokernel description of the configuration cube and
//! [`connectivity`] evaluates the closed-form connectivity numbers.
//!
//! ```
//! use arrtower::arrangement::gm_cohomology;
//!
//! let h = gm_cohomology(4, 3, 2).unwrap();
//! assert_eq!(h.to_string(), "3: ℤ^4, 4: ℤ^3");
//! ```

pub mod arrangement;
pub mod complex;
pub mod connectivity;
pub mod cube;
pub mod error;
pub mod homology;
pub mod limits;
pub mod matrix;
pub mod par;
pub mod partition;

pub use arrangement::{Engine, Verification};
pub use error::{Error, Result};
pub use homology::{FgGroup, GradedGroup};
pub use limits::Limits;
pub use par::Execution;
pub use partition::{Partition, RLattice};
