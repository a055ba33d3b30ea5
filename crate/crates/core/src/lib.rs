//! Serre weight sets for mod-`ell` local Galois data over unramified
//! extensions of `Q_ell`.
//!
//! The crate computes the labeled weight sets `W'` attached to niveau-2 and
//! niveau-1 inertial data, their projections `W_p`, products over several
//! primes, the weight table over `Q`, and the mod-`ell` local factor on the
//! quaternionic side. [`verify`] re-checks the closed-form counting and
//! injectivity statements against exhaustive enumeration.

pub mod cli;
pub mod error;
pub mod global_weights;
pub mod local_factors;
pub mod modarith;
pub mod q_table;
pub mod recipe_irred;
pub mod recipe_red;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use modarith::{FieldParams, Residue, SubsetB};
pub use weights::{SerreWeight, WeightSet};
