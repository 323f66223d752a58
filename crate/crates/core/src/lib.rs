//! Exact construction of orthogonal polynomial sequences from three-term
//! recurrences and chain sequences, with checks for the identities that tie
//! a sequence to its kernel, co-recursive and perturbed relatives.

pub mod chainseq;
pub mod error;
pub mod families;
pub mod jacobi;
pub mod perturbations;
pub mod poly;
pub mod recurrence;
pub mod scalar;
pub mod stream;
pub mod suites;
pub mod wire;

pub use error::{Error, Result};
pub use poly::Polynomial;
pub use recurrence::ThreeTermSystem;
pub use scalar::{Rational, Scalar};
