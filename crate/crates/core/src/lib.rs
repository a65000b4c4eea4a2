//! Words, morphisms and conjugacy classes of morphic words.
//!
//! The crate is `no_std` and only needs `alloc`. It provides exact factor
//! sets of pure morphic words and their images, a de-substitution decider
//! for factor membership at any length, conjugacy-class completeness with
//! replayable avoidance certificates, and the checks that establish that
//! `w5 = G(F^ω(0))` over five letters contains no complete conjugacy class
//! of length at least two.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod conjugacy;
pub mod error;
pub mod factors;
pub mod marker;
pub mod morphism;
pub mod oracle;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use factors::{closure_factor_set, coded_factor_set, FactorSet};
pub use marker::{verify_marker, Level, MarkerCheck, MarkerSpec};
pub use morphism::{FixedPointStream, Morphism};
pub use oracle::{MembershipVerdict, MorphicOracle, OracleConfig};
pub use word::{Alphabet, Letter, Word};
