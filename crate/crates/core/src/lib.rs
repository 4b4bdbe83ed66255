//! Finite partial orders and their first-difference word representations.
//!
//! Elements are dense indices `0..n`. A representation assigns each element a
//! digit word; two words compare by the digits at the first rank where they
//! differ, inside that rank's small digit order.

pub mod build;
pub mod count;
pub mod error;
pub mod generate;
pub mod iso;
pub mod order;
pub mod recognize;
pub mod tqd;
pub mod word;

pub use error::{Error, Result};
pub use order::{FiniteOrder, LevelDecomposition, Rel};
