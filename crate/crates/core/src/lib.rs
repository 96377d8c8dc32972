//! Sprague-Grundy analysis of the subtraction game `S = {F_{2n+1} - 1} = {1, 4, 12, 33, ...}`.
//!
//! The game's Grundy function takes only the values 0, 1 and 2, follows the
//! golden-ratio Beatty sequences, and is not eventually periodic. This crate
//! computes it both ways (closed form and brute-force sieve) and checks that
//! they agree.
//!
//! * [`fibzeck`]: Fibonacci numbers and the Zeckendorf codec.
//! * [`beatty`]: Wythoff sequences via integer square roots, and the Fibonacci word.
//! * [`grundy`]: generic subtraction-game sieve, period scan, nim-value group.
//! * [`theorem`]: the closed-form classifier, its verifiers, and game sums.

pub mod beatty;
pub mod error;
pub mod fibzeck;
pub mod grundy;
pub mod theorem;

pub use error::{Error, Result};
pub use grundy::{grundy_sieve, GrundyTable, SubtractionSet};
pub use theorem::{classify, PositionClass, VerificationReport};
