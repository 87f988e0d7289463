//! One-sided transposition shuffles on the symmetric group.
//!
//! A deck of n cards is shuffled by picking the right hand's position `r`
//! (uniformly, or proportionally to a weight w(r)), the left hand's position
//! `l` uniformly among `1..=r`, and transposing the two cards. This crate
//! provides exact distributions of the resulting random walk, its eigenvalues
//! indexed by standard Young tableaux, upper and lower mixing-time bounds, the
//! word-space lifting that produces explicit eigenvectors, and Monte Carlo
//! drivers for the coupon-collector lower bound.
//!
//! Exact arithmetic uses `num::BigRational`; float mode is available where the
//! state space (n! permutations) makes rationals impractical.

pub mod dist;
pub mod error;
pub mod harmonic;
pub mod lifting;
pub mod lowerbound;
pub mod perm;
pub mod scalar;
pub mod shuffle;
pub mod spectrum;
pub mod tableaux;

pub use error::{Error, Result};
pub use scalar::Scalar;
