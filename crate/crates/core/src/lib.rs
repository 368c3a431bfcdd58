//! Exact analysis of k-positional strategies for the game of best choice
//! when interview orders are restricted to 321-avoiding or 231-avoiding
//! permutations.
//!
//! The crate is organised bottom-up:
//!
//! - [`perm`]: permutations, size-3 pattern containment, left-to-right maxima
//!   and the semantics of playing a k-positional strategy.
//! - [`dyck`]: Dyck paths, northeast corners and the bijection with the
//!   left-to-right maxima of 321-avoiding permutations.
//! - [`count`]: exact Catalan arithmetic, symbolic Catalan combinations,
//!   closed forms and ratio-mode evaluation for very large `N`.
//! - [`strategy`]: the two filtered game models, optimal strategies and
//!   their limits.
//! - [`oracle`]: exhaustive enumeration used as ground truth at small `N`.
//! - [`sampler`]: uniform samplers and Monte Carlo win-rate estimates.

pub mod count;
pub mod dyck;
mod error;
pub mod oracle;
pub mod perm;
pub mod sampler;
pub mod strategy;

pub use error::{Error, Result};

pub use count::{BigCount, CatalanCombo, ExactProb, WinTable};
pub use dyck::{Corner, CornerSet, DyckPath, Step};
pub use perm::{LrMaxima, Pattern, Permutation, StrategyOutcome};
pub use sampler::{RngStream, WinEstimate};
pub use strategy::{ModelId, OptimalStrategy};
