//! Ergodic optimization for beta-transformations.
//!
//! This crate makes the optimization theory of the maps T_β(x) = βx mod 1
//! executable: certified beta-expansions and beta-shifts, classification of
//! parameters, periodic-orbit enumeration with two-sided brackets on the
//! ergodic supremum, max-plus (Bousch-type) sub-actions with revealed
//! potentials, shadowing of periodic orbits across parameters, and the
//! joint-perturbation construction with all constants computed explicitly.
//!
//! The narrative guide lives in `book/`; its code blocks are compiled and run
//! as doctests of this crate.

pub mod error;
pub mod numkit;
pub mod dynamics;
pub mod betanum;
pub mod shift;
pub mod orbits;
pub mod subaction;
pub mod presets;
pub mod perturb;
pub mod cli;
mod book;

pub use error::Error;
pub use numkit::{Dyadic, Enclosure, EventuallyPeriodicWord, FiniteWord};
pub use dynamics::{BetaParam, MapTag};
