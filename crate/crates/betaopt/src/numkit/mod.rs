//! Exact-leaning numeric substrate: dyadic numbers, outward-rounded
//! enclosures, digit words with exact lexicographic order, digit-series
//! evaluation, and certified root solving.

pub mod dyadic;
pub mod enclosure;
pub mod series;
pub mod word;

pub use dyadic::{Dir, Dyadic};
pub use enclosure::Enclosure;
pub use series::{h_eval, solve_h_equals_one};
pub use word::{lex_compare, Digit, EventuallyPeriodicWord, FiniteWord, Lex};

/// Default working precision in mantissa bits.
pub const DEFAULT_PREC: u32 = 128;

/// Default root-solving tolerance: enclosure width `2^-80`.
pub const DEFAULT_TOL_BITS: u32 = 80;
