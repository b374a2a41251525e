//! A calculus for time-bound functions: exact and tower evaluation of bound
//! expressions, growth relations between them, regularity certificates,
//! dense bound universes and the order codec for cuts over those universes.

pub mod bound;
pub mod certify;
pub mod config;
pub mod error;
pub mod expr;
pub mod factor;
pub mod grid;
pub mod growth;
pub mod numeral;
pub mod order;
pub mod relations;
pub mod universe;
pub mod verdict;

pub use bound::{Bound, ExactFn, Iterated};
pub use config::Config;
pub use error::{EvalError, FactorError, OrderError, ParseError, UniverseError};
pub use expr::BoundExpr;
pub use numeral::{Arith, NumOrd, Numeral};
pub use verdict::{Mode, Outcome, Verdict, Witness};
