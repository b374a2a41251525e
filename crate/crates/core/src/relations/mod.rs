//! Growth relations between bounds and factors.
//!
//! Every query returns a [`Verdict`](crate::verdict::Verdict). Symbolic
//! answers come from the normal forms in [`crate::growth`]; everything else
//! is read off the sample grid.

mod ae;
mod iteration;
mod power;
mod sample;
mod tame;

pub use ae::{cmp_ae, cmp_growth, is_subhomogeneous, is_superlinear, GrowthClass, GrowthVerdict};
pub use iteration::{dedupe_it, eq_it, it_embed, le_it, lt_it};
pub use power::{le_pow, ll_pow};
pub use sample::Env;
pub use tame::{is_tame, tame_reports, Limit, TameReport};
