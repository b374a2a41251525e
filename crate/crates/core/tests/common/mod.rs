//! Random instances from the factor grammar, shared by the property suites.
#![allow(dead_code)]

use boundcalc::BoundExpr;
use rand::rngs::StdRng;
use rand::Rng;

/// Unbounded factor lying between `log*` and `n`.
pub fn type1_factor(rng: &mut StdRng, depth: u32) -> BoundExpr {
    match rng.gen_range(0..if depth == 0 { 5 } else { 7 }) {
        0 => BoundExpr::LogStar,
        1 | 2 => BoundExpr::log_iter(rng.gen_range(1..=4)),
        3 => BoundExpr::pow(
            BoundExpr::log_iter(rng.gen_range(2..=4)),
            rng.gen_range(2..=3),
        ),
        4 => BoundExpr::Id,
        5 => BoundExpr::mid(type1_factor(rng, depth - 1), type1_factor(rng, depth - 1)),
        _ => BoundExpr::compose(BoundExpr::Log, type1_factor(rng, depth - 1)),
    }
}

/// Factor of either kind, possibly bounded.
pub fn factor(rng: &mut StdRng) -> BoundExpr {
    if rng.gen_bool(0.15) {
        BoundExpr::constant(rng.gen_range(2..=4))
    } else {
        type1_factor(rng, 2)
    }
}

/// Type 2 exponent: between 2 and `log`.
pub fn type2_exponent(rng: &mut StdRng) -> BoundExpr {
    match rng.gen_range(0..4) {
        0 => BoundExpr::constant(rng.gen_range(2..=4)),
        1 => BoundExpr::log_iter(rng.gen_range(1..=3)),
        2 => BoundExpr::LogStar,
        _ => BoundExpr::mid(
            BoundExpr::constant(2),
            BoundExpr::log_iter(rng.gen_range(1..=2)),
        ),
    }
}

/// A bound: Type 1, Type 2, polynomial, or occasionally something beyond the
/// normal-form fragment.
pub fn bound(rng: &mut StdRng) -> BoundExpr {
    match rng.gen_range(0..20) {
        0..=7 => BoundExpr::type1(type1_factor(rng, 1)),
        8..=12 => BoundExpr::type2(type2_exponent(rng)),
        13 | 14 => BoundExpr::mul(BoundExpr::constant(rng.gen_range(1..=3)), BoundExpr::Id),
        15 | 16 => BoundExpr::pow(BoundExpr::Id, rng.gen_range(2..=3)),
        17 => BoundExpr::add(BoundExpr::type1(type1_factor(rng, 0)), BoundExpr::Id),
        18 => BoundExpr::compose(BoundExpr::Exp2, BoundExpr::Log),
        _ => BoundExpr::compose(BoundExpr::Exp2, BoundExpr::type2(BoundExpr::Log)),
    }
}

/// A superlinear bound.
pub fn superlinear(rng: &mut StdRng) -> BoundExpr {
    match rng.gen_range(0..4) {
        0 | 1 => BoundExpr::type1(type1_factor(rng, 1)),
        2 => BoundExpr::type2(type2_exponent(rng)),
        _ => BoundExpr::pow(BoundExpr::Id, rng.gen_range(2..=3)),
    }
}
