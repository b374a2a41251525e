//! Power domination between factors: `≤pow` and `≪pow`.

use std::cmp::Ordering;

use super::ae::cmp_ae;
use super::sample::Env;
use crate::expr::BoundExpr;
use crate::growth::factor_index;
use crate::verdict::{Mode, Outcome, Verdict, Witness};

fn power(a: &BoundExpr, k: u32) -> BoundExpr {
    if k == 1 {
        a.clone()
    } else {
        BoundExpr::pow(a.clone(), k)
    }
}

fn symbolic(a1: &BoundExpr, a2: &BoundExpr) -> Option<(Ordering, String, String)> {
    let i1 = factor_index(a1)?;
    let i2 = factor_index(a2)?;
    Some((i1.cmp_growth(&i2), i1.to_string(), i2.to_string()))
}

/// Witness for a refuted `a1^k ≤ae a2`: the numeric one if the grid shows it.
fn refutation(a1: &BoundExpr, a2: &BoundExpr, k: u32, env: &Env) -> Witness {
    let v = cmp_ae(&power(a1, k), a2, env);
    if v.fails() {
        v.witness
    } else {
        Witness::Exponent { k }
    }
}

/// `a1 ≪pow a2`: `a1^k ≤ae a2` for every `k`.
pub fn ll_pow(a1: &BoundExpr, a2: &BoundExpr, env: &Env) -> Verdict {
    let make = |o, w, m| Verdict::new("ll_pow", a1.render(), a2.render(), o, w, m);
    if let Some((ord, l, r)) = symbolic(a1, a2) {
        return match ord {
            Ordering::Less => make(
                Outcome::Holds,
                Witness::Symbolic { lhs: l, rhs: r },
                Mode::SymbolicDefinite,
            ),
            Ordering::Equal => make(
                Outcome::Fails,
                refutation(a1, a2, 2, env),
                Mode::SymbolicDefinite,
            ),
            Ordering::Greater => make(
                Outcome::Fails,
                refutation(a1, a2, 1, env),
                Mode::SymbolicDefinite,
            ),
        };
    }
    let mut last = None;
    for k in 1..=env.cfg.power_cap {
        let v = cmp_ae(&power(a1, k), a2, env);
        match v.outcome {
            Outcome::Holds => last = Some(v.witness),
            Outcome::Fails => return make(Outcome::Fails, v.witness, Mode::Numeric),
            Outcome::Unknown => return make(Outcome::Unknown, v.witness, Mode::Numeric),
        }
    }
    make(Outcome::Holds, last.unwrap_or(Witness::None), Mode::Numeric)
}

/// `a1 ≤pow a2`: every power of `a1` is ae-below some power of `a2`.
pub fn le_pow(a1: &BoundExpr, a2: &BoundExpr, env: &Env) -> Verdict {
    let make = |o, w, m| Verdict::new("le_pow", a1.render(), a2.render(), o, w, m);
    if let Some((ord, l, r)) = symbolic(a1, a2) {
        return if ord == Ordering::Greater {
            make(
                Outcome::Fails,
                Witness::Exponent { k: 1 },
                Mode::SymbolicDefinite,
            )
        } else {
            make(
                Outcome::Holds,
                Witness::Symbolic { lhs: l, rhs: r },
                Mode::SymbolicDefinite,
            )
        };
    }
    let cap = env.cfg.power_cap;
    let mut pairs = Vec::new();
    for k in 1..=cap {
        let lhs = power(a1, k);
        let mut unknown = false;
        let found = (1..=4 * cap).find(|&l| {
            let v = cmp_ae(&lhs, &power(a2, l), env);
            unknown |= v.unknown();
            v.holds()
        });
        match found {
            Some(l) => pairs.push((k.to_string(), l.to_string())),
            None if unknown => {
                return make(
                    Outcome::Unknown,
                    Witness::Horizon {
                        point: format!("k = {k}"),
                        reason: format!("no power up to {} decided", 4 * cap),
                    },
                    Mode::Numeric,
                )
            }
            None => return make(Outcome::Fails, Witness::Exponent { k }, Mode::Numeric),
        }
    }
    make(Outcome::Holds, Witness::Constants { pairs }, Mode::Numeric)
}
