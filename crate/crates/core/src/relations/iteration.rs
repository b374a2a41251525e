//! Comparison under iteration: `≤it`, it-embedding and deduplication.

use super::ae::cmp_ae;
use super::power::le_pow;
use super::sample::{table, Env};
use crate::expr::BoundExpr;
use crate::growth::{form_of, Base};
use crate::verdict::{Mode, Outcome, Verdict, Witness};
use num_traits::Signed;

enum Shape<'a> {
    Type1(&'a BoundExpr),
    Type2(&'a BoundExpr),
    Generic,
}

/// Iterates of a Type 1/2 bound are it-equivalent to the bound itself.
fn shape(b: &BoundExpr) -> Shape<'_> {
    match b {
        BoundExpr::Type1(a) => Shape::Type1(a),
        BoundExpr::Type2(a) => Shape::Type2(a),
        BoundExpr::Iterate(inner, _) => match shape(inner) {
            Shape::Generic => Shape::Generic,
            s => s,
        },
        _ => Shape::Generic,
    }
}

fn both(v1: Verdict, v2: Verdict) -> (Outcome, Mode, Witness) {
    let mode = if v1.is_symbolic() && v2.is_symbolic() {
        Mode::SymbolicDefinite
    } else {
        Mode::Numeric
    };
    if v1.fails() {
        (Outcome::Fails, v1.mode, v1.witness)
    } else if v2.fails() {
        (Outcome::Fails, v2.mode, v2.witness)
    } else if v1.holds() && v2.holds() {
        (
            Outcome::Holds,
            mode,
            Witness::Rule {
                name: "type2-below-type1-extremes".into(),
            },
        )
    } else {
        (Outcome::Unknown, Mode::Numeric, Witness::None)
    }
}

/// `b1 ≤it b2`: every iterate of `b1` is ae-below some iterate of `b2`.
pub fn le_it(b1: &BoundExpr, b2: &BoundExpr, env: &Env) -> Verdict {
    let (l, r) = (b1.render(), b2.render());
    let make = |o, w, m| Verdict::new("le_it", l.clone(), r.clone(), o, w, m);
    match (shape(b1), shape(b2)) {
        (Shape::Type1(a1), Shape::Type1(a2)) | (Shape::Type2(a1), Shape::Type2(a2)) => {
            le_pow(a1, a2, env).relabel("le_it", &l, &r)
        }
        (Shape::Type1(_), Shape::Type2(_)) => make(
            Outcome::Holds,
            Witness::Rule {
                name: "type1-below-n-squared-below-type2".into(),
            },
            Mode::SymbolicDefinite,
        ),
        (Shape::Type2(a), Shape::Type1(b)) => {
            let two = BoundExpr::constant(2);
            let (o, m, w) = both(le_pow(a, &two, env), le_pow(&BoundExpr::Id, b, env));
            make(o, w, m)
        }
        (Shape::Generic, Shape::Type1(_) | Shape::Type2(_)) if exponential(b1) => make(
            Outcome::Fails,
            Witness::Rule {
                name: QUASIPOLY_RULE.into(),
            },
            Mode::SymbolicDefinite,
        ),
        (Shape::Type1(_) | Shape::Type2(_), Shape::Generic) if exponential(b2) => make(
            Outcome::Holds,
            Witness::Rule {
                name: QUASIPOLY_RULE.into(),
            },
            Mode::SymbolicDefinite,
        ),
        _ => generic(b1, b2, env).relabel("le_it", &l, &r),
    }
}

const QUASIPOLY_RULE: &str = "type-iterates-stay-quasipolynomial";

/// `log b` grows like a positive power of `n`, which no iterate of a Type 1 or
/// Type 2 bound reaches: those stay below `n^((log n)^l)` for a fixed `l`.
fn exponential(b: &BoundExpr) -> bool {
    form_of(b).is_some_and(|f| f.log_index().exponent(Base::N).is_positive())
}

fn iterate(b: &BoundExpr, m: u32) -> BoundExpr {
    if m == 1 {
        b.clone()
    } else {
        BoundExpr::iterate(b.clone(), m)
    }
}

/// `β⟨2⟩` and `β` agree wherever both are sampled.
fn is_fixpoint(b: &BoundExpr, env: &Env) -> bool {
    let once = table(b, env);
    let twice = table(&iterate(b, 2), env);
    once.iter().zip(&twice).all(|(x, y)| match (x, y) {
        (Some(x), Some(y)) => x.le(y) == Some(true) && y.le(x) == Some(true),
        _ => true,
    })
}

fn generic(b1: &BoundExpr, b2: &BoundExpr, env: &Env) -> Verdict {
    let make = |o, w, m| Verdict::new("le_it", b1.render(), b2.render(), o, w, m);
    let cap = env.cfg.it_depth_cap.max(1);
    let mut pairs = Vec::new();
    let mut symbolic = true;
    for m in 1..=3u32 {
        let lhs = iterate(b1, m);
        let mut last = None;
        let found = (1..=cap).find(|&mm| {
            let v = cmp_ae(&lhs, &iterate(b2, mm), env);
            let ok = v.holds();
            if ok {
                symbolic &= v.is_symbolic();
            }
            last = Some(v);
            ok
        });
        match found {
            Some(mm) => pairs.push((m.to_string(), mm.to_string())),
            None => {
                let last = last.expect("depth cap is positive");
                if last.fails() && is_fixpoint(b2, env) {
                    return make(Outcome::Fails, last.witness, Mode::Numeric);
                }
                return make(
                    Outcome::Unknown,
                    Witness::Horizon {
                        point: format!("iterate {m}"),
                        reason: format!("no iterate up to {cap} of the right side dominates"),
                    },
                    Mode::Numeric,
                );
            }
        }
    }
    let mode = if symbolic {
        Mode::SymbolicDefinite
    } else {
        Mode::Numeric
    };
    make(Outcome::Holds, Witness::Mapping { pairs }, mode)
}

/// `b1 <it b2`: `b1 ≤it b2` holds and `b2 ≤it b1` fails.
pub fn lt_it(b1: &BoundExpr, b2: &BoundExpr, env: &Env) -> Verdict {
    let fwd = le_it(b1, b2, env);
    let (l, r) = (b1.render(), b2.render());
    if !fwd.holds() {
        return fwd.relabel("lt_it", &l, &r);
    }
    let back = le_it(b2, b1, env);
    let mode = if fwd.is_symbolic() && back.is_symbolic() {
        Mode::SymbolicDefinite
    } else {
        Mode::Numeric
    };
    let outcome = match back.outcome {
        Outcome::Fails => Outcome::Holds,
        Outcome::Holds => Outcome::Fails,
        Outcome::Unknown => Outcome::Unknown,
    };
    Verdict::new("lt_it", l, r, outcome, back.witness, mode)
}

/// Mutual `≤it`.
pub fn eq_it(b1: &BoundExpr, b2: &BoundExpr, env: &Env) -> Outcome {
    let a = le_it(b1, b2, env).outcome;
    if a == Outcome::Fails {
        return Outcome::Fails;
    }
    match (a, le_it(b2, b1, env).outcome) {
        (_, Outcome::Fails) => Outcome::Fails,
        (Outcome::Holds, Outcome::Holds) => Outcome::Holds,
        _ => Outcome::Unknown,
    }
}

/// Maps every element of `u1` to an it-equivalent element of `u2`.
pub fn it_embed(u1: &[BoundExpr], u2: &[BoundExpr], env: &Env) -> Verdict {
    let show = |u: &[BoundExpr]| {
        let items: Vec<String> = u.iter().map(|b| b.render()).collect();
        format!("{{{}}}", items.join(", "))
    };
    let make = |o, w| Verdict::new("it_embed", show(u1), show(u2), o, w, Mode::Numeric);
    let mut pairs = Vec::new();
    for b in u1 {
        let mut undecided = false;
        let hit = u2.iter().find(|c| match eq_it(b, c, env) {
            Outcome::Holds => true,
            Outcome::Unknown => {
                undecided = true;
                false
            }
            Outcome::Fails => false,
        });
        match hit {
            Some(c) => pairs.push((b.render(), c.render())),
            None if undecided => {
                return make(
                    Outcome::Unknown,
                    Witness::Horizon {
                        point: b.render(),
                        reason: "it-equivalence undecided".into(),
                    },
                )
            }
            None => {
                return make(
                    Outcome::Fails,
                    Witness::Counterexample {
                        point: b.render(),
                        detail: "no it-equivalent element on the right".into(),
                    },
                )
            }
        }
    }
    make(Outcome::Holds, Witness::Mapping { pairs })
}

/// One representative per it-equivalence class, in increasing `≤it` order.
pub fn dedupe_it(u: &[BoundExpr], env: &Env) -> Vec<BoundExpr> {
    let mut reps: Vec<BoundExpr> = Vec::new();
    for b in u {
        if reps.iter().any(|r| eq_it(b, r, env) == Outcome::Holds) {
            continue;
        }
        let pos = reps
            .iter()
            .position(|r| le_it(b, r, env).holds())
            .unwrap_or(reps.len());
        reps.insert(pos, b.clone());
    }
    reps
}
