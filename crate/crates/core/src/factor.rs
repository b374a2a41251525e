//! Validation of bounds and of the factors that generate Type 1 and Type 2 bounds.

use serde::Serialize;

use crate::certify::{e_consistent, f_consistent, Certificate};
use crate::error::FactorError;
use crate::expr::BoundExpr;
use crate::numeral::Numeral;
use crate::relations::{cmp_ae, cmp_growth, ll_pow, Env, GrowthClass};
use crate::verdict::{Mode, Outcome, Verdict, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    /// `α` in `n·α(n)`, with `2 ≤ae α ≤ae n`.
    Type1Factor,
    /// `α` in `n^α(n)`, with `2 ≤ae α ≤ae log n`.
    Type2Exponent,
}

impl Role {
    /// The bound generated by `alpha` in this role.
    pub fn bound(self, alpha: &BoundExpr) -> BoundExpr {
        match self {
            Role::Type1Factor => BoundExpr::type1(alpha.clone()),
            Role::Type2Exponent => BoundExpr::type2(alpha.clone()),
        }
    }

    fn ceiling(self) -> BoundExpr {
        match self {
            Role::Type1Factor => BoundExpr::Id,
            Role::Type2Exponent => BoundExpr::Log,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorCerts {
    pub nondecreasing: Verdict,
    pub lower_bound_2: Verdict,
    pub upper_bound: Verdict,
    pub consistency: Certificate,
}

/// A factor expression accepted for a role, with the verdicts that admitted it.
#[derive(Clone, Debug, Serialize)]
pub struct FactorExpr {
    pub expr: BoundExpr,
    pub role: Role,
    pub certs: FactorCerts,
}

impl FactorExpr {
    pub fn bound(&self) -> BoundExpr {
        self.role.bound(&self.expr)
    }
}

/// Scans `p ≤ β(p)` (when `check_id`) and `β(p) ≤ β(p+1)` over the grid.
fn scan_bound(e: &BoundExpr, env: &Env, check_id: bool, relation: &str) -> Verdict {
    let make = |o, w| Verdict::new(relation, e.render(), "", o, w, Mode::Numeric);
    let one = Numeral::from_u64(1);
    let mut prev: Option<Numeral> = None;
    for p in env.grid.points() {
        let Ok(v) = e.eval(p, &env.ar) else { continue };
        if check_id && p.le(&v) == Some(false) {
            return make(
                Outcome::Fails,
                Witness::Counterexample {
                    point: p.to_string(),
                    detail: format!("value {v} is below the argument"),
                },
            );
        }
        if let Some(pv) = &prev {
            if pv.le(&v) == Some(false) {
                return make(
                    Outcome::Fails,
                    Witness::Counterexample {
                        point: p.to_string(),
                        detail: format!("value {v} drops below the previous sample {pv}"),
                    },
                );
            }
        }
        if p.is_exact() {
            if let Ok(q) = env.ar.add(p, &one) {
                if let Ok(next) = e.eval(&q, &env.ar) {
                    if v.le(&next) == Some(false) {
                        return make(
                            Outcome::Fails,
                            Witness::Counterexample {
                                point: p.to_string(),
                                detail: format!("value {v} exceeds the next value {next}"),
                            },
                        );
                    }
                }
            }
        }
        prev = Some(v);
    }
    make(
        Outcome::Holds,
        Witness::Threshold {
            n0: "0".into(),
            upper_bound: false,
        },
    )
}

/// `n ≤ β(n) ≤ β(n+1)` at every sample point.
pub fn validate_bound(e: &BoundExpr, env: &Env) -> Verdict {
    scan_bound(e, env, true, "bound")
}

/// Monotonicity alone.
pub fn nondecreasing(e: &BoundExpr, env: &Env) -> Verdict {
    scan_bound(e, env, false, "nondecreasing")
}

/// Checks range, monotonicity and consistency of `expr` for `role`.
pub fn validate_factor(expr: &BoundExpr, role: Role, env: &Env) -> Result<FactorExpr, FactorError> {
    let mismatch = |reason: String| FactorError::RoleMismatch {
        expr: expr.render(),
        reason,
    };
    if !expr.is_factor_grammar() {
        return Err(mismatch("factors may not contain type1/type2".into()));
    }
    let mono = nondecreasing(expr, env);
    let lower = cmp_ae(&BoundExpr::constant(2), expr, env);
    let upper = cmp_ae(expr, &role.ceiling(), env);
    for v in [&mono, &lower, &upper] {
        if !v.holds() {
            return Err(mismatch(format!(
                "{} {} {}: {:?}",
                v.lhs, v.relation, v.rhs, v.outcome
            )));
        }
    }
    let consistency = match role {
        Role::Type1Factor => f_consistent(expr, env),
        Role::Type2Exponent => e_consistent(expr, env),
    };
    if consistency.is_refuted() {
        return Err(mismatch(format!("{:?} refuted", consistency.property)));
    }
    Ok(FactorExpr {
        expr: expr.clone(),
        role,
        certs: FactorCerts {
            nondecreasing: mono,
            lower_bound_2: lower,
            upper_bound: upper,
            consistency,
        },
    })
}

/// Joins `outer ∘ inner`, merging iterates of a common body (`log∘log = log⟨2⟩`).
pub fn merge_compose(outer: &BoundExpr, inner: &BoundExpr) -> BoundExpr {
    fn split(e: &BoundExpr) -> (&BoundExpr, u32) {
        match e {
            BoundExpr::Iterate(b, m) => (b, *m),
            _ => (e, 1),
        }
    }
    if let BoundExpr::Compose(head, rest) = inner {
        let merged = merge_compose(outer, head);
        if !matches!(merged, BoundExpr::Compose(..)) {
            return BoundExpr::compose(merged, (**rest).clone());
        }
    }
    let (b1, m1) = split(outer);
    let (b2, m2) = split(inner);
    if b1 == b2 && *b1 != BoundExpr::Id {
        BoundExpr::iterate(b1.clone(), m1 + m2)
    } else {
        BoundExpr::compose(outer.clone(), inner.clone())
    }
}

/// The composition of two Type 1 factors.
#[derive(Clone, Debug, Serialize)]
pub struct Composed {
    pub factor: FactorExpr,
    /// `a2` is unbounded and `a1 ≪pow n`, so the composition lies strictly below `a2`.
    pub strict_descent: bool,
}

pub fn compose_factor(
    a1: &FactorExpr,
    a2: &FactorExpr,
    env: &Env,
) -> Result<Composed, FactorError> {
    for a in [a1, a2] {
        if a.role != Role::Type1Factor {
            return Err(FactorError::RoleMismatch {
                expr: a.expr.render(),
                reason: "composition needs Type 1 factors".into(),
            });
        }
    }
    let expr = merge_compose(&a1.expr, &a2.expr);
    let factor = validate_factor(&expr, Role::Type1Factor, env)?;
    let unbounded =
        cmp_growth(&BoundExpr::constant(2), &a2.expr, env).class == GrowthClass::StrictlyBelow;
    let strict_descent = unbounded && ll_pow(&a1.expr, &BoundExpr::Id, env).holds();
    Ok(Composed {
        factor,
        strict_descent,
    })
}
