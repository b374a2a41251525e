//! Almost-everywhere domination, big-O classes, superlinearity and subhomogeneity.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use std::cmp::Ordering;

use super::sample::{ceil_div, point, scan_le, table, Env};
use crate::bound::Bound;
use crate::expr::BoundExpr;
use crate::growth::{form_of, log_form, Form};
use crate::numeral::Numeral;
use crate::verdict::{Mode, Outcome, Verdict, Witness};

fn symbolic(f: &dyn Bound, g: &dyn Bound) -> Option<(Ordering, String, String)> {
    sym_cmp(f.expr()?, g.expr()?)
}

fn sym_cmp(f: &BoundExpr, g: &BoundExpr) -> Option<(Ordering, String, String)> {
    if let (Some(ff), Some(gf)) = (form_of(f), form_of(g)) {
        if let Some(o) = ff.compare(&gf) {
            return Some((o, ff.to_string(), gf.to_string()));
        }
    }
    // A sum grows like its larger summand.
    let dominant = |a: &BoundExpr, b: &BoundExpr| -> Option<BoundExpr> {
        if a == b {
            return Some(a.clone());
        }
        let (o, ..) = sym_cmp(a, b)?;
        Some(if o == Ordering::Less {
            b.clone()
        } else {
            a.clone()
        })
    };
    let by_sum = match (f, g) {
        (BoundExpr::Add(a, b), _) => dominant(a, b).and_then(|d| sym_cmp(&d, g)),
        (_, BoundExpr::Add(a, b)) => dominant(a, b).and_then(|d| sym_cmp(f, &d)),
        _ => None,
    };
    by_sum.or_else(|| log_space(f, g))
}

/// `log f / log g → 0` with `log g` unbounded gives `f/g → 0`.
fn log_space(f: &BoundExpr, g: &BoundExpr) -> Option<(Ordering, String, String)> {
    let (lf, lg) = (log_form(f)?, log_form(g)?);
    let o = lf.compare(&lg)?;
    let unbounded = |x: &Form| x.compare(&Form::constant()) == Some(Ordering::Greater);
    let decided = match o {
        Ordering::Less => unbounded(&lg),
        Ordering::Greater => unbounded(&lf),
        Ordering::Equal => false,
    };
    decided.then(|| (o, format!("2^({lf})"), format!("2^({lg})")))
}

fn violation_witness(
    env: &Env,
    fv: &[Option<Numeral>],
    gv: &[Option<Numeral>],
    idx: &[usize],
) -> Witness {
    if idx.len() >= 3 {
        Witness::Scheme {
            description: format!("violated at {} top-scale points", idx.len()),
            instances: idx.iter().take(3).map(|&i| point(env, i)).collect(),
        }
    } else {
        let i = idx[idx.len() - 1];
        let show = |v: &Option<Numeral>| v.as_ref().map(|x| x.to_string()).unwrap_or_default();
        Witness::Counterexample {
            point: point(env, i),
            detail: format!("{} > {}", show(&fv[i]), show(&gv[i])),
        }
    }
}

/// `a1 ⊕ b1 ≤ae a2 ⊕ b2` from `a1 ≤ae a2` and `b1 ≤ae b2`, for `⊕` one of
/// `+`, `·` and composition of bounds.
fn termwise(f: &dyn Bound, g: &dyn Bound, env: &Env) -> Option<Mode> {
    use BoundExpr as E;
    let ((a1, b1), (a2, b2)) = match (f.expr()?, g.expr()?) {
        (E::Add(a1, b1), E::Add(a2, b2))
        | (E::Mul(a1, b1), E::Mul(a2, b2))
        | (E::Compose(a1, b1), E::Compose(a2, b2)) => ((a1, b1), (a2, b2)),
        _ => return None,
    };
    let (va, vb) = (cmp_ae(&**a1, &**a2, env), cmp_ae(&**b1, &**b2, env));
    (va.holds() && vb.holds()).then(|| {
        if va.is_symbolic() && vb.is_symbolic() {
            Mode::SymbolicDefinite
        } else {
            Mode::Numeric
        }
    })
}

/// `f ≤ae g`.
pub fn cmp_ae(f: &dyn Bound, g: &dyn Bound, env: &Env) -> Verdict {
    let fv = table(f, env);
    let gv = table(g, env);
    let scan = scan_le(&fv, &gv, env);
    let (lhs, rhs) = (f.label(), g.label());
    let threshold = Witness::Threshold {
        n0: point(env, scan.last_violation.map_or(0, |v| v + 1)),
        upper_bound: true,
    };
    let make = |o, w, m| Verdict::new("le_ae", lhs.clone(), rhs.clone(), o, w, m);
    match symbolic(f, g) {
        Some((Ordering::Less, ..)) if scan.top_violations.is_empty() => {
            return make(Outcome::Holds, threshold, Mode::SymbolicDefinite);
        }
        // The crossover lies beyond the grid; the normal forms are the witness.
        Some((Ordering::Less, a, b)) => {
            return make(
                Outcome::Holds,
                Witness::Symbolic { lhs: a, rhs: b },
                Mode::SymbolicDefinite,
            );
        }
        Some((Ordering::Greater, a, b)) => {
            let w = if scan.top_violations.is_empty() {
                Witness::Symbolic { lhs: a, rhs: b }
            } else {
                violation_witness(env, &fv, &gv, &scan.top_violations)
            };
            return make(Outcome::Fails, w, Mode::SymbolicDefinite);
        }
        _ => {}
    }
    if let Some(mode) = termwise(f, g, env) {
        return make(
            Outcome::Holds,
            Witness::Rule {
                name: "monotone-closure".into(),
            },
            mode,
        );
    }
    if !scan.top_violations.is_empty() {
        make(
            Outcome::Fails,
            violation_witness(env, &fv, &gv, &scan.top_violations),
            Mode::Numeric,
        )
    } else if scan.top_confirmed == 0 {
        make(
            Outcome::Unknown,
            Witness::Horizon {
                point: point(env, env.grid.len().saturating_sub(1)),
                reason: "no decisive comparison at the top scale".into(),
            },
            Mode::Numeric,
        )
    } else {
        make(Outcome::Holds, threshold, Mode::Numeric)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GrowthClass {
    /// `f <o g`
    StrictlyBelow,
    /// `f ≤O g` and `g ≤O f`
    SameOrder,
    /// `f ≤O g`
    Below,
    /// `g ≤O f`
    Above,
    /// `g <o f`
    StrictlyAbove,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthVerdict {
    pub class: GrowthClass,
    /// `c` with `f ≤ae c·g` (or the reverse for the upper classes).
    #[serde(serialize_with = "as_decimal")]
    pub constant: Option<BigUint>,
    pub verdict: Verdict,
}

fn as_decimal<S: serde::Serializer>(c: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match c {
        Some(c) => s.serialize_str(&c.to_string()),
        None => s.serialize_none(),
    }
}

/// Largest `⌈a/b⌉` over the top-scale exact points; `None` if unbounded-looking.
struct TopRatios {
    c_fg: Option<BigUint>,
    c_gf: Option<BigUint>,
    strictly_below: bool,
    strictly_above: bool,
    samples: usize,
}

fn ratio_max(pairs: &[(&BigUint, &BigUint)]) -> Option<BigUint> {
    let mut best = BigUint::one();
    for (a, b) in pairs {
        if a.bits() > b.bits() + 64 {
            return None;
        }
        best = best.max(ceil_div(a, b)?);
    }
    Some(best)
}

/// For each `j = 1..=k` the quotient `b/a` passes `2^j` at some point and
/// stays above it at every later point; crossings come in order.
fn separates(pairs: &[(&BigUint, &BigUint)], k: u32) -> bool {
    let mut from = 0;
    for j in 1..=k {
        let above = |(a, b): &(&BigUint, &BigUint)| (*a << j) < **b;
        let Some(first) = pairs[from..].iter().position(above) else {
            return false;
        };
        from += first;
        if !pairs[from..].iter().all(above) {
            return false;
        }
    }
    true
}

fn top_ratios(fv: &[Option<Numeral>], gv: &[Option<Numeral>], env: &Env) -> TopRatios {
    let k = env.cfg.power_cap;
    let pairs: Vec<(&BigUint, &BigUint)> = (env.grid.top_start()..fv.len())
        .filter_map(|i| {
            let a = fv[i].as_ref()?.as_exact()?;
            let b = gv[i].as_ref()?.as_exact()?;
            (!a.is_zero() && !b.is_zero()).then_some((a, b))
        })
        .collect();
    let rev: Vec<_> = pairs.iter().map(|(a, b)| (*b, *a)).collect();
    TopRatios {
        c_fg: ratio_max(&pairs),
        c_gf: ratio_max(&rev),
        strictly_below: separates(&pairs, k),
        strictly_above: separates(&rev, k),
        samples: pairs.len(),
    }
}

/// `f <o β∘f` whenever `β` is superlinear: `β(x)/x → ∞` and `f(n) ≥ n → ∞`.
fn outer_superlinear(f: &dyn Bound, g: &dyn Bound) -> Option<(GrowthClass, &'static str)> {
    const RULE: &str = "superlinear-outer-composition";
    let superlinear =
        |o: &BoundExpr| form_of(o).and_then(|fo| fo.compare(&Form::n())) == Some(Ordering::Greater);
    let (fe, ge) = (f.expr()?, g.expr()?);
    match (fe, ge) {
        (_, BoundExpr::Compose(o, i)) if **i == *fe && superlinear(o) => {
            Some((GrowthClass::StrictlyBelow, RULE))
        }
        (BoundExpr::Compose(o, i), _) if **i == *ge && superlinear(o) => {
            Some((GrowthClass::StrictlyAbove, RULE))
        }
        _ => None,
    }
}

/// Big-O comparison of two bounds.
pub fn cmp_growth(f: &dyn Bound, g: &dyn Bound, env: &Env) -> GrowthVerdict {
    let fv = table(f, env);
    let gv = table(g, env);
    let r = top_ratios(&fv, &gv, env);
    let one = BigUint::one();
    let cap = BigUint::one() << env.cfg.power_cap;
    let bounded = |c: &Option<BigUint>| c.as_ref().is_some_and(|c| c <= &cap);
    let same = || match (&r.c_fg, &r.c_gf) {
        (Some(a), Some(b)) => Some(a.clone().max(b.clone())),
        _ => None,
    };
    if let Some((class, name)) = outer_superlinear(f, g) {
        let relation = format!("growth:{class:?}");
        let w = Witness::Rule { name: name.into() };
        return GrowthVerdict {
            class,
            constant: Some(one),
            verdict: Verdict::new(
                &relation,
                f.label(),
                g.label(),
                Outcome::Holds,
                w,
                Mode::SymbolicDefinite,
            ),
        };
    }
    let (class, constant, mode) = match symbolic(f, g) {
        Some((Ordering::Less, ..)) => (
            GrowthClass::StrictlyBelow,
            Some(one),
            Mode::SymbolicDefinite,
        ),
        Some((Ordering::Greater, ..)) => (
            GrowthClass::StrictlyAbove,
            Some(one),
            Mode::SymbolicDefinite,
        ),
        Some((Ordering::Equal, ..)) => (GrowthClass::SameOrder, same(), Mode::SymbolicDefinite),
        None if r.samples == 0 => (GrowthClass::Unknown, None, Mode::Numeric),
        None if r.strictly_below => (GrowthClass::StrictlyBelow, Some(one), Mode::Numeric),
        None if r.strictly_above => (GrowthClass::StrictlyAbove, Some(one), Mode::Numeric),
        None if bounded(&r.c_fg) && bounded(&r.c_gf) => {
            (GrowthClass::SameOrder, same(), Mode::Numeric)
        }
        None if bounded(&r.c_fg) => (GrowthClass::Below, r.c_fg.clone(), Mode::Numeric),
        None if bounded(&r.c_gf) => (GrowthClass::Above, r.c_gf.clone(), Mode::Numeric),
        None => (GrowthClass::Unknown, None, Mode::Numeric),
    };
    let outcome = if class == GrowthClass::Unknown {
        Outcome::Unknown
    } else {
        Outcome::Holds
    };
    let witness = match &constant {
        Some(c) => Witness::Constant { c: c.to_string() },
        None => Witness::Horizon {
            point: point(env, env.grid.len().saturating_sub(1)),
            reason: "quotients undecided on the grid".into(),
        },
    };
    let relation = format!("growth:{class:?}");
    GrowthVerdict {
        class,
        constant,
        verdict: Verdict::new(&relation, f.label(), g.label(), outcome, witness, mode),
    }
}

/// `n <o f`.
pub fn is_superlinear(f: &dyn Bound, env: &Env) -> Verdict {
    let id = BoundExpr::Id;
    let fv = table(f, env);
    let iv = table(&id, env);
    let r = top_ratios(&fv, &iv, env);
    let make = |o, w, m| Verdict::new("superlinear", f.label(), "n", o, w, m);
    let bounded_witness = || match &r.c_fg {
        Some(c) => Witness::Constant { c: c.to_string() },
        None => Witness::None,
    };
    match symbolic(f, &id) {
        Some((Ordering::Greater, a, b)) => {
            return make(
                Outcome::Holds,
                Witness::Symbolic { lhs: a, rhs: b },
                Mode::SymbolicDefinite,
            )
        }
        Some(_) => return make(Outcome::Fails, bounded_witness(), Mode::SymbolicDefinite),
        None => {}
    }
    // Ratio f(n)/n at 2^32 and 2^64.
    let at = |k: u64| -> Option<BigUint> {
        let (_, i) = env
            .grid
            .scale_indices(k)
            .into_iter()
            .find(|(kk, _)| *kk == k)?;
        let v = fv[i].as_ref()?.as_exact()?;
        Some(v >> k)
    };
    let cap = BigUint::from(env.cfg.power_cap);
    match (at(32), at(64)) {
        (Some(lo), Some(hi)) if hi > cap && hi > lo => make(
            Outcome::Holds,
            Witness::Constant { c: hi.to_string() },
            Mode::Numeric,
        ),
        (Some(lo), Some(hi)) if hi <= &lo + 1u32 => {
            make(Outcome::Fails, bounded_witness(), Mode::Numeric)
        }
        _ => make(
            Outcome::Unknown,
            Witness::Horizon {
                point: "2^64".into(),
                reason: "ratio to n undecided".into(),
            },
            Mode::Numeric,
        ),
    }
}

/// For each `c`, a `c̄` with `f(c·n) ≤ c̄·f(n)` at every grid point, or a refutation.
pub fn is_subhomogeneous(f: &dyn Bound, env: &Env, cs: &[u64]) -> Verdict {
    let make = |o, w| {
        Verdict::new(
            "subhomogeneous",
            f.label(),
            format!("{cs:?}"),
            o,
            w,
            Mode::Numeric,
        )
    };
    let mut pairs = Vec::new();
    for &c in cs {
        let cn = Numeral::from_u64(c);
        let mut best = BigUint::one();
        let mut by_scale: Vec<(u64, Option<BigUint>)> = Vec::new();
        for p in env.grid.points() {
            let Some(pv) = p.as_exact() else { continue };
            if pv.is_zero() {
                continue;
            }
            let Ok(fp) = f.eval_at(p, &env.ar) else {
                continue;
            };
            let Ok(cp) = env.ar.mul(&cn, p) else { continue };
            let Ok(fcp) = f.eval_at(&cp, &env.ar) else {
                continue;
            };
            let (Some(a), Some(b)) = (fcp.as_exact(), fp.as_exact()) else {
                continue;
            };
            if b.is_zero() {
                continue;
            }
            let ratio = if a.bits() > b.bits() + 64 {
                None
            } else {
                ceil_div(a, b)
            };
            let is_scale = pv.trailing_zeros() == Some(pv.bits() - 1);
            if is_scale {
                by_scale.push((pv.bits() - 1, ratio.clone()));
            }
            match ratio {
                Some(r) => best = best.max(r),
                None => {
                    return make(
                        Outcome::Fails,
                        Witness::Counterexample {
                            point: p.to_string(),
                            detail: format!("f({c}·n)/f(n) exceeds 2^64"),
                        },
                    )
                }
            }
        }
        // Growth of the ratio between mid and top scale refutes subhomogeneity.
        if let Some((kmax, Some(rmax))) = by_scale.last().cloned() {
            let mid = by_scale.iter().find(|(k, _)| *k >= kmax / 2);
            if let Some((kmid, Some(rmid))) = mid {
                if rmax > (rmid << 1u32) + 1u32 {
                    return make(
                        Outcome::Fails,
                        Witness::Counterexample {
                            point: format!("2^{kmax}"),
                            detail: format!("ratio {rmax} at 2^{kmax} against {rmid} at 2^{kmid}"),
                        },
                    );
                }
            }
        }
        pairs.push((c.to_string(), best.to_string()));
    }
    make(Outcome::Holds, Witness::Constants { pairs })
}
