//! Certificates for consistency of factors, regularity and o-regularity of
//! sets of bounds, and downward closures in generated chains.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::bound::Bound;
use crate::config::Config;
use crate::error::EvalError;
use crate::expr::BoundExpr;
use crate::factor::{validate_bound, Role};
use crate::numeral::{Arith, Numeral};
use crate::relations::{cmp_ae, is_superlinear, le_it, Env};
use crate::universe::{Address, UniverseChain};
use crate::verdict::{Outcome, Verdict, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum NamedSet {
    Blin,
    Blogs,
    /// `n·(log⟨m⟩ n)^k`.
    Bqmlin(u32),
    Bqlin,
    Bpol,
    Bqpol,
    Bhex,
}

impl NamedSet {
    /// A bound whose iteration set is ae-equivalent to the named set.
    pub fn representative(self) -> BoundExpr {
        match self {
            NamedSet::Blin => BoundExpr::type1(BoundExpr::constant(2)),
            NamedSet::Blogs => BoundExpr::type1(BoundExpr::LogStar),
            NamedSet::Bqmlin(m) => BoundExpr::type1(BoundExpr::log_iter(m.max(1))),
            NamedSet::Bqlin => BoundExpr::type1(BoundExpr::Log),
            NamedSet::Bpol => BoundExpr::type2(BoundExpr::constant(2)),
            NamedSet::Bqpol => BoundExpr::type2(BoundExpr::Log),
            NamedSet::Bhex => BoundExpr::Exp2,
        }
    }
}

impl fmt::Display for NamedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedSet::Bqmlin(m) => write!(f, "Bqmlin({m})"),
            other => write!(f, "{other:?}"),
        }
    }
}

impl FromStr for NamedSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        if let Some(m) = t.strip_prefix("Bqmlin(").and_then(|r| r.strip_suffix(')')) {
            return match m.trim().parse::<u32>() {
                Ok(1) => Ok(NamedSet::Bqlin),
                Ok(m) if m >= 2 => Ok(NamedSet::Bqmlin(m)),
                _ => Err(format!("bad iterate count in {t:?}")),
            };
        }
        Ok(match t {
            "Blin" => NamedSet::Blin,
            "Blogs" => NamedSet::Blogs,
            "Bqlin" => NamedSet::Bqlin,
            "Bpol" => NamedSet::Bpol,
            "Bqpol" => NamedSet::Bqpol,
            "Bhex" => NamedSet::Bhex,
            _ => return Err(format!("unknown named set {t:?}")),
        })
    }
}

/// Finite descriptions of (possibly infinite) sets of bounds.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundSetSchema {
    /// `{β, β∘β, β∘β∘β, …}`
    ItOf {
        beta: BoundExpr,
    },
    /// `{n·α^k}` or `{n^(α^k)}` for `k ≥ 1`.
    PowFamily {
        alpha: BoundExpr,
        role: Role,
    },
    FiniteUnion {
        parts: Vec<BoundSetSchema>,
    },
    Finite {
        bounds: Vec<BoundExpr>,
    },
    Named(NamedSet),
    /// The entries of a chain at or below the given addresses.
    AddressDowncloset {
        #[serde(skip)]
        chain: Box<UniverseChain>,
        addresses: Vec<Address>,
    },
}

impl BoundSetSchema {
    /// `it(e)`, `pow1(a)`, `pow2(a)`, `{e; e; …}`, a named set, or `a | b` for unions.
    pub fn parse(text: &str) -> Result<Self, String> {
        let t = text.trim();
        if t.contains('|') {
            let parts = t.split('|').map(Self::parse).collect::<Result<_, _>>()?;
            return Ok(BoundSetSchema::FiniteUnion { parts });
        }
        let expr = |s: &str| BoundExpr::parse(s).map_err(|e| e.to_string());
        let inner = |name: &str| {
            t.strip_prefix(name)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
        };
        if let Some(b) = inner("it") {
            return Ok(BoundSetSchema::ItOf { beta: expr(b)? });
        }
        if let Some(a) = inner("pow1") {
            return Ok(BoundSetSchema::PowFamily {
                alpha: expr(a)?,
                role: Role::Type1Factor,
            });
        }
        if let Some(a) = inner("pow2") {
            return Ok(BoundSetSchema::PowFamily {
                alpha: expr(a)?,
                role: Role::Type2Exponent,
            });
        }
        if let Some(body) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let bounds = body
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(expr)
                .collect::<Result<_, _>>()?;
            return Ok(BoundSetSchema::Finite { bounds });
        }
        t.parse::<NamedSet>().map(BoundSetSchema::Named)
    }
}

impl fmt::Display for BoundSetSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundSetSchema::ItOf { beta } => write!(f, "it({beta})"),
            BoundSetSchema::PowFamily {
                alpha,
                role: Role::Type1Factor,
            } => write!(f, "pow1({alpha})"),
            BoundSetSchema::PowFamily { alpha, .. } => write!(f, "pow2({alpha})"),
            BoundSetSchema::FiniteUnion { parts } => {
                let ps: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                f.write_str(&ps.join(" | "))
            }
            BoundSetSchema::Finite { bounds } => {
                let bs: Vec<String> = bounds.iter().map(|b| b.render()).collect();
                write!(f, "{{{}}}", bs.join("; "))
            }
            BoundSetSchema::Named(n) => write!(f, "{n}"),
            BoundSetSchema::AddressDowncloset { addresses, .. } => {
                let a: Vec<String> = addresses.iter().map(|a| a.to_string()).collect();
                write!(f, "down({})", a.join(","))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    FConsistent,
    EConsistent,
    Regular,
    ORegular,
    Closed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Status {
    /// Follows from a closure rule applied to verified premises.
    CertifiedByRule {
        rule: String,
    },
    /// Verified directly on the sample grid.
    Certified,
    /// Grid evidence without a decision.
    Numeric {
        outcome: Outcome,
    },
    /// Accepted as stated, not checked.
    Declared,
    Refuted,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub property: Property,
    pub subject: String,
    pub status: Status,
    pub parameters: BTreeMap<String, String>,
    pub witnesses: Vec<Witness>,
    /// Verdicts and certificates the status rests on.
    pub premises: Vec<Verdict>,
}

impl Certificate {
    fn new(property: Property, subject: impl Into<String>, status: Status) -> Self {
        Certificate {
            property,
            subject: subject.into(),
            status,
            parameters: BTreeMap::new(),
            witnesses: Vec::new(),
            premises: Vec::new(),
        }
    }

    fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.parameters.insert(k.to_string(), v.to_string());
        self
    }

    fn witness(mut self, w: Witness) -> Self {
        self.witnesses.push(w);
        self
    }

    fn premise(mut self, v: Verdict) -> Self {
        self.premises.push(v);
        self
    }

    pub fn is_certified(&self) -> bool {
        matches!(
            self.status,
            Status::Certified | Status::CertifiedByRule { .. }
        )
    }

    pub fn is_refuted(&self) -> bool {
        self.status == Status::Refuted
    }

    pub fn rule(&self) -> Option<&str> {
        match &self.status {
            Status::CertifiedByRule { rule } => Some(rule),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("certificates serialize")
    }
}

fn power(a: &BoundExpr, l: u32) -> BoundExpr {
    if l == 1 {
        a.clone()
    } else {
        BoundExpr::pow(a.clone(), l)
    }
}

/// Least `l ≤ K` with `α∘g ≤ae α^l` for every `g` in `args`.
fn consistency_exponent(
    property: Property,
    alpha: &BoundExpr,
    args: &[BoundExpr],
    env: &Env,
) -> Certificate {
    let subject = alpha.render();
    let mut last = None;
    'l: for l in 1..=env.cfg.power_cap {
        let rhs = power(alpha, l);
        let mut premises = Vec::new();
        for g in args {
            let v = cmp_ae(&BoundExpr::compose(alpha.clone(), g.clone()), &rhs, env);
            if !v.holds() {
                last = Some(v);
                continue 'l;
            }
            premises.push(v);
        }
        let mut c = Certificate::new(property, subject, Status::Certified).param("l", l);
        c.premises = premises;
        return c;
    }
    let last = last.expect("power cap is positive");
    let status = if last.fails() {
        Status::Refuted
    } else {
        Status::Numeric {
            outcome: Outcome::Unknown,
        }
    };
    Certificate::new(property, subject, status)
        .param("power_cap", env.cfg.power_cap)
        .witness(last.witness.clone())
        .premise(last)
}

/// Closure rules: a midpoint (or, for F, a composition) inherits the property
/// from its parents. Each distinct leaf of the closure tree is checked once by `base`.
fn by_parents(
    property: Property,
    alpha: &BoundExpr,
    base: fn(&BoundExpr, &Env) -> Certificate,
    env: &Env,
) -> Option<Certificate> {
    fn split(e: &BoundExpr, property: Property) -> Option<(&BoundExpr, &BoundExpr, &'static str)> {
        match (e, property) {
            (BoundExpr::Mid(a, b), Property::FConsistent) => Some((a, b, "midpoint-closure")),
            (BoundExpr::Mid(a, b), _) => Some((a, b, "midpoint-e-closure")),
            (BoundExpr::Compose(a, b), Property::FConsistent) => {
                Some((a, b, "composition-closure"))
            }
            _ => None,
        }
    }
    let (a, b, rule) = split(alpha, property)?;
    let mut leaves: Vec<&BoundExpr> = Vec::new();
    let mut stack = vec![a, b];
    while let Some(e) = stack.pop() {
        match split(e, property) {
            Some((x, y, _)) => stack.extend([x, y]),
            None if !leaves.contains(&e) => leaves.push(e),
            None => {}
        }
    }
    let mut c = Certificate::new(
        property,
        alpha.render(),
        Status::CertifiedByRule { rule: rule.into() },
    );
    for leaf in leaves {
        let lc = base(leaf, env);
        if !lc.is_certified() {
            return None;
        }
        c.premises.extend(lc.premises);
    }
    Some(c.param("parents", format!("{a}, {b}")))
}

/// `α(n²) ≤ae α(n)^l` for some `l`.
pub fn f_consistent(alpha: &BoundExpr, env: &Env) -> Certificate {
    by_parents(Property::FConsistent, alpha, f_direct, env).unwrap_or_else(|| f_direct(alpha, env))
}

fn f_direct(alpha: &BoundExpr, env: &Env) -> Certificate {
    env.memo.get_or("f", alpha, || {
        let square = BoundExpr::pow(BoundExpr::Id, 2);
        consistency_exponent(Property::FConsistent, alpha, &[square], env)
    })
}

/// `α(n^((log n)^k)) ≤ae α(n)^l` for `k ≤ 2` and some `l`.
pub fn e_consistent(alpha: &BoundExpr, env: &Env) -> Certificate {
    by_parents(Property::EConsistent, alpha, e_direct, env).unwrap_or_else(|| e_direct(alpha, env))
}

fn e_direct(alpha: &BoundExpr, env: &Env) -> Certificate {
    env.memo.get_or("e", alpha, || {
        let args: Vec<BoundExpr> = (1..=2)
            .map(|k| BoundExpr::type2(power(&BoundExpr::Log, k)))
            .collect();
        consistency_exponent(Property::EConsistent, alpha, &args, env)
    })
}

/// `c` with `β(n) = c·n` at every exact grid point from `2^16` on.
fn ultimately_linear(beta: &BoundExpr, env: &Env) -> Option<BigUint> {
    let mut c = None;
    for p in env.grid.points() {
        let Some(pv) = p.as_exact() else { continue };
        if pv.bits() <= 16 {
            continue;
        }
        let v = beta.eval(p, &env.ar).ok()?;
        let v = v.as_exact()?;
        let q = v / pv;
        if &(&q * pv) != v || c.as_ref().is_some_and(|c| c != &q) {
            return None;
        }
        c = Some(q);
    }
    c
}

/// Iterates of `β` up to `β⟨k⟩`.
fn iterates(beta: &BoundExpr, k: u32) -> Vec<BoundExpr> {
    (1..=k)
        .map(|m| {
            if m == 1 {
                beta.clone()
            } else {
                BoundExpr::iterate(beta.clone(), m)
            }
        })
        .collect()
}

/// Direct check of closure under `β + β'∘β` over a finite set.
fn finite_regular(subject: String, bounds: &[BoundExpr], env: &Env) -> Certificate {
    let mut premises = Vec::new();
    for b in bounds {
        for b2 in bounds {
            let target = BoundExpr::add(b.clone(), BoundExpr::compose(b2.clone(), b.clone()));
            let mut undecided = None;
            let hit = bounds.iter().find_map(|b3| {
                let v = cmp_ae(&target, b3, env);
                if v.holds() {
                    Some(v)
                } else {
                    if v.unknown() {
                        undecided = Some(v);
                    }
                    None
                }
            });
            match (hit, undecided) {
                (Some(v), _) => premises.push(v),
                (None, Some(v)) => {
                    return Certificate::new(
                        Property::Regular,
                        subject,
                        Status::Numeric {
                            outcome: Outcome::Unknown,
                        },
                    )
                    .witness(v.witness.clone())
                    .premise(v)
                }
                (None, None) => {
                    let v = cmp_ae(&target, b, env);
                    return Certificate::new(Property::Regular, subject, Status::Refuted)
                        .param("pair", format!("{b}, {b2}"))
                        .witness(Witness::Counterexample {
                            point: target.render(),
                            detail: "not ae-below any element of the set".into(),
                        })
                        .premise(v);
                }
            }
        }
    }
    let declared = bounds.iter().all(|b| b.attributes().constructible);
    let status = if declared {
        Status::Certified
    } else {
        Status::Numeric {
            outcome: Outcome::Unknown,
        }
    };
    let mut c = Certificate::new(Property::Regular, subject, status).param(
        "constructible-majorant",
        if declared { "declared" } else { "unknown" },
    );
    c.premises = premises;
    c
}

pub fn regular_check(set: &BoundSetSchema, env: &Env) -> Certificate {
    let subject = set.to_string();
    let rule = |r: &str| Status::CertifiedByRule { rule: r.into() };
    match set {
        BoundSetSchema::Named(n) => Certificate::new(Property::Regular, subject, rule("named-set"))
            .param("representative", n.representative()),
        BoundSetSchema::ItOf { beta } => {
            let bound = validate_bound(beta, env);
            let sup = is_superlinear(beta, env);
            let linear = ultimately_linear(beta, env);
            let grows = sup.holds() || linear.as_ref().is_some_and(|c| c >= &BigUint::from(2u32));
            if bound.holds() && grows && beta.attributes().constructible {
                let mut c =
                    Certificate::new(Property::Regular, subject, rule("iteration-set-regular"))
                        .premise(bound)
                        .premise(sup);
                if let Some(l) = linear {
                    c = c.param("linear-constant", l);
                }
                c
            } else {
                // Few iterates suffice when the set is finite, e.g. It(n) = {n}.
                let its = iterates(beta, 3);
                let mut distinct = vec![its[0].clone()];
                for e in &its[1..] {
                    let same = cmp_ae(e, &its[0], env).holds() && cmp_ae(&its[0], e, env).holds();
                    if !same {
                        distinct.push(e.clone());
                    }
                }
                if distinct.len() == 1 {
                    finite_regular(subject, &distinct, env)
                } else {
                    Certificate::new(
                        Property::Regular,
                        subject,
                        Status::Numeric {
                            outcome: Outcome::Unknown,
                        },
                    )
                    .premise(bound)
                    .premise(sup)
                }
            }
        }
        BoundSetSchema::PowFamily { alpha, role } => {
            let cons = match role {
                Role::Type1Factor => f_consistent(alpha, env),
                Role::Type2Exponent => e_consistent(alpha, env),
            };
            let status = if cons.is_certified() {
                rule("power-family-regular")
            } else {
                Status::Numeric {
                    outcome: Outcome::Unknown,
                }
            };
            let mut c = Certificate::new(Property::Regular, subject, status);
            c.premises = cons.premises;
            c
        }
        BoundSetSchema::Finite { bounds } => finite_regular(subject, bounds, env),
        BoundSetSchema::FiniteUnion { parts } => {
            if let Some(bounds) = flatten_finite(parts) {
                return finite_regular(subject, &bounds, env);
            }
            let certs: Vec<Certificate> = parts.iter().map(|p| regular_check(p, env)).collect();
            if let Some(bad) = certs.iter().find(|c| !c.is_certified()) {
                return Certificate::new(Property::Regular, subject, bad.status.clone())
                    .param("part", &bad.subject);
            }
            // Regular parts whose representatives are ≤it-comparable give a regular union.
            let reps: Option<Vec<BoundExpr>> = parts.iter().map(representative).collect();
            let Some(reps) = reps else {
                return Certificate::new(
                    Property::Regular,
                    subject,
                    Status::Numeric {
                        outcome: Outcome::Unknown,
                    },
                );
            };
            let mut premises = Vec::new();
            for (i, a) in reps.iter().enumerate() {
                for b in &reps[i + 1..] {
                    let v = le_it(a, b, env);
                    let w = le_it(b, a, env);
                    if !(v.holds() || w.holds()) {
                        return Certificate::new(
                            Property::Regular,
                            subject,
                            Status::Numeric {
                                outcome: Outcome::Unknown,
                            },
                        )
                        .premise(v)
                        .premise(w);
                    }
                    premises.push(if v.holds() { v } else { w });
                }
            }
            let mut c = Certificate::new(
                Property::Regular,
                subject,
                rule("union-of-comparable-regular-sets"),
            );
            c.premises = premises;
            c
        }
        BoundSetSchema::AddressDowncloset { chain, addresses } => {
            let Some(top) = addresses.iter().filter_map(|a| chain.position(a)).max() else {
                return Certificate::new(Property::Regular, subject, Status::Refuted).witness(
                    Witness::Counterexample {
                        point: "addresses".into(),
                        detail: "none of the addresses is in the chain".into(),
                    },
                );
            };
            let b = &chain.entries[top].bound;
            let v = cmp_ae(&BoundExpr::type1(BoundExpr::constant(2)), b, env);
            let status = match v.outcome {
                Outcome::Holds => rule("closed-subset"),
                Outcome::Fails => Status::Refuted,
                Outcome::Unknown => Status::Numeric {
                    outcome: Outcome::Unknown,
                },
            };
            Certificate::new(Property::Regular, subject, status).premise(v)
        }
    }
}

fn flatten_finite(parts: &[BoundSetSchema]) -> Option<Vec<BoundExpr>> {
    let mut out = Vec::new();
    for p in parts {
        match p {
            BoundSetSchema::Finite { bounds } => out.extend(bounds.iter().cloned()),
            BoundSetSchema::FiniteUnion { parts } => out.extend(flatten_finite(parts)?),
            _ => return None,
        }
    }
    Some(out)
}

fn representative(s: &BoundSetSchema) -> Option<BoundExpr> {
    match s {
        BoundSetSchema::ItOf { beta } => Some(beta.clone()),
        BoundSetSchema::Named(n) => Some(n.representative()),
        BoundSetSchema::PowFamily { alpha, role } => Some(role.bound(alpha)),
        _ => None,
    }
}

/// Best total `Σ β(mᵢ)` over multisets of positive `mᵢ` with `Σ mᵢ ≤ budget`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub n: u64,
    pub budget: u64,
    #[serde(serialize_with = "decimal")]
    pub best: BigUint,
    pub blocks: Vec<u64>,
    /// `β(β(n))`
    #[serde(serialize_with = "decimal")]
    pub single_block: BigUint,
    /// `β⟨2⟩(n)`
    #[serde(serialize_with = "decimal")]
    pub second_iterate: BigUint,
}

fn decimal<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Largest budget the partition maximisation will take on.
pub const PARTITION_BUDGET_CAP: u64 = 1 << 12;

fn exact_at(b: &dyn Bound, n: u64, ar: &Arith) -> Result<BigUint, EvalError> {
    let v = b.eval_at(&Numeral::from_u64(n), ar)?;
    v.as_exact()
        .cloned()
        .ok_or_else(|| EvalError::BudgetExhausted(format!("{} at {n}", b.label())))
}

fn small(v: &BigUint, what: &str) -> Result<u64, EvalError> {
    u64::try_from(v)
        .ok()
        .filter(|&x| x <= PARTITION_BUDGET_CAP)
        .ok_or_else(|| {
            EvalError::BudgetExhausted(format!("{what} = {v} exceeds the partition cap"))
        })
}

/// Maximises over partitions by dynamic programming on the total size.
pub fn partition_max(beta: &BoundExpr, n: u64, ar: &Arith) -> Result<PartitionReport, EvalError> {
    let budget = small(&exact_at(beta, n, ar)?, "β(n)")?;
    let values: Vec<BigUint> = (0..=budget)
        .map(|j| exact_at(beta, j, ar))
        .collect::<Result<_, _>>()?;
    let mut best = vec![BigUint::zero(); budget as usize + 1];
    let mut choice = vec![0u64; budget as usize + 1];
    for t in 1..=budget as usize {
        for j in 1..=t {
            let cand = &best[t - j] + &values[j];
            if cand > best[t] {
                best[t] = cand;
                choice[t] = j as u64;
            }
        }
    }
    let (mut t, top) = best
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(t, v)| (t, v.clone()))
        .expect("budget table is nonempty");
    let mut blocks = Vec::new();
    while t > 0 && choice[t] > 0 {
        blocks.push(choice[t]);
        t -= choice[t] as usize;
    }
    let single_block = exact_at(beta, budget, ar)?;
    let second_iterate = exact_at(&BoundExpr::iterate(beta.clone(), 2), n, ar)?;
    Ok(PartitionReport {
        n,
        budget,
        best: top,
        blocks,
        single_block,
        second_iterate,
    })
}

/// First `(a, b)` with `β(a) + β(b) > β(a+b)`, over `a + b ≤ s_max`.
pub fn superadditivity_violation(
    beta: &dyn Bound,
    s_max: u64,
    ar: &Arith,
) -> Result<Option<(u64, u64)>, EvalError> {
    let values: Vec<BigUint> = (0..=s_max)
        .map(|j| exact_at(beta, j, ar))
        .collect::<Result<_, _>>()?;
    for s in 2..=s_max as usize {
        for a in 1..=s / 2 {
            if &values[a] + &values[s - a] > values[s] {
                return Ok(Some((a as u64, (s - a) as u64)));
            }
        }
    }
    Ok(None)
}

fn oracle(beta: &BoundExpr, cfg: &Config, ar: &Arith, mut c: Certificate) -> Certificate {
    match superadditivity_violation(beta, cfg.s_max, ar) {
        Ok(Some((a, b))) => {
            return Certificate {
                status: Status::Refuted,
                ..c
            }
            .witness(Witness::Counterexample {
                point: format!("{a} + {b}"),
                detail: "β(a) + β(b) > β(a+b)".into(),
            })
        }
        Ok(None) => c = c.param("superadditive-up-to", cfg.s_max),
        Err(e) => c = c.param("superadditivity", format!("skipped: {e}")),
    }
    let mut checked = Vec::new();
    for n in 1..=cfg.n_max {
        let Ok(r) = partition_max(beta, n, ar) else {
            continue;
        };
        if r.best != r.single_block || r.single_block > r.second_iterate {
            let blocks: Vec<String> = r.blocks.iter().map(|b| b.to_string()).collect();
            return Certificate {
                status: Status::Refuted,
                ..c
            }
            .witness(Witness::Counterexample {
                point: n.to_string(),
                detail: format!(
                    "partition {} gives {} against β(β(n)) = {}",
                    blocks.join("+"),
                    r.best,
                    r.single_block
                ),
            });
        }
        checked.push(n.to_string());
    }
    c.param("partition-checked", checked.join(","))
}

fn is_typed(beta: &BoundExpr) -> bool {
    match beta {
        BoundExpr::Type1(_) | BoundExpr::Type2(_) => true,
        BoundExpr::Iterate(b, _) => is_typed(b),
        _ => false,
    }
}

pub fn o_regular_check(set: &BoundSetSchema, env: &Env) -> Certificate {
    let subject = set.to_string();
    let beta = match set {
        BoundSetSchema::Named(NamedSet::Bhex) => {
            return Certificate::new(Property::ORegular, subject, Status::Declared)
        }
        BoundSetSchema::Named(n) => n.representative(),
        BoundSetSchema::ItOf { beta } => beta.clone(),
        _ => {
            return Certificate::new(
                Property::ORegular,
                subject,
                Status::Numeric {
                    outcome: Outcome::Unknown,
                },
            )
        }
    };
    let bound = validate_bound(&beta, env);
    if !is_typed(&beta) || !bound.holds() {
        return Certificate::new(
            Property::ORegular,
            subject,
            Status::Numeric {
                outcome: Outcome::Unknown,
            },
        )
        .premise(bound);
    }
    let c = Certificate::new(
        Property::ORegular,
        subject,
        Status::CertifiedByRule {
            rule: "iteration-set-o-regular".into(),
        },
    )
    .premise(bound);
    oracle(&beta, &env.cfg, &env.ar, c)
}

/// Every chain address at or below the largest member of `set`.
pub fn closure(set: &[Address], chain: &UniverseChain) -> Vec<Address> {
    let Some(top) = set.iter().filter_map(|a| chain.position(a)).max() else {
        return Vec::new();
    };
    chain.entries[..=top]
        .iter()
        .map(|e| e.address.clone())
        .collect()
}
