//! Named sets of bounds and dense chains of Type 1 / Type 2 bounds built by
//! repeated midpoint insertion.
//!
//! Entries sit at dyadic positions in `[0,1]`. The lowest base element is at
//! `0` (address `Λ`), the highest at `1` (address `top`), and each midpoint
//! takes the average of its neighbours' positions, so an address is the
//! binary expansion of the position.

use serde::Serialize;
use serde_json::json;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::certify::{BoundSetSchema, NamedSet};
use crate::error::UniverseError;
use crate::expr::BoundExpr;
use crate::factor::{compose_factor, validate_factor, FactorExpr, Role};
use crate::growth::factor_index;
use crate::order::{BinWord, Dyadic};
use crate::relations::{cmp_growth, ll_pow, Env, GrowthClass};

/// Position label of a chain entry: a word of `B`, or the top position `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Address {
    Word(BinWord),
    Top,
}

impl Address {
    pub fn val(&self) -> Dyadic {
        match self {
            Address::Word(w) => crate::order::val(w),
            Address::Top => Dyadic::one(),
        }
    }

    fn from_position(p: &Dyadic) -> Address {
        p.to_word().map_or(Address::Top, Address::Word)
    }
}

impl Ord for Address {
    fn cmp(&self, other: &Self) -> Ordering {
        self.val().cmp(&other.val())
    }
}

impl PartialOrd for Address {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Address::Word(w) => write!(f, "{w}"),
            Address::Top => f.write_str("top"),
        }
    }
}

impl FromStr for Address {
    type Err = UniverseError;

    fn from_str(s: &str) -> Result<Self, UniverseError> {
        if s.trim() == "top" {
            Ok(Address::Top)
        } else {
            Ok(Address::Word(s.parse()?))
        }
    }
}

impl Serialize for Address {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainType {
    Type1,
    Type2,
    Combined,
}

impl FromStr for ChainType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "1" | "type1" => Ok(ChainType::Type1),
            "2" | "type2" => Ok(ChainType::Type2),
            "combined" | "c" => Ok(ChainType::Combined),
            _ => Err(format!(
                "unknown chain type {s:?} (expected 1, 2 or combined)"
            )),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainEntry {
    pub address: Address,
    pub val: Dyadic,
    pub bound: BoundExpr,
    pub factor: FactorExpr,
    /// Type 2 exponent of an entry shared by both halves of a combined chain.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<FactorExpr>,
    pub depth: u32,
    pub parents: Option<(Address, Address)>,
}

impl ChainEntry {
    fn factor_for(&self, role: Role) -> &FactorExpr {
        match &self.exponent {
            Some(e) if role == Role::Type2Exponent => e,
            _ => &self.factor,
        }
    }

    /// The role in which this entry meets its right neighbour.
    fn right_role(&self) -> Role {
        if self.exponent.is_some() {
            Role::Type2Exponent
        } else {
            self.factor.role
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainParams {
    #[serde(rename = "type")]
    pub kind: ChainType,
    pub depth: u32,
    pub log_cap: u32,
    pub gap: Option<(String, String)>,
    /// The base set was cut off after this many iterated logarithms.
    pub truncated_at: Option<u32>,
    /// Adjacent base entries whose true gap is a limit of infinitely many bounds.
    pub limit_gap: Option<(Address, Address)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct UniverseChain {
    pub params: ChainParams,
    pub entries: Vec<ChainEntry>,
}

impl UniverseChain {
    pub fn bounds(&self) -> Vec<BoundExpr> {
        self.entries.iter().map(|e| e.bound.clone()).collect()
    }

    pub fn position(&self, a: &Address) -> Option<usize> {
        self.entries.iter().position(|e| &e.address == a)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<_> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "address": e.address,
                    "val": e.val,
                    "expr": e.bound.render(),
                    "factor": e.factor.expr.render(),
                    "depth": e.depth,
                    "parents": e.parents.as_ref().map(|(a, b)| vec![a.to_string(), b.to_string()]),
                })
            })
            .collect();
        json!({ "params": self.params, "entries": entries })
    }

    /// The chain as a DOT digraph, each entry pointing to its successor.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph chain {\n  rankdir=BT;\n");
        for (i, e) in self.entries.iter().enumerate() {
            s.push_str(&format!(
                "  e{i} [label=\"{}\\n{}\"];\n",
                e.address,
                e.bound.render().replace('"', "\\\"")
            ));
        }
        for i in 1..self.entries.len() {
            s.push_str(&format!("  e{} -> e{i};\n", i - 1));
        }
        s.push_str("}\n");
        s
    }
}

pub fn lookup<'a>(
    chain: &'a UniverseChain,
    address: &Address,
) -> Result<&'a ChainEntry, UniverseError> {
    chain
        .entries
        .iter()
        .find(|e| &e.address == address)
        .ok_or_else(|| UniverseError::UnknownAddress(address.to_string()))
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub tag: NamedSet,
    pub representative: BoundExpr,
    /// Further representatives of the same it-class.
    pub alternates: Vec<BoundExpr>,
    pub schema: BoundSetSchema,
    pub note: String,
}

/// The named sets, in increasing order, with `Bqmlin(m)` for `m = cap..2`.
pub fn catalog(cap: u32) -> Vec<CatalogEntry> {
    let mut tags = vec![NamedSet::Blin, NamedSet::Blogs];
    tags.extend((2..=cap.max(1)).rev().map(NamedSet::Bqmlin));
    tags.extend([
        NamedSet::Bqlin,
        NamedSet::Bpol,
        NamedSet::Bqpol,
        NamedSet::Bhex,
    ]);
    tags.into_iter()
        .map(|tag| {
            let representative = tag.representative();
            let (alternates, note) = match tag {
                NamedSet::Blin => (
                    vec![BoundExpr::Id],
                    "two it-classes: {n} alone, and every c·n with c ≥ 2".to_string(),
                ),
                NamedSet::Bqlin => (vec![], "the same set as Bqmlin(1)".to_string()),
                NamedSet::Bqpol => (
                    vec![BoundExpr::type2(BoundExpr::pow(BoundExpr::Log, 2))],
                    "n^log(n) and n^(log(n))^2 are it-equivalent".to_string(),
                ),
                _ => (vec![], String::new()),
            };
            CatalogEntry {
                tag,
                schema: BoundSetSchema::Named(tag),
                representative,
                alternates,
                note,
            }
        })
        .collect()
}

fn base_factors(kind: ChainType, cap: u32) -> Vec<(Role, BoundExpr)> {
    let t1 = || {
        let mut v = vec![BoundExpr::constant(2), BoundExpr::LogStar];
        v.extend((1..=cap.max(1)).rev().map(BoundExpr::log_iter));
        v.push(BoundExpr::Id);
        v.into_iter().map(|a| (Role::Type1Factor, a))
    };
    let t2 = || {
        [BoundExpr::constant(2), BoundExpr::Log]
            .into_iter()
            .map(|a| (Role::Type2Exponent, a))
    };
    match kind {
        ChainType::Type1 => t1().collect(),
        ChainType::Type2 => t2().collect(),
        ChainType::Combined => t1().chain(t2()).collect(),
    }
}

/// Evenly spaced dyadic positions for `count` base entries, last one at 1.
fn base_positions(count: usize) -> Vec<Dyadic> {
    let gaps = count.saturating_sub(1).max(1);
    let c = usize::BITS - (gaps - 1).leading_zeros();
    let c = if gaps == 1 { 0 } else { c };
    (0..count)
        .map(|i| {
            if i + 1 == count {
                Dyadic::one()
            } else {
                Dyadic::new(BigUint::from(i), c)
            }
        })
        .collect()
}

/// Dense chain of depth `depth` over the base set, or over `gap = (lo, hi)`.
pub fn generate(
    kind: ChainType,
    depth: u32,
    cap: u32,
    gap: Option<(BoundExpr, BoundExpr)>,
    env: &Env,
) -> Result<UniverseChain, UniverseError> {
    if depth > env.cfg.max_depth {
        return Err(UniverseError::DepthExceeded {
            depth,
            max: env.cfg.max_depth,
        });
    }
    let mut base: Vec<(Role, BoundExpr)> = match &gap {
        Some((lo, hi)) => {
            let role = if kind == ChainType::Type2 {
                Role::Type2Exponent
            } else {
                Role::Type1Factor
            };
            if !ll_pow(lo, hi, env).holds() {
                return Err(UniverseError::GapNotOrdered {
                    lo: lo.render(),
                    hi: hi.render(),
                });
            }
            vec![(role, lo.clone()), (role, hi.clone())]
        }
        None => base_factors(kind, cap),
    };
    // In a combined chain n·n and n^2 are one entry.
    let mut shared_exponent = None;
    if gap.is_none() && kind == ChainType::Combined {
        let i = base
            .iter()
            .position(|(r, _)| *r == Role::Type2Exponent)
            .expect("type 2 part");
        let (_, two) = base.remove(i);
        shared_exponent = Some((i - 1, validate_factor(&two, Role::Type2Exponent, env)?));
    }
    let positions = base_positions(base.len());
    let mut entries = Vec::with_capacity(base.len());
    for (i, ((role, a), p)) in base.iter().zip(&positions).enumerate() {
        let factor = validate_factor(a, *role, env)?;
        let exponent = match &shared_exponent {
            Some((j, e)) if *j == i => Some(e.clone()),
            _ => None,
        };
        entries.push(ChainEntry {
            address: Address::from_position(p),
            val: p.clone(),
            bound: role.bound(a),
            factor,
            exponent,
            depth: 0,
            parents: None,
        });
    }
    let (truncated_at, limit_gap) = if gap.is_none() && kind != ChainType::Type2 {
        // log* and log⟨cap⟩ are neighbours here; in truth infinitely many log⟨m⟩ lie between.
        (
            Some(cap),
            Some((entries[1].address.clone(), entries[2].address.clone())),
        )
    } else {
        (None, None)
    };

    let mut indexes: Vec<(String, crate::growth::GrowthIndex)> = entries
        .iter()
        .filter_map(|e| Some((e.bound.render(), factor_index(&e.factor.expr)?)))
        .collect();
    for d in 1..=depth {
        let mut next = Vec::with_capacity(entries.len() * 2);
        for pair in entries.windows(2) {
            let (l, r) = (&pair[0], &pair[1]);
            next.push(l.clone());
            let role = l.right_role();
            let (fl, fr) = (l.factor_for(role), r.factor_for(role));
            let mid = BoundExpr::mid(fl.expr.clone(), fr.expr.clone());
            if let Some(ix) = factor_index(&mid) {
                if let Some((existing, _)) = indexes.iter().find(|(_, j)| *j == ix) {
                    return Err(UniverseError::Duplicate {
                        mid: mid.render(),
                        existing: existing.clone(),
                    });
                }
                indexes.push((role.bound(&mid).render(), ix));
            }
            if !(ll_pow(&fl.expr, &mid, env).holds() && ll_pow(&mid, &fr.expr, env).holds()) {
                return Err(UniverseError::Betweenness {
                    left: fl.expr.render(),
                    mid: mid.render(),
                    right: fr.expr.render(),
                });
            }
            let factor = validate_factor(&mid, role, env)?;
            let p = l.val.midpoint(&r.val);
            next.push(ChainEntry {
                address: Address::from_position(&p),
                val: p,
                bound: role.bound(&mid),
                factor,
                exponent: None,
                depth: d,
                parents: Some((l.address.clone(), r.address.clone())),
            });
        }
        next.push(entries.last().expect("nonempty chain").clone());
        entries = next;
    }
    Ok(UniverseChain {
        params: ChainParams {
            kind,
            depth,
            log_cap: cap,
            gap: gap.map(|(a, b)| (a.render(), b.render())),
            truncated_at,
            limit_gap,
        },
        entries,
    })
}

/// `a2, a1∘a2, a1∘a1∘a2, …`, each strictly power-dominated by the one before.
pub fn descending_chain(
    a1: &FactorExpr,
    a2: &FactorExpr,
    k: usize,
    env: &Env,
) -> Result<Vec<FactorExpr>, UniverseError> {
    if cmp_growth(&BoundExpr::constant(2), &a2.expr, env).class != GrowthClass::StrictlyBelow {
        return Err(UniverseError::SideCondition(format!(
            "{} is not unbounded",
            a2.expr
        )));
    }
    let v = ll_pow(&a1.expr, &BoundExpr::Id, env);
    if !v.holds() {
        return Err(UniverseError::SideCondition(format!(
            "{} ≪pow n: {:?}",
            a1.expr, v.outcome
        )));
    }
    let mut out = vec![a2.clone()];
    while out.len() < k {
        let last = out.last().expect("nonempty");
        let next = compose_factor(a1, last, env)?.factor;
        out.push(next);
    }
    Ok(out)
}
