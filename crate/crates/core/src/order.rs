//! Binary words under lexicographic order, dyadic values, cuts and their
//! Cantor-sequence codes.
//!
//! `B` is the set of binary words that are empty or end in `1`. A cut splits
//! `B` into a nonempty lower segment and a nonempty upper segment.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::OrderError;
use crate::universe::{Address, UniverseChain};

/// A word of `B`. Displays as its bits, or `Λ` when empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BinWord(Vec<bool>);

impl BinWord {
    pub fn empty() -> Self {
        BinWord(Vec::new())
    }

    pub fn new(bits: Vec<bool>) -> Result<Self, OrderError> {
        match bits.last() {
            Some(false) => Err(OrderError::NotInB(bits_str(&bits))),
            _ => Ok(BinWord(bits)),
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every word of `B` with at most `max_len` letters, in lexicographic order.
    pub fn all_up_to(max_len: usize) -> Vec<BinWord> {
        let mut out = vec![BinWord::empty()];
        for len in 1..=max_len {
            for v in 0u64..(1 << (len - 1)) {
                let mut bits: Vec<bool> = (0..len - 1).rev().map(|i| v >> i & 1 == 1).collect();
                bits.push(true);
                out.push(BinWord(bits));
            }
        }
        out.sort_by(lex_cmp);
        out
    }
}

fn bits_str(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn parse_bits(s: &str, what: &'static str) -> Result<Vec<bool>, OrderError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(OrderError::Parse {
                what,
                input: s.to_string(),
            }),
        })
        .collect()
}

impl FromStr for BinWord {
    type Err = OrderError;

    /// Accepts `Λ`, `L`, `-` or the empty string for the empty word.
    fn from_str(s: &str) -> Result<Self, OrderError> {
        let s = s.trim();
        if matches!(s, "" | "Λ" | "L" | "-") {
            return Ok(BinWord::empty());
        }
        BinWord::new(parse_bits(s, "binary word")?)
    }
}

impl fmt::Display for BinWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("Λ")
        } else {
            f.write_str(&bits_str(&self.0))
        }
    }
}

impl Serialize for BinWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `w1 ≤lex w2`: `w1` is a prefix of `w2`, or `w1 = u0v` and `w2 = u1v'`.
pub fn lex_cmp(w1: &BinWord, w2: &BinWord) -> Ordering {
    for (a, b) in w1.0.iter().zip(&w2.0) {
        if a != b {
            return a.cmp(b);
        }
    }
    w1.len().cmp(&w2.len())
}

impl PartialOrd for BinWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BinWord {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_cmp(self, other)
    }
}

/// `num / 2^exp`, kept reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigUint,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: BigUint, exp: u32) -> Self {
        let mut d = Dyadic { num, exp };
        while d.exp > 0 && d.num.is_even() {
            d.num >>= 1u32;
            d.exp -= 1;
        }
        if d.num.is_zero() {
            d.exp = 0;
        }
        d
    }

    pub fn zero() -> Self {
        Dyadic::new(BigUint::zero(), 0)
    }

    pub fn one() -> Self {
        Dyadic::new(BigUint::one(), 0)
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn midpoint(&self, other: &Dyadic) -> Dyadic {
        let e = self.exp.max(other.exp) + 1;
        let a = &self.num << (e - self.exp);
        let b = &other.num << (e - other.exp);
        Dyadic::new((a + b) >> 1u32, e)
    }

    /// The word of `B` whose value this is; `None` for 1 and beyond.
    pub fn to_word(&self) -> Option<BinWord> {
        if self.num >= (BigUint::one() << self.exp) {
            return None;
        }
        let e = self.exp as u64;
        let bits = (0..e).rev().map(|i| self.num.bit(i)).collect();
        BinWord::new(bits).ok()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        (&self.num << (e - self.exp)).cmp(&(&other.num << (e - other.exp)))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Dyadic {
    type Err = OrderError;

    /// `p/2^k`, `p/q` with `q` a power of two, or an integer.
    fn from_str(s: &str) -> Result<Self, OrderError> {
        let bad = || OrderError::NotDyadic(s.to_string());
        let t = s.trim();
        let (p, exp) = match t.split_once('/') {
            None => (t, 0),
            Some((p, q)) => {
                let q = q.trim();
                let exp = if let Some(k) = q.strip_prefix("2^") {
                    k.trim().parse::<u32>().map_err(|_| bad())?
                } else {
                    let q: BigUint = q.parse().map_err(|_| bad())?;
                    if q.is_zero() || q.count_ones() != 1 {
                        return Err(bad());
                    }
                    (q.bits() - 1) as u32
                };
                (p.trim(), exp)
            }
        };
        let num: BigUint = p.parse().map_err(|_| bad())?;
        Ok(Dyadic::new(num, exp))
    }
}

/// `val(w)`: the `i`-th letter, read left to right, contributes `2^-i`.
pub fn val(w: &BinWord) -> Dyadic {
    let mut num = BigUint::zero();
    for &b in &w.0 {
        num <<= 1u32;
        if b {
            num += 1u32;
        }
    }
    Dyadic::new(num, w.len() as u32)
}

/// An eventually constant 0/1 sequence: `prefix` followed by `tail` forever.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CantorSeq {
    prefix: Vec<bool>,
    tail: bool,
}

impl CantorSeq {
    /// Canonical form: trailing prefix letters equal to the tail are dropped.
    pub fn new(mut prefix: Vec<bool>, tail: bool) -> Self {
        while prefix.last() == Some(&tail) {
            prefix.pop();
        }
        CantorSeq { prefix, tail }
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn tail(&self) -> bool {
        self.tail
    }

    pub fn bit(&self, i: usize) -> bool {
        self.prefix.get(i).copied().unwrap_or(self.tail)
    }
}

impl Ord for CantorSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.prefix.len().max(other.prefix.len()) + 1;
        (0..n)
            .map(|i| self.bit(i).cmp(&other.bit(i)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

impl PartialOrd for CantorSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CantorSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", bits_str(&self.prefix), u8::from(self.tail))
    }
}

impl Serialize for CantorSeq {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for CantorSeq {
    type Err = OrderError;

    /// `101(0)`: prefix bits, then the repeated tail bit in parentheses.
    fn from_str(s: &str) -> Result<Self, OrderError> {
        let bad = || OrderError::Parse {
            what: "Cantor sequence",
            input: s.to_string(),
        };
        let t = s.trim();
        let (prefix, rest) = t.split_once('(').ok_or_else(bad)?;
        let tail = match rest {
            "0)" => false,
            "1)" => true,
            _ => return Err(bad()),
        };
        Ok(CantorSeq::new(parse_bits(prefix, "Cantor sequence")?, tail))
    }
}

/// A cut of `B`, described by its lower segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cut {
    /// Lower segment `{Λ}`.
    Bottom,
    /// Lower segment `{u : u ≤lex w}`, `w ≠ Λ`.
    Incl(BinWord),
    /// Lower segment `{u : u <lex w}`, `w ≠ Λ`.
    Excl(BinWord),
    /// Lower segment given by its words of length at most `max_len`.
    Finite {
        max_len: usize,
        words: BTreeSet<BinWord>,
    },
}

impl Cut {
    pub fn incl(w: BinWord) -> Self {
        if w.is_empty() {
            Cut::Bottom
        } else {
            Cut::Incl(w)
        }
    }

    pub fn excl(w: BinWord) -> Result<Self, OrderError> {
        if w.is_empty() {
            Err(OrderError::InvalidCut(
                "excl:Λ has an empty lower segment".into(),
            ))
        } else {
            Ok(Cut::Excl(w))
        }
    }

    /// Reduces a finite description to the principal cut at its largest word.
    pub fn principal(&self) -> Result<Cut, OrderError> {
        match self {
            Cut::Finite { max_len, words } => {
                let all = BinWord::all_up_to(*max_len);
                if words.iter().any(|w| w.len() > *max_len) {
                    return Err(OrderError::InvalidCut(format!(
                        "word longer than {max_len}"
                    )));
                }
                let max = words
                    .iter()
                    .max()
                    .ok_or_else(|| OrderError::InvalidCut("empty lower segment".into()))?;
                let closed = all
                    .iter()
                    .take_while(|u| *u <= max)
                    .all(|u| words.contains(u));
                if !closed {
                    return Err(OrderError::InvalidCut(format!(
                        "not downward closed among words of length at most {max_len}"
                    )));
                }
                Ok(Cut::incl(max.clone()))
            }
            c => Ok(c.clone()),
        }
    }

    /// Membership of `u` in the lower segment.
    pub fn contains(&self, u: &BinWord) -> bool {
        match self {
            Cut::Bottom => u.is_empty(),
            Cut::Incl(w) => u <= w,
            Cut::Excl(w) => u < w,
            Cut::Finite { .. } => self.principal().is_ok_and(|c| c.contains(u)),
        }
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cut::Bottom => f.write_str("bottom"),
            Cut::Incl(w) => write!(f, "incl:{w}"),
            Cut::Excl(w) => write!(f, "excl:{w}"),
            Cut::Finite { max_len, words } => {
                let ws: Vec<String> = words.iter().map(|w| w.to_string()).collect();
                write!(f, "finite{max_len}:{}", ws.join(","))
            }
        }
    }
}

impl Serialize for Cut {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Cut {
    type Err = OrderError;

    /// `bottom`, `incl:101` or `excl:101`.
    fn from_str(s: &str) -> Result<Self, OrderError> {
        let t = s.trim();
        if t == "bottom" {
            return Ok(Cut::Bottom);
        }
        match t.split_once(':') {
            Some(("incl", w)) => Ok(Cut::incl(w.parse()?)),
            Some(("excl", w)) => Cut::excl(w.parse()?),
            _ => Err(OrderError::Parse {
                what: "cut",
                input: s.to_string(),
            }),
        }
    }
}

/// The Cantor code of a cut: every word of the lower segment is a prefix-wise
/// lower approximation of it.
pub fn cut_to_cantor(c: &Cut) -> Result<CantorSeq, OrderError> {
    Ok(match c.principal()? {
        Cut::Bottom => CantorSeq::new(Vec::new(), false),
        // max of the lower segment is w = u1: code u10^∞
        Cut::Incl(w) => CantorSeq::new(w.0, false),
        // min of the upper segment is w = u1: code u01^∞
        Cut::Excl(w) => {
            let mut bits = w.0;
            bits.pop();
            bits.push(false);
            CantorSeq::new(bits, true)
        }
        Cut::Finite { .. } => unreachable!("principal() removes finite descriptions"),
    })
}

pub fn cantor_to_cut(f: &CantorSeq) -> Result<Cut, OrderError> {
    let f = CantorSeq::new(f.prefix.clone(), f.tail);
    match (f.tail, f.prefix.is_empty()) {
        (false, true) => Ok(Cut::Bottom),
        (false, false) => Ok(Cut::Incl(BinWord(f.prefix))),
        (true, true) => Err(OrderError::NoCut),
        (true, false) => {
            let mut bits = f.prefix;
            bits.pop();
            bits.push(true);
            Ok(Cut::Excl(BinWord(bits)))
        }
    }
}

/// Binary expansion of a dyadic in `[0,1]`, with a zero tail below 1.
pub fn real_to_cantor(r: &Dyadic) -> Result<CantorSeq, OrderError> {
    if *r > Dyadic::one() {
        return Err(OrderError::NotDyadic(r.to_string()));
    }
    if *r == Dyadic::one() {
        return Ok(CantorSeq::new(Vec::new(), true));
    }
    let e = r.exp as u64;
    Ok(CantorSeq::new(
        (0..e).rev().map(|i| r.num.bit(i)).collect(),
        false,
    ))
}

/// The order structure of a generated chain: the chain itself, its
/// downward-closed sets with the cut each one determines, the Cantor codes of
/// those cuts and of any extra `cuts`, and the chain as DOT.
#[derive(Clone, Debug, Serialize)]
pub struct OrderExport {
    pub chain: serde_json::Value,
    pub cuts: Vec<CutRow>,
    #[serde(skip)]
    pub dot: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CutRow {
    pub cut: String,
    /// `None` for the whole chain, whose upper segment is empty.
    pub cantor: Option<String>,
    /// Chain addresses in the lower segment.
    pub lower: Vec<String>,
    /// Supplied by the caller rather than read off the chain.
    pub extra: bool,
}

pub fn export_order(chain: &UniverseChain, cuts: &[Cut]) -> Result<OrderExport, OrderError> {
    let addresses: Vec<&Address> = chain.entries.iter().map(|e| &e.address).collect();
    let lower_of = |c: &Cut| -> Vec<String> {
        addresses
            .iter()
            .filter(|a| match a {
                Address::Word(w) => c.contains(w),
                Address::Top => false,
            })
            .map(|a| a.to_string())
            .collect()
    };
    let mut rows = Vec::new();
    for a in &addresses {
        match a {
            Address::Word(w) => {
                let mut here = Vec::new();
                if !w.is_empty() {
                    here.push(Cut::Excl(w.clone()));
                }
                here.push(Cut::incl(w.clone()));
                for c in here {
                    rows.push(CutRow {
                        cantor: Some(cut_to_cantor(&c)?.to_string()),
                        lower: lower_of(&c),
                        cut: c.to_string(),
                        extra: false,
                    });
                }
            }
            Address::Top => rows.push(CutRow {
                cut: "all".into(),
                cantor: None,
                lower: addresses.iter().map(|a| a.to_string()).collect(),
                extra: false,
            }),
        }
    }
    for c in cuts {
        rows.push(CutRow {
            cantor: Some(cut_to_cantor(c)?.to_string()),
            lower: lower_of(c),
            cut: c.to_string(),
            extra: true,
        });
    }
    Ok(OrderExport {
        chain: chain.to_json(),
        cuts: rows,
        dot: chain.to_dot(),
    })
}
