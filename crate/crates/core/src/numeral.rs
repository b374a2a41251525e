//! Naturals that stay exact while they fit a bit budget and degrade to
//! power-tower intervals once they do not.
//!
//! A [`Level`] is `exp2` applied `height` times to `top`. Levels are kept
//! normalized for a fixed budget `B`: either `height == 0`, or `top >= B`
//! (so lowering one step would overflow the budget). Under that rule two
//! normalized levels compare lexicographically by `(height, top)`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

use crate::error::EvalError;

/// Default number of bits an exact value may occupy.
pub const DEFAULT_BUDGET_BITS: u64 = 1 << 20;
/// Smallest budget accepted; tiny budgets are clamped to this.
pub const MIN_BUDGET_BITS: u64 = 8;
/// Towers higher than this are reported as budget exhaustion.
pub const MAX_HEIGHT: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Round {
    Down,
    Up,
}

/// `exp2^height(top)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Level {
    pub height: u32,
    pub top: BigUint,
}

/// Result of comparing two numerals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NumOrd {
    Less,
    Equal,
    Greater,
    Ambiguous,
}

/// A natural number, exact or enclosed by two tower levels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Numeral {
    Exact(BigUint),
    /// The true value `v` satisfies `lo <= v <= hi`.
    Tower {
        lo: Level,
        hi: Level,
    },
}

pub(crate) fn floor_log2(x: &BigUint) -> u64 {
    if x.is_zero() {
        0
    } else {
        x.bits() - 1
    }
}

pub(crate) fn ceil_log2(x: &BigUint) -> u64 {
    if x.is_zero() || x.is_one() {
        return 0;
    }
    let f = x.bits() - 1;
    if x.trailing_zeros() == Some(f) {
        f
    } else {
        f + 1
    }
}

/// `log*` on an exact natural, iterating the ceiling logarithm; `0` and `1` give 1.
pub fn logstar_exact(x: &BigUint) -> u64 {
    let mut m = 1u64;
    let mut v = ceil_log_conv(x);
    while !v.is_one() {
        v = ceil_log_conv(&v);
        m += 1;
    }
    m
}

fn ceil_log_conv(x: &BigUint) -> BigUint {
    if x.bits() <= 1 {
        BigUint::one()
    } else {
        BigUint::from(ceil_log2(x))
    }
}

fn big_lt_u64(x: &BigUint, y: u64) -> bool {
    match x.to_u64() {
        Some(v) => v < y,
        None => false,
    }
}

/// Arithmetic under a fixed bit budget.
#[derive(Clone, Copy, Debug)]
pub struct Arith {
    budget: u64,
}

impl Arith {
    pub fn new(budget_bits: u64) -> Self {
        Arith {
            budget: budget_bits.max(MIN_BUDGET_BITS),
        }
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    fn normalize(&self, mut l: Level, dir: Round) -> Result<Level, EvalError> {
        loop {
            if l.top.bits() > self.budget {
                let t = match dir {
                    Round::Down => floor_log2(&l.top),
                    Round::Up => ceil_log2(&l.top),
                };
                l = Level {
                    height: l.height + 1,
                    top: BigUint::from(t),
                };
                if l.height > MAX_HEIGHT {
                    return Err(EvalError::BudgetExhausted(format!(
                        "tower height above {MAX_HEIGHT}"
                    )));
                }
                continue;
            }
            if l.height > 0 && big_lt_u64(&l.top, self.budget) {
                let t = l.top.to_u64().unwrap_or(0);
                l = Level {
                    height: l.height - 1,
                    top: BigUint::one() << t,
                };
                continue;
            }
            return Ok(l);
        }
    }

    fn exact_level(&self, v: BigUint, dir: Round) -> Result<Level, EvalError> {
        self.normalize(Level { height: 0, top: v }, dir)
    }

    fn make(&self, lo: Level, hi: Level) -> Numeral {
        if lo.height == 0 && lo == hi {
            Numeral::Exact(lo.top)
        } else {
            Numeral::Tower { lo, hi }
        }
    }

    /// Wraps an exact value, switching to a tower once it exceeds the budget.
    pub fn from_big(&self, v: BigUint) -> Result<Numeral, EvalError> {
        let lo = self.exact_level(v.clone(), Round::Down)?;
        let hi = self.exact_level(v, Round::Up)?;
        Ok(self.make(lo, hi))
    }

    pub fn from_u64(&self, v: u64) -> Numeral {
        Numeral::Exact(BigUint::from(v))
    }

    /// `2↑↑k`, with `T(0) = 1`.
    pub fn tower(&self, k: u32) -> Result<Numeral, EvalError> {
        let mut v = self.from_u64(1);
        for _ in 0..k {
            v = self.exp2(&v)?;
        }
        Ok(v)
    }

    fn lvl_exp2(&self, l: &Level) -> Result<Level, EvalError> {
        if l.height + 1 > MAX_HEIGHT {
            return Err(EvalError::BudgetExhausted(format!(
                "tower height above {MAX_HEIGHT}"
            )));
        }
        self.normalize(
            Level {
                height: l.height + 1,
                top: l.top.clone(),
            },
            Round::Down,
        )
    }

    /// Exact binary logarithm rounded in direction `dir` (log of 0 and 1 is 0).
    fn lvl_log2(&self, l: &Level, dir: Round) -> Result<Level, EvalError> {
        if l.height == 0 {
            let v = match dir {
                Round::Down => floor_log2(&l.top),
                Round::Up => ceil_log2(&l.top),
            };
            return Ok(Level {
                height: 0,
                top: BigUint::from(v),
            });
        }
        self.normalize(
            Level {
                height: l.height - 1,
                top: l.top.clone(),
            },
            Round::Down,
        )
    }

    fn lvl_add(&self, a: &Level, b: &Level, dir: Round) -> Result<Level, EvalError> {
        if a.height == 0 && b.height == 0 {
            return self.exact_level(&a.top + &b.top, dir);
        }
        let m = if a >= b { a } else { b };
        match dir {
            Round::Down => Ok(m.clone()),
            Round::Up => self.lvl_double(m),
        }
    }

    fn lvl_double(&self, l: &Level) -> Result<Level, EvalError> {
        if l.height == 0 {
            return self.exact_level(&l.top << 1u32, Round::Up);
        }
        Ok(Level {
            height: l.height,
            top: &l.top + 1u32,
        })
    }

    fn lvl_mul(&self, a: &Level, b: &Level, dir: Round) -> Result<Level, EvalError> {
        let zero = |l: &Level| l.height == 0 && l.top.is_zero();
        if zero(a) || zero(b) {
            return Ok(Level {
                height: 0,
                top: BigUint::zero(),
            });
        }
        if a.height == 0 && b.height == 0 {
            return self.exact_level(&a.top * &b.top, dir);
        }
        let la = self.lvl_log2(a, dir)?;
        let lb = self.lvl_log2(b, dir)?;
        let s = self.lvl_add(&la, &lb, dir)?;
        self.lvl_exp2(&s)
    }

    fn lvl_pow(&self, a: &Level, e: &Level, dir: Round) -> Result<Level, EvalError> {
        let e_zero = e.height == 0 && e.top.is_zero();
        if e_zero || (a.height == 0 && a.top.is_one()) {
            return Ok(Level {
                height: 0,
                top: BigUint::one(),
            });
        }
        if a.height == 0 && a.top.is_zero() {
            return Ok(Level {
                height: 0,
                top: BigUint::zero(),
            });
        }
        if a.height == 0 && e.height == 0 {
            if let Some(k) = e.top.to_u64() {
                if a.top.bits().saturating_mul(k) <= self.budget.saturating_mul(2) {
                    let k = u32::try_from(k).unwrap_or(u32::MAX);
                    return self.exact_level(a.top.pow(k), dir);
                }
            }
        }
        let la = self.lvl_log2(a, dir)?;
        let s = self.lvl_mul(&la, e, dir)?;
        self.lvl_exp2(&s)
    }

    fn lvl_msqrt(&self, l: &Level, dir: Round) -> Result<Level, EvalError> {
        match l.height {
            0 => Ok(Level {
                height: 0,
                top: l.top.sqrt(),
            }),
            1 => {
                let t = &l.top;
                let half = t >> 1u32;
                let odd = t.bit(0);
                let top = if !odd || dir == Round::Down {
                    half
                } else {
                    half + 1u32
                };
                self.normalize(Level { height: 1, top }, dir)
            }
            2 => self.normalize(
                Level {
                    height: 2,
                    top: &l.top - 1u32,
                },
                dir,
            ),
            _ => match dir {
                Round::Down => self.normalize(
                    Level {
                        height: l.height,
                        top: &l.top - 1u32,
                    },
                    dir,
                ),
                Round::Up => Ok(l.clone()),
            },
        }
    }

    fn lvl_logstar(&self, l: &Level) -> u64 {
        if l.height == 0 {
            logstar_exact(&l.top)
        } else if l.top <= BigUint::one() {
            u64::from(l.height)
        } else {
            u64::from(l.height) + logstar_exact(&l.top)
        }
    }

    fn bounds(n: &Numeral) -> (Level, Level) {
        match n {
            Numeral::Exact(v) => {
                let l = Level {
                    height: 0,
                    top: v.clone(),
                };
                (l.clone(), l)
            }
            Numeral::Tower { lo, hi } => (lo.clone(), hi.clone()),
        }
    }

    fn lift2(
        &self,
        a: &Numeral,
        b: &Numeral,
        f: impl Fn(&Self, &Level, &Level, Round) -> Result<Level, EvalError>,
    ) -> Result<Numeral, EvalError> {
        let (alo, ahi) = Self::bounds(a);
        let (blo, bhi) = Self::bounds(b);
        let lo = f(self, &alo, &blo, Round::Down)?;
        let hi = f(self, &ahi, &bhi, Round::Up)?;
        Ok(self.make(lo, hi))
    }

    pub fn add(&self, a: &Numeral, b: &Numeral) -> Result<Numeral, EvalError> {
        self.lift2(a, b, Self::lvl_add)
    }

    pub fn mul(&self, a: &Numeral, b: &Numeral) -> Result<Numeral, EvalError> {
        if let (Numeral::Exact(x), Numeral::Exact(y)) = (a, b) {
            return self.from_big(x * y);
        }
        self.lift2(a, b, Self::lvl_mul)
    }

    /// `a^e`; both arguments are nonnegative so the map is monotone in each.
    pub fn pow(&self, a: &Numeral, e: &Numeral) -> Result<Numeral, EvalError> {
        if let (Numeral::Exact(x), Numeral::Exact(k)) = (a, e) {
            // One exact power serves both rounding directions.
            if let Some(k) = k.to_u32() {
                if x.bits().saturating_mul(u64::from(k)) <= self.budget.saturating_mul(2) {
                    return self.from_big(x.pow(k));
                }
            }
        }
        self.lift2(a, e, Self::lvl_pow)
    }

    pub fn exp2(&self, a: &Numeral) -> Result<Numeral, EvalError> {
        let (lo, hi) = Self::bounds(a);
        Ok(self.make(self.lvl_exp2(&lo)?, self.lvl_exp2(&hi)?))
    }

    /// Ceiling logarithm with `log(0) = log(1) = 1`.
    pub fn log(&self, a: &Numeral) -> Result<Numeral, EvalError> {
        let (lo, hi) = Self::bounds(a);
        let one = Level {
            height: 0,
            top: BigUint::one(),
        };
        let lo = self.lvl_log2(&lo, Round::Up)?.max(one.clone());
        let hi = self.lvl_log2(&hi, Round::Up)?.max(one);
        Ok(self.make(lo, hi))
    }

    /// Floor logarithm with `mlog(0) = 0`.
    pub fn mlog(&self, a: &Numeral) -> Result<Numeral, EvalError> {
        let (lo, hi) = Self::bounds(a);
        Ok(self.make(
            self.lvl_log2(&lo, Round::Down)?,
            self.lvl_log2(&hi, Round::Down)?,
        ))
    }

    /// Floor square root.
    pub fn msqrt(&self, a: &Numeral) -> Result<Numeral, EvalError> {
        let (lo, hi) = Self::bounds(a);
        Ok(self.make(
            self.lvl_msqrt(&lo, Round::Down)?,
            self.lvl_msqrt(&hi, Round::Up)?,
        ))
    }

    pub fn logstar(&self, a: &Numeral) -> Result<Numeral, EvalError> {
        let (lo, hi) = Self::bounds(a);
        let lo = self.lvl_logstar(&lo);
        let hi = self.lvl_logstar(&hi);
        Ok(self.make(
            Level {
                height: 0,
                top: BigUint::from(lo),
            },
            Level {
                height: 0,
                top: BigUint::from(hi),
            },
        ))
    }

    /// Parses `123`, `2^k`, `T(k)` or `2^k+r`.
    pub fn parse(&self, text: &str) -> Result<Numeral, EvalError> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || EvalError::BadNumeral(text.to_string());
        if let Some(inner) = s.strip_prefix("T(").and_then(|r| r.strip_suffix(')')) {
            let k: u32 = inner.parse().map_err(|_| bad())?;
            return self.tower(k);
        }
        let (head, extra) = match s.split_once('+') {
            Some((h, r)) => (h, Some(r.parse::<BigUint>().map_err(|_| bad())?)),
            None => (s.as_str(), None),
        };
        let base = if let Some(k) = head.strip_prefix("2^") {
            let k: Numeral = self.parse(k)?;
            self.exp2(&k)?
        } else {
            Numeral::Exact(head.parse::<BigUint>().map_err(|_| bad())?)
        };
        match extra {
            Some(r) => self.add(&base, &Numeral::Exact(r)),
            None => Ok(base),
        }
    }
}

impl Default for Arith {
    fn default() -> Self {
        Arith::new(DEFAULT_BUDGET_BITS)
    }
}

impl Numeral {
    pub fn from_u64(v: u64) -> Self {
        Numeral::Exact(BigUint::from(v))
    }

    pub fn as_exact(&self) -> Option<&BigUint> {
        match self {
            Numeral::Exact(v) => Some(v),
            Numeral::Tower { lo, hi } if lo == hi && lo.height == 0 => Some(&lo.top),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.as_exact().is_some()
    }

    /// Height of the upper endpoint; 0 for exact values.
    pub fn height(&self) -> u32 {
        match self {
            Numeral::Exact(_) => 0,
            Numeral::Tower { hi, .. } => hi.height,
        }
    }

    fn ends(&self) -> (Level, Level) {
        Arith::bounds(self)
    }

    /// Both numerals must come from the same budget.
    pub fn compare(&self, other: &Numeral) -> NumOrd {
        let (alo, ahi) = self.ends();
        let (blo, bhi) = other.ends();
        if ahi < blo {
            NumOrd::Less
        } else if alo > bhi {
            NumOrd::Greater
        } else if alo == ahi && blo == bhi && alo == blo {
            NumOrd::Equal
        } else {
            NumOrd::Ambiguous
        }
    }

    /// `Some(self <= other)` when decidable.
    pub fn le(&self, other: &Numeral) -> Option<bool> {
        match self.compare(other) {
            NumOrd::Less | NumOrd::Equal => Some(true),
            NumOrd::Greater => Some(false),
            NumOrd::Ambiguous => {
                let (_, ahi) = self.ends();
                let (blo, _) = other.ends();
                if ahi <= blo {
                    Some(true)
                } else {
                    None
                }
            }
        }
    }

    /// Whether the enclosed interval contains `v`.
    pub fn contains(&self, v: &BigUint) -> bool {
        let (lo, hi) = self.ends();
        let val = |l: &Level| -> Option<BigUint> {
            let mut x = l.top.clone();
            for _ in 0..l.height {
                let k = x.to_u64()?;
                if k > 1 << 26 {
                    return None;
                }
                x = BigUint::one() << k;
            }
            Some(x)
        };
        let lo_ok = match val(&lo) {
            Some(x) => &x <= v,
            None => false,
        };
        let hi_ok = match val(&hi) {
            Some(x) => v <= &x,
            None => true,
        };
        lo_ok && hi_ok
    }
}

fn fmt_big(v: &BigUint, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if v.bits() <= 200 {
        write!(f, "{v}")
    } else if v.trailing_zeros() == Some(v.bits() - 1) {
        write!(f, "2^{}", v.bits() - 1)
    } else {
        write!(f, "~2^{}", v.bits() - 1)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.height {
            0 => fmt_big(&self.top, f),
            h => {
                write!(f, "exp2^{h}(")?;
                fmt_big(&self.top, f)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Numeral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Numeral::Exact(v) => fmt_big(v, f),
            Numeral::Tower { lo, hi } if lo == hi => write!(f, "{lo}"),
            Numeral::Tower { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(v: u64) -> Numeral {
        Numeral::from_u64(v)
    }

    #[test]
    fn small_logs() {
        let a = Arith::default();
        assert_eq!(a.log(&ex(0)).unwrap(), ex(1));
        assert_eq!(a.log(&ex(1)).unwrap(), ex(1));
        assert_eq!(a.log(&ex(5)).unwrap(), ex(3));
        assert_eq!(a.log(&ex(16)).unwrap(), ex(4));
        assert_eq!(a.mlog(&ex(0)).unwrap(), ex(0));
        assert_eq!(a.mlog(&ex(17)).unwrap(), ex(4));
        assert_eq!(a.msqrt(&ex(17)).unwrap(), ex(4));
        assert_eq!(a.logstar(&ex(65536)).unwrap(), ex(4));
        assert_eq!(a.logstar(&ex(0)).unwrap(), ex(1));
    }

    #[test]
    fn towers_drop_a_level_under_log() {
        let a = Arith::default();
        for k in 1..=6 {
            let t = a.tower(k).unwrap();
            let below = a.tower(k - 1).unwrap();
            assert_eq!(a.log(&t).unwrap(), below, "k={k}");
            assert_eq!(a.logstar(&t).unwrap(), ex(u64::from(k)), "k={k}");
        }
    }

    #[test]
    fn tower_order_is_strict() {
        let a = Arith::default();
        let ts: Vec<_> = (0..=6).map(|k| a.tower(k).unwrap()).collect();
        for w in ts.windows(2) {
            assert_eq!(w[0].compare(&w[1]), NumOrd::Less);
        }
    }

    #[test]
    fn tiny_budget_intervals_contain_exact() {
        let small = Arith::new(16);
        let big = Arith::default();
        let x = small.parse("123457").unwrap();
        let y = small.mul(&x, &x).unwrap();
        let exact = BigUint::from(123457u64) * BigUint::from(123457u64);
        assert!(y.contains(&exact), "{y}");
        let p = small.pow(&x, &ex(3)).unwrap();
        assert!(p.contains(&BigUint::from(123457u64).pow(3)));
        assert_eq!(big.mul(&x, &x).unwrap(), Numeral::Exact(exact));
    }

    #[test]
    fn parse_forms() {
        let a = Arith::default();
        assert_eq!(a.parse("2^10").unwrap(), ex(1024));
        assert_eq!(a.parse("2^4+3").unwrap(), ex(19));
        assert_eq!(a.parse("T(3)").unwrap(), ex(16));
        assert!(a.parse("T(6)").unwrap().height() > 0);
        assert!(a.parse("x").is_err());
    }
}
