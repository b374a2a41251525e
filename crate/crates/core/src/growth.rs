//! Symbolic growth normal forms.
//!
//! Every base is `log⟨i⟩(log*⟨j⟩(n))`. Bases are graded: smaller `j` wins,
//! then smaller `i`; each base dominates every power of all later ones.
//! A [`GrowthIndex`] is a finite product of bases with dyadic exponents.
//!
//! A [`Form`] describes a function up to constant factors: `poly` is a
//! product of bases, and `exp`, when present, an extra factor `2^Θ(exp)`.
//! The index of a factor, `mlog ∘ α` up to constant factors, decides the
//! power relations between factors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::expr::BoundExpr;

/// `log⟨logs⟩ ∘ log*⟨stars⟩` applied to `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Base {
    pub logs: u32,
    pub stars: u32,
}

impl Base {
    pub const N: Base = Base { logs: 0, stars: 0 };

    fn bump(self) -> Base {
        Base {
            logs: self.logs + 1,
            stars: self.stars,
        }
    }
}

impl Ord for Base {
    /// Dominant bases sort first.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.stars, self.logs).cmp(&(other.stars, other.logs))
    }
}

impl PartialOrd for Base {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let logs = match self.logs {
            0 => String::new(),
            1 => "log".into(),
            i => format!("log<{i}>"),
        };
        let star = match self.stars {
            0 => String::new(),
            1 => "log*".into(),
            j => format!("log*<{j}>"),
        };
        match (logs.is_empty(), star.is_empty()) {
            (true, true) => write!(f, "n"),
            (false, true) => write!(f, "{logs}"),
            (true, false) => write!(f, "{star}"),
            (false, false) => write!(f, "{logs}∘{star}"),
        }
    }
}

/// Formal product of graded bases with rational exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GrowthIndex(BTreeMap<Base, BigRational>);

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

impl GrowthIndex {
    pub fn constant() -> Self {
        GrowthIndex(BTreeMap::new())
    }

    pub fn base(b: Base) -> Self {
        let mut m = BTreeMap::new();
        m.insert(b, BigRational::one());
        GrowthIndex(m)
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Base, &BigRational)> {
        self.0.iter()
    }

    pub fn exponent(&self, b: Base) -> BigRational {
        self.0.get(&b).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Dominant base with its exponent.
    pub fn lead(&self) -> Option<(Base, BigRational)> {
        self.0.iter().next().map(|(b, e)| (*b, e.clone()))
    }

    fn combine(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        let mut out = BTreeMap::new();
        for b in self.0.keys().chain(other.0.keys()) {
            let v = f(&self.exponent(*b), &other.exponent(*b));
            if !v.is_zero() {
                out.insert(*b, v);
            }
        }
        GrowthIndex(out)
    }

    pub fn product(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn quotient(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        self.combine(&GrowthIndex::constant(), |a, _| a * k)
    }

    /// Exponentwise average.
    pub fn midpoint(&self, other: &Self) -> Self {
        self.product(other).scale(&half())
    }

    /// Index of the logarithm of this product: the dominant base, one log deeper.
    pub fn log(&self) -> Self {
        match self.lead() {
            Some((b, _)) => GrowthIndex::base(b.bump()),
            None => GrowthIndex::constant(),
        }
    }

    /// Growth order: `Greater` means the quotient `self/other` is unbounded.
    pub fn cmp_growth(&self, other: &Self) -> Ordering {
        match self.quotient(other).lead() {
            None => Ordering::Equal,
            Some((_, e)) if e.is_positive() => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }
}

impl fmt::Display for GrowthIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (b, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            if e.is_one() {
                write!(f, "{b}")?;
            } else {
                write!(f, "({b})^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for GrowthIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A function up to constant factors: `Π poly · 2^Θ(exp)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    pub poly: GrowthIndex,
    pub exp: Option<GrowthIndex>,
}

impl Form {
    pub fn n() -> Self {
        Form {
            poly: GrowthIndex::base(Base::N),
            exp: None,
        }
    }

    pub fn constant() -> Self {
        Form {
            poly: GrowthIndex::constant(),
            exp: None,
        }
    }

    fn new(poly: GrowthIndex, exp: Option<GrowthIndex>) -> Self {
        let exp = exp.filter(|e| !e.is_constant());
        match exp {
            Some(e) if e.cmp_growth(&poly.log()) != Ordering::Less => Form {
                poly: GrowthIndex::constant(),
                exp: Some(e),
            },
            exp => Form { poly, exp },
        }
    }

    /// Index of `mlog` of this function.
    pub fn log_index(&self) -> GrowthIndex {
        let p = self.poly.log();
        match &self.exp {
            Some(e) if e.cmp_growth(&p) == Ordering::Greater => e.clone(),
            _ => p,
        }
    }

    fn log(&self) -> Form {
        Form::new(self.log_index(), None)
    }

    fn exp2(&self) -> Option<Form> {
        if self.exp.is_some() {
            return None;
        }
        Some(Form::new(GrowthIndex::constant(), Some(self.poly.clone())))
    }

    fn logstar(&self) -> Form {
        match self.log_index().lead() {
            None => Form::constant(),
            Some((b, _)) => Form::new(
                GrowthIndex::base(Base {
                    logs: 0,
                    stars: b.stars + 1,
                }),
                None,
            ),
        }
    }

    fn mul(&self, other: &Form) -> Form {
        let exp = match (&self.exp, &other.exp) {
            (Some(a), Some(b)) => Some(if a.cmp_growth(b) == Ordering::Less {
                b.clone()
            } else {
                a.clone()
            }),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        Form::new(self.poly.product(&other.poly), exp)
    }

    fn scale(&self, k: BigRational) -> Form {
        if k.is_zero() {
            return Form::constant();
        }
        Form::new(self.poly.scale(&k), self.exp.clone())
    }

    fn mid(&self, other: &Form) -> Form {
        Form::new(
            GrowthIndex::constant(),
            Some(self.log_index().midpoint(&other.log_index())),
        )
    }

    /// `2^Θ(e)` also describes `self + other` when `log(other) = O(e)`.
    fn absorb(&self, other: &Form) -> Option<Form> {
        let e = self.exp.as_ref()?;
        (e.cmp_growth(&other.log_index()) != Ordering::Less).then(|| self.clone())
    }

    /// `Less`: `self/other → 0`; `Equal`: bounded both ways; `Greater`: `→ ∞`.
    /// `None` when the forms cannot separate the two.
    pub fn compare(&self, other: &Form) -> Option<Ordering> {
        let d = self.poly.quotient(&other.poly);
        let sign = || match d.lead() {
            None => Ordering::Equal,
            Some((_, e)) if e.is_positive() => Ordering::Greater,
            Some(_) => Ordering::Less,
        };
        let (dominant, toward) = match (&self.exp, &other.exp) {
            (None, None) => return Some(sign()),
            (Some(a), Some(b)) => match a.cmp_growth(b) {
                Ordering::Equal => return None,
                Ordering::Greater => (a, Ordering::Greater),
                Ordering::Less => (b, Ordering::Less),
            },
            (Some(a), None) => (a, Ordering::Greater),
            (None, Some(b)) => (b, Ordering::Less),
        };
        match dominant.cmp_growth(&d.log()) {
            Ordering::Greater => Some(toward),
            Ordering::Less => Some(sign()),
            Ordering::Equal if d.is_constant() => Some(toward),
            Ordering::Equal => None,
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exp {
            None => write!(f, "{}", self.poly),
            Some(e) if self.poly.is_constant() => write!(f, "2^Θ({e})"),
            Some(e) => write!(f, "{}·2^Θ({e})", self.poly),
        }
    }
}

/// Normal form of `e` with `n` replaced by a function of shape `arg`.
pub fn normalize_at(e: &BoundExpr, arg: &Form) -> Option<Form> {
    use BoundExpr as E;
    Some(match e {
        E::Id => arg.clone(),
        E::Const(c) if c.is_zero() => return None,
        E::Const(_) => Form::constant(),
        E::Add(a, b) => {
            let fa = normalize_at(a, arg)?;
            let fb = normalize_at(b, arg)?;
            match fa.compare(&fb) {
                Some(Ordering::Less) => fb,
                Some(_) => fa,
                None => fa.absorb(&fb).or_else(|| fb.absorb(&fa))?,
            }
        }
        E::Mul(a, b) => normalize_at(a, arg)?.mul(&normalize_at(b, arg)?),
        E::PowConst(a, k) => normalize_at(a, arg)?.scale(BigRational::from_integer((*k).into())),
        E::Exp2 => arg.exp2()?,
        E::Log | E::MLog => arg.log(),
        E::MSqrt => arg.scale(half()),
        E::LogStar => arg.logstar(),
        // 2^⌊log x⌋ lies in (x/2, x].
        E::Compose(o, i) if **o == E::Exp2 && matches!(**i, E::Log | E::MLog) => arg.clone(),
        E::Compose(o, i) => normalize_at(o, &normalize_at(i, arg)?)?,
        E::Iterate(b, m) => {
            let mut cur = arg.clone();
            for _ in 0..*m {
                cur = normalize_at(b, &cur)?;
            }
            cur
        }
        E::Mid(a, b) => normalize_at(a, arg)?.mid(&normalize_at(b, arg)?),
        E::Type1(a) => arg.mul(&normalize_at(a, arg)?),
        E::Type2(a) => normalize_at(a, arg)?.mul(&arg.log()).exp2()?,
    })
}

/// Normal form of `e` as a function of `n`.
pub fn form_of(e: &BoundExpr) -> Option<Form> {
    normalize_at(e, &Form::n())
}

/// Form of `log e` with `n` replaced by a function of shape `arg`. Covers
/// bounds whose own form is out of reach, such as `n^α` with an exponential
/// factor `α`, since `log(n^α) = α·log n`.
pub fn log_form_at(e: &BoundExpr, arg: &Form) -> Option<Form> {
    use BoundExpr as E;
    let direct = || normalize_at(e, arg).map(|f| f.log());
    match e {
        E::Exp2 => Some(arg.clone()),
        E::Type2(a) => Some(normalize_at(a, arg)?.mul(&arg.log())),
        E::Type1(a) => max_form(arg.log(), log_form_at(a, arg)?),
        // log(a·b) and log(a+b) are both Θ(max(log a, log b)).
        E::Add(a, b) | E::Mul(a, b) => {
            direct().or_else(|| max_form(log_form_at(a, arg)?, log_form_at(b, arg)?))
        }
        E::PowConst(a, _) => log_form_at(a, arg),
        E::Compose(o, i) => match normalize_at(i, arg) {
            Some(fi) => log_form_at(o, &fi),
            // An outer n^Θ(1) keeps the logarithm of the inner bound.
            None if log_form_at(o, &Form::n())?.compare(&Form::n().log())
                == Some(Ordering::Equal) =>
            {
                log_form_at(i, arg)
            }
            None => None,
        },
        E::Iterate(b, m) => {
            let mut cur = arg.clone();
            for _ in 1..*m {
                cur = normalize_at(b, &cur)?;
            }
            log_form_at(b, &cur)
        }
        _ => direct(),
    }
}

/// Form of `log e` as a function of `n`.
pub fn log_form(e: &BoundExpr) -> Option<Form> {
    log_form_at(e, &Form::n())
}

fn max_form(a: Form, b: Form) -> Option<Form> {
    match a.compare(&b) {
        Some(Ordering::Less) => Some(b),
        Some(_) => Some(a),
        None => a.absorb(&b).or_else(|| b.absorb(&a)),
    }
}

/// Growth index of `mlog ∘ α`, the power class of the factor `α`.
pub fn factor_index(alpha: &BoundExpr) -> Option<GrowthIndex> {
    form_of(alpha).map(|f| f.log_index())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(s: &str) -> GrowthIndex {
        factor_index(&BoundExpr::parse(s).unwrap()).unwrap()
    }

    fn form(s: &str) -> Form {
        form_of(&BoundExpr::parse(s).unwrap()).unwrap()
    }

    fn b(logs: u32, stars: u32) -> Base {
        Base { logs, stars }
    }

    #[test]
    fn factor_indexes() {
        assert!(idx("2").is_constant());
        assert_eq!(idx("n"), GrowthIndex::base(b(1, 0)));
        assert_eq!(idx("log"), GrowthIndex::base(b(2, 0)));
        assert_eq!(idx("log{2}"), GrowthIndex::base(b(3, 0)));
        assert_eq!(idx("logstar"), GrowthIndex::base(b(1, 1)));
        assert_eq!(idx("log(logstar)"), GrowthIndex::base(b(2, 1)));
        assert_eq!(idx("logstar(logstar)"), GrowthIndex::base(b(1, 2)));
        assert_eq!(idx("log^2"), idx("log"));
        let m = idx("mid(logstar,log)");
        assert_eq!(m.exponent(b(2, 0)), half());
        assert_eq!(m.exponent(b(1, 1)), half());
        assert_eq!(idx("mid(2,n)").exponent(b(1, 0)), half());
    }

    #[test]
    fn grading_orders_factors() {
        let chain = [
            "2",
            "logstar(logstar)",
            "log(logstar)",
            "logstar",
            "log{3}",
            "log{2}",
            "log",
            "n",
        ];
        for w in chain.windows(2) {
            assert_eq!(
                idx(w[0]).cmp_growth(&idx(w[1])),
                Ordering::Less,
                "{} vs {}",
                w[0],
                w[1]
            );
        }
        assert_eq!(
            idx("mid(logstar,log)").cmp_growth(&idx("log")),
            Ordering::Less
        );
        assert_eq!(
            idx("mid(logstar,log)").cmp_growth(&idx("log{2}")),
            Ordering::Greater
        );
    }

    #[test]
    fn bound_forms_compare() {
        let cmp = |a: &str, c: &str| form(a).compare(&form(c));
        assert_eq!(cmp("type1(log)", "n^2"), Some(Ordering::Less));
        assert_eq!(cmp("2*n", "3*n"), Some(Ordering::Equal));
        assert_eq!(cmp("n^2", "type1(log)"), Some(Ordering::Greater));
        assert_eq!(cmp("n^2", "type2(log)"), Some(Ordering::Less));
        assert_eq!(cmp("type2(log)", "exp2"), Some(Ordering::Less));
        assert_eq!(
            cmp("iter(type1(log),2)", "type1(log^2)"),
            Some(Ordering::Equal)
        );
        assert_eq!(cmp("type1(mid(2,log))", "n"), Some(Ordering::Greater));
        assert_eq!(cmp("2*n", "n"), Some(Ordering::Equal));
        assert_eq!(cmp("type2(2)", "type2(3)"), None);
    }
}
