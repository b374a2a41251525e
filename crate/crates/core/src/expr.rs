//! Bound expressions: tree, parser, printer and evaluator.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! e := e + e | e * e | e ^ k | n | <integer> | name | name(e)
//!    | log{m} | log{m}(e) | comp(e,e) | iter(e,m) | mid(e,e) | type1(e) | type2(e)
//! name := exp2 | log | mlog | msqrt | logstar
//! ```
//!
//! A bare primitive name denotes the function of `n`; `name(e)` is its
//! composition with `e`.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Serialize, Serializer};
use std::fmt;

use crate::error::{EvalError, ParseError};
use crate::numeral::{Arith, Numeral};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoundExpr {
    Id,
    Const(BigUint),
    Add(Box<BoundExpr>, Box<BoundExpr>),
    Mul(Box<BoundExpr>, Box<BoundExpr>),
    PowConst(Box<BoundExpr>, u32),
    Exp2,
    Log,
    MLog,
    MSqrt,
    LogStar,
    Compose(Box<BoundExpr>, Box<BoundExpr>),
    Iterate(Box<BoundExpr>, u32),
    Mid(Box<BoundExpr>, Box<BoundExpr>),
    Type1(Box<BoundExpr>),
    Type2(Box<BoundExpr>),
}

/// Declared (never machine-checked) constructibility bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Attributes {
    pub constructible: bool,
    pub linear_time_constructible: bool,
}

use BoundExpr as E;

impl BoundExpr {
    pub fn constant(c: u64) -> Self {
        E::Const(BigUint::from(c))
    }

    // Constructors, not arithmetic on values.
    #[allow(clippy::should_implement_trait)]
    pub fn add(a: BoundExpr, b: BoundExpr) -> Self {
        E::Add(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: BoundExpr, b: BoundExpr) -> Self {
        E::Mul(Box::new(a), Box::new(b))
    }

    pub fn pow(a: BoundExpr, k: u32) -> Self {
        E::PowConst(Box::new(a), k)
    }

    /// `outer ∘ inner`, dropping identity on either side.
    pub fn compose(outer: BoundExpr, inner: BoundExpr) -> Self {
        match (outer, inner) {
            (E::Id, x) | (x, E::Id) => x,
            (o, i) => E::Compose(Box::new(o), Box::new(i)),
        }
    }

    /// `m`-fold iteration; `m` must be positive.
    pub fn iterate(body: BoundExpr, m: u32) -> Self {
        assert!(m >= 1, "iteration count must be positive");
        E::Iterate(Box::new(body), m)
    }

    /// `log⟨m⟩`, with `log⟨1⟩ = log`.
    pub fn log_iter(m: u32) -> Self {
        if m == 1 {
            E::Log
        } else {
            Self::iterate(E::Log, m)
        }
    }

    pub fn mid(a: BoundExpr, b: BoundExpr) -> Self {
        E::Mid(Box::new(a), Box::new(b))
    }

    pub fn type1(a: BoundExpr) -> Self {
        E::Type1(Box::new(a))
    }

    pub fn type2(a: BoundExpr) -> Self {
        E::Type2(Box::new(a))
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse(text)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        render_into(self, 0, &mut s);
        s
    }

    /// True when the tree contains no Type1/Type2 node.
    pub fn is_factor_grammar(&self) -> bool {
        match self {
            E::Type1(_) | E::Type2(_) => false,
            E::Add(a, b) | E::Mul(a, b) | E::Compose(a, b) | E::Mid(a, b) => {
                a.is_factor_grammar() && b.is_factor_grammar()
            }
            E::PowConst(a, _) | E::Iterate(a, _) => a.is_factor_grammar(),
            _ => true,
        }
    }

    pub fn attributes(&self) -> Attributes {
        let both = |a: Attributes, b: Attributes| Attributes {
            constructible: a.constructible && b.constructible,
            linear_time_constructible: a.linear_time_constructible && b.linear_time_constructible,
        };
        let yes = Attributes {
            constructible: true,
            linear_time_constructible: true,
        };
        let no = Attributes {
            constructible: false,
            linear_time_constructible: false,
        };
        match self {
            E::Id | E::Exp2 | E::Type1(_) | E::Type2(_) => yes,
            E::Add(c, f) | E::Add(f, c) | E::Mul(c, f) | E::Mul(f, c)
                if matches!(**c, E::Const(_)) =>
            {
                f.attributes()
            }
            E::Add(a, b) | E::Mul(a, b) | E::Compose(a, b) => both(a.attributes(), b.attributes()),
            E::PowConst(a, _) | E::Iterate(a, _) => a.attributes(),
            _ => no,
        }
    }

    pub fn eval(&self, n: &Numeral, ar: &Arith) -> Result<Numeral, EvalError> {
        eval(self, n, ar)
    }
}

impl fmt::Display for BoundExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for BoundExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

fn eval(e: &BoundExpr, n: &Numeral, ar: &Arith) -> Result<Numeral, EvalError> {
    Ok(match e {
        E::Id => n.clone(),
        E::Const(c) => ar.from_big(c.clone())?,
        E::Add(a, b) => ar.add(&eval(a, n, ar)?, &eval(b, n, ar)?)?,
        E::Mul(a, b) => ar.mul(&eval(a, n, ar)?, &eval(b, n, ar)?)?,
        E::PowConst(a, k) => ar.pow(&eval(a, n, ar)?, &Numeral::from_u64(u64::from(*k)))?,
        E::Exp2 => ar.exp2(n)?,
        E::Log => ar.log(n)?,
        E::MLog => ar.mlog(n)?,
        E::MSqrt => ar.msqrt(n)?,
        E::LogStar => ar.logstar(n)?,
        E::Compose(o, i) => eval(o, &eval(i, n, ar)?, ar)?,
        E::Iterate(b, m) => {
            let mut v = n.clone();
            for _ in 0..*m {
                v = eval(b, &v, ar)?;
            }
            v
        }
        E::Mid(a, b) => {
            let la = ar.mlog(&eval(a, n, ar)?)?;
            let lb = ar.mlog(&eval(b, n, ar)?)?;
            ar.exp2(&ar.msqrt(&ar.mul(&la, &lb)?)?)?
        }
        E::Type1(a) => ar.mul(n, &eval(a, n, ar)?)?,
        E::Type2(a) => ar.pow(n, &eval(a, n, ar)?)?,
    })
}

// ---------- printing ----------

const P_ADD: u8 = 1;
const P_MUL: u8 = 2;
const P_POW: u8 = 3;

fn prec(e: &BoundExpr) -> u8 {
    match e {
        E::Add(..) => P_ADD,
        E::Mul(..) => P_MUL,
        E::PowConst(..) => P_POW,
        _ => 4,
    }
}

fn prim_name(e: &BoundExpr) -> Option<String> {
    Some(match e {
        E::Exp2 => "exp2".into(),
        E::Log => "log".into(),
        E::MLog => "mlog".into(),
        E::MSqrt => "msqrt".into(),
        E::LogStar => "logstar".into(),
        E::Iterate(b, m) if **b == E::Log && *m >= 2 => format!("log{{{m}}}"),
        _ => return None,
    })
}

fn render_into(e: &BoundExpr, min_prec: u8, out: &mut String) {
    let p = prec(e);
    let paren = p < min_prec;
    if paren {
        out.push('(');
    }
    match e {
        E::Id => out.push('n'),
        E::Const(c) => out.push_str(&c.to_string()),
        E::Add(a, b) => {
            render_into(a, P_ADD, out);
            out.push('+');
            render_into(b, P_ADD + 1, out);
        }
        E::Mul(a, b) => {
            render_into(a, P_MUL, out);
            out.push('*');
            render_into(b, P_MUL + 1, out);
        }
        E::PowConst(a, k) => {
            render_into(a, P_POW + 1, out);
            out.push('^');
            out.push_str(&k.to_string());
        }
        E::Compose(o, i) => match prim_name(o) {
            Some(name) => {
                out.push_str(&name);
                out.push('(');
                render_into(i, 0, out);
                out.push(')');
            }
            None => call(out, "comp", &[o, i]),
        },
        E::Iterate(b, m) => match prim_name(e) {
            Some(name) => out.push_str(&name),
            None => {
                out.push_str("iter(");
                render_into(b, 0, out);
                out.push_str(&format!(",{m})"));
            }
        },
        E::Mid(a, b) => call(out, "mid", &[a, b]),
        E::Type1(a) => call(out, "type1", &[a]),
        E::Type2(a) => call(out, "type2", &[a]),
        other => out.push_str(&prim_name(other).unwrap_or_default()),
    }
    if paren {
        out.push(')');
    }
}

fn call(out: &mut String, name: &str, args: &[&BoundExpr]) {
    out.push_str(name);
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        render_into(a, 0, out);
    }
    out.push(')');
}

// ---------- parsing ----------

/// Parses an expression in the grammar above.
pub fn parse(text: &str) -> Result<BoundExpr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

enum Arg {
    Expr(BoundExpr),
    Count(u32),
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn sum(&mut self) -> Result<BoundExpr, ParseError> {
        let mut e = self.product()?;
        while self.eat(b'+') {
            e = E::add(e, self.product()?);
        }
        Ok(e)
    }

    fn product(&mut self) -> Result<BoundExpr, ParseError> {
        let mut e = self.power()?;
        while self.eat(b'*') {
            e = E::mul(e, self.power()?);
        }
        Ok(e)
    }

    fn power(&mut self) -> Result<BoundExpr, ParseError> {
        let mut e = self.atom()?;
        while self.eat(b'^') {
            let k = self.small_int()?;
            e = E::pow(e, k);
        }
        Ok(e)
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            std::str::from_utf8(&self.src[start..self.pos]).ok()
        }
    }

    fn small_int(&mut self) -> Result<u32, ParseError> {
        let at = self.pos;
        let d = self.digits().ok_or_else(|| self.err("expected integer"))?;
        d.parse().map_err(|_| ParseError::Syntax {
            pos: at,
            msg: "integer too large".into(),
        })
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            std::str::from_utf8(&self.src[start..self.pos]).ok()
        }
    }

    fn atom(&mut self) -> Result<BoundExpr, ParseError> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().unwrap_or("0");
                Ok(E::Const(d.parse().unwrap_or_else(|_| BigUint::zero())))
            }
            Some(c) if c.is_ascii_alphabetic() => self.named(),
            Some(_) => Err(self.err("unexpected character")),
        }
    }

    fn named(&mut self) -> Result<BoundExpr, ParseError> {
        let start = self.pos;
        let name = self.ident().unwrap_or("");
        if name == "n" {
            return Ok(E::Id);
        }
        let mut iter_count = None;
        if name == "log" && self.eat(b'{') {
            let at = self.pos;
            let m = self.small_int()?;
            if m == 0 {
                return Err(ParseError::ZeroIteration { pos: at });
            }
            self.expect(b'}')?;
            iter_count = Some(m);
        }
        let prim = match name {
            "log" => Some(E::log_iter(iter_count.unwrap_or(1))),
            "mlog" => Some(E::MLog),
            "msqrt" => Some(E::MSqrt),
            "logstar" => Some(E::LogStar),
            "exp2" => Some(E::Exp2),
            _ => None,
        };
        let has_args = self.peek() == Some(b'(');
        if let Some(p) = prim {
            if !has_args {
                return Ok(p);
            }
            let args = self.args()?;
            if args.len() != 1 {
                return Err(ParseError::Arity {
                    pos: start,
                    name: name.into(),
                    expected: 1,
                    got: args.len(),
                });
            }
            let x: BoundExpr = args.into_iter().next().map(Into::into).unwrap_or(E::Id);
            return Ok(E::compose(p, x));
        }
        let arity = match name {
            "comp" | "iter" | "mid" => 2,
            "type1" | "type2" => 1,
            _ => {
                self.pos = start;
                return Err(self.err(&format!("unknown name '{name}'")));
            }
        };
        if !has_args {
            return Err(self.err(&format!("'{name}' needs arguments")));
        }
        let args = self.args()?;
        if args.len() != arity {
            return Err(ParseError::Arity {
                pos: start,
                name: name.into(),
                expected: arity,
                got: args.len(),
            });
        }
        let mut it = args.into_iter();
        let mut next_expr = |p: &Self| match it.next() {
            Some(a) => Ok(BoundExpr::from(a)),
            None => Err(p.err("expected expression argument")),
        };
        match name {
            "comp" => {
                let o = next_expr(self)?;
                let i = next_expr(self)?;
                Ok(E::compose(o, i))
            }
            "iter" => {
                let b = next_expr(self)?;
                match it.next() {
                    Some(Arg::Count(0)) => Err(ParseError::ZeroIteration { pos: start }),
                    Some(Arg::Count(m)) => Ok(E::iterate(b, m)),
                    _ => Err(self.err("iter needs an integer count")),
                }
            }
            "mid" => {
                let a = next_expr(self)?;
                let b = next_expr(self)?;
                Ok(E::mid(a, b))
            }
            "type1" => Ok(E::type1(next_expr(self)?)),
            _ => Ok(E::type2(next_expr(self)?)),
        }
    }

    /// Parenthesized, comma separated list. A bare integer is kept as a count
    /// so that `iter(e, m)` can read it; elsewhere it becomes a constant.
    fn args(&mut self) -> Result<Vec<Arg>, ParseError> {
        self.expect(b'(')?;
        let mut out = Vec::new();
        loop {
            let e = self.sum()?;
            out.push(match &e {
                E::Const(c) if c.bits() <= 32 => {
                    Arg::Count(u32::try_from(c.clone()).unwrap_or(u32::MAX))
                }
                _ => Arg::Expr(e),
            });
            if self.eat(b',') {
                continue;
            }
            self.expect(b')')?;
            return Ok(out);
        }
    }
}

impl From<Arg> for BoundExpr {
    fn from(a: Arg) -> Self {
        match a {
            Arg::Expr(e) => e,
            Arg::Count(c) => E::constant(u64::from(c)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BoundExpr {
        parse(s).unwrap()
    }

    #[test]
    fn constructors_match_parser() {
        assert_eq!(p("type1(log)"), E::type1(E::Log));
        assert_eq!(p("iter(type1(log),2)"), E::iterate(E::type1(E::Log), 2));
        assert_eq!(p("mid(logstar, log)"), E::mid(E::LogStar, E::Log));
        assert_eq!(p("log{1}"), E::Log);
        assert_eq!(p("log{3}(n)"), E::log_iter(3));
        assert_eq!(p(" log ( n ) "), E::Log);
    }

    #[test]
    fn render_round_trip() {
        for s in [
            "n",
            "2*n",
            "n+100",
            "n*log",
            "n^2",
            "(n+1)^2",
            "type1(log{2})",
            "log(logstar)",
            "comp(type1(log),n^2)",
            "iter(log,1)",
            "mid(2,mid(2,n))",
            "type2(log^2)",
            "exp2(n^2)",
            "exp2",
            "n+(n+n)",
            "n*(n*n)",
            "(n^2)^3",
            "log{4}",
        ] {
            let e = p(s);
            assert_eq!(e.render(), s, "render of {s}");
            assert_eq!(p(&e.render()), e);
        }
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(
            parse("log(n"),
            Err(ParseError::Syntax { pos: 5, .. })
        ));
        assert!(matches!(
            parse("iter(log,0)"),
            Err(ParseError::ZeroIteration { .. })
        ));
        assert!(matches!(
            parse("log{0}"),
            Err(ParseError::ZeroIteration { .. })
        ));
        assert!(matches!(
            parse("mid(log)"),
            Err(ParseError::Arity {
                expected: 2,
                got: 1,
                ..
            })
        ));
        assert!(matches!(parse("log(n,n)"), Err(ParseError::Arity { .. })));
        assert!(matches!(
            parse("foo"),
            Err(ParseError::Syntax { pos: 0, .. })
        ));
        assert!(parse("n +").is_err());
    }

    #[test]
    fn eval_examples() {
        let ar = Arith::default();
        let ev = |s: &str, n: u64| p(s).eval(&Numeral::from_u64(n), &ar).unwrap();
        assert_eq!(ev("type1(2)", 5), Numeral::from_u64(10));
        assert_eq!(ev("log", 5), Numeral::from_u64(3));
        assert_eq!(ev("log", 16), Numeral::from_u64(4));
        assert_eq!(ev("logstar", 65536), Numeral::from_u64(4));
        assert_eq!(ev("iter(type1(log),2)", 16), Numeral::from_u64(384));
        assert_eq!(ev("mid(logstar,log)", 65536), Numeral::from_u64(4));
        assert_eq!(ev("type1(log)", 16), Numeral::from_u64(64));
    }

    #[test]
    fn attributes_propagate() {
        assert!(p("type1(log)").attributes().constructible);
        assert!(p("type1(log)+n").attributes().constructible);
        assert!(!p("log").attributes().constructible);
        assert!(!p("n+log").attributes().constructible);
        assert!(p("2*n").attributes().constructible);
    }
}
