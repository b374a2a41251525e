//! Anything that can be sampled as a bound function.

use num_bigint::BigUint;
use std::fmt;
use std::sync::Arc;

use crate::error::EvalError;
use crate::expr::BoundExpr;
use crate::numeral::{Arith, Numeral};

pub trait Bound: Send + Sync {
    fn label(&self) -> String;
    fn eval_at(&self, n: &Numeral, ar: &Arith) -> Result<Numeral, EvalError>;
    /// The expression behind this bound, when there is one.
    fn expr(&self) -> Option<&BoundExpr> {
        None
    }
}

impl Bound for BoundExpr {
    fn label(&self) -> String {
        self.render()
    }

    fn eval_at(&self, n: &Numeral, ar: &Arith) -> Result<Numeral, EvalError> {
        self.eval(n, ar)
    }

    fn expr(&self) -> Option<&BoundExpr> {
        Some(self)
    }
}

impl<B: Bound + ?Sized> Bound for Arc<B> {
    fn label(&self) -> String {
        (**self).label()
    }

    fn eval_at(&self, n: &Numeral, ar: &Arith) -> Result<Numeral, EvalError> {
        (**self).eval_at(n, ar)
    }

    fn expr(&self) -> Option<&BoundExpr> {
        (**self).expr()
    }
}

type ExactMap = dyn Fn(&BigUint) -> BigUint + Send + Sync;

/// A bound given by a Rust function on exact naturals; tower-sized points
/// are reported as unsupported.
#[derive(Clone)]
pub struct ExactFn {
    name: String,
    f: Arc<ExactMap>,
}

impl ExactFn {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&BigUint) -> BigUint + Send + Sync + 'static,
    ) -> Self {
        ExactFn {
            name: name.into(),
            f: Arc::new(f),
        }
    }
}

impl fmt::Debug for ExactFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactFn({})", self.name)
    }
}

impl Bound for ExactFn {
    fn label(&self) -> String {
        self.name.clone()
    }

    fn eval_at(&self, n: &Numeral, ar: &Arith) -> Result<Numeral, EvalError> {
        match n.as_exact() {
            Some(v) => ar.from_big((self.f)(v)),
            None => Err(EvalError::Unsupported(format!("{} at {n}", self.name))),
        }
    }
}

/// `m`-fold composition of another bound with itself.
#[derive(Clone)]
pub struct Iterated {
    inner: Arc<dyn Bound>,
    m: u32,
}

impl Iterated {
    pub fn new(inner: Arc<dyn Bound>, m: u32) -> Self {
        assert!(m >= 1, "iteration count must be positive");
        Iterated { inner, m }
    }
}

impl Bound for Iterated {
    fn label(&self) -> String {
        format!("iter({},{})", self.inner.label(), self.m)
    }

    fn eval_at(&self, n: &Numeral, ar: &Arith) -> Result<Numeral, EvalError> {
        let mut v = n.clone();
        for _ in 0..self.m {
            v = self.inner.eval_at(&v, ar)?;
        }
        Ok(v)
    }
}
