//! Grid evaluation shared by the relation checks.

use num_bigint::BigUint;
use num_traits::Zero;
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use crate::bound::Bound;
use crate::certify::Certificate;
use crate::config::Config;
use crate::error::EvalError;
use crate::expr::BoundExpr;
use crate::grid::SampleGrid;
use crate::numeral::{Arith, Numeral};

/// Configuration, grid and arithmetic for one run.
#[derive(Clone, Debug)]
pub struct Env {
    pub cfg: Config,
    pub grid: SampleGrid,
    pub ar: Arith,
    pub(crate) memo: Memo,
}

/// Cache of direct consistency certificates. A cloned `Env` starts empty,
/// since the clone may change the configuration.
#[derive(Default)]
pub(crate) struct Memo(Mutex<HashMap<(&'static str, BoundExpr), Certificate>>);

impl Memo {
    pub(crate) fn get_or(
        &self,
        tag: &'static str,
        e: &BoundExpr,
        f: impl FnOnce() -> Certificate,
    ) -> Certificate {
        let key = (tag, e.clone());
        if let Some(c) = self.0.lock().expect("memo lock").get(&key) {
            return c.clone();
        }
        let c = f();
        self.0.lock().expect("memo lock").insert(key, c.clone());
        c
    }
}

impl Clone for Memo {
    fn clone(&self) -> Self {
        Memo::default()
    }
}

impl fmt::Debug for Memo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Memo")
    }
}

impl Env {
    pub fn new(cfg: Config) -> Result<Self, EvalError> {
        let grid = SampleGrid::for_config(&cfg)?;
        let ar = cfg.arith();
        Ok(Env {
            cfg,
            grid,
            ar,
            memo: Memo::default(),
        })
    }

    pub fn with_grid(cfg: Config, grid: SampleGrid) -> Self {
        let ar = cfg.arith();
        Env {
            cfg,
            grid,
            ar,
            memo: Memo::default(),
        }
    }

    /// Default configuration; panics only if the built-in grid cannot be built.
    pub fn standard() -> Self {
        Env::new(Config::default()).expect("default grid")
    }
}

pub(crate) fn table(b: &dyn Bound, env: &Env) -> Vec<Option<Numeral>> {
    env.grid
        .points()
        .iter()
        .map(|p| b.eval_at(p, &env.ar).ok())
        .collect()
}

/// `Some(a <= b)` when both values are present and comparable.
pub(crate) fn le_opt(a: &Option<Numeral>, b: &Option<Numeral>) -> Option<bool> {
    match (a, b) {
        (Some(x), Some(y)) => x.le(y),
        _ => None,
    }
}

/// Result of scanning `f <= g` over the grid.
pub(crate) struct Scan {
    pub last_violation: Option<usize>,
    pub top_violations: Vec<usize>,
    pub top_confirmed: usize,
}

pub(crate) fn scan_le(fv: &[Option<Numeral>], gv: &[Option<Numeral>], env: &Env) -> Scan {
    let top = env.grid.top_start();
    let mut s = Scan {
        last_violation: None,
        top_violations: Vec::new(),
        top_confirmed: 0,
    };
    for (i, (a, b)) in fv.iter().zip(gv).enumerate() {
        match le_opt(a, b) {
            Some(false) => {
                s.last_violation = Some(i);
                if i >= top {
                    s.top_violations.push(i);
                }
            }
            Some(true) if i >= top => s.top_confirmed += 1,
            _ => {}
        }
    }
    s
}

pub(crate) fn ceil_div(a: &BigUint, b: &BigUint) -> Option<BigUint> {
    if b.is_zero() {
        return None;
    }
    Some((a + b - 1u32) / b)
}

pub(crate) fn point(env: &Env, i: usize) -> String {
    env.grid
        .points()
        .get(i)
        .map(|p| p.to_string())
        .unwrap_or_else(|| "end of grid".into())
}
