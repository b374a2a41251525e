//! Tameness: quotients of every pair of bounds should converge in `ℝ ∪ {∞}`.
//!
//! Quotients are sampled at `2^k + r` for `r < 8`, so that a residue class
//! `mod m` (`m ≤ 8`) keeping its own accumulation value shows up at every scale.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::sample::Env;
use crate::bound::Bound;
use crate::numeral::Numeral;
use crate::verdict::{Mode, Outcome, Verdict, Witness};

const FIRST_SCALE: u64 = 6;
const LAST_SCALE: u64 = 64;
const OFFSETS: u64 = 8;
/// Quotients beyond `2^±DIVERGED_BITS` at the final scales count as tending to `0` or `∞`.
const DIVERGED_BITS: u64 = 16;
/// Number of final scales an oscillation must persist over.
const SUSTAIN: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "limit", rename_all = "kebab-case")]
pub enum Limit {
    Zero,
    Infinity,
    Approx {
        value: f64,
    },
    Oscillates {
        modulus: u32,
        limsup: String,
        liminf: String,
    },
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TameReport {
    pub lhs: String,
    pub rhs: String,
    pub limit: Limit,
}

/// Values at `2^k + r`, per scale `k`, when all offsets are exact.
type Samples = Vec<(u64, Vec<BigUint>)>;

fn sample(b: &dyn Bound, env: &Env) -> Samples {
    let mut out = Vec::new();
    for k in FIRST_SCALE..=LAST_SCALE {
        let row: Option<Vec<BigUint>> = (0..OFFSETS)
            .map(|r| {
                let n = (BigUint::from(1u32) << k) + r;
                let v = b.eval_at(&Numeral::Exact(n), &env.ar).ok()?;
                v.as_exact().cloned()
            })
            .collect();
        if let Some(row) = row {
            out.push((k, row));
        }
    }
    out
}

fn approx_ratio(a: &BigUint, b: &BigUint) -> f64 {
    let shift = a.bits().max(b.bits()).saturating_sub(60);
    let x = (a >> shift).to_f64().unwrap_or(f64::NAN);
    let y = (b >> shift).to_f64().unwrap_or(f64::NAN);
    x / y
}

/// `a1/b1 >= 2·a2/b2`
fn at_least_double(a1: &BigUint, b1: &BigUint, a2: &BigUint, b2: &BigUint) -> bool {
    a1 * b2 >= (a2 * b1) << 1u32
}

fn pair_limit(fs: &Samples, gs: &Samples) -> Limit {
    // Scales where both rows exist and the denominator never vanishes.
    let rows: Vec<(u64, &Vec<BigUint>, &Vec<BigUint>)> = fs
        .iter()
        .filter_map(|(k, fr)| {
            let (_, gr) = gs.iter().find(|(kk, _)| kk == k)?;
            gr.iter().all(|v| !v.is_zero()).then_some((*k, fr, gr))
        })
        .collect();
    if rows.len() < SUSTAIN {
        return Limit::Undetermined;
    }
    let tail = &rows[rows.len() - SUSTAIN..];
    let diverges = |up: bool| {
        tail.iter().all(|(_, fr, gr)| {
            fr.iter().zip(gr.iter()).all(|(a, b)| {
                if up {
                    a.bits() > b.bits() + DIVERGED_BITS
                } else {
                    b.bits() > a.bits() + DIVERGED_BITS
                }
            })
        })
    };
    if diverges(true) {
        return Limit::Infinity;
    }
    if diverges(false) {
        return Limit::Zero;
    }
    for m in 2..=OFFSETS as u32 {
        if let Some(lim) = oscillation(tail, m) {
            return lim;
        }
    }
    let (_, fr, gr) = tail[SUSTAIN - 1];
    Limit::Approx {
        value: approx_ratio(&fr[0], &gr[0]),
    }
}

/// Residue classes of `2^k + r` modulo `m` whose quotients stay a factor 2 apart.
fn oscillation(tail: &[(u64, &Vec<BigUint>, &Vec<BigUint>)], m: u32) -> Option<Limit> {
    let mut last = None;
    for (k, fr, gr) in tail {
        let base = (BigUint::from(1u32) << *k) % m;
        let base = base.to_u32().unwrap_or(0);
        // Offsets carrying the largest and smallest quotient, one probe per class.
        let mut hi: Option<usize> = None;
        let mut lo: Option<usize> = None;
        let mut classes = vec![None::<usize>; m as usize];
        for r in 0..OFFSETS as usize {
            let c = ((base + r as u32) % m) as usize;
            classes[c].get_or_insert(r);
        }
        for r in classes.into_iter().flatten() {
            let better = |cur: Option<usize>, up: bool| match cur {
                None => true,
                Some(i) => {
                    let lhs = &fr[r] * &gr[i];
                    let rhs = &fr[i] * &gr[r];
                    if up {
                        lhs > rhs
                    } else {
                        lhs < rhs
                    }
                }
            };
            if better(hi, true) {
                hi = Some(r);
            }
            if better(lo, false) {
                lo = Some(r);
            }
        }
        let (h, l) = (hi?, lo?);
        if !at_least_double(&fr[h], &gr[h], &fr[l], &gr[l]) {
            return None;
        }
        last = Some((h, l, *fr, *gr));
    }
    let (h, l, fr, gr) = last?;
    let q = |i: usize| BigRational::new(fr[i].clone().into(), gr[i].clone().into()).to_string();
    Some(Limit::Oscillates {
        modulus: m,
        limsup: q(h),
        liminf: q(l),
    })
}

/// Limit behaviour of every ordered pair `(f, g)` with `f` before `g`.
pub fn tame_reports(set: &[&dyn Bound], env: &Env) -> Vec<TameReport> {
    let samples: Vec<Samples> = set.iter().map(|b| sample(*b, env)).collect();
    let mut out = Vec::new();
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            let mut limit = pair_limit(&samples[i], &samples[j]);
            let (mut a, mut b) = (i, j);
            // Report oscillations with the quotient oriented upwards.
            if let Limit::Oscillates { limsup, .. } = &limit {
                if limsup
                    .parse::<BigRational>()
                    .is_ok_and(|q| q <= BigRational::one())
                {
                    limit = pair_limit(&samples[j], &samples[i]);
                    (a, b) = (j, i);
                }
            }
            out.push(TameReport {
                lhs: set[a].label(),
                rhs: set[b].label(),
                limit,
            });
        }
    }
    out
}

/// Tameness of a finite set. `Holds` is always numeric.
pub fn is_tame(set: &[&dyn Bound], env: &Env) -> Verdict {
    let labels: Vec<String> = set.iter().map(|b| b.label()).collect();
    let name = format!("{{{}}}", labels.join(", "));
    let make = |o, w| Verdict::new("tame", name.clone(), "", o, w, Mode::Numeric);
    let reports = tame_reports(set, env);
    if let Some(r) = reports
        .iter()
        .find(|r| matches!(r.limit, Limit::Oscillates { .. }))
    {
        let Limit::Oscillates {
            modulus,
            limsup,
            liminf,
        } = &r.limit
        else {
            unreachable!()
        };
        return make(
            Outcome::Fails,
            Witness::Accumulation {
                modulus: *modulus,
                limsup: limsup.clone(),
                liminf: liminf.clone(),
            },
        );
    }
    if let Some(r) = reports.iter().find(|r| r.limit == Limit::Undetermined) {
        return make(
            Outcome::Unknown,
            Witness::Horizon {
                point: format!("2^{LAST_SCALE}"),
                reason: format!("too few exact samples for {} / {}", r.lhs, r.rhs),
            },
        );
    }
    let pairs = reports
        .iter()
        .map(|r| {
            let lim = match &r.limit {
                Limit::Zero => "0".to_string(),
                Limit::Infinity => "∞".to_string(),
                Limit::Approx { value } => format!("≈{value}"),
                _ => String::new(),
            };
            (format!("{} / {}", r.lhs, r.rhs), lim)
        })
        .collect();
    make(Outcome::Holds, Witness::Constants { pairs })
}
