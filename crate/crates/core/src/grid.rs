//! Sample points used by every numeric check.

use num_bigint::BigUint;
use num_traits::One;
use std::cmp::Ordering;

use crate::config::Config;
use crate::error::EvalError;
use crate::numeral::{Arith, NumOrd, Numeral};

/// Strictly increasing sample points; tower-sized points come last.
#[derive(Clone, Debug)]
pub struct SampleGrid {
    points: Vec<Numeral>,
    top_start: usize,
}

/// Points at or above this power of two form the top scale, where "almost
/// all" relations are judged.
pub const TOP_SCALE_EXP: u64 = 64;

fn order(a: &Numeral, b: &Numeral) -> Ordering {
    match a.compare(b) {
        NumOrd::Less => Ordering::Less,
        NumOrd::Greater => Ordering::Greater,
        NumOrd::Equal => Ordering::Equal,
        NumOrd::Ambiguous => format!("{a}").cmp(&format!("{b}")),
    }
}

impl SampleGrid {
    /// `0..=256`, `2^k` for `k <= 64` and the towers `T(k)` for `k <= 6`.
    pub fn standard(ar: &Arith) -> Result<Self, EvalError> {
        let mut pts: Vec<Numeral> = (0..=256u64).map(Numeral::from_u64).collect();
        for k in 0..=TOP_SCALE_EXP {
            pts.push(Numeral::Exact(BigUint::one() << k));
        }
        for k in 0..=6 {
            pts.push(ar.tower(k)?);
        }
        Ok(Self::from_points(pts))
    }

    /// `2^k + r` for `8 <= k <= 64`, `1 <= r <= 7`.
    pub fn residue_probes() -> Vec<Numeral> {
        let mut out = Vec::new();
        for k in 8..=TOP_SCALE_EXP {
            for r in 1..=7u32 {
                out.push(Numeral::Exact((BigUint::one() << k) + r));
            }
        }
        out
    }

    /// The standard grid plus whatever the configuration adds.
    pub fn for_config(cfg: &Config) -> Result<Self, EvalError> {
        let ar = cfg.arith();
        let mut g = Self::standard(&ar)?;
        let mut extra = Vec::new();
        if cfg.residue_probes {
            extra.extend(Self::residue_probes());
        }
        for p in &cfg.extra_points {
            extra.push(ar.parse(p)?);
        }
        if !extra.is_empty() {
            g = g.with_points(extra);
        }
        Ok(g)
    }

    pub fn from_points(mut pts: Vec<Numeral>) -> Self {
        pts.sort_by(order);
        pts.dedup_by(|a, b| order(a, b) == Ordering::Equal);
        let top = Numeral::Exact(BigUint::one() << TOP_SCALE_EXP);
        let top_start = pts
            .iter()
            .position(|p| p.le(&top) == Some(false) || p == &top)
            .unwrap_or(pts.len());
        SampleGrid {
            points: pts,
            top_start,
        }
    }

    pub fn with_points(self, extra: Vec<Numeral>) -> Self {
        let mut pts = self.points;
        pts.extend(extra);
        Self::from_points(pts)
    }

    pub fn points(&self) -> &[Numeral] {
        &self.points
    }

    /// Index of the first top-scale point.
    pub fn top_start(&self) -> usize {
        self.top_start
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Exact points that are powers of two, `2^k` with `k >= from`.
    pub fn scale_indices(&self, from: u64) -> Vec<(u64, usize)> {
        self.points
            .iter()
            .enumerate()
            .filter_map(|(i, p)| {
                let v = p.as_exact()?;
                let k = v.bits().checked_sub(1)?;
                (k >= from && v.trailing_zeros() == Some(k)).then_some((k, i))
            })
            .collect()
    }
}
