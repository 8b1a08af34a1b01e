//! Certifying that a set of brackets resolves under every scoring system.
//!
//! For a bracket pair `(B, B′)` and member `C`, let `v_C ∈ {−1, 0, 1}^M`
//! be the difference of the indicator vectors of the matches `C` shares
//! with `B` and with `B′`. The pair is told apart under σ iff `σ·v_C ≠ 0`
//! for some member. A pair is certified when some `v_C`, or some
//! `v_C ± v_D`, is nonzero with all entries of one sign: then `σ·v ≠ 0`
//! for every positive σ, so one of the two members separates the pair.
//! A pair is refuted when every `v_C` is zero.

use rayon::prelude::*;
use serde_json::{json, Value};

use super::table::{all_brackets, check_members, guard};
use crate::bracket::Bracket;
use crate::error::Result;
use crate::limits::Limits;
use crate::scoring::agreement_mask;
use crate::tournament::Tournament;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UniversalVerdict {
    Certified,
    Refuted,
    Inconclusive,
}

impl UniversalVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            UniversalVerdict::Certified => "CERTIFIED_UNIVERSAL",
            UniversalVerdict::Refuted => "REFUTED",
            UniversalVerdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// How a single pair was settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Certificate {
    /// One member's agreement sets are strictly nested.
    Containment,
    /// The sum or difference of two members' vectors is one-signed.
    Difference,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalReport {
    pub verdict: UniversalVerdict,
    /// Pairs that needed a two-member certificate.
    pub difference_pairs: u64,
    /// First refuted pair, or else first unsettled pair.
    pub witness_pair: Option<(Bracket, Bracket)>,
}

impl UniversalReport {
    pub fn to_json(&self, t: &Tournament) -> Value {
        json!({
            "verdict": self.verdict.as_str(),
            "difference_pairs": self.difference_pairs,
            "witness_pair": self
                .witness_pair
                .as_ref()
                .map(|(b, b2)| json!([b.to_json(t), b2.to_json(t)])),
        })
    }
}

enum PairResult {
    Settled(Certificate),
    Refuted,
    Open,
}

/// `(pos, neg)` masks of `v = 1_{m1} − 1_{m2}`.
fn split(m1: u128, m2: u128) -> (u128, u128) {
    (m1 & !m2, m2 & !m1)
}

fn one_signed(pos: u128, neg: u128) -> bool {
    (pos == 0) != (neg == 0)
}

fn settle(vs: &[(u128, u128)]) -> PairResult {
    if vs.iter().all(|&(p, n)| p == 0 && n == 0) {
        return PairResult::Refuted;
    }
    if vs.iter().any(|&(p, n)| one_signed(p, n)) {
        return PairResult::Settled(Certificate::Containment);
    }
    for (i, &(p1, n1)) in vs.iter().enumerate() {
        for &(p2, n2) in &vs[i + 1..] {
            // coordinates in both (p1 | n2) and (n1 | p2) are equal entries
            // of v1 and v2, so they cancel
            let up = (p1 | n2) & !(n1 | p2);
            let down = (n1 | p2) & !(p1 | n2);
            let sum_up = (p1 | p2) & !(n1 | n2);
            let sum_down = (n1 | n2) & !(p1 | p2);
            if one_signed(up, down) || one_signed(sum_up, sum_down) {
                return PairResult::Settled(Certificate::Difference);
            }
        }
    }
    PairResult::Open
}

/// Scans all bracket pairs with the certificates described above.
pub fn check_universal(t: &Tournament, set: &[Bracket], limits: &Limits) -> Result<UniversalReport> {
    check_members(t, set)?;
    let all = all_brackets(t, limits)?;
    let n = all.len();
    guard("universality pair scan", (n as u128) * (n as u128) / 2 * set.len().max(1) as u128, limits.search)?;
    let masks: Vec<Vec<u128>> = all
        .par_iter()
        .map(|b| set.iter().map(|c| agreement_mask(t, c, b)).collect())
        .collect();
    // per first index: (difference pairs, first refuted j, first open j)
    let per_row: Vec<(u64, Option<usize>, Option<usize>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut diffs = 0;
            let mut refuted = None;
            let mut open = None;
            let mut vs = Vec::with_capacity(set.len());
            for j in i + 1..n {
                vs.clear();
                vs.extend(masks[i].iter().zip(&masks[j]).map(|(&a, &b)| split(a, b)));
                match settle(&vs) {
                    PairResult::Settled(Certificate::Difference) => diffs += 1,
                    PairResult::Settled(Certificate::Containment) => {}
                    PairResult::Refuted => {
                        refuted.get_or_insert(j);
                    }
                    PairResult::Open => {
                        open.get_or_insert(j);
                    }
                }
            }
            (diffs, refuted, open)
        })
        .collect();
    let difference_pairs = per_row.iter().map(|r| r.0).sum();
    let first = |pick: fn(&(u64, Option<usize>, Option<usize>)) -> Option<usize>| {
        per_row
            .iter()
            .enumerate()
            .find_map(|(i, r)| pick(r).map(|j| (all[i].clone(), all[j].clone())))
    };
    let (verdict, witness_pair) = if let Some(p) = first(|r| r.1) {
        (UniversalVerdict::Refuted, Some(p))
    } else if let Some(p) = first(|r| r.2) {
        (UniversalVerdict::Inconclusive, Some(p))
    } else {
        (UniversalVerdict::Certified, None)
    };
    Ok(UniversalReport {
        verdict,
        difference_pairs,
        witness_pair,
    })
}
