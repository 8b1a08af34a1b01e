//! Resolving numbers: the least `r` such that every `r` brackets resolve.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::table::{all_brackets, guard, rank_columns, scaled_for, score_columns, transpose};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::rational::Rational;
use crate::scoring::{compute_probabilities, ScoringSystem};
use crate::tournament::Tournament;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvingNumber {
    pub value: usize,
    /// Indices of a bracket pair told apart by the fewest brackets; all
    /// other brackets form a largest non-resolving set.
    pub hardest_pair: Option<(usize, usize)>,
}

/// `N − min |D(B, B′)| + 1`, where `D(B, B′)` is the set of brackets whose
/// scores against `B` and `B′` differ. A set fails to resolve exactly when
/// it misses some `D(B, B′)`.
pub fn resolving_number_exact(t: &Tournament, sigma: &ScoringSystem, limits: &Limits) -> Result<ResolvingNumber> {
    let scaled = scaled_for(t, sigma)?;
    let all = all_brackets(t, limits)?;
    let n = all.len();
    if n <= 1 {
        return Ok(ResolvingNumber { value: 0, hardest_pair: None });
    }
    let n128 = n as u128;
    guard("resolving number work", n128 * n128 * n128 / 2, limits.search)?;
    let (cols, _) = rank_columns(score_columns(t, &scaled, &all, &all));
    let rows = transpose(&cols, n);
    let (d, i, j) = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let rows = &rows;
            (i + 1..n).map(move |j| {
                let d = rows[i].iter().zip(&rows[j]).filter(|(a, b)| a != b).count();
                (d, i, j)
            })
        })
        .min()
        .unwrap();
    Ok(ResolvingNumber {
        value: n - d + 1,
        hardest_pair: Some((i, j)),
    })
}

fn next_combination(mask: u32) -> u32 {
    // Gosper's hack
    let c = mask & mask.wrapping_neg();
    let r = mask + c;
    (((r ^ mask) >> 2) / c) | r
}

/// Reference value by scanning subsets from the largest size down until a
/// non-resolving one turns up.
pub fn resolving_number_by_subsets(t: &Tournament, sigma: &ScoringSystem, limits: &Limits) -> Result<usize> {
    let scaled = scaled_for(t, sigma)?;
    let all = all_brackets(t, limits)?;
    let n = all.len();
    if n > 31 {
        return Err(Error::limit("subset scan brackets", n, 31));
    }
    guard("subset scan subsets", 1u128 << n, limits.subsets)?;
    let (cols, _) = rank_columns(score_columns(t, &scaled, &all, &all));
    let resolves = |mask: u32| -> bool {
        let mut rows: Vec<Vec<u32>> = (0..n)
            .map(|b| (0..n).filter(|c| mask >> c & 1 == 1).map(|c| cols[c][b]).collect())
            .collect();
        rows.sort_unstable();
        rows.windows(2).all(|w| w[0] != w[1])
    };
    for size in (0..=n).rev() {
        let masks: Vec<u32> = if size == 0 {
            vec![0]
        } else {
            let mut v = Vec::new();
            let mut m: u32 = (1u32 << size) - 1;
            while (m as u64) < 1u64 << n {
                v.push(m);
                if size == n {
                    break;
                }
                m = next_combination(m);
            }
            v
        };
        if masks.par_iter().any(|&m| !resolves(m)) {
            return Ok(size + 1);
        }
    }
    Ok(0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResBounds {
    pub bracket_count: BigUint,
    pub q_max: Rational,
    pub q_pair: Rational,
    /// `(1 − q_pair)·N`; the resolving number is strictly larger.
    pub lower_qpair: Rational,
    /// `(1 − 2 q_max)·N`; the resolving number is strictly larger.
    pub lower_qmax: Rational,
    /// Smallest `Pr[R(z) = a]` over players.
    pub q_min: Rational,
    /// `(1 − q_max)·N`. Not an upper bound in general: `((ppppp)p)` has
    /// resolving number 7 against 5 here.
    pub upper_qmax: Rational,
    /// `(1 − q_min)·N + 1`. Each bracket `B` won by `b` is a favorite
    /// bracket of exactly `1 / Pr[R(z) = b]` brackets, so no non-resolving
    /// set has more than `(1 − q_min)·N` brackets.
    pub upper_counting: Rational,
    /// `N / 4`; the resolving number is strictly larger.
    pub quarter: Rational,
    /// `(1 − q_pair)·N + 1`, the value under distinct subset sums.
    pub prediction: Rational,
    pub exact: Option<usize>,
}

impl ResBounds {
    /// Whether `value` respects every lower bound and `upper_counting`.
    pub fn admits(&self, value: usize) -> bool {
        let v = Rational::from(value);
        v > self.lower_qpair && v > self.lower_qmax && v <= self.upper_counting && v > self.quarter
    }

    /// The prediction as an integer, when it is one.
    pub fn prediction_value(&self) -> Option<usize> {
        if self.prediction.denom().is_one() {
            self.prediction.numer().to_usize()
        } else {
            None
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "bracket_count": self.bracket_count.to_string(),
            "q_max": self.q_max.to_string(),
            "q_pair": self.q_pair.to_string(),
            "q_min": self.q_min.to_string(),
            "lower_qpair_exclusive": self.lower_qpair.to_string(),
            "lower_qmax_exclusive": self.lower_qmax.to_string(),
            "upper_qmax": self.upper_qmax.to_string(),
            "upper_counting": self.upper_counting.to_string(),
            "quarter_exclusive": self.quarter.to_string(),
            "prediction": self.prediction.to_string(),
            "exact": self.exact,
        })
    }
}

pub fn resolving_number_bounds(t: &Tournament) -> Result<ResBounds> {
    let p = compute_probabilities(t)?;
    let count = t.bracket_count();
    let n = Rational::from(count.clone());
    let one = Rational::one();
    let two = Rational::from(2i64);
    let lower_qpair = (&one - &p.q_pair) * &n;
    let q_min = p.per_player_final.iter().min().expect("at least two players").clone();
    Ok(ResBounds {
        lower_qmax: (&one - &(&two * &p.q_max)) * &n,
        upper_qmax: (&one - &p.q_max) * &n,
        upper_counting: (&one - &q_min) * &n + &one,
        q_min,
        quarter: &n / &Rational::from(4i64),
        prediction: &lower_qpair + &one,
        lower_qpair,
        bracket_count: count,
        q_max: p.q_max,
        q_pair: p.q_pair,
        exact: None,
    })
}
