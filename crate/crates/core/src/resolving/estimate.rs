//! How often a fixed set of brackets pins down a uniformly random bracket.

use std::collections::HashMap;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::table::{all_brackets, check_members, guard, rank_columns, scaled_for, score_columns, transpose};
use crate::bracket::{sample_with, Bracket, BracketSpace};
use crate::error::Result;
use crate::limits::Limits;
use crate::rational::Rational;
use crate::scoring::ScoringSystem;
use crate::tournament::Tournament;

#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionEstimate {
    pub set_size: usize,
    pub samples: u64,
    pub resolved: u64,
    pub estimate: f64,
    /// 95% normal-approximation interval, clipped to `[0, 1]`.
    pub interval: (f64, f64),
    /// Fraction of all brackets whose score vector is unique.
    pub exact: Rational,
    /// `min(1, 4t/n − 4t²/n²)` for standard tournaments.
    pub pair_bound: Option<Rational>,
    /// `min(1, n^t 2^{1−n})` for standard tournaments with constant σ.
    pub value_count_bound: Option<Rational>,
}

impl ResolutionEstimate {
    pub fn to_json(&self) -> Value {
        json!({
            "set_size": self.set_size,
            "samples": self.samples,
            "resolved": self.resolved,
            "estimate": self.estimate,
            "interval95": [self.interval.0, self.interval.1],
            "exact": self.exact.to_string(),
            "exact_decimal": self.exact.to_f64(),
            "pair_bound": self.pair_bound.as_ref().map(|q| q.to_string()),
            "value_count_bound": self.value_count_bound.as_ref().map(|q| q.to_string()),
        })
    }
}

/// `unique[b]`: no other bracket shares `b`'s score vector.
fn unique_rows(t: &Tournament, sigma: &ScoringSystem, set: &[Bracket], all: &[Bracket]) -> Result<Vec<bool>> {
    let scaled = scaled_for(t, sigma)?;
    let (cols, _) = rank_columns(score_columns(t, &scaled, set, all));
    let rows = transpose(&cols, all.len());
    let mut counts: HashMap<&[u32], u32> = HashMap::new();
    for r in &rows {
        *counts.entry(r.as_slice()).or_default() += 1;
    }
    Ok(rows.iter().map(|r| counts[r.as_slice()] == 1).collect())
}

fn standard_bounds(t: &Tournament, sigma: &ScoringSystem, size: usize) -> (Option<Rational>, Option<Rational>) {
    if !t.is_standard() {
        return (None, None);
    }
    let n = t.player_count();
    let one = Rational::one();
    let pair = if 2 * size >= n {
        one.clone()
    } else {
        let f = Rational::new(size as i64, n as i64);
        Rational::from(4i64) * (&f - &(&f * &f))
    };
    let constant = sigma.weights().windows(2).all(|w| w[0] == w[1]);
    let values = constant.then(|| {
        let q = Rational::new(BigUint::from(n).pow(size as u32), BigUint::from(1u32) << (n - 1));
        q.min(one)
    });
    (Some(pair), values)
}

/// Monte Carlo estimate of `Pr[set resolves R]` for uniform `R`, with the
/// exhaustive value alongside.
pub fn estimate_resolution_probability(
    t: &Tournament,
    sigma: &ScoringSystem,
    set: &[Bracket],
    samples: u64,
    seed: u64,
    limits: &Limits,
) -> Result<ResolutionEstimate> {
    check_members(t, set)?;
    let space = BracketSpace::new(t, limits.brackets)?;
    let all = space.all();
    let unique = unique_rows(t, sigma, set, &all)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut resolved = 0u64;
    for _ in 0..samples {
        let r = sample_with(t, &mut rng);
        if unique[space.index_of(&r)? as usize] {
            resolved += 1;
        }
    }
    let estimate = if samples == 0 { 0.0 } else { resolved as f64 / samples as f64 };
    let half = if samples == 0 {
        0.0
    } else {
        1.96 * (estimate * (1.0 - estimate) / samples as f64).sqrt()
    };
    let exact_count = unique.iter().filter(|&&u| u).count();
    let (pair_bound, value_count_bound) = standard_bounds(t, sigma, set.len());
    Ok(ResolutionEstimate {
        set_size: set.len(),
        samples,
        resolved,
        estimate,
        interval: ((estimate - half).max(0.0), (estimate + half).min(1.0)),
        exact: Rational::new(exact_count as i64, all.len() as i64),
        pair_bound,
        value_count_bound,
    })
}

/// The single bracket that resolves the most brackets, with the fraction
/// it resolves; ties go to the earliest bracket.
pub fn best_singleton_resolution(
    t: &Tournament,
    sigma: &ScoringSystem,
    limits: &Limits,
) -> Result<(Rational, Bracket)> {
    let scaled = scaled_for(t, sigma)?;
    let all = all_brackets(t, limits)?;
    let n = all.len();
    guard("score matrix cells", (n as u128) * (n as u128), limits.search)?;
    let (cols, _) = rank_columns(score_columns(t, &scaled, &all, &all));
    let mut best = (0usize, 0usize);
    for (c, col) in cols.iter().enumerate() {
        let mut counts: HashMap<u32, u32> = HashMap::new();
        for &v in col {
            *counts.entry(v).or_default() += 1;
        }
        let unique = counts.values().filter(|&&k| k == 1).count();
        if unique > best.0 {
            best = (unique, c);
        }
    }
    Ok((Rational::new(best.0 as i64, n as i64), all[best.1].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolving::tests::{four_players, ab_set};
    use crate::scoring::distinct_subset_sum_scoring;

    #[test]
    fn extremes() {
        let t = four_players();
        let sigma = distinct_subset_sum_scoring(&t);
        let lim = Limits::default();
        let e = estimate_resolution_probability(&t, &sigma, &ab_set(&t), 500, 1, &lim).unwrap();
        assert_eq!(e.estimate, 1.0);
        assert_eq!(e.exact, Rational::one());
        let e = estimate_resolution_probability(&t, &sigma, &[], 500, 1, &lim).unwrap();
        assert_eq!(e.estimate, 0.0);
        assert_eq!(e.exact, Rational::zero());
        assert_eq!(e.pair_bound, Some(Rational::zero()));
    }

    #[test]
    fn reproducible() {
        let t = four_players();
        let sigma = distinct_subset_sum_scoring(&t);
        let lim = Limits::default();
        let set = &ab_set(&t)[..1];
        let a = estimate_resolution_probability(&t, &sigma, set, 300, 9, &lim).unwrap();
        let b = estimate_resolution_probability(&t, &sigma, set, 300, 9, &lim).unwrap();
        assert_eq!(a, b);
    }
}
