//! Exact metric dimension by ascending-size search over combinations.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::construct::{dim_upper_bound, DimBounds, ExactDim};
use super::dim_lower_bound;
use super::table::{all_brackets, rank_columns, refine, scaled_for, score_columns};
use crate::bracket::Bracket;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::scoring::ScoringSystem;
use crate::tournament::Tournament;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Skip partial sets that can no longer cover every player pair at its
    /// meeting match.
    pub prune: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { prune: true }
    }
}

fn binomial(n: usize, k: usize) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 0..k.min(n) {
        acc = acc * (n - i) / (i + 1);
    }
    if k > n {
        BigUint::default()
    } else {
        acc
    }
}

/// Precomputed data shared by every search size.
struct Space {
    all: Vec<Bracket>,
    /// `cols[c][b]`: rank of `score(all[c], all[b])` within column `c`.
    cols: Vec<Vec<u32>>,
    /// For each bracket and match ordinal: (winner seen-slot, deficit slot).
    hits: Vec<Vec<(usize, usize)>>,
    /// Per match ordinal, the range of its deficit slots.
    slot_ranges: Vec<std::ops::Range<usize>>,
    initial_deficit: Vec<u32>,
    seen_len: usize,
}

#[derive(Clone)]
struct State {
    seen: Vec<bool>,
    deficit: Vec<u32>,
    classes: Vec<u32>,
    class_count: usize,
}

impl Space {
    fn new(t: &Tournament, sigma: &ScoringSystem, limits: &Limits) -> Result<Self> {
        let scaled = scaled_for(t, sigma)?;
        let all = all_brackets(t, limits)?;
        let n = all.len();
        super::table::guard("score matrix cells", (n as u128) * (n as u128), limits.search)?;
        let (cols, _) = rank_columns(score_columns(t, &scaled, &all, &all));
        let players = t.player_count();
        let mut slot_ranges = Vec::new();
        let mut initial_deficit = Vec::new();
        for &x in t.matches() {
            let start = initial_deficit.len();
            initial_deficit.extend(t.children(x).iter().map(|&u| t.player_set_size(u) as u32));
            slot_ranges.push(start..initial_deficit.len());
        }
        let hits = all
            .iter()
            .map(|b| {
                t.matches()
                    .iter()
                    .enumerate()
                    .map(|(k, &x)| {
                        let w = b.winner(x);
                        let slot = t.children(x).iter().position(|&u| t.contains(u, w)).unwrap();
                        (k * players + t.player_index(w).unwrap(), slot_ranges[k].start + slot)
                    })
                    .collect()
            })
            .collect();
        Ok(Space {
            all,
            cols,
            hits,
            slot_ranges,
            initial_deficit,
            seen_len: t.matches().len() * players,
        })
    }

    fn root(&self) -> State {
        State {
            seen: vec![false; self.seen_len],
            deficit: self.initial_deficit.clone(),
            classes: vec![0; self.all.len()],
            class_count: 1,
        }
    }

    /// Members still needed to cover all meeting-match pairs.
    fn need(&self, deficit: &[u32]) -> u32 {
        self.slot_ranges
            .iter()
            .map(|r| {
                let d = &deficit[r.clone()];
                d.iter().sum::<u32>() - d.iter().max().unwrap()
            })
            .max()
            .unwrap_or(0)
    }

    fn push(&self, s: &State, j: usize) -> State {
        let mut seen = s.seen.clone();
        let mut deficit = s.deficit.clone();
        for &(p, slot) in &self.hits[j] {
            if !seen[p] {
                seen[p] = true;
                deficit[slot] -= 1;
            }
        }
        let (classes, class_count) = refine(&s.classes, &self.cols[j]);
        State {
            seen,
            deficit,
            classes,
            class_count,
        }
    }

    /// Lexicographically first extension of `prefix` to `k` members.
    fn dfs(&self, k: usize, prefix: &mut Vec<usize>, s: &State, prune: bool) -> Option<Vec<usize>> {
        let n = self.all.len();
        if s.class_count == n {
            // any completion resolves; take the smallest indices
            let mut out = prefix.clone();
            let mut next = prefix.last().map_or(0, |&l| l + 1);
            while out.len() < k {
                out.push(next);
                next += 1;
            }
            return (next <= n).then_some(out);
        }
        if prefix.len() == k {
            return None;
        }
        let left = k - prefix.len();
        if prune && self.need(&s.deficit) as usize > left {
            return None;
        }
        let start = prefix.last().map_or(0, |&l| l + 1);
        for j in start..=n - left {
            let next = self.push(s, j);
            prefix.push(j);
            let found = self.dfs(k, prefix, &next, prune);
            prefix.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn search(&self, k: usize, opts: SearchOptions) -> Option<Vec<usize>> {
        let n = self.all.len();
        let root = self.root();
        if root.class_count == n {
            return (k <= n).then(|| (0..k).collect());
        }
        if k == 0 || k > n || (opts.prune && self.need(&root.deficit) as usize > k) {
            return None;
        }
        (0..=n - k).into_par_iter().find_map_first(|j| {
            let next = self.push(&root, j);
            self.dfs(k, &mut vec![j], &next, opts.prune)
        })
    }
}

fn check_search_size(n: usize, k: usize, limits: &Limits) -> Result<()> {
    let combos = binomial(n, k);
    match combos.to_u64() {
        Some(c) if c <= limits.search => Ok(()),
        _ => Err(Error::limit("resolving-set search combinations", combos, limits.search)),
    }
}

/// A σ-resolving set of exactly `k` brackets, lexicographically first in
/// enumeration order, or `None` if there is none.
pub fn exists_resolving_set_of_size(
    t: &Tournament,
    sigma: &ScoringSystem,
    k: usize,
    opts: SearchOptions,
    limits: &Limits,
) -> Result<Option<Vec<Bracket>>> {
    let space = Space::new(t, sigma, limits)?;
    check_search_size(space.all.len(), k, limits)?;
    Ok(space
        .search(k, opts)
        .map(|ids| ids.into_iter().map(|i| space.all[i].clone()).collect()))
}

/// Smallest σ-resolving set, searching upward from the lower bound.
pub fn metric_dimension_exact(t: &Tournament, sigma: &ScoringSystem, limits: &Limits) -> Result<ExactDim> {
    let space = Space::new(t, sigma, limits)?;
    let n = space.all.len();
    if n <= 1 {
        return Ok(ExactDim { dim: 0, witness: Vec::new() });
    }
    let start = dim_lower_bound(t)?;
    for k in start..=n {
        check_search_size(n, k, limits)?;
        if let Some(ids) = space.search(k, SearchOptions::default()) {
            return Ok(ExactDim {
                dim: k,
                witness: ids.into_iter().map(|i| space.all[i].clone()).collect(),
            });
        }
    }
    unreachable!("the set of all brackets resolves")
}

/// [`dim_upper_bound`] with the exact value filled in.
pub fn dim_bounds_with_exact(t: &Tournament, sigma: &ScoringSystem, limits: &Limits) -> Result<DimBounds> {
    let mut bounds = dim_upper_bound(t);
    bounds.exact = Some(metric_dimension_exact(t, sigma, limits)?);
    Ok(bounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use crate::resolving::is_resolving;
    use crate::scoring::{constant_scoring, distinct_subset_sum_scoring, random_scoring};
    use crate::tournament::{single_match, standard_tournament};

    #[test]
    fn binomials() {
        assert_eq!(binomial(128, 3), BigUint::from(341_376u32));
        assert_eq!(binomial(5, 0), BigUint::from(1u32));
        assert_eq!(binomial(3, 5), BigUint::default());
    }

    #[test]
    fn small_dimensions() {
        let lim = Limits::default();
        let t4 = standard_tournament(4).unwrap();
        for sigma in [
            distinct_subset_sum_scoring(&t4),
            constant_scoring(&t4, Rational::one()).unwrap(),
            random_scoring(&t4, 3),
        ] {
            let d = metric_dimension_exact(&t4, &sigma, &lim).unwrap();
            assert_eq!(d.dim, 2);
            assert!(is_resolving(&t4, &sigma, &d.witness, &lim).unwrap().is_resolving);
        }
        let k3 = single_match(3).unwrap();
        let d = metric_dimension_exact(&k3, &distinct_subset_sum_scoring(&k3), &lim).unwrap();
        assert_eq!(d.dim, 2);
        let one = Tournament::validate(1, &[]).unwrap();
        let d = metric_dimension_exact(&one, &distinct_subset_sum_scoring(&one), &lim).unwrap();
        assert_eq!((d.dim, d.witness.len()), (0, 0));
    }

    #[test]
    fn pruning_agrees_with_plain_scan() {
        let lim = Limits::default();
        let t = standard_tournament(4).unwrap();
        let sigma = random_scoring(&t, 8);
        for k in 0..=3 {
            let a = exists_resolving_set_of_size(&t, &sigma, k, SearchOptions { prune: true }, &lim).unwrap();
            let b = exists_resolving_set_of_size(&t, &sigma, k, SearchOptions { prune: false }, &lim).unwrap();
            assert_eq!(a, b, "k = {k}");
        }
    }

    #[test]
    fn search_cap() {
        let t = standard_tournament(8).unwrap();
        let lim = Limits { search: 1000, ..Limits::default() };
        let sigma = distinct_subset_sum_scoring(&t);
        assert!(matches!(
            exists_resolving_set_of_size(&t, &sigma, 3, SearchOptions::default(), &lim),
            Err(Error::LimitExceeded { .. })
        ));
    }
}
