use std::collections::HashMap;

use rayon::prelude::*;

use crate::bracket::{Bracket, BracketSpace};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::scoring::{agreement_mask, ScaledWeights, ScoreKey, ScoringSystem};
use crate::tournament::Tournament;

pub(crate) fn all_brackets(t: &Tournament, limits: &Limits) -> Result<Vec<Bracket>> {
    Ok(BracketSpace::new(t, limits.brackets)?.all())
}

pub(crate) fn check_members(t: &Tournament, set: &[Bracket]) -> Result<()> {
    set.iter().try_for_each(|b| b.fits(t))
}

/// Score keys of every member against every bracket: `cols[c][b]`.
pub(crate) fn score_columns(
    t: &Tournament,
    scaled: &ScaledWeights,
    members: &[Bracket],
    all: &[Bracket],
) -> Vec<Vec<ScoreKey>> {
    members
        .par_iter()
        .map(|c| all.iter().map(|b| scaled.key(agreement_mask(t, c, b))).collect())
        .collect()
}

/// Replaces each key by its rank among the distinct keys of its column.
/// Returns the ranks and, per column, the sorted distinct keys.
pub(crate) fn rank_columns(cols: Vec<Vec<ScoreKey>>) -> (Vec<Vec<u32>>, Vec<Vec<ScoreKey>>) {
    cols.into_par_iter()
        .map(|col| {
            let mut values = col.clone();
            values.sort_unstable();
            values.dedup();
            let ranks = col
                .iter()
                .map(|k| values.binary_search(k).unwrap() as u32)
                .collect();
            (ranks, values)
        })
        .unzip()
}

/// Row-major view: `rows[b][c]` is the rank of `score(members[c], b)`.
pub(crate) fn transpose(cols: &[Vec<u32>], n: usize) -> Vec<Vec<u32>> {
    (0..n).map(|b| cols.iter().map(|col| col[b]).collect()).collect()
}

/// Splits the classes of `classes` by the values of `col`; returns the new
/// dense class ids and their count.
pub(crate) fn refine(classes: &[u32], col: &[u32]) -> (Vec<u32>, usize) {
    let mut ids: HashMap<(u32, u32), u32> = HashMap::with_capacity(classes.len());
    let out = classes
        .iter()
        .zip(col)
        .map(|(&c, &v)| {
            let next = ids.len() as u32;
            *ids.entry((c, v)).or_insert(next)
        })
        .collect();
    (out, ids.len())
}

/// Scaled weights after checking that σ belongs to `t`.
pub(crate) fn scaled_for(t: &Tournament, sigma: &ScoringSystem) -> Result<ScaledWeights> {
    sigma.fits(t)?;
    if t.matches().len() > 128 {
        return Err(Error::limit("matches per tournament", t.matches().len(), 128));
    }
    Ok(sigma.scaled())
}

pub(crate) fn guard(what: &'static str, needed: u128, limit: u64) -> Result<()> {
    if needed > limit as u128 {
        Err(Error::limit(what, needed, limit))
    } else {
        Ok(())
    }
}
