//! Resolving sets of brackets: verification, exact search, constructions,
//! bounds, resolving numbers and decoding.
//!
//! Everything that enumerates brackets checks the count against
//! [`Limits::brackets`] first. Witnesses are always the lexicographically
//! first ones in enumeration order, whatever the thread count.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::bracket::Bracket;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::rational::Rational;
use crate::scoring::{ScoreKey, ScoringSystem};
use crate::tournament::{Tournament, Vertex};

mod construct;
mod estimate;
mod number;
mod search;
mod table;
mod universal;

pub use construct::{
    construct_favorites, construct_resolving, dim_upper_bound, in_u, partition_players,
    partition_size, DimBounds, ExactDim,
};
pub use estimate::{best_singleton_resolution, estimate_resolution_probability, ResolutionEstimate};
pub use number::{
    resolving_number_bounds, resolving_number_by_subsets, resolving_number_exact, ResBounds,
    ResolvingNumber,
};
pub use search::{dim_bounds_with_exact, exists_resolving_set_of_size, metric_dimension_exact, SearchOptions};
pub use universal::{check_universal, Certificate, UniversalReport, UniversalVerdict};

use table::{all_brackets, check_members, rank_columns, scaled_for, score_columns, transpose};

/// Score tables above this many brackets are left out of reports.
pub const SCORE_TABLE_LIMIT: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvingReport {
    pub is_resolving: bool,
    pub bracket_count: usize,
    /// Two different brackets with equal score vectors, when not resolving.
    pub witness_pair: Option<(Bracket, Bracket)>,
    /// `score_table[b][i] = score(σ, set[i], b)` in enumeration order.
    pub score_table: Option<Vec<Vec<Rational>>>,
}

impl ResolvingReport {
    pub fn to_json(&self, t: &Tournament) -> Value {
        json!({
            "is_resolving": self.is_resolving,
            "bracket_count": self.bracket_count,
            "witness_pair": self
                .witness_pair
                .as_ref()
                .map(|(b, b2)| json!([b.to_json(t), b2.to_json(t)])),
            "score_table": self.score_table.as_ref().map(|rows| {
                rows.iter()
                    .map(|r| r.iter().map(|q| q.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            }),
        })
    }
}

/// Checks that the score vectors against `set` separate all brackets.
pub fn is_resolving(
    t: &Tournament,
    sigma: &ScoringSystem,
    set: &[Bracket],
    limits: &Limits,
) -> Result<ResolvingReport> {
    let scaled = scaled_for(t, sigma)?;
    check_members(t, set)?;
    let all = all_brackets(t, limits)?;
    let cols = score_columns(t, &scaled, set, &all);
    let score_table = (all.len() <= SCORE_TABLE_LIMIT).then(|| {
        (0..all.len())
            .map(|b| cols.iter().map(|c| scaled.to_rational(&c[b])).collect())
            .collect()
    });
    let (ranks, _) = rank_columns(cols);
    let rows = transpose(&ranks, all.len());
    let witness = first_collision(&rows);
    Ok(ResolvingReport {
        is_resolving: witness.is_none(),
        bracket_count: all.len(),
        witness_pair: witness.map(|(i, j)| (all[i].clone(), all[j].clone())),
        score_table,
    })
}

/// Lexicographically first `(i, j)` with `i < j` and equal rows.
fn first_collision<K: std::hash::Hash + Eq>(rows: &[K]) -> Option<(usize, usize)> {
    let mut seen: HashMap<&K, usize> = HashMap::with_capacity(rows.len());
    let mut best: Option<(usize, usize)> = None;
    for (j, row) in rows.iter().enumerate() {
        if let Some(&i) = seen.get(row) {
            // the first repeat of a class gives its smallest pair
            if best.is_none_or(|(bi, _)| i < bi) {
                best = Some((i, j));
            }
        } else {
            seen.insert(row, j);
        }
    }
    best
}

/// Player pairs `{a, b}` such that no member has `B(x_{a,b}) ∈ {a, b}`.
/// Any such pair makes the set non-resolving for every σ.
pub fn necessary_condition_violations(
    t: &Tournament,
    set: &[Bracket],
) -> Result<Vec<(Vertex, Vertex)>> {
    check_members(t, set)?;
    let players = t.players();
    let mut out = Vec::new();
    for (i, &a) in players.iter().enumerate() {
        for &b in &players[i + 1..] {
            let x = t.meeting_match(a, b)?;
            if !set.iter().any(|m| m.winner(x) == a || m.winner(x) == b) {
                out.push((a, b));
            }
        }
    }
    Ok(out)
}

/// `max_x |P(x)| − max_{u ∈ N⁻(x)} |P(u)|` over all matches.
pub fn dim_lower_bound(t: &Tournament) -> Result<usize> {
    if t.player_count() < 2 {
        return Err(Error::TooFewPlayers);
    }
    Ok(t.matches()
        .iter()
        .map(|&x| {
            let biggest = t.children(x).iter().map(|&u| t.player_set_size(u)).max().unwrap();
            t.player_set_size(x) - biggest
        })
        .max()
        .unwrap_or(0))
}

/// Reusable lookup from score vectors to brackets.
pub struct Decoder {
    all: Vec<Bracket>,
    scaled: crate::scoring::ScaledWeights,
    values: Vec<Vec<ScoreKey>>,
    by_row: HashMap<Vec<u32>, Vec<usize>>,
}

impl Decoder {
    pub fn new(t: &Tournament, sigma: &ScoringSystem, set: &[Bracket], limits: &Limits) -> Result<Self> {
        let scaled = scaled_for(t, sigma)?;
        check_members(t, set)?;
        let all = all_brackets(t, limits)?;
        let (ranks, values) = rank_columns(score_columns(t, &scaled, set, &all));
        let mut by_row: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
        for (b, row) in transpose(&ranks, all.len()).into_iter().enumerate() {
            by_row.entry(row).or_default().push(b);
        }
        Ok(Decoder { all, scaled, values, by_row })
    }

    /// All brackets whose score vector equals `scores`, in enumeration order.
    pub fn candidates(&self, scores: &[Rational]) -> Result<Vec<&Bracket>> {
        if scores.len() != self.values.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} scores, got {}",
                self.values.len(),
                scores.len()
            )));
        }
        let mut row = Vec::with_capacity(scores.len());
        for (q, values) in scores.iter().zip(&self.values) {
            let rank = self
                .scaled
                .from_rational(q)
                .and_then(|k| values.binary_search(&k).ok());
            match rank {
                Some(r) => row.push(r as u32),
                None => return Ok(Vec::new()),
            }
        }
        Ok(self
            .by_row
            .get(&row)
            .map(|ids| ids.iter().map(|&i| &self.all[i]).collect())
            .unwrap_or_default())
    }

    pub fn decode(&self, scores: &[Rational]) -> Result<Bracket> {
        let found = self.candidates(scores)?;
        match found.len() {
            0 => Err(Error::NoMatch),
            1 => Ok(found[0].clone()),
            _ => Err(Error::Ambiguous(found.into_iter().cloned().collect())),
        }
    }
}

/// The unique bracket with the given scores against `set`.
pub fn decode(
    t: &Tournament,
    sigma: &ScoringSystem,
    set: &[Bracket],
    scores: &[Rational],
    limits: &Limits,
) -> Result<Bracket> {
    Decoder::new(t, sigma, set, limits)?.decode(scores)
}

/// Score vector of `b` against `set`.
pub fn score_vector(sigma: &ScoringSystem, set: &[Bracket], b: &Bracket) -> Result<Vec<Rational>> {
    set.iter().map(|m| sigma.score(m, b)).collect()
}
