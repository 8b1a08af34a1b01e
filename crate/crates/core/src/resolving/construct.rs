//! Explicit resolving sets that work for every scoring system, and the
//! recursive upper bound they realise.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::bracket::{lift, lift_with_partition, Bracket};
use crate::error::{Error, Result};
use crate::tournament::{Restriction, Tournament, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDim {
    pub dim: usize,
    pub witness: Vec<Bracket>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimBounds {
    pub lower: usize,
    pub upper: usize,
    /// A resolving set of size `upper`, valid for every σ.
    pub construction: Vec<Bracket>,
    /// The vertex `u` whose restriction the construction was lifted from.
    pub via: Option<Vertex>,
    pub exact: Option<ExactDim>,
}

impl DimBounds {
    pub fn to_json(&self, t: &Tournament) -> Value {
        json!({
            "lower": self.lower,
            "upper": self.upper,
            "via": self.via.map(|u| t.label(u)),
            "construction": self.construction.iter().map(|b| b.to_json(t)).collect::<Vec<_>>(),
            "exact": self.exact.as_ref().map(|e| json!({
                "dim": e.dim,
                "witness": e.witness.iter().map(|b| b.to_json(t)).collect::<Vec<_>>(),
            })),
        })
    }
}

/// `u ∈ U`: the parent of `u` is not a two-child match whose other child is
/// a player.
pub fn in_u(t: &Tournament, u: Vertex) -> Result<bool> {
    if u >= t.vertex_count() {
        return Err(Error::BadVertex(u));
    }
    Ok(match t.parent(u) {
        None => true,
        Some(x) => {
            let ch = t.children(x);
            !(ch.len() == 2 && ch.iter().any(|&v| v != u && t.is_player(v)))
        }
    })
}

fn outside(t: &Tournament, u: Vertex, x: Vertex) -> bool {
    !t.is_ancestor_or_self(u, x)
}

/// `Σ ⌊|N⁻(x) ∩ (P ∖ P(u))| / 2⌋` over matches outside `T_u`.
pub fn partition_size(t: &Tournament, u: Vertex) -> usize {
    t.matches()
        .iter()
        .filter(|&&x| outside(t, u, x))
        .map(|&x| {
            t.children(x)
                .iter()
                .filter(|&&v| t.is_player(v) && !t.contains(u, v))
                .count()
                / 2
        })
        .sum()
}

/// Splits `P ∖ P(u)` into blocks in which every player has a companion
/// that reaches every match it does. Players sharing a first match are
/// paired off; each leftover joins a pair below its first match. Blocks
/// are sorted and ordered by their smallest player.
pub fn partition_players(t: &Tournament, u: Vertex) -> Result<Vec<Vec<Vertex>>> {
    if !in_u(t, u)? {
        return Err(Error::NotInU(u));
    }
    let mut blocks: Vec<Vec<Vertex>> = Vec::new();
    // first block created at each match
    let mut first_pair: HashMap<Vertex, usize> = HashMap::new();
    let mut singles = Vec::new();
    for &x in t.matches() {
        if !outside(t, u, x) {
            continue;
        }
        let ps: Vec<Vertex> = t
            .children(x)
            .iter()
            .copied()
            .filter(|&v| t.is_player(v) && !t.contains(u, v))
            .collect();
        for pair in ps.chunks(2) {
            if pair.len() == 2 {
                first_pair.entry(x).or_insert(blocks.len());
                blocks.push(pair.to_vec());
            } else {
                singles.push(pair[0]);
            }
        }
    }
    singles.sort_unstable();
    for a in singles {
        let xa = t.parent(a).expect("a player outside P(u) has a parent");
        let x = t
            .matches_bottom_up()
            .iter()
            .copied()
            .find(|&x| t.is_ancestor_or_self(xa, x) && outside(t, u, x))
            .expect("x_a itself qualifies");
        let i = *first_pair
            .get(&x)
            .expect("the smallest such match has two player children outside P(u)");
        blocks[i].push(a);
    }
    for b in &mut blocks {
        b.sort_unstable();
    }
    blocks.sort();
    Ok(blocks)
}

/// Lifts resolving sets of `T_u` to `T`: block `A_i` is paired with base
/// bracket `i` (the last base bracket is reused if blocks outnumber it),
/// each block contributes one bracket per member won by that member, and
/// unused base brackets are lifted plainly.
pub fn construct_resolving(t: &Tournament, u: Vertex, base: &[Bracket]) -> Result<Vec<Bracket>> {
    let r = t.restrict(u)?;
    construct_on(t, &r, base)
}

fn construct_on(t: &Tournament, r: &Restriction, base: &[Bracket]) -> Result<Vec<Bracket>> {
    let u = r.root();
    let blocks = partition_players(t, u)?;
    if base.is_empty() {
        return Err(Error::EmptyBase);
    }
    let mut out = Vec::new();
    for (i, block) in blocks.iter().enumerate() {
        let b = &base[i.min(base.len() - 1)];
        let hat = lift_with_partition(t, r, b, block)?;
        for &a in block {
            out.push(hat.force_winner(t, a)?);
        }
    }
    for b in base.iter().skip(blocks.len()) {
        out.push(lift(t, r, b)?);
    }
    Ok(out)
}

/// `k − 1` brackets of a single match, won by all players but the last.
fn single_match_set(t: &Tournament) -> Vec<Bracket> {
    let z = t.sink();
    let players = t.players();
    players[..players.len() - 1]
        .iter()
        .map(|&a| {
            let mut w: Vec<Vertex> = (0..t.vertex_count()).collect();
            w[z] = a;
            Bracket::from_raw(w)
        })
        .collect()
}

fn is_single_match(t: &Tournament) -> bool {
    t.matches().len() == 1
}

struct UpperBound {
    memo: HashMap<String, usize>,
}

impl UpperBound {
    fn value(&mut self, t: &Tournament) -> usize {
        let key = t.shape_id().0;
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = if t.player_count() == 1 {
            0
        } else if is_single_match(t) {
            t.player_count() - 1
        } else {
            self.best(t).0
        };
        self.memo.insert(key, v);
        v
    }

    /// Minimum over `u ∈ U ∖ {z}` with ties to the smallest id.
    fn best(&mut self, t: &Tournament) -> (usize, Vertex, Restriction) {
        let n = t.player_count();
        let mut best: Option<(usize, Vertex, Restriction)> = None;
        for u in 0..t.vertex_count() {
            if u == t.sink() || !in_u(t, u).unwrap() {
                continue;
            }
            let r = t.restrict(u).unwrap();
            let sub = self.value(&r.tournament);
            let v = n - t.player_set_size(u) + sub.saturating_sub(partition_size(t, u));
            if best.as_ref().is_none_or(|(b, _, _)| v < *b) {
                best = Some((v, u, r));
            }
        }
        best.expect("U ∖ {z} is nonempty when T has two or more matches")
    }

    fn construct(&mut self, t: &Tournament) -> (Vec<Bracket>, Option<Vertex>) {
        if t.player_count() == 1 {
            return (Vec::new(), None);
        }
        if is_single_match(t) {
            return (single_match_set(t), None);
        }
        let (_, u, r) = self.best(t);
        let (mut base, _) = self.construct(&r.tournament);
        if base.is_empty() {
            base.push(Bracket::from_raw(vec![0]));
        }
        let set = construct_on(t, &r, &base).expect("u is in U and the base is nonempty");
        (set, Some(u))
    }
}

/// The recursive upper bound on the metric dimension together with a set
/// of that size that resolves for every σ.
pub fn dim_upper_bound(t: &Tournament) -> DimBounds {
    let mut ub = UpperBound { memo: HashMap::new() };
    let upper = ub.value(t);
    let (construction, via) = ub.construct(t);
    debug_assert_eq!(construction.len(), upper);
    DimBounds {
        lower: super::dim_lower_bound(t).unwrap_or(0),
        upper,
        construction,
        via,
        exact: None,
    }
}

/// `{base_a : a ∈ P}` without repeats, in player order.
pub fn construct_favorites(t: &Tournament, base: &Bracket) -> Result<Vec<Bracket>> {
    let mut out: Vec<Bracket> = Vec::with_capacity(t.player_count());
    for &a in t.players() {
        let b = base.force_winner(t, a)?;
        if !out.contains(&b) {
            out.push(b);
        }
    }
    Ok(out)
}
