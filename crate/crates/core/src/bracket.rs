//! Brackets: winner maps `V → P` consistent with the tournament.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::tournament::{label_index, Restriction, Tournament, Vertex};

/// A bracket stores the full vertex → winning player map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bracket {
    winners: Vec<Vertex>,
}

/// Exact number of brackets of a tournament.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BracketCount(pub BigUint);

impl BracketCount {
    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl std::fmt::Display for BracketCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl Bracket {
    /// Checks the bracket axioms and wraps the map.
    pub fn new(t: &Tournament, winners: Vec<Vertex>) -> Result<Self> {
        if winners.len() != t.vertex_count() {
            return Err(Error::BracketMismatch);
        }
        for &a in t.players() {
            if winners[a] != a {
                return Err(Error::FixedPointViolation(a));
            }
        }
        for &x in t.matches() {
            let w = winners[x];
            if !t.children(x).iter().any(|&c| winners[c] == w) {
                return Err(Error::ChainViolation(x));
            }
        }
        Ok(Bracket { winners })
    }

    pub(crate) fn from_raw(winners: Vec<Vertex>) -> Self {
        Bracket { winners }
    }

    pub fn winner(&self, v: Vertex) -> Vertex {
        self.winners[v]
    }

    pub fn winners(&self) -> &[Vertex] {
        &self.winners
    }

    pub fn len(&self) -> usize {
        self.winners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.winners.is_empty()
    }

    pub(crate) fn fits(&self, t: &Tournament) -> Result<()> {
        if self.winners.len() == t.vertex_count() {
            Ok(())
        } else {
            Err(Error::TournamentMismatch)
        }
    }

    /// `B_a`: player `a` wins every match it can reach, everything else as
    /// in `self`.
    pub fn force_winner(&self, t: &Tournament, a: Vertex) -> Result<Bracket> {
        self.fits(t)?;
        if !t.is_player(a) {
            return Err(Error::NotAPlayer(a));
        }
        let mut winners = self.winners.clone();
        for v in t.path_to_sink(a) {
            winners[v] = a;
        }
        Ok(Bracket { winners })
    }

    /// Restriction of this bracket to `T_u`.
    pub fn restrict(&self, r: &Restriction) -> Bracket {
        let winners = r
            .to_parent
            .iter()
            .map(|&old| r.from_parent[self.winners[old]].expect("B(v) ∈ P(v) ⊆ P(u)"))
            .collect();
        Bracket { winners }
    }

    pub fn to_json(&self, t: &Tournament) -> Value {
        let mut map = Map::new();
        for v in 0..t.vertex_count() {
            map.insert(t.label(v).to_string(), Value::String(t.label(self.winners[v]).to_string()));
        }
        Value::Object(map)
    }

    pub fn from_json(t: &Tournament, value: &Value) -> Result<Bracket> {
        let map = value
            .as_object()
            .ok_or_else(|| Error::parse("bracket must be a JSON object"))?;
        let index = label_index(t);
        let mut winners = vec![usize::MAX; t.vertex_count()];
        for (k, w) in map {
            let v = *index.get(k.as_str()).ok_or_else(|| Error::UnknownId(k.clone()))?;
            let w = w
                .as_str()
                .ok_or_else(|| Error::parse(format!("winner of {k:?} must be a string")))?;
            winners[v] = *index.get(w).ok_or_else(|| Error::UnknownId(w.to_string()))?;
        }
        if let Some(v) = winners.iter().position(|&w| w == usize::MAX) {
            return Err(Error::parse(format!("bracket has no entry for {:?}", t.label(v))));
        }
        Bracket::new(t, winners)
    }

    pub fn parse(t: &Tournament, text: &str) -> Result<Bracket> {
        Bracket::from_json(t, &serde_json::from_str(text)?)
    }
}

/// Validates a winner map against the bracket axioms.
pub fn validate_bracket(t: &Tournament, winners: Vec<Vertex>) -> Result<Bracket> {
    Bracket::new(t, winners)
}

pub fn count_brackets(t: &Tournament) -> BracketCount {
    BracketCount(t.bracket_count())
}

/// Mixed-radix indexing of all brackets. Digit `i` is the child position of
/// the winner of `matches()[i]`; the lowest-id match is the least
/// significant digit.
#[derive(Debug, Clone)]
pub struct BracketSpace<'t> {
    t: &'t Tournament,
    radices: Vec<u64>,
    total: u64,
}

impl<'t> BracketSpace<'t> {
    pub fn new(t: &'t Tournament, cap: u64) -> Result<Self> {
        let count = t.bracket_count();
        match count.to_u64() {
            Some(total) if total <= cap => Ok(BracketSpace {
                t,
                radices: t.matches().iter().map(|&x| t.children(x).len() as u64).collect(),
                total,
            }),
            _ => Err(Error::limit("bracket enumeration", count, cap)),
        }
    }

    pub fn tournament(&self) -> &'t Tournament {
        self.t
    }

    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    fn from_digits(&self, digits: &[usize]) -> Bracket {
        let t = self.t;
        let mut winners: Vec<Vertex> = (0..t.vertex_count()).collect();
        for &x in t.matches_bottom_up() {
            let k = t.match_index(x).unwrap();
            winners[x] = winners[t.children(x)[digits[k]]];
        }
        Bracket { winners }
    }

    pub fn bracket(&self, mut index: u64) -> Bracket {
        debug_assert!(index < self.total);
        let digits: Vec<usize> = self
            .radices
            .iter()
            .map(|&r| {
                let d = index % r;
                index /= r;
                d as usize
            })
            .collect();
        self.from_digits(&digits)
    }

    pub fn index_of(&self, b: &Bracket) -> Result<u64> {
        b.fits(self.t)?;
        let mut index = 0u64;
        let mut stride = 1u64;
        for (k, &x) in self.t.matches().iter().enumerate() {
            let w = b.winner(x);
            let d = self
                .t
                .children(x)
                .iter()
                .position(|&c| b.winner(c) == w)
                .ok_or(Error::ChainViolation(x))?;
            index += d as u64 * stride;
            stride *= self.radices[k];
        }
        Ok(index)
    }

    pub fn iter(&self) -> BracketIter<'_, 't> {
        BracketIter {
            space: self,
            digits: vec![0; self.radices.len()],
            remaining: self.total,
        }
    }

    pub fn all(&self) -> Vec<Bracket> {
        self.iter().collect()
    }
}

pub struct BracketIter<'s, 't> {
    space: &'s BracketSpace<'t>,
    digits: Vec<usize>,
    remaining: u64,
}

impl Iterator for BracketIter<'_, '_> {
    type Item = Bracket;

    fn next(&mut self) -> Option<Bracket> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = self.space.from_digits(&self.digits);
        for (d, &r) in self.digits.iter_mut().zip(&self.space.radices) {
            *d += 1;
            if (*d as u64) < r {
                break;
            }
            *d = 0;
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.remaining as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for BracketIter<'_, '_> {}

/// Every bracket exactly once, in mixed-radix order; fails if there are
/// more than `cap`.
pub fn enumerate_brackets(t: &Tournament, cap: u64) -> Result<Vec<Bracket>> {
    Ok(BracketSpace::new(t, cap)?.all())
}

/// A uniformly random bracket: each match independently picks a child.
pub fn sample_uniform(t: &Tournament, seed: u64) -> Bracket {
    sample_with(t, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub(crate) fn sample_with<R: Rng>(t: &Tournament, rng: &mut R) -> Bracket {
    let digits: Vec<usize> = t
        .matches()
        .iter()
        .map(|&x| rng.random_range(0..t.children(x).len()))
        .collect();
    let mut winners: Vec<Vertex> = (0..t.vertex_count()).collect();
    for &x in t.matches_bottom_up() {
        let k = t.match_index(x).unwrap();
        winners[x] = winners[t.children(x)[digits[k]]];
    }
    Bracket { winners }
}

/// Extends a bracket of `T_u` to all of `T` so that no match outside `T_u`
/// is won by a player of `P(u)`. Outside matches are filled bottom-up from
/// the smallest-id child disjoint from `P(u)`.
pub fn lift(t: &Tournament, r: &Restriction, base: &Bracket) -> Result<Bracket> {
    if r.from_parent.len() != t.vertex_count() {
        return Err(Error::TournamentMismatch);
    }
    let sub = &r.tournament;
    if base.len() != sub.vertex_count() {
        return Err(Error::BracketMismatch);
    }
    Bracket::new(sub, base.winners.clone()).map_err(|_| Error::BracketMismatch)?;
    let u = r.root();
    let mut winners: Vec<Vertex> = (0..t.vertex_count()).collect();
    for (new, &old) in r.to_parent.iter().enumerate() {
        winners[old] = r.to_parent[base.winner(new)];
    }
    for &x in t.matches_bottom_up() {
        if r.from_parent[x].is_some() {
            continue;
        }
        let v = t
            .children(x)
            .iter()
            .copied()
            .find(|&c| !t.overlaps(c, u))
            .expect("a match outside T_u has at most one child meeting P(u)");
        winners[x] = winners[v];
    }
    Ok(Bracket { winners })
}

/// Checks that `block ⊆ P(T) ∖ P(u)` and that every member has a companion
/// in the block that reaches every match it does.
pub fn check_companion_block(t: &Tournament, u: Vertex, block: &[Vertex]) -> Result<()> {
    for &a in block {
        if !t.is_player(a) {
            return Err(Error::NotAPlayer(a));
        }
        if t.contains(u, a) {
            return Err(Error::PlayerInsideRestriction(a));
        }
    }
    for &a in block {
        let first = t.parent(a).ok_or(Error::CompanionPropertyViolated(a))?;
        if !block.iter().any(|&b| b != a && t.contains(first, b)) {
            return Err(Error::CompanionPropertyViolated(a));
        }
    }
    Ok(())
}

/// [`lift`], then force every player of `block` in ascending id order, so
/// each member's first match sees another member among its child winners.
pub fn lift_with_partition(
    t: &Tournament,
    r: &Restriction,
    base: &Bracket,
    block: &[Vertex],
) -> Result<Bracket> {
    check_companion_block(t, r.root(), block)?;
    let mut b = lift(t, r, base)?;
    let mut order = block.to_vec();
    order.sort_unstable();
    for a in order {
        b = b.force_winner(t, a)?;
    }
    Ok(b)
}
