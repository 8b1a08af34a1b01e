//! Scoring systems, σ-scores and win probabilities of a uniformly random
//! bracket.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::bracket::{Bracket, BracketSpace};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::tournament::{label_index, Restriction, Tournament, Vertex};

/// Largest match count for which subset sums are checked by brute force.
pub const MAX_SUBSET_SUM_MATCHES: usize = 20;

/// Positive weights on matches, stored in match-id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoringSystem {
    vertex_count: usize,
    matches: Vec<Vertex>,
    weights: Vec<Rational>,
    distinct_subset_sums: Option<bool>,
}

impl ScoringSystem {
    /// `weights[i]` belongs to `t.matches()[i]`.
    pub fn new(t: &Tournament, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != t.matches().len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} weights, got {}",
                t.matches().len(),
                weights.len()
            )));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_positive()) {
            return Err(Error::NonPositiveWeight(t.matches()[i]));
        }
        Ok(ScoringSystem {
            vertex_count: t.vertex_count(),
            matches: t.matches().to_vec(),
            weights,
            distinct_subset_sums: None,
        })
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn matches(&self) -> &[Vertex] {
        &self.matches
    }

    pub fn weight(&self, x: Vertex) -> Result<&Rational> {
        self.matches
            .binary_search(&x)
            .map(|i| &self.weights[i])
            .map_err(|_| Error::NotAMatch(x))
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().sum()
    }

    /// Cached result of the distinct-subset-sum check, if known.
    pub fn distinct_subset_sums(&self) -> Option<bool> {
        self.distinct_subset_sums
    }

    pub(crate) fn fits(&self, t: &Tournament) -> Result<()> {
        if self.vertex_count == t.vertex_count() && self.matches == t.matches() {
            Ok(())
        } else {
            Err(Error::TournamentMismatch)
        }
    }

    /// Σ σ(x) over the matches on which both brackets agree.
    pub fn score(&self, b: &Bracket, b2: &Bracket) -> Result<Rational> {
        if b.len() != self.vertex_count || b2.len() != self.vertex_count {
            return Err(Error::TournamentMismatch);
        }
        Ok(self
            .matches
            .iter()
            .zip(&self.weights)
            .filter(|(&x, _)| b.winner(x) == b2.winner(x))
            .map(|(_, w)| w)
            .sum())
    }

    /// σ_u on `T_u`: the weights of the matches that survive.
    pub fn restrict(&self, r: &Restriction) -> Result<ScoringSystem> {
        if r.from_parent.len() != self.vertex_count {
            return Err(Error::TournamentMismatch);
        }
        let sub = &r.tournament;
        let weights = sub
            .matches()
            .iter()
            .map(|&x| self.weight(r.to_parent[x]).cloned())
            .collect::<Result<Vec<_>>>()?;
        let mut out = ScoringSystem::new(sub, weights)?;
        if self.distinct_subset_sums == Some(true) {
            out.distinct_subset_sums = Some(true);
        }
        Ok(out)
    }

    /// The weights as integers over a common denominator.
    pub fn scaled(&self) -> ScaledWeights {
        let denom = self
            .weights
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let nums: Vec<BigUint> = self
            .weights
            .iter()
            .map(|w| (w.numer() * (&denom / w.denom())).to_biguint().expect("weights are positive"))
            .collect();
        let total: BigUint = nums.iter().sum();
        let repr = if total.bits() <= 128 {
            Scaled::Small(nums.iter().map(|v| v.to_u128().unwrap()).collect())
        } else {
            Scaled::Big(nums)
        };
        ScaledWeights { repr, denom }
    }

    pub fn to_json(&self, t: &Tournament) -> Result<Value> {
        self.fits(t)?;
        let mut map = Map::new();
        for (&x, w) in self.matches.iter().zip(&self.weights) {
            map.insert(t.label(x).to_string(), Value::String(w.to_string()));
        }
        Ok(Value::Object(map))
    }

    /// Reads `{"<match>": "<p/q or decimal>", ...}`; every match must
    /// appear and every weight must be positive.
    pub fn from_json(t: &Tournament, value: &Value) -> Result<Self> {
        let map = value
            .as_object()
            .ok_or_else(|| Error::parse("scoring system must be a JSON object"))?;
        let index = label_index(t);
        let mut by_vertex: HashMap<Vertex, Rational> = HashMap::new();
        for (k, v) in map {
            let x = *index.get(k.as_str()).ok_or_else(|| Error::UnknownId(k.clone()))?;
            if !t.is_match(x) {
                return Err(Error::NotAMatch(x));
            }
            let w: Rational = match v {
                Value::String(s) => s.parse()?,
                Value::Number(n) => n.to_string().parse()?,
                _ => return Err(Error::BadRational(v.to_string())),
            };
            if !w.is_positive() {
                return Err(Error::NonPositiveWeight(x));
            }
            by_vertex.insert(x, w);
        }
        let weights = t
            .matches()
            .iter()
            .map(|x| {
                by_vertex
                    .remove(x)
                    .ok_or_else(|| Error::MissingWeight(t.label(*x).to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        ScoringSystem::new(t, weights)
    }

    pub fn parse(t: &Tournament, text: &str) -> Result<Self> {
        ScoringSystem::from_json(t, &serde_json::from_str(text)?)
    }
}

/// Weight `2^i` on the `i`-th match in id order.
pub fn distinct_subset_sum_scoring(t: &Tournament) -> ScoringSystem {
    let weights = (0..t.matches().len())
        .map(|i| Rational::from(BigUint::one() << i))
        .collect();
    let mut s = ScoringSystem::new(t, weights).expect("powers of two are positive");
    s.distinct_subset_sums = Some(true);
    s
}

/// Every match weighs `value`.
pub fn constant_scoring(t: &Tournament, value: Rational) -> Result<ScoringSystem> {
    let mut s = ScoringSystem::new(t, vec![value; t.matches().len()])?;
    s.distinct_subset_sums = Some(t.matches().len() <= 1);
    Ok(s)
}

/// Independent uniform integer weights in `1..=1000`.
pub fn random_scoring(t: &Tournament, seed: u64) -> ScoringSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = t
        .matches()
        .iter()
        .map(|_| Rational::from(rng.random_range(1u64..=1000)))
        .collect();
    ScoringSystem::new(t, weights).expect("weights are positive")
}

/// Brute-force check that all `2^|M|` subset sums differ.
pub fn verify_distinct_subset_sums(sigma: &ScoringSystem) -> Result<bool> {
    let m = sigma.weights.len();
    if m > MAX_SUBSET_SUM_MATCHES {
        return Err(Error::limit(
            "distinct subset sum check matches",
            m,
            MAX_SUBSET_SUM_MATCHES as u64,
        ));
    }
    let scaled = sigma.scaled();
    let mut sums: Vec<ScoreKey> = (0u128..1 << m).map(|mask| scaled.key(mask)).collect();
    sums.sort_unstable();
    Ok(sums.windows(2).all(|w| w[0] != w[1]))
}

/// Returns the cached flag or runs the brute-force check.
pub fn has_distinct_subset_sums(sigma: &ScoringSystem) -> Result<bool> {
    match sigma.distinct_subset_sums {
        Some(v) => Ok(v),
        None => verify_distinct_subset_sums(sigma),
    }
}

/// Bit `i` is set when the brackets agree on `t.matches()[i]`.
pub fn agreement_mask(t: &Tournament, b: &Bracket, b2: &Bracket) -> u128 {
    debug_assert!(t.matches().len() <= 128);
    t.matches()
        .iter()
        .enumerate()
        .filter(|(_, &x)| b.winner(x) == b2.winner(x))
        .fold(0u128, |m, (i, _)| m | 1 << i)
}

#[derive(Debug, Clone)]
enum Scaled {
    Small(Vec<u128>),
    Big(Vec<BigUint>),
}

/// Integer numerators of σ over the common denominator `denom`.
#[derive(Debug, Clone)]
pub struct ScaledWeights {
    repr: Scaled,
    denom: BigInt,
}

/// A score times the common denominator. Keys from the same
/// [`ScaledWeights`] compare like the scores themselves.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScoreKey {
    Small(u128),
    Big(BigUint),
}

impl ScaledWeights {
    /// Score of an agreement mask.
    pub fn key(&self, mask: u128) -> ScoreKey {
        match &self.repr {
            Scaled::Small(w) => ScoreKey::Small(
                w.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, v)| v)
                    .sum(),
            ),
            Scaled::Big(w) => ScoreKey::Big(
                w.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, v)| v)
                    .sum(),
            ),
        }
    }

    pub fn to_rational(&self, key: &ScoreKey) -> Rational {
        let n = match key {
            ScoreKey::Small(v) => BigInt::from(*v),
            ScoreKey::Big(v) => BigInt::from(v.clone()),
        };
        Rational::new(n, self.denom.clone())
    }

    /// Inverse of [`to_rational`](Self::to_rational); `None` if the value
    /// is not a multiple of `1/denom` or is negative.
    pub fn from_rational(&self, value: &Rational) -> Option<ScoreKey> {
        let scaled = value.clone() * Rational::from_integer(self.denom.clone());
        if !scaled.denom().is_one() {
            return None;
        }
        let n = scaled.numer().to_biguint()?;
        Some(match self.repr {
            Scaled::Small(_) => ScoreKey::Small(n.to_u128()?),
            Scaled::Big(_) => ScoreKey::Big(n),
        })
    }
}

/// Exact win probabilities of a uniformly random bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinProbabilities {
    pub q_max: Rational,
    pub q_pair: Rational,
    /// The lexicographically first pair attaining `q_pair`.
    pub q_pair_argmin: (Vertex, Vertex),
    /// `Pr[R(z) = a]` for each player, in `t.players()` order.
    pub per_player_final: Vec<Rational>,
}

impl WinProbabilities {
    pub fn to_json(&self, t: &Tournament) -> Value {
        let mut finals = Map::new();
        for (&a, p) in t.players().iter().zip(&self.per_player_final) {
            finals.insert(t.label(a).to_string(), Value::String(p.to_string()));
        }
        let (a, b) = self.q_pair_argmin;
        serde_json::json!({
            "q_max": self.q_max.to_string(),
            "q_pair": self.q_pair.to_string(),
            "q_pair_players": [t.label(a), t.label(b)],
            "final": finals,
        })
    }
}

/// `Pr[R(x) = a]`: the product of `1/|N⁻(y)|` over the matches `y` on the
/// walk from `a` up to `x`.
pub fn win_probability(t: &Tournament, a: Vertex, x: Vertex) -> Result<Rational> {
    if x >= t.vertex_count() {
        return Err(Error::BadVertex(x));
    }
    if !t.is_player(a) {
        return Err(Error::NotAPlayer(a));
    }
    if !t.contains(x, a) {
        return Err(Error::PlayerNotInMatch { player: a, vertex: x });
    }
    let mut denom = BigUint::one();
    let mut v = a;
    while v != x {
        v = t.parent(v).expect("x is an ancestor of a");
        denom *= t.children(v).len();
    }
    Ok(Rational::new(1, denom))
}

/// Closed-form `q_max`, `q_pair` and final-winner distribution.
pub fn compute_probabilities(t: &Tournament) -> Result<WinProbabilities> {
    if t.player_count() < 2 {
        return Err(Error::TooFewPlayers);
    }
    let finals: Vec<Rational> = t
        .players()
        .iter()
        .map(|&a| win_probability(t, a, t.sink()))
        .collect::<Result<_>>()?;
    let pair = |a, b| -> Result<Rational> {
        let x = t.meeting_match(a, b)?;
        Ok(win_probability(t, a, x)? + win_probability(t, b, x)?)
    };
    summarize(t, finals, pair)
}

/// The same quantities by counting over every bracket.
pub fn compute_probabilities_exhaustive(t: &Tournament, cap: u64) -> Result<WinProbabilities> {
    if t.player_count() < 2 {
        return Err(Error::TooFewPlayers);
    }
    let space = BracketSpace::new(t, cap)?;
    let n = t.player_count();
    let total = Rational::from(space.len());
    let mut final_counts = vec![0u64; n];
    // wins[i][x] = number of brackets where player i wins vertex x
    let mut wins = vec![vec![0u64; t.vertex_count()]; n];
    for b in space.iter() {
        final_counts[t.player_index(b.winner(t.sink())).unwrap()] += 1;
        for &x in t.matches() {
            wins[t.player_index(b.winner(x)).unwrap()][x] += 1;
        }
    }
    let finals = final_counts.iter().map(|&c| Rational::from(c) / &total).collect();
    let pair = |a, b| -> Result<Rational> {
        let x = t.meeting_match(a, b)?;
        let (i, j) = (t.player_index(a).unwrap(), t.player_index(b).unwrap());
        Ok(Rational::from(wins[i][x] + wins[j][x]) / &total)
    };
    summarize(t, finals, pair)
}

fn summarize(
    t: &Tournament,
    finals: Vec<Rational>,
    pair: impl Fn(Vertex, Vertex) -> Result<Rational>,
) -> Result<WinProbabilities> {
    let q_max = finals.iter().max().cloned().unwrap_or_else(Rational::zero);
    let players = t.players();
    let mut best: Option<(Rational, (Vertex, Vertex))> = None;
    for (i, &a) in players.iter().enumerate() {
        for &b in &players[i + 1..] {
            let p = pair(a, b)?;
            if best.as_ref().is_none_or(|(q, _)| p < *q) {
                best = Some((p, (a, b)));
            }
        }
    }
    let (q_pair, q_pair_argmin) = best.expect("at least two players");
    Ok(WinProbabilities {
        q_max,
        q_pair,
        q_pair_argmin,
        per_player_final: finals,
    })
}
