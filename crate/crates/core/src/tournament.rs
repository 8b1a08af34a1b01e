//! Single-elimination tournaments as validated anti-arborescences.
//!
//! Vertices are dense `usize` ids. Sources are players, every other vertex
//! is a match, and the unique sink is the final. Each vertex caches its
//! player set `P(v)` (the players with a directed walk to `v`) as a sorted
//! id list, together with DFS entry/exit times so that `a ∈ P(v)` and
//! ancestor queries are O(1).
//!
//! Tournaments built from nested trees ([`Node`], JSON documents, and all
//! generators) use a canonical numbering: players first, left to right,
//! then matches bottom-up level by level, left to right. Child lists are
//! always sorted by id, and under canonical numbering that order is also the
//! serialized order, so `parse(serialize(t)) == t`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Largest `max_players` accepted by [`enumerate_shapes`].
pub const MAX_SHAPE_PLAYERS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tournament {
    parent: Vec<Option<Vertex>>,
    children: Vec<Vec<Vertex>>,
    players: Vec<Vertex>,
    matches: Vec<Vertex>,
    sink: Vertex,
    player_sets: Vec<Vec<Vertex>>,
    labels: Vec<String>,
    // derived lookups
    tin: Vec<usize>,
    tout: Vec<usize>,
    depth: Vec<usize>,
    player_pos: Vec<Option<usize>>,
    match_pos: Vec<Option<usize>>,
    bottom_up: Vec<Vertex>,
}

/// A nested description of a tournament: either a player or a match with
/// at least two children. Labels are optional; unlabeled vertices are named
/// after their id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Player(Option<String>),
    Match(Option<String>, Vec<Node>),
}

impl Node {
    pub fn player() -> Self {
        Node::Player(None)
    }

    pub fn labeled_player(label: impl Into<String>) -> Self {
        Node::Player(Some(label.into()))
    }

    pub fn game(children: Vec<Node>) -> Self {
        Node::Match(None, children)
    }

    pub fn labeled_game(label: impl Into<String>, children: Vec<Node>) -> Self {
        Node::Match(Some(label.into()), children)
    }

    fn is_player(&self) -> bool {
        matches!(self, Node::Player(_))
    }
}

/// Canonical shape key: two tournaments are isomorphic as rooted unordered
/// trees iff their keys are equal. Players encode as `p`, a match as its
/// sorted child encodings wrapped in parentheses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TournamentShapeId(pub String);

/// The sub-tournament `T_u` together with the id correspondence.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub tournament: Tournament,
    /// `to_parent[new] = old`
    pub to_parent: Vec<Vertex>,
    /// `from_parent[old] = Some(new)` for kept vertices
    pub from_parent: Vec<Option<Vertex>>,
}

impl Restriction {
    pub fn root(&self) -> Vertex {
        self.to_parent[self.tournament.sink()]
    }
}

impl Tournament {
    /// Validates a raw digraph given as `(from, to)` edges and builds the
    /// tournament. Vertex ids are kept as given.
    pub fn validate(vertex_count: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let labels = (0..vertex_count).map(|v| v.to_string()).collect();
        Self::validate_labeled(vertex_count, edges, labels)
    }

    pub fn validate_labeled(
        vertex_count: usize,
        edges: &[(Vertex, Vertex)],
        labels: Vec<String>,
    ) -> Result<Self> {
        if labels.len() != vertex_count {
            return Err(Error::InvalidArgument(format!(
                "{} labels for {} vertices",
                labels.len(),
                vertex_count
            )));
        }
        let mut seen_labels = HashSet::new();
        for l in &labels {
            if !seen_labels.insert(l.as_str()) {
                return Err(Error::DuplicateId(l.clone()));
            }
        }

        let mut parent: Vec<Option<Vertex>> = vec![None; vertex_count];
        let mut seen = HashSet::new();
        for &(u, v) in edges {
            if u >= vertex_count {
                return Err(Error::BadVertex(u));
            }
            if v >= vertex_count {
                return Err(Error::BadVertex(v));
            }
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateEdge(u, v));
            }
            if u == v {
                return Err(Error::CycleDetected(u));
            }
            if parent[u].is_some() {
                return Err(Error::MultipleOutEdges(u));
            }
            parent[u] = Some(v);
        }

        let sinks: Vec<Vertex> = (0..vertex_count).filter(|&v| parent[v].is_none()).collect();
        match sinks.len() {
            0 => return Err(Error::NoSink),
            1 => {}
            k => return Err(Error::MultipleSinks(k)),
        }
        let sink = sinks[0];

        // 0 = unvisited, 1 = on the current walk, 2 = known to reach the sink
        let mut state = vec![0u8; vertex_count];
        state[sink] = 2;
        let mut walk = Vec::new();
        for start in 0..vertex_count {
            let mut v = start;
            while state[v] == 0 {
                state[v] = 1;
                walk.push(v);
                match parent[v] {
                    Some(p) => v = p,
                    None => return Err(Error::DisconnectedVertex(v)),
                }
            }
            if state[v] == 1 {
                return Err(Error::CycleDetected(v));
            }
            for w in walk.drain(..) {
                state[w] = 2;
            }
        }

        let mut children = vec![Vec::new(); vertex_count];
        for v in 0..vertex_count {
            if let Some(p) = parent[v] {
                children[p].push(v);
            }
        }
        if let Some(v) = (0..vertex_count).find(|&v| children[v].len() == 1) {
            return Err(Error::UnaryInNeighbor(v));
        }

        Ok(Self::assemble(parent, children, sink, labels))
    }

    fn assemble(
        parent: Vec<Option<Vertex>>,
        mut children: Vec<Vec<Vertex>>,
        sink: Vertex,
        labels: Vec<String>,
    ) -> Self {
        let n = parent.len();
        for c in children.iter_mut() {
            c.sort_unstable();
        }
        let players: Vec<Vertex> = (0..n).filter(|&v| children[v].is_empty()).collect();
        let matches: Vec<Vertex> = (0..n).filter(|&v| !children[v].is_empty()).collect();

        let mut tin = vec![0; n];
        let mut tout = vec![0; n];
        let mut depth = vec![0; n];
        let mut post = Vec::with_capacity(n);
        let mut clock = 0;
        let mut stack = vec![(sink, 0usize)];
        tin[sink] = clock;
        clock += 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < children[v].len() {
                let c = children[v][*next];
                *next += 1;
                tin[c] = clock;
                clock += 1;
                depth[c] = depth[v] + 1;
                stack.push((c, 0));
            } else {
                tout[v] = clock;
                post.push(v);
                stack.pop();
            }
        }

        let mut player_sets: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for &v in &post {
            if children[v].is_empty() {
                player_sets[v] = vec![v];
            } else {
                let mut set: Vec<Vertex> = children[v]
                    .iter()
                    .flat_map(|&c| player_sets[c].iter().copied())
                    .collect();
                set.sort_unstable();
                player_sets[v] = set;
            }
        }

        let mut player_pos = vec![None; n];
        for (i, &p) in players.iter().enumerate() {
            player_pos[p] = Some(i);
        }
        let mut match_pos = vec![None; n];
        for (i, &m) in matches.iter().enumerate() {
            match_pos[m] = Some(i);
        }
        let mut bottom_up = matches.clone();
        bottom_up.sort_by_key(|&m| (player_sets[m].len(), m));

        Tournament {
            parent,
            children,
            players,
            matches,
            sink,
            player_sets,
            labels,
            tin,
            tout,
            depth,
            player_pos,
            match_pos,
            bottom_up,
        }
    }

    /// Builds a tournament from a nested description using canonical
    /// numbering. Player children are placed before match children.
    pub fn from_tree(root: &Node) -> Result<Self> {
        struct Slot {
            label: Option<String>,
            is_player: bool,
            kids: Vec<usize>,
        }
        fn flatten(node: &Node, arena: &mut Vec<Slot>) -> Result<usize> {
            let idx = arena.len();
            match node {
                Node::Player(label) => {
                    arena.push(Slot {
                        label: label.clone(),
                        is_player: true,
                        kids: Vec::new(),
                    });
                }
                Node::Match(label, kids) => {
                    if kids.is_empty() {
                        return Err(Error::parse(format!(
                            "match {} has no children",
                            label.as_deref().unwrap_or("<unnamed>")
                        )));
                    }
                    arena.push(Slot {
                        label: label.clone(),
                        is_player: false,
                        kids: Vec::new(),
                    });
                    let ordered = kids
                        .iter()
                        .filter(|k| k.is_player())
                        .chain(kids.iter().filter(|k| !k.is_player()));
                    let mut ids = Vec::with_capacity(kids.len());
                    for k in ordered {
                        ids.push(flatten(k, arena)?);
                    }
                    arena[idx].kids = ids;
                }
            }
            Ok(idx)
        }

        let mut arena = Vec::new();
        flatten(root, &mut arena)?;
        let total = arena.len();

        let mut id = vec![usize::MAX; total];
        let mut next = 0;
        // players: preorder, left to right
        let mut stack = vec![0usize];
        while let Some(s) = stack.pop() {
            if arena[s].is_player {
                id[s] = next;
                next += 1;
            }
            stack.extend(arena[s].kids.iter().rev());
        }
        // matches: reverse of a right-to-left BFS from the root
        let mut order = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            if !arena[s].is_player {
                order.push(s);
                queue.extend(arena[s].kids.iter().rev());
            }
        }
        for &s in order.iter().rev() {
            id[s] = next;
            next += 1;
        }

        let mut labels = vec![String::new(); total];
        let mut edges = Vec::with_capacity(total.saturating_sub(1));
        for (s, slot) in arena.iter().enumerate() {
            labels[id[s]] = slot.label.clone().unwrap_or_else(|| id[s].to_string());
            for &k in &slot.kids {
                edges.push((id[k], id[s]));
            }
        }
        Self::validate_labeled(total, &edges, labels)
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn player_count(&self) -> usize {
        self.players.len()
    }

    pub fn players(&self) -> &[Vertex] {
        &self.players
    }

    pub fn matches(&self) -> &[Vertex] {
        &self.matches
    }

    pub fn sink(&self) -> Vertex {
        self.sink
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v]
    }

    pub fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }

    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<Vertex> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn depth(&self, v: Vertex) -> usize {
        self.depth[v]
    }

    pub fn is_player(&self, v: Vertex) -> bool {
        v < self.vertex_count() && self.children[v].is_empty()
    }

    pub fn is_match(&self, v: Vertex) -> bool {
        v < self.vertex_count() && !self.children[v].is_empty()
    }

    /// Position of `v` in [`players`](Self::players).
    pub fn player_index(&self, v: Vertex) -> Option<usize> {
        self.player_pos.get(v).copied().flatten()
    }

    /// Position of `v` in [`matches`](Self::matches).
    pub fn match_index(&self, v: Vertex) -> Option<usize> {
        self.match_pos.get(v).copied().flatten()
    }

    /// Matches ordered by ascending `|P(x)|`, ties by id. Every match comes
    /// after all of its children.
    pub fn matches_bottom_up(&self) -> &[Vertex] {
        &self.bottom_up
    }

    fn check(&self, v: Vertex) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::BadVertex(v))
        }
    }

    pub fn player_set(&self, v: Vertex) -> Result<&[Vertex]> {
        self.check(v)?;
        Ok(&self.player_sets[v])
    }

    pub fn player_set_size(&self, v: Vertex) -> usize {
        self.player_sets[v].len()
    }

    /// True iff `a ∈ P(v)` (for a player `a`); more generally iff `v` is
    /// reachable from `a`.
    pub fn contains(&self, v: Vertex, a: Vertex) -> bool {
        self.is_ancestor_or_self(v, a)
    }

    /// True iff there is a directed walk from `v` to `anc`, i.e.
    /// `P(v) ⊆ P(anc)`.
    pub fn is_ancestor_or_self(&self, anc: Vertex, v: Vertex) -> bool {
        self.tin[anc] <= self.tin[v] && self.tin[v] < self.tout[anc]
    }

    /// True iff `P(u) ∩ P(v) ≠ ∅`.
    pub fn overlaps(&self, u: Vertex, v: Vertex) -> bool {
        self.is_ancestor_or_self(u, v) || self.is_ancestor_or_self(v, u)
    }

    /// The first vertex reachable from both `u` and `v`.
    pub fn lowest_common_ancestor(&self, mut u: Vertex, mut v: Vertex) -> Vertex {
        while self.depth[u] > self.depth[v] {
            u = self.parent[u].expect("non-root has parent");
        }
        while self.depth[v] > self.depth[u] {
            v = self.parent[v].expect("non-root has parent");
        }
        while u != v {
            u = self.parent[u].expect("non-root has parent");
            v = self.parent[v].expect("non-root has parent");
        }
        u
    }

    /// The unique match `x_{a,b}` where players `a` and `b` can meet.
    pub fn meeting_match(&self, a: Vertex, b: Vertex) -> Result<Vertex> {
        for p in [a, b] {
            self.check(p)?;
            if !self.is_player(p) {
                return Err(Error::NotAPlayer(p));
            }
        }
        if a == b {
            return Err(Error::SamePlayer);
        }
        Ok(self.lowest_common_ancestor(a, b))
    }

    /// The child of `x` whose player set contains `a`, if any.
    pub fn child_towards(&self, x: Vertex, a: Vertex) -> Option<Vertex> {
        self.children[x]
            .iter()
            .copied()
            .find(|&c| self.is_ancestor_or_self(c, a))
    }

    /// The vertices on the walk from `v` up to the sink, starting with `v`.
    pub fn path_to_sink(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        std::iter::successors(Some(v), move |&w| self.parent[w])
    }

    /// `T_u`: the vertices with a directed walk to `u`, renumbered in
    /// increasing order of their original ids.
    pub fn restrict(&self, u: Vertex) -> Result<Restriction> {
        self.check(u)?;
        let kept: Vec<Vertex> = (0..self.vertex_count())
            .filter(|&v| self.is_ancestor_or_self(u, v))
            .collect();
        let mut from_parent = vec![None; self.vertex_count()];
        for (new, &old) in kept.iter().enumerate() {
            from_parent[old] = Some(new);
        }
        let edges: Vec<(Vertex, Vertex)> = kept
            .iter()
            .filter(|&&v| v != u)
            .map(|&v| {
                let p = self.parent[v].expect("non-root has parent");
                (from_parent[v].unwrap(), from_parent[p].unwrap())
            })
            .collect();
        let labels = kept.iter().map(|&v| self.labels[v].clone()).collect();
        let tournament = Tournament::validate_labeled(kept.len(), &edges, labels)
            .expect("restriction of a tournament is a tournament");
        Ok(Restriction {
            tournament,
            to_parent: kept,
            from_parent,
        })
    }

    pub fn shape_id(&self) -> TournamentShapeId {
        let mut code: Vec<String> = vec![String::new(); self.vertex_count()];
        for &v in self.players() {
            code[v] = "p".to_string();
        }
        for &x in &self.bottom_up {
            let mut parts: Vec<&str> = self.children[x].iter().map(|&c| code[c].as_str()).collect();
            parts.sort_unstable();
            let mut s = String::with_capacity(2 + parts.iter().map(|p| p.len()).sum::<usize>());
            s.push('(');
            for p in parts {
                s.push_str(p);
            }
            s.push(')');
            code[x] = s;
        }
        TournamentShapeId(std::mem::take(&mut code[self.sink]))
    }

    /// True for a complete binary tournament with a power-of-two number of
    /// players, all at the same depth.
    pub fn is_standard(&self) -> bool {
        let n = self.player_count();
        if n < 2 || !n.is_power_of_two() {
            return false;
        }
        let d = self.depth[self.players[0]];
        self.matches.iter().all(|&x| self.children[x].len() == 2)
            && self.players.iter().all(|&p| self.depth[p] == d)
    }

    /// Number of brackets: the product of the match in-degrees.
    pub fn bracket_count(&self) -> BigUint {
        self.matches
            .iter()
            .map(|&x| BigUint::from(self.children[x].len()))
            .product()
    }

    /// Nested description of this tournament with its labels.
    pub fn to_tree(&self) -> Node {
        self.node_at(self.sink)
    }

    fn node_at(&self, v: Vertex) -> Node {
        if self.children[v].is_empty() {
            Node::labeled_player(self.labels[v].clone())
        } else {
            Node::labeled_game(
                self.labels[v].clone(),
                self.children[v].iter().map(|&c| self.node_at(c)).collect(),
            )
        }
    }

    pub fn to_json(&self) -> Value {
        fn go(t: &Tournament, v: Vertex) -> Value {
            if t.children[v].is_empty() {
                Value::String(t.labels[v].clone())
            } else {
                let kids: Vec<Value> = t.children[v].iter().map(|&c| go(t, c)).collect();
                json!({ "id": t.labels[v], "children": kids })
            }
        }
        go(self, self.sink)
    }

    pub fn serialize(&self) -> String {
        self.to_json().to_string()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        Self::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        fn node(v: &Value) -> Result<Node> {
            match v {
                Value::String(s) => Ok(Node::labeled_player(s.clone())),
                Value::Object(map) => {
                    if let Some(k) = map.keys().find(|k| *k != "id" && *k != "children") {
                        return Err(Error::parse(format!("unexpected key {k:?} in match")));
                    }
                    let id = map
                        .get("id")
                        .and_then(Value::as_str)
                        .ok_or_else(|| Error::parse("match without string \"id\""))?;
                    let kids = map
                        .get("children")
                        .and_then(Value::as_array)
                        .ok_or_else(|| Error::parse(format!("match {id:?} without \"children\" array")))?;
                    let kids = kids.iter().map(node).collect::<Result<Vec<_>>>()?;
                    Ok(Node::labeled_game(id, kids))
                }
                other => Err(Error::parse(format!("expected player string or match object, got {other}"))),
            }
        }
        Tournament::from_tree(&node(value)?)
    }
}

/// The complete binary tournament with `n` players: players `0..n` left to
/// right, then matches bottom-up level order, so the sink is `2n - 2`.
pub fn standard_tournament(n: usize) -> Result<Tournament> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    fn build(leaves: usize) -> Node {
        if leaves == 1 {
            Node::player()
        } else {
            Node::game(vec![build(leaves / 2), build(leaves / 2)])
        }
    }
    Tournament::from_tree(&build(n))
}

/// A tournament with a single match of `k` players.
pub fn single_match(k: usize) -> Result<Tournament> {
    if k < 2 {
        return Err(Error::TooFewPlayers);
    }
    Tournament::from_tree(&Node::game((0..k).map(|_| Node::player()).collect()))
}

/// Random tournament: at each node with `m ≥ 2` players, an arity
/// `k ∈ [2, m]` is drawn uniformly and the players are split into a uniformly
/// random composition of `m` into `k` positive parts.
pub fn random_tournament(n_players: usize, seed: u64) -> Result<Tournament> {
    if n_players == 0 {
        return Err(Error::InvalidArgument("a tournament needs at least one player".into()));
    }
    fn build(m: usize, rng: &mut ChaCha8Rng) -> Node {
        if m == 1 {
            return Node::player();
        }
        let k = rng.random_range(2..=m);
        let mut cuts: Vec<usize> = sample(rng, m - 1, k - 1).into_iter().map(|c| c + 1).collect();
        cuts.sort_unstable();
        let mut parts = Vec::with_capacity(k);
        let mut prev = 0;
        for c in cuts.into_iter().chain(std::iter::once(m)) {
            parts.push(c - prev);
            prev = c;
        }
        Node::game(parts.into_iter().map(|p| build(p, rng)).collect())
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Tournament::from_tree(&build(n_players, &mut rng))
}

/// Every tournament with at most `max_players` players, one per isomorphism
/// class, ordered by player count and then by shape key.
pub fn enumerate_shapes(max_players: usize) -> Result<Vec<Tournament>> {
    if max_players == 0 || max_players > MAX_SHAPE_PLAYERS {
        return Err(Error::limit("shape enumeration players", max_players, MAX_SHAPE_PLAYERS as u64));
    }
    // by_size[k] = (key, tree) sorted by key
    let mut by_size: Vec<Vec<(String, Node)>> = vec![Vec::new(); max_players + 1];
    by_size[1].push(("p".to_string(), Node::player()));

    // Picks a non-decreasing sequence of (size, index) parts summing to `remaining`.
    fn extend(
        by_size: &[Vec<(String, Node)>],
        total: usize,
        remaining: usize,
        min: (usize, usize),
        parts: &mut Vec<(usize, usize)>,
        out: &mut BTreeMap<String, Node>,
    ) {
        if remaining == 0 {
            if parts.len() >= 2 {
                let mut keys: Vec<&str> = parts.iter().map(|&(s, i)| by_size[s][i].0.as_str()).collect();
                keys.sort_unstable();
                let key = format!("({})", keys.concat());
                let tree = Node::game(parts.iter().map(|&(s, i)| by_size[s][i].1.clone()).collect());
                out.insert(key, tree);
            }
            return;
        }
        for size in min.0..=remaining.min(total - 1) {
            let start = if size == min.0 { min.1 } else { 0 };
            for idx in start..by_size[size].len() {
                parts.push((size, idx));
                extend(by_size, total, remaining - size, (size, idx), parts, out);
                parts.pop();
            }
        }
    }

    for k in 2..=max_players {
        let mut out = BTreeMap::new();
        extend(&by_size, k, k, (1, 0), &mut Vec::new(), &mut out);
        by_size[k] = out.into_iter().collect();
    }

    by_size
        .iter()
        .flatten()
        .map(|(_, tree)| Tournament::from_tree(tree))
        .collect()
}

/// Looks up vertices by label, returning a map usable by JSON readers.
pub(crate) fn label_index(t: &Tournament) -> HashMap<&str, Vertex> {
    t.labels.iter().enumerate().map(|(v, l)| (l.as_str(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const FOUR_PLAYERS: &str =
        r#"{"id":"z","children":[{"id":"x","children":["a","b"]},{"id":"y","children":["c","d"]}]}"#;

    fn four_players() -> Tournament {
        Tournament::parse(FOUR_PLAYERS).unwrap()
    }

    fn v(t: &Tournament, l: &str) -> Vertex {
        t.vertex_by_label(l).unwrap()
    }

    #[test]
    fn four_player_sets() {
        let t = four_players();
        let names = |vs: &[Vertex]| vs.iter().map(|&v| t.label(v).to_string()).collect::<Vec<_>>();
        assert_eq!(names(t.player_set(v(&t, "z")).unwrap()), ["a", "b", "c", "d"]);
        assert_eq!(names(t.player_set(v(&t, "x")).unwrap()), ["a", "b"]);
        assert_eq!(names(t.player_set(v(&t, "c")).unwrap()), ["c"]);
        assert_eq!(t.sink(), v(&t, "z"));
        assert_eq!(t.player_set(99), Err(Error::BadVertex(99)));
    }

    #[test]
    fn four_player_numbering_is_canonical() {
        let t = four_players();
        let ids: Vec<Vertex> = ["a", "b", "c", "d", "x", "y", "z"].iter().map(|l| v(&t, l)).collect();
        assert_eq!(ids, [0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(t, standard_tournament(4).unwrap().relabeled_like(&t));
    }

    impl Tournament {
        fn relabeled_like(mut self, other: &Tournament) -> Tournament {
            self.labels = other.labels.clone();
            self
        }
    }

    #[test]
    fn validate_rejects_each_property() {
        assert_eq!(Tournament::validate(0, &[]), Err(Error::NoSink));
        assert_eq!(Tournament::validate(3, &[(0, 2)]), Err(Error::MultipleSinks(2)));
        assert_eq!(
            Tournament::validate(3, &[(0, 1), (0, 2), (1, 2)]),
            Err(Error::MultipleOutEdges(0))
        );
        assert_eq!(
            Tournament::validate(3, &[(0, 1), (1, 2), (2, 0)]),
            Err(Error::NoSink)
        );
        assert_eq!(
            Tournament::validate(4, &[(1, 2), (2, 1), (0, 3)]),
            Err(Error::CycleDetected(1))
        );
        assert_eq!(Tournament::validate(2, &[(0, 1)]), Err(Error::UnaryInNeighbor(1)));
        assert_eq!(
            Tournament::validate(4, &[(0, 2), (2, 3), (1, 3)]),
            Err(Error::UnaryInNeighbor(2))
        );
        assert_eq!(Tournament::validate(2, &[(0, 5)]), Err(Error::BadVertex(5)));
        assert_eq!(
            Tournament::validate(3, &[(0, 2), (0, 2), (1, 2)]),
            Err(Error::DuplicateEdge(0, 2))
        );
        assert_eq!(Tournament::validate(1, &[(0, 0)]), Err(Error::CycleDetected(0)));
    }

    #[test]
    fn single_vertex_is_a_tournament() {
        let t = Tournament::validate(1, &[]).unwrap();
        assert_eq!(t.players(), &[0]);
        assert!(t.matches().is_empty());
        assert_eq!(t.sink(), 0);
        assert_eq!(t.bracket_count(), BigUint::from(1u32));
    }

    #[test]
    fn meeting_matches() {
        let t = four_players();
        assert_eq!(t.meeting_match(v(&t, "a"), v(&t, "b")), Ok(v(&t, "x")));
        assert_eq!(t.meeting_match(v(&t, "a"), v(&t, "c")), Ok(v(&t, "z")));
        assert_eq!(t.meeting_match(0, 0), Err(Error::SamePlayer));
        assert_eq!(t.meeting_match(0, 4), Err(Error::NotAPlayer(4)));
        let s8 = standard_tournament(8).unwrap();
        assert_eq!(s8.meeting_match(0, 7), Ok(s8.sink()));
    }

    #[test]
    fn restrict_examples() {
        let t = four_players();
        let whole = t.restrict(t.sink()).unwrap();
        assert_eq!(whole.tournament, t);
        let rx = t.restrict(v(&t, "x")).unwrap();
        assert_eq!(rx.tournament.vertex_count(), 3);
        assert_eq!(rx.tournament.label(rx.tournament.sink()), "x");
        assert_eq!(rx.root(), v(&t, "x"));
        let ra = t.restrict(v(&t, "a")).unwrap();
        assert_eq!(ra.tournament.vertex_count(), 1);
        assert!(t.restrict(42).is_err());
    }

    #[test]
    fn standard_sizes() {
        assert_eq!(standard_tournament(2).unwrap().vertex_count(), 3);
        let s8 = standard_tournament(8).unwrap();
        assert_eq!(s8.vertex_count(), 15);
        assert_eq!(s8.matches().len(), 7);
        assert!(s8.is_standard());
        assert_eq!(standard_tournament(6), Err(Error::NotPowerOfTwo(6)));
        assert_eq!(standard_tournament(1), Err(Error::NotPowerOfTwo(1)));
    }

    #[test]
    fn shapes_for_tiny_sizes() {
        let s2 = enumerate_shapes(2).unwrap();
        assert_eq!(s2.len(), 2);
        let s3 = enumerate_shapes(3).unwrap();
        let keys: Vec<String> = s3.iter().skip(2).map(|t| t.shape_id().0).collect();
        assert_eq!(keys, ["((pp)p)", "(ppp)"]);
        assert!(enumerate_shapes(0).is_err());
        assert!(enumerate_shapes(13).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(random_tournament(4, 7).unwrap(), random_tournament(4, 7).unwrap());
        let t = random_tournament(6, 3).unwrap();
        assert_eq!(t.player_count(), 6);
        assert_eq!(random_tournament(1, 9).unwrap().vertex_count(), 1);
        assert!(random_tournament(0, 1).is_err());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Tournament::parse("{"), Err(Error::Parse { .. })));
        assert!(matches!(Tournament::parse("[1]"), Err(Error::Parse { .. })));
        assert!(matches!(
            Tournament::parse(r#"{"id":"z","children":["a","a"]}"#),
            Err(Error::DuplicateId(_))
        ));
        assert!(matches!(
            Tournament::parse(r#"{"id":"z","children":["a"]}"#),
            Err(Error::UnaryInNeighbor(_))
        ));
        assert!(matches!(
            Tournament::parse(r#"{"id":"z","children":["a","b"],"extra":1}"#),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn serialize_matches_documented_format() {
        assert_eq!(four_players().serialize(), FOUR_PLAYERS);
    }

    #[test]
    fn player_children_come_first() {
        let t = Tournament::parse(r#"{"id":"z","children":[{"id":"x","children":["a","b"]},"c"]}"#).unwrap();
        assert_eq!(t.label(0), "c");
        assert_eq!(
            t.serialize(),
            r#"{"id":"z","children":["c",{"id":"x","children":["a","b"]}]}"#
        );
        assert_eq!(Tournament::parse(&t.serialize()).unwrap(), t);
    }
}
