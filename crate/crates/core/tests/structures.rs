use std::collections::{HashMap, HashSet};

use bracketdim::bracket::{count_brackets, enumerate_brackets, lift_with_partition, sample_uniform, BracketSpace};
use bracketdim::resolving::{in_u, partition_players, partition_size};
use bracketdim::scoring::{
    agreement_mask, compute_probabilities, compute_probabilities_exhaustive, constant_scoring,
    distinct_subset_sum_scoring, has_distinct_subset_sums, random_scoring,
};
use bracketdim::tournament::{enumerate_shapes, single_match, standard_tournament};
use bracketdim::{Rational, Tournament};

const FOUR_PLAYERS: &str = r#"{"id":"z","children":[{"id":"x","children":["a","b"]},{"id":"y","children":["c","d"]}]}"#;

/// Series-reduced rooted trees by leaf count: multisets of at least two
/// smaller trees, counted with repetition.
fn shape_counts(max: usize) -> Vec<u64> {
    fn multichoose(kinds: u64, m: u64) -> u64 {
        (0..m).fold(1u64, |acc, i| acc * (kinds + i) / (i + 1))
    }
    let mut a = vec![0u64; max + 1];
    a[1] = 1;
    for n in 2..=max {
        // ways[s] = multisets of trees with fewer than n leaves totalling s
        let mut ways = vec![0u64; n + 1];
        ways[0] = 1;
        for size in 1..n {
            let mut next = vec![0u64; n + 1];
            for (s, &w) in ways.iter().enumerate() {
                let mut m = 0;
                while s + m * size <= n {
                    next[s + m * size] += w * multichoose(a[size], m as u64);
                    m += 1;
                }
            }
            ways = next;
        }
        a[n] = ways[n];
    }
    a
}

#[test]
fn shape_enumeration_matches_tree_counts() {
    let expected = shape_counts(8);
    assert_eq!(&expected[1..], &[1, 1, 2, 5, 12, 33, 90, 261]);
    let shapes = enumerate_shapes(8).unwrap();
    let mut by_players = vec![0u64; 9];
    let mut keys = HashSet::new();
    for t in &shapes {
        by_players[t.player_count()] += 1;
        assert!(keys.insert(t.shape_id()));
    }
    assert_eq!(by_players, expected);
}

#[test]
fn enumeration_lists_each_bracket_once() {
    for t in enumerate_shapes(6).unwrap() {
        let all = enumerate_brackets(&t, 1 << 16).unwrap();
        let expected: u64 = t.matches().iter().map(|&x| t.children(x).len() as u64).product();
        assert_eq!(all.len() as u64, expected);
        assert_eq!(count_brackets(&t).to_u64(), Some(expected));
        let distinct: HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
        let space = BracketSpace::new(&t, 1 << 16).unwrap();
        for (i, b) in all.iter().enumerate() {
            assert_eq!(space.index_of(b).unwrap(), i as u64);
        }
    }
}

#[test]
fn sampling_is_uniform() {
    let t = standard_tournament(4).unwrap();
    let space = BracketSpace::new(&t, 64).unwrap();
    let samples = 80_000u64;
    let mut counts = vec![0u64; 8];
    for seed in 0..samples {
        counts[space.index_of(&sample_uniform(&t, seed)).unwrap() as usize] += 1;
    }
    let expected = samples as f64 / 8.0;
    let mut chi2 = 0.0;
    for &c in &counts {
        let freq = c as f64 / samples as f64;
        assert!((freq - 0.125).abs() <= 0.01, "frequency {freq}");
        chi2 += (c as f64 - expected).powi(2) / expected;
    }
    // 7 degrees of freedom, p = 0.001
    assert!(chi2 < 24.32, "chi-square {chi2}");
}

#[test]
fn partitions_have_the_stated_size_and_companions() {
    for t in enumerate_shapes(7).unwrap() {
        for u in 0..t.vertex_count() {
            if !in_u(&t, u).unwrap() {
                assert!(partition_players(&t, u).is_err());
                continue;
            }
            let blocks = partition_players(&t, u).unwrap();
            assert_eq!(blocks.len(), partition_size(&t, u), "{} u={u}", t.shape_id().0);
            let mut covered: Vec<usize> = blocks.concat();
            covered.sort_unstable();
            let outside: Vec<usize> = t.players().iter().copied().filter(|&a| !t.contains(u, a)).collect();
            assert_eq!(covered, outside);
            for block in &blocks {
                for &a in block {
                    // a companion reaches every match a reaches
                    let x = t.parent(a).unwrap();
                    assert!(block.iter().any(|&b| b != a && t.contains(x, b)));
                }
            }
        }
    }
}

#[test]
fn lifted_blocks_see_a_companion_at_their_first_match() {
    for t in enumerate_shapes(6).unwrap() {
        for u in 0..t.vertex_count() {
            if !in_u(&t, u).unwrap() {
                continue;
            }
            let r = t.restrict(u).unwrap();
            let bases = enumerate_brackets(&r.tournament, 1 << 12).unwrap();
            for block in partition_players(&t, u).unwrap() {
                for base in bases.iter().take(4) {
                    let b = lift_with_partition(&t, &r, base, &block).unwrap();
                    assert_eq!(&b.restrict(&r), base);
                    for &a in &block {
                        let x = t.parent(a).unwrap();
                        let winners: Vec<usize> = t.children(x).iter().map(|&v| b.winner(v)).collect();
                        assert!(block.iter().any(|&c| c != a && winners.contains(&c)));
                    }
                    for &x in t.matches() {
                        if r.from_parent[x].is_none() {
                            assert!(!t.contains(u, b.winner(x)));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn lifting_with_an_empty_block_is_plain_lifting() {
    let t = Tournament::parse(FOUR_PLAYERS).unwrap();
    let u = t.vertex_by_label("y").unwrap();
    let r = t.restrict(u).unwrap();
    for base in enumerate_brackets(&r.tournament, 16).unwrap() {
        assert_eq!(
            lift_with_partition(&t, &r, &base, &[]).unwrap(),
            bracketdim::bracket::lift(&t, &r, &base).unwrap()
        );
    }
}

#[test]
fn lifting_with_the_left_pair() {
    let t = standard_tournament(4).unwrap();
    let z = t.sink();
    let right = *t.children(z).iter().max_by_key(|&&c| t.player_set(c).unwrap()[0]).unwrap();
    let r = t.restrict(right).unwrap();
    let block: Vec<usize> = t.players().iter().copied().filter(|&a| !t.contains(right, a)).collect();
    assert_eq!(block.len(), 2);
    let x = t.parent(block[0]).unwrap();
    for base in enumerate_brackets(&r.tournament, 16).unwrap() {
        let b = lift_with_partition(&t, &r, &base, &block).unwrap();
        assert!(block.contains(&b.winner(x)));
    }
}

#[test]
fn exhaustive_probabilities_match_closed_forms() {
    for t in enumerate_shapes(6).unwrap().into_iter().filter(|t| t.player_count() >= 2) {
        assert_eq!(compute_probabilities(&t).unwrap(), compute_probabilities_exhaustive(&t, 1 << 16).unwrap());
    }
    let p = compute_probabilities(&standard_tournament(4).unwrap()).unwrap();
    assert_eq!((p.q_max, p.q_pair), (Rational::new(1, 4), Rational::new(1, 2)));
    for k in 2..=6 {
        let p = compute_probabilities(&single_match(k).unwrap()).unwrap();
        assert_eq!(p.q_max, Rational::new(1, k as i64));
        assert_eq!(p.q_pair, Rational::new(2, k as i64));
    }
}

#[test]
fn equal_scores_under_distinct_sums_mean_equal_agreement() {
    for t in [Tournament::parse(FOUR_PLAYERS).unwrap(), single_match(3).unwrap()] {
        let sigma = distinct_subset_sum_scoring(&t);
        assert!(has_distinct_subset_sums(&sigma).unwrap());
        let all = enumerate_brackets(&t, 64).unwrap();
        for b0 in &all {
            let mut seen: HashMap<Rational, u128> = HashMap::new();
            for b in &all {
                let mask = agreement_mask(&t, b0, b);
                let s = sigma.score(b0, b).unwrap();
                assert_eq!(*seen.entry(s).or_insert(mask), mask);
            }
        }
    }
}

#[test]
fn scoring_json_round_trips() {
    let t = Tournament::parse(FOUR_PLAYERS).unwrap();
    for sigma in [
        distinct_subset_sum_scoring(&t),
        constant_scoring(&t, Rational::new(3, 7)).unwrap(),
        random_scoring(&t, 11),
    ] {
        let text = sigma.to_json(&t).unwrap().to_string();
        let back = bracketdim::ScoringSystem::parse(&t, &text).unwrap();
        assert_eq!(back.weights(), sigma.weights());
    }
}
