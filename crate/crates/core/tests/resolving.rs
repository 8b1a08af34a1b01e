use bracketdim::bracket::{enumerate_brackets, sample_uniform};
use bracketdim::resolving::{
    best_singleton_resolution, check_universal, construct_favorites, decode, dim_lower_bound,
    dim_upper_bound, estimate_resolution_probability, exists_resolving_set_of_size, is_resolving,
    metric_dimension_exact, necessary_condition_violations, resolving_number_bounds, score_vector,
    Decoder, SearchOptions, UniversalVerdict,
};
use bracketdim::scoring::{constant_scoring, distinct_subset_sum_scoring, random_scoring};
use bracketdim::tournament::{enumerate_shapes, standard_tournament};
use bracketdim::{Bracket, Error, Limits, Rational, ScoringSystem, Tournament};

const FOUR_PLAYERS: &str = r#"{"id":"z","children":[{"id":"x","children":["a","b"]},{"id":"y","children":["c","d"]}]}"#;

fn four_players_with_ab_set() -> (Tournament, Vec<Bracket>) {
    let t = Tournament::parse(FOUR_PLAYERS).unwrap();
    let set = vec![
        Bracket::parse(&t, r#"{"a":"a","b":"b","c":"c","d":"d","x":"a","y":"c","z":"a"}"#).unwrap(),
        Bracket::parse(&t, r#"{"a":"a","b":"b","c":"c","d":"d","x":"b","y":"c","z":"b"}"#).unwrap(),
    ];
    (t, set)
}

fn sigmas(t: &Tournament) -> Vec<(String, ScoringSystem)> {
    let mut out = vec![
        ("dss".to_string(), distinct_subset_sum_scoring(t)),
        ("const".to_string(), constant_scoring(t, Rational::one()).unwrap()),
    ];
    out.extend((0..10).map(|s| (format!("rand{s}"), random_scoring(t, 1000 + s))));
    out
}

fn corpus() -> Vec<Tournament> {
    enumerate_shapes(7)
        .unwrap()
        .into_iter()
        .filter(|t| t.player_count() >= 2)
        .collect()
}

#[test]
fn ab_set_resolves_for_every_sigma() {
    let (t, set) = four_players_with_ab_set();
    for (_, s) in sigmas(&t) {
        let r = is_resolving(&t, &s, &set, &Limits::default()).unwrap();
        assert!(r.is_resolving && r.witness_pair.is_none());
    }
    assert_eq!(check_universal(&t, &set, &Limits::default()).unwrap().verdict, UniversalVerdict::Certified);
}

#[test]
fn collisions_come_with_a_witness() {
    let (t, set) = four_players_with_ab_set();
    let s = constant_scoring(&t, Rational::one()).unwrap();
    let r = is_resolving(&t, &s, &set[..1], &Limits::default()).unwrap();
    assert!(!r.is_resolving);
    let (b, b2) = r.witness_pair.unwrap();
    assert_ne!(b, b2);
    assert_eq!(score_vector(&s, &set[..1], &b).unwrap(), score_vector(&s, &set[..1], &b2).unwrap());
}

#[test]
fn dimension_is_sandwiched_by_the_bounds() {
    for t in corpus() {
        let lower = dim_lower_bound(&t).unwrap();
        let bounds = dim_upper_bound(&t);
        for (name, s) in sigmas(&t) {
            let exact = metric_dimension_exact(&t, &s, &Limits::default()).unwrap();
            assert!(
                lower <= exact.dim && exact.dim <= bounds.upper,
                "{} σ={name}: {lower} ≤ {} ≤ {}",
                t.shape_id().0,
                exact.dim,
                bounds.upper
            );
            assert!(is_resolving(&t, &s, &exact.witness, &Limits::default()).unwrap().is_resolving);
            assert!(is_resolving(&t, &s, &bounds.construction, &Limits::default()).unwrap().is_resolving);
            if name == "dss" {
                assert_eq!(exact.dim, lower, "{}", t.shape_id().0);
            }
        }
    }
}

#[test]
fn lower_bound_is_not_tight_for_every_sigma() {
    // the smallest instance: with constant σ, any single bracket on
    // ((pp)p) gives three distinct scores to four brackets
    let t = Tournament::parse(r#"{"id":"z","children":[{"id":"x","children":["a","b"]},"c"]}"#).unwrap();
    let s = constant_scoring(&t, Rational::one()).unwrap();
    assert_eq!(dim_lower_bound(&t).unwrap(), 1);
    assert_eq!(metric_dimension_exact(&t, &s, &Limits::default()).unwrap().dim, 2);
    assert_eq!(
        exists_resolving_set_of_size(&t, &s, 1, SearchOptions { prune: false }, &Limits::default()).unwrap(),
        None
    );
    assert_eq!(metric_dimension_exact(&t, &distinct_subset_sum_scoring(&t), &Limits::default()).unwrap().dim, 1);

    let mut gaps = 0;
    for t in corpus() {
        let lower = dim_lower_bound(&t).unwrap();
        for (_, s) in sigmas(&t) {
            if metric_dimension_exact(&t, &s, &Limits::default()).unwrap().dim > lower {
                gaps += 1;
            }
        }
    }
    assert!(gaps > 0);
}

#[test]
fn pruning_does_not_change_search_results() {
    for t in corpus().into_iter().filter(|t| t.player_count() <= 5) {
        for (_, s) in sigmas(&t).into_iter().take(3) {
            let lower = dim_lower_bound(&t).unwrap();
            for k in lower.saturating_sub(1)..=lower + 1 {
                let a = exists_resolving_set_of_size(&t, &s, k, SearchOptions { prune: true }, &Limits::default()).unwrap();
                let b = exists_resolving_set_of_size(&t, &s, k, SearchOptions { prune: false }, &Limits::default()).unwrap();
                assert_eq!(a.is_some(), b.is_some());
            }
        }
    }
}

#[test]
fn necessary_condition_violations_never_resolve() {
    for t in corpus().into_iter().filter(|t| t.player_count() <= 5) {
        let all = enumerate_brackets(&t, 1 << 12).unwrap();
        for seed in 0..20u64 {
            let size = 1 + seed as usize % 3;
            let set: Vec<Bracket> = (0..size).map(|i| sample_uniform(&t, seed * 7 + i as u64)).collect();
            if necessary_condition_violations(&t, &set).unwrap().is_empty() {
                continue;
            }
            for (_, s) in sigmas(&t) {
                assert!(!is_resolving(&t, &s, &set, &Limits::default()).unwrap().is_resolving);
            }
        }
        assert!(necessary_condition_violations(&t, &all).unwrap().is_empty());
    }
}

#[test]
fn favorites_resolve_for_every_sigma() {
    for t in corpus().into_iter().filter(|t| t.player_count() <= 6) {
        let base = sample_uniform(&t, 5);
        let set = construct_favorites(&t, &base).unwrap();
        for (name, s) in sigmas(&t) {
            assert!(
                is_resolving(&t, &s, &set, &Limits::default()).unwrap().is_resolving,
                "{} σ={name}",
                t.shape_id().0
            );
        }
        let verdict = check_universal(&t, &set, &Limits::default()).unwrap().verdict;
        assert_ne!(verdict, UniversalVerdict::Refuted);
    }
}

#[test]
fn standard_constructions_are_universal() {
    for n in [4, 8] {
        let t = standard_tournament(n).unwrap();
        let set = dim_upper_bound(&t).construction;
        assert_eq!(set.len(), n / 2);
        assert_eq!(check_universal(&t, &set, &Limits::default()).unwrap().verdict, UniversalVerdict::Certified);
    }
}

#[test]
fn decoding_round_trips_exhaustively() {
    for t in corpus().into_iter().filter(|t| t.player_count() <= 5) {
        let bounds = dim_upper_bound(&t);
        for (_, s) in sigmas(&t).into_iter().take(3) {
            let dec = Decoder::new(&t, &s, &bounds.construction, &Limits::default()).unwrap();
            for b in enumerate_brackets(&t, 1 << 12).unwrap() {
                let scores = score_vector(&s, &bounds.construction, &b).unwrap();
                assert_eq!(dec.decode(&scores).unwrap(), b);
            }
        }
    }
}

#[test]
fn decoding_reports_inconsistent_and_ambiguous_scores() {
    let (t, set) = four_players_with_ab_set();
    let s = constant_scoring(&t, Rational::one()).unwrap();
    let lim = Limits::default();
    assert_eq!(decode(&t, &s, &set, &[Rational::from(3i64), Rational::from(1i64)], &lim).unwrap(), set[0]);
    // zero agreement with both members
    let zeros = [Rational::zero(), Rational::zero()];
    match decode(&t, &s, &set, &zeros, &lim) {
        Ok(b) => assert!(t.matches().iter().all(|&x| set.iter().all(|m| m.winner(x) != b.winner(x)))),
        Err(e) => assert_eq!(e, Error::NoMatch),
    }
    assert_eq!(decode(&t, &s, &set, &[Rational::new(1, 2), Rational::zero()], &lim), Err(Error::NoMatch));
    assert!(matches!(decode(&t, &s, &set[..1], &[Rational::one()], &lim), Err(Error::Ambiguous(v)) if v.len() > 1));
}

#[test]
fn resolution_estimates_agree_with_exact_values() {
    let t = standard_tournament(8).unwrap();
    let s = distinct_subset_sum_scoring(&t);
    let lim = Limits::default();
    let (best, b) = best_singleton_resolution(&t, &s, &lim).unwrap();
    assert!(best <= Rational::new(7, 16));
    let e = estimate_resolution_probability(&t, &s, &[b], 20_000, 3, &lim).unwrap();
    assert_eq!(e.exact, best);
    assert!((e.estimate - best.to_f64()).abs() < 0.02);
    assert_eq!(e.pair_bound, Some(Rational::new(7, 16)));
}

#[test]
fn resolving_number_bounds_for_small_cases() {
    let b = resolving_number_bounds(&standard_tournament(4).unwrap()).unwrap();
    assert_eq!(
        (b.lower_qpair.clone(), b.upper_qmax.clone(), b.prediction_value()),
        (Rational::from(4i64), Rational::from(6i64), Some(5))
    );
    for t in corpus() {
        let b = resolving_number_bounds(&t).unwrap();
        assert!(b.prediction > b.lower_qpair && b.prediction > b.quarter);
    }
}
