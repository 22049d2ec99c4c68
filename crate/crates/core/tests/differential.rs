use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wdsparql::eval::oracle::brute_force_evaluate;
use wdsparql::normalform::to_opt_normal_form;
use wdsparql::random::{random_graph, random_non_onf_well_designed, random_pattern, PatternConfig};
use wdsparql::{evaluate, print_pattern};

#[test]
fn engine_matches_naive_evaluator() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for ops in [0, 1, 2, 4, 6, 8] {
        for _ in 0..40 {
            let cfg = PatternConfig {
                operators: ops,
                ..PatternConfig::default()
            };
            let p = random_pattern(&mut rng, &cfg);
            let g = random_graph(&mut rng, 12);
            assert_eq!(
                evaluate(&p, &g),
                brute_force_evaluate(&p, &g).unwrap(),
                "{}",
                print_pattern(&p)
            );
        }
    }
}

#[test]
fn engine_matches_naive_evaluator_with_union_and_select() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let cfg = PatternConfig {
        operators: 6,
        allow_union: true,
        allow_select: true,
        safe_filter_bias: 0.5,
    };
    for _ in 0..150 {
        let p = random_pattern(&mut rng, &cfg);
        let g = random_graph(&mut rng, 12);
        assert_eq!(
            evaluate(&p, &g),
            brute_force_evaluate(&p, &g).unwrap(),
            "{}",
            print_pattern(&p)
        );
    }
}

#[test]
fn normalization_preserves_answers() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..120 {
        let p = random_non_onf_well_designed(&mut rng, 8);
        let (onf, trace) = to_opt_normal_form(&p).unwrap();
        assert!(onf.is_opt_normal_form());
        assert!(!trace.is_empty());
        assert_eq!(trace.replay(&p).unwrap(), onf);
        for _ in 0..5 {
            let g = random_graph(&mut rng, 12);
            assert_eq!(
                brute_force_evaluate(&onf, &g).unwrap(),
                brute_force_evaluate(&p, &g).unwrap(),
                "{} vs {}",
                print_pattern(&p),
                print_pattern(&onf)
            );
        }
    }
}
