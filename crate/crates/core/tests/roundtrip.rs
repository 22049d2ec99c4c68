use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wdsparql::random::{random_graph, random_pattern, PatternConfig};
use wdsparql::surface::format_ntriple;
use wdsparql::{parse_pattern, print_pattern, Graph, OptId, Pattern};

fn pattern_from_seed(seed: u64, operators: usize) -> Pattern {
    let cfg = PatternConfig {
        operators,
        allow_union: true,
        allow_select: true,
        safe_filter_bias: 0.5,
    };
    random_pattern(&mut ChaCha8Rng::seed_from_u64(seed), &cfg)
}

/// Same pattern with OPT labels shifted by `offset`.
fn relabel(p: &Pattern, offset: u32) -> Pattern {
    match p {
        Pattern::Triple(_) => p.clone(),
        Pattern::And(a, b) => Pattern::and(relabel(a, offset), relabel(b, offset)),
        Pattern::Opt(OptId(i), a, b) => Pattern::opt(i + offset, relabel(a, offset), relabel(b, offset)),
        Pattern::Union(a, b) => Pattern::union(relabel(a, offset), relabel(b, offset)),
        Pattern::Filter(a, c) => Pattern::filter(relabel(a, offset), c.clone()),
        Pattern::Select(vs, a) => Pattern::Select(vs.clone(), Box::new(relabel(a, offset))),
    }
}

proptest! {
    #[test]
    fn printed_patterns_parse_back(seed in any::<u64>(), ops in 0usize..10) {
        let p = pattern_from_seed(seed, ops);
        let text = print_pattern(&p);
        let back = parse_pattern(&text).map_err(|e| TestCaseError::fail(format!("{e}: {text}")))?;
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(print_pattern(&back), text);
    }

    #[test]
    fn structural_equality_ignores_labels_only(seed in any::<u64>(), other in any::<u64>(), a in 0u32..50, b in 0u32..50) {
        let p = pattern_from_seed(seed, 6);
        let (pa, pb) = (relabel(&p, a), relabel(&p, b));
        prop_assert!(p.structural_eq(&p));
        prop_assert!(pa.structural_eq(&pb) && pb.structural_eq(&pa));
        prop_assert!(p.structural_eq(&pa) && pa.structural_eq(&pb) && p.structural_eq(&pb));
        let q = pattern_from_seed(other, 6);
        prop_assert_eq!(p.structural_eq(&q), q.structural_eq(&p));
        prop_assert_eq!(p.structural_eq(&q), p.structural_key() == q.structural_key());
    }

    #[test]
    fn ntriples_ignore_line_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 12);
        let mut lines: Vec<String> = g.triples().iter().map(format_ntriple).collect();
        lines.shuffle(&mut rng);
        let permuted = Graph::from_ntriples(&(lines.join("\n") + "\n")).unwrap();
        prop_assert_eq!(permuted.triples(), g.triples());
        let reparsed = Graph::from_ntriples(&g.to_ntriples()).unwrap();
        prop_assert_eq!(reparsed.triples(), g.triples());
    }
}
