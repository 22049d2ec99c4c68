use wdsparql::bench::{generate_query, opt_count_profile, ShapeKind, TreeShape};
use wdsparql::wdtree::{LdltLevel, NodeLabel};
use wdsparql::{k_approximate, Constraint, OptId, Pattern, Term, TriplePattern, Var, WdTree};

fn tp(s: &str, p: &str, o: &str) -> Pattern {
    let term = |x: &str| match x.strip_prefix('?') {
        Some(v) => Term::var(v),
        None if x == "rdf:type" => Term::rdf_type(),
        None => Term::iri(x),
    };
    Pattern::Triple(TriplePattern::new(term(s), term(p), term(o)))
}

fn opt(id: u32, l: Pattern, r: Pattern) -> Pattern {
    Pattern::opt(id, l, r)
}

fn leaf(p: &Pattern) -> WdTree {
    WdTree::Leaf(p.clone())
}

fn node(id: u32, l: WdTree, r: WdTree) -> WdTree {
    WdTree::Opt {
        id: OptId(id),
        left: Box::new(l),
        right: Box::new(r),
    }
}

mod intro_query {
    use super::*;

    fn q1() -> Pattern {
        tp("?x", "rdf:type", "professor")
    }

    fn q2() -> Pattern {
        opt(1, q1(), tp("?x", "workFor", "?y"))
    }

    fn q() -> Pattern {
        opt(1, q1(), opt(2, tp("?x", "workFor", "?y"), tp("?x", "teachOf", "?z")))
    }

    #[test]
    fn approximations_are_the_two_candidates() {
        assert_eq!(q().opt_depth().unwrap(), 2);
        assert_eq!(k_approximate(&q(), 0).unwrap(), q1());
        assert_eq!(k_approximate(&q(), 1).unwrap(), q2());
        assert_eq!(k_approximate(&q(), 2).unwrap(), q());
        assert_eq!(k_approximate(&q(), 7).unwrap(), q());
    }
}

mod two_level_example {
    use super::*;

    fn t(i: usize) -> Pattern {
        match i {
            1 => tp("?a", "p", "?b"),
            2 => tp("?a", "q", "?c"),
            3 => tp("?c", "r", "?d"),
            4 => tp("?a", "s", "?e"),
            5 => tp("?e", "u", "?f"),
            _ => unreachable!(),
        }
    }

    /// (t1 OPT (t2 OPT t3)) OPT (t4 OPT t5)
    fn p() -> Pattern {
        opt(1, opt(2, t(1), opt(3, t(2), t(3))), opt(4, t(4), t(5)))
    }

    #[test]
    fn decomposition_and_depth() {
        let p = p();
        assert_eq!(p.bgp().unwrap(), &t(1));
        let parts = p.optional_parts().unwrap();
        assert_eq!(parts, vec![&opt(3, t(2), t(3)), &opt(4, t(4), t(5))]);
        assert_eq!(p.opt_depth().unwrap(), 2);
    }

    #[test]
    fn approximations() {
        let p = p();
        assert_eq!(k_approximate(&p, 0).unwrap(), t(1));
        let p1 = k_approximate(&p, 1).unwrap();
        assert!(p1.structural_eq(&opt(0, opt(0, t(1), t(2)), t(4))));
        assert_eq!(k_approximate(&p, 2).unwrap(), p);
    }
}

mod tree_example {
    use super::*;

    pub fn t(i: usize) -> Pattern {
        match i {
            1 => tp("?x", "p1", "?y"),
            2 => tp("?x", "p2", "?a"),
            3 => tp("?y", "p3", "?w"),
            4 => tp("?x", "p4", "?b"),
            5 => tp("?b", "p5", "?c"),
            6 => tp("?b", "p6", "?d"),
            7 => tp("?d", "p7", "?e"),
            _ => unreachable!(),
        }
    }

    pub fn p0() -> Pattern {
        Pattern::filter(
            Pattern::and(t(1), t(3)),
            Constraint::not(Constraint::eq_term(Var::new("w"), Term::iri("c"))),
        )
    }

    /// ((p0 OPT t2) OPT ((t4 OPT t5) OPT (t6 OPT t7))), OPT nodes numbered in preorder.
    pub fn p() -> Pattern {
        opt(1, opt(2, p0(), t(2)), opt(3, opt(4, t(4), t(5)), opt(5, t(6), t(7))))
    }

    #[test]
    fn tree_has_the_expected_shape() {
        let expected = node(
            1,
            node(2, leaf(&p0()), leaf(&t(2))),
            node(3, node(4, leaf(&t(4)), leaf(&t(5))), node(5, leaf(&t(6)), leaf(&t(7)))),
        );
        let tree = WdTree::build(&p()).unwrap();
        assert_eq!(tree, expected);
        assert_eq!(tree.to_pattern(), p());
        assert_eq!(tree.depth(), 3);
        assert_eq!(tree.leftmost_leaf(), &p0());
    }

    fn o(i: u32) -> NodeLabel {
        NodeLabel::Opt(OptId(i))
    }

    fn l(p: Pattern) -> NodeLabel {
        NodeLabel::Leaf(p)
    }

    #[test]
    fn level_traversal_table() {
        let report = WdTree::build(&p()).unwrap().left_deep_level_traversal();
        let expected = vec![
            LdltLevel {
                traversal: vec![o(1), o(2), l(p0())],
                candidates: vec![o(3), l(t(2))],
                leftmost: vec![Some(t(4)), None],
            },
            LdltLevel {
                traversal: vec![o(3), o(4), l(t(4)), l(t(2))],
                candidates: vec![o(5), l(t(5))],
                leftmost: vec![Some(t(6)), None],
            },
            LdltLevel {
                traversal: vec![o(5), l(t(6)), l(t(5))],
                candidates: vec![l(t(7))],
                leftmost: vec![None],
            },
            LdltLevel {
                traversal: vec![l(t(7))],
                candidates: vec![],
                leftmost: vec![],
            },
        ];
        assert_eq!(report.levels, expected);

        let names = |p: &Pattern| {
            if p == &p0() {
                return "p0".to_string();
            }
            (1..=7).find(|&i| &t(i) == p).map(|i| format!("t{i}")).unwrap()
        };
        let table = report.render(&names);
        let rows: Vec<Vec<String>> = table
            .lines()
            .skip(2)
            .map(|line| {
                line.trim_matches('|')
                    .split('|')
                    .map(|c| c.trim().to_string())
                    .collect()
            })
            .collect();
        assert_eq!(
            rows,
            vec![
                vec!["0", "OPT1, OPT2, p0", "OPT3, t2", "t4, ×"],
                vec!["1", "OPT3, OPT4, t4, t2", "OPT5, t5", "t6, ×"],
                vec!["2", "OPT5, t6, t5", "t7", "×"],
                vec!["3", "t7", "", ""],
            ]
        );
    }

    #[test]
    fn pruned_trees_and_their_patterns() {
        let tree = WdTree::build(&p()).unwrap();
        let one = node(1, node(2, leaf(&p0()), leaf(&t(2))), leaf(&t(4)));
        let two = node(
            1,
            node(2, leaf(&p0()), leaf(&t(2))),
            node(3, node(4, leaf(&t(4)), leaf(&t(5))), leaf(&t(6))),
        );
        assert_eq!(tree.k_approximation(1), one);
        assert_eq!(tree.k_approximation(2), two);
        assert_eq!(tree.k_approximation(3), tree);

        assert_eq!(k_approximate(&p(), 1).unwrap(), opt(1, opt(2, p0(), t(2)), t(4)));
        assert_eq!(
            k_approximate(&p(), 2).unwrap(),
            opt(1, opt(2, p0(), t(2)), opt(3, opt(4, t(4), t(5)), t(6)))
        );
        assert_eq!(k_approximate(&p(), 0).unwrap(), p0());
    }
}

#[test]
fn opt_amounts_after_approximation() {
    let profile = |kind, n| -> Vec<usize> {
        let q = generate_query(TreeShape::new(kind, n), 0).unwrap();
        opt_count_profile(&q, 4).unwrap().into_iter().map(|(_, c)| c).collect()
    };
    assert_eq!(profile(ShapeKind::LeftDeep, 4), [0, 4, 4, 4, 4]);
    assert_eq!(profile(ShapeKind::RightDeep, 4), [0, 1, 2, 3, 4]);
    assert_eq!(profile(ShapeKind::Full, 15), [0, 4, 10, 14, 15]);
}

#[test]
fn generated_shapes_match_their_names() {
    let chain = generate_query(TreeShape::new(ShapeKind::LeftDeep, 4), 3).unwrap();
    let tree = WdTree::build(&chain).unwrap();
    // Every right child is a leaf; the left spine holds all four OPT nodes.
    assert_eq!(tree.leftmost_traversal().len(), 5);
    assert_eq!(tree.depth(), 1);

    let right = generate_query(TreeShape::new(ShapeKind::RightDeep, 4), 3).unwrap();
    let tree = WdTree::build(&right).unwrap();
    assert_eq!(tree.leftmost_traversal().len(), 2);
    assert_eq!(tree.depth(), 4);

    let full = generate_query(TreeShape::new(ShapeKind::Full, 15), 3).unwrap();
    let tree = WdTree::build(&full).unwrap();
    assert_eq!(tree.leaves().len(), 16);
    assert_eq!(tree.leftmost_traversal().len(), 5);
}
