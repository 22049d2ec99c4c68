//! Random small patterns and graphs over a shared toy vocabulary, for
//! differential and property testing.
//!
//! Graph vocabulary: subjects `a b c`, predicates `p q`, objects `a b c "l"`.
//! Patterns draw variables from `?v0…?v3` and constants from the same vocabulary,
//! so joins and optional matches actually fire.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::algebra::{Constraint, Pattern, Term, TriplePattern, Var};
use crate::eval::Graph;
use crate::wellformed::is_well_designed;

const SUBJECTS: [&str; 3] = ["a", "b", "c"];
const PREDICATES: [&str; 2] = ["p", "q"];
pub const MAX_VARS: usize = 4;

fn var(i: usize) -> Var {
    Var::new(format!("v{i}"))
}

fn constant_object(rng: &mut impl Rng) -> Term {
    if rng.random_bool(0.2) {
        Term::literal("l")
    } else {
        Term::iri(SUBJECTS.choose(rng).expect("nonempty"))
    }
}

/// A graph with at most `max_triples` distinct triples (usually at least half that).
pub fn random_graph(rng: &mut impl Rng, max_triples: usize) -> Graph {
    let n = if rng.random_bool(0.1) {
        rng.random_range(0..=max_triples)
    } else {
        rng.random_range(max_triples / 2..=max_triples)
    };
    let triples = (0..n).map(|_| {
        (
            Term::iri(SUBJECTS.choose(rng).expect("nonempty")),
            Term::iri(PREDICATES.choose(rng).expect("nonempty")),
            constant_object(rng),
        )
    });
    let triples: Vec<_> = triples.collect();
    Graph::new(triples).expect("generated triples are well-typed")
}

fn random_triple(rng: &mut impl Rng, vars: &[Var]) -> TriplePattern {
    let pick = |rng: &mut _, p_var: f64, object: bool| -> Term {
        if !vars.is_empty() && Rng::random_bool(rng, p_var) {
            Term::Var(vars.choose(rng).expect("nonempty").clone())
        } else if object {
            constant_object(rng)
        } else {
            Term::iri(SUBJECTS.choose(rng).expect("nonempty"))
        }
    };
    let subject = pick(rng, 0.8, false);
    let object = pick(rng, 0.7, true);
    let predicate = if !vars.is_empty() && rng.random_bool(0.1) {
        Term::Var(vars.choose(rng).expect("nonempty").clone())
    } else {
        Term::iri(PREDICATES.choose(rng).expect("nonempty"))
    };
    TriplePattern::new(subject, predicate, object)
}

/// A constraint over `scope` (or over any variable when `scope` is empty).
pub fn random_constraint(rng: &mut impl Rng, scope: &[Var], depth: usize) -> Constraint {
    let all: Vec<Var> = (0..MAX_VARS).map(var).collect();
    let vars = if scope.is_empty() { &all[..] } else { scope };
    let pick = |rng: &mut _| vars.choose(rng).expect("nonempty").clone();
    let choice = if depth == 0 {
        rng.random_range(0..3)
    } else {
        rng.random_range(0..6)
    };
    match choice {
        0 => Constraint::bound(pick(rng)),
        1 => Constraint::eq_term(pick(rng), constant_object(rng)),
        2 => Constraint::eq_vars(pick(rng), pick(rng)),
        3 => Constraint::not(random_constraint(rng, scope, depth - 1)),
        4 => Constraint::and(
            random_constraint(rng, scope, depth - 1),
            random_constraint(rng, scope, depth - 1),
        ),
        _ => Constraint::or(
            random_constraint(rng, scope, depth - 1),
            random_constraint(rng, scope, depth - 1),
        ),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PatternConfig {
    /// Number of operator nodes (everything except triples).
    pub operators: usize,
    pub allow_union: bool,
    pub allow_select: bool,
    /// Probability that a FILTER only mentions variables of its operand.
    pub safe_filter_bias: f64,
}

impl Default for PatternConfig {
    fn default() -> Self {
        PatternConfig {
            operators: 8,
            allow_union: false,
            allow_select: false,
            safe_filter_bias: 0.85,
        }
    }
}

/// A random pattern with exactly `cfg.operators` operator nodes, labels renumbered.
pub fn random_pattern(rng: &mut impl Rng, cfg: &PatternConfig) -> Pattern {
    let vars: Vec<Var> = (0..MAX_VARS).map(var).collect();
    gen_pattern(rng, cfg, cfg.operators, &vars).renumber_opts()
}

fn gen_pattern(rng: &mut impl Rng, cfg: &PatternConfig, ops: usize, vars: &[Var]) -> Pattern {
    if ops == 0 {
        return Pattern::Triple(random_triple(rng, vars));
    }
    let mut kinds = vec!["and", "and", "opt", "opt", "filter"];
    if cfg.allow_union {
        kinds.push("union");
    }
    if cfg.allow_select {
        kinds.push("select");
    }
    let kind = *kinds.choose(rng).expect("nonempty");
    match kind {
        "filter" | "select" => {
            let inner = gen_pattern(rng, cfg, ops - 1, vars);
            if kind == "select" {
                let keep: Vec<Var> = vars.iter().filter(|_| rng.random_bool(0.5)).cloned().collect();
                return Pattern::select(keep, inner);
            }
            let scope: Vec<Var> = if rng.random_bool(cfg.safe_filter_bias) {
                inner.variables().into_iter().collect()
            } else {
                Vec::new()
            };
            let depth = rng.random_range(0..=1);
            if scope.is_empty() && !inner.variables().is_empty() && rng.random_bool(cfg.safe_filter_bias) {
                let s: Vec<Var> = inner.variables().into_iter().collect();
                return Pattern::filter(inner, random_constraint(rng, &s, depth));
            }
            Pattern::filter(inner, random_constraint(rng, &scope, depth))
        }
        _ => {
            let left_ops = rng.random_range(0..ops);
            let l = gen_pattern(rng, cfg, left_ops, vars);
            let r = gen_pattern(rng, cfg, ops - 1 - left_ops, vars);
            match kind {
                "and" => Pattern::and(l, r),
                "opt" => Pattern::opt(0, l, r),
                _ => Pattern::union(l, r),
            }
        }
    }
}

/// A random well-designed pattern in OPT normal form with `opts` OPT nodes.
///
/// The OPT skeleton is a random binary tree; each leaf is one or two triples
/// (sometimes filtered) that reuse variables of the leaf it hangs off and
/// introduce at most one fresh variable. Candidates failing the
/// well-designedness check are redrawn.
pub fn random_onf_well_designed(rng: &mut impl Rng, opts: usize) -> Pattern {
    loop {
        let mut fresh = 0usize;
        let p = gen_onf(rng, opts, &[], &mut fresh).renumber_opts();
        debug_assert!(p.is_opt_normal_form());
        if is_well_designed(&p) {
            return p;
        }
    }
}

fn gen_onf(rng: &mut impl Rng, opts: usize, inherited: &[Var], fresh: &mut usize) -> Pattern {
    if opts == 0 {
        return gen_leaf(rng, inherited, fresh);
    }
    let left_opts = rng.random_range(0..opts);
    let left = gen_onf(rng, left_opts, inherited, fresh);
    // The right arm may only share variables with the left arm's mandatory part.
    let anchor: Vec<Var> = left.bgp_unchecked().variables().into_iter().collect();
    let right = gen_onf(rng, opts - 1 - left_opts, &anchor, fresh);
    Pattern::opt(0, left, right)
}

fn gen_leaf(rng: &mut impl Rng, inherited: &[Var], fresh: &mut usize) -> Pattern {
    let mut vars: Vec<Var> = inherited.to_vec();
    let mut new_var = || {
        let v = Var::new(format!("f{fresh}"));
        *fresh += 1;
        v
    };
    // A path step from a known variable to a new one, so optional parts
    // actually extend the answers of the part they hang off.
    let subject = match vars.choose(rng) {
        Some(v) if rng.random_bool(0.9) => Term::Var(v.clone()),
        _ => {
            let v = new_var();
            vars.push(v.clone());
            Term::Var(v)
        }
    };
    let object = if rng.random_bool(0.75) {
        let v = new_var();
        vars.push(v.clone());
        Term::Var(v)
    } else {
        constant_object(rng)
    };
    let predicate = Term::iri(PREDICATES.choose(rng).expect("nonempty"));
    let mut p = Pattern::Triple(TriplePattern::new(subject, predicate, object));
    if rng.random_bool(0.25) {
        p = Pattern::and(p, Pattern::Triple(random_triple(rng, &vars)));
    }
    if rng.random_bool(0.2) {
        let scope: Vec<Var> = p.variables().into_iter().collect();
        p = Pattern::filter(p, random_constraint(rng, &scope, 1));
    }
    p
}

/// Applies one reversed rewrite rule at a random position, if any applies:
/// `(P AND Q) OPT R` becomes `(P OPT R) AND Q` or `P AND (Q OPT R)`, and
/// `(P FILTER C) OPT R` becomes `(P OPT R) FILTER C`.
pub fn denormalize_step(rng: &mut impl Rng, p: &Pattern) -> Option<Pattern> {
    let sites: Vec<usize> = p
        .preorder()
        .iter()
        .enumerate()
        .filter(|(_, n)| matches!(n, Pattern::Opt(_, l, _) if matches!(**l, Pattern::And(..) | Pattern::Filter(..))))
        .map(|(i, _)| i)
        .collect();
    let site = *sites.choose(rng)?;
    let flip = rng.random_bool(0.5);
    let mut counter = 0;
    Some(rewrite_site(p, site, flip, &mut counter))
}

fn rewrite_site(p: &Pattern, site: usize, flip: bool, counter: &mut usize) -> Pattern {
    let here = *counter;
    *counter += 1;
    if here == site {
        if let Pattern::Opt(id, l, r) = p {
            match &**l {
                Pattern::And(a, b) if flip => {
                    return Pattern::and((**a).clone(), Pattern::Opt(*id, b.clone(), r.clone()));
                }
                Pattern::And(a, b) => {
                    return Pattern::and(Pattern::Opt(*id, a.clone(), r.clone()), (**b).clone());
                }
                Pattern::Filter(a, c) => {
                    return Pattern::filter(Pattern::Opt(*id, a.clone(), r.clone()), c.clone());
                }
                _ => unreachable!("site filter guarantees an AND or FILTER left arm"),
            }
        }
    }
    match p {
        Pattern::Triple(_) => p.clone(),
        Pattern::And(a, b) => {
            let a = rewrite_site(a, site, flip, counter);
            Pattern::and(a, rewrite_site(b, site, flip, counter))
        }
        Pattern::Opt(id, a, b) => {
            let a = rewrite_site(a, site, flip, counter);
            Pattern::Opt(*id, Box::new(a), Box::new(rewrite_site(b, site, flip, counter)))
        }
        Pattern::Union(a, b) => {
            let a = rewrite_site(a, site, flip, counter);
            Pattern::union(a, rewrite_site(b, site, flip, counter))
        }
        Pattern::Filter(a, c) => Pattern::filter(rewrite_site(a, site, flip, counter), c.clone()),
        Pattern::Select(vars, a) => Pattern::Select(vars.clone(), Box::new(rewrite_site(a, site, flip, counter))),
    }
}

/// A well-designed pattern that is not in OPT normal form.
///
/// Alternates between two sources: random AND/OPT/FILTER patterns kept only
/// if well-designed, and well-designed ONF patterns pushed out of normal form
/// by reversed rewrite steps.
pub fn random_non_onf_well_designed(rng: &mut impl Rng, max_operators: usize) -> Pattern {
    loop {
        if rng.random_bool(0.5) {
            let cfg = PatternConfig {
                operators: rng.random_range(2..=max_operators.max(2)),
                ..PatternConfig::default()
            };
            let p = random_pattern(rng, &cfg);
            if !p.is_opt_normal_form() && is_well_designed(&p) {
                return p;
            }
        } else {
            let opts = rng.random_range(1..=3);
            let mut p = random_onf_well_designed(rng, opts);
            for _ in 0..rng.random_range(1..=3) {
                match denormalize_step(rng, &p) {
                    Some(q) if is_well_designed(&q) => p = q,
                    _ => break,
                }
            }
            if !p.is_opt_normal_form() && p.node_count() <= 2 * max_operators + 1 {
                return p.renumber_opts();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_their_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let g = random_graph(&mut rng, 12);
            assert!(g.len() <= 12);

            let cfg = PatternConfig::default();
            let p = random_pattern(&mut rng, &cfg);
            assert_eq!(
                p.node_count() - p.preorder().iter().filter(|n| matches!(n, Pattern::Triple(_))).count(),
                8
            );
            assert!(p.variables().len() <= MAX_VARS);

            let onf = random_onf_well_designed(&mut rng, 4);
            assert!(onf.is_opt_normal_form());
            assert_eq!(onf.opt_count(), 4);
            assert!(is_well_designed(&onf));

            let non = random_non_onf_well_designed(&mut rng, 8);
            assert!(!non.is_opt_normal_form());
            assert!(is_well_designed(&non));
        }
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let a = random_onf_well_designed(&mut ChaCha8Rng::seed_from_u64(3), 5);
        let b = random_onf_well_designed(&mut ChaCha8Rng::seed_from_u64(3), 5);
        assert_eq!(a, b);
    }
}
