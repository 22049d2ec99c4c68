//! Rewriting well-designed patterns into OPT normal form.
//!
//! Three equivalences, valid on well-designed patterns, push OPT upwards:
//!
//! * R1: `(P OPT R) FILTER C  →  (P FILTER C) OPT R`
//! * R2: `(P OPT R) AND Q     →  (P AND Q) OPT R`
//! * R3: `P AND (Q OPT R)     →  (P AND Q) OPT R`
//!
//! Rules fire at the leftmost-innermost redex (first redex in postorder); R2
//! is preferred over R3 when both match the same AND node. A pattern with no
//! redex is in OPT normal form.

use std::fmt;

use crate::algebra::{Pattern, Term, TriplePattern};
use crate::error::{Error, Result};
use crate::surface::print_pattern;
use crate::wellformed::check_well_designed;

/// ONF recognition; see [`Pattern::is_opt_normal_form`].
pub fn is_opt_normal_form(p: &Pattern) -> bool {
    p.is_opt_normal_form()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    R1,
    R2,
    R3,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::R1 => "R1 (P OPT R) FILTER C => (P FILTER C) OPT R",
            Rule::R2 => "R2 (P OPT R) AND Q => (P AND Q) OPT R",
            Rule::R3 => "R3 P AND (Q OPT R) => (P AND Q) OPT R",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: Rule,
    /// Child indices from the root to the rewritten node.
    pub path: Vec<usize>,
    pub before: String,
    pub after: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteTrace {
    pub steps: Vec<RewriteStep>,
}

impl RewriteTrace {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    /// Re-applies every recorded step to `input`.
    pub fn replay(&self, input: &Pattern) -> Result<Pattern> {
        let mut p = input.clone();
        for (i, step) in self.steps.iter().enumerate() {
            p = rewrite_at(p, &step.path, step.rule)
                .ok_or_else(|| Error::Internal(format!("trace step {i} does not apply")))?;
        }
        Ok(p)
    }
}

fn redex_rule(p: &Pattern) -> Option<Rule> {
    match p {
        Pattern::Filter(inner, _) if matches!(**inner, Pattern::Opt(..)) => Some(Rule::R1),
        Pattern::And(a, _) if matches!(**a, Pattern::Opt(..)) => Some(Rule::R2),
        Pattern::And(_, b) if matches!(**b, Pattern::Opt(..)) => Some(Rule::R3),
        _ => None,
    }
}

fn first_redex(p: &Pattern, path: &mut Vec<usize>) -> Option<Rule> {
    for (i, child) in p.children().into_iter().enumerate() {
        path.push(i);
        if let Some(rule) = first_redex(child, path) {
            return Some(rule);
        }
        path.pop();
    }
    redex_rule(p)
}

fn apply_rule(p: Pattern, rule: Rule) -> std::result::Result<Pattern, Pattern> {
    match (rule, p) {
        (Rule::R1, Pattern::Filter(inner, c)) => match *inner {
            Pattern::Opt(id, p, r) => Ok(Pattern::Opt(id, Box::new(Pattern::Filter(p, c)), r)),
            inner => Err(Pattern::Filter(Box::new(inner), c)),
        },
        (Rule::R2, Pattern::And(a, q)) => match *a {
            Pattern::Opt(id, p, r) => Ok(Pattern::Opt(id, Box::new(Pattern::And(p, q)), r)),
            a => Err(Pattern::And(Box::new(a), q)),
        },
        (Rule::R3, Pattern::And(p, b)) => match *b {
            Pattern::Opt(id, q, r) => Ok(Pattern::Opt(id, Box::new(Pattern::And(p, q)), r)),
            b => Err(Pattern::And(p, Box::new(b))),
        },
        (_, p) => Err(p),
    }
}

fn placeholder() -> Pattern {
    let t = Term::iri("_");
    Pattern::Triple(TriplePattern::new(t.clone(), t.clone(), t))
}

fn subtree_mut<'a>(mut p: &'a mut Pattern, path: &[usize]) -> Option<&'a mut Pattern> {
    for &i in path {
        p = match (p, i) {
            (Pattern::And(a, _) | Pattern::Opt(_, a, _) | Pattern::Union(a, _), 0) => a,
            (Pattern::And(_, b) | Pattern::Opt(_, _, b) | Pattern::Union(_, b), 1) => b,
            (Pattern::Filter(inner, _) | Pattern::Select(_, inner), 0) => inner,
            _ => return None,
        };
    }
    Some(p)
}

fn rewrite_at(mut p: Pattern, path: &[usize], rule: Rule) -> Option<Pattern> {
    let slot = subtree_mut(&mut p, path)?;
    let node = std::mem::replace(slot, placeholder());
    match apply_rule(node, rule) {
        Ok(new) => {
            *slot = new;
            Some(p)
        }
        Err(_) => None,
    }
}

fn reject_unsupported(p: &Pattern) -> Result<()> {
    for node in p.preorder() {
        match node {
            Pattern::Union(..) => return Err(Error::UnsupportedNode("UNION")),
            Pattern::Select(..) => return Err(Error::UnsupportedNode("SELECT")),
            _ => {}
        }
    }
    Ok(())
}

/// One rewrite at the leftmost-innermost redex, or `None` when `p` is in ONF.
pub fn apply_rewrite_step(p: &Pattern) -> Result<Option<(Pattern, RewriteStep)>> {
    reject_unsupported(p)?;
    Ok(step_unchecked(p))
}

fn step_unchecked(p: &Pattern) -> Option<(Pattern, RewriteStep)> {
    let mut path = Vec::new();
    let rule = first_redex(p, &mut path)?;
    let mut out = p.clone();
    let slot = subtree_mut(&mut out, &path).expect("redex path is valid");
    let before = print_pattern(slot);
    let node = std::mem::replace(slot, placeholder());
    *slot = apply_rule(node, rule).expect("redex matches its rule");
    let after = print_pattern(slot);
    Some((
        out,
        RewriteStep {
            rule,
            path,
            before,
            after,
        },
    ))
}

/// Rewrites a well-designed pattern into an equivalent one in OPT normal form.
/// A top-level SELECT is kept as the outermost node.
pub fn to_opt_normal_form(p: &Pattern) -> Result<(Pattern, RewriteTrace)> {
    let violations = check_well_designed(p);
    if !violations.is_empty() {
        return Err(Error::NotWellDesigned(violations));
    }
    if let Pattern::Select(vars, inner) = p {
        let (onf, trace) = rewrite_exhaustively(inner)?;
        let mut trace = trace;
        for step in &mut trace.steps {
            step.path.insert(0, 0);
        }
        return Ok((Pattern::Select(vars.clone(), Box::new(onf)), trace));
    }
    rewrite_exhaustively(p)
}

/// Applies rewrite steps until none matches. The result is always in OPT
/// normal form, but it is only guaranteed equivalent to `p` when `p` is
/// well-designed; [`to_opt_normal_form`] checks that first.
pub fn rewrite_exhaustively(p: &Pattern) -> Result<(Pattern, RewriteTrace)> {
    reject_unsupported(p)?;
    let limit = (p.opt_count() * p.node_count()).max(1);
    let mut trace = RewriteTrace::default();
    let mut cur = p.clone();
    while let Some((next, step)) = step_unchecked(&cur) {
        if trace.steps.len() >= limit {
            return Err(Error::Internal(format!("rewriting exceeded {limit} steps")));
        }
        trace.steps.push(step);
        cur = next;
    }
    debug_assert!(cur.is_opt_normal_form());
    Ok((cur, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_pattern;

    fn parse(s: &str) -> Pattern {
        parse_pattern(s).unwrap()
    }

    #[test]
    fn onf_recognition() {
        assert!(is_opt_normal_form(&parse(
            "{?x rdf:type professor OPTIONAL {?x workFor ?y OPTIONAL {?x teachOf ?z}}}"
        )));
        assert!(!is_opt_normal_form(&parse(
            "{ { ?x p ?y OPTIONAL { ?x q ?z } } . ?x r ?z }"
        )));
        assert!(is_opt_normal_form(&parse("{ ?x p ?y . ?y q ?z FILTER(BOUND(?x)) }")));
    }

    #[test]
    fn r2_on_the_non_onf_example() {
        let p = parse("{ { ?x p ?y OPTIONAL { ?x q ?z } } . ?x r ?z }");
        let (out, step) = apply_rewrite_step(&p).unwrap().unwrap();
        assert_eq!(step.rule, Rule::R2);
        assert!(step.path.is_empty());
        let expected = parse("{ ?x p ?y . ?x r ?z OPTIONAL { ?x q ?z } }");
        assert!(out.structural_eq(&expected), "{}", print_pattern(&out));
        assert!(apply_rewrite_step(&out).unwrap().is_none());

        // The example is not well-designed (?z), so only the raw engine accepts it.
        let (fix, trace) = rewrite_exhaustively(&p).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(fix, out);
        assert!(matches!(to_opt_normal_form(&p), Err(Error::NotWellDesigned(_))));
    }

    #[test]
    fn r1_moves_filter_inside() {
        let p = parse("{ { ?x p ?y OPTIONAL { ?x q ?z } } FILTER(BOUND(?y)) }");
        let (out, step) = apply_rewrite_step(&p).unwrap().unwrap();
        assert_eq!(step.rule, Rule::R1);
        let expected = parse("{ { ?x p ?y FILTER(BOUND(?y)) } OPTIONAL { ?x q ?z } }");
        assert!(out.structural_eq(&expected), "{}", print_pattern(&out));
    }

    #[test]
    fn r3_moves_right_opt_up() {
        let p = parse("{ ?x p ?y . { ?x q ?z OPTIONAL { ?z r ?w } } }");
        let (out, step) = apply_rewrite_step(&p).unwrap().unwrap();
        assert_eq!(step.rule, Rule::R3);
        let expected = parse("{ ?x p ?y . ?x q ?z OPTIONAL { ?z r ?w } }");
        assert!(out.structural_eq(&expected));
    }

    #[test]
    fn onf_input_has_no_redex() {
        let q = parse("{?x rdf:type professor OPTIONAL {?x workFor ?y OPTIONAL {?x teachOf ?z}}}");
        assert!(apply_rewrite_step(&q).unwrap().is_none());
        let (out, trace) = to_opt_normal_form(&q).unwrap();
        assert_eq!(out, q);
        assert!(trace.is_empty());
    }

    #[test]
    fn opt_ids_survive_rewriting() {
        let p = parse("{ { ?x p ?y OPTIONAL { ?x q ?z } } . { ?x r ?w OPTIONAL { ?w s ?v } } }");
        let (out, trace) = to_opt_normal_form(&p).unwrap();
        assert!(out.is_opt_normal_form());
        let mut before = p.opt_ids();
        let mut after = out.opt_ids();
        before.sort();
        after.sort();
        assert_eq!(before, after);
        assert_eq!(trace.replay(&p).unwrap(), out);
    }

    #[test]
    fn innermost_redex_first() {
        let p = parse("{ { { ?x p ?y OPTIONAL { ?x q ?z } } . ?x r ?w } FILTER(BOUND(?x)) }");
        let (_, step) = apply_rewrite_step(&p).unwrap().unwrap();
        assert_eq!(step.rule, Rule::R2);
        assert_eq!(step.path, vec![0]);
    }

    #[test]
    fn select_is_rewrapped_and_union_rejected() {
        let p = parse("SELECT ?x WHERE { { ?x p ?y OPTIONAL { ?x q ?z } } . ?x r ?w }");
        let (out, trace) = to_opt_normal_form(&p).unwrap();
        assert!(matches!(&out, Pattern::Select(_, inner) if inner.is_opt_normal_form()));
        assert_eq!(trace.steps[0].path, vec![0]);
        assert_eq!(trace.replay(&p).unwrap(), out);

        let u = parse("{ {?x p ?y} UNION {?x q ?y} }");
        assert!(matches!(apply_rewrite_step(&u), Err(Error::UnsupportedNode("UNION"))));
        assert!(matches!(to_opt_normal_form(&u), Err(Error::NotWellDesigned(_))));
    }
}
