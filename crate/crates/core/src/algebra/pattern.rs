use std::collections::BTreeSet;
use std::fmt;

use super::constraint::Constraint;
use super::term::{TriplePattern, Var};
use crate::error::{Error, Result};

/// Label of an OPT node. Ordinals are positive and unique within a pattern,
/// assigned in preorder by the parser and by [`Pattern::renumber_opts`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OptId(pub u32);

impl fmt::Display for OptId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OPT{}", self.0)
    }
}

/// A graph pattern.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    Triple(TriplePattern),
    And(Box<Pattern>, Box<Pattern>),
    Opt(OptId, Box<Pattern>, Box<Pattern>),
    Union(Box<Pattern>, Box<Pattern>),
    Filter(Box<Pattern>, Constraint),
    Select(BTreeSet<Var>, Box<Pattern>),
}

impl From<TriplePattern> for Pattern {
    fn from(t: TriplePattern) -> Self {
        Pattern::Triple(t)
    }
}

impl Pattern {
    pub fn and(a: impl Into<Pattern>, b: impl Into<Pattern>) -> Self {
        Pattern::And(Box::new(a.into()), Box::new(b.into()))
    }

    pub fn opt(id: u32, a: impl Into<Pattern>, b: impl Into<Pattern>) -> Self {
        Pattern::Opt(OptId(id), Box::new(a.into()), Box::new(b.into()))
    }

    pub fn union(a: impl Into<Pattern>, b: impl Into<Pattern>) -> Self {
        Pattern::Union(Box::new(a.into()), Box::new(b.into()))
    }

    pub fn filter(p: impl Into<Pattern>, c: Constraint) -> Self {
        Pattern::Filter(Box::new(p.into()), c)
    }

    pub fn select(vars: impl IntoIterator<Item = Var>, p: impl Into<Pattern>) -> Self {
        Pattern::Select(vars.into_iter().collect(), Box::new(p.into()))
    }

    /// Immediate subpatterns, left to right.
    pub fn children(&self) -> Vec<&Pattern> {
        match self {
            Pattern::Triple(_) => vec![],
            Pattern::And(a, b) | Pattern::Opt(_, a, b) | Pattern::Union(a, b) => vec![a, b],
            Pattern::Filter(p, _) | Pattern::Select(_, p) => vec![p],
        }
    }

    /// All subpatterns in preorder, including `self`.
    pub fn preorder(&self) -> Vec<&Pattern> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(p) = stack.pop() {
            out.push(p);
            stack.extend(p.children().into_iter().rev());
        }
        out
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.node_count()).sum::<usize>()
    }

    /// var(P): variables occurring in triples, constraints and projection lists.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut BTreeSet<Var>) {
        match self {
            Pattern::Triple(t) => out.extend(t.variables().cloned()),
            Pattern::And(a, b) | Pattern::Opt(_, a, b) | Pattern::Union(a, b) => {
                a.collect_variables(out);
                b.collect_variables(out);
            }
            Pattern::Filter(p, c) => {
                p.collect_variables(out);
                c.collect_variables(out);
            }
            Pattern::Select(vars, p) => {
                out.extend(vars.iter().cloned());
                p.collect_variables(out);
            }
        }
    }

    /// AF-pattern: built from triples with AND and FILTER only.
    pub fn is_af_pattern(&self) -> bool {
        match self {
            Pattern::Triple(_) => true,
            Pattern::And(a, b) => a.is_af_pattern() && b.is_af_pattern(),
            Pattern::Filter(p, _) => p.is_af_pattern(),
            Pattern::Opt(..) | Pattern::Union(..) | Pattern::Select(..) => false,
        }
    }

    /// An AF-pattern, or an OPT whose two arms are in OPT normal form.
    pub fn is_opt_normal_form(&self) -> bool {
        match self {
            Pattern::Opt(_, a, b) => a.is_opt_normal_form() && b.is_opt_normal_form(),
            p => p.is_af_pattern(),
        }
    }

    /// BGP(P): the OPT-free head P₀ of `P₀ OPT P₁ OPT … OPT Pₘ`.
    pub fn bgp(&self) -> Result<&Pattern> {
        self.require_onf()?;
        Ok(self.bgp_unchecked())
    }

    /// O(P): the optional parts `[P₁, …, Pₘ]`, left to right.
    pub fn optional_parts(&self) -> Result<Vec<&Pattern>> {
        self.require_onf()?;
        Ok(self.optional_parts_unchecked())
    }

    /// OPT-depth: 0 for AF-patterns, otherwise one more than the deepest optional part.
    pub fn opt_depth(&self) -> Result<usize> {
        self.require_onf()?;
        Ok(self.opt_depth_unchecked())
    }

    pub fn opt_count(&self) -> usize {
        let own = usize::from(matches!(self, Pattern::Opt(..)));
        own + self.children().iter().map(|c| c.opt_count()).sum::<usize>()
    }

    fn require_onf(&self) -> Result<()> {
        if self.is_opt_normal_form() {
            Ok(())
        } else {
            Err(Error::NotInOptNormalForm)
        }
    }

    pub(crate) fn bgp_unchecked(&self) -> &Pattern {
        let mut cur = self;
        while let Pattern::Opt(_, left, _) = cur {
            cur = left;
        }
        cur
    }

    pub(crate) fn optional_parts_unchecked(&self) -> Vec<&Pattern> {
        let mut parts = Vec::new();
        let mut cur = self;
        while let Pattern::Opt(_, left, right) = cur {
            parts.push(&**right);
            cur = left;
        }
        parts.reverse();
        parts
    }

    pub(crate) fn opt_depth_unchecked(&self) -> usize {
        self.optional_parts_unchecked()
            .into_iter()
            .map(|p| p.opt_depth_unchecked() + 1)
            .max()
            .unwrap_or(0)
    }

    /// Tree equality that ignores OPT labels.
    pub fn structural_eq(&self, other: &Pattern) -> bool {
        match (self, other) {
            (Pattern::Triple(a), Pattern::Triple(b)) => a == b,
            (Pattern::And(a1, b1), Pattern::And(a2, b2))
            | (Pattern::Opt(_, a1, b1), Pattern::Opt(_, a2, b2))
            | (Pattern::Union(a1, b1), Pattern::Union(a2, b2)) => a1.structural_eq(a2) && b1.structural_eq(b2),
            (Pattern::Filter(p1, c1), Pattern::Filter(p2, c2)) => c1 == c2 && p1.structural_eq(p2),
            (Pattern::Select(s1, p1), Pattern::Select(s2, p2)) => s1 == s2 && p1.structural_eq(p2),
            _ => false,
        }
    }

    /// Copy of the pattern with every OPT label reset to 0, usable as a
    /// hash/set key that identifies patterns up to [`Pattern::structural_eq`].
    pub fn structural_key(&self) -> Pattern {
        self.map_opt_ids(&mut |_| OptId(0))
    }

    /// Relabels OPT nodes 1, 2, … in preorder.
    pub fn renumber_opts(&self) -> Pattern {
        let mut next = 0;
        self.map_opt_ids(&mut |_| {
            next += 1;
            OptId(next)
        })
    }

    fn map_opt_ids(&self, f: &mut impl FnMut(OptId) -> OptId) -> Pattern {
        match self {
            Pattern::Triple(t) => Pattern::Triple(t.clone()),
            Pattern::And(a, b) => {
                let a = a.map_opt_ids(f);
                Pattern::And(Box::new(a), Box::new(b.map_opt_ids(f)))
            }
            Pattern::Opt(id, a, b) => {
                let id = f(*id);
                let a = a.map_opt_ids(f);
                Pattern::Opt(id, Box::new(a), Box::new(b.map_opt_ids(f)))
            }
            Pattern::Union(a, b) => {
                let a = a.map_opt_ids(f);
                Pattern::Union(Box::new(a), Box::new(b.map_opt_ids(f)))
            }
            Pattern::Filter(p, c) => Pattern::Filter(Box::new(p.map_opt_ids(f)), c.clone()),
            Pattern::Select(vars, p) => Pattern::Select(vars.clone(), Box::new(p.map_opt_ids(f))),
        }
    }

    /// OPT labels in preorder.
    pub fn opt_ids(&self) -> Vec<OptId> {
        self.preorder()
            .into_iter()
            .filter_map(|p| match p {
                Pattern::Opt(id, ..) => Some(*id),
                _ => None,
            })
            .collect()
    }

    /// Calls `f` for every variable occurrence (triples, constraints and
    /// projection lists), duplicates included.
    pub(crate) fn for_each_var_occurrence(&self, f: &mut impl FnMut(&Var)) {
        match self {
            Pattern::Triple(t) => t.variables().for_each(&mut *f),
            Pattern::And(a, b) | Pattern::Opt(_, a, b) | Pattern::Union(a, b) => {
                a.for_each_var_occurrence(f);
                b.for_each_var_occurrence(f);
            }
            Pattern::Filter(p, c) => {
                p.for_each_var_occurrence(f);
                c.for_each_var_occurrence(f);
            }
            Pattern::Select(vars, p) => {
                vars.iter().for_each(&mut *f);
                p.for_each_var_occurrence(f);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Term;

    fn t(s: &str, p: &str, o: &str) -> Pattern {
        let term = |x: &str| {
            if let Some(v) = x.strip_prefix('?') {
                Term::var(v)
            } else if x == "rdf:type" {
                Term::rdf_type()
            } else {
                Term::iri(x)
            }
        };
        Pattern::Triple(TriplePattern::new(term(s), term(p), term(o)))
    }

    fn q1() -> Pattern {
        t("?x", "rdf:type", "professor")
    }

    fn q() -> Pattern {
        Pattern::opt(
            1,
            q1(),
            Pattern::opt(2, t("?x", "workFor", "?y"), t("?x", "teachOf", "?z")),
        )
    }

    fn tn(i: u32) -> Pattern {
        t("?x", &format!("p{i}"), &format!("?y{i}"))
    }

    /// (t1 OPT (t2 OPT t3)) OPT (t4 OPT t5)
    fn eq2() -> Pattern {
        Pattern::opt(
            1,
            Pattern::opt(2, tn(1), Pattern::opt(3, tn(2), tn(3))),
            Pattern::opt(4, tn(4), tn(5)),
        )
    }

    #[test]
    fn variables_of_triples_and_q() {
        let v: Vec<_> = q1().variables().into_iter().collect();
        assert_eq!(v, vec![Var::new("x")]);
        assert!(t("JonSmith", "workFor", "SemanticUniversity").variables().is_empty());
        let all: Vec<_> = q().variables().into_iter().map(|v| v.name().to_string()).collect();
        assert_eq!(all, ["x", "y", "z"]);
    }

    #[test]
    fn af_pattern_recognition() {
        let af = Pattern::filter(Pattern::and(tn(1), tn(3)), Constraint::bound(Var::new("x")));
        assert!(af.is_af_pattern());
        assert!(!Pattern::opt(1, tn(1), tn(2)).is_af_pattern());
        assert!(!Pattern::select([Var::new("x")], tn(1)).is_af_pattern());
    }

    #[test]
    fn bgp_and_optional_parts() {
        assert!(q().bgp().unwrap().structural_eq(&q1()));
        assert_eq!(tn(1).bgp().unwrap(), &tn(1));
        assert!(eq2().bgp().unwrap().structural_eq(&tn(1)));

        let p = eq2();
        let parts = p.optional_parts().unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts[0].structural_eq(&Pattern::opt(0, tn(2), tn(3))));
        assert!(parts[1].structural_eq(&Pattern::opt(0, tn(4), tn(5))));
        assert!(tn(1).optional_parts().unwrap().is_empty());
    }

    #[test]
    fn non_onf_is_rejected() {
        let p = Pattern::and(Pattern::opt(1, tn(1), tn(2)), tn(3));
        assert!(matches!(p.bgp(), Err(Error::NotInOptNormalForm)));
        assert!(matches!(p.optional_parts(), Err(Error::NotInOptNormalForm)));
        assert!(matches!(p.opt_depth(), Err(Error::NotInOptNormalForm)));
    }

    #[test]
    fn opt_depth_values() {
        assert_eq!(q().opt_depth().unwrap(), 2);
        assert_eq!(eq2().opt_depth().unwrap(), 2);
        assert_eq!(tn(1).opt_depth().unwrap(), 0);
    }

    #[test]
    fn opt_count_values() {
        let mut chain = tn(0);
        for i in 1..=4 {
            chain = Pattern::opt(i, chain, tn(i));
        }
        assert_eq!(chain.opt_count(), 4);
        assert_eq!(tn(0).opt_count(), 0);

        fn full(h: u32, next: &mut u32) -> Pattern {
            if h == 0 {
                *next += 1;
                return tn(100 + *next);
            }
            let l = full(h - 1, next);
            let r = full(h - 1, next);
            Pattern::opt(0, l, r)
        }
        assert_eq!(full(4, &mut 0).opt_count(), 15);
    }

    #[test]
    fn structural_equality_ignores_labels() {
        let q2 = Pattern::opt(7, q1(), t("?x", "workFor", "?y"));
        let q2_relabelled = Pattern::opt(1, q1(), t("?x", "workFor", "?y"));
        assert!(q2.structural_eq(&q2_relabelled));
        assert_ne!(q2, q2_relabelled);
        assert!(q().structural_eq(&q()));
        assert!(!Pattern::opt(1, tn(1), tn(2)).structural_eq(&Pattern::opt(1, tn(2), tn(1))));
    }

    #[test]
    fn renumber_assigns_preorder_ids() {
        let p = eq2().structural_key().renumber_opts();
        assert_eq!(p.opt_ids(), vec![OptId(1), OptId(2), OptId(3), OptId(4)]);
        assert_eq!(p, eq2());
    }
}
