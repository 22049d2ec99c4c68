//! Set-semantics evaluation of patterns over an in-memory graph.
//!
//! [`evaluate`] is the engine (index lookups, hash joins); [`oracle`] holds a
//! deliberately naive second implementation used to cross-check it.

mod format;
mod graph;
mod mapping;
pub mod oracle;

pub use format::{format_answers, format_mapping_json, format_mapping_tsv, AnswerFormat};
pub use graph::Graph;
pub use mapping::{compatible, diff, join, left_join, project, union, Mapping, MappingSet};

use crate::algebra::{Constraint, Pattern, Term, TriplePattern};

/// Three-valued truth for filter conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TruthValue {
    True,
    False,
    Error,
}

impl std::ops::Not for TruthValue {
    type Output = TruthValue;

    fn not(self) -> TruthValue {
        match self {
            TruthValue::True => TruthValue::False,
            TruthValue::False => TruthValue::True,
            TruthValue::Error => TruthValue::Error,
        }
    }
}

impl TruthValue {
    fn from_bool(b: bool) -> Self {
        if b {
            TruthValue::True
        } else {
            TruthValue::False
        }
    }

    pub fn and(self, other: Self) -> Self {
        use TruthValue::*;
        match (self, other) {
            (False, _) | (_, False) => False,
            (True, True) => True,
            _ => Error,
        }
    }

    pub fn or(self, other: Self) -> Self {
        use TruthValue::*;
        match (self, other) {
            (True, _) | (_, True) => True,
            (False, False) => False,
            _ => Error,
        }
    }
}

/// μ(C). Equality atoms over an unbound variable are `Error`; `bound` never is.
pub fn eval_constraint(c: &Constraint, m: &Mapping) -> TruthValue {
    match c {
        Constraint::Bound(v) => TruthValue::from_bool(m.get(v).is_some()),
        Constraint::EqVarTerm(v, t) => match m.get(v) {
            Some(u) => TruthValue::from_bool(u == t),
            None => TruthValue::Error,
        },
        Constraint::EqVarVar(a, b) => match (m.get(a), m.get(b)) {
            (Some(x), Some(y)) => TruthValue::from_bool(x == y),
            _ => TruthValue::Error,
        },
        Constraint::Not(inner) => !eval_constraint(inner, m),
        Constraint::And(a, b) => eval_constraint(a, m).and(eval_constraint(b, m)),
        Constraint::Or(a, b) => eval_constraint(a, m).or(eval_constraint(b, m)),
    }
}

/// Mappings μ with dom μ = var(tp) and μ(tp) ∈ G.
pub fn eval_triple(tp: &TriplePattern, g: &Graph) -> MappingSet {
    let constant = |t: &Term| t.is_constant().then_some(t).cloned();
    let (s, p, o) = (constant(&tp.subject), constant(&tp.predicate), constant(&tp.object));
    let mut out = MappingSet::new();
    'triples: for triple in g.matching(s.as_ref(), p.as_ref(), o.as_ref()) {
        let mut m = Mapping::new();
        for (pat, val) in [
            (&tp.subject, &triple.0),
            (&tp.predicate, &triple.1),
            (&tp.object, &triple.2),
        ] {
            if let Term::Var(v) = pat {
                match m.get(v) {
                    Some(bound) if bound != val => continue 'triples,
                    Some(_) => {}
                    None => m.insert(v.clone(), val.clone()),
                }
            }
        }
        out.insert(m);
    }
    out
}

/// ⟦P⟧G.
pub fn evaluate(p: &Pattern, g: &Graph) -> MappingSet {
    match p {
        Pattern::Triple(tp) => eval_triple(tp, g),
        Pattern::And(a, b) => join(&evaluate(a, g), &evaluate(b, g)),
        Pattern::Opt(_, a, b) => left_join(&evaluate(a, g), &evaluate(b, g)),
        Pattern::Union(a, b) => union(&evaluate(a, g), &evaluate(b, g)),
        Pattern::Filter(inner, c) => evaluate(inner, g)
            .into_iter()
            .filter(|m| eval_constraint(c, m) == TruthValue::True)
            .collect(),
        Pattern::Select(vars, inner) => project(&evaluate(inner, g), vars),
    }
}
