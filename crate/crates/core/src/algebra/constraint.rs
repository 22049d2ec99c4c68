use std::collections::BTreeSet;

use super::term::{Term, Var};

/// Filter condition: a boolean combination of atomic constraints.
///
/// The atoms are `bound(?v)`, `?v = c` for a constant `c`, and `?v = ?w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    Bound(Var),
    EqVarTerm(Var, Term),
    EqVarVar(Var, Var),
    Not(Box<Constraint>),
    And(Box<Constraint>, Box<Constraint>),
    Or(Box<Constraint>, Box<Constraint>),
}

impl Constraint {
    pub fn bound(v: Var) -> Self {
        Constraint::Bound(v)
    }

    /// Panics if `t` is a variable; use [`Constraint::eq_vars`] for that.
    pub fn eq_term(v: Var, t: Term) -> Self {
        assert!(t.is_constant(), "equality atom needs a constant term");
        Constraint::EqVarTerm(v, t)
    }

    pub fn eq_vars(a: Var, b: Var) -> Self {
        Constraint::EqVarVar(a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Constraint) -> Self {
        Constraint::Not(Box::new(c))
    }

    pub fn and(a: Constraint, b: Constraint) -> Self {
        Constraint::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Constraint, b: Constraint) -> Self {
        Constraint::Or(Box::new(a), Box::new(b))
    }

    /// var(C): every variable occurring syntactically in the constraint.
    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    pub(crate) fn collect_variables(&self, out: &mut BTreeSet<Var>) {
        match self {
            Constraint::Bound(v) | Constraint::EqVarTerm(v, _) => {
                out.insert(v.clone());
            }
            Constraint::EqVarVar(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Constraint::Not(c) => c.collect_variables(out),
            Constraint::And(a, b) | Constraint::Or(a, b) => {
                a.collect_variables(out);
                b.collect_variables(out);
            }
        }
    }

    /// Calls `f` once per variable occurrence, duplicates included.
    pub(crate) fn for_each_var_occurrence(&self, f: &mut impl FnMut(&Var)) {
        match self {
            Constraint::Bound(v) | Constraint::EqVarTerm(v, _) => f(v),
            Constraint::EqVarVar(a, b) => {
                f(a);
                f(b);
            }
            Constraint::Not(c) => c.for_each_var_occurrence(f),
            Constraint::And(a, b) | Constraint::Or(a, b) => {
                a.for_each_var_occurrence(f);
                b.for_each_var_occurrence(f);
            }
        }
    }
}
