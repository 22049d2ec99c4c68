//! Naive reference evaluator.
//!
//! Shares nothing with the engine beyond the input and output types: rows are
//! association lists, every operator is a nested loop over plain vectors,
//! triple patterns scan the whole graph, and filter conditions use a separate
//! `Option<bool>` encoding of three-valued logic (`None` is error).

use crate::algebra::{Constraint, Pattern, Term, TriplePattern, Var};
use crate::error::{Error, Result};

use super::{Graph, Mapping, MappingSet};

pub const DEFAULT_LIMIT: usize = 1_000_000;

type Row = Vec<(Var, Term)>;

fn lookup<'a>(row: &'a Row, v: &Var) -> Option<&'a Term> {
    row.iter().find(|(w, _)| w == v).map(|(_, t)| t)
}

fn agree(a: &Row, b: &Row) -> bool {
    a.iter().all(|(v, t)| match lookup(b, v) {
        Some(u) => u == t,
        None => true,
    })
}

fn combine(a: &Row, b: &Row) -> Row {
    let mut out = a.clone();
    for (v, t) in b {
        if lookup(a, v).is_none() {
            out.push((v.clone(), t.clone()));
        }
    }
    out
}

fn same_row(a: &Row, b: &Row) -> bool {
    a.len() == b.len() && a.iter().all(|(v, t)| lookup(b, v) == Some(t))
}

struct Rows {
    rows: Vec<Row>,
    limit: usize,
}

impl Rows {
    fn empty(limit: usize) -> Self {
        Rows {
            rows: Vec::new(),
            limit,
        }
    }

    fn push(&mut self, r: Row) -> Result<()> {
        if !self.rows.iter().any(|x| same_row(x, &r)) {
            if self.rows.len() >= self.limit {
                return Err(Error::ResourceLimit { limit: self.limit });
            }
            self.rows.push(r);
        }
        Ok(())
    }
}

fn truth(c: &Constraint, row: &Row) -> Option<bool> {
    match c {
        Constraint::Bound(v) => Some(lookup(row, v).is_some()),
        Constraint::EqVarTerm(v, t) => lookup(row, v).map(|u| u == t),
        Constraint::EqVarVar(a, b) => Some(lookup(row, a)? == lookup(row, b)?),
        Constraint::Not(inner) => truth(inner, row).map(|b| !b),
        Constraint::And(a, b) => match (truth(a, row), truth(b, row)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        },
        Constraint::Or(a, b) => match (truth(a, row), truth(b, row)) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        },
    }
}

fn match_triple(tp: &TriplePattern, g: &Graph, limit: usize) -> Result<Rows> {
    let mut out = Rows::empty(limit);
    for (s, p, o) in g.triples() {
        let mut row: Row = Vec::new();
        let mut ok = true;
        for (pat, val) in [(&tp.subject, s), (&tp.predicate, p), (&tp.object, o)] {
            match pat {
                Term::Var(v) => match lookup(&row, v) {
                    Some(prev) => ok &= prev == val,
                    None => row.push((v.clone(), val.clone())),
                },
                c => ok &= c == val,
            }
        }
        if ok {
            out.push(row)?;
        }
    }
    Ok(out)
}

fn eval_rows(p: &Pattern, g: &Graph, limit: usize) -> Result<Rows> {
    match p {
        Pattern::Triple(tp) => match_triple(tp, g, limit),
        Pattern::And(a, b) => {
            let (l, r) = (eval_rows(a, g, limit)?, eval_rows(b, g, limit)?);
            let mut out = Rows::empty(limit);
            for x in &l.rows {
                for y in &r.rows {
                    if agree(x, y) {
                        out.push(combine(x, y))?;
                    }
                }
            }
            Ok(out)
        }
        Pattern::Opt(_, a, b) => {
            let (l, r) = (eval_rows(a, g, limit)?, eval_rows(b, g, limit)?);
            let mut out = Rows::empty(limit);
            for x in &l.rows {
                let mut extended = false;
                for y in &r.rows {
                    if agree(x, y) {
                        extended = true;
                        out.push(combine(x, y))?;
                    }
                }
                if !extended {
                    out.push(x.clone())?;
                }
            }
            Ok(out)
        }
        Pattern::Union(a, b) => {
            let mut out = eval_rows(a, g, limit)?;
            for y in eval_rows(b, g, limit)?.rows {
                out.push(y)?;
            }
            Ok(out)
        }
        Pattern::Filter(inner, c) => {
            let mut rows = eval_rows(inner, g, limit)?;
            rows.rows.retain(|r| truth(c, r) == Some(true));
            Ok(rows)
        }
        Pattern::Select(vars, inner) => {
            let mut out = Rows::empty(limit);
            for r in eval_rows(inner, g, limit)?.rows {
                out.push(r.into_iter().filter(|(v, _)| vars.contains(v)).collect())?;
            }
            Ok(out)
        }
    }
}

/// ⟦P⟧G computed naively, failing once an intermediate result exceeds `limit` mappings.
pub fn brute_force_evaluate_with_limit(p: &Pattern, g: &Graph, limit: usize) -> Result<MappingSet> {
    Ok(eval_rows(p, g, limit)?
        .rows
        .into_iter()
        .map(|r| r.into_iter().collect::<Mapping>())
        .collect())
}

pub fn brute_force_evaluate(p: &Pattern, g: &Graph) -> Result<MappingSet> {
    brute_force_evaluate_with_limit(p, g, DEFAULT_LIMIT)
}
