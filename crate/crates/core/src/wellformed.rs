//! Membership in the UNION-free well-designed fragment.
//!
//! A pattern is well-designed when it is safe (every `Q FILTER C` has
//! var(C) ⊆ var(Q)) and, for every subpattern `P' = P1 OPT P2`, each variable
//! of `P2` that also occurs outside `P'` occurs in `P1`. A top-level SELECT is
//! accepted as an output projection; its variable list is not counted as an
//! occurrence.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde_json::json;

use crate::algebra::{OptId, Pattern, Var};
use crate::surface::print_pattern;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    UnsafeFilter,
    BadOptVariable,
    UnionPresent,
    NestedSelect,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::UnsafeFilter => "UnsafeFilter",
            ViolationKind::BadOptVariable => "BadOptVariable",
            ViolationKind::UnionPresent => "UnionPresent",
            ViolationKind::NestedSelect => "NestedSelect",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Preorder index of the offending node (the root is 0).
    pub position: usize,
    /// Label of the offending OPT node, for [`ViolationKind::BadOptVariable`].
    pub opt_id: Option<OptId>,
    pub variable: Option<Var>,
    pub message: String,
}

impl Violation {
    /// Machine-readable form used by the `check` command.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "kind": self.kind.to_string(),
            "position": self.position,
            "opt": self.opt_id.map(|id| id.to_string()),
            "variable": self.variable.as_ref().map(|v| v.to_string()),
            "message": self.message,
        })
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at node {}: {}", self.kind, self.position, self.message)
    }
}

/// UnsafeFilter violations only, one per failing FILTER.
pub fn check_safe(p: &Pattern) -> Vec<Violation> {
    p.preorder()
        .into_iter()
        .enumerate()
        .filter_map(|(pos, node)| unsafe_filter(pos, node))
        .collect()
}

/// Every reason `p` falls outside the well-designed fragment, in preorder.
pub fn check_well_designed(p: &Pattern) -> Vec<Violation> {
    let nodes = p.preorder();
    let total = occurrence_counts(p, true);
    let mut out = Vec::new();
    for (pos, node) in nodes.iter().enumerate() {
        match node {
            Pattern::Union(..) => out.push(Violation {
                kind: ViolationKind::UnionPresent,
                position: pos,
                opt_id: None,
                variable: None,
                message: "UNION is outside the well-designed fragment".into(),
            }),
            Pattern::Select(..) if pos > 0 => out.push(Violation {
                kind: ViolationKind::NestedSelect,
                position: pos,
                opt_id: None,
                variable: None,
                message: "SELECT is only allowed at the top level".into(),
            }),
            Pattern::Filter(..) => out.extend(unsafe_filter(pos, node)),
            Pattern::Opt(id, left, right) => {
                let inside = occurrence_counts(node, false);
                let left_vars = left.variables();
                for v in right.variables() {
                    let outside = total.get(&v).copied().unwrap_or(0) > inside.get(&v).copied().unwrap_or(0);
                    if outside && !left_vars.contains(&v) {
                        out.push(Violation {
                            kind: ViolationKind::BadOptVariable,
                            position: pos,
                            opt_id: Some(*id),
                            message: format!(
                                "{v} occurs in the optional arm of {id} and outside it, but not in its left arm {}",
                                print_pattern(left)
                            ),
                            variable: Some(v),
                        });
                    }
                }
            }
            _ => {}
        }
    }
    out
}

pub fn is_well_designed(p: &Pattern) -> bool {
    check_well_designed(p).is_empty()
}

fn unsafe_filter(pos: usize, node: &Pattern) -> Option<Violation> {
    let Pattern::Filter(inner, c) = node else {
        return None;
    };
    let scope = inner.variables();
    let missing: BTreeSet<Var> = c.variables().into_iter().filter(|v| !scope.contains(v)).collect();
    let first = missing.iter().next()?.clone();
    let names: Vec<String> = missing.iter().map(|v| v.to_string()).collect();
    Some(Violation {
        kind: ViolationKind::UnsafeFilter,
        position: pos,
        opt_id: None,
        message: format!(
            "FILTER uses {} not occurring in its operand {}",
            names.join(", "),
            print_pattern(inner)
        ),
        variable: Some(first),
    })
}

/// Occurrence counts per variable. With `skip_top_select`, the projection list
/// of a root SELECT is not counted.
fn occurrence_counts(p: &Pattern, skip_top_select: bool) -> HashMap<Var, usize> {
    let mut counts = HashMap::new();
    let mut bump = |v: &Var| *counts.entry(v.clone()).or_insert(0) += 1;
    match p {
        Pattern::Select(_, inner) if skip_top_select => inner.for_each_var_occurrence(&mut bump),
        p => p.for_each_var_occurrence(&mut bump),
    }
    counts
}
