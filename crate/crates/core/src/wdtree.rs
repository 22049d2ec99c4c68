//! Well-designed trees and k-approximation.
//!
//! A well-designed tree mirrors a well-designed pattern in OPT normal form:
//! inner nodes are the OPT operators, leaves the maximal AND/FILTER
//! subpatterns. The leftmost traversal of a subtree walks from its root down
//! the left children; its last node (the leftmost leaf) is the subtree's
//! mandatory part. Left-deep level traversal groups nodes by how many
//! optional arms separate them from the root: level 0 is the leftmost
//! traversal of the whole tree, level i+1 the leftmost traversals of the right
//! children ("candidates") of level i's OPT nodes.
//!
//! The k-approximation keeps levels 0..k-1 intact and replaces every OPT
//! candidate of level k-1 by its leftmost leaf.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use crate::algebra::{OptId, Pattern};
use crate::error::{Error, Result};
use crate::surface::print_pattern;
use crate::wellformed::check_well_designed;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WdTree {
    Opt {
        id: OptId,
        left: Box<WdTree>,
        right: Box<WdTree>,
    },
    /// An AND/FILTER-only pattern.
    Leaf(Pattern),
}

/// A node of a tree as it appears in traversal listings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeLabel {
    Opt(OptId),
    Leaf(Pattern),
}

impl NodeLabel {
    fn of(t: &WdTree) -> Self {
        match t {
            WdTree::Opt { id, .. } => NodeLabel::Opt(*id),
            WdTree::Leaf(p) => NodeLabel::Leaf(p.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LdltLevel {
    pub traversal: Vec<NodeLabel>,
    pub candidates: Vec<NodeLabel>,
    /// LM(n) for each candidate n; `None` (printed ×) for leaf candidates.
    pub leftmost: Vec<Option<Pattern>>,
}

/// Left-deep level traversal of a tree, one entry per level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LdltReport {
    pub levels: Vec<LdltLevel>,
}

impl WdTree {
    /// Builds the well-designed tree of a well-designed pattern in OPT normal form.
    pub fn build(p: &Pattern) -> Result<WdTree> {
        if !p.is_opt_normal_form() {
            return Err(Error::NotInOptNormalForm);
        }
        let violations = check_well_designed(p);
        if !violations.is_empty() {
            return Err(Error::NotWellDesigned(violations));
        }
        Ok(Self::build_unchecked(p))
    }

    fn build_unchecked(p: &Pattern) -> WdTree {
        match p {
            Pattern::Opt(id, l, r) => WdTree::Opt {
                id: *id,
                left: Box::new(Self::build_unchecked(l)),
                right: Box::new(Self::build_unchecked(r)),
            },
            af => WdTree::Leaf(af.clone()),
        }
    }

    pub fn to_pattern(&self) -> Pattern {
        match self {
            WdTree::Opt { id, left, right } => {
                Pattern::Opt(*id, Box::new(left.to_pattern()), Box::new(right.to_pattern()))
            }
            WdTree::Leaf(p) => p.clone(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, WdTree::Leaf(_))
    }

    /// LT(t): the root followed by the leftmost traversal of its left child.
    pub fn leftmost_traversal(&self) -> Vec<&WdTree> {
        let mut out = vec![self];
        let mut cur = self;
        while let WdTree::Opt { left, .. } = cur {
            out.push(left);
            cur = left;
        }
        out
    }

    /// LM(t): the last node of the leftmost traversal.
    pub fn leftmost_leaf(&self) -> &Pattern {
        match self.leftmost_traversal().last() {
            Some(WdTree::Leaf(p)) => p,
            _ => unreachable!("leftmost traversal ends in a leaf"),
        }
    }

    /// OPT-depth of the represented pattern.
    pub fn depth(&self) -> usize {
        match self {
            WdTree::Leaf(_) => 0,
            WdTree::Opt { left, right, .. } => left.depth().max(right.depth() + 1),
        }
    }

    pub fn opt_count(&self) -> usize {
        match self {
            WdTree::Leaf(_) => 0,
            WdTree::Opt { left, right, .. } => 1 + left.opt_count() + right.opt_count(),
        }
    }

    fn candidates<'a>(level: &[&'a WdTree]) -> Vec<&'a WdTree> {
        level
            .iter()
            .filter_map(|n| match n {
                WdTree::Opt { right, .. } => Some(&**right),
                WdTree::Leaf(_) => None,
            })
            .collect()
    }

    /// Levels of the left-deep level traversal, by reference.
    pub fn ldlt_levels(&self) -> Vec<Vec<&WdTree>> {
        let mut levels = vec![self.leftmost_traversal()];
        loop {
            let cands = Self::candidates(levels.last().expect("nonempty"));
            if cands.is_empty() {
                return levels;
            }
            levels.push(cands.into_iter().flat_map(|c| c.leftmost_traversal()).collect());
        }
    }

    pub fn left_deep_level_traversal(&self) -> LdltReport {
        let levels = self
            .ldlt_levels()
            .into_iter()
            .map(|level| {
                let cands = Self::candidates(&level);
                LdltLevel {
                    traversal: level.iter().map(|n| NodeLabel::of(n)).collect(),
                    leftmost: cands
                        .iter()
                        .map(|c| (!c.is_leaf()).then(|| c.leftmost_leaf().clone()))
                        .collect(),
                    candidates: cands.iter().map(|c| NodeLabel::of(c)).collect(),
                }
            })
            .collect();
        LdltReport { levels }
    }

    /// The k-approximation spanning tree.
    pub fn k_approximation(&self, k: usize) -> WdTree {
        if k == 0 {
            return WdTree::Leaf(self.leftmost_leaf().clone());
        }
        if k >= self.depth() {
            return self.clone();
        }
        let mut candidate: Vec<&WdTree> = vec![self];
        let mut leftmost: Vec<&WdTree> = Vec::new();
        for _ in 0..k {
            let level: Vec<&WdTree> = candidate.iter().flat_map(|c| c.leftmost_traversal()).collect();
            candidate = Self::candidates(&level);
            leftmost = candidate.iter().copied().filter(|n| !n.is_leaf()).collect();
        }
        let targets: HashSet<*const WdTree> = leftmost.into_iter().map(|n| n as *const WdTree).collect();
        self.replace_by_leftmost(&targets)
    }

    fn replace_by_leftmost(&self, targets: &HashSet<*const WdTree>) -> WdTree {
        if targets.contains(&(self as *const WdTree)) {
            return WdTree::Leaf(self.leftmost_leaf().clone());
        }
        match self {
            WdTree::Opt { id, left, right } => WdTree::Opt {
                id: *id,
                left: Box::new(left.replace_by_leftmost(targets)),
                right: Box::new(right.replace_by_leftmost(targets)),
            },
            leaf => leaf.clone(),
        }
    }

    /// Indented rendering, one node per line, right child below the left one.
    pub fn render(&self, leaf_label: &dyn Fn(&Pattern) -> String) -> String {
        let mut out = String::new();
        self.render_into(&mut out, "", "", leaf_label);
        out
    }

    fn render_into(&self, out: &mut String, first: &str, rest: &str, leaf_label: &dyn Fn(&Pattern) -> String) {
        match self {
            WdTree::Leaf(p) => {
                let _ = writeln!(out, "{first}{}", leaf_label(p));
            }
            WdTree::Opt { id, left, right } => {
                let _ = writeln!(out, "{first}{id}");
                left.render_into(out, &format!("{rest}├── "), &format!("{rest}│   "), leaf_label);
                right.render_into(out, &format!("{rest}└── "), &format!("{rest}    "), leaf_label);
            }
        }
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&Pattern> {
        match self {
            WdTree::Leaf(p) => vec![p],
            WdTree::Opt { left, right, .. } => {
                let mut v = left.leaves();
                v.extend(right.leaves());
                v
            }
        }
    }
}

impl LdltReport {
    /// Table with the columns Level | Traversal List | Candidates | Leftmost.
    pub fn render(&self, leaf_label: &dyn Fn(&Pattern) -> String) -> String {
        let label = |n: &NodeLabel| match n {
            NodeLabel::Opt(id) => id.to_string(),
            NodeLabel::Leaf(p) => leaf_label(p),
        };
        let rows: Vec<[String; 4]> = self
            .levels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                [
                    i.to_string(),
                    l.traversal.iter().map(label).collect::<Vec<_>>().join(", "),
                    l.candidates.iter().map(label).collect::<Vec<_>>().join(", "),
                    l.leftmost
                        .iter()
                        .map(|lm| lm.as_ref().map(leaf_label).unwrap_or_else(|| "×".into()))
                        .collect::<Vec<_>>()
                        .join(", "),
                ]
            })
            .collect();
        let header = ["Level", "Traversal List", "Candidates", "Leftmost"];
        let mut widths = header.map(|h| h.chars().count());
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            format!("| {} |\n", padded.join(" | "))
        };
        let mut out = line(&header.map(String::from));
        out.push_str(&line(&widths.map(|w| "-".repeat(w))));
        for row in &rows {
            out.push_str(&line(row));
        }
        out
    }
}

impl fmt::Display for WdTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&print_pattern))
    }
}

/// Shorthand for [`WdTree::build`].
pub fn build_tree(p: &Pattern) -> Result<WdTree> {
    WdTree::build(p)
}

/// P^(k) for a well-designed pattern in OPT normal form.
pub fn k_approximate(p: &Pattern, k: usize) -> Result<Pattern> {
    Ok(WdTree::build(p)?.k_approximation(k).to_pattern())
}

/// P^(k) computed directly on the pattern: the mandatory part for k = 0,
/// otherwise `P0 OPT P1^(k-1) … OPT Pm^(k-1)` over the left spine. Independent
/// of the tree algorithm and used to cross-check it.
pub fn k_approximate_recursive(p: &Pattern, k: usize) -> Result<Pattern> {
    if !p.is_opt_normal_form() {
        return Err(Error::NotInOptNormalForm);
    }
    Ok(recursive_approx(p, k))
}

fn recursive_approx(p: &Pattern, k: usize) -> Pattern {
    if k == 0 {
        return p.bgp_unchecked().clone();
    }
    recursive_approx_spine(p, k)
}

fn recursive_approx_spine(p: &Pattern, k: usize) -> Pattern {
    match p {
        Pattern::Opt(id, l, r) => Pattern::Opt(
            *id,
            Box::new(recursive_approx_spine(l, k)),
            Box::new(recursive_approx(r, k - 1)),
        ),
        leaf => leaf.clone(),
    }
}

/// All one-step reductions: each OPT node in turn replaced by its left arm.
/// Results are distinct up to structural equality, in preorder of the removed OPT.
pub fn reductions(p: &Pattern) -> Vec<Pattern> {
    let count = p.opt_count();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for target in 0..count {
        let mut seen_opts = 0;
        let r = drop_nth_opt(p, target, &mut seen_opts);
        if seen.insert(r.structural_key()) {
            out.push(r);
        }
    }
    out
}

fn drop_nth_opt(p: &Pattern, target: usize, counter: &mut usize) -> Pattern {
    match p {
        Pattern::Opt(id, l, r) => {
            let here = *counter;
            *counter += 1;
            if here == target {
                return (**l).clone();
            }
            let l2 = drop_nth_opt(l, target, counter);
            let r2 = drop_nth_opt(r, target, counter);
            Pattern::Opt(*id, Box::new(l2), Box::new(r2))
        }
        Pattern::Triple(_) => p.clone(),
        Pattern::And(a, b) => {
            let a2 = drop_nth_opt(a, target, counter);
            Pattern::And(Box::new(a2), Box::new(drop_nth_opt(b, target, counter)))
        }
        Pattern::Union(a, b) => {
            let a2 = drop_nth_opt(a, target, counter);
            Pattern::Union(Box::new(a2), Box::new(drop_nth_opt(b, target, counter)))
        }
        Pattern::Filter(inner, c) => Pattern::Filter(Box::new(drop_nth_opt(inner, target, counter)), c.clone()),
        Pattern::Select(vars, inner) => Pattern::Select(vars.clone(), Box::new(drop_nth_opt(inner, target, counter))),
    }
}

/// The reflexive-transitive closure of [`reductions`], keyed by
/// [`Pattern::structural_key`]. Exponential in the number of OPT nodes.
pub fn reduction_closure(p: &Pattern) -> HashSet<Pattern> {
    let mut seen: HashSet<Pattern> = HashSet::new();
    let mut stack = vec![p.clone()];
    seen.insert(p.structural_key());
    while let Some(cur) = stack.pop() {
        for r in reductions(&cur) {
            if seen.insert(r.structural_key()) {
                stack.push(r);
            }
        }
    }
    seen
}
