use std::fmt;
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Pattern, Term, TriplePattern, Var};
use crate::error::{Error, Result};
use crate::wdtree::k_approximate;

use super::data::{EntityType, Predicate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum ShapeKind {
    Zigzag,
    LeftDeep,
    RightDeep,
    Full,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 4] = [
        ShapeKind::Zigzag,
        ShapeKind::LeftDeep,
        ShapeKind::RightDeep,
        ShapeKind::Full,
    ];
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShapeKind::Zigzag => "zigzag",
            ShapeKind::LeftDeep => "left-deep",
            ShapeKind::RightDeep => "right-deep",
            ShapeKind::Full => "full",
        })
    }
}

impl FromStr for ShapeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "zigzag" => Ok(ShapeKind::Zigzag),
            "left-deep" | "leftdeep" | "left" => Ok(ShapeKind::LeftDeep),
            "right-deep" | "rightdeep" | "right" => Ok(ShapeKind::RightDeep),
            "full" => Ok(ShapeKind::Full),
            other => Err(format!("unknown tree shape `{other}`")),
        }
    }
}

/// A tree shape together with its target number of OPT nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TreeShape {
    pub kind: ShapeKind,
    pub opt_count: usize,
}

impl TreeShape {
    pub fn new(kind: ShapeKind, opt_count: usize) -> Self {
        TreeShape { kind, opt_count }
    }
}

impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.kind, self.opt_count)
    }
}

/// OPT skeleton; leaves get their triple patterns later.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Skeleton {
    Leaf,
    Opt(Box<Skeleton>, Box<Skeleton>),
}

impl Skeleton {
    fn opt(l: Skeleton, r: Skeleton) -> Skeleton {
        Skeleton::Opt(Box::new(l), Box::new(r))
    }

    pub fn opt_count(&self) -> usize {
        match self {
            Skeleton::Leaf => 0,
            Skeleton::Opt(l, r) => 1 + l.opt_count() + r.opt_count(),
        }
    }

    pub fn left_deep(n: usize) -> Skeleton {
        (0..n).fold(Skeleton::Leaf, |acc, _| Skeleton::opt(acc, Skeleton::Leaf))
    }

    pub fn right_deep(n: usize) -> Skeleton {
        (0..n).fold(Skeleton::Leaf, |acc, _| Skeleton::opt(Skeleton::Leaf, acc))
    }

    pub fn full(height: u32) -> Skeleton {
        if height == 0 {
            Skeleton::Leaf
        } else {
            Skeleton::opt(Skeleton::full(height - 1), Skeleton::full(height - 1))
        }
    }

    /// A left spine of `runs[0]` OPT nodes whose deepest node's right child is
    /// the zigzag of the remaining runs. Level i of the left-deep level
    /// traversal then holds exactly `runs[i]` OPT nodes.
    pub fn zigzag(runs: &[usize]) -> Skeleton {
        let Some((&first, rest)) = runs.split_first() else {
            return Skeleton::Leaf;
        };
        let mut node = Skeleton::opt(Skeleton::Leaf, Skeleton::zigzag(rest));
        for _ in 1..first {
            node = Skeleton::opt(node, Skeleton::Leaf);
        }
        node
    }
}

/// Runs of the plain alternating zigzag: one OPT, then a right turn followed by
/// a left turn per level, so levels after the first hold two OPT nodes.
pub fn default_zigzag_runs(n: usize) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let mut runs = vec![1];
    let mut left = n - 1;
    while left > 0 {
        let r = left.min(2);
        runs.push(r);
        left -= r;
    }
    runs
}

pub fn skeleton(shape: TreeShape) -> Result<Skeleton> {
    let n = shape.opt_count;
    match shape.kind {
        ShapeKind::LeftDeep => Ok(Skeleton::left_deep(n)),
        ShapeKind::RightDeep => Ok(Skeleton::right_deep(n)),
        ShapeKind::Zigzag => Ok(Skeleton::zigzag(&default_zigzag_runs(n))),
        ShapeKind::Full => {
            let h = (n + 1).trailing_zeros();
            if (n + 1).is_power_of_two() {
                Ok(Skeleton::full(h))
            } else {
                Err(Error::ShapeInfeasible(format!(
                    "a full tree needs 2^h - 1 OPT nodes, got {n}"
                )))
            }
        }
    }
}

/// A well-designed ONF query whose tree has the given shape.
///
/// The root leaf is `?v0 rdf:type Student`. Every other leaf is a single
/// triple `?a pred ?vi` where `?a` is the variable introduced by the leftmost
/// leaf of the sibling left subtree and `?vi` is fresh; the seed picks `pred`
/// among the predicates leaving `?a`'s entity type.
pub fn generate_query(shape: TreeShape, seed: u64) -> Result<Pattern> {
    Ok(query_from_skeleton(&skeleton(shape)?, seed))
}

pub fn query_from_skeleton(sk: &Skeleton, seed: u64) -> Pattern {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fresh = 0usize;
    let (p, _, _) = fill(sk, None, &mut rng, &mut fresh);
    p.renumber_opts()
}

fn fill(
    sk: &Skeleton,
    anchor: Option<(&Var, EntityType)>,
    rng: &mut ChaCha8Rng,
    fresh: &mut usize,
) -> (Pattern, Var, EntityType) {
    match sk {
        Skeleton::Leaf => {
            let v = Var::new(format!("v{fresh}"));
            *fresh += 1;
            match anchor {
                None => {
                    let tp = TriplePattern::new(
                        Term::Var(v.clone()),
                        Term::rdf_type(),
                        Term::iri(EntityType::Student.class_name()),
                    );
                    (Pattern::Triple(tp), v, EntityType::Student)
                }
                Some((a, ty)) => {
                    let pred: &Predicate = ty.outgoing().choose(rng).expect("every type has an outgoing predicate");
                    let tp = TriplePattern::new(Term::Var(a.clone()), Term::iri(pred.name), Term::Var(v.clone()));
                    (Pattern::Triple(tp), v, pred.range)
                }
            }
        }
        Skeleton::Opt(l, r) => {
            let (left, lv, lty) = fill(l, anchor, rng, fresh);
            let (right, _, _) = fill(r, Some((&lv, lty)), rng, fresh);
            (Pattern::opt(0, left, right), lv, lty)
        }
    }
}

/// `[(k, optCount(P^(k)))]` for k = 0..=k_max.
pub fn opt_count_profile(p: &Pattern, k_max: usize) -> Result<Vec<(usize, usize)>> {
    (0..=k_max).map(|k| Ok((k, k_approximate(p, k)?.opt_count()))).collect()
}

/// All run sequences (compositions of `n`) whose zigzag tree has the given
/// OPT-count profile over k = 0..profile.len()-1.
pub fn zigzag_variants_matching(n: usize, profile: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    compositions(n, &mut cur, &mut |runs| {
        let mut cumulative = 0;
        let prof: Vec<usize> = std::iter::once(0)
            .chain(runs.iter().map(|r| {
                cumulative += r;
                cumulative
            }))
            .collect();
        let at = |k: usize| prof[k.min(prof.len() - 1)];
        if (0..profile.len()).all(|k| at(k) == profile[k]) {
            out.push(runs.to_vec());
        }
    });
    out
}

fn compositions(n: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if n == 0 {
        f(cur);
        return;
    }
    for first in 1..=n {
        cur.push(first);
        compositions(n - first, cur, f);
        cur.pop();
    }
}
