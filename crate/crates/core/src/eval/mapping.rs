use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::algebra::{Term, Var};

/// A finite partial function from variables to constant terms.
///
/// Mappings order by their sorted `(variable, term)` pairs, which gives
/// [`MappingSet`] its canonical iteration order.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mapping(BTreeMap<Var, Term>);

impl Mapping {
    pub fn new() -> Self {
        Mapping::default()
    }

    /// Panics if `t` is a variable.
    pub fn insert(&mut self, v: Var, t: Term) {
        assert!(t.is_constant(), "mappings bind variables to constants");
        self.0.insert(v, t);
    }

    pub fn with(mut self, v: &str, t: Term) -> Self {
        self.insert(Var::new(v), t);
        self
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.0.get(v)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// μ₁ ∼ μ₂: agreement on the shared domain.
    pub fn compatible(&self, other: &Mapping) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.0.iter().all(|(v, t)| large.0.get(v).is_none_or(|u| u == t))
    }

    /// μ₁ ∪ μ₂; callers check compatibility first.
    pub fn merge(&self, other: &Mapping) -> Mapping {
        let mut out = self.clone();
        for (v, t) in &other.0 {
            out.0.entry(v.clone()).or_insert_with(|| t.clone());
        }
        out
    }

    /// μ|S.
    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Mapping {
        Mapping(
            self.0
                .iter()
                .filter(|(v, _)| vars.contains(*v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect(),
        )
    }

    /// μ ⊑ ν: `other` extends `self`.
    pub fn is_submapping_of(&self, other: &Mapping) -> bool {
        self.0.iter().all(|(v, t)| other.0.get(v) == Some(t))
    }
}

impl fmt::Debug for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

impl FromIterator<(Var, Term)> for Mapping {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        let mut m = Mapping::new();
        for (v, t) in iter {
            m.insert(v, t);
        }
        m
    }
}

/// A set of mappings in canonical order.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct MappingSet(BTreeSet<Mapping>);

impl MappingSet {
    pub fn new() -> Self {
        MappingSet::default()
    }

    /// {μ∅}: the identity for join.
    pub fn unit() -> Self {
        MappingSet(BTreeSet::from([Mapping::new()]))
    }

    pub fn insert(&mut self, m: Mapping) -> bool {
        self.0.insert(m)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Mapping> {
        self.0.iter()
    }

    pub fn contains(&self, m: &Mapping) -> bool {
        self.0.contains(m)
    }

    /// Variables bound by every mapping of the set.
    fn certain_vars(&self) -> BTreeSet<Var> {
        let mut it = self.0.iter();
        let Some(first) = it.next() else {
            return BTreeSet::new();
        };
        let mut vars: BTreeSet<Var> = first.domain().cloned().collect();
        for m in it {
            vars.retain(|v| m.get(v).is_some());
            if vars.is_empty() {
                break;
            }
        }
        vars
    }
}

impl fmt::Debug for MappingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl FromIterator<Mapping> for MappingSet {
    fn from_iter<I: IntoIterator<Item = Mapping>>(iter: I) -> Self {
        MappingSet(iter.into_iter().collect())
    }
}

impl IntoIterator for MappingSet {
    type Item = Mapping;
    type IntoIter = std::collections::btree_set::IntoIter<Mapping>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a MappingSet {
    type Item = &'a Mapping;
    type IntoIter = std::collections::btree_set::Iter<'a, Mapping>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

pub fn compatible(a: &Mapping, b: &Mapping) -> bool {
    a.compatible(b)
}

/// Hash index of `set` on the values of `key`; every mapping binds all of `key`.
fn index_on<'a>(set: &'a MappingSet, key: &[Var]) -> HashMap<Vec<&'a Term>, Vec<&'a Mapping>> {
    let mut idx: HashMap<Vec<&Term>, Vec<&Mapping>> = HashMap::new();
    for m in set {
        let k = key.iter().map(|v| m.get(v).expect("key variable is certain")).collect();
        idx.entry(k).or_default().push(m);
    }
    idx
}

fn probe_key<'a>(m: &'a Mapping, key: &[Var]) -> Vec<&'a Term> {
    key.iter().map(|v| m.get(v).expect("key variable is certain")).collect()
}

/// Ω₁ ⋈ Ω₂, hash-partitioned on the variables every mapping of both sides binds.
pub fn join(a: &MappingSet, b: &MappingSet) -> MappingSet {
    if a.is_empty() || b.is_empty() {
        return MappingSet::new();
    }
    let key: Vec<Var> = a.certain_vars().intersection(&b.certain_vars()).cloned().collect();
    let mut out = MappingSet::new();
    if key.is_empty() {
        for m1 in a {
            for m2 in b {
                if m1.compatible(m2) {
                    out.insert(m1.merge(m2));
                }
            }
        }
        return out;
    }
    let (build, probe) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let idx = index_on(build, &key);
    for m in probe {
        if let Some(bucket) = idx.get(&probe_key(m, &key)) {
            for other in bucket {
                if m.compatible(other) {
                    out.insert(m.merge(other));
                }
            }
        }
    }
    out
}

/// Ω₁ ∖ Ω₂: mappings of Ω₁ compatible with no mapping of Ω₂.
pub fn diff(a: &MappingSet, b: &MappingSet) -> MappingSet {
    if b.is_empty() {
        return a.clone();
    }
    let key: Vec<Var> = a.certain_vars().intersection(&b.certain_vars()).cloned().collect();
    if key.is_empty() {
        return a
            .iter()
            .filter(|m1| !b.iter().any(|m2| m1.compatible(m2)))
            .cloned()
            .collect();
    }
    let idx = index_on(b, &key);
    a.iter()
        .filter(|m1| {
            idx.get(&probe_key(m1, &key))
                .is_none_or(|bucket| !bucket.iter().any(|m2| m1.compatible(m2)))
        })
        .cloned()
        .collect()
}

/// (Ω₁ ⋈ Ω₂) ∪ (Ω₁ ∖ Ω₂).
pub fn left_join(a: &MappingSet, b: &MappingSet) -> MappingSet {
    let mut out = join(a, b);
    out.0.extend(diff(a, b).0);
    out
}

pub fn union(a: &MappingSet, b: &MappingSet) -> MappingSet {
    a.iter().chain(b.iter()).cloned().collect()
}

/// {μ|S∩dom μ : μ ∈ Ω}, duplicates collapsed.
pub fn project(set: &MappingSet, vars: &BTreeSet<Var>) -> MappingSet {
    set.iter().map(|m| m.restrict(vars)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Term {
        Term::iri(s)
    }

    fn m(pairs: &[(&str, &str)]) -> Mapping {
        pairs.iter().map(|(v, t)| (Var::new(v), iri(t))).collect()
    }

    fn set(ms: &[Mapping]) -> MappingSet {
        ms.iter().cloned().collect()
    }

    #[test]
    fn compatibility() {
        assert!(m(&[("x", "a")]).compatible(&m(&[("y", "b")])));
        assert!(!m(&[("x", "a")]).compatible(&m(&[("x", "b")])));
        assert!(m(&[("x", "JonSmith")]).compatible(&m(&[("x", "JonSmith"), ("y", "SemanticUniversity")])));
    }

    #[test]
    fn join_cases() {
        let omega = set(&[m(&[("x", "Jon"), ("y", "SemU")]), m(&[("x", "Liz")])]);
        assert!(join(&MappingSet::new(), &omega).is_empty());
        assert_eq!(join(&MappingSet::unit(), &omega), omega);
        assert_eq!(
            join(&set(&[m(&[("x", "Jon")])]), &omega),
            set(&[m(&[("x", "Jon"), ("y", "SemU")])])
        );
    }

    #[test]
    fn join_with_partial_domains_uses_full_compatibility() {
        let a = set(&[m(&[("x", "a"), ("y", "b")]), m(&[("x", "a")])]);
        let b = set(&[m(&[("x", "a"), ("y", "c")])]);
        assert_eq!(join(&a, &b), set(&[m(&[("x", "a"), ("y", "c")])]));
    }

    #[test]
    fn diff_cases() {
        let omega = set(&[m(&[("x", "Jon")]), m(&[("x", "Liz")])]);
        assert_eq!(diff(&omega, &MappingSet::new()), omega);
        assert!(diff(&omega, &MappingSet::unit()).is_empty());
        assert_eq!(diff(&omega, &set(&[m(&[("x", "Jon")])])), set(&[m(&[("x", "Liz")])]));
    }

    #[test]
    fn left_join_cases() {
        let omega = set(&[m(&[("x", "Jon")])]);
        assert_eq!(left_join(&omega, &MappingSet::new()), omega);
        assert!(left_join(&MappingSet::new(), &omega).is_empty());
        let right = set(&[m(&[("x", "Jon"), ("y", "SemU")])]);
        assert_eq!(left_join(&omega, &right), right);
    }

    #[test]
    fn projection_collapses_duplicates() {
        let x: BTreeSet<Var> = [Var::new("x")].into();
        let omega = set(&[m(&[("x", "a"), ("y", "b")])]);
        let all: BTreeSet<Var> = [Var::new("x"), Var::new("y")].into();
        assert_eq!(project(&omega, &all), omega);
        assert_eq!(project(&omega, &x), set(&[m(&[("x", "a")])]));
        let two = set(&[m(&[("x", "a"), ("y", "b")]), m(&[("x", "a"), ("y", "c")])]);
        assert_eq!(project(&two, &x), set(&[m(&[("x", "a")])]));
    }

    #[test]
    fn canonical_order() {
        let s = set(&[m(&[("y", "a")]), m(&[("x", "b")]), m(&[("x", "a")])]);
        let order: Vec<_> = s.iter().cloned().collect();
        assert_eq!(order, vec![m(&[("x", "a")]), m(&[("x", "b")]), m(&[("y", "a")])]);
        let kinds = set(&[
            Mapping::new().with("x", Term::literal("a")),
            Mapping::new().with("x", Term::blank("a")),
            Mapping::new().with("x", iri("z")),
        ]);
        let order: Vec<_> = kinds.iter().map(|m| m.get(&Var::new("x")).unwrap().clone()).collect();
        assert_eq!(order, vec![iri("z"), Term::blank("a"), Term::literal("a")]);
    }

    #[test]
    fn submapping() {
        assert!(m(&[("x", "a")]).is_submapping_of(&m(&[("x", "a"), ("y", "b")])));
        assert!(Mapping::new().is_submapping_of(&m(&[("x", "a")])));
        assert!(!m(&[("x", "a")]).is_submapping_of(&m(&[("y", "a")])));
    }
}
