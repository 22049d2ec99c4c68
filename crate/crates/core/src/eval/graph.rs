use std::collections::{BTreeSet, HashMap};

use crate::algebra::Term;
use crate::error::{Error, Result};
use crate::surface::{format_ntriple, parse_ntriples, RdfTriple};

/// An immutable, de-duplicated set of RDF triples with subject, predicate and
/// object indexes.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    triples: Vec<RdfTriple>,
    by_subject: HashMap<Term, Vec<u32>>,
    by_predicate: HashMap<Term, Vec<u32>>,
    by_object: HashMap<Term, Vec<u32>>,
}

impl Graph {
    /// Rejects triples outside (I ∪ B) × I × (I ∪ B ∪ L).
    pub fn new(triples: impl IntoIterator<Item = RdfTriple>) -> Result<Graph> {
        let mut set = BTreeSet::new();
        for t in triples {
            check_typing(&t)?;
            set.insert(t);
        }
        let triples: Vec<RdfTriple> = set.into_iter().collect();
        let mut g = Graph {
            triples,
            ..Graph::default()
        };
        for (i, (s, p, o)) in g.triples.iter().enumerate() {
            let i = u32::try_from(i).expect("graph has fewer than 2^32 triples");
            g.by_subject.entry(s.clone()).or_default().push(i);
            g.by_predicate.entry(p.clone()).or_default().push(i);
            g.by_object.entry(o.clone()).or_default().push(i);
        }
        Ok(g)
    }

    pub fn from_ntriples(src: &str) -> Result<Graph> {
        Graph::new(parse_ntriples(src)?)
    }

    pub fn to_ntriples(&self) -> String {
        self.triples.iter().map(|t| format_ntriple(t) + "\n").collect()
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Triples in sorted order.
    pub fn triples(&self) -> &[RdfTriple] {
        &self.triples
    }

    pub fn contains(&self, t: &RdfTriple) -> bool {
        self.triples.binary_search(t).is_ok()
    }

    /// Triples matching the given constants (`None` is a wildcard), using the
    /// most selective available index.
    pub fn matching<'a>(
        &'a self,
        s: Option<&Term>,
        p: Option<&Term>,
        o: Option<&Term>,
    ) -> Box<dyn Iterator<Item = &'a RdfTriple> + 'a> {
        let lists = [
            s.map(|t| self.by_subject.get(t)),
            p.map(|t| self.by_predicate.get(t)),
            o.map(|t| self.by_object.get(t)),
        ];
        let mut best: Option<&[u32]> = None;
        for list in lists.into_iter().flatten() {
            let list = list.map(Vec::as_slice).unwrap_or(&[]);
            if best.is_none_or(|b| list.len() < b.len()) {
                best = Some(list);
            }
        }
        let (s, p, o) = (s.cloned(), p.cloned(), o.cloned());
        let keep = move |t: &&RdfTriple| {
            s.as_ref().is_none_or(|x| *x == t.0)
                && p.as_ref().is_none_or(|x| *x == t.1)
                && o.as_ref().is_none_or(|x| *x == t.2)
        };
        match best {
            Some(ids) => Box::new(ids.iter().map(move |&i| &self.triples[i as usize]).filter(keep)),
            None => Box::new(self.triples.iter().filter(keep)),
        }
    }
}

fn check_typing((s, p, o): &RdfTriple) -> Result<()> {
    let bad = |why: &str| Err(Error::InvalidData(format!("{why} in {s:?} {p:?} {o:?}")));
    if !matches!(s, Term::Iri(_) | Term::Blank(_)) {
        return bad("subject must be an IRI or blank node");
    }
    if !matches!(p, Term::Iri(_)) {
        return bad("predicate must be an IRI");
    }
    if o.is_var() {
        return bad("object must not be a variable");
    }
    Ok(())
}
