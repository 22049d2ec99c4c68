use std::fmt;
use std::sync::Arc;

/// IRI of `rdf:type`, the one prefixed name the pattern syntax knows about.
pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

/// A query variable. The name is stored without the leading `?`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    /// Panics on an empty name; variable names are never empty.
    pub fn new(name: impl AsRef<str>) -> Self {
        let name = name.as_ref();
        let name = name.strip_prefix('?').unwrap_or(name);
        assert!(!name.is_empty(), "variable name must be nonempty");
        Var(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

/// An RDF term or a query variable.
///
/// Variant order fixes the canonical term order used for answer output:
/// IRIs sort before blank nodes, blank nodes before literals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Arc<str>),
    Blank(Arc<str>),
    Literal(Arc<str>),
    Var(Var),
}

impl Term {
    pub fn iri(s: impl AsRef<str>) -> Self {
        Term::Iri(Arc::from(s.as_ref()))
    }

    pub fn literal(s: impl AsRef<str>) -> Self {
        Term::Literal(Arc::from(s.as_ref()))
    }

    pub fn blank(s: impl AsRef<str>) -> Self {
        Term::Blank(Arc::from(s.as_ref()))
    }

    pub fn var(name: impl AsRef<str>) -> Self {
        Term::Var(Var::new(name))
    }

    pub fn rdf_type() -> Self {
        Term::iri(RDF_TYPE)
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// IRIs, literals and blank nodes all behave as constants under mapping application.
    pub fn is_constant(&self) -> bool {
        !self.is_var()
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(s) => write!(f, "<{s}>"),
            Term::Blank(s) => write!(f, "_:{s}"),
            Term::Literal(s) => write!(f, "{s:?}"),
            Term::Var(v) => write!(f, "{v}"),
        }
    }
}

/// A triple pattern. Subjects and objects may be IRIs, literals or variables,
/// predicates IRIs or variables. Blank nodes never appear in patterns.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriplePattern {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl TriplePattern {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Self {
        TriplePattern {
            subject,
            predicate,
            object,
        }
    }

    pub fn terms(&self) -> [&Term; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn variables(&self) -> impl Iterator<Item = &Var> {
        self.terms().into_iter().filter_map(Term::as_var)
    }

    /// Checks the position typing of a pattern triple, returning a reason on failure.
    pub fn check_typing(&self) -> Result<(), &'static str> {
        if matches!(self.subject, Term::Blank(_))
            || matches!(self.predicate, Term::Blank(_))
            || matches!(self.object, Term::Blank(_))
        {
            return Err("blank nodes are not allowed in triple patterns");
        }
        if matches!(self.predicate, Term::Literal(_)) {
            return Err("a literal cannot be a predicate");
        }
        Ok(())
    }
}

impl fmt::Debug for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?}, {:?})", self.subject, self.predicate, self.object)
    }
}
