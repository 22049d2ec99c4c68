//! Well-designed SPARQL graph patterns: parsing, well-designedness checks,
//! OPT normal form, OPT-depth, k-approximation over well-designed trees, and
//! set-semantics evaluation over in-memory RDF graphs.
//!
//! ```
//! use wdsparql::{parse_pattern, print_pattern, k_approximate};
//!
//! let q = parse_pattern("{ ?x rdf:type professor OPTIONAL { ?x workFor ?y OPTIONAL { ?x teachOf ?z } } }").unwrap();
//! assert_eq!(q.opt_depth().unwrap(), 2);
//! let q1 = k_approximate(&q, 1).unwrap();
//! assert_eq!(print_pattern(&q1), "{ ?x rdf:type professor . OPTIONAL { ?x workFor ?y . } }");
//! ```

pub mod algebra;
pub mod bench;
pub mod error;
pub mod eval;
pub mod normalform;
pub mod random;
pub mod surface;
pub mod wdtree;
pub mod wellformed;

pub use algebra::{Constraint, OptId, Pattern, Term, TriplePattern, Var, RDF_TYPE};
pub use error::{Error, ParseError, Result, SourceSpan};
pub use eval::{evaluate, AnswerFormat, Graph, Mapping, MappingSet};
pub use normalform::{is_opt_normal_form, to_opt_normal_form, RewriteTrace};
pub use surface::{parse_ntriples, parse_pattern, print_pattern};
pub use wdtree::{build_tree, k_approximate, k_approximate_recursive, reductions, WdTree};
pub use wellformed::{check_well_designed, is_well_designed, Violation, ViolationKind};
