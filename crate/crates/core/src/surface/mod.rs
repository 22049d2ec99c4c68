//! Text front end: the pattern language, its printer, and N-Triples data.
//!
//! Pattern syntax, in brief:
//!
//! ```text
//! query   := ["SELECT" ?var* "WHERE"] group
//! group   := "{" element* "}"  |  "{" "SELECT" ?var* "WHERE" group "}"
//! element := triple ["."] | group ("UNION" group)* | "OPTIONAL" group | "FILTER" "(" constraint ")"
//! term    := ?var | <iri> | bare-name | rdf:type | "literal"
//! ```
//!
//! Elements of a group accumulate left to right with AND (OPTIONAL takes the
//! accumulated pattern as its left arm); the FILTERs of a group apply to the
//! whole group, conjoined.

mod lexer;
mod ntriples;
mod parser;
mod printer;

pub use ntriples::{format_ntriple, parse_ntriples, RdfTriple};
pub use parser::parse_pattern;
pub use printer::{format_constraint, format_term, print_pattern};
