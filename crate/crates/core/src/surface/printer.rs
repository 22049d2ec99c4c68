use super::lexer::{escape_string, is_name_char, is_name_start, is_var_char};
use super::parser::is_keyword;
use crate::algebra::{Constraint, Pattern, Term, TriplePattern, RDF_TYPE};

/// Prints a pattern in the surface syntax. The output re-parses to a pattern
/// that is structurally equal to the input.
pub fn print_pattern(p: &Pattern) -> String {
    match p {
        Pattern::Select(vars, inner) => select_text(vars.iter(), inner),
        p => group(p),
    }
}

/// Prints a term the way the pattern syntax (and answer output) writes it.
pub fn format_term(t: &Term) -> String {
    match t {
        Term::Var(v) => v.to_string(),
        Term::Iri(iri) if &**iri == RDF_TYPE => "rdf:type".to_string(),
        Term::Iri(iri) if is_bare_name(iri) => iri.to_string(),
        Term::Iri(iri) => format!("<{iri}>"),
        Term::Literal(s) => escape_string(s),
        Term::Blank(b) => format!("_:{b}"),
    }
}

pub fn format_constraint(c: &Constraint) -> String {
    match c {
        Constraint::Bound(v) => format!("BOUND({v})"),
        Constraint::EqVarTerm(v, t) => format!("{v} = {}", format_term(t)),
        Constraint::EqVarVar(a, b) => format!("{a} = {b}"),
        Constraint::Not(inner) => format!("!({})", format_constraint(inner)),
        Constraint::And(a, b) => format!("({} && {})", format_constraint(a), format_constraint(b)),
        Constraint::Or(a, b) => format!("({} || {})", format_constraint(a), format_constraint(b)),
    }
}

fn is_bare_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if is_name_start(c)) && chars.all(is_name_char) && !is_keyword(s)
}

fn triple_text(t: &TriplePattern) -> String {
    format!(
        "{} {} {} .",
        format_term(&t.subject),
        format_term(&t.predicate),
        format_term(&t.object)
    )
}

fn select_text<'a>(vars: impl Iterator<Item = &'a crate::algebra::Var>, inner: &Pattern) -> String {
    let mut s = String::from("SELECT");
    for v in vars {
        debug_assert!(v.name().chars().all(is_var_char));
        s.push(' ');
        s.push_str(&v.to_string());
    }
    s.push_str(" WHERE ");
    s.push_str(&group(inner));
    s
}

fn braces(items: &[String]) -> String {
    format!("{{ {} }}", items.join(" "))
}

fn group(p: &Pattern) -> String {
    match p {
        Pattern::Filter(inner, c) => {
            let mut items = elements(inner);
            items.push(format!("FILTER({})", format_constraint(c)));
            braces(&items)
        }
        Pattern::Select(vars, inner) => format!("{{ {} }}", select_text(vars.iter(), inner)),
        p => braces(&elements(p)),
    }
}

/// Group-body items which, accumulated left to right by the parser, rebuild `p`.
fn elements(p: &Pattern) -> Vec<String> {
    match p {
        Pattern::Triple(t) => vec![triple_text(t)],
        Pattern::And(a, b) => {
            let mut items = elements(a);
            items.push(element(b));
            items
        }
        Pattern::Opt(_, a, b) => {
            let mut items = elements(a);
            items.push(format!("OPTIONAL {}", group(b)));
            items
        }
        Pattern::Union(..) => vec![union_text(p)],
        Pattern::Filter(..) | Pattern::Select(..) => vec![group(p)],
    }
}

fn element(p: &Pattern) -> String {
    match p {
        Pattern::Triple(t) => triple_text(t),
        Pattern::Union(..) => union_text(p),
        p => group(p),
    }
}

fn union_text(p: &Pattern) -> String {
    match p {
        Pattern::Union(a, b) => {
            let lhs = match &**a {
                Pattern::Union(..) => union_text(a),
                a => group(a),
            };
            format!("{lhs} UNION {}", group(b))
        }
        p => group(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_pattern;

    fn round_trip(src: &str) {
        let p = parse_pattern(src).unwrap();
        let printed = print_pattern(&p);
        let q = parse_pattern(&printed).unwrap_or_else(|e| panic!("{printed}: {e}"));
        assert!(p.structural_eq(&q), "{src}\n  printed {printed}");
        assert_eq!(p, q, "labels also survive: {printed}");
    }

    #[test]
    fn prints_single_triple() {
        let p = parse_pattern("{?x p ?y}").unwrap();
        assert_eq!(print_pattern(&p), "{ ?x p ?y . }");
    }

    #[test]
    fn filter_is_parenthesized() {
        let p = parse_pattern("{?x p ?y FILTER(?y = \"a b\" || BOUND(?x))}").unwrap();
        let s = print_pattern(&p);
        assert!(s.contains("FILTER((?y = \"a b\" || BOUND(?x)))"), "{s}");
    }

    #[test]
    fn round_trips() {
        round_trip("{?x rdf:type professor OPTIONAL {?x workFor ?y OPTIONAL {?x teachOf ?z}}}");
        round_trip("{ {?x p ?y FILTER(BOUND(?x))} FILTER(!(?y = a)) }");
        round_trip("{ {?x p ?y} UNION {?x q ?y} UNION {?x r ?y} }");
        round_trip("{ {?x p ?y} UNION { {?x q ?y} UNION {?x r ?y} } }");
        round_trip("{ ?x p ?y . { ?y q ?z OPTIONAL { ?z r ?w } } . ?x s \"lit\" }");
        round_trip("SELECT ?x ?y WHERE { ?x p ?y . { SELECT ?y WHERE { ?y q ?z } } }");
        round_trip("{ { ?a p ?b OPTIONAL { ?b q ?c } } . ?a <http://ex.org/x> <OPTIONAL> }");
    }
}
