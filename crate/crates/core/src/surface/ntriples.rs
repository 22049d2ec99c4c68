//! The N-Triples subset used for data files: `<iri>`, `_:blank` and plain
//! `"literal"` terms, one triple per line, `#` comments.

use super::lexer::{escape_string, is_name_char, lex_string};
use crate::algebra::Term;
use crate::error::{ParseError, SourceSpan};

pub type RdfTriple = (Term, Term, Term);

/// Parses N-Triples text. Duplicates are kept; [`crate::eval::Graph`] removes them.
pub fn parse_ntriples(src: &str) -> Result<Vec<RdfTriple>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in src.split_inclusive('\n') {
        let base = offset;
        offset += line.len();
        let body = line.trim_end_matches(['\n', '\r']);
        if let Some(t) = parse_line(src, base, body)? {
            out.push(t);
        }
    }
    Ok(out)
}

fn parse_line(src: &str, base: usize, line: &str) -> Result<Option<RdfTriple>, ParseError> {
    let mut chars = line.char_indices().peekable();
    let err = |start: usize, end: usize, msg: &str| ParseError::at(src, SourceSpan::new(base + start, base + end), msg);
    let skip_ws = |chars: &mut std::iter::Peekable<std::str::CharIndices<'_>>| {
        while matches!(chars.peek(), Some((_, c)) if c.is_whitespace()) {
            chars.next();
        }
    };

    let mut terms: Vec<Term> = Vec::with_capacity(3);
    loop {
        skip_ws(&mut chars);
        let Some(&(start, c)) = chars.peek() else {
            if terms.is_empty() {
                return Ok(None);
            }
            return Err(err(0, line.len(), "incomplete triple (missing `.`)"));
        };
        if c == '#' && terms.is_empty() {
            return Ok(None);
        }
        if terms.len() == 3 {
            if c != '.' {
                return Err(err(start, line.len(), "expected `.` after object"));
            }
            chars.next();
            skip_ws(&mut chars);
            match chars.peek() {
                None | Some((_, '#')) => break,
                Some(&(i, _)) => return Err(err(i, line.len(), "unexpected text after `.`")),
            }
        }
        chars.next();
        let term = match c {
            '<' => {
                let mut iri = String::new();
                loop {
                    match chars.next() {
                        Some((_, '>')) => break,
                        Some((i, c)) if c.is_whitespace() || c == '<' || c == '"' => {
                            return Err(err(start, i + 1, "invalid character in IRI"));
                        }
                        Some((_, c)) => iri.push(c),
                        None => return Err(err(start, line.len(), "unterminated IRI")),
                    }
                }
                if iri.is_empty() {
                    return Err(err(start, start + 2, "empty IRI"));
                }
                Term::iri(iri)
            }
            '_' if matches!(chars.peek(), Some((_, ':'))) => {
                chars.next();
                let mut label = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if !is_name_char(c) {
                        break;
                    }
                    label.push(c);
                    chars.next();
                }
                if label.is_empty() {
                    return Err(err(start, start + 2, "empty blank node label"));
                }
                Term::blank(label)
            }
            '"' => {
                let s = lex_string(line, start, &mut chars).map_err(|e| err(e.span.start, e.span.end, &e.message))?;
                if let Some(&(i, c)) = chars.peek() {
                    if c == '@' || c == '^' {
                        return Err(err(
                            i,
                            line.len(),
                            "typed and language-tagged literals are not supported",
                        ));
                    }
                }
                Term::literal(s)
            }
            _ => {
                return Err(err(
                    start,
                    start + c.len_utf8(),
                    "expected `<iri>`, `_:label` or `\"literal\"`",
                ))
            }
        };
        let end = chars.peek().map(|&(i, _)| i).unwrap_or(line.len());
        let ok = match terms.len() {
            0 => !matches!(term, Term::Literal(_)),
            1 => matches!(term, Term::Iri(_)),
            _ => true,
        };
        if !ok {
            let role = ["subject", "predicate"][terms.len()];
            return Err(err(start, end, &format!("invalid {role}")));
        }
        terms.push(term);
    }
    let o = terms.pop().expect("three terms");
    let p = terms.pop().expect("three terms");
    let s = terms.pop().expect("three terms");
    Ok(Some((s, p, o)))
}

/// Writes one triple as an N-Triples line (without the trailing newline).
pub fn format_ntriple((s, p, o): &RdfTriple) -> String {
    fn term(t: &Term) -> String {
        match t {
            Term::Iri(i) => format!("<{i}>"),
            Term::Blank(b) => format!("_:{b}"),
            Term::Literal(l) => escape_string(l),
            Term::Var(v) => panic!("variable {v} in RDF data"),
        }
    }
    format!("{} {} {} .", term(s), term(p), term(o))
}

#[cfg(test)]
mod tests {
    use super::*;

    const PROFESSOR_NT: &str = "\
<JonSmith> <workFor> <SemanticUniversity> .
<JonSmith> <teachOf> <LizBen> .
<JonSmith> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <professor> .
<LizBen> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <master> .
<LizBen> <advisor> <JonSmith> .
<LizBen> <takesCourse> <Ontology> .
";

    #[test]
    fn single_line() {
        let ts = parse_ntriples("<JonSmith> <workFor> <SemanticUniversity> .").unwrap();
        assert_eq!(
            ts,
            vec![(
                Term::iri("JonSmith"),
                Term::iri("workFor"),
                Term::iri("SemanticUniversity")
            )]
        );
    }

    #[test]
    fn empty_input() {
        assert!(parse_ntriples("").unwrap().is_empty());
        assert!(parse_ntriples("\n# only a comment\n   \n").unwrap().is_empty());
    }

    #[test]
    fn professor_table() {
        let ts = parse_ntriples(PROFESSOR_NT).unwrap();
        assert_eq!(ts.len(), 6);
        assert_eq!(ts[2].1, Term::rdf_type());
    }

    #[test]
    fn blanks_literals_and_comments() {
        let ts = parse_ntriples("_:b1 <name> \"Liz \\\"B\\\"\" . # trailing\r\n").unwrap();
        assert_eq!(
            ts,
            vec![(Term::blank("b1"), Term::iri("name"), Term::literal("Liz \"B\""))]
        );
        assert_eq!(parse_ntriples(&format!("{}\n", format_ntriple(&ts[0]))).unwrap(), ts);
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        for (src, line, needle) in [
            ("<a> <b> <c> .\n<a> <b> <c>\n", 2, "missing"),
            ("<a> <b> <c> .\n\n\"x\" <b> <c> .", 3, "subject"),
            ("<a> _:p <c> .", 1, "predicate"),
            ("<a> <b> \"x\"@en .", 1, "language"),
            ("<a> <b> <c> . <d>", 1, "after"),
            ("<a> <b c> .", 1, "IRI"),
        ] {
            let e = parse_ntriples(src).unwrap_err();
            assert_eq!(e.line, line, "{src}");
            assert!(e.message.contains(needle), "{src}: {}", e.message);
        }
    }
}
