use std::collections::BTreeSet;

use super::lexer::{tokenize, Tok, Token};
use crate::algebra::{Constraint, Pattern, Term, TriplePattern, Var};
use crate::error::{ParseError, SourceSpan};

const KEYWORDS: [&str; 6] = ["OPTIONAL", "FILTER", "UNION", "SELECT", "WHERE", "BOUND"];

pub(crate) fn is_keyword(name: &str) -> bool {
    KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(name))
}

/// Parses a pattern, assigning OPT labels 1, 2, … in preorder.
///
/// ```
/// let q = wdsparql::parse_pattern(
///     "{?x rdf:type professor OPTIONAL {?x workFor ?y OPTIONAL {?x teachOf ?z}}}",
/// ).unwrap();
/// assert_eq!(q.opt_count(), 2);
/// ```
pub fn parse_pattern(src: &str) -> Result<Pattern, ParseError> {
    let tokens = tokenize(src)?;
    let mut parser = Parser { src, tokens, pos: 0 };
    let pattern = parser.query()?;
    if let Some(t) = parser.peek_token() {
        return Err(parser.error_at(t.span, "trailing input after pattern"));
    }
    Ok(pattern.renumber_opts())
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser<'_> {
    fn peek_token(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek(&self) -> Option<&Tok> {
        self.peek_token().map(|t| &t.tok)
    }

    fn peek_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Name(n)) if n.eq_ignore_ascii_case(kw))
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eof_span(&self) -> SourceSpan {
        SourceSpan::new(self.src.len(), self.src.len())
    }

    fn current_span(&self) -> SourceSpan {
        self.peek_token().map(|t| t.span).unwrap_or_else(|| self.eof_span())
    }

    fn error_at(&self, span: SourceSpan, msg: impl Into<String>) -> ParseError {
        ParseError::at(self.src, span, msg)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token, ParseError> {
        match self.next() {
            Some(t) if t.tok == want => Ok(t),
            Some(t) => Err(self.error_at(t.span, format!("expected {what}"))),
            None => Err(self.error_at(self.eof_span(), format!("expected {what}, found end of input"))),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.peek_keyword(kw) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_at(self.current_span(), format!("expected {kw}")))
        }
    }

    fn query(&mut self) -> Result<Pattern, ParseError> {
        if self.peek_keyword("SELECT") {
            self.select()
        } else {
            self.group()
        }
    }

    fn select(&mut self) -> Result<Pattern, ParseError> {
        self.expect_keyword("SELECT")?;
        let mut vars = BTreeSet::new();
        while let Some(Tok::Var(name)) = self.peek() {
            vars.insert(Var::new(name));
            self.pos += 1;
        }
        self.expect_keyword("WHERE")?;
        let inner = self.group()?;
        Ok(Pattern::Select(vars, Box::new(inner)))
    }

    fn group(&mut self) -> Result<Pattern, ParseError> {
        let open = self.expect(Tok::LBrace, "`{`")?;
        if self.peek_keyword("SELECT") {
            let sub = self.select()?;
            self.expect(Tok::RBrace, "`}` after sub-select")?;
            return Ok(sub);
        }

        let mut acc: Option<Pattern> = None;
        let mut filters: Vec<Constraint> = Vec::new();
        loop {
            let span = self.current_span();
            match self.peek() {
                None => return Err(self.error_at(open.span, "unclosed `{`")),
                Some(Tok::RBrace) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Dot) => {
                    self.pos += 1;
                }
                Some(Tok::LBrace) => {
                    let mut element = self.group()?;
                    while self.peek_keyword("UNION") {
                        self.pos += 1;
                        let rhs = self.group()?;
                        element = Pattern::union(element, rhs);
                    }
                    acc = Some(match acc {
                        None => element,
                        Some(a) => Pattern::and(a, element),
                    });
                }
                Some(Tok::Name(n)) if n.eq_ignore_ascii_case("OPTIONAL") => {
                    self.pos += 1;
                    let rhs = self.group()?;
                    let Some(lhs) = acc.take() else {
                        return Err(self.error_at(span, "OPTIONAL needs a preceding pattern in its group"));
                    };
                    acc = Some(Pattern::opt(0, lhs, rhs));
                }
                Some(Tok::Name(n)) if n.eq_ignore_ascii_case("FILTER") => {
                    self.pos += 1;
                    self.expect(Tok::LParen, "`(` after FILTER")?;
                    let c = self.constraint()?;
                    self.expect(Tok::RParen, "`)` closing FILTER")?;
                    filters.push(c);
                }
                Some(Tok::Name(n)) if n.eq_ignore_ascii_case("UNION") => {
                    return Err(self.error_at(span, "UNION must follow a `{ ... }` group"));
                }
                Some(_) => {
                    let t = self.triple()?;
                    acc = Some(match acc {
                        None => t,
                        Some(a) => Pattern::and(a, t),
                    });
                    match self.peek() {
                        Some(Tok::Dot) | Some(Tok::RBrace) | None => {}
                        Some(Tok::Name(n)) if is_keyword(n) => {}
                        Some(Tok::LBrace) => {}
                        _ => return Err(self.error_at(self.current_span(), "expected `.` between triple patterns")),
                    }
                }
            }
        }

        let Some(mut pattern) = acc else {
            let msg = if filters.is_empty() {
                "empty group"
            } else {
                "group contains only FILTER"
            };
            return Err(self.error_at(open.span, msg));
        };
        if let Some(c) = filters.into_iter().reduce(Constraint::and) {
            pattern = Pattern::filter(pattern, c);
        }
        Ok(pattern)
    }

    fn triple(&mut self) -> Result<Pattern, ParseError> {
        let start = self.current_span().start;
        let s = self.term("subject")?;
        let p = self.term("predicate")?;
        let o = self.term("object")?;
        let end = self.tokens[self.pos - 1].span.end;
        let triple = TriplePattern::new(s, p, o);
        triple
            .check_typing()
            .map_err(|msg| self.error_at(SourceSpan::new(start, end), msg))?;
        Ok(Pattern::Triple(triple))
    }

    fn term(&mut self, role: &str) -> Result<Term, ParseError> {
        let Some(t) = self.next() else {
            return Err(self.error_at(self.eof_span(), format!("expected {role}, found end of input")));
        };
        match t.tok {
            Tok::Var(name) => Ok(Term::var(name)),
            Tok::Iri(iri) => Ok(Term::iri(iri)),
            Tok::RdfType => Ok(Term::rdf_type()),
            Tok::Literal(s) => Ok(Term::literal(s)),
            Tok::Blank(_) => Err(self.error_at(t.span, "blank nodes are not allowed in patterns")),
            Tok::Name(n) if !is_keyword(&n) => Ok(Term::iri(n)),
            _ => Err(self.error_at(t.span, format!("expected {role}"))),
        }
    }

    fn constraint(&mut self) -> Result<Constraint, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::OrOr) {
            self.pos += 1;
            let rhs = self.conjunction()?;
            lhs = Constraint::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Constraint, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::AndAnd) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Constraint::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Constraint, ParseError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(Constraint::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let c = self.constraint()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(c)
            }
            _ if self.peek_keyword("BOUND") => {
                self.pos += 1;
                self.expect(Tok::LParen, "`(` after BOUND")?;
                let v = match self.next() {
                    Some(Token {
                        tok: Tok::Var(name), ..
                    }) => Var::new(name),
                    _ => return Err(self.error_at(self.tokens[self.pos - 1].span, "BOUND takes a variable")),
                };
                self.expect(Tok::RParen, "`)` closing BOUND")?;
                Ok(Constraint::bound(v))
            }
            _ => self.comparison(),
        }
    }

    fn comparison(&mut self) -> Result<Constraint, ParseError> {
        let start = self.current_span().start;
        let lhs = self.term("comparison operand")?;
        let negate = match self.next() {
            Some(Token { tok: Tok::Eq, .. }) => false,
            Some(Token { tok: Tok::Neq, .. }) => true,
            _ => return Err(self.error_at(self.tokens[self.pos - 1].span, "expected `=` or `!=`")),
        };
        let rhs = self.term("comparison operand")?;
        let end = self.tokens[self.pos - 1].span.end;
        let atom = match (lhs, rhs) {
            (Term::Var(a), Term::Var(b)) => Constraint::eq_vars(a, b),
            (Term::Var(v), c) | (c, Term::Var(v)) => Constraint::eq_term(v, c),
            _ => return Err(self.error_at(SourceSpan::new(start, end), "a comparison needs at least one variable")),
        };
        Ok(if negate { Constraint::not(atom) } else { atom })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::OptId;

    fn tp(s: Term, p: Term, o: Term) -> Pattern {
        Pattern::Triple(TriplePattern::new(s, p, o))
    }

    #[test]
    fn single_triple() {
        let p = parse_pattern("{?x rdf:type professor}").unwrap();
        assert_eq!(p, tp(Term::var("x"), Term::rdf_type(), Term::iri("professor")));
    }

    #[test]
    fn empty_group_is_an_error() {
        let e = parse_pattern("{}").unwrap_err();
        assert_eq!(e.message, "empty group");
        assert_eq!(e.span, SourceSpan::new(0, 1));
    }

    #[test]
    fn intro_query_q() {
        let p = parse_pattern("{?x rdf:type professor OPTIONAL {?x workFor ?y OPTIONAL {?x teachOf ?z}}}").unwrap();
        let expected = Pattern::opt(
            1,
            tp(Term::var("x"), Term::rdf_type(), Term::iri("professor")),
            Pattern::opt(
                2,
                tp(Term::var("x"), Term::iri("workFor"), Term::var("y")),
                tp(Term::var("x"), Term::iri("teachOf"), Term::var("z")),
            ),
        );
        assert_eq!(p, expected);
    }

    #[test]
    fn opt_ids_are_preorder() {
        let p = parse_pattern("{ { {?a p ?b} OPTIONAL {?b q ?c} } OPTIONAL { ?a r ?d OPTIONAL {?d s ?e} } }").unwrap();
        assert_eq!(p.opt_ids(), vec![OptId(1), OptId(2), OptId(3)]);
        match &p {
            Pattern::Opt(OptId(1), l, r) => {
                assert!(matches!(**l, Pattern::Opt(OptId(2), ..)));
                assert!(matches!(**r, Pattern::Opt(OptId(3), ..)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn filters_and_constraint_precedence() {
        let p = parse_pattern("{ ?x p ?y . FILTER(!BOUND(?y) || ?x = a && ?y != \"b\") }").unwrap();
        let x = Var::new("x");
        let y = Var::new("y");
        let c = Constraint::or(
            Constraint::not(Constraint::bound(y.clone())),
            Constraint::and(
                Constraint::eq_term(x.clone(), Term::iri("a")),
                Constraint::not(Constraint::eq_term(y, Term::literal("b"))),
            ),
        );
        assert_eq!(
            p,
            Pattern::filter(tp(Term::var("x"), Term::iri("p"), Term::var("y")), c)
        );
    }

    #[test]
    fn constant_on_the_left_of_equality() {
        let p = parse_pattern("{ ?x p ?y FILTER(a = ?x) }").unwrap();
        let Pattern::Filter(_, c) = p else { panic!() };
        assert_eq!(c, Constraint::eq_term(Var::new("x"), Term::iri("a")));
        assert!(parse_pattern("{ ?x p ?y FILTER(a = b) }").is_err());
    }

    #[test]
    fn triple_block_is_left_deep_and() {
        let p = parse_pattern("{ ?x p ?y . ?y q ?z . ?z r ?w }").unwrap();
        match p {
            Pattern::And(l, _) => assert!(matches!(*l, Pattern::And(..))),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn union_and_select() {
        let p = parse_pattern("SELECT ?x WHERE { {?x p ?y} UNION {?x q ?y} }").unwrap();
        let Pattern::Select(vars, inner) = p else { panic!() };
        assert_eq!(vars.into_iter().collect::<Vec<_>>(), vec![Var::new("x")]);
        assert!(matches!(*inner, Pattern::Union(..)));

        let nested = parse_pattern("{ ?x p ?y . { SELECT ?y WHERE { ?y q ?z } } }").unwrap();
        assert!(matches!(nested, Pattern::And(_, ref r) if matches!(**r, Pattern::Select(..))));
    }

    #[test]
    fn rejected_inputs() {
        for (src, needle) in [
            ("{ _:b p ?x }", "blank"),
            ("{ ?x \"lit\" ?y }", "predicate"),
            ("{ OPTIONAL { ?x p ?y } }", "OPTIONAL"),
            ("{ FILTER(BOUND(?x)) }", "only FILTER"),
            ("{ ?x p ?y ?z q ?w }", "`.`"),
            ("{ ?x p ?y", "unclosed"),
            ("{ ?x p ?y } }", "trailing"),
            ("{ ?x p }", "object"),
        ] {
            let e = parse_pattern(src).unwrap_err();
            assert!(e.message.contains(needle), "{src}: {}", e.message);
        }
    }

    #[test]
    fn error_reports_line() {
        let e = parse_pattern("{\n  ?x p ?y .\n  _:b q ?z\n}").unwrap_err();
        assert_eq!(e.line, 3);
    }
}
