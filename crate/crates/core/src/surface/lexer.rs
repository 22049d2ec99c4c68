use crate::error::{ParseError, SourceSpan};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    LBrace,
    RBrace,
    LParen,
    RParen,
    Dot,
    Eq,
    Neq,
    AndAnd,
    OrOr,
    Bang,
    Var(String),
    Iri(String),
    /// Unprefixed bare name, or a keyword (keywords are matched case-insensitively by the parser).
    Name(String),
    RdfType,
    Literal(String),
    Blank(String),
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub(crate) fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

pub(crate) fn is_var_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    let err = |start: usize, end: usize, msg: String| ParseError::at(src, SourceSpan::new(start, end), msg);

    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == '#' {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        chars.next();
        let simple = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '.' => Some(Tok::Dot),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token {
                tok,
                span: SourceSpan::new(start, start + 1),
            });
            continue;
        }
        let tok = match c {
            '!' => {
                if chars.peek().map(|&(_, c)| c) == Some('=') {
                    chars.next();
                    Tok::Neq
                } else {
                    Tok::Bang
                }
            }
            '&' | '|' => match chars.next() {
                Some((_, d)) if d == c => {
                    if c == '&' {
                        Tok::AndAnd
                    } else {
                        Tok::OrOr
                    }
                }
                _ => return Err(err(start, start + 1, format!("expected `{c}{c}`"))),
            },
            '?' => {
                let mut name = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if !is_var_char(c) {
                        break;
                    }
                    name.push(c);
                    chars.next();
                }
                if name.is_empty() {
                    return Err(err(start, start + 1, "empty variable name".into()));
                }
                Tok::Var(name)
            }
            '<' => {
                let mut iri = String::new();
                loop {
                    match chars.next() {
                        Some((_, '>')) => break,
                        Some((i, c)) if c.is_whitespace() || c == '<' || c == '"' => {
                            return Err(err(start, i + 1, format!("invalid character {c:?} in IRI")));
                        }
                        Some((_, c)) => iri.push(c),
                        None => return Err(err(start, src.len(), "unterminated IRI".into())),
                    }
                }
                if iri.is_empty() {
                    return Err(err(start, start + 2, "empty IRI".into()));
                }
                Tok::Iri(iri)
            }
            '"' => Tok::Literal(lex_string(src, start, &mut chars)?),
            '_' if chars.peek().map(|&(_, c)| c) == Some(':') => {
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
                    return Err(err(start, start + 2, "empty blank node label".into()));
                }
                Tok::Blank(label)
            }
            c if is_name_start(c) => {
                let mut name = String::from(c);
                while let Some(&(_, c)) = chars.peek() {
                    if !is_name_char(c) {
                        break;
                    }
                    name.push(c);
                    chars.next();
                }
                if chars.peek().map(|&(_, c)| c) == Some(':') {
                    chars.next();
                    let mut local = String::new();
                    while let Some(&(_, c)) = chars.peek() {
                        if !is_name_char(c) {
                            break;
                        }
                        local.push(c);
                        chars.next();
                    }
                    let end = chars.peek().map(|&(i, _)| i).unwrap_or(src.len());
                    if name == "rdf" && local == "type" {
                        Tok::RdfType
                    } else {
                        return Err(err(
                            start,
                            end,
                            format!("unknown prefixed name `{name}:{local}` (only rdf:type is predefined)"),
                        ));
                    }
                } else {
                    Tok::Name(name)
                }
            }
            c => return Err(err(start, start + c.len_utf8(), format!("unexpected character {c:?}"))),
        };
        let end = chars.peek().map(|&(i, _)| i).unwrap_or(src.len());
        out.push(Token {
            tok,
            span: SourceSpan::new(start, end),
        });
    }
    Ok(out)
}

/// Reads a double-quoted string body; the opening quote at `start` has been consumed.
pub(crate) fn lex_string(
    src: &str,
    start: usize,
    chars: &mut std::iter::Peekable<std::str::CharIndices<'_>>,
) -> Result<String, ParseError> {
    let mut s = String::new();
    loop {
        match chars.next() {
            Some((_, '"')) => return Ok(s),
            Some((i, '\\')) => match chars.next() {
                Some((_, 'n')) => s.push('\n'),
                Some((_, 't')) => s.push('\t'),
                Some((_, 'r')) => s.push('\r'),
                Some((_, '"')) => s.push('"'),
                Some((_, '\\')) => s.push('\\'),
                _ => {
                    return Err(ParseError::at(
                        src,
                        SourceSpan::new(i, (i + 2).min(src.len())),
                        "invalid escape in literal",
                    ))
                }
            },
            Some((_, c)) => s.push(c),
            None => {
                return Err(ParseError::at(
                    src,
                    SourceSpan::new(start, src.len()),
                    "unterminated literal",
                ))
            }
        }
    }
}

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_spans() {
        let toks = tokenize("{?x rdf:type <a b>}").unwrap_err();
        assert_eq!(toks.span.start, 13);

        let toks = tokenize("FILTER(!BOUND(?x) && ?y != \"a\\\"b\")").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::Name("FILTER".into()),
                Tok::LParen,
                Tok::Bang,
                Tok::Name("BOUND".into()),
                Tok::LParen,
                Tok::Var("x".into()),
                Tok::RParen,
                Tok::AndAnd,
                Tok::Var("y".into()),
                Tok::Neq,
                Tok::Literal("a\"b".into()),
                Tok::RParen,
            ]
        );
        assert_eq!(toks[5].span, SourceSpan::new(14, 16));
    }

    #[test]
    fn unknown_prefix_is_an_error() {
        let e = tokenize("{?x foaf:name ?n}").unwrap_err();
        assert!(e.message.contains("foaf:name"));
    }

    #[test]
    fn comments_are_skipped() {
        let toks = tokenize("# header\n{ } # trailing").unwrap();
        assert_eq!(toks.len(), 2);
        assert_eq!(toks[0].span.start, 9);
    }
}
