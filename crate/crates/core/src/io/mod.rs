//! Text formats: the bracketed triple list and the JSON class-record file.
//!
//! Triple list grammar (whitespace and `#` comments allowed anywhere between tokens):
//!
//! ```text
//! document := ("n" "=" INT)? entry+
//! entry    := (NAME "=")? "[" (triple ("," triple)*)? ","? "]" ("," | ".")?
//! triple   := "[" INT "," INT "," INT "]"
//! ```
//!
//! Without an `n=` header the line count is the largest label used.

pub mod records;

use std::fmt;

use crate::arrangement::{Label, Triple, TripleSystem};
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn error_at(&self, offset: usize, message: impl Into<String>) -> ParseError {
        let before = &self.text[..offset.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
        ParseError {
            offset,
            line,
            column,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.pos, message)
    }

    fn skip_ws(&mut self) {
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() {
            match bytes[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' => self.pos += 1,
                b'#' => {
                    while self.pos < bytes.len() && bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.as_bytes().get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of input".to_string(), |b| {
                format!("'{}'", b as char)
            });
            Err(self.error(format!("expected '{}', found {found}", c as char)))
        }
    }

    fn int(&mut self) -> Result<(usize, u64), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.text.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let v = self.text[start..self.pos]
            .parse::<u64>()
            .map_err(|_| self.error_at(start, "integer too large"))?;
        Ok((start, v))
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let bytes = self.text.as_bytes();
        let start = self.pos;
        if start < bytes.len() && (bytes[start].is_ascii_alphabetic() || bytes[start] == b'_') {
            let mut end = start;
            while end < bytes.len() && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_') {
                end += 1;
            }
            self.pos = end;
            Some(&self.text[start..end])
        } else {
            None
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// One parsed list with its optional name.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedList {
    pub name: Option<String>,
    pub system: TripleSystem,
}

fn label(cur: &mut Cursor<'_>) -> Result<Label, ParseError> {
    let (at, v) = cur.int()?;
    if v == 0 || v > Label::MAX as u64 {
        Err(cur.error_at(at, format!("label {v} outside 1..={}", Label::MAX)))
    } else {
        Ok(v as Label)
    }
}

fn parse_entry(
    cur: &mut Cursor<'_>,
    header_n: Option<Label>,
) -> Result<NamedList, ParseError> {
    let save = cur.pos;
    let name = match cur.ident() {
        Some(id) if cur.eat(b'=') => Some(id.to_string()),
        Some(_) => {
            return Err(cur.error_at(save, "expected '[' or a name followed by '='"));
        }
        None => None,
    };
    let list_start = {
        cur.skip_ws();
        cur.pos
    };
    cur.expect(b'[')?;
    let mut raw: Vec<(usize, Triple)> = Vec::new();
    loop {
        if cur.eat(b']') {
            break;
        }
        cur.skip_ws();
        let at = cur.pos;
        cur.expect(b'[')?;
        let a = label(cur)?;
        cur.expect(b',')?;
        let b = label(cur)?;
        cur.expect(b',')?;
        let c = label(cur)?;
        cur.expect(b']')?;
        let t = Triple::new(a, b, c).map_err(|e| cur.error_at(at, e.to_string()))?;
        raw.push((at, t));
        if !cur.eat(b',') {
            cur.expect(b']')?;
            break;
        }
    }
    // tolerated trailing punctuation after a list
    if !cur.eat(b',') {
        cur.eat(b'.');
    }

    let max_label = raw.iter().map(|(_, t)| t.labels()[2]).max().unwrap_or(0);
    let n = match header_n {
        Some(n) if n < max_label => {
            return Err(cur.error_at(
                list_start,
                format!("label {max_label} exceeds declared n={n}"),
            ))
        }
        Some(n) => n,
        None => max_label,
    };
    let system = TripleSystem::new(n, raw.iter().map(|&(_, t)| t)).map_err(|e| {
        let at = match &e {
            Error::RepeatedPair { second, .. } => raw
                .iter()
                .find(|(_, t)| t == second)
                .map_or(list_start, |&(at, _)| at),
            _ => list_start,
        };
        cur.error_at(at, e.to_string())
    })?;
    Ok(NamedList { name, system })
}

fn parse_header(cur: &mut Cursor<'_>) -> Result<Option<Label>, ParseError> {
    let save = cur.pos;
    if let Some(id) = cur.ident() {
        if id == "n" && cur.eat(b'=') {
            let (at, v) = cur.int()?;
            if v > Label::MAX as u64 {
                return Err(cur.error_at(at, format!("n={v} too large")));
            }
            return Ok(Some(v as Label));
        }
    }
    cur.pos = save;
    Ok(None)
}

/// Parses a document holding one or more (optionally named) triple lists.
pub fn parse_triple_lists(text: &str) -> Result<Vec<NamedList>, ParseError> {
    let mut cur = Cursor::new(text);
    let header_n = parse_header(&mut cur)?;
    let mut out = Vec::new();
    while !cur.at_end() {
        out.push(parse_entry(&mut cur, header_n)?);
    }
    if out.is_empty() {
        return Err(cur.error("no triple list found"));
    }
    Ok(out)
}

/// Parses a document holding exactly one triple list.
pub fn parse_triples(text: &str) -> Result<TripleSystem, ParseError> {
    let mut lists = parse_triple_lists(text)?;
    if lists.len() != 1 {
        return Err(ParseError {
            offset: 0,
            line: 1,
            column: 1,
            message: format!("expected one triple list, found {}", lists.len()),
        });
    }
    Ok(lists.pop().expect("one list").system)
}

/// Bracketed listing with an explicit `n=` header, accepted by [`parse_triples`].
pub fn format_triples(ts: &TripleSystem) -> String {
    format!("n={}\n{}\n", ts.n(), ts)
}

#[cfg(test)]
mod tests {
    use super::*;

    const C1_TYPESET: &str = r"[[1,2,3],[1,4,5],[1,6,7],[1,8,9],[1,10,11],[2,4,7],[2,6,9],[2,8,11],[2,10,12],[3,4,9],
  [3,5,7],[3,6,11],[3,8,12],[4,6,12],[4,8,10],[5,6,10],[5,9,11],[7,9,10],[7,11,12]],";

    #[test]
    fn parses_wrapped_list_with_trailing_comma() {
        let ts = parse_triples(C1_TYPESET).unwrap();
        assert_eq!(ts.n(), 12);
        assert_eq!(ts.len(), 19);
    }

    #[test]
    fn parses_single_triple() {
        let ts = parse_triples("[[1,2,3]]").unwrap();
        assert_eq!((ts.n(), ts.len()), (3, 1));
    }

    #[test]
    fn header_overrides_inferred_n() {
        let ts = parse_triples("n=5 [[1, 2, 3]]").unwrap();
        assert_eq!(ts.n(), 5);
        assert!(parse_triples("n=2 [[1,2,3]]").is_err());
        let empty = parse_triples("n = 4\n[]").unwrap();
        assert_eq!((empty.n(), empty.len()), (4, 0));
    }

    #[test]
    fn repeated_pair_is_semantic_error() {
        let err = parse_triples("[[1,2,3],[1,2,4]]").unwrap_err();
        assert!(err.message.contains("pair {1,2}"), "{err}");
        assert_eq!(err.column, 10);
    }

    #[test]
    fn syntax_errors_report_position() {
        let err = parse_triples("[[1,2,3],\n [4,5 6]]").unwrap_err();
        assert_eq!((err.line, err.column), (2, 7));
        let err = parse_triples("[[1,2,2]]").unwrap_err();
        assert_eq!(err.column, 2);
        assert!(parse_triples("").is_err());
        assert!(parse_triples("[[1,2,3]] [[1,2,3]]").is_err());
    }

    #[test]
    fn named_lists() {
        let lists = parse_triple_lists("# two lists\nA = [[1,2,3]]\nB=[[1,2,3],[1,4,5]].").unwrap();
        assert_eq!(lists.len(), 2);
        assert_eq!(lists[0].name.as_deref(), Some("A"));
        assert_eq!(lists[1].system.n(), 5);
    }

    #[test]
    fn format_round_trips() {
        let ts = parse_triples("n=7 [[1,2,3],[3,4,5]]").unwrap();
        assert_eq!(parse_triples(&format_triples(&ts)).unwrap(), ts);
    }
}
