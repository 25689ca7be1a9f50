//! Text format for group presentations.
//!
//! ```text
//! # Ceva arrangement
//! group ceva {
//!   gens e0 e1 e2 e3 e4 e5;
//!   rel [e1,e2];
//!   rel comm3(e3,e5,e1);
//!   rel e4*e3 = e3*e4;
//!   rel e4 e3 e5 e2 e1 e0;
//! }
//! ```
//!
//! Letters are juxtaposed or joined by `*`; `x^-2` is a power, `1` the
//! identity, `[u,v]` the commutator `u v u^-1 v^-1`, and `comm3(u,v,w)`
//! expands to the three relators `[uvw,u]`, `[uvw,v]`, `[uvw,w]`.
//! The `group NAME { ... }` wrapper is optional.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::presentation::GroupPresentation;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = li + 1;
        let chars: Vec<char> = raw.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
                break;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line, col });
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v = s.parse::<i64>().map_err(|_| Error::parse(line, col, format!("integer out of range: {s}")))?;
                out.push(Token { tok: Tok::Int(v), line, col });
            } else if "{}[](),;=*^-".contains(c) {
                out.push(Token { tok: Tok::Sym(c), line, col });
                i += 1;
            } else {
                return Err(Error::parse(line, col, format!("unexpected character '{c}'")));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    names: Vec<String>,
    index: HashMap<String, usize>,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.col)).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (l, c) = self.here();
        Err(Error::parse(l, c, msg))
    }

    fn is_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Sym(s), .. }) if *s == c)
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.is_sym(c) {
            self.pos += 1;
            Ok(())
        } else {
            match self.peek() {
                Some(t) => {
                    let found = describe(&t.tok);
                    self.err(format!("expected '{c}', found {found}"))
                }
                None => self.err(format!("expected '{c}' before end of input")),
            }
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Token { tok: Tok::Ident(s), .. }) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            Some(t) => {
                let found = describe(&t.tok);
                self.err(format!("expected identifier, found {found}"))
            }
            None => self.err("expected identifier before end of input"),
        }
    }

    fn word(&mut self) -> Result<Word> {
        let mut acc = self.factor()?;
        loop {
            if self.is_sym('*') {
                self.pos += 1;
                acc = acc.mul(&self.factor()?);
            } else if self.starts_factor() {
                acc = acc.mul(&self.factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        match self.peek() {
            Some(Token { tok: Tok::Ident(s), .. }) => s != "comm3",
            Some(Token { tok: Tok::Int(1), .. }) => true,
            Some(Token { tok: Tok::Sym(c), .. }) => *c == '(' || *c == '[',
            _ => false,
        }
    }

    fn factor(&mut self) -> Result<Word> {
        let (line, col) = self.here();
        let base = match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Ident(name)) => {
                if name == "comm3" {
                    return self.err("comm3(...) is only allowed as a whole relator");
                }
                self.pos += 1;
                let e = self.exponent()?;
                let g = *self
                    .index
                    .get(&name)
                    .ok_or_else(|| Error::parse(line, col, format!("unknown generator '{name}'")))?;
                return Ok(Word::power_of(g, e));
            }
            Some(Tok::Int(1)) => {
                self.pos += 1;
                Word::identity()
            }
            Some(Tok::Int(v)) => return self.err(format!("unexpected integer {v} (only 1 denotes the identity)")),
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let w = self.word()?;
                if !self.is_sym(')') {
                    return Err(Error::parse(line, col, "unbalanced '(': missing ')'"));
                }
                self.pos += 1;
                w
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let a = self.word()?;
                self.expect_sym(',')?;
                let b = self.word()?;
                if self.is_sym(',') {
                    return self.err("three-term brackets are ambiguous; use comm3(a,b,c)");
                }
                if !self.is_sym(']') {
                    return Err(Error::parse(line, col, "unbalanced '[': missing ']'"));
                }
                self.pos += 1;
                Word::commutator(&a, &b)
            }
            Some(t) => return self.err(format!("expected a word, found {}", describe(&t))),
            None => return self.err("expected a word before end of input"),
        };
        let e = self.exponent()?;
        Ok(base.pow(e))
    }

    fn exponent(&mut self) -> Result<i64> {
        if !self.is_sym('^') {
            return Ok(1);
        }
        self.pos += 1;
        let neg = if self.is_sym('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.peek().map(|t| t.tok.clone()) {
            Some(Tok::Int(0)) => self.err("zero exponent"),
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("malformed exponent: expected an integer after '^'"),
        }
    }

    fn relators(&mut self) -> Result<Vec<Word>> {
        if matches!(self.peek(), Some(Token { tok: Tok::Ident(s), .. }) if s == "comm3") {
            self.pos += 1;
            let (line, col) = self.here();
            self.expect_sym('(')?;
            let a = self.word()?;
            self.expect_sym(',')?;
            let b = self.word()?;
            self.expect_sym(',')?;
            let c = self.word()?;
            if !self.is_sym(')') {
                return Err(Error::parse(line, col, "unbalanced '(': missing ')'"));
            }
            self.pos += 1;
            let abc = Word::product([&a, &b, &c]);
            return Ok(vec![Word::commutator(&abc, &a), Word::commutator(&abc, &b), Word::commutator(&abc, &c)]);
        }
        let lhs = self.word()?;
        if self.is_sym('=') {
            self.pos += 1;
            let rhs = self.word()?;
            return Ok(vec![lhs.mul(&rhs.inverse())]);
        }
        Ok(vec![lhs])
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Int(v) => format!("'{v}'"),
        Tok::Sym(c) => format!("'{c}'"),
    }
}

/// Parsed file: optional group name plus the presentation.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupFile {
    pub name: Option<String>,
    pub presentation: GroupPresentation,
}

pub fn parse_group_file(text: &str) -> Result<GroupFile> {
    let toks = lex(text)?;
    let end = {
        let lines = text.lines().count().max(1);
        let col = text.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
        (lines, col)
    };
    let mut p = Parser { toks, pos: 0, names: vec![], index: HashMap::new(), end };
    let mut name = None;
    let mut braced = false;
    if matches!(p.peek(), Some(Token { tok: Tok::Ident(s), .. }) if s == "group") {
        p.pos += 1;
        name = Some(p.ident()?);
        p.expect_sym('{')?;
        braced = true;
    }
    let mut relators = Vec::new();
    let mut degrees: Option<Vec<u64>> = None;
    let mut seen_gens = false;
    loop {
        if braced && p.is_sym('}') {
            p.pos += 1;
            if p.peek().is_some() {
                return p.err("unexpected input after closing '}'");
            }
            break;
        }
        let Some(tok) = p.peek().cloned() else {
            if braced {
                return p.err("unbalanced '{': missing '}'");
            }
            break;
        };
        let Tok::Ident(kw) = tok.tok else {
            return p.err(format!("expected 'gens', 'degrees' or 'rel', found {}", describe(&tok.tok)));
        };
        p.pos += 1;
        match kw.as_str() {
            "gens" => {
                if seen_gens {
                    return Err(Error::parse(tok.line, tok.col, "generators declared twice"));
                }
                seen_gens = true;
                while !p.is_sym(';') {
                    let (l, c) = p.here();
                    let g = p.ident()?;
                    if g == "comm3" {
                        return Err(Error::parse(l, c, "'comm3' is reserved"));
                    }
                    if p.index.insert(g.clone(), p.names.len()).is_some() {
                        return Err(Error::parse(l, c, format!("duplicate generator '{g}'")));
                    }
                    p.names.push(g);
                }
                p.pos += 1;
            }
            "degrees" => {
                let mut ds = Vec::new();
                while !p.is_sym(';') {
                    match p.peek().map(|t| t.tok.clone()) {
                        Some(Tok::Int(v)) => {
                            ds.push(v as u64);
                            p.pos += 1;
                        }
                        _ => return p.err("expected a nonnegative integer degree"),
                    }
                }
                if ds.len() != p.names.len() {
                    return Err(Error::parse(
                        tok.line,
                        tok.col,
                        format!("{} degrees for {} generators", ds.len(), p.names.len()),
                    ));
                }
                p.pos += 1;
                degrees = Some(ds);
            }
            "rel" => {
                relators.extend(p.relators()?);
                p.expect_sym(';')?;
            }
            other => {
                return Err(Error::parse(tok.line, tok.col, format!("unknown statement '{other}'")));
            }
        }
    }
    let presentation = GroupPresentation::new(p.names, relators, degrees)?;
    Ok(GroupFile { name, presentation })
}

pub fn parse_group_dsl(text: &str) -> Result<GroupPresentation> {
    parse_group_file(text).map(|f| f.presentation)
}

/// Parses a single word over the given generator names.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word> {
    let toks = lex(text)?;
    let end = (1, text.chars().count() + 1);
    let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
    let mut p = Parser { toks, pos: 0, names: names.to_vec(), index, end };
    let w = p.word()?;
    if p.peek().is_some() {
        return p.err("unexpected input after word");
    }
    Ok(w)
}

/// Canonical text form; parses back to the same presentation.
pub fn render_group_dsl(p: &GroupPresentation, name: &str) -> String {
    let mut out = format!("group {name} {{\n  gens {};\n", p.names().join(" "));
    if let Some(d) = p.degrees() {
        let ds: Vec<String> = d.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("  degrees {};\n", ds.join(" ")));
    }
    for r in p.relators() {
        out.push_str(&format!("  rel {};\n", p.render_word(r)));
    }
    out.push_str("}\n");
    out
}
