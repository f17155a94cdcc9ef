//! Textual AVM syntax.
//!
//! ```text
//! [feature: value, f.g: value]   AVM; dotted paths, repeated features unify
//! atom  +  -                     atoms
//! <a, b>  <H | T>  <>            lists and head/tail patterns
//! #1  #1 [..]                    reentrancy tags
//! X  _                           variables (capitalized or anonymous)
//! % comment                      to end of line
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use super::value::{Env, FeatureStructure, Path, Value, VarId};
use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Str(String),
    Tag(String),
    LBracket,
    RBracket,
    LAngle,
    RAngle,
    Comma,
    Colon,
    Bar,
    /// `.` immediately followed by an identifier character.
    PathDot,
    /// `.` terminating a statement.
    End,
    Arrow,
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '+' | '-' | '\'' | '*')
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Spanned>, Error> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, c);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                let ch = chars[i];
                advance(&mut i, &mut line, &mut col, ch);
            }
            continue;
        }
        let single = match c {
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '<' => Some(Tok::LAngle),
            '>' => Some(Tok::RAngle),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '|' => Some(Tok::Bar),
            _ => None,
        };
        if let Some(tok) = single {
            advance(&mut i, &mut line, &mut col, c);
            out.push(Spanned { tok, line: l0, column: c0 });
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            advance(&mut i, &mut line, &mut col, c);
            advance(&mut i, &mut line, &mut col, '>');
            out.push(Spanned { tok: Tok::Arrow, line: l0, column: c0 });
            continue;
        }
        if c == '.' {
            advance(&mut i, &mut line, &mut col, c);
            let tok = match chars.get(i) {
                Some(&n) if ident_char(n) => Tok::PathDot,
                _ => Tok::End,
            };
            out.push(Spanned { tok, line: l0, column: c0 });
            continue;
        }
        if c == '"' {
            advance(&mut i, &mut line, &mut col, c);
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None => return Err(Error::syntax(l0, c0, "unterminated string")),
                    Some('"') => {
                        advance(&mut i, &mut line, &mut col, '"');
                        break;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        advance(&mut i, &mut line, &mut col, ch);
                    }
                }
            }
            out.push(Spanned { tok: Tok::Str(s), line: l0, column: c0 });
            continue;
        }
        if c == '#' {
            advance(&mut i, &mut line, &mut col, c);
            let mut s = String::new();
            while let Some(&ch) = chars.get(i).filter(|ch| ident_char(**ch)) {
                s.push(ch);
                advance(&mut i, &mut line, &mut col, ch);
            }
            if s.is_empty() {
                return Err(Error::syntax(l0, c0, "expected tag name after '#'"));
            }
            out.push(Spanned { tok: Tok::Tag(s), line: l0, column: c0 });
            continue;
        }
        if ident_char(c) {
            let mut s = String::new();
            while let Some(&ch) = chars.get(i).filter(|ch| ident_char(**ch)) {
                // `->` ends an identifier
                if ch == '-' && chars.get(i + 1) == Some(&'>') {
                    break;
                }
                s.push(ch);
                advance(&mut i, &mut line, &mut col, ch);
            }
            out.push(Spanned { tok: Tok::Ident(s), line: l0, column: c0 });
            continue;
        }
        return Err(Error::syntax(l0, c0, format!("unexpected character '{c}'")));
    }
    Ok(out)
}

/// Unbuilt syntax tree of a value.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Term {
    Atom(String),
    Var(String),
    Anon,
    Tag(String, Option<Box<Term>>),
    Avm(Vec<(Path, Term)>),
    List(Vec<Term>, Option<Box<Term>>),
}

impl Term {
    /// The top-level entries of an AVM term.
    pub(crate) fn entries(&self) -> &[(Path, Term)] {
        match self {
            Term::Avm(e) => e,
            _ => &[],
        }
    }

    /// Whether this term says anything about `path` or below it.
    pub(crate) fn mentions(&self, path: &[String]) -> bool {
        if path.is_empty() {
            return true;
        }
        match self {
            Term::Tag(_, Some(inner)) => inner.mentions(path),
            Term::Avm(entries) => entries.iter().any(|(p, t)| {
                let f = p.features();
                if f.len() >= path.len() {
                    f.starts_with(path)
                } else {
                    path.starts_with(f) && t.mentions(&path[f.len()..])
                }
            }),
            _ => false,
        }
    }
}

pub(crate) struct TermParser<'t> {
    toks: &'t [Spanned],
    pos: usize,
}

impl<'t> TermParser<'t> {
    pub(crate) fn new(toks: &'t [Spanned]) -> Self {
        TermParser { toks, pos: 0 }
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub(crate) fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos).or(self.toks.last()) {
            Some(s) => (s.line, s.column),
            None => (1, 1),
        }
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> Error {
        let (l, c) = self.here();
        Error::syntax(l, c, msg)
    }

    pub(crate) fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    pub(crate) fn expect(&mut self, want: &Tok, what: &str) -> Result<(), Error> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    pub(crate) fn ident(&mut self, what: &str) -> Result<String, Error> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    /// `ident (. ident)*`
    pub(crate) fn path(&mut self) -> Result<Path, Error> {
        let mut feats = vec![self.ident("feature name")?];
        while self.peek() == Some(&Tok::PathDot) {
            self.pos += 1;
            feats.push(self.ident("feature name")?);
        }
        Ok(Path(feats))
    }

    pub(crate) fn term(&mut self) -> Result<Term, Error> {
        match self.peek() {
            Some(Tok::LBracket) => {
                self.pos += 1;
                let mut entries = Vec::new();
                if self.peek() == Some(&Tok::RBracket) {
                    self.pos += 1;
                    return Ok(Term::Avm(entries));
                }
                loop {
                    let p = self.path()?;
                    self.expect(&Tok::Colon, "':'")?;
                    let v = self.term()?;
                    entries.push((p, v));
                    match self.next() {
                        Some(Tok::Comma) => continue,
                        Some(Tok::RBracket) => break,
                        _ => {
                            self.pos -= 1;
                            return Err(self.error("expected ',' or ']'"));
                        }
                    }
                }
                Ok(Term::Avm(entries))
            }
            Some(Tok::LAngle) => {
                self.pos += 1;
                let mut items = Vec::new();
                if self.peek() == Some(&Tok::RAngle) {
                    self.pos += 1;
                    return Ok(Term::List(items, None));
                }
                loop {
                    items.push(self.term()?);
                    match self.next() {
                        Some(Tok::Comma) => continue,
                        Some(Tok::RAngle) => return Ok(Term::List(items, None)),
                        Some(Tok::Bar) => {
                            let tail = self.term()?;
                            self.expect(&Tok::RAngle, "'>'")?;
                            return Ok(Term::List(items, Some(Box::new(tail))));
                        }
                        _ => {
                            self.pos -= 1;
                            return Err(self.error("expected ',', '|' or '>'"));
                        }
                    }
                }
            }
            Some(Tok::Tag(name)) => {
                let name = name.clone();
                self.pos += 1;
                let starts_value = matches!(
                    self.peek(),
                    Some(Tok::LBracket | Tok::LAngle | Tok::Ident(_) | Tok::Tag(_))
                );
                // `#1 value` only when the next token can begin a value that is
                // not the start of another entry (`f: ...`).
                let follows_entry = matches!(
                    (self.peek(), self.toks.get(self.pos + 1).map(|s| &s.tok)),
                    (Some(Tok::Ident(_)), Some(Tok::Colon | Tok::PathDot))
                );
                if starts_value && !follows_entry {
                    let inner = self.term()?;
                    Ok(Term::Tag(name, Some(Box::new(inner))))
                } else {
                    Ok(Term::Tag(name, None))
                }
            }
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                if s == "_" {
                    Ok(Term::Anon)
                } else if s.starts_with(|c: char| c.is_uppercase() || c == '_') {
                    Ok(Term::Var(s))
                } else {
                    Ok(Term::Atom(s))
                }
            }
            _ => Err(self.error("expected a value")),
        }
    }
}

/// Builds terms into one environment; variable and tag names are scoped to
/// the builder.
#[derive(Default)]
pub(crate) struct Builder {
    pub(crate) env: Env,
    names: HashMap<String, VarId>,
}

impl Builder {
    fn named(&mut self, name: &str) -> VarId {
        if let Some(v) = self.names.get(name) {
            return *v;
        }
        let v = self.env.fresh();
        self.names.insert(name.to_string(), v);
        v
    }

    /// Returns `None` if the term is inconsistent (e.g. repeated features
    /// with clashing values).
    pub(crate) fn build(&mut self, t: &Term) -> Option<Value> {
        match t {
            Term::Atom(a) => Some(Value::Atom(a.clone())),
            Term::Anon => Some(Value::Var(self.env.fresh())),
            Term::Var(n) => Some(Value::Var(self.named(n))),
            Term::Tag(n, inner) => {
                let v = Value::Var(self.named(&format!("#{n}")));
                match inner {
                    Some(inner) => {
                        let built = self.build(inner)?;
                        self.env.unify(&v, &built)
                    }
                    None => Some(v),
                }
            }
            Term::List(items, tail) => {
                let tail = match tail {
                    Some(t) => self.build(t)?,
                    None => Value::Nil,
                };
                let items = items.iter().map(|i| self.build(i)).collect::<Option<Vec<_>>>()?;
                Some(Value::list(items, tail))
            }
            Term::Avm(entries) => {
                let mut acc = Value::Avm(BTreeMap::new());
                for (path, term) in entries {
                    let v = self.build(term)?;
                    let nested = path
                        .features()
                        .iter()
                        .rev()
                        .fold(v, |acc, f| Value::Avm(BTreeMap::from([(f.clone(), acc)])));
                    acc = self.env.unify(&acc, &nested)?;
                }
                Some(acc)
            }
        }
    }
}

impl FromStr for FeatureStructure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let toks = tokenize(s)?;
        let mut p = TermParser::new(&toks);
        let term = p.term()?;
        if !p.at_end() {
            return Err(p.error("trailing input after value"));
        }
        let mut b = Builder::default();
        let root = b
            .build(&term)
            .ok_or_else(|| Error::syntax(1, 1, "value is inconsistent (repeated features do not unify)"))?;
        b.env
            .snapshot(&root)
            .ok_or_else(|| Error::syntax(1, 1, "value is cyclic"))
    }
}

/// Writes values of one feature structure with consistent tag names.
pub(crate) struct Printer<'a> {
    fs: &'a FeatureStructure,
    occurrences: HashMap<VarId, usize>,
    printed: Vec<VarId>,
    /// Extra labels forced onto positions, keyed by the path from the root.
    pub(crate) labels: HashMap<Vec<String>, String>,
}

impl<'a> Printer<'a> {
    pub(crate) fn new(fs: &'a FeatureStructure) -> Self {
        let mut occurrences = HashMap::new();
        fn count(fs: &FeatureStructure, v: &Value, occ: &mut HashMap<VarId, usize>) {
            if let Value::Var(id) = v {
                let n = occ.entry(*id).or_insert(0);
                *n += 1;
                if *n == 1 {
                    if let Some(b) = fs.bindings.get(id) {
                        count(fs, b, occ);
                    }
                }
                return;
            }
            v.for_each_child(|c| count(fs, c, occ));
        }
        count(fs, &fs.root, &mut occurrences);
        Printer {
            fs,
            occurrences,
            printed: Vec::new(),
            labels: HashMap::new(),
        }
    }

    pub(crate) fn value(&mut self, v: &Value, path: &mut Vec<String>, out: &mut String) {
        if let Some(label) = self.labels.get(path.as_slice()) {
            out.push_str(&format!("#{label} "));
        }
        match v {
            Value::Var(id) => {
                let shared = self.occurrences.get(id).copied().unwrap_or(0) > 1;
                match self.fs.bindings.get(id) {
                    None if !shared => out.push('_'),
                    None => out.push_str(&format!("#{}", id + 1)),
                    Some(b) => {
                        out.push_str(&format!("#{}", id + 1));
                        if !self.printed.contains(id) {
                            self.printed.push(*id);
                            out.push(' ');
                            self.value(b, path, out);
                        }
                    }
                }
            }
            Value::Atom(a) => out.push_str(a),
            Value::Nil => out.push_str("<>"),
            Value::Avm(m) => {
                out.push('[');
                for (i, (k, c)) in m.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(k);
                    out.push_str(": ");
                    path.push(k.clone());
                    self.value(c, path, out);
                    path.pop();
                }
                out.push(']');
            }
            Value::Cons(..) => {
                out.push('<');
                let mut cur = v;
                let mut first = true;
                loop {
                    match cur {
                        Value::Cons(h, t) => {
                            if !first {
                                out.push_str(", ");
                            }
                            first = false;
                            self.value(h, path, out);
                            cur = t;
                        }
                        Value::Nil => break,
                        Value::Var(id) if self.fs.bindings.get(id).is_some_and(|b| matches!(b, Value::Cons(..)))
                            && self.occurrences.get(id) == Some(&1) =>
                        {
                            cur = &self.fs.bindings[id];
                        }
                        tail => {
                            out.push_str(" | ");
                            self.value(tail, path, out);
                            break;
                        }
                    }
                }
                out.push('>');
            }
        }
    }
}

impl fmt::Display for FeatureStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        Printer::new(self).value(&self.root, &mut Vec::new(), &mut out);
        f.write_str(&out)
    }
}
