//! Grammar file syntax.
//!
//! ```text
//! nonsk sem.mod.
//! start s.
//! rule 1a nonsk head 2: MOTHER -> D1, D2.
//! lex "word": [cat: n, sem: [rel: word]].
//! ```
//!
//! A mother and head daughter that carry the same tag at the parent of a
//! non-kernel path, where either of them also constrains that path, share
//! every feature of that node except the non-kernel one.

use std::collections::BTreeSet;

use super::{classify_rule, compute_link, Grammar, KernelLink, LexEntry, Rule, RuleClass, Slot, CAT, SEM};
use crate::avm::text::{tokenize, Builder, Printer, Term, TermParser, Tok};
use crate::avm::{Path, Value};
use crate::error::{Error, Result};

/// Parses grammar source text.
pub fn load_grammar(src: &str) -> Result<Grammar> {
    let toks = tokenize(src)?;
    let mut p = TermParser::new(&toks);
    let mut nonsk_paths = Vec::new();
    let mut start = None;
    let mut raw_rules = Vec::new();
    let mut lexicon = Vec::new();
    while !p.at_end() {
        let (line, column) = p.here();
        let kw = p.ident("'rule', 'lex', 'nonsk' or 'start'")?;
        match kw.as_str() {
            "nonsk" => {
                let path = p.path()?;
                if path.features().first().map(String::as_str) != Some(SEM) || path.features().len() < 2 {
                    return Err(Error::syntax(line, column, format!("non-kernel path '{path}' must lie under '{SEM}'")));
                }
                nonsk_paths.push(path);
            }
            "start" => start = Some(p.ident("start category")?),
            "rule" => raw_rules.push(parse_rule(&mut p, line, column)?),
            "lex" => lexicon.push(parse_lex(&mut p)?),
            other => return Err(Error::syntax(line, column, format!("unknown statement '{other}'"))),
        }
        p.expect(&Tok::End, "'.' ending the statement")?;
    }

    let mut seen = BTreeSet::new();
    let mut rules = Vec::new();
    for raw in raw_rules {
        if !seen.insert(raw.id.clone()) {
            return Err(Error::DuplicateRule(raw.id));
        }
        rules.push(build_rule(raw, &nonsk_paths)?);
    }
    let start = match start {
        Some(s) => s,
        None => rules.first().and_then(|r| r.mother_cat()).unwrap_or("s").to_string(),
    };
    let link = compute_link(&rules, &lexicon);
    Ok(Grammar {
        rules,
        lexicon,
        nonsk_paths,
        start,
        link,
    })
}

struct RawRule {
    id: String,
    declared: Option<RuleClass>,
    head: usize,
    mother: Term,
    daughters: Vec<Term>,
    line: usize,
    column: usize,
}

fn parse_rule(p: &mut TermParser, line: usize, column: usize) -> Result<RawRule> {
    let id = p.ident("rule identifier")?;
    let mut declared = None;
    if let Some(Tok::Ident(w)) = p.peek() {
        declared = match w.as_str() {
            "sk" => Some(RuleClass::Sk),
            "nonsk" => Some(RuleClass::NonSk),
            _ => None,
        };
        if declared.is_some() {
            p.next();
        }
    }
    let mut head = None;
    if p.peek() == Some(&Tok::Ident("head".into())) {
        p.next();
        let n = p.ident("head daughter number")?;
        head = Some(n.parse::<usize>().map_err(|_| p.error("head must be a daughter number"))?);
    }
    p.expect(&Tok::Colon, "':'")?;
    let mother = p.term()?;
    p.expect(&Tok::Arrow, "'->'")?;
    let mut daughters = vec![p.term()?];
    while p.peek() == Some(&Tok::Comma) {
        p.next();
        daughters.push(p.term()?);
    }
    let head = match head {
        Some(h) => h,
        None if daughters.len() == 1 => 1,
        None => return Err(Error::syntax(line, column, format!("rule {id} needs a head annotation"))),
    };
    if head == 0 || head > daughters.len() {
        return Err(Error::BadHead {
            rule: id,
            head,
            arity: daughters.len(),
        });
    }
    Ok(RawRule {
        id,
        declared,
        head: head - 1,
        mother,
        daughters,
        line,
        column,
    })
}

fn parse_lex(p: &mut TermParser) -> Result<LexEntry> {
    let surface = match p.next() {
        Some(Tok::Str(s)) => s,
        _ => return Err(p.error("expected a quoted word")),
    };
    p.expect(&Tok::Colon, "':'")?;
    let term = p.term()?;
    let invalid = |reason: &str| Error::InvalidLexEntry {
        surface: surface.clone(),
        reason: reason.to_string(),
    };
    if surface.trim().is_empty() || surface.contains(char::is_whitespace) {
        return Err(invalid("surface must be a single non-empty word"));
    }
    let mut b = Builder::default();
    let root = b.build(&term).ok_or_else(|| invalid("description is inconsistent"))?;
    let description = b.env.snapshot(&root).ok_or_else(|| invalid("description is cyclic"))?;
    if description.atom_at(&Path(vec![CAT.into()])).is_none() {
        return Err(invalid("missing atomic 'cat'"));
    }
    Ok(LexEntry {
        surface: surface.to_lowercase(),
        description,
    })
}

/// The tag or variable name a term carries at `path`, if any.
fn tag_at(t: &Term, path: &Path) -> Option<String> {
    t.entries().iter().find_map(|(p, v)| match v {
        _ if p != path => None,
        Term::Tag(n, _) => Some(format!("#{n}")),
        Term::Var(n) => Some(n.clone()),
        _ => None,
    })
}

fn rename_at(t: &mut Term, path: &Path, fresh: &str) {
    if let Term::Avm(entries) = t {
        for (p, v) in entries.iter_mut() {
            if p != path {
                continue;
            }
            match v {
                Term::Tag(n, _) => *n = fresh.to_string(),
                Term::Var(n) => *n = fresh.to_string(),
                _ => {}
            }
        }
    }
}

fn build_rule(mut raw: RawRule, nonsk_paths: &[Path]) -> Result<Rule> {
    let mut kernel_links = Vec::new();
    for (i, path) in nonsk_paths.iter().enumerate() {
        let Some((parent, last)) = path.split_last() else { continue };
        let head = &raw.daughters[raw.head];
        let (Some(m), Some(h)) = (tag_at(&raw.mother, &parent), tag_at(head, &parent)) else { continue };
        if m != h || !(raw.mother.mentions(path.features()) || head.mentions(path.features())) {
            continue;
        }
        rename_at(&mut raw.daughters[raw.head], &parent, &format!("kernel'{i}"));
        kernel_links.push(KernelLink {
            path: parent,
            except: last.to_string(),
        });
    }

    let mut entries = vec![(Slot::Mother.path(), raw.mother.clone())];
    for (i, d) in raw.daughters.iter().enumerate() {
        entries.push((Slot::Daughter(i).path(), d.clone()));
    }
    let mut b = Builder::default();
    let template = b
        .build(&Term::Avm(entries))
        .and_then(|root| b.env.snapshot(&root))
        .ok_or_else(|| Error::Inconsistent(raw.id.clone()))?;
    let mut rule = Rule {
        id: raw.id.clone(),
        template,
        arity: raw.daughters.len(),
        head: raw.head,
        class: RuleClass::Sk,
        nonsk_path: None,
        kernel_links,
    };
    rule.template = rule
        .enforce_links(&rule.template)
        .ok_or_else(|| Error::Inconsistent(raw.id.clone()))?;
    if rule.mother_cat().is_none() {
        return Err(Error::syntax(raw.line, raw.column, format!("rule {} has no mother category", raw.id)));
    }
    let (class, nonsk_path) = classify_rule(&rule, nonsk_paths)?;
    if let Some(declared) = raw.declared {
        if declared != class {
            return Err(Error::ClassMismatch {
                rule: raw.id,
                declared: declared.to_string(),
                inferred: class.to_string(),
            });
        }
    }
    rule.class = class;
    rule.nonsk_path = nonsk_path;
    Ok(rule)
}

impl Grammar {
    /// Writes the grammar in the syntax accepted by [`load_grammar`].
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        for p in &self.nonsk_paths {
            out.push_str(&format!("nonsk {p}.\n"));
        }
        out.push_str(&format!("start {}.\n\n", self.start));
        for r in &self.rules {
            let mut printer = Printer::new(&r.template);
            for (i, link) in r.kernel_links.iter().enumerate() {
                for slot in [Slot::Mother, Slot::Daughter(r.head)] {
                    let at = slot.path().join(&link.path);
                    printer.labels.insert(at.features().to_vec(), format!("k{i}"));
                }
            }
            let Value::Avm(parts) = r.template.root() else { continue };
            let mut text = |slot: Slot| {
                let key = slot.path().features()[0].clone();
                let mut s = String::new();
                if let Some(v) = parts.get(&key) {
                    printer.value(v, &mut vec![key], &mut s);
                } else {
                    s.push('_');
                }
                s
            };
            let mother = text(Slot::Mother);
            let daughters: Vec<String> = (0..r.arity).map(|i| text(Slot::Daughter(i))).collect();
            out.push_str(&format!(
                "rule {} {} head {}:\n    {}\n    -> {}.\n",
                r.id,
                r.class,
                r.head + 1,
                mother,
                daughters.join(",\n       ")
            ));
        }
        out.push('\n');
        for e in &self.lexicon {
            out.push_str(&format!("lex \"{}\": {}.\n", e.surface, e.description));
        }
        out
    }
}

/// The grammar shipped with the crate.
pub const BUNDLED_GRAMMAR: &str = include_str!("../../../../grammars/english.skg");

impl Grammar {
    pub fn bundled() -> Grammar {
        load_grammar(BUNDLED_GRAMMAR).expect("bundled grammar loads")
    }
}
