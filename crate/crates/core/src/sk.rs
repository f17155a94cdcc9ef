//! Semantic kernel analysis.
//!
//! The non-kernel paths of a grammar (e.g. `mod`) hold lists of modifiers.
//! A semantics is a kernel when none of those lists, read at its top level,
//! has an element. Embedded arguments are not inspected; they are analysed
//! when they become goals of their own.

use std::collections::HashSet;

use crate::avm::{Env, FeatureStructure, ListTail, Path, Value, VarId};
use crate::error::{Error, Result};
use crate::grammar::Grammar;

/// A semantics split into its kernel and the non-kernel list elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// The input with every top-level non-kernel list emptied.
    pub kernel: FeatureStructure,
    /// Every element of every top-level non-kernel list, in order.
    pub nonsk_items: Vec<(Path, FeatureStructure)>,
}

impl Decomposition {
    /// Appends the non-kernel elements back onto the kernel.
    pub fn recompose(&self) -> FeatureStructure {
        let mut paths: Vec<&Path> = Vec::new();
        for (p, _) in &self.nonsk_items {
            if !paths.contains(&p) {
                paths.push(p);
            }
        }
        let mut out = self.kernel.clone();
        for p in paths {
            let mut env = Env::default();
            let items: Vec<Value> = self
                .nonsk_items
                .iter()
                .filter(|(q, _)| q == p)
                .map(|(_, fs)| env.import(fs))
                .collect();
            let list = env
                .snapshot(&Value::list(items, Value::Nil))
                .expect("list of acyclic items is acyclic");
            out = set_at(&out, p, &list);
        }
        out
    }
}

/// Puts `value` at `path`, replacing what is there or adding the feature.
/// Non-AVM structures are returned unchanged.
fn set_at(fs: &FeatureStructure, path: &Path, value: &FeatureStructure) -> FeatureStructure {
    let replaced = match fs.value_at(path) {
        Some(_) => fs.replace_at(path, value),
        None => fs.unify_at(path, value),
    };
    replaced.unwrap_or_else(|| fs.clone())
}

fn is_avm(fs: &FeatureStructure) -> bool {
    matches!(fs.deref(fs.root()), Value::Avm(_))
}

/// Top-level non-kernel elements of `sem` at `path`; an absent feature or an
/// unbound variable counts as empty.
fn items_at(sem: &FeatureStructure, path: &Path) -> Result<Vec<FeatureStructure>> {
    let Some(v) = sem.value_at(path) else { return Ok(Vec::new()) };
    let (items, _) = sem.list_items(v).ok_or_else(|| Error::NotAList(path.to_string()))?;
    Ok(items
        .into_iter()
        .map(|i| sem.rerooted(i).expect("substructure of an acyclic structure"))
        .collect())
}

/// True iff `sem` carries no top-level non-kernel element.
pub fn is_sk(sem: &FeatureStructure, g: &Grammar) -> bool {
    g.semantic_nonsk_paths()
        .iter()
        .all(|p| items_at(sem, p).is_ok_and(|items| items.is_empty()))
}

/// Splits `sem` into kernel and non-kernel elements. Fails if a non-kernel
/// path holds something other than a list.
pub fn decompose(sem: &FeatureStructure, g: &Grammar) -> Result<Decomposition> {
    let mut kernel = sem.clone();
    let mut nonsk_items = Vec::new();
    if !is_avm(sem) {
        return Ok(Decomposition { kernel, nonsk_items });
    }
    for p in g.semantic_nonsk_paths() {
        for item in items_at(sem, &p)? {
            nonsk_items.push((p.clone(), item));
        }
        kernel = set_at(&kernel, &p, &nil());
    }
    Ok(Decomposition { kernel, nonsk_items })
}

fn nil() -> FeatureStructure {
    FeatureStructure::from_parts(Value::Nil, Default::default()).expect("nil is well-formed")
}

/// The kernel of `sem`, or `sem` itself when it cannot be decomposed.
pub fn kernel(sem: &FeatureStructure, g: &Grammar) -> FeatureStructure {
    decompose(sem, g).map(|d| d.kernel).unwrap_or_else(|_| sem.clone())
}

/// Fills absent top-level non-kernel features of an AVM with `<>`.
pub fn with_empty_nonsk(sem: &FeatureStructure, g: &Grammar) -> FeatureStructure {
    if !is_avm(sem) {
        return sem.clone();
    }
    let mut out = sem.clone();
    for p in g.semantic_nonsk_paths() {
        if out.value_at(&p).is_none() {
            out = set_at(&out, &p, &nil());
        }
    }
    out
}

/// True iff `candidate` carries only kernel information of `sem`.
pub fn sk_of(sem: &FeatureStructure, candidate: &FeatureStructure, g: &Grammar) -> bool {
    with_empty_nonsk(candidate, g).subsumes(&kernel(sem, g))
}

/// True iff some lexical entry's semantics subsumes `sem`.
pub fn lexically_grounded(sem: &FeatureStructure, g: &Grammar) -> bool {
    let sem = with_empty_nonsk(sem, g);
    g.lexicon
        .iter()
        .any(|e| with_empty_nonsk(&e.sem(), g).subsumes(&sem))
}

/// Gives every AVM node of `sem` an explicit, closed list at each
/// single-feature non-kernel path: absent features become `<>` and open
/// tails are closed.
pub fn nonsk_normalize(sem: &FeatureStructure, g: &Grammar) -> FeatureStructure {
    let feats: Vec<String> = g
        .semantic_nonsk_paths()
        .into_iter()
        .filter(|p| p.features().len() == 1)
        .map(|p| p.features()[0].clone())
        .collect();
    let mut env = Env::default();
    let root = env.import(sem);
    let root = normalize_node(&mut env, &root, &feats, &mut HashSet::new());
    env.snapshot(&root).unwrap_or_else(|| sem.clone())
}

fn normalize_node(env: &mut Env, v: &Value, feats: &[String], seen: &mut HashSet<VarId>) -> Value {
    match v {
        Value::Var(id) => {
            if seen.insert(*id) {
                if let Some(b) = env.binding(*id).cloned() {
                    let nb = normalize_node(env, &b, feats, seen);
                    env.bind(*id, nb);
                }
            }
            v.clone()
        }
        Value::Avm(m) => {
            let mut out = m.clone();
            for c in out.values_mut() {
                *c = normalize_node(env, c, feats, seen);
            }
            for f in feats {
                match out.get(f) {
                    None => {
                        out.insert(f.clone(), Value::Nil);
                    }
                    Some(list) => close_tail(env, list),
                }
            }
            Value::Avm(out)
        }
        Value::Cons(h, t) => Value::Cons(
            Box::new(normalize_node(env, h, feats, seen)),
            Box::new(normalize_node(env, t, feats, seen)),
        ),
        _ => v.clone(),
    }
}

fn close_tail(env: &mut Env, list: &Value) {
    let mut cur = list.clone();
    loop {
        match env.deref(&cur) {
            (_, Value::Cons(_, t)) => cur = *t,
            (_, Value::Var(id)) => {
                env.bind(id, Value::Nil);
                return;
            }
            _ => return,
        }
    }
}

/// Whether the list at `path` in `sem` is closed.
pub fn closed_at(sem: &FeatureStructure, path: &Path) -> bool {
    sem.value_at(path)
        .and_then(|v| sem.list_items(v))
        .is_some_and(|(_, tail)| tail == ListTail::Closed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(s: &str) -> FeatureStructure {
        s.parse().unwrap()
    }

    #[test]
    fn sk_predicate() {
        let g = Grammar::bundled();
        assert!(is_sk(&fs("[rel: sentence]"), &g));
        assert!(is_sk(&fs("[rel: sentence, mod: <>]"), &g));
        assert!(is_sk(&fs("[rel: sentence, mod: _]"), &g));
        assert!(!is_sk(&fs("[rel: sentence, def: +, mod: <complex>]"), &g));
        let stripped = fs("[mod: <>, pred: generate, arg1: [def: +, mod: <little, prolog>, rel: program]]");
        assert!(is_sk(&stripped, &g));
        assert!(is_sk(&fs("quick"), &g));
    }

    #[test]
    fn decomposition() {
        let g = Grammar::bundled();
        let d = decompose(&fs("[rel: sentence, def: +, mod: <complex>]"), &g).unwrap();
        assert_eq!(d.kernel, fs("[rel: sentence, def: +, mod: <>]"));
        assert_eq!(d.nonsk_items, vec![(fs_path("mod"), fs("complex"))]);
        assert_eq!(d.recompose(), fs("[rel: sentence, def: +, mod: <complex>]"));

        let d = decompose(&fs("[rel: sentence]"), &g).unwrap();
        assert_eq!(d.kernel, fs("[rel: sentence, mod: <>]"));
        assert!(d.nonsk_items.is_empty());

        assert!(matches!(decompose(&fs("[mod: x]"), &g), Err(Error::NotAList(_))));
    }

    fn fs_path(s: &str) -> Path {
        s.parse().unwrap()
    }

    #[test]
    fn kernel_information() {
        let g = Grammar::bundled();
        let complex = fs("[rel: sentence, def: +, mod: <complex>]");
        assert!(sk_of(&complex, &fs("[rel: sentence, def: +, mod: <>]"), &g));
        assert!(sk_of(&complex, &fs("[rel: sentence]"), &g));
        assert!(!sk_of(&complex, &complex, &g));
        let plain = fs("[rel: sentence, mod: <>]");
        assert!(sk_of(&plain, &plain, &g));
    }

    #[test]
    fn grounding() {
        let g = Grammar::bundled();
        assert!(lexically_grounded(&fs("[rel: sentence]"), &g));
        assert!(!lexically_grounded(&fs("[rel: castle]"), &g));
        assert!(lexically_grounded(&fs("[pred: generate, arg1: A, arg2: B]"), &g));
    }

    #[test]
    fn deep_normalization() {
        let g = Grammar::bundled();
        let s = fs("[arg1: [rel: program, mod: <little | T>], pred: generate]");
        let n = nonsk_normalize(&s, &g);
        assert_eq!(n, fs("[arg1: [rel: program, mod: <little>], pred: generate, mod: <>]"));
        assert!(closed_at(&n, &fs_path("arg1.mod")));
    }
}
