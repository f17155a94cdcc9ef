//! Slow reference implementations used to check the real ones.

use std::collections::{BTreeMap, BTreeSet};

use skg::generate::Derivation;
use skg::grammar::Slot;
use skg::sk::nonsk_normalize;
use skg::{FeatureStructure, Grammar, Path, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Ident {
    Tag(u32),
    Atom(String),
    Nil,
    At(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Label {
    Atom(String),
    Nil,
    Avm,
    Cons,
    Unbound,
}

/// Every path of `fs` with the identity and label of the node it reaches.
/// List cells are entered through `first` and `rest`.
fn paths(fs: &FeatureStructure) -> BTreeMap<Vec<String>, (Ident, Label)> {
    fn walk(fs: &FeatureStructure, raw: &Value, path: &mut Vec<String>, out: &mut BTreeMap<Vec<String>, (Ident, Label)>) {
        let v = fs.deref(raw);
        let ident = match (raw, v) {
            (Value::Var(t), _) => Ident::Tag(*t),
            (_, Value::Atom(a)) => Ident::Atom(a.clone()),
            (_, Value::Nil) => Ident::Nil,
            _ => Ident::At(path.clone()),
        };
        let label = match v {
            Value::Atom(a) => Label::Atom(a.clone()),
            Value::Nil => Label::Nil,
            Value::Avm(_) => Label::Avm,
            Value::Cons(..) => Label::Cons,
            Value::Var(_) => Label::Unbound,
        };
        out.insert(path.clone(), (ident, label));
        let children: Vec<(String, Value)> = match v {
            Value::Avm(m) => m.iter().map(|(k, c)| (k.clone(), c.clone())).collect(),
            Value::Cons(h, t) => vec![("first".into(), (**h).clone()), ("rest".into(), (**t).clone())],
            _ => Vec::new(),
        };
        for (k, c) in children {
            path.push(k);
            walk(fs, &c, path, out);
            path.pop();
        }
    }
    let mut out = BTreeMap::new();
    walk(fs, fs.root(), &mut Vec::new(), &mut out);
    out
}

/// Subsumption by the path characterization: every path of `a` exists in
/// `b` with a compatible label, and paths sharing a node in `a` share one in
/// `b`.
pub fn brute_subsumes(a: &FeatureStructure, b: &FeatureStructure) -> bool {
    let pa = paths(a);
    let pb = paths(b);
    for (p, (_, la)) in &pa {
        let Some((_, lb)) = pb.get(p) else { return false };
        let ok = match la {
            Label::Unbound => true,
            Label::Atom(_) | Label::Nil => la == lb,
            Label::Avm => *lb == Label::Avm,
            Label::Cons => *lb == Label::Cons,
        };
        if !ok {
            return false;
        }
    }
    let entries: Vec<_> = pa.iter().collect();
    for (i, (p, (ia, _))) in entries.iter().enumerate() {
        for (q, (ja, _)) in &entries[i + 1..] {
            if ia == ja && pb[*p].0 != pb[*q].0 {
                return false;
            }
        }
    }
    true
}

/// Top-down enumeration of derivations for `goal` up to `depth` levels,
/// pruned by unification with the goal.
fn derivations(g: &Grammar, goal: &FeatureStructure, depth: usize) -> Vec<(FeatureStructure, Derivation)> {
    if depth == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for e in &g.lexicon {
        if let Some(d) = e.description.unify(goal) {
            out.push((d, Derivation::Leaf { surface: e.surface.clone() }));
        }
    }
    for r in &g.rules {
        let Some(inst) = r.attach(&r.template, Slot::Mother, goal) else { continue };
        let mut order = vec![r.head];
        order.extend((0..r.arity).filter(|i| *i != r.head));
        let mut partial = vec![(inst, vec![None; r.arity])];
        for k in order {
            let mut next = Vec::new();
            for (inst, kids) in partial {
                let sub = r.part(&inst, Slot::Daughter(k));
                for (d, t) in derivations(g, &sub, depth - 1) {
                    if let Some(i2) = r.attach(&inst, Slot::Daughter(k), &d) {
                        let mut kids = kids.clone();
                        kids[k] = Some(t);
                        next.push((i2, kids));
                    }
                }
            }
            partial = next;
        }
        for (inst, kids) in partial {
            let children = kids.into_iter().map(Option::unwrap).collect();
            out.push((r.part(&inst, Slot::Mother), Derivation::Node { rule: r.id.clone(), children }));
        }
    }
    out
}

/// The descriptions a derivation tree denotes, computed bottom-up without
/// reference to any goal.
pub fn denotations(g: &Grammar, t: &Derivation) -> Vec<FeatureStructure> {
    match t {
        Derivation::Leaf { surface } => g.entries_for(surface).map(|e| e.description.clone()).collect(),
        Derivation::Node { rule, children } => {
            let r = g.rule(rule).unwrap();
            let mut insts = vec![r.template.clone()];
            for (i, c) in children.iter().enumerate() {
                let kids = denotations(g, c);
                insts = insts
                    .iter()
                    .flat_map(|inst| kids.iter().filter_map(move |k| r.attach(inst, Slot::Daughter(i), k)))
                    .collect();
            }
            insts.iter().map(|i| r.part(i, Slot::Mother)).collect()
        }
    }
}

/// Strings whose derivation (up to `depth` levels) has root semantics
/// equivalent to the goal's.
pub fn oracle_strings(g: &Grammar, goal: &FeatureStructure, depth: usize) -> BTreeSet<String> {
    let sem = Path(vec!["sem".into()]);
    let cat = Path(vec!["cat".into()]);
    let want = nonsk_normalize(&goal.get(&sem).unwrap(), g);
    let root_cat = goal.atom_at(&cat).unwrap();
    let mut out = BTreeSet::new();
    let mut seen = BTreeSet::new();
    for (_, t) in derivations(g, goal, depth) {
        if !seen.insert(t.clone()) {
            continue;
        }
        for d in denotations(g, &t) {
            if d.atom_at(&cat) != Some(root_cat) {
                continue;
            }
            let got = d.get(&sem).map(|s| nonsk_normalize(&s, g));
            if got.as_ref() == Some(&want) {
                out.insert(t.surface());
            }
        }
    }
    out
}
