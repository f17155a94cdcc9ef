#![allow(dead_code)]

pub mod oracle;

use rand::seq::SliceRandom;
use rand::Rng;
use skg::{FeatureStructure, Grammar};

pub fn grammar() -> Grammar {
    Grammar::bundled()
}

pub fn fs(s: &str) -> FeatureStructure {
    s.parse().unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn fixture(name: &str) -> FeatureStructure {
    let path = format!("{}/../../grammars/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap().parse().unwrap()
}

/// "the complex sentence" as an np goal.
pub fn complex_goal() -> FeatureStructure {
    fixture("complex-sentence.sem")
}

pub fn full_sem() -> FeatureStructure {
    fixture("full-sentence.sem")
}

pub fn s_goal(sem: &FeatureStructure) -> FeatureStructure {
    fs(&format!("[cat: s, sem: {sem}]"))
}

pub fn full_goal() -> FeatureStructure {
    s_goal(&full_sem())
}

pub const FULL_SENTENCES: [&str; 3] = [
    "quickly the little prolog program generated the complex sentence",
    "the little prolog program generated the complex sentence quickly",
    "the little prolog program quickly generated the complex sentence",
];

const NOUNS: [&str; 2] = ["sentence", "program"];
const ADJS: [&str; 3] = ["complex", "little", "prolog"];

fn list(items: &[&str]) -> String {
    format!("<{}>", items.join(", "))
}

fn np_sem(rel: &str, mods: &[&str]) -> String {
    format!("[rel: {rel}, def: +, mod: {}]", list(mods))
}

/// A random sentence or np goal over the bundled lexicon whose modifier
/// lists hold at most `max_mods` elements in total.
pub fn random_goal(rng: &mut impl Rng, max_mods: usize) -> FeatureStructure {
    let total = rng.gen_range(0..=max_mods);
    if rng.gen_bool(0.2) {
        let mods: Vec<&str> = (0..total).map(|_| *ADJS.choose(rng).unwrap()).collect();
        return fs(&format!("[cat: np, sem: {}]", np_sem(NOUNS.choose(rng).unwrap(), &mods)));
    }
    // Split the modifiers between the sentence and its two arguments.
    let mut slots = [0usize; 3];
    for _ in 0..total {
        slots[rng.gen_range(0..3)] += 1;
    }
    let advs = vec!["quick"; slots[0]];
    let a1: Vec<&str> = (0..slots[1]).map(|_| *ADJS.choose(rng).unwrap()).collect();
    let a2: Vec<&str> = (0..slots[2]).map(|_| *ADJS.choose(rng).unwrap()).collect();
    fs(&format!(
        "[cat: s, sem: [pred: generate, mod: {}, arg1: {}, arg2: {}]]",
        list(&advs),
        np_sem(NOUNS.choose(rng).unwrap(), &a1),
        np_sem(NOUNS.choose(rng).unwrap(), &a2),
    ))
}

/// Every goal built from bundled lexical semantics with empty modifier
/// lists.
pub fn sk_only_goals() -> Vec<FeatureStructure> {
    let mut out = Vec::new();
    for n in NOUNS {
        out.push(fs(&format!("[cat: n2, sem: [rel: {n}, mod: <>]]")));
        out.push(fs(&format!("[cat: np, sem: {}]", np_sem(n, &[]))));
    }
    for a in NOUNS {
        for b in NOUNS {
            out.push(fs(&format!(
                "[cat: s, sem: [pred: generate, mod: <>, arg1: {}, arg2: {}]]",
                np_sem(a, &[]),
                np_sem(b, &[])
            )));
        }
    }
    out.push(fs("[cat: det, sem: [def: +]]"));
    for a in ADJS {
        out.push(fs(&format!("[cat: adj, sem: {a}]")));
    }
    out.push(fs("[cat: adv, sem: quick]"));
    out
}
