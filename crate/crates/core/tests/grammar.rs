mod common;

use std::collections::BTreeSet;

use common::{fs, grammar};
use skg::grammar::{classify_rule, compute_link, BUNDLED_GRAMMAR};
use skg::{load_grammar, Error, RuleClass};

/// Reflexive-transitive closure by Warshall's algorithm.
fn naive_closure(cats: &[String], edges: &BTreeSet<(String, String)>) -> BTreeSet<(String, String)> {
    let n = cats.len();
    let idx = |c: &str| cats.iter().position(|x| x == c).unwrap();
    let mut m = vec![vec![false; n]; n];
    for i in 0..n {
        m[i][i] = true;
    }
    for (a, b) in edges {
        m[idx(a)][idx(b)] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                m[i][j] |= m[i][k] && m[k][j];
            }
        }
    }
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if m[i][j] {
                out.insert((cats[i].clone(), cats[j].clone()));
            }
        }
    }
    out
}

#[test]
fn bundled_grammar_shape() {
    let g = grammar();
    let ids: Vec<&str> = g.rules.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids, ["1a", "1b", "2", "3", "4", "5", "6", "7", "8"]);
    assert_eq!(g.start, "s");
    assert_eq!(g.semantic_nonsk_paths(), vec!["mod".parse().unwrap()]);
    for r in &g.rules {
        assert_eq!(classify_rule(r, &g.nonsk_paths).unwrap().0, r.class, "rule {}", r.id);
        let expect = matches!(r.id.as_str(), "1a" | "1b" | "3" | "8");
        assert_eq!(r.class == RuleClass::NonSk, expect, "rule {}", r.id);
    }
}

#[test]
fn link_relation_is_the_head_closure() {
    let g = grammar();
    let mut cats: BTreeSet<String> = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for r in &g.rules {
        cats.insert(r.mother_cat().unwrap().to_string());
        for i in 0..r.arity {
            cats.extend(r.daughter_cat(i).map(str::to_string));
        }
        edges.insert((r.mother_cat().unwrap().to_string(), r.daughter_cat(r.head).unwrap().to_string()));
    }
    cats.extend(g.lexicon.iter().map(|e| e.cat().to_string()));
    let cats: Vec<String> = cats.into_iter().collect();
    assert_eq!(g.link.pairs, naive_closure(&cats, &edges));
    assert_eq!(compute_link(&g.rules, &g.lexicon), g.link);

    assert!(g.link.links("np", "n"));
    assert!(g.link.links("s", "s"));
    assert!(!g.link.links("n", "np"));
}

#[test]
fn lexical_candidates_follow_the_link() {
    let g = grammar();
    let words = |goal: &str| -> Vec<String> {
        g.lexical_candidates(&fs(goal)).iter().map(|e| e.surface.clone()).collect()
    };
    assert!(words("[cat: np]").contains(&"sentence".to_string()));
    assert_eq!(words("[cat: det]"), ["the"]);
    assert_eq!(words("[cat: s]"), ["generated"]);

    let no_adverbs = load_grammar("lex \"the\": [cat: det, lex: the, sem: [def: +]].").unwrap();
    assert!(no_adverbs.lexical_candidates(&fs("[cat: adv]")).is_empty());
}

#[test]
fn degenerate_grammars() {
    let g = load_grammar("lex \"sentence\": [cat: n, lex: sentence, sem: [rel: sentence]].").unwrap();
    assert!(g.rules.is_empty());
    assert_eq!(g.lexicon.len(), 1);

    let no_nonsk = "rule a head 2: [cat: np, sem: #1] -> [cat: det], [cat: n, sem: #1, sem: [mod: <x>]].";
    let g = load_grammar(no_nonsk).unwrap();
    assert!(g.nonsk_paths.is_empty());
    assert!(g.rules.iter().all(|r| r.class == RuleClass::Sk));
}

#[test]
fn dsl_round_trip() {
    let g = grammar();
    let text = g.to_dsl();
    assert_eq!(load_grammar(&text).unwrap(), g);
    assert_eq!(load_grammar(&load_grammar(&text).unwrap().to_dsl()).unwrap().to_dsl(), text);
    assert_eq!(load_grammar(BUNDLED_GRAMMAR).unwrap(), g);
}

#[test]
fn loader_reports_problems() {
    let err = load_grammar("rule x head 0: [cat: s] -> [cat: a].").unwrap_err();
    assert_eq!(err, Error::BadHead { rule: "x".into(), head: 0, arity: 1 });
    assert!(err.to_string().contains('x'));

    let err = load_grammar("nonsk sem.mod.\nrule y sk: [cat: a, sem: [mod: <M | T>]] -> [cat: a, sem: [mod: T]], [cat: b, sem: M].");
    assert!(matches!(err, Err(Error::Syntax { .. })), "{err:?}");

    let err = load_grammar("nonsk sem.mod.\nrule y sk head 1: [cat: a, sem: [mod: <M | T>]] -> [cat: a, sem: [mod: T]], [cat: b, sem: M].");
    assert!(matches!(err, Err(Error::ClassMismatch { .. })), "{err:?}");

    let err = load_grammar("start s.\n\nrule z: [cat: s] -> [cat: a] [cat: b].").unwrap_err();
    match err {
        Error::Syntax { line, column, .. } => assert_eq!((line, column), (3, 30)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(load_grammar("rule z: [cat: s, f: a, f: b] -> [cat: a]."), Err(Error::Inconsistent(_))));
    assert!(matches!(load_grammar("nonsk mod."), Err(Error::Syntax { .. })));
}
