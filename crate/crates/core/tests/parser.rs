mod common;

use common::oracle::denotations;
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skg::generate::{generate, GenConfig};
use skg::parser::{check_output, left_corner_table, parse, roundtrip, tokenize};
use skg::sk::nonsk_normalize;
use skg::{Error, FeatureStructure, Path};

fn sem(desc: &FeatureStructure) -> FeatureStructure {
    desc.get(&Path(vec!["sem".into()])).unwrap()
}

#[test]
fn parses_every_word_order() {
    let g = grammar();
    let want = nonsk_normalize(&full_sem(), &g);
    for s in FULL_SENTENCES {
        let r = parse(&g, &tokenize(s), None, &GenConfig::default()).unwrap();
        assert!(r.analyses.iter().any(|a| a.semantics == want), "{s}");
    }
}

#[test]
fn rejects_bad_input() {
    let g = grammar();
    let cfg = GenConfig::default();
    assert_eq!(parse(&g, &[], None, &cfg).unwrap_err(), Error::EmptyInput);
    let err = parse(&g, &tokenize("the purple sentence"), None, &cfg).unwrap_err();
    assert_eq!(err, Error::UnknownToken("purple".into()));
    let r = parse(&g, &tokenize("sentence the"), Some("np"), &cfg).unwrap();
    assert!(r.analyses.is_empty());
}

#[test]
fn left_corners() {
    let lc = left_corner_table(&grammar());
    assert!(lc.contains(&("s".into(), "np".into())));
    assert!(lc.contains(&("s".into(), "det".into())));
    assert!(lc.contains(&("n2".into(), "adj".into())));
    assert!(!lc.contains(&("det".into(), "s".into())));
}

#[test]
fn incompleteness_is_detected() {
    let g = grammar();
    let input = sem(&complex_goal());
    let v = check_output(&g, "the sentence", "np", &input, &GenConfig::default()).unwrap();
    assert!(!v.complete && !v.pass);
    assert!(v.failures().contains(&"incomplete"));
    let v = check_output(&g, "the complex sentence", "np", &input, &GenConfig::default()).unwrap();
    assert!(v.pass && v.failures().is_empty());
}

#[test]
fn roundtrip_reasons() {
    let g = grammar();
    let r = roundtrip(&g, &fixture("castle.sem"), &GenConfig::default()).unwrap();
    assert!(!r.pass);
    assert_eq!(r.reason.as_deref(), Some("no-output"));
    let r = roundtrip(&g, &full_goal(), &GenConfig::with_budget(10)).unwrap();
    assert_eq!(r.reason.as_deref(), Some("budget-exhausted"));
    assert!(roundtrip(&g, &full_goal(), &GenConfig::default()).unwrap().pass);
}

fn goal() -> impl Strategy<Value = FeatureStructure> {
    any::<u64>().prop_map(|seed| random_goal(&mut ChaCha8Rng::seed_from_u64(seed), 3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generation_and_parsing_are_dual(goal in goal()) {
        let g = grammar();
        let cfg = GenConfig::default();
        let want = nonsk_normalize(&sem(&goal), &g);
        let root = goal.atom_at(&"cat".parse().unwrap()).unwrap().to_string();
        for o in generate(&g, &goal, &cfg).unwrap().outputs {
            let r = parse(&g, &tokenize(&o.surface), Some(&root), &cfg).unwrap();
            let back = r.analyses.iter().find(|a| a.derivation == o.derivation);
            prop_assert!(back.is_some(), "{} has no analysis with derivation {}", o.surface, o.derivation);
            prop_assert_eq!(&back.unwrap().semantics, &want);
            for a in &r.analyses {
                let recomputed: Vec<_> = denotations(&g, &a.derivation)
                    .iter()
                    .map(|d| nonsk_normalize(&sem(d), &g))
                    .collect();
                prop_assert!(recomputed.contains(&a.semantics));
            }
        }
    }

    #[test]
    fn tokenization_is_stable(goal in goal(), upper in any::<bool>()) {
        let g = grammar();
        let cfg = GenConfig::default();
        let root = goal.atom_at(&"cat".parse().unwrap()).unwrap().to_string();
        for o in generate(&g, &goal, &cfg).unwrap().outputs {
            let spaced = o.surface.split(' ').collect::<Vec<_>>().join("   ");
            let spaced = if upper { spaced.to_uppercase() } else { spaced };
            let a = parse(&g, &tokenize(&o.surface), Some(&root), &cfg).unwrap();
            let b = parse(&g, &tokenize(&spaced), Some(&root), &cfg).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
