//! Attribute-value structures: unification, subsumption and substructures.

mod subsume;
pub(crate) mod text;
mod unify;
mod value;

use std::collections::BTreeSet;

pub use subsume::{equal_modulo_renaming, subsumes};
pub use unify::unify;
pub use value::{FeatureStructure, ListTail, Path, Value, VarId};
pub(crate) use value::Env;

impl FeatureStructure {
    /// Every node reachable from the root (the root itself, AVMs, atoms,
    /// lists and list elements), each re-rooted and normalized.
    pub fn substructures(&self) -> BTreeSet<FeatureStructure> {
        let mut out = BTreeSet::new();
        let mut seen = Vec::new();
        self.collect_nodes(&self.root.clone(), &mut seen, &mut out);
        out
    }

    fn collect_nodes(&self, v: &Value, seen: &mut Vec<VarId>, out: &mut BTreeSet<FeatureStructure>) {
        if let Value::Var(id) = v {
            if seen.contains(id) {
                return;
            }
            seen.push(*id);
        }
        if let Some(fs) = self.rerooted(v) {
            out.insert(fs);
        }
        self.deref(v).for_each_child(|c| self.collect_nodes(c, seen, out));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(s: &str) -> FeatureStructure {
        s.parse().unwrap()
    }

    const FULL: &str = "[mod: <quick>, pred: generate,
        arg1: [def: +, mod: <little, prolog>, rel: program],
        arg2: [def: +, mod: <complex>, rel: sentence]]";

    #[test]
    fn unify_examples() {
        let s = fs("[rel: sentence]");
        assert_eq!(unify(&s, &s), Some(s.clone()));
        assert_eq!(unify(&s, &fs("[rel: program]")), None);
        assert_eq!(
            unify(&fs("[pred: generate, arg2: X]"), &fs("[arg2: [rel: sentence]]")),
            Some(fs("[pred: generate, arg2: [rel: sentence]]"))
        );
    }

    #[test]
    fn unify_failures() {
        assert_eq!(unify(&fs("[a: x]"), &fs("[a: [b: x]]")), None);
        assert_eq!(unify(&fs("<a, b>"), &fs("<a>")), None);
        assert_eq!(unify(&fs("[a: X, b: [c: X]]"), &fs("[a: #1, b: #1]")), None, "occurs check");
    }

    #[test]
    fn reentrancy_propagates() {
        let shared = fs("[a: #1, b: #1]");
        let got = unify(&shared, &fs("[a: [c: x], b: [d: y]]")).unwrap();
        assert_eq!(got, fs("[a: #1 [c: x, d: y], b: #1]"));
        assert_eq!(got.to_string(), "[a: #1 [c: x, d: y], b: #1]");
    }

    #[test]
    fn head_tail_patterns() {
        let pat = fs("[m: <H | T>, h: H, t: T]");
        let got = unify(&pat, &fs("[m: <a, b, c>]")).unwrap();
        assert_eq!(got.value_at(&"h".parse().unwrap()), Some(&Value::atom("a")));
        assert_eq!(got.get(&"t".parse().unwrap()), Some(fs("<b, c>")));
    }

    #[test]
    fn subsumption_examples() {
        assert!(subsumes(&fs("[rel: sentence]"), &fs("[rel: sentence, def: +]")));
        let a = fs(FULL);
        assert!(subsumes(&a, &a));
        assert!(!subsumes(&fs("[rel: sentence, def: +]"), &fs("[rel: sentence]")));
        assert!(subsumes(&fs("[a: x, b: x]"), &fs("[a: #1 [c: d], b: #1]")) == false);
        assert!(subsumes(&fs("[a: X, b: Y]"), &fs("[a: #1, b: #1]")));
        assert!(!subsumes(&fs("[a: #1, b: #1]"), &fs("[a: X, b: Y]")));
        assert!(subsumes(&fs("[a: #1, b: #1]"), &fs("[a: x, b: x]")));
    }

    #[test]
    fn get_examples() {
        let a = fs(FULL);
        assert_eq!(a.get(&"mod".parse().unwrap()), Some(fs("<quick>")));
        assert_eq!(a.get(&"arg1.rel".parse().unwrap()), Some(FeatureStructure::atom("program")));
        assert_eq!(fs("[rel: sentence]").get(&"def".parse().unwrap()), None);
    }

    #[test]
    fn substructure_examples() {
        let subs = fs("[rel: sentence]").substructures();
        assert_eq!(subs, BTreeSet::from([fs("[rel: sentence]"), FeatureStructure::atom("sentence")]));
        let complex = fs("[rel: sentence, def: +, mod: <complex>]").substructures();
        for s in ["[rel: sentence, def: +, mod: <complex>]", "complex", "+", "sentence"] {
            assert!(complex.contains(&fs(s)), "{s}");
        }
        assert_eq!(FeatureStructure::atom("a").substructures().len(), 1);
    }

    #[test]
    fn renaming() {
        assert!(equal_modulo_renaming(&fs("[arg1: X]"), &fs("[arg1: Y]")));
        assert!(!equal_modulo_renaming(&fs("[arg1: X, arg2: X]"), &fs("[arg1: Y, arg2: Z]")));
        let a = fs(FULL);
        assert_eq!(a.to_string().parse::<FeatureStructure>().unwrap(), a);
    }

    #[test]
    fn paths_and_syntax() {
        assert_eq!(fs("[sem.mod: <>, sem.rel: x]"), fs("[sem: [mod: <>, rel: x]]"));
        assert_eq!(fs("% comment\n[ a : x ]"), fs("[a: x]"));
        assert!("[a: x".parse::<FeatureStructure>().is_err());
        assert!("[a: x, a: y]".parse::<FeatureStructure>().is_err());
        assert_eq!(fs("<a | <b>>"), fs("<a, b>"));
    }
}
