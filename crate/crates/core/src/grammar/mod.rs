//! Grammar and lexicon: rules with head annotations, kernel/non-kernel rule
//! classification, and the category link relation used for head-corner
//! prediction.

mod dsl;

use std::collections::BTreeSet;
use std::fmt;

use crate::avm::{FeatureStructure, Path, Value, VarId};
use crate::error::{Error, Result};

pub use dsl::{load_grammar, BUNDLED_GRAMMAR};

/// Name of the feature holding semantics on every category.
pub const SEM: &str = "sem";
/// Name of the category feature.
pub const CAT: &str = "cat";

/// Whether a rule adds non-kernel information to its mother.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleClass {
    Sk,
    NonSk,
}

impl fmt::Display for RuleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleClass::Sk => "sk",
            RuleClass::NonSk => "nonsk",
        })
    }
}

/// The mother and head daughter share every feature of the node at `path`
/// except `except`, which holds the non-kernel list the rule extends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelLink {
    pub path: Path,
    pub except: String,
}

/// A grammar production.
///
/// The mother and daughters live in one feature structure, `template`, under
/// the features `"0"` (mother) and `"1"`..`"n"` (daughters), so reentrancy
/// tags may span all of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub id: String,
    pub template: FeatureStructure,
    pub arity: usize,
    /// Zero-based index of the head daughter.
    pub head: usize,
    pub class: RuleClass,
    /// Mother-relative path of the list a non-kernel rule extends.
    pub nonsk_path: Option<Path>,
    pub kernel_links: Vec<KernelLink>,
}

/// A position within a rule instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Mother,
    Daughter(usize),
}

impl Slot {
    pub fn path(self) -> Path {
        match self {
            Slot::Mother => Path(vec!["0".into()]),
            Slot::Daughter(i) => Path(vec![(i + 1).to_string()]),
        }
    }
}

impl Rule {
    /// The description at `slot` of a rule instance.
    pub fn part(&self, instance: &FeatureStructure, slot: Slot) -> FeatureStructure {
        instance.get(&slot.path()).unwrap_or_else(FeatureStructure::unbound)
    }

    pub fn mother(&self) -> FeatureStructure {
        self.part(&self.template, Slot::Mother)
    }

    pub fn daughter(&self, i: usize) -> FeatureStructure {
        self.part(&self.template, Slot::Daughter(i))
    }

    pub fn head_daughter(&self) -> FeatureStructure {
        self.daughter(self.head)
    }

    pub fn mother_cat(&self) -> Option<&str> {
        self.template.atom_at(&Slot::Mother.path().child(CAT))
    }

    pub fn daughter_cat(&self, i: usize) -> Option<&str> {
        self.template.atom_at(&Slot::Daughter(i).path().child(CAT))
    }

    /// Unifies `fs` into `slot` of `instance` and re-establishes the kernel
    /// links.
    pub fn attach(&self, instance: &FeatureStructure, slot: Slot, fs: &FeatureStructure) -> Option<FeatureStructure> {
        let inst = instance.unify_at(&slot.path(), fs)?;
        self.enforce_links(&inst)
    }

    /// Shares every feature of the linked mother and head nodes except the
    /// non-kernel one. Features added to either node since the last call are
    /// propagated to the other.
    pub fn enforce_links(&self, instance: &FeatureStructure) -> Option<FeatureStructure> {
        let mut inst = instance.clone();
        for link in &self.kernel_links {
            let mp = Slot::Mother.path().join(&link.path);
            let hp = Slot::Daughter(self.head).path().join(&link.path);
            let mut feats = BTreeSet::new();
            for p in [&mp, &hp] {
                if let Some(Value::Avm(m)) = inst.value_at(p) {
                    feats.extend(m.keys().filter(|k| **k != link.except).cloned());
                }
            }
            for f in feats {
                inst = inst.unify_paths(&mp.child(f.clone()), &hp.child(f))?;
            }
        }
        Some(inst)
    }
}

/// A word with its feature description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexEntry {
    pub surface: String,
    pub description: FeatureStructure,
}

impl LexEntry {
    pub fn cat(&self) -> &str {
        self.description.atom_at(&Path(vec![CAT.into()])).unwrap_or("")
    }

    /// The entry's semantics; entries without `sem` carry no semantic
    /// constraint.
    pub fn sem(&self) -> FeatureStructure {
        self.description
            .get(&Path(vec![SEM.into()]))
            .unwrap_or_else(FeatureStructure::unbound)
    }
}

/// Reflexive-transitive closure of the goal-category to head-category
/// relation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CategoryLinkRelation {
    pub pairs: BTreeSet<(String, String)>,
}

/// Stands for a variable category in a link table.
pub(crate) const ANY_CAT: &str = "*";

impl CategoryLinkRelation {
    pub fn links(&self, goal: &str, pivot: &str) -> bool {
        self.pairs.contains(&(goal.to_string(), pivot.to_string()))
            || self.pairs.contains(&(goal.to_string(), ANY_CAT.to_string()))
    }

    pub fn categories(&self) -> BTreeSet<&str> {
        self.pairs.iter().map(|(a, _)| a.as_str()).collect()
    }
}

/// Reflexive-transitive closure over `cats` of `edges`.
pub(crate) fn closure(cats: &BTreeSet<String>, edges: &BTreeSet<(String, String)>) -> BTreeSet<(String, String)> {
    let mut pairs: BTreeSet<(String, String)> = cats.iter().map(|c| (c.clone(), c.clone())).collect();
    pairs.extend(edges.iter().cloned());
    loop {
        let mut added = Vec::new();
        for (a, b) in &pairs {
            for (c, d) in pairs.range((b.clone(), String::new())..) {
                if c != b {
                    break;
                }
                if !pairs.contains(&(a.clone(), d.clone())) {
                    added.push((a.clone(), d.clone()));
                }
            }
        }
        if added.is_empty() {
            return pairs;
        }
        pairs.extend(added);
    }
}

/// Computes the category link relation from the rules' head daughters.
pub fn compute_link(rules: &[Rule], lexicon: &[LexEntry]) -> CategoryLinkRelation {
    let mut cats = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for r in rules {
        cats.extend(r.mother_cat().map(str::to_string));
        for i in 0..r.arity {
            cats.extend(r.daughter_cat(i).map(str::to_string));
        }
        if let Some(m) = r.mother_cat() {
            let h = r.daughter_cat(r.head).unwrap_or(ANY_CAT);
            edges.insert((m.to_string(), h.to_string()));
        }
    }
    cats.extend(lexicon.iter().map(|e| e.cat().to_string()));
    CategoryLinkRelation {
        pairs: closure(&cats, &edges),
    }
}

/// A loaded grammar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    pub rules: Vec<Rule>,
    pub lexicon: Vec<LexEntry>,
    /// Non-kernel paths from a category node, e.g. `sem.mod`.
    pub nonsk_paths: Vec<Path>,
    pub start: String,
    pub link: CategoryLinkRelation,
}

impl Grammar {
    /// Non-kernel paths relative to a node's semantics, e.g. `mod`.
    pub fn semantic_nonsk_paths(&self) -> Vec<Path> {
        let sem = Path(vec![SEM.into()]);
        self.nonsk_paths.iter().filter_map(|p| p.strip_prefix(&sem)).collect()
    }

    pub fn rule(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id == id)
    }

    /// Lexical entries whose category the goal's category links to, in
    /// lexicon order. A goal with a variable category admits every entry.
    pub fn lexical_candidates(&self, goal: &FeatureStructure) -> Vec<&LexEntry> {
        let cat = goal.atom_at(&Path(vec![CAT.into()]));
        self.lexicon
            .iter()
            .filter(|e| cat.is_none_or(|c| self.link.links(c, e.cat())))
            .collect()
    }

    pub fn entries_for<'a>(&'a self, word: &'a str) -> impl Iterator<Item = &'a LexEntry> {
        self.lexicon.iter().filter(move |e| e.surface == word)
    }

    /// Categories that are the mother of some non-kernel rule.
    pub fn nonsk_hosts(&self) -> BTreeSet<&str> {
        self.rules
            .iter()
            .filter(|r| r.class == RuleClass::NonSk)
            .filter_map(|r| r.mother_cat())
            .collect()
    }
}

/// How a node at some position is identified within a structure: by the tag
/// it carries, by being a constant, or by its unique path from the nearest
/// enclosing tag.
#[derive(Clone, Debug, PartialEq, Eq)]
enum NodeKey {
    Tag(VarId),
    Nil,
    At(Option<VarId>, Vec<String>),
}

fn node_key(fs: &FeatureStructure, path: &Path) -> Option<(NodeKey, Value)> {
    let mut raw = fs.root().clone();
    let mut anchor = None;
    let mut rest: Vec<String> = Vec::new();
    for f in path.features() {
        if let Value::Var(t) = raw {
            anchor = Some(t);
            rest.clear();
        }
        let Value::Avm(m) = fs.deref(&raw) else { return None };
        raw = m.get(f)?.clone();
        rest.push(f.clone());
    }
    Some(key_of(fs, &raw, anchor, rest))
}

fn key_of(fs: &FeatureStructure, raw: &Value, anchor: Option<VarId>, rest: Vec<String>) -> (NodeKey, Value) {
    let key = match raw {
        Value::Var(t) => NodeKey::Tag(*t),
        Value::Nil => NodeKey::Nil,
        _ => NodeKey::At(anchor, rest),
    };
    (key, fs.deref(raw).clone())
}

/// How many elements the mother's list at `mother` has in front of the head
/// daughter's list at `head`. `Ok(None)` when neither has a list there.
fn list_growth(fs: &FeatureStructure, mother: &Path, head: &Path) -> std::result::Result<Option<usize>, ()> {
    let m = node_key(fs, mother);
    let h = node_key(fs, head);
    let (m, h) = match (m, h) {
        (None, None) => return Ok(None),
        (Some((mk, _)), Some((hk, _))) if mk == hk => return Ok(Some(0)),
        (Some(m), Some(h)) => (m, h),
        (Some((_, mv)), None) => {
            return match mv {
                Value::Nil | Value::Var(_) => Ok(None),
                _ => Err(()),
            }
        }
        (None, Some(_)) => return Ok(None),
    };
    let (mut key, mut val) = m;
    let mut n = 0;
    let mut rest = mother.features().to_vec();
    loop {
        if key == h.0 {
            return Ok(Some(n));
        }
        match val {
            Value::Cons(_, tail) => {
                n += 1;
                rest.push("|".into());
                let anchor = match &key {
                    NodeKey::Tag(t) => Some(*t),
                    NodeKey::At(a, _) => *a,
                    NodeKey::Nil => None,
                };
                (key, val) = key_of(fs, &tail, anchor, rest.clone());
            }
            _ => return Err(()),
        }
    }
}

/// Infers whether `rule` extends a non-kernel list of its head daughter.
///
/// Returns the class and, for non-kernel rules, the mother-relative path of
/// the extended list.
pub fn classify_rule(rule: &Rule, nonsk_paths: &[Path]) -> Result<(RuleClass, Option<Path>)> {
    let mut found = None;
    for p in nonsk_paths {
        let mp = Slot::Mother.path().join(p);
        let hp = Slot::Daughter(rule.head).path().join(p);
        match list_growth(&rule.template, &mp, &hp) {
            Ok(None) | Ok(Some(0)) => {}
            Ok(Some(1)) => {
                if found.is_none() {
                    found = Some(p.clone());
                }
            }
            Ok(Some(n)) => {
                return Err(Error::NonSkGrowth {
                    rule: rule.id.clone(),
                    path: p.to_string(),
                    growth: n,
                })
            }
            Err(()) => {
                return Err(Error::NonSkGrowth {
                    rule: rule.id.clone(),
                    path: p.to_string(),
                    growth: 0,
                })
            }
        }
    }
    Ok(match found {
        Some(p) => (RuleClass::NonSk, Some(p)),
        None => (RuleClass::Sk, None),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_rules_classify() {
        let g = Grammar::bundled();
        let classes: Vec<(&str, RuleClass)> = g.rules.iter().map(|r| (r.id.as_str(), r.class)).collect();
        assert_eq!(
            classes,
            vec![
                ("1a", RuleClass::NonSk),
                ("1b", RuleClass::NonSk),
                ("2", RuleClass::Sk),
                ("3", RuleClass::NonSk),
                ("4", RuleClass::Sk),
                ("5", RuleClass::Sk),
                ("6", RuleClass::Sk),
                ("7", RuleClass::Sk),
                ("8", RuleClass::NonSk),
            ]
        );
        assert_eq!(g.rule("8").unwrap().nonsk_path, Some("sem.mod".parse().unwrap()));
        assert_eq!(g.lexicon.len(), 8);
    }

    #[test]
    fn serializer_round_trips() {
        let g = Grammar::bundled();
        let text = g.to_dsl();
        let again = load_grammar(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        assert_eq!(g, again, "{text}");
    }

    #[test]
    fn link_relation() {
        let g = Grammar::bundled();
        assert!(g.link.links("s", "v"));
        assert!(g.link.links("np", "n"));
        assert!(g.link.links("s", "s"));
        assert!(!g.link.links("s", "det"));
        assert!(!g.link.links("np", "adj"));
        let goal: FeatureStructure = "[cat: np]".parse().unwrap();
        let words: Vec<&str> = g.lexical_candidates(&goal).iter().map(|e| e.surface.as_str()).collect();
        assert_eq!(words, ["sentence", "program"]);
    }

    #[test]
    fn kernel_link_shares_all_but_mod() {
        let g = Grammar::bundled();
        let r = g.rule("8").unwrap();
        assert_eq!(r.kernel_links.len(), 1);
        let head: FeatureStructure = "[cat: n2, sem: [rel: castle, mod: <>]]".parse().unwrap();
        let inst = r.attach(&r.template, Slot::Daughter(1), &head).unwrap();
        let mother = r.part(&inst, Slot::Mother);
        let rel = mother.atom_at(&"sem.rel".parse().unwrap());
        assert_eq!(rel, Some("castle"));
        let m = mother.get(&"sem.mod".parse().unwrap()).unwrap();
        assert_eq!(mother.list_items(m.root()).unwrap().0.len(), 1);
    }

    #[test]
    fn loader_errors() {
        let bad_head = "rule r head 3: [cat: s] -> [cat: a], [cat: b].";
        assert!(matches!(load_grammar(bad_head), Err(Error::BadHead { head: 3, .. })));
        let dup = "rule r: [cat: s] -> [cat: a]. rule r: [cat: s] -> [cat: b].";
        assert!(matches!(load_grammar(dup), Err(Error::DuplicateRule(_))));
        let mismatch = "nonsk sem.mod. rule r nonsk: [cat: s, sem: #1] -> [cat: a, sem: #1].";
        assert!(matches!(load_grammar(mismatch), Err(Error::ClassMismatch { .. })));
        let growth = "nonsk sem.mod. rule r head 1: [cat: s, sem: [mod: <A, B | T>]] -> [cat: s, sem: [mod: T]], [cat: a, sem: A], [cat: a, sem: B].";
        assert!(matches!(load_grammar(growth), Err(Error::NonSkGrowth { growth: 2, .. })));
        assert!(matches!(load_grammar("rule r: [cat: s] -> [cat: a]"), Err(Error::Syntax { .. })));
        let lex = "lex \"w\": [sem: x].";
        assert!(matches!(load_grammar(lex), Err(Error::InvalidLexEntry { .. })));
        match load_grammar("start s.\nrule r: [cat s] -> [cat: a].") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 14)),
            other => panic!("{other:?}"),
        }
    }
}
