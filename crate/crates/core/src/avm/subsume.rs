use std::collections::HashMap;

use super::value::{FeatureStructure, Value, VarId};

/// Node identity on the subsumed side. Unshared compound nodes are reachable
/// by exactly one path from their nearest enclosing tag, so that path names
/// them.
#[derive(Clone, Debug, PartialEq, Eq)]
enum NodeId {
    Tag(VarId),
    Atom(String),
    Nil,
    Position(Option<VarId>, Vec<Step>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Step {
    Feature(String),
    Head,
    Tail,
}

struct Matcher<'a> {
    general: &'a FeatureStructure,
    specific: &'a FeatureStructure,
    map: HashMap<VarId, NodeId>,
}

impl Matcher<'_> {
    fn identity(&self, raw: &Value, anchor: Option<VarId>, steps: &[Step]) -> NodeId {
        if let Value::Var(t) = raw {
            return NodeId::Tag(*t);
        }
        match raw {
            Value::Atom(s) => NodeId::Atom(s.clone()),
            Value::Nil => NodeId::Nil,
            _ => NodeId::Position(anchor, steps.to_vec()),
        }
    }

    fn check(&mut self, gen: &Value, raw: &Value, anchor: Option<VarId>, steps: &mut Vec<Step>) -> bool {
        match raw {
            Value::Var(t) => self.check_here(gen, raw, Some(*t), &mut Vec::new()),
            _ => self.check_here(gen, raw, anchor, steps),
        }
    }

    fn check_here(&mut self, gen: &Value, raw: &Value, anchor: Option<VarId>, steps: &mut Vec<Step>) -> bool {
        if let Value::Var(t) = gen {
            let id = self.identity(raw, anchor, steps);
            if let Some(prev) = self.map.get(t) {
                return *prev == id;
            }
            self.map.insert(*t, id);
            return match self.general.bindings.get(t) {
                Some(bound) => self.check_here(bound, raw, anchor, steps),
                None => true,
            };
        }
        let spec = self.specific.deref(raw);
        match (gen, spec) {
            (Value::Atom(a), Value::Atom(b)) => a == b,
            (Value::Nil, Value::Nil) => true,
            (Value::Avm(gm), Value::Avm(sm)) => gm.iter().all(|(feat, gv)| {
                let Some(sv) = sm.get(feat) else { return false };
                steps.push(Step::Feature(feat.clone()));
                let ok = self.check(gv, sv, anchor, steps);
                steps.pop();
                ok
            }),
            (Value::Cons(gh, gt), Value::Cons(sh, st)) => {
                steps.push(Step::Head);
                let ok = self.check(gh, sh, anchor, steps);
                steps.pop();
                if !ok {
                    return false;
                }
                steps.push(Step::Tail);
                let ok = self.check(gt, st, anchor, steps);
                steps.pop();
                ok
            }
            _ => false,
        }
    }
}

/// True iff `general` carries no information absent from `specific`,
/// including its reentrancies.
pub fn subsumes(general: &FeatureStructure, specific: &FeatureStructure) -> bool {
    let mut m = Matcher {
        general,
        specific,
        map: HashMap::new(),
    };
    m.check(&general.root, &specific.root, None, &mut Vec::new())
}

/// Mutual subsumption. Because feature structures are kept in normal form
/// this is plain equality.
pub fn equal_modulo_renaming(a: &FeatureStructure, b: &FeatureStructure) -> bool {
    a == b
}

impl FeatureStructure {
    pub fn subsumes(&self, other: &FeatureStructure) -> bool {
        subsumes(self, other)
    }
}
