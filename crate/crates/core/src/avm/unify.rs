use std::collections::BTreeMap;

use super::value::{Env, FeatureStructure, Path, Value, VarId};

/// Unifies two feature structures.
///
/// Returns the most general structure subsumed by both, or `None` on an
/// atom clash, a type clash (atom, AVM, list), a list length mismatch, or an
/// occurs-check violation. The inputs are untouched.
pub fn unify(a: &FeatureStructure, b: &FeatureStructure) -> Option<FeatureStructure> {
    let mut env = Env::default();
    let ra = env.import(a);
    let rb = env.import(b);
    let root = env.unify(&ra, &rb)?;
    env.snapshot(&root)
}

impl FeatureStructure {
    pub fn unify(&self, other: &FeatureStructure) -> Option<FeatureStructure> {
        unify(self, other)
    }

    /// Unifies `value` into the position at `path`, creating features as
    /// needed.
    pub fn unify_at(&self, path: &Path, value: &FeatureStructure) -> Option<FeatureStructure> {
        unify(self, &FeatureStructure::at_path(path, value))
    }

    /// Makes the nodes at `p` and `q` token-identical (a path equation).
    pub fn unify_paths(&self, p: &Path, q: &Path) -> Option<FeatureStructure> {
        if p == q {
            return Some(self.clone());
        }
        let mut env = Env::default();
        let root = env.import(self);
        let shared = env.fresh();
        let eq_p = nest(p, Value::Var(shared));
        let eq_q = nest(q, Value::Var(shared));
        let root = env.unify(&root, &eq_p)?;
        let root = env.unify(&root, &eq_q)?;
        env.snapshot(&root)
    }
}

fn nest(path: &Path, leaf: Value) -> Value {
    path.features()
        .iter()
        .rev()
        .fold(leaf, |acc, f| Value::Avm(BTreeMap::from([(f.clone(), acc)])))
}

impl Env {
    fn occurs(&self, id: VarId, v: &Value) -> bool {
        match v {
            Value::Var(x) => *x == id || self.binding(*x).is_some_and(|b| self.occurs(id, b)),
            _ => {
                let mut found = false;
                v.for_each_child(|c| found = found || self.occurs(id, c));
                found
            }
        }
    }

    fn bind_checked(&mut self, id: VarId, v: Value) -> Option<()> {
        if self.occurs(id, &v) {
            return None;
        }
        self.bind(id, v);
        Some(())
    }

    pub(crate) fn unify(&mut self, a: &Value, b: &Value) -> Option<Value> {
        let (va, x) = self.deref(a);
        let (vb, y) = self.deref(b);
        if va.is_some() && va == vb {
            return Some(Value::Var(va.unwrap()));
        }
        // Unbound variables take the other side.
        if let Value::Var(p) = x {
            let other = vb.map_or(y, Value::Var);
            self.bind_checked(p, other)?;
            return Some(Value::Var(p));
        }
        if let Value::Var(q) = y {
            let other = va.map_or(x, Value::Var);
            self.bind_checked(q, other)?;
            return Some(Value::Var(q));
        }
        // Both sides are non-variables; merge the two representatives first
        // so that the recursion sees one node.
        let rep = match (va, vb) {
            (Some(p), Some(q)) => {
                self.bind(q, Value::Var(p));
                Some(p)
            }
            (p, q) => p.or(q),
        };
        let merged = match (x, y) {
            (Value::Atom(s), Value::Atom(t)) => {
                if s != t {
                    return None;
                }
                Value::Atom(s)
            }
            (Value::Nil, Value::Nil) => Value::Nil,
            (Value::Avm(m), Value::Avm(n)) => {
                let mut out = m.clone();
                for (feat, nv) in n {
                    let merged = match m.get(&feat) {
                        Some(mv) => self.unify(mv, &nv)?,
                        None => nv,
                    };
                    out.insert(feat, merged);
                }
                Value::Avm(out)
            }
            (Value::Cons(h1, t1), Value::Cons(h2, t2)) => {
                let h = self.unify(&h1, &h2)?;
                let t = self.unify(&t1, &t2)?;
                Value::Cons(Box::new(h), Box::new(t))
            }
            _ => return None,
        };
        match rep {
            Some(p) => {
                self.bind(p, merged);
                Some(Value::Var(p))
            }
            None => Some(merged),
        }
    }
}
