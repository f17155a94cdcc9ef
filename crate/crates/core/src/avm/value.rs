use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

/// Identifier of a reentrancy tag or an unbound variable.
pub type VarId = u32;

/// A node of an attribute-value structure.
///
/// Lists are cons cells so that head/tail patterns such as `<M | Mods>` can be
/// expressed directly. Sharing between two positions is only ever expressed
/// through a [`Value::Var`] whose binding lives in the owning
/// [`FeatureStructure`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Atom(String),
    Avm(BTreeMap<String, Value>),
    Nil,
    Cons(Box<Value>, Box<Value>),
    Var(VarId),
}

impl Value {
    pub fn atom(s: impl Into<String>) -> Value {
        Value::Atom(s.into())
    }

    /// Builds a list from `items`, ending in `tail` (use [`Value::Nil`] for a
    /// closed list).
    pub fn list(items: impl IntoIterator<Item = Value>, tail: Value) -> Value {
        let items: Vec<Value> = items.into_iter().collect();
        items
            .into_iter()
            .rev()
            .fold(tail, |acc, v| Value::Cons(Box::new(v), Box::new(acc)))
    }

    pub fn is_compound(&self) -> bool {
        matches!(self, Value::Avm(_) | Value::Cons(..))
    }

    pub(crate) fn for_each_child(&self, mut f: impl FnMut(&Value)) {
        match self {
            Value::Avm(m) => m.values().for_each(f),
            Value::Cons(h, t) => {
                f(h);
                f(t);
            }
            _ => {}
        }
    }

    fn map_vars(&self, f: &impl Fn(VarId) -> VarId) -> Value {
        match self {
            Value::Var(v) => Value::Var(f(*v)),
            Value::Avm(m) => Value::Avm(m.iter().map(|(k, v)| (k.clone(), v.map_vars(f))).collect()),
            Value::Cons(h, t) => Value::Cons(Box::new(h.map_vars(f)), Box::new(t.map_vars(f))),
            other => other.clone(),
        }
    }
}

/// A sequence of feature names addressing a position; the empty path is the
/// root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(pub Vec<String>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn features(&self) -> &[String] {
        &self.0
    }

    pub fn child(&self, feature: impl Into<String>) -> Path {
        let mut p = self.0.clone();
        p.push(feature.into());
        Path(p)
    }

    pub fn join(&self, other: &Path) -> Path {
        Path(self.0.iter().chain(other.0.iter()).cloned().collect())
    }

    /// Splits off the last feature.
    pub fn split_last(&self) -> Option<(Path, &str)> {
        let (last, init) = self.0.split_last()?;
        Some((Path(init.to_vec()), last.as_str()))
    }

    pub fn starts_with(&self, prefix: &Path) -> bool {
        self.0.starts_with(&prefix.0)
    }

    pub fn strip_prefix(&self, prefix: &Path) -> Option<Path> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|s| Path(s.to_vec()))
    }
}

impl<S: Into<String>> FromIterator<S> for Path {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Path(iter.into_iter().map(Into::into).collect())
    }
}

impl FromStr for Path {
    type Err = std::convert::Infallible;

    /// Parses a dotted path such as `arg1.rel`; the empty string is the root.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Ok(Path::root());
        }
        Ok(s.split('.').collect())
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join("."))
    }
}

/// A rooted, acyclic attribute-value structure with reentrancy.
///
/// Values of this type are always kept in normal form:
///
/// * every bound variable that is referenced from one position only, or that
///   is bound to an atom or the empty list, is inlined;
/// * the remaining variables (shared nodes and unbound variables) are
///   renumbered `0..n` in depth-first order from the root, visiting features
///   in lexical order and list heads before tails;
/// * `bindings` maps exactly the shared compound nodes to their values.
///
/// Structural equality on normal forms is therefore equality up to renaming
/// of tags.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureStructure {
    pub(crate) root: Value,
    pub(crate) bindings: BTreeMap<VarId, Value>,
}

impl FeatureStructure {
    /// Normalizes `root` against `bindings`. Returns `None` if the structure is
    /// cyclic.
    pub fn from_parts(root: Value, bindings: BTreeMap<VarId, Value>) -> Option<FeatureStructure> {
        normalize(&root, |v| bindings.get(&v))
    }

    pub fn atom(s: impl Into<String>) -> FeatureStructure {
        FeatureStructure {
            root: Value::atom(s),
            bindings: BTreeMap::new(),
        }
    }

    /// The empty feature structure `[]`.
    pub fn empty_avm() -> FeatureStructure {
        FeatureStructure {
            root: Value::Avm(BTreeMap::new()),
            bindings: BTreeMap::new(),
        }
    }

    /// A single unbound variable: the least informative structure.
    pub fn unbound() -> FeatureStructure {
        FeatureStructure {
            root: Value::Var(0),
            bindings: BTreeMap::new(),
        }
    }

    pub fn root(&self) -> &Value {
        &self.root
    }

    pub fn bindings(&self) -> &BTreeMap<VarId, Value> {
        &self.bindings
    }

    /// Follows a tag to its value. Unbound variables dereference to
    /// themselves.
    pub fn deref<'a>(&'a self, v: &'a Value) -> &'a Value {
        match v {
            Value::Var(id) => self.bindings.get(id).unwrap_or(v),
            _ => v,
        }
    }

    /// The dereferenced value at `path`, or `None` if a feature is missing.
    pub fn value_at(&self, path: &Path) -> Option<&Value> {
        let mut cur = self.deref(&self.root);
        for feat in path.features() {
            match cur {
                Value::Avm(m) => cur = self.deref(m.get(feat)?),
                _ => return None,
            }
        }
        Some(cur)
    }

    /// The substructure at `path`, re-rooted and normalized.
    pub fn get(&self, path: &Path) -> Option<FeatureStructure> {
        let v = self.value_at(path)?.clone();
        self.rerooted(&v)
    }

    /// The atom at `path`, if there is one.
    pub fn atom_at(&self, path: &Path) -> Option<&str> {
        match self.value_at(path)? {
            Value::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_unbound(&self) -> bool {
        matches!(self.deref(&self.root), Value::Var(_))
    }

    /// Re-roots this structure at `v`, which must be a value from within it.
    pub(crate) fn rerooted(&self, v: &Value) -> Option<FeatureStructure> {
        normalize(v, |id| self.bindings.get(&id))
    }

    /// Splits a (dereferenced) list value into its items and tail.
    pub fn list_items<'a>(&'a self, v: &'a Value) -> Option<(Vec<&'a Value>, ListTail)> {
        let mut items = Vec::new();
        let mut cur = self.deref(v);
        loop {
            match cur {
                Value::Nil => return Some((items, ListTail::Closed)),
                Value::Cons(h, t) => {
                    items.push(h.as_ref());
                    cur = self.deref(t);
                }
                Value::Var(id) => return Some((items, ListTail::Open(*id))),
                _ => return None,
            }
        }
    }

    /// Replaces the value at `path` by `replacement` (no unification). The
    /// path must exist.
    pub fn replace_at(&self, path: &Path, replacement: &FeatureStructure) -> Option<FeatureStructure> {
        let mut env = Env::default();
        let root = env.import(self);
        let rep = env.import(replacement);
        let root = env.replace(&root, path.features(), rep)?;
        env.snapshot(&root)
    }

    /// Builds `[p1: [p2: ... value]]`.
    pub fn at_path(path: &Path, value: &FeatureStructure) -> FeatureStructure {
        let root = path
            .features()
            .iter()
            .rev()
            .fold(value.root.clone(), |acc, f| Value::Avm(BTreeMap::from([(f.clone(), acc)])));
        FeatureStructure {
            root,
            bindings: value.bindings.clone(),
        }
        .renormalized()
    }

    fn renormalized(&self) -> FeatureStructure {
        normalize(&self.root, |id| self.bindings.get(&id)).expect("acyclic input stays acyclic")
    }

    /// Number of distinct nodes reachable from the root.
    pub fn node_count(&self) -> usize {
        fn walk(fs: &FeatureStructure, v: &Value, seen: &mut Vec<VarId>) -> usize {
            if let Value::Var(id) = v {
                if seen.contains(id) {
                    return 0;
                }
                seen.push(*id);
                return match fs.bindings.get(id) {
                    Some(b) => walk(fs, b, seen),
                    None => 1,
                };
            }
            let mut n = 1;
            v.for_each_child(|c| n += walk(fs, c, seen));
            n
        }
        walk(self, &self.root, &mut Vec::new())
    }
}

/// How a list ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ListTail {
    Closed,
    Open(VarId),
}

/// Mutable working store of variable bindings used while unifying.
#[derive(Clone, Debug, Default)]
pub(crate) struct Env {
    pub(crate) slots: Vec<Option<Value>>,
}

impl Env {
    pub(crate) fn fresh(&mut self) -> VarId {
        self.slots.push(None);
        (self.slots.len() - 1) as VarId
    }

    /// Copies `fs` into this environment with fresh variables and returns
    /// the translated root.
    pub(crate) fn import(&mut self, fs: &FeatureStructure) -> Value {
        let offset = self.slots.len() as VarId;
        let count = fs.var_count();
        self.slots.resize(self.slots.len() + count as usize, None);
        let shift = |v: VarId| v + offset;
        for (id, val) in &fs.bindings {
            self.slots[(id + offset) as usize] = Some(val.map_vars(&shift));
        }
        fs.root.map_vars(&shift)
    }

    pub(crate) fn binding(&self, id: VarId) -> Option<&Value> {
        self.slots.get(id as usize).and_then(Option::as_ref)
    }

    pub(crate) fn bind(&mut self, id: VarId, v: Value) {
        self.slots[id as usize] = Some(v);
    }

    /// Follows variable chains. Returns the last variable on the chain (the
    /// representative) and the value it stands for; an unbound
    /// representative is returned as `Value::Var`.
    pub(crate) fn deref(&self, v: &Value) -> (Option<VarId>, Value) {
        let mut rep = None;
        let mut cur = v;
        while let Value::Var(id) = cur {
            rep = Some(*id);
            match self.binding(*id) {
                Some(next) => cur = next,
                None => break,
            }
        }
        (rep, cur.clone())
    }

    pub(crate) fn snapshot(&self, root: &Value) -> Option<FeatureStructure> {
        normalize(root, |id| self.binding(id))
    }

    fn replace(&mut self, v: &Value, path: &[String], rep: Value) -> Option<Value> {
        let Some((first, rest)) = path.split_first() else {
            return Some(rep);
        };
        let (var, val) = self.deref(v);
        let Value::Avm(mut m) = val else { return None };
        let child = m.get(first)?.clone();
        let new_child = self.replace(&child, rest, rep)?;
        m.insert(first.clone(), new_child);
        match var {
            Some(id) => {
                self.bind(id, Value::Avm(m));
                Some(Value::Var(id))
            }
            None => Some(Value::Avm(m)),
        }
    }
}

impl FeatureStructure {
    pub(crate) fn var_count(&self) -> VarId {
        fn max_var(v: &Value, acc: &mut Option<VarId>) {
            match v {
                Value::Var(id) => *acc = Some(acc.map_or(*id, |a| a.max(*id))),
                _ => v.for_each_child(|c| max_var(c, acc)),
            }
        }
        let mut acc = None;
        max_var(&self.root, &mut acc);
        for (id, b) in &self.bindings {
            acc = Some(acc.map_or(*id, |a| a.max(*id)));
            max_var(b, &mut acc);
        }
        acc.map_or(0, |a| a + 1)
    }
}

/// Brings a value under `lookup` bindings into normal form.
fn normalize<'a>(root: &Value, lookup: impl Fn(VarId) -> Option<&'a Value>) -> Option<FeatureStructure> {
    // Resolve a variable chain to its representative.
    let resolve = |mut id: VarId| -> (VarId, Option<&'a Value>) {
        loop {
            match lookup(id) {
                Some(Value::Var(next)) => id = *next,
                other => return (id, other),
            }
        }
    };

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }

    // Count references per representative, detecting cycles.
    fn count<'a>(
        v: &Value,
        resolve: &impl Fn(VarId) -> (VarId, Option<&'a Value>),
        refs: &mut HashMap<VarId, usize>,
        marks: &mut HashMap<VarId, Mark>,
    ) -> bool {
        match v {
            Value::Var(id) => {
                let (rep, val) = resolve(*id);
                *refs.entry(rep).or_default() += 1;
                match marks.get(&rep) {
                    Some(Mark::Active) => return false,
                    Some(Mark::Done) => return true,
                    None => {}
                }
                marks.insert(rep, Mark::Active);
                if let Some(b) = val {
                    if !count(b, resolve, refs, marks) {
                        return false;
                    }
                }
                marks.insert(rep, Mark::Done);
                true
            }
            _ => {
                let mut ok = true;
                v.for_each_child(|c| ok = ok && count(c, resolve, refs, marks));
                ok
            }
        }
    }

    struct Rebuild<'r, R> {
        resolve: R,
        refs: &'r HashMap<VarId, usize>,
        names: HashMap<VarId, VarId>,
        bindings: BTreeMap<VarId, Value>,
    }

    impl<'a, R: Fn(VarId) -> (VarId, Option<&'a Value>)> Rebuild<'_, R> {
        fn name(&mut self, rep: VarId) -> (VarId, bool) {
            let n = self.names.len() as VarId;
            let mut fresh = false;
            let id = *self.names.entry(rep).or_insert_with(|| {
                fresh = true;
                n
            });
            (id, fresh)
        }

        fn value(&mut self, v: &Value) -> Value {
            match v {
                Value::Var(id) => {
                    let (rep, val) = (self.resolve)(*id);
                    match val {
                        None => Value::Var(self.name(rep).0),
                        Some(b @ (Value::Atom(_) | Value::Nil)) => b.clone(),
                        Some(b) if self.refs[&rep] == 1 => self.value(b),
                        Some(b) => {
                            let (name, fresh) = self.name(rep);
                            if fresh {
                                let built = self.value(b);
                                self.bindings.insert(name, built);
                            }
                            Value::Var(name)
                        }
                    }
                }
                Value::Avm(m) => Value::Avm(m.iter().map(|(k, c)| (k.clone(), self.value(c))).collect()),
                Value::Cons(h, t) => {
                    let h = self.value(h);
                    let t = self.value(t);
                    Value::Cons(Box::new(h), Box::new(t))
                }
                other => other.clone(),
            }
        }
    }

    let mut refs = HashMap::new();
    if !count(root, &resolve, &mut refs, &mut HashMap::new()) {
        return None;
    }
    let mut rb = Rebuild {
        resolve,
        refs: &refs,
        names: HashMap::new(),
        bindings: BTreeMap::new(),
    };
    let root = rb.value(root);
    Some(FeatureStructure {
        root,
        bindings: rb.bindings,
    })
}
