use std::collections::{BTreeSet, HashSet};

use super::baseline::LinkMode;
use super::{cat_path, sem_of, sem_path, Derivation, EventKind, GenConfig, TraceEvent};
use crate::avm::FeatureStructure;
use crate::grammar::{Grammar, Rule, RuleClass, Slot};
use crate::sk::{is_sk, sk_of};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Policy {
    Skg,
    Shdg(LinkMode),
}

#[derive(Clone, Debug)]
pub(crate) struct Solution {
    pub desc: FeatureStructure,
    pub deriv: Derivation,
}

pub(crate) struct Engine<'g> {
    pub g: &'g Grammar,
    pub cfg: GenConfig,
    pub policy: Policy,
    pub steps: u64,
    pub exhausted: bool,
    pub cut: bool,
    pub bound: usize,
    pub events: Vec<TraceEvent>,
    /// Rules that may be expanded top-down on a non-kernel goal without
    /// adding non-kernel information themselves.
    passthrough: HashSet<String>,
}

impl<'g> Engine<'g> {
    pub fn new(g: &'g Grammar, cfg: &GenConfig, policy: Policy) -> Self {
        let hosts = g.nonsk_hosts();
        let passthrough = g
            .rules
            .iter()
            .filter(|r| r.class == RuleClass::Sk)
            .filter(|r| {
                let (Some(m), Some(h)) = (r.mother_cat(), r.daughter_cat(r.head)) else { return false };
                m != h && hosts.iter().any(|c| g.link.links(h, c))
            })
            .map(|r| r.id.clone())
            .collect();
        Engine {
            g,
            cfg: cfg.clone(),
            policy,
            steps: 0,
            exhausted: false,
            cut: false,
            bound: cfg.max_depth,
            events: Vec::new(),
            passthrough,
        }
    }

    fn tick(&mut self) -> bool {
        if self.exhausted || self.steps >= self.cfg.step_budget {
            self.exhausted = true;
            return false;
        }
        self.steps += 1;
        true
    }

    fn event(&mut self, kind: EventKind, label: &str, goal: &FeatureStructure, pivot: Option<&FeatureStructure>, depth: usize) {
        if !self.cfg.trace {
            return;
        }
        let goal_is_sk = is_sk(&sem_of(goal), self.g);
        self.events.push(TraceEvent {
            kind,
            label: label.to_string(),
            goal: goal.to_string(),
            pivot: pivot.map(|p| p.to_string()),
            goal_is_sk,
            depth,
        });
    }

    fn goal_cat<'a>(&self, goal: &'a FeatureStructure) -> Option<&'a str> {
        goal.atom_at(&cat_path())
    }

    /// All solutions of `goal`, each an instantiation of it with a
    /// derivation.
    pub fn solve(&mut self, goal: &FeatureStructure, depth: usize) -> Vec<Solution> {
        if depth > self.bound {
            self.cut = true;
            return Vec::new();
        }
        let out = match self.policy {
            Policy::Skg if !is_sk(&sem_of(goal), self.g) => self.top_down(goal, depth),
            _ => self.lex(goal, depth),
        };
        dedup(out)
    }

    fn lex(&mut self, goal: &FeatureStructure, depth: usize) -> Vec<Solution> {
        let sem = sem_of(goal);
        let mut out = Vec::new();
        for e in self.g.lexical_candidates(goal) {
            if !self.tick() {
                break;
            }
            let esem = e.sem();
            let pivots: Vec<FeatureStructure> = match self.policy {
                Policy::Skg => {
                    if !sk_of(&sem, &esem, self.g) {
                        continue;
                    }
                    e.description.unify_at(&sem_path(), &sem).into_iter().collect()
                }
                Policy::Shdg(LinkMode::Unify) => e.description.unify_at(&sem_path(), &sem).into_iter().collect(),
                Policy::Shdg(LinkMode::Substructure) => {
                    let mut ps = Vec::new();
                    for m in sem.substructures() {
                        if let Some(p) = e.description.unify_at(&sem_path(), &m) {
                            if !ps.contains(&p) {
                                ps.push(p);
                            }
                        }
                    }
                    ps
                }
            };
            for p in pivots {
                self.event(EventKind::Lex, &e.surface, goal, Some(&p), depth);
                let pivot = Solution {
                    desc: p,
                    deriv: Derivation::Leaf {
                        surface: e.surface.clone(),
                    },
                };
                out.extend(self.climb(goal, pivot, depth + 1));
            }
        }
        out
    }

    fn climb(&mut self, goal: &FeatureStructure, pivot: Solution, depth: usize) -> Vec<Solution> {
        if depth > self.bound {
            self.cut = true;
            return Vec::new();
        }
        let mut out = Vec::new();
        if let Some(d) = pivot.desc.unify(goal) {
            self.event(EventKind::LocalSuccess, "", goal, Some(&pivot.desc), depth);
            out.push(Solution {
                desc: d,
                deriv: pivot.deriv.clone(),
            });
        }
        if self.policy == Policy::Skg && !is_sk(&sem_of(&pivot.desc), self.g) {
            return out;
        }
        let gcat = self.goal_cat(goal).map(str::to_string);
        for rule in &self.g.rules {
            if self.policy == Policy::Skg && rule.class == RuleClass::NonSk {
                continue;
            }
            let Some(mcat) = rule.mother_cat() else { continue };
            if gcat.as_deref().is_some_and(|c| !self.g.link.links(c, mcat)) {
                continue;
            }
            if !self.tick() {
                break;
            }
            let Some(inst) = rule.attach(&rule.template, Slot::Daughter(rule.head), &pivot.desc) else { continue };
            self.event(EventKind::HcComplete, &rule.id, goal, Some(&pivot.desc), depth);
            let mut derivs = vec![None; rule.arity];
            derivs[rule.head] = Some(pivot.deriv.clone());
            let order: Vec<usize> = (0..rule.arity).filter(|i| *i != rule.head).collect();
            for (inst, derivs) in self.fill(rule, inst, &order, derivs, depth + 1) {
                let next = Solution {
                    desc: rule.part(&inst, Slot::Mother),
                    deriv: Derivation::Node {
                        rule: rule.id.clone(),
                        children: derivs,
                    },
                };
                out.extend(self.climb(goal, next, depth + 1));
            }
        }
        out
    }

    /// Solves the daughters in `order`, threading each solution into the
    /// rule instance.
    fn fill(
        &mut self,
        rule: &Rule,
        inst: FeatureStructure,
        order: &[usize],
        derivs: Vec<Option<Derivation>>,
        depth: usize,
    ) -> Vec<(FeatureStructure, Vec<Derivation>)> {
        let Some((&k, rest)) = order.split_first() else {
            let done = derivs.into_iter().map(|d| d.expect("every daughter solved")).collect();
            return vec![(inst, done)];
        };
        let goal = rule.part(&inst, Slot::Daughter(k));
        let mut out = Vec::new();
        for s in self.solve(&goal, depth) {
            if self.exhausted {
                break;
            }
            let Some(next) = rule.attach(&inst, Slot::Daughter(k), &s.desc) else { continue };
            let mut d = derivs.clone();
            d[k] = Some(s.deriv);
            out.extend(self.fill(rule, next, rest, d, depth));
        }
        out
    }

    /// Top-down rule instances for a non-kernel goal: non-kernel rules whose
    /// head daughter holds one non-kernel element fewer, and kernel rules that
    /// lead to a category hosting non-kernel rules.
    pub fn expansions(&mut self, goal: &FeatureStructure) -> Vec<(&'g Rule, FeatureStructure)> {
        let mut out = Vec::new();
        for rule in &self.g.rules {
            let nonsk = rule.class == RuleClass::NonSk;
            if !nonsk && !self.passthrough.contains(&rule.id) {
                continue;
            }
            if !self.tick() {
                break;
            }
            let Some(inst) = rule.attach(&rule.template, Slot::Mother, goal) else { continue };
            if nonsk && !sk_progress(rule, &inst) {
                continue;
            }
            out.push((rule, inst));
        }
        out
    }

    fn top_down(&mut self, goal: &FeatureStructure, depth: usize) -> Vec<Solution> {
        let mut out = Vec::new();
        for (rule, inst) in self.expansions(goal) {
            let kind = match rule.class {
                RuleClass::NonSk => EventKind::NonSkExpand,
                RuleClass::Sk => EventKind::SkExpand,
            };
            self.event(kind, &rule.id, goal, None, depth);
            let mut order = vec![rule.head];
            order.extend((0..rule.arity).filter(|i| *i != rule.head));
            for (inst, derivs) in self.fill(rule, inst, &order, vec![None; rule.arity], depth + 1) {
                out.push(Solution {
                    desc: rule.part(&inst, Slot::Mother),
                    deriv: Derivation::Node {
                        rule: rule.id.clone(),
                        children: derivs,
                    },
                });
            }
        }
        out
    }
}

/// The head daughter's list at the rule's non-kernel path is exactly one
/// element shorter than the mother's.
fn sk_progress(rule: &Rule, inst: &FeatureStructure) -> bool {
    let Some(p) = &rule.nonsk_path else { return false };
    let len = |slot: Slot| {
        let at = slot.path().join(p);
        match inst.value_at(&at) {
            None => Some(0),
            Some(v) => inst.list_items(v).map(|(items, _)| items.len()),
        }
    };
    match (len(Slot::Mother), len(Slot::Daughter(rule.head))) {
        (Some(m), Some(h)) => m == h + 1,
        _ => false,
    }
}

fn dedup(sols: Vec<Solution>) -> Vec<Solution> {
    let mut seen = BTreeSet::new();
    sols.into_iter()
        .filter(|s| seen.insert((s.deriv.clone(), s.desc.clone())))
        .collect()
}
