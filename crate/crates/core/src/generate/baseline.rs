use std::fmt;
use std::str::FromStr;

use super::engine::{Engine, Policy};
use super::skg::{check_goal, collect};
use super::{cat_path, sem_of, GenConfig, GenOutput, TraceEvent};
use crate::avm::FeatureStructure;
use crate::error::Result;
use crate::grammar::Grammar;
use crate::parser::{check_output, Verdict};

/// How a lexical entry's semantics must relate to the goal's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LinkMode {
    /// The entry's semantics unifies with the goal's.
    Unify,
    /// The entry's semantics unifies with some substructure of the goal's.
    Substructure,
}

impl fmt::Display for LinkMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinkMode::Unify => "unify",
            LinkMode::Substructure => "substructure",
        })
    }
}

impl FromStr for LinkMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "unify" => Ok(LinkMode::Unify),
            "substructure" => Ok(LinkMode::Substructure),
            _ => Err(format!("unknown link mode '{s}'")),
        }
    }
}

pub fn semantic_link(mode: LinkMode, goal_sem: &FeatureStructure, entry_sem: &FeatureStructure) -> bool {
    match mode {
        LinkMode::Unify => goal_sem.unify(entry_sem).is_some(),
        LinkMode::Substructure => goal_sem.substructures().iter().any(|m| m.unify(entry_sem).is_some()),
    }
}

/// An output that fails the round-trip check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialOutput {
    pub output: GenOutput,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BaselineResult {
    /// Outputs that are coherent and complete.
    pub outputs: Vec<GenOutput>,
    /// Outputs flagged by the round-trip check.
    pub partial_outputs: Vec<PartialOutput>,
    pub steps_used: u64,
    pub exhausted_budget: bool,
    /// The deepest search bound that was completed or started.
    pub depth_reached: usize,
    pub trace: Vec<TraceEvent>,
}

impl BaselineResult {
    pub fn surfaces(&self) -> Vec<&str> {
        self.outputs.iter().map(|o| o.surface.as_str()).collect()
    }
}

/// Plain head-corner generation without kernel gating: every rule may be
/// completed bottom-up from the pivot.
///
/// The search is depth-first under an increasing depth bound, so strings
/// with short derivations are found even when deeper branches never end.
/// Found strings are parsed back and split into passing and flagged outputs.
pub fn generate_shdg(g: &Grammar, goal: &FeatureStructure, mode: LinkMode, cfg: &GenConfig) -> Result<BaselineResult> {
    check_goal(goal)?;
    let mut e = Engine::new(g, cfg, Policy::Shdg(mode));
    let mut sols = Vec::new();
    let mut bound = 1;
    loop {
        e.bound = bound;
        e.cut = false;
        sols.extend(e.solve(goal, 0));
        if e.exhausted || !e.cut || bound >= cfg.max_depth {
            break;
        }
        bound += 1;
    }
    let found = collect(sols, cfg.max_results);
    let root = goal.atom_at(&cat_path()).unwrap_or(&g.start).to_string();
    let input = sem_of(goal);
    let check_cfg = GenConfig::default();
    let mut result = BaselineResult {
        steps_used: e.steps,
        exhausted_budget: e.exhausted,
        depth_reached: bound,
        trace: e.events,
        ..BaselineResult::default()
    };
    for o in found {
        let verdict = check_output(g, &o.surface, &root, &input, &check_cfg)?;
        if verdict.pass {
            result.outputs.push(o);
        } else {
            result.partial_outputs.push(PartialOutput { output: o, verdict });
        }
    }
    Ok(result)
}
