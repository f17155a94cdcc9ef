use super::engine::{Engine, Policy, Solution};
use super::{cat_path, sem_of, GenConfig, GenOutput, GenResult};
use crate::avm::FeatureStructure;
use crate::error::{Error, Result};
use crate::grammar::{Grammar, Rule, Slot};
use crate::sk::is_sk;

pub(crate) fn check_goal(goal: &FeatureStructure) -> Result<()> {
    match goal.atom_at(&cat_path()) {
        Some(_) => Ok(()),
        None => Err(Error::MissingCategory),
    }
}

pub(crate) fn collect(sols: Vec<Solution>, max: Option<usize>) -> Vec<GenOutput> {
    let mut out: Vec<GenOutput> = Vec::new();
    for s in sols {
        if out.iter().any(|o| o.derivation == s.deriv) {
            continue;
        }
        out.push(GenOutput {
            surface: s.deriv.surface(),
            derivation: s.deriv,
            description: s.desc,
        });
        if max.is_some_and(|m| out.len() >= m) {
            break;
        }
    }
    out
}

/// Generates every string the grammar licenses for `goal`.
///
/// Kernel goals are realized head-corner style: a lexical entry carrying
/// only kernel information of the goal becomes the pivot and kernel rules
/// are completed bottom-up until the pivot meets the goal. Goals with
/// non-kernel information are expanded top-down with a non-kernel rule that
/// consumes the first element of a non-kernel list.
///
/// ```
/// use skg::generate::{generate, GenConfig};
/// use skg::Grammar;
///
/// let g = Grammar::bundled();
/// let goal = "[cat: np, sem: [rel: sentence, def: +, mod: <complex>]]".parse().unwrap();
/// let r = generate(&g, &goal, &GenConfig::default()).unwrap();
/// assert_eq!(r.surfaces(), ["the complex sentence"]);
/// ```
pub fn generate(g: &Grammar, goal: &FeatureStructure, cfg: &GenConfig) -> Result<GenResult> {
    check_goal(goal)?;
    let mut e = Engine::new(g, cfg, Policy::Skg);
    let sols = e.solve(goal, 0);
    Ok(GenResult {
        outputs: collect(sols, cfg.max_results),
        steps_used: e.steps,
        exhausted_budget: e.exhausted,
        depth_cutoff: e.cut,
        trace: e.events,
    })
}

/// The top-down expansions available for a goal carrying non-kernel
/// information, with the instantiated subgoals in daughter order. Empty for
/// kernel goals.
pub fn nonsk_expansions<'g>(g: &'g Grammar, goal: &FeatureStructure) -> Vec<(&'g Rule, Vec<FeatureStructure>)> {
    if is_sk(&sem_of(goal), g) {
        return Vec::new();
    }
    let cfg = GenConfig::default();
    let mut e = Engine::new(g, &cfg, Policy::Skg);
    e.expansions(goal)
        .into_iter()
        .map(|(r, inst)| {
            let subgoals = (0..r.arity).map(|i| r.part(&inst, Slot::Daughter(i))).collect();
            (r, subgoals)
        })
        .collect()
}
