//! Memoized left-corner parsing, and round-trip checks of generated strings.

use std::collections::{BTreeSet, HashMap};

use crate::avm::FeatureStructure;
use crate::error::{Error, Result};
use crate::generate::{generate, Derivation, GenConfig};
use crate::grammar::{closure, Grammar, Slot, ANY_CAT, CAT};
use crate::sk::nonsk_normalize;

/// One complete analysis of the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub semantics: FeatureStructure,
    pub derivation: Derivation,
    pub description: FeatureStructure,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParseResult {
    pub analyses: Vec<Analysis>,
    pub steps_used: u64,
    pub exhausted_budget: bool,
}

/// Splits on whitespace and lowercases.
pub fn tokenize(sentence: &str) -> Vec<String> {
    sentence.split_whitespace().map(str::to_lowercase).collect()
}

/// Reflexive-transitive closure of mother category over leftmost daughter
/// category.
pub fn left_corner_table(g: &Grammar) -> BTreeSet<(String, String)> {
    let mut cats: BTreeSet<String> = g.link.categories().into_iter().map(str::to_string).collect();
    let mut edges = BTreeSet::new();
    for r in &g.rules {
        let Some(m) = r.mother_cat() else { continue };
        cats.insert(m.to_string());
        edges.insert((m.to_string(), r.daughter_cat(0).unwrap_or(ANY_CAT).to_string()));
    }
    closure(&cats, &edges)
}

type Edge = (usize, FeatureStructure, Derivation);

struct Parser<'g> {
    g: &'g Grammar,
    tokens: Vec<String>,
    lc: BTreeSet<(String, String)>,
    memo: HashMap<(String, usize), Vec<Edge>>,
    steps: u64,
    budget: u64,
    exhausted: bool,
}

impl Parser<'_> {
    fn tick(&mut self) -> bool {
        if self.steps >= self.budget {
            self.exhausted = true;
            return false;
        }
        self.steps += 1;
        true
    }

    fn links(&self, goal: &FeatureStructure, cat: Option<&str>) -> bool {
        let Some(g) = goal.atom_at(&CAT.parse().expect("feature name")) else { return true };
        let c = cat.unwrap_or(ANY_CAT);
        self.lc.contains(&(g.to_string(), c.to_string())) || self.lc.contains(&(g.to_string(), ANY_CAT.to_string()))
    }

    /// Constituents satisfying `goal` that start at `pos`.
    fn parse(&mut self, goal: &FeatureStructure, pos: usize) -> Vec<Edge> {
        let key = (goal.to_string(), pos);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut out = Vec::new();
        if pos < self.tokens.len() {
            let g = self.g;
            let word = self.tokens[pos].clone();
            for e in g.entries_for(&word) {
                if !self.tick() {
                    break;
                }
                if !self.links(goal, Some(e.cat())) {
                    continue;
                }
                let leaf = Derivation::Leaf { surface: e.surface.clone() };
                out.extend(self.climb(goal, pos + 1, e.description.clone(), leaf));
            }
        }
        let mut seen = BTreeSet::new();
        out.retain(|(end, d, t)| seen.insert((*end, d.clone(), t.clone())));
        self.memo.insert(key, out.clone());
        out
    }

    fn climb(&mut self, goal: &FeatureStructure, end: usize, desc: FeatureStructure, deriv: Derivation) -> Vec<Edge> {
        let mut out = Vec::new();
        if let Some(d) = desc.unify(goal) {
            out.push((end, d, deriv.clone()));
        }
        let g = self.g;
        for rule in &g.rules {
            if !self.links(goal, rule.mother_cat()) {
                continue;
            }
            if !self.tick() {
                break;
            }
            let Some(inst) = rule.attach(&rule.template, Slot::Daughter(0), &desc) else { continue };
            let mut partial = vec![(end, inst, vec![deriv.clone()])];
            for k in 1..rule.arity {
                let mut next = Vec::new();
                for (at, inst, derivs) in partial {
                    let sub = rule.part(&inst, Slot::Daughter(k));
                    for (e2, d2, t2) in self.parse(&sub, at) {
                        if let Some(i2) = rule.attach(&inst, Slot::Daughter(k), &d2) {
                            let mut ds = derivs.clone();
                            ds.push(t2);
                            next.push((e2, i2, ds));
                        }
                    }
                }
                partial = next;
            }
            for (at, inst, derivs) in partial {
                let node = Derivation::Node {
                    rule: rule.id.clone(),
                    children: derivs,
                };
                out.extend(self.climb(goal, at, rule.part(&inst, Slot::Mother), node));
            }
        }
        out
    }
}

/// All analyses of `tokens` as a `root` category (the grammar's start
/// category when `None`).
///
/// ```
/// use skg::parser::{parse, tokenize};
/// use skg::generate::GenConfig;
/// use skg::Grammar;
///
/// let g = Grammar::bundled();
/// let r = parse(&g, &tokenize("the complex sentence"), Some("np"), &GenConfig::default()).unwrap();
/// assert_eq!(r.analyses.len(), 1);
/// assert_eq!(r.analyses[0].semantics.to_string(), "[def: +, mod: <complex>, rel: sentence]");
/// ```
pub fn parse(g: &Grammar, tokens: &[String], root: Option<&str>, cfg: &GenConfig) -> Result<ParseResult> {
    if tokens.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(t) = tokens.iter().find(|t| g.entries_for(t).next().is_none()) {
        return Err(Error::UnknownToken(t.clone()));
    }
    let root = root.unwrap_or(&g.start);
    let goal: FeatureStructure = format!("[{CAT}: {root}]").parse()?;
    let mut p = Parser {
        g,
        tokens: tokens.to_vec(),
        lc: left_corner_table(g),
        memo: HashMap::new(),
        steps: 0,
        budget: cfg.step_budget,
        exhausted: false,
    };
    let edges = p.parse(&goal, 0);
    let mut analyses: Vec<Analysis> = Vec::new();
    for (end, desc, deriv) in edges {
        if end != tokens.len() {
            continue;
        }
        let semantics = nonsk_normalize(&crate::generate::sem_of(&desc), g);
        let a = Analysis {
            semantics,
            derivation: deriv,
            description: desc,
        };
        if !analyses.iter().any(|b| b.semantics == a.semantics && b.derivation == a.derivation) {
            analyses.push(a);
        }
    }
    Ok(ParseResult {
        analyses,
        steps_used: p.steps,
        exhausted_budget: p.exhausted,
    })
}

/// Coherence and completeness of one generated string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub surface: String,
    /// Some analysis expresses nothing beyond the input.
    pub coherent: bool,
    /// Some analysis expresses everything in the input.
    pub complete: bool,
    /// Some single analysis is both.
    pub pass: bool,
}

impl Verdict {
    /// Names of the failed checks.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.coherent {
            out.push("incoherent");
        }
        if !self.complete {
            out.push("incomplete");
        }
        if out.is_empty() && !self.pass {
            out.push("no single analysis is coherent and complete");
        }
        out
    }
}

/// Parses `surface` as `root` and compares the analyses with `input`.
pub fn check_output(g: &Grammar, surface: &str, root: &str, input: &FeatureStructure, cfg: &GenConfig) -> Result<Verdict> {
    let input = nonsk_normalize(input, g);
    let r = parse(g, &tokenize(surface), Some(root), cfg)?;
    let mut v = Verdict {
        surface: surface.to_string(),
        coherent: false,
        complete: false,
        pass: false,
    };
    for a in &r.analyses {
        let coherent = a.semantics.subsumes(&input);
        let complete = input.subsumes(&a.semantics);
        v.coherent |= coherent;
        v.complete |= complete;
        v.pass |= coherent && complete;
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTripReport {
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
    /// Why the report fails when no single output is to blame.
    pub reason: Option<String>,
    pub steps_used: u64,
    pub exhausted_budget: bool,
}

/// Generates from `goal`, parses every output and checks it against the
/// goal's semantics.
pub fn roundtrip(g: &Grammar, goal: &FeatureStructure, cfg: &GenConfig) -> Result<RoundTripReport> {
    let r = generate(g, goal, cfg)?;
    let root = goal.atom_at(&CAT.parse().expect("feature name")).unwrap_or(&g.start).to_string();
    let input = crate::generate::sem_of(goal);
    let mut verdicts = Vec::new();
    for o in &r.outputs {
        verdicts.push(check_output(g, &o.surface, &root, &input, cfg)?);
    }
    let reason = if r.exhausted_budget {
        Some("budget-exhausted".to_string())
    } else if verdicts.is_empty() {
        Some("no-output".to_string())
    } else {
        None
    };
    let pass = reason.is_none() && verdicts.iter().all(|v| v.pass);
    Ok(RoundTripReport {
        verdicts,
        pass,
        reason,
        steps_used: r.steps_used,
        exhausted_budget: r.exhausted_budget,
    })
}
