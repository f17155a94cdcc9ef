//! Head-corner generation.
//!
//! [`generate`] is the semantic kernel generator; [`generate_shdg`] is the
//! plain head-corner baseline. Both share one search engine and differ only
//! in when lexical selection, bottom-up rule completion and top-down
//! expansion are allowed.

mod baseline;
mod engine;
mod skg;

use std::fmt;

use crate::avm::{FeatureStructure, Path};
use crate::grammar::{CAT, SEM};

pub use baseline::{generate_shdg, semantic_link, BaselineResult, LinkMode, PartialOutput};
pub use skg::{generate, nonsk_expansions};

/// Search limits and diagnostics switches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    /// Inference attempts allowed (lexical candidates tried plus rule
    /// unifications tried).
    pub step_budget: u64,
    pub max_results: Option<usize>,
    pub trace: bool,
    /// Nesting limit on goals and rule completions.
    pub max_depth: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            step_budget: 1_000_000,
            max_results: None,
            trace: false,
            max_depth: 64,
        }
    }
}

impl GenConfig {
    pub fn with_budget(step_budget: u64) -> Self {
        GenConfig {
            step_budget,
            ..GenConfig::default()
        }
    }
}

/// A derivation tree: rule applications over lexical leaves.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Derivation {
    Leaf { surface: String },
    Node { rule: String, children: Vec<Derivation> },
}

impl Derivation {
    /// Leaf surfaces from left to right.
    pub fn tokens(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Derivation::Leaf { surface } => out.push(surface),
            Derivation::Node { children, .. } => children.iter().for_each(|c| c.collect(out)),
        }
    }

    pub fn surface(&self) -> String {
        self.tokens().join(" ")
    }

    /// Rule ids used, in pre-order.
    pub fn rules(&self) -> Vec<&str> {
        match self {
            Derivation::Leaf { .. } => Vec::new(),
            Derivation::Node { rule, children } => {
                let mut out = vec![rule.as_str()];
                children.iter().for_each(|c| out.extend(c.rules()));
                out
            }
        }
    }

    /// Indented rendering, one node per line.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        self.write_indented(0, &mut out);
        out
    }

    fn write_indented(&self, indent: usize, out: &mut String) {
        out.push_str(&"  ".repeat(indent));
        match self {
            Derivation::Leaf { surface } => {
                out.push('"');
                out.push_str(surface);
                out.push_str("\"\n");
            }
            Derivation::Node { rule, children } => {
                out.push_str(&format!("rule {rule}\n"));
                children.iter().for_each(|c| c.write_indented(indent + 1, out));
            }
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivation::Leaf { surface } => write!(f, "{surface}"),
            Derivation::Node { rule, children } => {
                write!(f, "({rule}")?;
                for c in children {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// One generated string with its derivation and the instantiated goal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenOutput {
    pub surface: String,
    pub derivation: Derivation,
    pub description: FeatureStructure,
}

/// What happened at one point of the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EventKind {
    Lex,
    /// Bottom-up completion of a rule whose head daughter is the pivot.
    HcComplete,
    /// Top-down expansion of a non-kernel rule.
    NonSkExpand,
    /// Top-down expansion of a kernel rule on the way to a non-kernel one.
    SkExpand,
    LocalSuccess,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::Lex => "lex",
            EventKind::HcComplete => "hc_complete",
            EventKind::NonSkExpand => "hc_complete(nonsk)",
            EventKind::SkExpand => "expand(sk)",
            EventKind::LocalSuccess => "local-success",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub kind: EventKind,
    /// Rule id or word.
    pub label: String,
    pub goal: String,
    pub pivot: Option<String>,
    pub goal_is_sk: bool,
    pub depth: usize,
}

/// The result of a generation run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenResult {
    pub outputs: Vec<GenOutput>,
    pub steps_used: u64,
    pub exhausted_budget: bool,
    /// Some branch was cut by the depth limit.
    pub depth_cutoff: bool,
    pub trace: Vec<TraceEvent>,
}

impl GenResult {
    pub fn surfaces(&self) -> Vec<&str> {
        self.outputs.iter().map(|o| o.surface.as_str()).collect()
    }
}

/// Renders the trace of a run as one line per event.
pub fn trace(events: &[TraceEvent]) -> String {
    let mut out = String::new();
    for e in events {
        out.push_str(&"  ".repeat(e.depth.min(40)));
        out.push_str(&e.kind.to_string());
        if !e.label.is_empty() {
            out.push_str(&format!(" {}", e.label));
        }
        out.push_str(&format!(" goal={}", e.goal));
        if let Some(p) = &e.pivot {
            out.push_str(&format!(" pivot={p}"));
        }
        out.push('\n');
    }
    out
}

pub(crate) fn sem_path() -> Path {
    Path(vec![SEM.into()])
}

pub(crate) fn cat_path() -> Path {
    Path(vec![CAT.into()])
}

/// The semantics of a description; a missing `sem` is unconstrained.
pub(crate) fn sem_of(desc: &FeatureStructure) -> FeatureStructure {
    desc.get(&sem_path()).unwrap_or_else(FeatureStructure::unbound)
}
