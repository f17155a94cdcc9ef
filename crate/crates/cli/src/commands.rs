use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;
use skg::generate::{generate, generate_shdg, trace, GenConfig, GenOutput, LinkMode, TraceEvent};
use skg::parser::{check_output, parse, roundtrip, tokenize, Verdict};
use skg::sk::{decompose, is_sk, lexically_grounded};
use skg::{FeatureStructure, Grammar, RuleClass};

use crate::report::{Inputs, RunReport, Status};

pub struct Options {
    pub budget: u64,
    pub trace: bool,
    pub derivations: bool,
}

impl Options {
    fn config(&self) -> GenConfig {
        GenConfig {
            trace: self.trace,
            ..GenConfig::with_budget(self.budget)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Skg,
    Shdg,
}

fn report(command: &'static str, inputs: Inputs, outputs: impl Serialize, steps_used: u64, status: Status, text: String) -> RunReport {
    RunReport {
        command,
        inputs,
        outputs: serde_json::to_value(outputs).expect("payload serializes"),
        steps_used,
        status,
        text,
    }
}

fn status_of(exhausted: bool, ok: bool) -> Status {
    if exhausted {
        Status::BudgetExhausted
    } else if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

#[derive(Serialize)]
struct RuleRow {
    id: String,
    class: String,
    head: usize,
    mother: String,
    daughters: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nonsk_path: Option<String>,
}

pub fn check(g: &Grammar, inputs: Inputs) -> RunReport {
    let cat = |c: Option<&str>| c.unwrap_or("_").to_string();
    let rows: Vec<RuleRow> = g
        .rules
        .iter()
        .map(|r| RuleRow {
            id: r.id.clone(),
            class: r.class.to_string(),
            head: r.head + 1,
            mother: cat(r.mother_cat()),
            daughters: (0..r.arity).map(|i| cat(r.daughter_cat(i))).collect(),
            nonsk_path: r.nonsk_path.as_ref().map(ToString::to_string),
        })
        .collect();
    let mut by_cat: BTreeMap<&str, usize> = BTreeMap::new();
    for e in &g.lexicon {
        *by_cat.entry(e.cat()).or_default() += 1;
    }
    let mut warnings = Vec::new();
    if g.nonsk_paths.is_empty() {
        warnings.push("no nonsk declaration: all rules are SK".to_string());
    }
    let nonsk_paths: Vec<String> = g.nonsk_paths.iter().map(ToString::to_string).collect();

    let mut text = String::new();
    for r in &rows {
        let path = r.nonsk_path.as_deref().map(|p| format!("  [{p}]")).unwrap_or_default();
        let _ = writeln!(text, "rule {:<3} {:<5} head {}  {} -> {}{path}", r.id, r.class, r.head, r.mother, r.daughters.join(" "));
    }
    let count = |c: RuleClass| g.rules.iter().filter(|r| r.class == c).count();
    let _ = writeln!(text, "{} rules, {} sk, {} nonsk", rows.len(), count(RuleClass::Sk), count(RuleClass::NonSk));
    let listed = if nonsk_paths.is_empty() { "none".to_string() } else { nonsk_paths.join(", ") };
    let _ = writeln!(text, "nonsk paths: {listed}");
    let _ = writeln!(text, "start: {}", g.start);
    let pairs: Vec<String> = g.link.pairs.iter().filter(|(a, b)| a != b).map(|(a, b)| format!("{a}>{b}")).collect();
    let _ = writeln!(text, "link: {}", pairs.join(" "));
    let lex: Vec<String> = by_cat.iter().map(|(c, n)| format!("{c} {n}")).collect();
    let _ = writeln!(text, "lexicon: {} entries ({})", g.lexicon.len(), lex.join(", "));
    for w in &warnings {
        let _ = writeln!(text, "warning: {w}");
    }

    let outputs = json!({
        "rules": rows,
        "nonsk_paths": nonsk_paths,
        "start": g.start,
        "link": g.link.pairs,
        "lexicon": { "entries": g.lexicon.len(), "by_category": by_cat },
        "warnings": warnings,
    });
    report("check", inputs, outputs, 0, Status::Pass, text)
}

#[derive(Serialize)]
struct OutputRow {
    surface: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    derivation: Option<String>,
}

#[derive(Serialize)]
struct PartialRow {
    surface: String,
    failures: Vec<&'static str>,
}

fn output_rows(outputs: &[GenOutput], opts: &Options) -> Vec<OutputRow> {
    outputs
        .iter()
        .map(|o| OutputRow {
            surface: o.surface.clone(),
            derivation: opts.derivations.then(|| o.derivation.to_string()),
        })
        .collect()
}

fn append_details(text: &mut String, outputs: &[GenOutput], events: &[TraceEvent], opts: &Options) {
    if opts.derivations {
        for o in outputs {
            let _ = write!(text, "\n{}", o.derivation.pretty());
        }
    }
    if opts.trace {
        let _ = write!(text, "\n{}", trace(events));
    }
}

fn with_trace(mut outputs: serde_json::Value, events: &[TraceEvent], opts: &Options) -> serde_json::Value {
    if opts.trace {
        let text = trace(events);
        outputs["trace"] = json!(text.lines().collect::<Vec<_>>());
    }
    outputs
}

pub fn generate_cmd(g: &Grammar, goal: &FeatureStructure, algo: Algo, link: LinkMode, opts: &Options, inputs: Inputs) -> skg::Result<RunReport> {
    let cfg = opts.config();
    let mut text = String::new();
    match algo {
        Algo::Skg => {
            let r = generate(g, goal, &cfg)?;
            for o in &r.outputs {
                let _ = writeln!(text, "{}", o.surface);
            }
            append_details(&mut text, &r.outputs, &r.trace, opts);
            let outputs = json!({ "outputs": output_rows(&r.outputs, opts) });
            let outputs = with_trace(outputs, &r.trace, opts);
            let status = status_of(r.exhausted_budget, !r.outputs.is_empty());
            Ok(report("generate", inputs, outputs, r.steps_used, status, text))
        }
        Algo::Shdg => {
            let r = generate_shdg(g, goal, link, &cfg)?;
            for o in &r.outputs {
                let _ = writeln!(text, "{}", o.surface);
            }
            for p in &r.partial_outputs {
                let _ = writeln!(text, "% {} ({})", p.output.surface, p.verdict.failures().join(", "));
            }
            append_details(&mut text, &r.outputs, &r.trace, opts);
            let partial: Vec<PartialRow> = r
                .partial_outputs
                .iter()
                .map(|p| PartialRow {
                    surface: p.output.surface.clone(),
                    failures: p.verdict.failures(),
                })
                .collect();
            let outputs = json!({
                "outputs": output_rows(&r.outputs, opts),
                "partial_outputs": partial,
                "depth_reached": r.depth_reached,
            });
            let outputs = with_trace(outputs, &r.trace, opts);
            let status = status_of(r.exhausted_budget, !r.outputs.is_empty());
            Ok(report("generate", inputs, outputs, r.steps_used, status, text))
        }
    }
}

pub fn parse_cmd(g: &Grammar, sentence: &str, root: Option<&str>, opts: &Options, inputs: Inputs) -> skg::Result<RunReport> {
    let r = parse(g, &tokenize(sentence), root, &opts.config())?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for a in &r.analyses {
        let _ = writeln!(text, "{}", a.semantics);
        if opts.derivations {
            let _ = writeln!(text, "{}", a.derivation.pretty());
        }
        rows.push(json!({
            "semantics": a.semantics.to_string(),
            "derivation": a.derivation.to_string(),
        }));
    }
    let status = status_of(r.exhausted_budget, !r.analyses.is_empty());
    Ok(report("parse", inputs, json!({ "analyses": rows }), r.steps_used, status, text))
}

fn verdict_line(v: &Verdict) -> String {
    let failures = v.failures();
    if failures.is_empty() {
        format!("pass  {}", v.surface)
    } else {
        format!("fail  {}  ({})", v.surface, failures.join(", "))
    }
}

pub fn roundtrip_cmd(g: &Grammar, goal: &FeatureStructure, opts: &Options, inputs: Inputs) -> skg::Result<RunReport> {
    let r = roundtrip(g, goal, &opts.config())?;
    let passed = r.verdicts.iter().filter(|v| v.pass).count();
    let mut text = String::new();
    for v in &r.verdicts {
        let _ = writeln!(text, "{}", verdict_line(v));
    }
    let _ = write!(text, "{passed}/{} outputs pass", r.verdicts.len());
    if let Some(reason) = &r.reason {
        let _ = write!(text, " ({reason})");
    }
    text.push('\n');
    let rows: Vec<_> = r
        .verdicts
        .iter()
        .map(|v| json!({ "surface": v.surface, "coherent": v.coherent, "complete": v.complete, "pass": v.pass }))
        .collect();
    let outputs = json!({ "verdicts": rows, "passed": passed, "total": r.verdicts.len(), "reason": r.reason });
    let status = status_of(r.exhausted_budget, r.pass);
    Ok(report("roundtrip", inputs, outputs, r.steps_used, status, text))
}

#[derive(Serialize)]
struct CompareRow {
    algorithm: String,
    terminated: bool,
    outputs: Vec<String>,
    coherent: usize,
    complete: usize,
    partial_outputs: Vec<PartialRow>,
    steps_used: u64,
}

pub fn compare_cmd(g: &Grammar, goal: &FeatureStructure, opts: &Options, inputs: Inputs) -> skg::Result<RunReport> {
    let cfg = opts.config();
    let check_cfg = GenConfig::default();
    let root = goal.atom_at(&"cat".parse().expect("feature name")).unwrap_or(&g.start).to_string();
    let sem = goal.get(&"sem".parse().expect("feature name")).unwrap_or_else(FeatureStructure::unbound);

    let r = generate(g, goal, &cfg)?;
    let mut verdicts = Vec::new();
    for o in &r.outputs {
        verdicts.push(check_output(g, &o.surface, &root, &sem, &check_cfg)?);
    }
    let mut rows = vec![CompareRow {
        algorithm: "skg".into(),
        terminated: !r.exhausted_budget,
        outputs: r.outputs.iter().map(|o| o.surface.clone()).collect(),
        coherent: verdicts.iter().filter(|v| v.coherent).count(),
        complete: verdicts.iter().filter(|v| v.complete).count(),
        partial_outputs: Vec::new(),
        steps_used: r.steps_used,
    }];
    let skg_status = status_of(r.exhausted_budget, !r.outputs.is_empty());
    let mut steps = r.steps_used;

    for mode in [LinkMode::Unify, LinkMode::Substructure] {
        let b = generate_shdg(g, goal, mode, &cfg)?;
        let all: Vec<&Verdict> = b.partial_outputs.iter().map(|p| &p.verdict).collect();
        rows.push(CompareRow {
            algorithm: format!("shdg-{mode}"),
            terminated: !b.exhausted_budget,
            outputs: b.outputs.iter().map(|o| o.surface.clone()).collect(),
            coherent: b.outputs.len() + all.iter().filter(|v| v.coherent).count(),
            complete: b.outputs.len() + all.iter().filter(|v| v.complete).count(),
            partial_outputs: b
                .partial_outputs
                .iter()
                .map(|p| PartialRow {
                    surface: p.output.surface.clone(),
                    failures: p.verdict.failures(),
                })
                .collect(),
            steps_used: b.steps_used,
        });
        steps += b.steps_used;
    }

    let mut text = String::new();
    for row in &rows {
        let state = if row.terminated { "terminated" } else { "budget-exhausted" };
        let _ = writeln!(
            text,
            "{}: {state}, {} output(s), {} coherent, {} complete, {} steps",
            row.algorithm,
            row.outputs.len(),
            row.coherent,
            row.complete,
            row.steps_used
        );
        for o in &row.outputs {
            let _ = writeln!(text, "  {o}");
        }
        for p in &row.partial_outputs {
            let _ = writeln!(text, "  % {} ({})", p.surface, p.failures.join(", "));
        }
    }
    Ok(report("compare", inputs, json!({ "algorithms": rows }), steps, skg_status, text))
}

pub fn analyze_cmd(g: &Grammar, sem: &FeatureStructure, inputs: Inputs) -> skg::Result<RunReport> {
    let d = decompose(sem, g)?;
    let sk = is_sk(sem, g);
    let grounded = lexically_grounded(&d.kernel, g);
    let mut text = String::new();
    let _ = writeln!(text, "semantic kernel: {}", d.kernel);
    for (path, item) in &d.nonsk_items {
        let _ = writeln!(text, "nonsk {path}: {item}");
    }
    let _ = writeln!(text, "is_sk: {sk}");
    let _ = writeln!(text, "kernel lexically grounded: {grounded}");
    let items: Vec<_> = d
        .nonsk_items
        .iter()
        .map(|(p, v)| json!({ "path": p.to_string(), "value": v.to_string() }))
        .collect();
    let outputs = json!({
        "kernel": d.kernel.to_string(),
        "nonsk_items": items,
        "is_sk": sk,
        "grounded": grounded,
    });
    Ok(report("analyze", inputs, outputs, 0, Status::Pass, text))
}
