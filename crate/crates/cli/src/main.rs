mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use skg::generate::LinkMode;
use skg::{load_grammar, FeatureStructure, Grammar, Path};

use commands::{Algo, Options};
use report::{Inputs, RunReport};

const INPUT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "skg", version, about = "Generate sentences from semantics with a unification grammar")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Grammar file; the bundled grammar when omitted.
    #[arg(long, global = true)]
    grammar: Option<PathBuf>,
    /// Step budget for generation and parsing.
    #[arg(long, global = true, env = "SKG_BUDGET", default_value_t = 1_000_000)]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Skg,
    Shdg,
}

#[derive(Clone, Copy, ValueEnum)]
enum LinkArg {
    Unify,
    Substructure,
}

#[derive(Args)]
struct SemArgs {
    /// Semantics file. A description with a cat is used as the goal as is.
    #[arg(long)]
    sem: PathBuf,
    /// Category for semantics without a cat; the grammar's start category by default.
    #[arg(long)]
    root: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a grammar and print its rules, links and lexicon.
    Check,
    /// Generate sentences for a semantics.
    Generate {
        #[command(flatten)]
        sem: SemArgs,
        #[arg(long, value_enum, default_value_t = AlgoArg::Skg)]
        algo: AlgoArg,
        /// Semantic link test of the baseline generator.
        #[arg(long, value_enum, default_value_t = LinkArg::Unify)]
        link: LinkArg,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        derivations: bool,
    },
    /// Parse a sentence and print the semantics of each analysis.
    Parse {
        sentence: String,
        #[arg(long)]
        root: Option<String>,
        #[arg(long)]
        derivations: bool,
    },
    /// Generate, parse every output back and check it against the input.
    Roundtrip {
        #[command(flatten)]
        sem: SemArgs,
    },
    /// Run both generators under the same budget and tabulate the results.
    Compare {
        #[command(flatten)]
        sem: SemArgs,
    },
    /// Split a semantics into its kernel and non-kernel items.
    Analyze {
        #[command(flatten)]
        sem: SemArgs,
    },
}

struct InputError(String);

impl From<skg::Error> for InputError {
    fn from(e: skg::Error) -> Self {
        InputError(e.to_string())
    }
}

fn load(path: &Option<PathBuf>) -> Result<(Grammar, String), InputError> {
    match path {
        None => Ok((Grammar::bundled(), "<bundled>".into())),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| InputError(format!("{}: {e}", p.display())))?;
            let g = load_grammar(&text).map_err(|e| InputError(format!("{}: {e}", p.display())))?;
            Ok((g, p.display().to_string()))
        }
    }
}

/// Reads a semantics file as a generation goal.
fn goal(g: &Grammar, args: &SemArgs) -> Result<FeatureStructure, InputError> {
    let p = &args.sem;
    let text = std::fs::read_to_string(p).map_err(|e| InputError(format!("{}: {e}", p.display())))?;
    let fs: FeatureStructure = text.parse().map_err(|e: skg::Error| InputError(format!("{}: {e}", p.display())))?;
    if fs.atom_at(&Path(vec!["cat".into()])).is_some() {
        return Ok(fs);
    }
    let root = args.root.as_deref().unwrap_or(&g.start);
    Ok(format!("[cat: {root}, sem: {fs}]").parse()?)
}

fn run(cli: &Cli) -> Result<RunReport, InputError> {
    let (g, grammar) = load(&cli.common.grammar)?;
    let budget = cli.common.budget;
    let mut inputs = Inputs {
        grammar,
        ..Inputs::default()
    };
    let plain = Options {
        budget,
        trace: false,
        derivations: false,
    };
    let with_sem = |inputs: &mut Inputs, s: &SemArgs| {
        inputs.sem = Some(s.sem.display().to_string());
        inputs.root = s.root.clone();
        inputs.budget = Some(budget);
    };
    let report = match &cli.command {
        Command::Check => commands::check(&g, inputs),
        Command::Generate {
            sem,
            algo,
            link,
            trace,
            derivations,
        } => {
            let goal = goal(&g, sem)?;
            with_sem(&mut inputs, sem);
            let algo = match algo {
                AlgoArg::Skg => Algo::Skg,
                AlgoArg::Shdg => Algo::Shdg,
            };
            let link = match link {
                LinkArg::Unify => LinkMode::Unify,
                LinkArg::Substructure => LinkMode::Substructure,
            };
            inputs.algo = Some(if algo == Algo::Skg { "skg" } else { "shdg" }.into());
            if algo == Algo::Shdg {
                inputs.link = Some(link.to_string());
            }
            let opts = Options {
                budget,
                trace: *trace,
                derivations: *derivations,
            };
            commands::generate_cmd(&g, &goal, algo, link, &opts, inputs)?
        }
        Command::Parse { sentence, root, derivations } => {
            inputs.sentence = Some(sentence.clone());
            inputs.root = root.clone();
            inputs.budget = Some(budget);
            let opts = Options {
                derivations: *derivations,
                ..plain
            };
            commands::parse_cmd(&g, sentence, root.as_deref(), &opts, inputs)?
        }
        Command::Roundtrip { sem } => {
            let goal = goal(&g, sem)?;
            with_sem(&mut inputs, sem);
            commands::roundtrip_cmd(&g, &goal, &plain, inputs)?
        }
        Command::Compare { sem } => {
            let goal = goal(&g, sem)?;
            with_sem(&mut inputs, sem);
            commands::compare_cmd(&g, &goal, &plain, inputs)?
        }
        Command::Analyze { sem } => {
            let goal = goal(&g, sem)?;
            with_sem(&mut inputs, sem);
            inputs.budget = None;
            let s = goal.get(&Path(vec!["sem".into()])).unwrap_or_else(FeatureStructure::unbound);
            commands::analyze_cmd(&g, &s, inputs)?
        }
    };
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { INPUT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(report) => {
            match cli.common.format {
                Format::Text => {
                    print!("{}", report.text);
                    eprintln!("status: {} ({} steps)", report.status.name(), report.steps_used);
                }
                Format::Json => print!("{}", report.json()),
            }
            ExitCode::from(report.status.exit_code())
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
