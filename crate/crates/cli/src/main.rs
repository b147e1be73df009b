use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use stphase_cli::run::validation_record;
use stphase_cli::spec::ProblemSpec;
use stphase_cli::{golden, render_text, run, Number, Report, Task, ValidationError, EXIT_GOLDEN, EXIT_VALIDATION};

#[derive(Parser)]
#[command(name = "stphase", version, about = "Exact stationary-phase invariants of rational functions on the plane")]
struct Cli {
    /// Problem file (JSON or TOML).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Overrides the task of the problem file.
    #[arg(long, global = true, value_enum)]
    task: Option<Task>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    probes: Option<usize>,
    #[arg(long, global = true)]
    degree_cap: Option<u32>,
    /// JSON output (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// One `path: value` line per field of the JSON report.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Exponential factors and ranks of the Fourier transform.
    Fourier(Inline),
    /// Milnor number of P at a point.
    Milnor(Inline),
    /// Newton polygon of P at a point, or Puiseux data in (lambda, g) with --at.
    Polygon(Inline),
    /// Tameness at infinity of the polynomial P.
    Tame(Inline),
    /// Critical values and fiber counts of the polynomial P.
    Bifurcation(Inline),
    /// Betti number and bouquet count of the fiber P = c0.
    Betti(Inline),
    /// Special values at points of indeterminacy.
    Vanishing(Inline),
    /// Pole orders and Stokes directions along a line of the dual plane.
    Irr(Inline),
    /// Runs the golden corpus.
    Golden {
        /// Corpus file; defaults to the shipped corpus.
        corpus: Option<PathBuf>,
    },
}

#[derive(Args, Default)]
struct Inline {
    /// Numerator expression.
    #[arg(long = "p")]
    p: Option<String>,
    /// Denominator expression.
    #[arg(long = "q")]
    q: Option<String>,
    /// Variable names, comma separated.
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    /// Dual point `a/b,c/d`.
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    /// Line direction `a/b,c/d`.
    #[arg(long, visible_alias = "w0", allow_hyphen_values = true)]
    direction: Option<String>,
    /// Line base point `a/b,c/d`.
    #[arg(long, allow_hyphen_values = true)]
    base: Option<String>,
    /// `infinity` or a rational line parameter.
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c0: Option<String>,
    /// Point `a/b,c/d`.
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    /// Curve S for relative tameness.
    #[arg(long = "s")]
    s: Option<String>,
    #[arg(long)]
    mu_s: Option<u64>,
    /// Betti numbers of S as `h1,h2`.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    betti_s: Option<Vec<u64>>,
}

fn pair(text: &Option<String>) -> Result<Option<[Number; 2]>, ValidationError> {
    let Some(t) = text else { return Ok(None) };
    match t.split_once(',') {
        Some((a, b)) => Ok(Some([Number::Text(a.trim().into()), Number::Text(b.trim().into())])),
        None => Err(ValidationError::Format(format!("expected a pair `a,b`, got {t:?}"))),
    }
}

fn build(cli: &Cli, task: Option<Task>, inline: &Inline) -> Result<ProblemSpec, ValidationError> {
    let task = task.or(cli.task);
    let mut spec = match (&cli.input, &inline.p) {
        (Some(path), _) => ProblemSpec::from_path(path)?,
        (None, Some(p)) => ProblemSpec::new(task.unwrap_or(Task::Fourier), p),
        (None, None) => return Err(ValidationError::Format("no problem given: use --input FILE or a task with --p EXPR".into())),
    };
    if let Some(t) = task {
        spec.task = t;
    }
    if let Some(p) = &inline.p {
        spec.p = p.clone();
    }
    if let Some(q) = &inline.q {
        spec.q = q.clone();
    }
    if let Some(v) = &inline.vars {
        spec.vars = v.clone();
    }
    spec.w = pair(&inline.w)?.or(spec.w);
    spec.w0 = pair(&inline.direction)?.or(spec.w0);
    spec.base = pair(&inline.base)?.or(spec.base);
    spec.point = pair(&inline.point)?.or(spec.point);
    spec.at = inline.at.clone().or(spec.at);
    spec.c0 = inline.c0.clone().map(Number::Text).or(spec.c0);
    spec.s = inline.s.clone().or(spec.s);
    spec.mu_s = inline.mu_s.or(spec.mu_s);
    if let Some(b) = &inline.betti_s {
        spec.betti_s = Some([b[0], b[1]]);
    }
    spec.seed = cli.seed.unwrap_or(spec.seed);
    spec.samples = cli.samples.or(spec.samples);
    spec.probes = cli.probes.or(spec.probes);
    spec.degree_cap = cli.degree_cap.or(spec.degree_cap);
    Ok(spec)
}

fn emit(cli: &Cli, report: &Report) -> ExitCode {
    let text = if cli.text { render_text(report) } else { report.to_json() + "\n" };
    // A closed pipe is not an engine failure.
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (task, inline) = match &cli.command {
        Some(Command::Golden { corpus }) => {
            let path = corpus.clone().unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/golden/corpus.json")));
            return match golden(&path) {
                Ok(summary) => {
                    let _ = std::io::stdout().lock().write_all(summary.render().as_bytes());
                    ExitCode::from(if summary.ok() { 0 } else { EXIT_GOLDEN as u8 })
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(EXIT_VALIDATION as u8)
                }
            };
        }
        Some(Command::Fourier(i)) => (Some(Task::Fourier), i),
        Some(Command::Milnor(i)) => (Some(Task::Milnor), i),
        Some(Command::Polygon(i)) => (Some(Task::Polygon), i),
        Some(Command::Tame(i)) => (Some(Task::Tame), i),
        Some(Command::Bifurcation(i)) => (Some(Task::Bifurcation), i),
        Some(Command::Betti(i)) => (Some(Task::Betti), i),
        Some(Command::Vanishing(i)) => (Some(Task::Vanishing), i),
        Some(Command::Irr(i)) => (Some(Task::Irr), i),
        None => (None, &Inline::default()),
    };
    match build(&cli, task, inline) {
        Ok(spec) => emit(&cli, &run(&spec)),
        Err(e) => {
            let report = Report {
                task: task.or(cli.task).map_or("unknown", Task::name).into(),
                engine_version: stphase::VERSION,
                seed: cli.seed.unwrap_or(1),
                spec: None,
                result: None,
                error: Some(validation_record(&e)),
                warnings: Vec::new(),
            };
            emit(&cli, &report)
        }
    }
}
