//! Command-line driver: load programs, then answer queries in batch or
//! from an interactive loop.
//!
//! Exit codes: 0 every batch query answered, 1 some query had no answer,
//! 2 compile or query errors, 3 resource errors during evaluation.

mod output;
mod query;

use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;

use clap::Parser;

pub use output::{format_answers, json_answer, plain_answer, write_answers, OutputFormat, StreamEnd};
pub use query::parse_query;

use crate::engine::{Engine, DEFAULT_DEPTH_LIMIT};
use crate::parser::{codes, load, Diagnostic, Severity, SourceUnit};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO_ANSWER: i32 = 1;
pub const EXIT_COMPILE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Repl,
    Batch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub program_paths: Vec<PathBuf>,
    pub mode: Mode,
    pub queries: Vec<String>,
    pub format: OutputFormat,
    pub max_answers: Option<usize>,
    pub depth_limit: usize,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            program_paths: Vec::new(),
            mode: Mode::Repl,
            queries: Vec::new(),
            format: OutputFormat::Plain,
            max_answers: None,
            depth_limit: DEFAULT_DEPTH_LIMIT,
        }
    }
}

/// Fuzzy logic programs with typed individuals and default truth values.
#[derive(Debug, Parser)]
#[command(name = "rfz", version)]
pub struct Args {
    /// Program files (.rfz), merged in the given order.
    pub programs: Vec<PathBuf>,
    /// Run this query and exit; repeatable.
    #[arg(long = "query", short = 'q', value_name = "TEXT")]
    pub queries: Vec<String>,
    /// Read queries from standard input (the default without --query).
    #[arg(long)]
    pub repl: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Plain)]
    pub format: OutputFormat,
    /// Stop after this many answers per query.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    pub max_answers: Option<u64>,
    /// Maximum nesting of rule evaluations.
    #[arg(long, value_name = "N", env = "RFZ_DEPTH_LIMIT", default_value_t = DEFAULT_DEPTH_LIMIT as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub depth_limit: u64,
}

impl From<Args> for CliConfig {
    fn from(args: Args) -> Self {
        let mode = if args.repl || args.queries.is_empty() {
            Mode::Repl
        } else {
            Mode::Batch
        };
        CliConfig {
            program_paths: args.programs,
            mode,
            queries: args.queries,
            format: args.format,
            max_answers: args.max_answers.map(|n| n as usize),
            depth_limit: args.depth_limit as usize,
        }
    }
}

/// Runs against the process's standard streams.
pub fn run(config: &CliConfig) -> i32 {
    let stdin = io::stdin();
    let interactive = stdin.is_terminal();
    run_with(config, stdin.lock(), &mut io::stdout().lock(), &mut io::stderr().lock(), interactive)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum QueryStatus {
    Answered,
    Empty,
    Rejected,
    Resource,
}

impl QueryStatus {
    fn exit_code(self) -> i32 {
        match self {
            QueryStatus::Answered => EXIT_OK,
            QueryStatus::Empty => EXIT_NO_ANSWER,
            QueryStatus::Rejected => EXIT_COMPILE,
            QueryStatus::Resource => EXIT_RESOURCE,
        }
    }
}

fn report(err: &mut impl Write, diags: &[Diagnostic]) {
    for d in diags {
        let _ = writeln!(err, "{d}");
    }
}

/// Reads and validates the programs named in `paths`.
pub fn load_files(paths: &[PathBuf]) -> Result<(crate::model::Program, Vec<Diagnostic>), Vec<Diagnostic>> {
    let mut sources = Vec::with_capacity(paths.len());
    let mut failures = Vec::new();
    for path in paths {
        let origin = path.display().to_string();
        match std::fs::read_to_string(path) {
            Ok(text) => sources.push(SourceUnit::new(origin, text)),
            Err(e) => failures.push(Diagnostic {
                severity: Severity::Error,
                origin: origin.as_str().into(),
                line: 0,
                column: 0,
                code: codes::IO,
                message: format!("cannot read program: {e}"),
            }),
        }
    }
    if !failures.is_empty() {
        return Err(failures);
    }
    load(&sources)
}

pub fn run_with<R, W, E>(config: &CliConfig, input: R, out: &mut W, err: &mut E, interactive: bool) -> i32
where
    R: BufRead,
    W: Write,
    E: Write,
{
    let program = match load_files(&config.program_paths) {
        Ok((program, warnings)) => {
            report(err, &warnings);
            program
        }
        Err(diags) => {
            report(err, &diags);
            return EXIT_COMPILE;
        }
    };
    let engine = Engine::new(&program)
        .expect("load() already validated the program")
        .with_depth_limit(config.depth_limit);

    match config.mode {
        Mode::Batch => {
            let mut worst = QueryStatus::Answered;
            for text in &config.queries {
                worst = worst.max(answer_query(&engine, config, text, out, err));
            }
            let _ = out.flush();
            worst.exit_code()
        }
        Mode::Repl => {
            repl(&engine, config, input, out, err, interactive);
            EXIT_OK
        }
    }
}

fn answer_query(engine: &Engine<'_>, config: &CliConfig, text: &str, out: &mut impl Write, err: &mut impl Write) -> QueryStatus {
    let query = match parse_query(text) {
        Ok(q) => q,
        Err(d) => {
            report(err, &[d]);
            return QueryStatus::Rejected;
        }
    };
    let solutions = match engine.solve(&query) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "<query>: error[{}]: {e}", codes::QUERY);
            return QueryStatus::Rejected;
        }
    };
    let limit = config.max_answers.unwrap_or(usize::MAX);
    let end = match write_answers(out, &query, solutions.take(limit), config.format) {
        Ok(end) => end,
        Err(e) => {
            let _ = writeln!(err, "error: cannot write answers: {e}");
            return QueryStatus::Resource;
        }
    };
    match end {
        StreamEnd { error: Some(e), .. } => {
            let _ = writeln!(err, "error: {e}");
            if e.is_resource() {
                QueryStatus::Resource
            } else {
                QueryStatus::Rejected
            }
        }
        StreamEnd { count: 0, .. } => QueryStatus::Empty,
        StreamEnd { .. } => QueryStatus::Answered,
    }
}

fn repl(engine: &Engine<'_>, config: &CliConfig, input: impl BufRead, out: &mut impl Write, err: &mut impl Write, interactive: bool) {
    let prompt = |out: &mut dyn Write| {
        if interactive {
            let _ = write!(out, "?- ");
            let _ = out.flush();
        }
    };
    prompt(out);
    for line in input.lines() {
        let Ok(line) = line else { break };
        let text = line.trim();
        let bare = text.strip_prefix("?-").unwrap_or(text).trim();
        match bare.trim_end_matches('.').trim() {
            "" => {}
            "halt" => break,
            _ => {
                answer_query(engine, config, text, out, err);
                let _ = out.flush();
            }
        }
        prompt(out);
    }
}
