//! Command-line front end. [`run`] returns the process exit code:
//! 0 success, 1 usage error, 2 pipeline error, 3 verification failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::algebra::{invert, is_central, multiply, AlgebraError, GroupElement, GroupExpr};
use crate::deformation::{build_report, DeformationError, LeafSpec, Parameters, Report, DEFAULT_TRUNC};
use crate::field::{Translation, TranslationSubgroup, TrigFieldSpec, DEFAULT_GRID};
use crate::pipeline::{self, Analysis, PipelineError, MIN_GRID};
use crate::reeb::to_dot;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PIPELINE: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "torus-morse",
    version,
    about = "Reeb graphs and deformation groups of Morse functions on the torus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the full pipeline and verify the resulting diagram.
    Analyze(PipelineArgs),
    /// Stop after building the Reeb graph.
    Reeb(FieldArgs),
    /// Print the diagram's group expressions with symbolic leaves.
    Groups(PipelineArgs),
    /// Verify the diagram of a field, or re-verify a saved report.
    Verify(VerifyArgs),
    /// Evaluate products, inverses and centrality of group elements.
    Wreath(WreathArgs),
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Field file (TOML or JSON).
    #[arg(short, long)]
    field: PathBuf,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    /// Write the report or graph as JSON to this path instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the Reeb graph in Graphviz format to this path.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    #[command(flatten)]
    input: FieldArgs,
    #[arg(long, default_value_t = DEFAULT_TRUNC)]
    trunc: u32,
    /// Replace the cyclic index computed from the symmetry group.
    #[arg(long)]
    cyclic_index: Option<u64>,
    /// Symmetry generators instead of detection, e.g. "1/2,1/2;0,1/3".
    #[arg(long)]
    symmetry: Option<String>,
    /// Leaf table (TOML with `s`, `g` and optional `[labels.X]` entries).
    #[arg(long)]
    leaves: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(short, long, required_unless_present = "from_report", conflicts_with = "from_report")]
    field: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long)]
    trunc: Option<u32>,
    #[arg(long)]
    cyclic_index: Option<u64>,
    #[arg(long)]
    symmetry: Option<String>,
    #[arg(long)]
    leaves: Option<PathBuf>,
    /// Rebuild and re-verify a report written by `analyze` or `verify`.
    #[arg(long)]
    from_report: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Op {
    Mul,
    Inv,
    Central,
}

#[derive(Args, Debug)]
struct WreathArgs {
    /// Group expression, e.g. "wrC(Z_2;2)".
    #[arg(short, long, required_unless_present = "batch")]
    expr: Option<String>,
    #[arg(short, long, required_unless_present = "batch")]
    a: Option<String>,
    #[arg(short, long)]
    b: Option<String>,
    #[arg(long, value_enum, default_value_t = Op::Mul)]
    op: Op,
    /// File with one `op | expr | a [| b]` entry per line.
    #[arg(long, conflicts_with_all = ["expr", "a", "b"])]
    batch: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Pipeline(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Pipeline(_) => EXIT_PIPELINE,
            CliError::Verification(_) => EXIT_VERIFICATION,
        }
    }
}

fn pipeline_err(e: impl std::fmt::Display) -> CliError {
    CliError::Pipeline(e.to_string())
}

fn report_err(e: DeformationError) -> CliError {
    match e {
        DeformationError::Algebra(AlgebraError::EnumerationTooLarge { .. }) => {
            CliError::Pipeline(format!("{e}; try a smaller --trunc or smaller leaves"))
        }
        e => pipeline_err(e),
    }
}

fn usage_err(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze(args) => analyze(&args, true, out),
        Command::Groups(args) => analyze(&args, false, out),
        Command::Reeb(args) => reeb(&args, out),
        Command::Verify(args) => verify(&args, out),
        Command::Wreath(args) => wreath(&args, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| pipeline_err(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(pipeline_err),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| usage_err(format!("{}: {e}", path.display())))
}

fn load_field(path: &Path) -> Result<TrigFieldSpec, CliError> {
    TrigFieldSpec::load(path).map_err(|e| usage_err(format!("{}: {e}", path.display())))
}

fn stage_err(e: PipelineError) -> CliError {
    match e {
        PipelineError::InvalidArgument(msg) => CliError::Usage(msg),
        e => pipeline_err(e),
    }
}

fn check_grid(grid: usize) -> Result<(), CliError> {
    if grid < MIN_GRID {
        return Err(usage_err(format!("--grid must be at least {MIN_GRID}")));
    }
    Ok(())
}

fn parse_symmetry(src: &str) -> Result<TranslationSubgroup, CliError> {
    let gens = src
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(Translation::parse)
        .collect::<Result<Vec<_>, _>>()
        .map_err(usage_err)?;
    TranslationSubgroup::generated_by(&gens).map_err(usage_err)
}

fn load_leaves(path: Option<&Path>) -> Result<LeafSpec, CliError> {
    match path {
        Some(p) => LeafSpec::from_toml_str(&read(p)?).map_err(usage_err),
        None => Ok(LeafSpec::default()),
    }
}

fn classify_field(
    field: &Path,
    grid: usize,
    symmetry: Option<&str>,
    cyclic_index: Option<u64>,
) -> Result<Analysis, CliError> {
    check_grid(grid)?;
    let spec = load_field(field)?;
    let symmetry = symmetry.map(parse_symmetry).transpose()?;
    pipeline::analyze(&spec, grid, symmetry, cyclic_index).map_err(stage_err)
}

fn finish(report: &Report, json: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    emit(json, &report.to_json(), out)?;
    if report.passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .verification
            .iter()
            .flat_map(|v| v.iter().filter(|(_, r)| !r.passed()).map(|(k, _)| k.as_str()))
            .collect();
        Err(CliError::Verification(failed.join(", ")))
    }
}

fn analyze(args: &PipelineArgs, verify: bool, out: &mut dyn Write) -> Result<(), CliError> {
    if args.trunc == 0 {
        return Err(usage_err("--trunc must be at least 1"));
    }
    let c = classify_field(
        &args.input.field,
        args.input.grid,
        args.symmetry.as_deref(),
        args.cyclic_index,
    )?;
    if let Some(p) = &args.input.dot {
        emit(Some(p), &to_dot(&c.graph), out)?;
    }
    let leaves = if verify {
        Some(load_leaves(args.leaves.as_deref())?)
    } else {
        None
    };
    let params = Parameters {
        trunc: args.trunc,
        leaves,
    };
    let report = build_report(&c.classification, params, c.notes).map_err(report_err)?;
    finish(&report, args.input.json.as_deref(), out)
}

fn reeb(args: &FieldArgs, out: &mut dyn Write) -> Result<(), CliError> {
    check_grid(args.grid)?;
    let spec = load_field(&args.field)?;
    let graph = pipeline::reeb_graph(&spec, args.grid).map_err(stage_err)?;
    let dot = to_dot(&graph);
    if let Some(p) = &args.json {
        let json = serde_json::to_string_pretty(&graph).map_err(pipeline_err)? + "\n";
        emit(Some(p), &json, out)?;
    }
    if args.dot.is_some() || args.json.is_none() {
        emit(args.dot.as_deref(), &dot, out)?;
    }
    Ok(())
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.trunc == Some(0) {
        return Err(usage_err("--trunc must be at least 1"));
    }
    let report = match (&args.from_report, &args.field) {
        (Some(path), _) => {
            let saved = Report::from_json(&read(path)?).map_err(usage_err)?;
            let mut params = saved.parameters.clone();
            if let Some(t) = args.trunc {
                params.trunc = t;
            }
            if args.leaves.is_some() || params.leaves.is_none() {
                params.leaves = Some(load_leaves(args.leaves.as_deref())?);
            }
            build_report(&saved.classification, params, saved.notes.clone()).map_err(report_err)?
        }
        (None, Some(field)) => {
            let c = classify_field(field, args.grid, args.symmetry.as_deref(), args.cyclic_index)?;
            if let Some(p) = &args.dot {
                emit(Some(p), &to_dot(&c.graph), out)?;
            }
            let params = Parameters {
                trunc: args.trunc.unwrap_or(DEFAULT_TRUNC),
                leaves: Some(load_leaves(args.leaves.as_deref())?),
            };
            build_report(&c.classification, params, c.notes).map_err(report_err)?
        }
        (None, None) => return Err(usage_err("verify needs --field or --from-report")),
    };
    finish(&report, args.json.as_deref(), out)
}

fn wreath_one(op: Op, expr: &str, a: &str, b: Option<&str>) -> Result<String, CliError> {
    let expr: GroupExpr = expr.parse().map_err(usage_err)?;
    let a = GroupElement::parse(&expr, a).map_err(usage_err)?;
    Ok(match (op, b) {
        (Op::Mul, Some(b)) => {
            let b = GroupElement::parse(&expr, b).map_err(usage_err)?;
            multiply(&expr, &a, &b).map_err(usage_err)?.to_string()
        }
        (Op::Mul, None) => return Err(usage_err("mul needs a second element (-b)")),
        (Op::Inv, _) => invert(&expr, &a).map_err(usage_err)?.to_string(),
        (Op::Central, _) => is_central(&expr, &a).map_err(usage_err)?.to_string(),
    })
}

fn wreath(args: &WreathArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut lines = Vec::new();
    match &args.batch {
        Some(path) => {
            for (no, line) in read(path)?.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let fields: Vec<&str> = line.split('|').map(str::trim).collect();
                let (op, rest) = fields.split_first().expect("split yields one field");
                let op = Op::from_str(op, true).map_err(|e| usage_err(format!("line {}: {e}", no + 1)))?;
                let result = match rest {
                    [expr, a] => wreath_one(op, expr, a, None),
                    [expr, a, b] => wreath_one(op, expr, a, Some(b)),
                    _ => Err(usage_err("expected `op | expr | a [| b]`")),
                };
                lines.push(result.map_err(|e| usage_err(format!("line {}: {e}", no + 1)))?);
            }
        }
        None => {
            let (expr, a) = (
                args.expr.as_deref().unwrap_or_default(),
                args.a.as_deref().unwrap_or_default(),
            );
            lines.push(wreath_one(args.op, expr, a, args.b.as_deref())?);
        }
    }
    let mut text = lines.join("\n");
    text.push('\n');
    emit(None, &text, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("torus-morse").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn wreath_product() {
        let (code, out, _) = call(&["wreath", "-e", "wrC(Z_2;2)", "-a", "((1,0),1)", "-b", "((0,1),1)"]);
        assert_eq!((code, out.as_str()), (0, "((0,0),0)\n"));
        let (code, out, _) = call(&["wreath", "-e", "wrC(Z_2;2)", "-a", "((1,0),1)", "--op", "inv"]);
        assert_eq!((code, out.as_str()), (0, "((0,1),1)\n"));
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["wreath", "-e", "wrC(Z_2;2)", "-a", "((1,0),7,7)"]).0, EXIT_USAGE);
        assert_eq!(call(&["wreath", "-e", "wrC(Z_2;2)", "-a", "((1,0),1)"]).0, EXIT_USAGE);
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("analyze"));
    }

    #[test]
    fn symmetry_parsing() {
        let sym = parse_symmetry("1/2,1/2; 0,1/3").unwrap();
        assert_eq!(sym.order, 6);
        assert!(parse_symmetry("1/2").is_err());
    }
}
