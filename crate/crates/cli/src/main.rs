//! `exotica`: decide, report on and inspect normal 1-types stored as
//! model files.
//!
//! Exit codes: 0 for any verdict, 2 for input errors (including an
//! invalid normal 1-type), 3 when an internal consistency check fails.

use std::fmt::Write as _;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use exotica_core::catalog::{fixture, FIXTURE_NAMES};
use exotica_core::cohomology::{cohomology_basis, cohomology_basis_allow_truncated, operator_matrix, CohomologyBasis};
use exotica_core::format::{canonical_json, export_fixture, LoadedModel};
use exotica_core::james::{james_report, JamesReport, Status};
use exotica_core::linalg::F2Matrix;
use exotica_core::obstruction::{
    decide, replay, DecideConfig, DoubleCoverData, NormalOneType, ObstructionError, Outcome, SectionDatum, Verdict,
};

#[derive(Parser)]
#[command(name = "exotica", version, about = "Obstructions to stable exotica for nonorientable 4-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether stable exotica exist for the normal 1-type in a model file.
    Decide(DecideArgs),
    /// Print the James spectral sequence E² page, its d₂ maps and the fate of the K3 class.
    Report(DecideArgs),
    /// Print a basis of H^k(X; ℤ/2) and optionally Steenrod square tables.
    Cohomology(CohomologyArgs),
    /// List or export the built-in fixtures.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Args)]
struct DecideArgs {
    /// Model file with cochains `w1` and `w2`; `-` reads standard input.
    path: String,
    /// Cover file: the double cover with involution and projection.
    #[arg(long)]
    cover: Option<PathBuf>,
    /// Cover cochain to use as the lift datum.
    #[arg(long, requires = "cover")]
    lift: Option<String>,
    /// Map in the model file to use as a section.
    #[arg(long)]
    section: Option<String>,
    /// Most lift-datum classes examined before switching to sampling.
    #[arg(long, default_value_t = DecideConfig::default().cap)]
    cap: u64,
    /// Seed for sampling lift data.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Allow conclusions in degree 4 on models that stop at degree 4.
    #[arg(long)]
    allow_truncated: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CohomologyArgs {
    /// Model file; `-` reads standard input.
    path: String,
    #[arg(long = "deg")]
    degree: usize,
    /// Also print Sq¹ and Sq² out of this degree.
    #[arg(long)]
    steenrod: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Print the fixture names with a one-line description.
    List,
    /// Write NAME.json (and NAME.cover.json when there is a cover) to a
    /// directory, or the base model to standard output.
    Export {
        name: String,
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn input(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, error: error.into() }
}

fn internal(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 3, error: error.into() }
}

/// Arithmetic failures on validated input are bugs; everything else
/// traces back to the input.
fn classify(e: ObstructionError) -> Failure {
    match e {
        ObstructionError::Linalg(_) => internal(e),
        _ => input(e),
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decide(args) => cmd_decide(&args),
        Command::Report(args) => cmd_report(&args),
        Command::Cohomology(args) => cmd_cohomology(&args),
        Command::Catalog(c) => cmd_catalog(c),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}

fn read_source(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).context("reading standard input").map_err(input)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}")).map_err(input)
    }
}

fn load(path: &str) -> CliResult<LoadedModel> {
    let text = read_source(path)?;
    LoadedModel::parse(&text).with_context(|| format!("in {path}")).map_err(input)
}

/// Everything `decide` needs, loaded and cross-checked.
struct Problem {
    nt: NormalOneType,
    cover: Option<DoubleCoverData>,
    lift: Option<exotica_core::simplicial::Cochain>,
    section: Option<SectionDatum>,
}

fn load_problem(args: &DecideArgs) -> CliResult<Problem> {
    let base = load(&args.path)?;
    let nt = base.normal_type().with_context(|| format!("in {}", args.path)).map_err(input)?;
    let (cover, lift) = match &args.cover {
        Some(path) => {
            let shown = path.display().to_string();
            let file = load(&shown)?;
            let data = file.cover_of(&base.model).with_context(|| format!("in {shown}")).map_err(input)?;
            let lift = match &args.lift {
                Some(name) => Some(file.lift(name).with_context(|| format!("in {shown}")).map_err(input)?),
                None => None,
            };
            (Some(data), lift)
        }
        None => (None, None),
    };
    let section = match &args.section {
        Some(name) => {
            let map = base.map(name).with_context(|| format!("in {}", args.path)).map_err(input)?;
            Some(SectionDatum::new(&nt, map).map_err(classify)?)
        }
        None => None,
    };
    Ok(Problem { nt, cover, lift, section })
}

fn run_decide(args: &DecideArgs) -> CliResult<(Problem, Verdict)> {
    let problem = load_problem(args)?;
    let config = DecideConfig { cap: args.cap, seed: args.seed, allow_truncated: args.allow_truncated };
    let verdict = decide(&problem.nt, problem.cover.as_ref(), problem.lift.as_ref(), problem.section.as_ref(), &config)
        .map_err(classify)?;
    replay(&verdict, &problem.nt, problem.cover.as_ref(), problem.lift.as_ref(), problem.section.as_ref())
        .map_err(|why| internal(anyhow!("the verdict failed its own replay: {why}")))?;
    Ok((problem, verdict))
}

fn exit_code(verdict: &Verdict) -> u8 {
    if verdict.outcome == Outcome::InvalidInput {
        2
    } else {
        0
    }
}

fn verdict_json(verdict: &Verdict) -> serde_json::Value {
    json!({
        "headline": verdict.outcome.headline(),
        "verdict": verdict,
    })
}

fn verdict_text(verdict: &Verdict) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", verdict.summary);
    let _ = writeln!(out, "clause: {}", verdict.clause);
    for caveat in &verdict.evidence.caveats {
        let _ = writeln!(out, "caveat: {caveat}");
    }
    out
}

fn cmd_decide(args: &DecideArgs) -> CliResult<u8> {
    let (_, verdict) = run_decide(args)?;
    if args.json {
        print!("{}", canonical_json(&verdict_json(&verdict)));
    } else {
        print!("{}", verdict_text(&verdict));
    }
    Ok(exit_code(&verdict))
}

fn cmd_report(args: &DecideArgs) -> CliResult<u8> {
    let (problem, verdict) = run_decide(args)?;
    if verdict.outcome == Outcome::InvalidInput {
        print!("{}", if args.json { canonical_json(&verdict_json(&verdict)) } else { verdict_text(&verdict) });
        return Ok(2);
    }
    let report = james_report(&problem.nt, problem.cover.as_ref(), &verdict).map_err(classify)?;
    if args.json {
        let value = json!({ "verdict": verdict_json(&verdict), "report": report });
        print!("{}", canonical_json(&value));
    } else {
        print!("{}", verdict_text(&verdict));
        print!("{}", report_text(&report));
    }
    Ok(0)
}

fn report_text(r: &JamesReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\nE2 page, p + q <= 5 (twisted rows via {}):", r.page.twist);
    for q in (0..=4).rev() {
        let cells: Vec<String> = r
            .page
            .entries
            .iter()
            .filter(|e| e.q == q)
            .map(|e| {
                let mark = if e.exact { "" } else { "?" };
                format!("{}{mark}", e.group)
            })
            .collect();
        let coefficient = &r.coefficients[q];
        let tag = if q == 4 { format!(" [{}]", coefficient.generator) } else { String::new() };
        let _ = writeln!(out, "  q={q} ({}{tag}): {}", coefficient.group, cells.join(" | "));
    }
    for caveat in &r.page.caveats {
        let _ = writeln!(out, "  caveat: {caveat}");
    }
    let _ = writeln!(out, "\nd2 differentials:");
    for m in &r.differentials.maps {
        let kind = if m.is_isomorphism() {
            "isomorphism"
        } else if m.is_zero() {
            "zero"
        } else {
            "nonzero"
        };
        let _ = writeln!(
            out,
            "  E2[{},{}] -> E2[{},{}]: {}x{} rank {} ({kind}){}",
            m.source.0,
            m.source.1,
            m.target.0,
            m.target.1,
            m.codomain_dim,
            m.domain_dim,
            m.rank,
            if m.exact { "" } else { " truncated" }
        );
    }
    for caveat in &r.differentials.caveats {
        let _ = writeln!(out, "  caveat: {caveat}");
    }
    let _ = writeln!(out, "\ndifferentials into E_{{0,4}}:");
    for k in &r.killers.killers {
        let status = match k.status {
            Status::Zero => "zero",
            Status::Nonzero => "nonzero",
            Status::Open => "open",
        };
        let _ = writeln!(out, "  d{}: {status} ({})", k.page, k.reason);
    }
    let _ = writeln!(out, "{}", r.killers.summary);
    out
}

fn steenrod_table(domain: &CohomologyBasis, k: usize, top: usize) -> CliResult<(F2Matrix, bool)> {
    let target = domain.degree() + k;
    let exact = target < top;
    let codomain = if exact {
        cohomology_basis(domain.model(), target)
    } else {
        cohomology_basis_allow_truncated(domain.model(), target)
    }
    .map_err(input)?;
    let m = operator_matrix(domain, &codomain, |x| Ok(x.sq(k)?)).map_err(internal)?;
    Ok((m, exact))
}

fn cmd_cohomology(args: &CohomologyArgs) -> CliResult<u8> {
    let file = load(&args.path)?;
    let model = &file.model;
    let top = model.max_degree();
    let basis = cohomology_basis(model, args.degree)
        .with_context(|| format!("H^{} needs cells of degree {}", args.degree, args.degree + 1))
        .map_err(input)?;
    let reps: Vec<Vec<usize>> = basis.representatives().iter().map(|r| r.support()).collect();
    let mut tables = Vec::new();
    if args.steenrod {
        for k in 1..=2 {
            if args.degree + k > top {
                continue;
            }
            let (m, exact) = steenrod_table(&basis, k, top)?;
            let images: Vec<Vec<usize>> = (0..m.cols()).map(|j| m.column(j).support()).collect();
            tables.push((k, images, exact));
        }
    }
    if args.json {
        let value = json!({
            "degree": args.degree,
            "dimension": basis.dim(),
            "representatives": reps,
            "steenrod": tables.iter().map(|(k, images, exact)| json!({
                "operation": format!("Sq{k}"),
                "target_degree": args.degree + k,
                "images": images,
                "exact": exact,
            })).collect::<Vec<_>>(),
        });
        print!("{}", canonical_json(&value));
    } else {
        println!("H^{}(X; Z/2) has dimension {}", args.degree, basis.dim());
        for (i, r) in reps.iter().enumerate() {
            println!("  e{i} = {r:?}");
        }
        for (k, images, exact) in &tables {
            let note = if *exact { "" } else { " (target degree is truncated)" };
            println!("Sq{k}: H^{} -> H^{}{note}", args.degree, args.degree + k);
            for (i, image) in images.iter().enumerate() {
                let terms: Vec<String> = image.iter().map(|j| format!("f{j}")).collect();
                let shown = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                println!("  e{i} -> {shown}");
            }
        }
    }
    Ok(0)
}

fn cmd_catalog(command: CatalogCommand) -> CliResult<u8> {
    match command {
        CatalogCommand::List => {
            for name in FIXTURE_NAMES {
                let f = fixture(name).map_err(internal)?;
                println!("{name:<14} {}", f.summary);
            }
            Ok(0)
        }
        CatalogCommand::Export { name, dir } => {
            let f = fixture(&name).map_err(input)?;
            let exported = export_fixture(&f);
            match dir {
                Some(dir) => {
                    for (file, contents) in exported.files(&name) {
                        write_file(&dir, &file, &contents)?;
                        println!("{}", dir.join(&file).display());
                    }
                }
                None => {
                    print!("{}", exported.base);
                    if exported.cover.is_some() {
                        eprintln!("note: {name} also has a cover file; pass --dir to write it");
                    }
                }
            }
            Ok(0)
        }
    }
}

fn write_file(dir: &Path, file: &str, contents: &str) -> CliResult<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display())).map_err(input)?;
    let path = dir.join(file);
    std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display())).map_err(input)
}
