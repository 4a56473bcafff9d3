use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cheeger_lab::analysis::{analyze, AnalysisOptions};
use cheeger_lab::generate::{generate, GenParams, GraphKind, WeightMode};
use cheeger_lab::io::{emit_json, emit_tsv, parse_graph, read_graph, GraphFormat};
use cheeger_lab::report::{repro_json, CertificateReport, ComputeReport, VerifyReport};
use cheeger_lab::verify::{run_suites, Suite, SuiteConfig};
use cheeger_lab::{CheegerSolver, Error, WeightedGraph};

const EXIT_PROPERTY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "cheeger-lab", version, about = "Exact multiway Cheeger constants on small weighted graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every constant, the spectrum and the per-k checks for one graph.
    Compute(ComputeArgs),
    /// Run a property suite over generated instances.
    Verify(VerifyArgs),
    /// Write a generated graph.
    Gen(GenArgs),
    /// Dirichlet-set certificate for `l_k = h_k` on a forest.
    Certificate(CertificateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormatArg {
    Json,
    Tsv,
}

#[derive(Args)]
struct Common {
    /// Enumeration cap, as an integer or in `1e8` notation.
    #[arg(long, value_parser = parse_budget, default_value = "1e8")]
    budget: u128,
    #[arg(long, value_enum, default_value = "json")]
    format: ReportFormat,
    /// Include wall time, which makes output differ between runs.
    #[arg(long)]
    timing: bool,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ComputeArgs {
    /// JSON graph file or TSV edge list; `-` reads stdin.
    graph: PathBuf,
    /// A single k, or a range such as `1..3`.
    #[arg(long)]
    k: Option<String>,
    /// Compute k = 1..=K-MAX.
    #[arg(long, conflicts_with = "k")]
    k_max: Option<usize>,
    /// Unpruned enumeration for h_k.
    #[arg(long)]
    oracle: bool,
    /// Also evaluate h_k as a max-min over union-closed families.
    #[arg(long)]
    union_family: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or `all`.
    suite: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    graphs: Option<usize>,
    #[arg(long)]
    vectors: Option<usize>,
    /// Where failing instances are written.
    #[arg(long, default_value = "cheeger-lab-repro.json")]
    repro: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct GenArgs {
    /// path, star, cycle, random-tree, random-forest, unicyclic or random-connected.
    kind: String,
    /// Number of vertices.
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Draw rational weights instead of unit weights.
    #[arg(long)]
    random_weights: bool,
    /// Draw `mu` instead of using the weighted degree.
    #[arg(long)]
    explicit_mu: bool,
    /// Extra edges over a spanning tree for random-connected.
    #[arg(long, default_value_t = 1)]
    loops: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: GraphFormatArg,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CertificateArgs {
    graph: PathBuf,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    common: Common,
}

fn parse_budget(s: &str) -> Result<u128, String> {
    if let Ok(v) = s.parse::<u128>() {
        return Ok(v);
    }
    let (mantissa, exp) = s.split_once(['e', 'E']).ok_or_else(|| format!("invalid budget {s:?}"))?;
    let mantissa: u128 = mantissa.parse().map_err(|_| format!("invalid budget {s:?}"))?;
    let exp: u32 = exp.parse().map_err(|_| format!("invalid budget {s:?}"))?;
    10u128.checked_pow(exp).and_then(|p| p.checked_mul(mantissa)).ok_or_else(|| format!("budget {s:?} overflows"))
}

fn parse_k_range(spec: &str, n: usize) -> Result<Vec<usize>, Error> {
    let bad = || Error::Parse(format!("--k: expected K or A..B, got {spec:?}"));
    let (lo, hi) = match spec.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
        }
        None => {
            let k = spec.trim().parse().map_err(|_| bad())?;
            (k, k)
        }
    };
    if lo == 0 || lo > hi || hi > n {
        return Err(Error::InvalidK { k: if lo == 0 { 0 } else { hi }, n });
    }
    Ok((lo..=hi).collect())
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::Internal(_) => EXIT_PROPERTY,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), Failure> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure { code: EXIT_USAGE, message: format!("{}: {e}", path.display()) })
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `-` reads standard input.
fn load_graph(path: &Path) -> Result<WeightedGraph, Failure> {
    if path.as_os_str() != "-" {
        return Ok(read_graph(path)?);
    }
    let mut text = String::new();
    std::io::stdin()
        .read_to_string(&mut text)
        .map_err(|e| Failure { code: EXIT_USAGE, message: format!("stdin: {e}") })?;
    Ok(parse_graph(&text, GraphFormat::sniff(&text))?)
}

fn elapsed_ms(start: Instant, timing: bool) -> Option<u64> {
    timing.then(|| start.elapsed().as_millis() as u64)
}

fn compute(args: &ComputeArgs) -> Result<u8, Failure> {
    let start = Instant::now();
    let g = load_graph(&args.graph)?;
    let ks = match (&args.k, args.k_max) {
        (Some(spec), _) => parse_k_range(spec, g.n())?,
        (None, Some(m)) => parse_k_range(&format!("1..{m}"), g.n())?,
        (None, None) => (1..=g.n()).collect(),
    };
    let opts = AnalysisOptions {
        h_budget: args.common.budget,
        maxmin_budget: args.common.budget,
        oracle: args.oracle,
        union_family: args.union_family,
        spectrum: true,
    };
    let a = analyze(&g, &ks, opts)?;
    let mut report = ComputeReport::new(&g, &a);
    report.wall_time_ms = elapsed_ms(start, args.common.timing);
    let text = match args.common.format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Csv => report.to_csv()?,
    };
    emit(&text, args.common.output.as_ref())?;
    Ok(if report.h_over_budget {
        EXIT_BUDGET
    } else if !report.all_pass {
        EXIT_PROPERTY
    } else {
        0
    })
}

fn verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let start = Instant::now();
    let suites: Vec<Suite> =
        if args.suite == "all" { Suite::ALL.to_vec() } else { vec![args.suite.parse::<Suite>()?] };
    let mut cfg = SuiteConfig { seed: args.seed, maxmin_budget: args.common.budget, ..SuiteConfig::default() };
    for &s in &suites {
        if let Some(n) = args.n_max {
            cfg.set_n_max(s, n);
        }
        if let Some(count) = args.graphs {
            cfg.set_graphs(s, count);
        }
    }
    if let Some(v) = args.vectors {
        cfg.vectors = v;
    }
    let outcomes = run_suites(&suites, &cfg)?;
    for o in &outcomes {
        eprintln!(
            "{} {}: {} instances, {} checks, {} failures",
            if o.passed() { "PASS" } else { "FAIL" },
            o.suite,
            o.instances,
            o.checks,
            o.failures.len()
        );
        for f in &o.failures {
            eprintln!("  {} k={:?}: {}", f.instance, f.k, f.message);
        }
    }
    let mut report = VerifyReport::new(args.seed, &outcomes);
    report.wall_time_ms = elapsed_ms(start, args.common.timing);
    let text = match args.common.format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Csv => report.to_csv()?,
    };
    emit(&text, args.common.output.as_ref())?;
    if report.passed {
        return Ok(0);
    }
    fs::write(&args.repro, repro_json(&outcomes))
        .map_err(|e| Failure { code: EXIT_USAGE, message: format!("{}: {e}", args.repro.display()) })?;
    eprintln!("failing instances written to {}", args.repro.display());
    Ok(EXIT_PROPERTY)
}

fn gen(args: &GenArgs) -> Result<u8, Failure> {
    let kind: GraphKind = args.kind.parse()?;
    let params = GenParams {
        seed: args.seed,
        weights: if args.random_weights { WeightMode::Random } else { WeightMode::Unit },
        explicit_mu: args.explicit_mu,
        loops: args.loops,
        ..GenParams::new(kind, args.n)
    };
    let g = generate(&params)?;
    let text = match args.format {
        GraphFormatArg::Json => emit_json(&g, args.explicit_mu),
        GraphFormatArg::Tsv => emit_tsv(&g)?,
    };
    emit(&text, args.output.as_ref())?;
    Ok(0)
}

fn certificate(args: &CertificateArgs) -> Result<u8, Failure> {
    let start = Instant::now();
    let g = load_graph(&args.graph)?;
    let c = CheegerSolver::new(&g)?.forest_certificate(args.k, args.common.budget)?;
    let mut report = CertificateReport::new(&g, &c);
    report.wall_time_ms = elapsed_ms(start, args.common.timing);
    let text = match args.common.format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Csv => report.to_csv()?,
    };
    emit(&text, args.common.output.as_ref())?;
    Ok(if report.equal { 0 } else { EXIT_PROPERTY })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute(a) => compute(a),
        Command::Verify(a) => verify(a),
        Command::Gen(a) => gen(a),
        Command::Certificate(a) => certificate(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budgets_accept_scientific_notation() {
        assert_eq!(parse_budget("1e8"), Ok(100_000_000));
        assert_eq!(parse_budget("250"), Ok(250));
        assert_eq!(parse_budget("3E2"), Ok(300));
        assert!(parse_budget("1e99").is_err());
        assert!(parse_budget("x").is_err());
    }

    #[test]
    fn k_ranges() {
        assert_eq!(parse_k_range("2", 3).unwrap(), vec![2]);
        assert_eq!(parse_k_range("1..3", 3).unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_k_range("2..=3", 4).unwrap(), vec![2, 3]);
        assert!(parse_k_range("0", 3).is_err());
        assert!(parse_k_range("1..4", 3).is_err());
        assert!(parse_k_range("3..1", 3).is_err());
        assert!(parse_k_range("a", 3).is_err());
    }
}
