//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cheeger_lab::verify::{forest_corpus, loop_corpus, run_suites, Suite, SuiteConfig, SuiteOutcome};
use cheeger_lab::Result;

const TEN_MINUTES: Duration = Duration::from_secs(600);
const TWO_MINUTES: Duration = Duration::from_secs(120);

struct Line {
    id: usize,
    title: &'static str,
    ok: bool,
    detail: String,
}

fn summarize(o: &SuiteOutcome, elapsed: Duration, limit: Option<Duration>) -> (bool, String) {
    let mut detail = format!("{} instances, {} checks", o.instances, o.checks);
    for (name, v) in &o.stats {
        detail.push_str(&format!(", {name}={v}"));
    }
    detail.push_str(&format!(", {:.1}s", elapsed.as_secs_f64()));
    let mut ok = o.passed() && o.instances > 0;
    if let Some(limit) = limit {
        if elapsed > limit {
            ok = false;
            detail.push_str(&format!(" exceeds {}s", limit.as_secs()));
        }
    }
    if let Some(f) = o.failures.first() {
        detail.push_str(&format!("; {} failures, first: {} k={:?}: {}", o.failures.len(), f.instance, f.k, f.message));
    }
    (ok, detail)
}

fn corpus_shape(cfg: &SuiteConfig) -> Result<Vec<String>> {
    let mut problems = Vec::new();
    let forests = forest_corpus(cfg)?;
    let seven = forests.iter().filter(|i| i.name.starts_with("tree n=7 ")).count();
    if seven != 16_807 {
        problems.push(format!("{seven} labeled trees on 7 vertices"));
    }
    for n in 2..=cfg.random_tree_n_max {
        let count = forests.iter().filter(|i| i.name.starts_with(&format!("random tree n={n} "))).count();
        if count != cfg.trees_per_n {
            problems.push(format!("{count} random trees on {n} vertices"));
        }
    }
    if forests.iter().any(|i| !i.graph.is_forest() || i.graph.component_count() != 1) {
        problems.push("forest corpus holds a non-tree".into());
    }
    let loops = loop_corpus(cfg)?;
    if loops.len() != cfg.loop_graphs {
        problems.push(format!("{} looped graphs", loops.len()));
    }
    if loops.iter().any(|i| i.graph.n() > 8 || i.graph.betti_number() > 4 || i.graph.component_count() != 1) {
        problems.push("looped corpus breaks n <= 8, beta <= 4 or connectivity".into());
    }
    let all = forests.iter().chain(&loops);
    if all.clone().any(|i| !i.graph.satisfies_degree_convention()) {
        problems.push("corpus instance without degree measure".into());
    }
    Ok(problems)
}

fn run() -> Result<Vec<Line>> {
    let cfg = SuiteConfig::default();
    let mut lines = Vec::new();

    let shape = corpus_shape(&cfg)?;

    let corpus = [
        Suite::ForestIdentity,
        Suite::BetaChain,
        Suite::UnionInv,
        Suite::CheegerP2,
        Suite::Monotonicity,
        Suite::Bracket,
        Suite::Eigensolver,
    ];
    let start = Instant::now();
    let outcomes = run_suites(&corpus, &cfg)?;
    let shared = start.elapsed();
    let get = |s: Suite| outcomes.iter().find(|o| o.suite == s).expect("requested suite");

    let (mut ok, mut detail) = summarize(get(Suite::ForestIdentity), shared, Some(TEN_MINUTES));
    if !shape.is_empty() {
        ok = false;
        detail.push_str(&format!("; corpus: {}", shape.join(", ")));
    }
    lines.push(Line { id: 1, title: "forest identity", ok, detail });

    let (ok, detail) = summarize(get(Suite::BetaChain), shared, Some(TEN_MINUTES));
    lines.push(Line { id: 2, title: "beta chain", ok, detail });

    let (ok, detail) = summarize(get(Suite::UnionInv), shared, None);
    lines.push(Line { id: 3, title: "union-closed invariance", ok, detail });

    let start = Instant::now();
    let rounding = run_suites(&[Suite::Rounding], &cfg)?.remove(0);
    let (ok, detail) = summarize(&rounding, start.elapsed(), Some(TWO_MINUTES));
    lines.push(Line { id: 4, title: "sweep rounding", ok, detail });

    let start = Instant::now();
    let pigeonhole = run_suites(&[Suite::Pigeonhole], &cfg)?.remove(0);
    let (ok, detail) = summarize(&pigeonhole, start.elapsed(), Some(TWO_MINUTES));
    lines.push(Line { id: 5, title: "constructive pigeonhole", ok, detail });

    let (ok, detail) = summarize(get(Suite::CheegerP2), shared, None);
    lines.push(Line { id: 6, title: "p = 2 Cheeger inequalities", ok, detail });

    let (ok, detail) = summarize(get(Suite::Monotonicity), shared, None);
    lines.push(Line { id: 7, title: "endpoint monotonicity", ok, detail });

    let (ok, detail) = summarize(get(Suite::Bracket), shared, None);
    lines.push(Line { id: 8, title: "1-Laplacian bracket", ok, detail });

    let start = Instant::now();
    let certificate = run_suites(&[Suite::Certificate], &cfg)?.remove(0);
    let (ok, detail) = summarize(&certificate, start.elapsed(), None);
    lines.push(Line { id: 9, title: "certificate soundness", ok, detail });

    let (ok, detail) = summarize(get(Suite::Eigensolver), shared, None);
    lines.push(Line { id: 10, title: "eigensolver health", ok, detail });

    Ok(lines)
}

fn main() -> ExitCode {
    match run() {
        Ok(lines) => {
            for l in &lines {
                println!("{} criterion {:>2} {}: {}", if l.ok { "PASS" } else { "FAIL" }, l.id, l.title, l.detail);
            }
            if lines.iter().all(|l| l.ok) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            println!("FAIL acceptance run aborted: {e}");
            ExitCode::FAILURE
        }
    }
}
