//! Property suites over exhaustively enumerated and seeded random instances.
//!
//! Instances are processed in parallel; results are collected in instance
//! order, so outcomes are identical for a given seed whatever the thread count.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rayon::prelude::*;

use crate::analysis::{analyze, checks, maxmin_cost, Analysis, AnalysisOptions, Quantity};
use crate::cheeger::{dirichlet_cheeger, CertificateMethod, CheegerOptions, CheegerSolver};
use crate::combinatorics::{common_union, union_family, Subpartition};
use crate::error::{Error, Result};
use crate::generate::{all_trees, generate, GenParams, GraphKind, InstanceRng, WeightMode};
use crate::graph::{VertexSet, WeightedGraph};
use crate::io::{to_graph_file, GraphFile};
use crate::rational::{to_f64, Rational};
use crate::spectra::{
    indicator_combination, optimal_span_check, rayleigh, rayleigh_l1_exact, subspace_intersection_check, sweep_round,
    sweep_round_exact,
};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "CHEEGER_LAB_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    ForestIdentity,
    BetaChain,
    UnionInv,
    Rounding,
    CheegerP2,
    Monotonicity,
    Pigeonhole,
    Intersection,
    BasicPhi,
    DisjointH,
    Bracket,
    Certificate,
    Eigensolver,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::ForestIdentity,
        Suite::BetaChain,
        Suite::UnionInv,
        Suite::Rounding,
        Suite::CheegerP2,
        Suite::Monotonicity,
        Suite::Pigeonhole,
        Suite::Intersection,
        Suite::BasicPhi,
        Suite::DisjointH,
        Suite::Bracket,
        Suite::Certificate,
        Suite::Eigensolver,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ForestIdentity => "forest-identity",
            Suite::BetaChain => "beta-chain",
            Suite::UnionInv => "union-inv",
            Suite::Rounding => "rounding",
            Suite::CheegerP2 => "cheeger-p2",
            Suite::Monotonicity => "monotonicity",
            Suite::Pigeonhole => "pigeonhole",
            Suite::Intersection => "intersection",
            Suite::BasicPhi => "basic-phi",
            Suite::DisjointH => "disjoint-h",
            Suite::Bracket => "bracket",
            Suite::Certificate => "certificate",
            Suite::Eigensolver => "eigensolver",
        }
    }

    fn uses_forests(self) -> bool {
        matches!(
            self,
            Suite::ForestIdentity
                | Suite::UnionInv
                | Suite::CheegerP2
                | Suite::Monotonicity
                | Suite::Bracket
                | Suite::Eigensolver
        )
    }

    fn uses_loops(self) -> bool {
        matches!(self, Suite::BetaChain | Suite::UnionInv | Suite::CheegerP2 | Suite::Bracket | Suite::Eigensolver)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Sizes for every suite; the defaults are the acceptance workloads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Cap on `(n - k + 2)^n` for computing `l_k`.
    pub maxmin_budget: u128,
    /// Every labeled tree up to this size, unit weights.
    pub tree_n_max: usize,
    /// Random trees with random weights for each size up to this one.
    pub random_tree_n_max: usize,
    pub trees_per_n: usize,
    pub loop_n_max: usize,
    pub loop_graphs: usize,
    pub max_loops: usize,
    pub rounding_graphs: usize,
    pub rounding_n_max: usize,
    pub vectors: usize,
    pub pairs: usize,
    pub pair_n_max: usize,
    pub small_n_max: usize,
    pub small_graphs: usize,
    pub forests: usize,
    pub forest_n_max: usize,
    /// Every this-many corpus instances also gets a sampled span check.
    pub span_stride: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            maxmin_budget: crate::DEFAULT_BUDGET,
            tree_n_max: 7,
            random_tree_n_max: 10,
            trees_per_n: 200,
            loop_n_max: 8,
            loop_graphs: 500,
            max_loops: 4,
            rounding_graphs: 100,
            rounding_n_max: 10,
            vectors: 10_000,
            pairs: 10_000,
            pair_n_max: 10,
            small_n_max: 8,
            small_graphs: 40,
            forests: 1000,
            forest_n_max: 12,
            span_stride: 16,
        }
    }
}

impl SuiteConfig {
    /// Applies `--n-max` to whichever size cap `suite` uses.
    pub fn set_n_max(&mut self, suite: Suite, n: usize) {
        match suite {
            Suite::ForestIdentity | Suite::Monotonicity => self.tree_n_max = n,
            Suite::BetaChain => self.loop_n_max = n,
            Suite::UnionInv | Suite::CheegerP2 | Suite::Bracket | Suite::Eigensolver => {
                self.tree_n_max = n;
                self.loop_n_max = n;
            }
            Suite::Rounding => self.rounding_n_max = n,
            Suite::Pigeonhole | Suite::Intersection => self.pair_n_max = n,
            Suite::BasicPhi | Suite::DisjointH => self.small_n_max = n,
            Suite::Certificate => self.forest_n_max = n,
        }
    }

    /// Applies `--graphs` to whichever instance count `suite` uses.
    pub fn set_graphs(&mut self, suite: Suite, count: usize) {
        match suite {
            Suite::ForestIdentity | Suite::Monotonicity => self.trees_per_n = count,
            Suite::BetaChain => self.loop_graphs = count,
            Suite::UnionInv | Suite::CheegerP2 | Suite::Bracket | Suite::Eigensolver => {
                self.trees_per_n = count;
                self.loop_graphs = count;
            }
            Suite::Rounding => self.rounding_graphs = count,
            Suite::Pigeonhole | Suite::Intersection => self.pairs = count,
            Suite::BasicPhi | Suite::DisjointH => self.small_graphs = count,
            Suite::Certificate => self.forests = count,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub instance: String,
    pub k: Option<usize>,
    pub message: String,
    /// Enough to rerun the failing case.
    pub graph: Option<GraphFile>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub instances: usize,
    pub checks: u64,
    pub failures: Vec<Failure>,
    /// Counters worth reporting, such as how often a check had power.
    pub stats: Vec<(String, u64)>,
}

impl SuiteOutcome {
    fn new(suite: Suite) -> Self {
        Self { suite, instances: 0, checks: 0, failures: Vec::new(), stats: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn stat(&self, name: &str) -> Option<u64> {
        self.stats.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    fn fail(&mut self, instance: &Instance, k: Option<usize>, message: String) {
        self.failures.push(Failure {
            instance: instance.name.clone(),
            k,
            message,
            graph: Some(to_graph_file(&instance.graph, true)),
        });
    }

    fn bump(&mut self, name: &str, by: u64) {
        match self.stats.iter_mut().find(|(n, _)| n == name) {
            Some((_, v)) => *v += by,
            None => self.stats.push((name.to_string(), by)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub graph: WeightedGraph,
}

/// Per-instance counters and failure messages from a parallel pass.
type Tally<const C: usize, M> = ([u64; C], Vec<M>);

/// Runs `f` on a pool sized by [`THREADS_ENV`], or rayon's default.
pub fn with_threads<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&t| t > 0);
    match threads.map(|t| rayon::ThreadPoolBuilder::new().num_threads(t).build()) {
        Some(Ok(pool)) => pool.install(f),
        _ => f(),
    }
}

/// Every labeled tree with `2 <= n <= tree_n_max` and unit weights, then
/// `trees_per_n` random trees with random weights per `n <= random_tree_n_max`.
pub fn forest_corpus(cfg: &SuiteConfig) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for n in 2..=cfg.tree_n_max {
        for (i, g) in all_trees(n, WeightMode::Unit, cfg.seed).enumerate() {
            out.push(Instance { name: format!("tree n={n} prufer#{i}"), graph: g? });
        }
    }
    let mut rng = InstanceRng::new(cfg.seed ^ 0x7472_6565);
    for n in 2..=cfg.random_tree_n_max {
        for i in 0..cfg.trees_per_n {
            let seed = rng.below(u64::MAX);
            let g =
                generate(&GenParams { seed, weights: WeightMode::Random, ..GenParams::new(GraphKind::RandomTree, n) })?;
            out.push(Instance { name: format!("random tree n={n} #{i} seed={seed}"), graph: g });
        }
    }
    Ok(out)
}

/// The triangle, then random connected graphs with `n <= loop_n_max` and up to
/// `max_loops` independent loops; weights alternate between unit and random.
pub fn loop_corpus(cfg: &SuiteConfig) -> Result<Vec<Instance>> {
    let mut out = vec![Instance { name: "triangle".into(), graph: generate(&GenParams::new(GraphKind::Cycle, 3))? }];
    let mut rng = InstanceRng::new(cfg.seed ^ 0x6c6f_6f70);
    for i in 0..cfg.loop_graphs.saturating_sub(1) {
        let n = 3 + rng.index(cfg.loop_n_max.saturating_sub(2).max(1));
        let room = n * (n - 1) / 2 - (n - 1);
        let loops = rng.index(cfg.max_loops.min(room) + 1);
        let seed = rng.below(u64::MAX);
        let weights = if i % 2 == 0 { WeightMode::Unit } else { WeightMode::Random };
        let g = generate(&GenParams { seed, weights, loops, ..GenParams::new(GraphKind::RandomConnected, n) })?;
        out.push(Instance { name: format!("connected n={n} beta={loops} #{i} seed={seed}"), graph: g });
    }
    Ok(out)
}

/// A uniformly labeled subpartition with exactly `parts` parts.
pub fn random_subpartition(n: usize, parts: usize, rng: &mut InstanceRng) -> Result<Subpartition> {
    if parts == 0 || parts > n {
        return Err(Error::InvalidK { k: parts, n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    for i in 0..parts {
        let j = i + rng.index(n - i);
        order.swap(i, j);
    }
    let mut masks = vec![0u32; parts];
    for (i, &v) in order.iter().enumerate() {
        let label = if i < parts { i + 1 } else { rng.index(parts + 1) };
        if label > 0 {
            masks[label - 1] |= 1 << v;
        }
    }
    Ok(Subpartition::from_masks(n, &masks)?.canonical())
}

fn random_graph(n: usize, rng: &mut InstanceRng, explicit_mu: bool) -> Result<WeightedGraph> {
    let kind = match rng.index(3) {
        0 => GraphKind::RandomForest,
        1 if n >= 3 => GraphKind::Unicyclic,
        _ => GraphKind::RandomConnected,
    };
    let room = n * (n - 1) / 2 - (n - 1);
    let loops = rng.index(room.min(3) + 1);
    let seed = rng.below(u64::MAX);
    generate(&GenParams { seed, weights: WeightMode::Random, explicit_mu, loops, ..GenParams::new(kind, n) })
}

fn analyze_all(instances: &[Instance], opts: AnalysisOptions) -> Result<Vec<Analysis>> {
    instances
        .par_iter()
        .map(|inst| {
            let ks: Vec<usize> = (1..=inst.graph.n()).collect();
            analyze(&inst.graph, &ks, opts)
        })
        .collect()
}

/// Runs several suites, analysing each shared corpus only once.
pub fn run_suites(suites: &[Suite], cfg: &SuiteConfig) -> Result<Vec<SuiteOutcome>> {
    with_threads(|| run_suites_inner(suites, cfg))
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    Ok(run_suites(&[suite], cfg)?.remove(0))
}

fn run_suites_inner(suites: &[Suite], cfg: &SuiteConfig) -> Result<Vec<SuiteOutcome>> {
    let wants = |s: Suite| suites.contains(&s);
    let opts = AnalysisOptions {
        h_budget: u128::MAX,
        maxmin_budget: if [Suite::ForestIdentity, Suite::BetaChain, Suite::Bracket].iter().any(|&s| wants(s)) {
            cfg.maxmin_budget
        } else {
            0
        },
        oracle: false,
        union_family: wants(Suite::UnionInv),
        spectrum: [Suite::CheegerP2, Suite::Monotonicity, Suite::Eigensolver].iter().any(|&s| wants(s)),
    };
    let forests = if suites.iter().any(|s| s.uses_forests()) { forest_corpus(cfg)? } else { Vec::new() };
    let loops = if suites.iter().any(|s| s.uses_loops()) { loop_corpus(cfg)? } else { Vec::new() };
    let forest_analyses = analyze_all(&forests, opts)?;
    let loop_analyses = analyze_all(&loops, opts)?;

    let mut out = Vec::with_capacity(suites.len());
    for &suite in suites {
        let outcome = match suite {
            Suite::Rounding => rounding(cfg)?,
            Suite::Pigeonhole => pigeonhole(cfg)?,
            Suite::Intersection => intersection(cfg)?,
            Suite::BasicPhi => basic_phi(cfg)?,
            Suite::DisjointH => disjoint_h(cfg)?,
            Suite::Certificate => certificate(cfg)?,
            _ => {
                let mut o = SuiteOutcome::new(suite);
                if suite.uses_forests() {
                    corpus_checks(&mut o, &forests, &forest_analyses, cfg)?;
                }
                if suite.uses_loops() {
                    corpus_checks(&mut o, &loops, &loop_analyses, cfg)?;
                }
                corpus_extras(&mut o)?;
                o
            }
        };
        out.push(outcome);
    }
    Ok(out)
}

fn corpus_checks(o: &mut SuiteOutcome, instances: &[Instance], analyses: &[Analysis], cfg: &SuiteConfig) -> Result<()> {
    for (index, (inst, a)) in instances.iter().zip(analyses).enumerate() {
        o.instances += 1;
        o.checks += a.rows.len() as u64;
        let violations = match o.suite {
            Suite::ForestIdentity => {
                let mut v = checks::forest_identity(a);
                v.extend(checks::monotone_in_k(a));
                let exact = a.rows.iter().filter(|r| r.maxmin.value().is_some()).count() as u64;
                o.bump("maxmin_computed", exact);
                o.bump("maxmin_over_budget", a.rows.len() as u64 - exact);
                for r in &a.rows {
                    if r.maxmin.value().is_none() && maxmin_cost(a.n, r.k) <= cfg.maxmin_budget {
                        v.push((Some(r.k), "l_k skipped although within budget".into()));
                    }
                }
                v
            }
            Suite::BetaChain => {
                let mut v = checks::beta_chain(a);
                v.extend(checks::monotone_in_k(a));
                let strict =
                    a.rows.iter().filter(|r| r.h.value().is_some_and(|h| h.value > r.dirichlet.value)).count() as u64;
                o.bump("strict_h_above_dirichlet", strict);
                if a.rows.iter().any(|r| matches!(r.maxmin, Quantity::OverBudget { .. })) {
                    o.bump("maxmin_over_budget", 1);
                }
                v
            }
            Suite::UnionInv => {
                let mut v = checks::union_family(a);
                for r in &a.rows {
                    if !matches!(r.h_union, Some(Quantity::Value(_))) || r.h.value().is_none() {
                        v.push((Some(r.k), "union-family value missing".into()));
                    }
                }
                v
            }
            Suite::CheegerP2 => {
                if !a.degree_convention {
                    vec![(None, "mu is not the weighted degree".to_string())]
                } else {
                    let mut v = checks::cheeger_p2(a);
                    v.extend(
                        a.rows.iter().filter(|r| r.audit.is_none()).map(|r| (Some(r.k), "row not audited".to_string())),
                    );
                    o.bump("audited_rows", a.rows.iter().filter(|r| r.audit.is_some()).count() as u64);
                    v
                }
            }
            Suite::Monotonicity => {
                o.bump("audited_rows", a.rows.iter().filter(|r| r.monotonicity.is_some()).count() as u64);
                let mut v = checks::monotonicity(a);
                if a.beta == 0 {
                    v.extend(
                        a.rows
                            .iter()
                            .filter(|r| r.monotonicity.is_none())
                            .map(|r| (Some(r.k), "row not audited".to_string())),
                    );
                }
                v
            }
            Suite::Bracket => {
                let mut v = checks::bracket(a);
                v.extend(a.rows.iter().filter(|r| r.bracket.is_none()).map(|r| (Some(r.k), "no bracket".to_string())));
                o.bump(
                    "exact_brackets",
                    a.rows.iter().filter(|r| r.bracket.as_ref().is_some_and(|b| b.exact)).count() as u64,
                );
                if cfg.span_stride > 0 && index % cfg.span_stride == 0 {
                    let solver = CheegerSolver::new(&inst.graph)?;
                    let opts = CheegerOptions { budget: u128::MAX, oracle: false };
                    for k in 1..=inst.graph.n() {
                        let c = optimal_span_check(&solver, k, 32, cfg.seed ^ index as u64, opts)?;
                        o.bump("span_samples", c.samples as u64);
                        if !c.pass || c.sup_observed != c.bound {
                            v.push((Some(k), format!("sampled span supremum {} vs bound {}", c.sup_observed, c.bound)));
                        }
                    }
                }
                v
            }
            Suite::Eigensolver => {
                let mut v = checks::eigensolver(a);
                if a.spectrum.is_none() {
                    v.push((None, "no spectrum".into()));
                }
                v
            }
            _ => Vec::new(),
        };
        for (k, message) in violations {
            o.fail(inst, k, message);
        }
    }
    Ok(())
}

/// Fixed witnesses that every relevant suite must reproduce.
fn corpus_extras(o: &mut SuiteOutcome) -> Result<()> {
    let fixed = |name: &str, g: WeightedGraph| Instance { name: name.to_string(), graph: g };
    match o.suite {
        Suite::BetaChain => {
            if o.stat("strict_h_above_dirichlet").unwrap_or(0) == 0 {
                let c3 = fixed("triangle", generate(&GenParams::new(GraphKind::Cycle, 3))?);
                o.fail(&c3, Some(2), "no instance separates h_k from the Dirichlet constant".into());
            }
        }
        Suite::CheegerP2 => {
            let k2 = fixed("single edge", generate(&GenParams::new(GraphKind::Path, 2))?);
            let a = analyze(&k2.graph, &[2], AnalysisOptions::default())?;
            let r = a.row(2).expect("requested");
            let gap = r.lambda.unwrap_or(f64::NAN) - 2.0 * to_f64(&r.h.value().expect("small").value);
            o.checks += 1;
            if gap.abs() > 1e-9 {
                o.fail(&k2, Some(2), format!("upper bound should be attained, gap {gap:e}"));
            }
        }
        Suite::Bracket => {
            let c3 = fixed("triangle", generate(&GenParams::new(GraphKind::Cycle, 3))?);
            let a = analyze(&c3.graph, &[2], AnalysisOptions::default())?;
            let b = a.row(2).and_then(|r| r.bracket.clone());
            o.checks += 1;
            let want = (Rational::new(1, 2), Rational::new(1, 1), false);
            if b.as_ref().map(|b| (b.lower, b.upper, b.exact)) != Some(want) {
                o.fail(&c3, Some(2), format!("expected the bracket [1/2, 1], got {b:?}"));
            }
        }
        _ => {}
    }
    Ok(())
}

/// Sweep rounding: `phi(B) <= Phi_1(x)`, and `B` lies in the union family when
/// `x` is a combination of part indicators.
fn rounding(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut o = SuiteOutcome::new(Suite::Rounding);
    let mut rng = InstanceRng::new(cfg.seed ^ 0x726f_756e);
    let graphs = cfg.rounding_graphs.max(1);
    let jobs: Vec<(Instance, u64, usize)> = (0..graphs)
        .map(|i| {
            let n = 2 + i % cfg.rounding_n_max.saturating_sub(1).max(1);
            let g = random_graph(n, &mut rng, i % 2 == 1)?;
            let share = cfg.vectors / graphs + usize::from(i < cfg.vectors % graphs);
            Ok((Instance { name: format!("rounding graph #{i} n={n}"), graph: g }, rng.below(u64::MAX), share))
        })
        .collect::<Result<_>>()?;
    let results: Vec<Result<(u64, Vec<String>)>> = jobs
        .par_iter()
        .map(|(inst, seed, count)| {
            let g = &inst.graph;
            let n = g.n();
            let mut rng = InstanceRng::new(*seed);
            let mut bad = Vec::new();
            let mut checks = 0u64;
            for j in 0..*count {
                if j % 2 == 0 {
                    // Quantised entries create ties between level sets.
                    let x: Vec<f64> = (0..n)
                        .map(|_| {
                            let v = rng.unit_interval();
                            if rng.index(3) == 0 {
                                (v * 4.0).round() / 4.0
                            } else {
                                v
                            }
                        })
                        .collect();
                    if x.iter().all(|&v| v == 0.0) {
                        continue;
                    }
                    let b = sweep_round(g, &x)?;
                    let q = rayleigh(g, &x, 1.0)?;
                    checks += 1;
                    if to_f64(&b.expansion) > q + 1e-12 {
                        bad.push(format!("phi({}) = {} exceeds Phi_1(x) = {q} for x = {x:?}", b.set, b.expansion));
                    }
                } else {
                    let sp = random_subpartition(n, 1 + rng.index(n), &mut rng)?;
                    let mut t: Vec<Rational> =
                        (0..sp.k()).map(|_| Rational::new(rng.range(-8, 8) as i128, rng.range(1, 4) as i128)).collect();
                    if t.iter().all(Zero::is_zero) {
                        t[0] = Rational::from_integer(1);
                    }
                    let x = indicator_combination(&sp, &t)?;
                    let b = sweep_round_exact(g, &x)?;
                    let q = rayleigh_l1_exact(g, &x)?;
                    checks += 2;
                    if b.expansion > q {
                        bad.push(format!("phi({}) = {} exceeds Phi_1 = {q} on the span of {sp}", b.set, b.expansion));
                    }
                    if !union_family(&sp).contains(&b.set) {
                        bad.push(format!("{} is not a union of parts of {sp}", b.set));
                    }
                    let xf: Vec<f64> = x.iter().map(to_f64).collect();
                    let bf = sweep_round(g, &xf)?;
                    checks += 1;
                    if to_f64(&bf.expansion) > rayleigh(g, &xf, 1.0)? + 1e-12 {
                        bad.push(format!("float sweep exceeds Phi_1 on the span of {sp}"));
                    }
                }
            }
            Ok((checks, bad))
        })
        .collect();
    for ((inst, _, _), r) in jobs.iter().zip(results) {
        let (checks, bad) = r?;
        o.instances += 1;
        o.checks += checks;
        o.bump("vectors", checks);
        for m in bad {
            o.fail(inst, None, m);
        }
    }
    Ok(o)
}

/// Common unions of a `k`-part and an `(n - k + 1)`-part subpartition,
/// cross-checked against all pairs of unions.
fn pigeonhole(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut o = SuiteOutcome::new(Suite::Pigeonhole);
    let mut rng = InstanceRng::new(cfg.seed ^ 0x7069_6765);
    for i in 0..cfg.pairs {
        let n = 1 + rng.index(cfg.pair_n_max.max(1));
        let k = 1 + rng.index(n);
        let a = random_subpartition(n, k, &mut rng)?;
        let b = random_subpartition(n, n + 1 - k, &mut rng)?;
        o.instances += 1;
        o.checks += 2;
        let describe = || format!("pair #{i}: {a} and {b}");
        let (ia, ib) = match common_union(&a, &b) {
            Ok(v) => v,
            Err(e) => {
                o.failures.push(Failure { instance: describe(), k: Some(k), message: e.to_string(), graph: None });
                continue;
            }
        };
        let ua = a.union_of(&ia);
        let ub = b.union_of(&ib);
        if ia.is_empty() || ib.is_empty() || ua != ub {
            o.failures.push(Failure {
                instance: describe(),
                k: Some(k),
                message: format!("indices {ia:?} / {ib:?} give {ua} and {ub}"),
                graph: None,
            });
        }
        let fa = union_family(&a);
        let fb = union_family(&b);
        let matches = fa.members().iter().filter(|m| fb.members().contains(m)).count();
        if matches == 0 {
            o.failures.push(Failure {
                instance: describe(),
                k: Some(k),
                message: "brute force finds no common union".into(),
                graph: None,
            });
        }
        o.bump("brute_force_matches", matches as u64);
    }
    Ok(o)
}

/// Subspaces of dimension `n - k + 1` meet every `k`-dimensional indicator span.
fn intersection(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut o = SuiteOutcome::new(Suite::Intersection);
    let mut rng = InstanceRng::new(cfg.seed ^ 0x696e_7465);
    let count = (cfg.pairs / 10).max(1);
    for i in 0..count {
        let n = 1 + rng.index(cfg.pair_n_max.max(1));
        let k = 1 + rng.index(n);
        let sp = random_subpartition(n, k, &mut rng)?;
        let c = subspace_intersection_check(&sp, 4, rng.below(u64::MAX))?;
        o.instances += 1;
        o.checks += c.trials.len() as u64;
        if !c.pass {
            o.failures.push(Failure {
                instance: format!("span #{i} of {sp}"),
                k: Some(k),
                message: format!("trivial intersection: {:?}", c.trials),
                graph: None,
            });
        }
    }
    Ok(o)
}

fn small_graphs(cfg: &SuiteConfig, salt: u64, label: &str) -> Result<Vec<Instance>> {
    let mut rng = InstanceRng::new(cfg.seed ^ salt);
    (0..cfg.small_graphs)
        .map(|i| {
            let n = 2 + i % cfg.small_n_max.saturating_sub(1).max(1);
            let g = random_graph(n, &mut rng, i % 2 == 1)?;
            Ok(Instance { name: format!("{label} graph #{i} n={n}"), graph: g })
        })
        .collect()
}

/// For disjoint `A`, `B`: `phi(A u B) <= max`, and `>= min` when no edge joins them;
/// also `w(dA) = w(d(V \ A))`.
fn basic_phi(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut o = SuiteOutcome::new(Suite::BasicPhi);
    let instances = small_graphs(cfg, 0x7068_6921, "basic-phi")?;
    let results: Vec<(u64, u64, Vec<String>)> = instances
        .par_iter()
        .map(|inst| {
            let g = &inst.graph;
            let full = g.full();
            let mut bad = Vec::new();
            let (mut checks, mut nonadjacent) = (0u64, 0u64);
            for a in 1..=full {
                if a != full && g.boundary_int(a) != g.boundary_int(full & !a) {
                    bad.push(format!("boundary of {a:#b} differs from its complement"));
                }
                let rest = full & !a;
                let mut b = rest;
                while b != 0 {
                    let (pa, pb, pu) = (g.phi(a), g.phi(b), g.phi(a | b));
                    checks += 1;
                    if pu > pa.max(pb) {
                        bad.push(format!("phi of {:#b} exceeds both parts {a:#b}, {b:#b}", a | b));
                    }
                    let joined = crate::graph::bits(a).any(|v| g.adjacency_mask(v) & b != 0);
                    if !joined {
                        nonadjacent += 1;
                        if pu < pa.min(pb) {
                            bad.push(format!("phi of {:#b} is below both nonadjacent parts", a | b));
                        }
                    }
                    b = (b - 1) & rest;
                }
            }
            (checks, nonadjacent, bad)
        })
        .collect();
    for (inst, (checks, nonadjacent, bad)) in instances.iter().zip(results) {
        o.instances += 1;
        o.checks += checks;
        o.bump("nonadjacent_pairs", nonadjacent);
        for m in bad {
            o.fail(inst, None, m);
        }
    }
    Ok(o)
}

/// `h(B_1 u ... u B_m) <= min h(B_i)`, with equality for pairwise nonadjacent parts.
fn disjoint_h(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut o = SuiteOutcome::new(Suite::DisjointH);
    let instances = small_graphs(cfg, 0x6469_736a, "disjoint-h")?;
    let mut rng = InstanceRng::new(cfg.seed ^ 0x6469_736b);
    let seeds: Vec<u64> = instances.iter().map(|_| rng.below(u64::MAX)).collect();
    let results: Vec<Result<Tally<3, String>>> = instances
        .par_iter()
        .zip(&seeds)
        .map(|(inst, &seed)| {
            let g = &inst.graph;
            let n = g.n();
            let solver = CheegerSolver::new(g)?;
            let mut rng = InstanceRng::new(seed);
            let mut bad = Vec::new();
            let (mut checks, mut nonadjacent, mut strict) = (0u64, 0u64, 0u64);
            for _ in 0..200 {
                let sp = random_subpartition(n, 1 + rng.index(n), &mut rng)?;
                // Second variant: drop vertices adjacent to earlier parts.
                let mut seen = 0u32;
                let mut trimmed = Vec::new();
                for p in sp.parts() {
                    let reach = seen | crate::graph::bits(seen).fold(0, |m, v| m | g.adjacency_mask(v));
                    let kept = p.mask() & !reach;
                    if kept != 0 {
                        trimmed.push(kept);
                        seen |= kept;
                    }
                }
                let trimmed = Subpartition::from_masks(n, &trimmed)?;
                for s in [&sp, &trimmed] {
                    let union = s.support();
                    let whole = solver.dirichlet_value(&union)?;
                    let least = s.parts().iter().map(|p| solver.dirichlet_value(p)).collect::<Result<Vec<_>>>()?;
                    let least = least.into_iter().min().expect("nonempty");
                    let separated = s.parts().iter().enumerate().all(|(i, p)| {
                        s.parts()[i + 1..].iter().all(|q| p.iter().all(|v| g.adjacency_mask(v) & q.mask() == 0))
                    });
                    checks += 1;
                    if whole > least {
                        bad.push(format!("h of the union of {s} = {whole} exceeds the least part value {least}"));
                    }
                    if separated {
                        nonadjacent += 1;
                        checks += 1;
                        if whole != least {
                            bad.push(format!("nonadjacent {s}: h(union) = {whole} but min h = {least}"));
                        }
                    } else if whole < least {
                        strict += 1;
                    }
                }
            }
            Ok(([checks, nonadjacent, strict], bad))
        })
        .collect();
    for (inst, r) in instances.iter().zip(results) {
        let ([checks, nonadjacent, strict], bad) = r?;
        o.instances += 1;
        o.checks += checks;
        o.bump("nonadjacent_cases", nonadjacent);
        o.bump("strict_adjacent_cases", strict);
        for m in bad {
            o.fail(inst, None, m);
        }
    }
    Ok(o)
}

/// Forest certificates: at most `k - 1` removals and `h(A) = h_k` exactly.
fn certificate(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut o = SuiteOutcome::new(Suite::Certificate);
    let mut rng = InstanceRng::new(cfg.seed ^ 0x6365_7274);
    let instances: Vec<Instance> = (0..cfg.forests)
        .map(|i| {
            let n = 2 + i % cfg.forest_n_max.saturating_sub(1).max(1);
            let weights = if i % 2 == 0 { WeightMode::Random } else { WeightMode::Unit };
            let seed = rng.below(u64::MAX);
            let g = generate(&GenParams { seed, weights, ..GenParams::new(GraphKind::RandomForest, n) })?;
            Ok(Instance { name: format!("forest #{i} n={n} seed={seed}"), graph: g })
        })
        .collect::<Result<_>>()?;
    let results: Vec<Result<Tally<2, (usize, String)>>> = instances
        .par_iter()
        .map(|inst| {
            let g = &inst.graph;
            let n = g.n();
            let solver = CheegerSolver::new(g)?;
            let opts = CheegerOptions { budget: u128::MAX, oracle: false };
            let mut bad = Vec::new();
            let (mut checks, mut fallbacks) = (0u64, 0u64);
            for k in 1..=n {
                let c = solver.forest_certificate(k, u128::MAX)?;
                let h_k = solver.cheeger_k(k, opts)?.value;
                let lower = solver.dirichlet_k(k)?.value;
                let again = dirichlet_cheeger(g, &c.dirichlet_set)?.value;
                checks += 4;
                if c.removed.len() + 1 > k {
                    bad.push((k, format!("{} removals exceed k - 1", c.removed.len())));
                }
                if c.dirichlet_set.len() != n + 1 - k {
                    bad.push((k, format!("certificate set {} has the wrong size", c.dirichlet_set)));
                }
                if again != h_k || lower != h_k {
                    bad.push((k, format!("h(A) = {again}, Dirichlet constant = {lower}, h_k = {h_k}")));
                }
                match c.method {
                    CertificateMethod::Separators => {
                        checks += 1;
                        if let Some(m) = separation_violation(g, &c.subpartition, c.attaining_part, &c.removed) {
                            bad.push((k, m));
                        }
                    }
                    CertificateMethod::DirichletSearch => fallbacks += 1,
                }
            }
            Ok(([checks, fallbacks], bad))
        })
        .collect();
    for (inst, r) in instances.iter().zip(results) {
        let ([checks, fallbacks], bad) = r?;
        o.instances += 1;
        o.checks += checks;
        o.bump("certificates", inst.graph.n() as u64);
        o.bump("search_fallbacks", fallbacks);
        for (k, m) in bad {
            o.fail(inst, Some(k), m);
        }
    }
    Ok(o)
}

/// Independent check that removing `removed` leaves the trimmed non-attaining
/// parts and the remainder pairwise nonadjacent.
fn separation_violation(
    g: &WeightedGraph,
    sp: &Subpartition,
    attaining: Option<usize>,
    removed: &[usize],
) -> Option<String> {
    let attaining = attaining?;
    let n = g.n();
    let cut: u32 = removed.iter().fold(0, |m, &v| m | 1 << v);
    let mut group = vec![0usize; n];
    for (i, p) in sp.parts().iter().enumerate().filter(|&(i, _)| i != attaining) {
        for v in p.iter() {
            group[v] = i + 1;
        }
    }
    g.edges()
        .iter()
        .find(|e| cut >> e.u & 1 == 0 && cut >> e.v & 1 == 0 && group[e.u] != group[e.v])
        .map(|e| format!("edge {{{}, {}}} still joins two groups after removing {removed:?}", e.u, e.v))
}

/// Membership helper for callers holding plain vertex lists.
pub fn vertex_set(g: &WeightedGraph, vertices: &[usize]) -> Result<VertexSet> {
    VertexSet::from_vertices(g.n(), vertices.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> SuiteConfig {
        SuiteConfig {
            tree_n_max: 5,
            random_tree_n_max: 6,
            trees_per_n: 5,
            loop_n_max: 6,
            loop_graphs: 30,
            rounding_graphs: 10,
            rounding_n_max: 7,
            vectors: 400,
            pairs: 300,
            pair_n_max: 8,
            small_n_max: 6,
            small_graphs: 6,
            forests: 40,
            forest_n_max: 9,
            span_stride: 4,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn every_suite_passes_on_a_small_workload() {
        let outcomes = run_suites(&Suite::ALL, &tiny()).unwrap();
        for o in &outcomes {
            assert!(o.passed(), "{}: {:?}", o.suite, o.failures.first());
            assert!(o.instances > 0 && o.checks > 0, "{} did nothing", o.suite);
        }
        let beta = outcomes.iter().find(|o| o.suite == Suite::BetaChain).unwrap();
        assert!(beta.stat("strict_h_above_dirichlet").unwrap() > 0);
    }

    #[test]
    fn outcomes_are_deterministic() {
        let cfg = SuiteConfig { pairs: 50, vectors: 100, rounding_graphs: 5, ..tiny() };
        let a = run_suites(&[Suite::Pigeonhole, Suite::Rounding], &cfg).unwrap();
        let b = run_suites(&[Suite::Pigeonhole, Suite::Rounding], &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_subpartitions_are_valid() {
        let mut rng = InstanceRng::new(5);
        for _ in 0..200 {
            let n = 1 + rng.index(10);
            let k = 1 + rng.index(n);
            let sp = random_subpartition(n, k, &mut rng).unwrap();
            assert_eq!(sp.k(), k);
            assert_eq!(sp, sp.canonical());
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
