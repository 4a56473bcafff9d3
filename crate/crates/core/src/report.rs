//! Machine-readable reports.
//!
//! Every rational appears twice: exactly as `p/q` and as a fifteen-digit
//! scientific approximation. JSON and CSV renderings share the same strings.
//!
//! Compute CSV columns, one row per `k` (see [`COMPUTE_COLUMNS`]):
//! fingerprint (`n`, `edges`, `beta`, `weight_hash`), then `k`, then the exact
//! and approximate values of `h_k`, `l_k`, the Dirichlet constant and
//! `h_(k-beta)`, the approximate `lambda_k` of the normalized 2-Laplacian, the
//! 1-Laplacian bracket and the per-row checks (`pass`, `fail`, or empty when
//! the check does not apply). A value ruled out by the budget reads
//! `over-budget` with an empty approximation.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analysis::{checks, Analysis, KAnalysis, Quantity};
use crate::cheeger::{CertificateMethod, CheegerValue, ForestCertificate, Witness};
use crate::error::{Error, Result};
use crate::graph::{VertexSet, WeightedGraph};
use crate::rational::{format_approx, format_exact, to_f64, Rational};
use crate::spectra::LowerBoundKind;
use crate::verify::SuiteOutcome;

pub const OVER_BUDGET: &str = "over-budget";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub n: usize,
    pub edges: usize,
    pub beta: usize,
    /// SHA-256 of the exact vertex and edge weights.
    pub weight_hash: String,
}

pub fn fingerprint(g: &WeightedGraph) -> Fingerprint {
    let mut h = Sha256::new();
    h.update(format!("n {}\n", g.n()));
    for mu in g.mu() {
        h.update(format!("mu {}\n", format_exact(mu)));
    }
    let mut edges: Vec<(usize, usize, String)> =
        g.edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v), format_exact(&e.w))).collect();
    edges.sort();
    for (u, v, w) in edges {
        h.update(format!("edge {u} {v} {w}\n"));
    }
    let weight_hash = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
    Fingerprint { n: g.n(), edges: g.edge_count(), beta: g.betti_number(), weight_hash }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Number {
    pub exact: String,
    pub approx: String,
}

impl Number {
    pub fn new(r: &Rational) -> Self {
        Self { exact: format_exact(r), approx: format_approx(to_f64(r)) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum WitnessOut {
    Parts(Vec<Vec<String>>),
    Dirichlet { set: Vec<String>, minimizer: Vec<String> },
}

fn labels(g: &WeightedGraph, s: &VertexSet) -> Vec<String> {
    s.iter().map(|v| g.label(v).to_string()).collect()
}

fn witness(g: &WeightedGraph, w: &Witness) -> WitnessOut {
    match w {
        Witness::Subpartition(sp) => WitnessOut::Parts(sp.parts().iter().map(|p| labels(g, p)).collect()),
        Witness::Dirichlet { set, minimizer } => {
            WitnessOut::Dirichlet { set: labels(g, set), minimizer: labels(g, minimizer) }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Entry {
    Value {
        #[serde(flatten)]
        value: Number,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<WitnessOut>,
    },
    OverBudget {
        count: u128,
        budget: u128,
    },
}

impl Entry {
    fn rational(q: &Quantity<Rational>) -> Self {
        match q {
            Quantity::Value(v) => Entry::Value { value: Number::new(v), witness: None },
            Quantity::OverBudget { count, budget } => Entry::OverBudget { count: *count, budget: *budget },
        }
    }

    fn cheeger(g: &WeightedGraph, q: &Quantity<CheegerValue>) -> Self {
        match q {
            Quantity::Value(c) => Entry::Value { value: Number::new(&c.value), witness: Some(witness(g, &c.witness)) },
            Quantity::OverBudget { count, budget } => Entry::OverBudget { count: *count, budget: *budget },
        }
    }

    fn cells(&self) -> [String; 2] {
        match self {
            Entry::Value { value, .. } => [value.exact.clone(), value.approx.clone()],
            Entry::OverBudget { .. } => [OVER_BUDGET.to_string(), String::new()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketOut {
    pub lower: Number,
    pub upper: Number,
    /// `maxmin` or `dirichlet`, whichever supplied the lower end.
    pub lower_bound: &'static str,
    pub exact: bool,
}

/// `None` where a check does not apply to the instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowChecks {
    pub beta_chain: bool,
    pub forest_identity: Option<bool>,
    pub cheeger_p2: Option<bool>,
    pub monotonicity: Option<bool>,
    pub bracket: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComputeRow {
    pub k: usize,
    pub h: Entry,
    pub maxmin: Entry,
    pub dirichlet: Entry,
    pub h_shifted: Entry,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_union: Option<Entry>,
    pub lambda: Option<String>,
    pub bracket: Option<BracketOut>,
    pub checks: RowChecks,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumOut {
    pub eigenvalues: Vec<String>,
    pub max_residual: String,
    pub trace_error: String,
    pub zero_multiplicity: usize,
    pub components: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComputeReport {
    pub command: &'static str,
    pub fingerprint: Fingerprint,
    pub k_range: [usize; 2],
    pub degree_measure: bool,
    pub spectrum: Option<SpectrumOut>,
    pub rows: Vec<ComputeRow>,
    pub all_pass: bool,
    /// Whether some `h_k` was ruled out by the budget.
    pub h_over_budget: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

fn failing_ks(v: checks::Violations) -> Vec<Option<usize>> {
    v.into_iter().map(|(k, _)| k).collect()
}

fn verdict(failing: &[Option<usize>], k: usize) -> bool {
    !failing.iter().any(|&f| f == Some(k) || f.is_none())
}

impl ComputeReport {
    pub fn new(g: &WeightedGraph, a: &Analysis) -> Self {
        let chain = failing_ks({
            let mut v = checks::beta_chain(a);
            v.extend(checks::monotone_in_k(a));
            v
        });
        let forest = failing_ks(checks::forest_identity(a));
        let p2 = failing_ks(checks::cheeger_p2(a));
        let mono = failing_ks(checks::monotonicity(a));
        let bracket = failing_ks(checks::bracket(a));
        let rows: Vec<ComputeRow> = a
            .rows
            .iter()
            .map(|r| ComputeRow {
                k: r.k,
                h: Entry::cheeger(g, &r.h),
                maxmin: Entry::cheeger(g, &r.maxmin),
                dirichlet: Entry::cheeger(g, &Quantity::Value(r.dirichlet.clone())),
                h_shifted: Entry::rational(&r.h_shifted),
                h_union: r.h_union.as_ref().map(Entry::rational),
                lambda: r.lambda.map(format_approx),
                bracket: r.bracket.as_ref().map(|b| BracketOut {
                    lower: Number::new(&b.lower),
                    upper: Number::new(&b.upper),
                    lower_bound: match b.lower_kind {
                        LowerBoundKind::MaxMin => "maxmin",
                        LowerBoundKind::Dirichlet => "dirichlet",
                    },
                    exact: b.exact,
                }),
                checks: row_checks(a, r, &chain, &forest, &p2, &mono, &bracket),
            })
            .collect();
        let all_pass = rows.iter().all(|r| {
            let c = &r.checks;
            c.beta_chain
                && [c.forest_identity, c.cheeger_p2, c.monotonicity, c.bracket].iter().all(|x| x != &Some(false))
        }) && checks::eigensolver(a).is_empty();
        let ks = a.rows.iter().map(|r| r.k);
        Self {
            command: "compute",
            fingerprint: fingerprint(g),
            k_range: [ks.clone().min().unwrap_or(0), ks.max().unwrap_or(0)],
            degree_measure: a.degree_convention,
            spectrum: a.spectrum.as_ref().map(|s| SpectrumOut {
                eigenvalues: s.eigenvalues.iter().copied().map(format_approx).collect(),
                max_residual: format_approx(s.max_residual()),
                trace_error: format_approx(s.trace_error()),
                zero_multiplicity: s.zero_multiplicity(checks::ZERO_THRESHOLD),
                components: a.components,
            }),
            h_over_budget: a.rows.iter().any(|r| r.h.value().is_none()),
            rows,
            all_pass,
            wall_time_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(COMPUTE_COLUMNS).map_err(csv_error)?;
        let f = &self.fingerprint;
        for r in &self.rows {
            let mut rec = vec![f.n.to_string(), f.edges.to_string(), f.beta.to_string(), f.weight_hash.clone()];
            rec.push(r.k.to_string());
            for e in [&r.h, &r.maxmin, &r.dirichlet, &r.h_shifted] {
                rec.extend(e.cells());
            }
            rec.push(r.lambda.clone().unwrap_or_default());
            match &r.bracket {
                Some(b) => rec.extend([b.lower.exact.clone(), b.upper.exact.clone(), b.exact.to_string()]),
                None => rec.extend([String::new(), String::new(), String::new()]),
            }
            let c = &r.checks;
            rec.push(cell(Some(c.beta_chain)));
            rec.extend([c.forest_identity, c.cheeger_p2, c.monotonicity, c.bracket].map(cell));
            w.write_record(&rec).map_err(csv_error)?;
        }
        into_string(w)
    }
}

pub const COMPUTE_COLUMNS: [&str; 22] = [
    "n",
    "edges",
    "beta",
    "weight_hash",
    "k",
    "h_exact",
    "h_approx",
    "maxmin_exact",
    "maxmin_approx",
    "dirichlet_exact",
    "dirichlet_approx",
    "h_shifted_exact",
    "h_shifted_approx",
    "lambda_approx",
    "bracket_lower_exact",
    "bracket_upper_exact",
    "bracket_collapsed",
    "beta_chain",
    "forest_identity",
    "cheeger_p2",
    "monotonicity",
    "bracket",
];

fn row_checks(
    a: &Analysis,
    r: &KAnalysis,
    chain: &[Option<usize>],
    forest: &[Option<usize>],
    p2: &[Option<usize>],
    mono: &[Option<usize>],
    bracket: &[Option<usize>],
) -> RowChecks {
    RowChecks {
        beta_chain: verdict(chain, r.k),
        forest_identity: (a.beta == 0 && r.h.value().is_some()).then(|| verdict(forest, r.k)),
        cheeger_p2: r.audit.as_ref().map(|_| verdict(p2, r.k)),
        monotonicity: r.monotonicity.as_ref().map(|_| verdict(mono, r.k)),
        bracket: r.bracket.as_ref().map(|_| verdict(bracket, r.k)),
    }
}

fn cell(b: Option<bool>) -> String {
    match b {
        Some(true) => "pass".into(),
        Some(false) => "fail".into(),
        None => String::new(),
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Internal(format!("csv: {e}"))
}

fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub command: &'static str,
    pub fingerprint: Fingerprint,
    pub k: usize,
    pub h_k: Number,
    pub subpartition: Vec<Vec<String>>,
    pub attaining_part: Option<usize>,
    pub removed: Vec<String>,
    pub dirichlet_set: Vec<String>,
    pub minimizer: Vec<String>,
    pub h_of_set: Number,
    /// `h(dirichlet_set) = h_k`, compared exactly.
    pub equal: bool,
    /// `separators` or `dirichlet-search`.
    pub method: &'static str,
    pub refined: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

pub const CERTIFICATE_COLUMNS: [&str; 13] = [
    "n",
    "edges",
    "beta",
    "weight_hash",
    "k",
    "h_exact",
    "h_approx",
    "h_of_set_exact",
    "equal",
    "dirichlet_set",
    "removed",
    "subpartition",
    "method",
];

impl CertificateReport {
    pub fn new(g: &WeightedGraph, c: &ForestCertificate) -> Self {
        let minimizer = match &c.dirichlet.witness {
            Witness::Dirichlet { minimizer, .. } => labels(g, minimizer),
            Witness::Subpartition(_) => Vec::new(),
        };
        Self {
            command: "certificate",
            fingerprint: fingerprint(g),
            k: c.k,
            h_k: Number::new(&c.h_k),
            subpartition: c.subpartition.parts().iter().map(|p| labels(g, p)).collect(),
            attaining_part: c.attaining_part,
            removed: c.removed.iter().map(|&v| g.label(v).to_string()).collect(),
            dirichlet_set: labels(g, &c.dirichlet_set),
            minimizer,
            h_of_set: Number::new(&c.dirichlet.value),
            equal: c.dirichlet.value == c.h_k,
            method: match c.method {
                CertificateMethod::Separators => "separators",
                CertificateMethod::DirichletSearch => "dirichlet-search",
            },
            refined: c.refined,
            wall_time_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Vertex lists are space separated; parts are separated by `|`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CERTIFICATE_COLUMNS).map_err(csv_error)?;
        let f = &self.fingerprint;
        let parts: Vec<String> = self.subpartition.iter().map(|p| p.join(" ")).collect();
        w.write_record([
            f.n.to_string(),
            f.edges.to_string(),
            f.beta.to_string(),
            f.weight_hash.clone(),
            self.k.to_string(),
            self.h_k.exact.clone(),
            self.h_k.approx.clone(),
            self.h_of_set.exact.clone(),
            self.equal.to_string(),
            self.dirichlet_set.join(" "),
            self.removed.join(" "),
            parts.join(" | "),
            self.method.to_string(),
        ])
        .map_err(csv_error)?;
        into_string(w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureOut {
    pub instance: String,
    pub k: Option<usize>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteOut {
    pub suite: String,
    pub passed: bool,
    pub instances: usize,
    pub checks: u64,
    pub stats: BTreeMap<String, u64>,
    pub failures: Vec<FailureOut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub command: &'static str,
    pub seed: u64,
    pub suites: Vec<SuiteOut>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

pub const VERIFY_COLUMNS: [&str; 6] = ["suite", "seed", "passed", "instances", "checks", "failures"];

impl VerifyReport {
    pub fn new(seed: u64, outcomes: &[SuiteOutcome]) -> Self {
        let suites: Vec<SuiteOut> = outcomes
            .iter()
            .map(|o| SuiteOut {
                suite: o.suite.name().to_string(),
                passed: o.passed(),
                instances: o.instances,
                checks: o.checks,
                stats: o.stats.iter().cloned().collect(),
                failures: o
                    .failures
                    .iter()
                    .map(|f| FailureOut { instance: f.instance.clone(), k: f.k, message: f.message.clone() })
                    .collect(),
            })
            .collect();
        Self { command: "verify", seed, passed: suites.iter().all(|s| s.passed), suites, wall_time_ms: None }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(VERIFY_COLUMNS).map_err(csv_error)?;
        for s in &self.suites {
            w.write_record([
                s.suite.clone(),
                self.seed.to_string(),
                s.passed.to_string(),
                s.instances.to_string(),
                s.checks.to_string(),
                s.failures.len().to_string(),
            ])
            .map_err(csv_error)?;
        }
        into_string(w)
    }
}

/// Failing instances with their graphs, for rerunning through `compute`.
pub fn repro_json(outcomes: &[SuiteOutcome]) -> String {
    #[derive(Serialize)]
    struct Repro<'a> {
        suite: &'a str,
        instance: &'a str,
        k: Option<usize>,
        message: &'a str,
        graph: Option<&'a crate::io::GraphFile>,
    }
    let all: Vec<Repro<'_>> = outcomes
        .iter()
        .flat_map(|o| {
            o.failures.iter().map(|f| Repro {
                suite: o.suite.name(),
                instance: &f.instance,
                k: f.k,
                message: &f.message,
                graph: f.graph.as_ref(),
            })
        })
        .collect();
    serde_json::to_string_pretty(&all).expect("repro serializes") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{analyze, AnalysisOptions};
    use crate::graph::fixtures::*;

    #[test]
    fn fingerprint_ignores_edge_order_and_labels() {
        let a = WeightedGraph::with_default_mu(3, unit(&[(0, 1), (1, 2)])).unwrap();
        let b = WeightedGraph::with_default_mu(3, unit(&[(2, 1), (1, 0)])).unwrap();
        let b = b.with_labels(vec!["x".into(), "y".into(), "z".into()]).unwrap();
        assert_eq!(fingerprint(&a), fingerprint(&b));
        let c = path(3);
        let d = cycle(3);
        assert_ne!(fingerprint(&c).weight_hash, fingerprint(&d).weight_hash);
        assert_eq!(fingerprint(&d).beta, 1);
        assert_eq!(fingerprint(&d).weight_hash.len(), 64);
    }

    #[test]
    fn json_and_csv_share_value_strings() {
        let g = cycle(3);
        let a = analyze(&g, &[1, 2, 3], AnalysisOptions::default()).unwrap();
        let rep = ComputeReport::new(&g, &a);
        let json: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
        let csv = rep.to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap().split(',').collect::<Vec<_>>(), COMPUTE_COLUMNS);
        for (i, line) in lines.enumerate() {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells.len(), COMPUTE_COLUMNS.len());
            let row = &json["rows"][i];
            assert_eq!(cells[5], row["h"]["exact"]);
            assert_eq!(cells[6], row["h"]["approx"]);
            assert_eq!(cells[9], row["dirichlet"]["exact"]);
            assert_eq!(cells[13], row["lambda"]);
        }
        assert_eq!(json["rows"][1]["h"]["exact"], "1/1");
        assert_eq!(json["rows"][1]["dirichlet"]["exact"], "1/2");
        assert_eq!(json["fingerprint"]["beta"], 1);
        assert!(rep.all_pass);
    }

    #[test]
    fn over_budget_is_marked_per_quantity() {
        let g = path(9);
        let opts = AnalysisOptions { h_budget: 100, maxmin_budget: 100, ..AnalysisOptions::default() };
        let a = analyze(&g, &[1, 2], opts).unwrap();
        let rep = ComputeReport::new(&g, &a);
        assert!(rep.h_over_budget);
        let json: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(json["rows"][0]["h"]["status"], "over-budget");
        assert_eq!(json["rows"][0]["dirichlet"]["status"], "value");
        assert!(rep.to_csv().unwrap().contains(OVER_BUDGET));
    }

    #[test]
    fn reports_are_byte_stable() {
        let g = star(4);
        let a = analyze(&g, &[1, 2, 3], AnalysisOptions::default()).unwrap();
        let b = analyze(&g, &[1, 2, 3], AnalysisOptions::default()).unwrap();
        assert_eq!(ComputeReport::new(&g, &a).to_json(), ComputeReport::new(&g, &b).to_json());
    }
}
