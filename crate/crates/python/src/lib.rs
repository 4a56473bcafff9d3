//! Python bindings. Exact values are returned as `fractions.Fraction`,
//! vertices as 0-based indices (`Graph.labels` maps them back), and reports as
//! plain dicts with the same layout as the CLI's JSON output.

use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cheeger_lab::analysis::{analyze, AnalysisOptions};
use cheeger_lab::generate::{generate, GenParams, GraphKind, WeightMode};
use cheeger_lab::io::{emit_json, emit_tsv, parse_json, parse_tsv, read_graph};
use cheeger_lab::report::{CertificateReport, ComputeReport, VerifyReport};
use cheeger_lab::verify::{run_suites, Suite, SuiteConfig};
use cheeger_lab::{
    parse_rational, CheegerOptions, CheegerSolver, CheegerValue, Error, Rational, Subpartition, VertexSet,
    WeightedGraph, Witness, DEFAULT_BUDGET,
};

create_exception!(cheeger_lab, CheegerError, PyValueError, "Invalid input or failed precondition.");
create_exception!(cheeger_lab, BudgetExceeded, CheegerError, "The enumeration would exceed the budget.");

fn err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } => BudgetExceeded::new_err(e.to_string()),
        Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        _ => CheegerError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((*r.numer(), *r.denom()))
}

/// Accepts `int`, `Fraction`, or strings such as `"3/7"` and `"0.25"`; floats
/// go through their shortest decimal form.
fn rational(x: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(&x.str()?.to_cow()?).map_err(|_| CheegerError::new_err(format!("not a rational: {x}")))
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.getattr("loads")?.call1((text,))
}

fn parts(sp: &Subpartition) -> Vec<Vec<usize>> {
    sp.parts().iter().map(VertexSet::to_vec).collect()
}

fn budget(b: Option<u128>) -> u128 {
    b.unwrap_or(DEFAULT_BUDGET)
}

/// Weighted graph with positive rational vertex measure `mu` and edge weights.
#[pyclass(name = "Graph", module = "cheeger_lab", frozen)]
pub struct PyGraph {
    inner: WeightedGraph,
}

#[pymethods]
impl PyGraph {
    /// `edges` holds `(u, v, w)` triples over `0..n`; `mu` defaults to the weighted degree.
    #[new]
    #[pyo3(signature = (n, edges, mu = None))]
    fn new(
        n: usize,
        edges: Vec<(usize, usize, Bound<'_, PyAny>)>,
        mu: Option<Vec<Bound<'_, PyAny>>>,
    ) -> PyResult<Self> {
        let edges: Vec<(usize, usize, Rational)> =
            edges.iter().map(|(u, v, w)| Ok((*u, *v, rational(w)?))).collect::<PyResult<_>>()?;
        let inner = match mu {
            Some(mu) => {
                if mu.len() != n {
                    return Err(CheegerError::new_err(format!("mu has {} entries for {n} vertices", mu.len())));
                }
                let mu = mu.iter().map(rational).collect::<PyResult<_>>()?;
                WeightedGraph::new(mu, edges)
            }
            None => WeightedGraph::with_default_mu(n, edges),
        };
        Ok(Self { inner: inner.map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: parse_json(text).map_err(err)? })
    }

    #[staticmethod]
    fn from_tsv(text: &str) -> PyResult<Self> {
        Ok(Self { inner: parse_tsv(text).map_err(err)? })
    }

    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        Ok(Self { inner: read_graph(&path).map_err(err)? })
    }

    /// Seeded instance of `path`, `star`, `cycle`, `random-tree`, `random-forest`,
    /// `unicyclic` or `random-connected`.
    #[staticmethod]
    #[pyo3(signature = (kind, n, seed = 0, random_weights = false, explicit_mu = false, loops = 1))]
    fn generate(
        kind: &str,
        n: usize,
        seed: u64,
        random_weights: bool,
        explicit_mu: bool,
        loops: usize,
    ) -> PyResult<Self> {
        let kind: GraphKind = kind.parse().map_err(err)?;
        let weights = if random_weights { WeightMode::Random } else { WeightMode::Unit };
        let params = GenParams { seed, weights, explicit_mu, loops, ..GenParams::new(kind, n) };
        Ok(Self { inner: generate(&params).map_err(err)? })
    }

    #[pyo3(signature = (explicit_mu = false))]
    fn to_json(&self, explicit_mu: bool) -> String {
        emit_json(&self.inner, explicit_mu)
    }

    fn to_tsv(&self) -> PyResult<String> {
        emit_tsv(&self.inner).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn mu<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.inner.mu().iter().map(|m| fraction(py, m)).collect()
    }

    #[getter]
    fn edges<'py>(&self, py: Python<'py>) -> PyResult<Vec<(usize, usize, Bound<'py, PyAny>)>> {
        self.inner.edges().iter().map(|e| Ok((e.u, e.v, fraction(py, &e.w)?))).collect()
    }

    #[getter]
    fn beta(&self) -> usize {
        self.inner.betti_number()
    }

    #[getter]
    fn components(&self) -> usize {
        self.inner.component_count()
    }

    fn is_forest(&self) -> bool {
        self.inner.is_forest()
    }

    /// `w(boundary A) / mu(A)`.
    fn expansion<'py>(&self, py: Python<'py>, vertices: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
        let a = VertexSet::from_vertices(self.inner.n(), vertices).map_err(err)?;
        fraction(py, &self.inner.expansion(&a).map_err(err)?.expansion)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={}, beta={})", self.inner.n(), self.inner.edge_count(), self.inner.betti_number())
    }
}

fn solver(g: &PyGraph) -> PyResult<CheegerSolver<'_>> {
    CheegerSolver::new(&g.inner).map_err(err)
}

fn value_and_parts<'py>(py: Python<'py>, v: &CheegerValue) -> PyResult<(Bound<'py, PyAny>, Vec<Vec<usize>>)> {
    let parts = match &v.witness {
        Witness::Subpartition(sp) => parts(sp),
        Witness::Dirichlet { minimizer, .. } => vec![minimizer.to_vec()],
    };
    Ok((fraction(py, &v.value)?, parts))
}

/// `h_k` with an optimal k-subpartition.
#[pyfunction]
#[pyo3(signature = (g, k, budget = None, oracle = false))]
fn cheeger_k<'py>(
    py: Python<'py>,
    g: &PyGraph,
    k: usize,
    budget: Option<u128>,
    oracle: bool,
) -> PyResult<(Bound<'py, PyAny>, Vec<Vec<usize>>)> {
    let opts = CheegerOptions { budget: self::budget(budget), oracle };
    let v = py.detach(|| cheeger_lab::cheeger_k(&g.inner, k, opts)).map_err(err)?;
    value_and_parts(py, &v)
}

/// `l_k` with a maximizing (n - k + 1)-subpartition.
#[pyfunction]
#[pyo3(signature = (g, k, budget = None))]
fn maxmin_cheeger<'py>(
    py: Python<'py>,
    g: &PyGraph,
    k: usize,
    budget: Option<u128>,
) -> PyResult<(Bound<'py, PyAny>, Vec<Vec<usize>>)> {
    let v = py.detach(|| cheeger_lab::maxmin_cheeger(&g.inner, k, self::budget(budget))).map_err(err)?;
    value_and_parts(py, &v)
}

/// The Dirichlet constant for `k` with its set `A` and the minimizing subset.
#[pyfunction]
fn dirichlet_k<'py>(py: Python<'py>, g: &PyGraph, k: usize) -> PyResult<(Bound<'py, PyAny>, Vec<usize>, Vec<usize>)> {
    let v = py.detach(|| cheeger_lab::dirichlet_k(&g.inner, k)).map_err(err)?;
    match &v.witness {
        Witness::Dirichlet { set, minimizer } => Ok((fraction(py, &v.value)?, set.to_vec(), minimizer.to_vec())),
        Witness::Subpartition(_) => Err(PyRuntimeError::new_err("unexpected witness")),
    }
}

/// `h(A)` for a vertex set `A`.
#[pyfunction]
fn dirichlet_cheeger<'py>(py: Python<'py>, g: &PyGraph, vertices: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
    let a = VertexSet::from_vertices(g.inner.n(), vertices).map_err(err)?;
    fraction(py, &cheeger_lab::dirichlet_cheeger(&g.inner, &a).map_err(err)?.value)
}

/// Eigenvalues of the normalized 2-Laplacian, ascending.
#[pyfunction]
fn laplacian_spectrum(g: &PyGraph) -> PyResult<Vec<f64>> {
    Ok(cheeger_lab::laplacian_spectrum(&g.inner, 1e-10).map_err(err)?.eigenvalues)
}

/// Best level set of `x` and its exact expansion.
#[pyfunction]
fn sweep_round<'py>(py: Python<'py>, g: &PyGraph, x: Vec<f64>) -> PyResult<(Vec<usize>, Bound<'py, PyAny>)> {
    let s = cheeger_lab::sweep_round(&g.inner, &x).map_err(err)?;
    Ok((s.set.to_vec(), fraction(py, &s.expansion)?))
}

/// Part indices of `a` and of `b` with equal unions.
#[pyfunction]
fn common_union(n: usize, a: Vec<Vec<usize>>, b: Vec<Vec<usize>>) -> PyResult<(Vec<usize>, Vec<usize>)> {
    let build = |ps: Vec<Vec<usize>>| -> PyResult<Subpartition> {
        let sets =
            ps.into_iter().map(|p| VertexSet::from_vertices(n, p)).collect::<Result<Vec<_>, _>>().map_err(err)?;
        Subpartition::new(sets).map_err(err)
    };
    cheeger_lab::common_union(&build(a)?, &build(b)?).map_err(err)
}

/// Every constant, the spectrum and the per-k checks, as in `cheeger-lab compute`.
#[pyfunction]
#[pyo3(signature = (g, ks = None, budget = None, oracle = false, union_family = false))]
fn compute<'py>(
    py: Python<'py>,
    g: &PyGraph,
    ks: Option<Vec<usize>>,
    budget: Option<u128>,
    oracle: bool,
    union_family: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let ks = ks.unwrap_or_else(|| (1..=g.inner.n()).collect());
    let b = self::budget(budget);
    let opts = AnalysisOptions { h_budget: b, maxmin_budget: b, oracle, union_family, spectrum: true };
    let text =
        py.detach(|| analyze(&g.inner, &ks, opts).map(|a| ComputeReport::new(&g.inner, &a).to_json())).map_err(err)?;
    json_to_py(py, &text)
}

/// Dirichlet-set certificate on a forest, as in `cheeger-lab certificate`.
#[pyfunction]
#[pyo3(signature = (g, k, budget = None))]
fn forest_certificate<'py>(
    py: Python<'py>,
    g: &PyGraph,
    k: usize,
    budget: Option<u128>,
) -> PyResult<Bound<'py, PyAny>> {
    let s = solver(g)?;
    let c = py.detach(|| s.forest_certificate(k, self::budget(budget))).map_err(err)?;
    json_to_py(py, &CertificateReport::new(&g.inner, &c).to_json())
}

/// `h_k >= l_k >= dirichlet_k >= h_(k - beta)` for one k.
#[pyfunction]
#[pyo3(signature = (g, k, budget = None))]
fn beta_chain<'py>(py: Python<'py>, g: &PyGraph, k: usize, budget: Option<u128>) -> PyResult<Bound<'py, PyDict>> {
    let opts = CheegerOptions { budget: self::budget(budget), oracle: false };
    let c = py.detach(|| cheeger_lab::beta_chain(&g.inner, k, opts)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("k", c.k)?;
    d.set_item("beta", c.beta)?;
    d.set_item("h_k", fraction(py, &c.h_k)?)?;
    d.set_item("maxmin", c.maxmin.as_ref().map(|m| fraction(py, m)).transpose()?)?;
    d.set_item("dirichlet", fraction(py, &c.dirichlet)?)?;
    d.set_item("shifted", fraction(py, &c.shifted)?)?;
    d.set_item("all_hold", c.all_hold)?;
    Ok(d)
}

/// Runs a property suite (or `"all"`) and returns the verify report.
#[pyfunction]
#[pyo3(signature = (suite, seed = 1, n_max = None, graphs = None, vectors = None))]
fn verify<'py>(
    py: Python<'py>,
    suite: &str,
    seed: u64,
    n_max: Option<usize>,
    graphs: Option<usize>,
    vectors: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse().map_err(err)?] };
    let mut cfg = SuiteConfig { seed, ..SuiteConfig::default() };
    for &s in &suites {
        if let Some(n) = n_max {
            cfg.set_n_max(s, n);
        }
        if let Some(c) = graphs {
            cfg.set_graphs(s, c);
        }
    }
    if let Some(v) = vectors {
        cfg.vectors = v;
    }
    let outcomes = py.detach(|| run_suites(&suites, &cfg)).map_err(err)?;
    json_to_py(py, &VerifyReport::new(seed, &outcomes).to_json())
}

#[pymodule]
#[pyo3(name = "cheeger_lab")]
pub fn cheeger_lab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add("CheegerError", m.py().get_type::<CheegerError>())?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add("DEFAULT_BUDGET", DEFAULT_BUDGET)?;
    m.add_function(wrap_pyfunction!(cheeger_k, m)?)?;
    m.add_function(wrap_pyfunction!(maxmin_cheeger, m)?)?;
    m.add_function(wrap_pyfunction!(dirichlet_k, m)?)?;
    m.add_function(wrap_pyfunction!(dirichlet_cheeger, m)?)?;
    m.add_function(wrap_pyfunction!(laplacian_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_round, m)?)?;
    m.add_function(wrap_pyfunction!(common_union, m)?)?;
    m.add_function(wrap_pyfunction!(compute, m)?)?;
    m.add_function(wrap_pyfunction!(forest_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(beta_chain, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
