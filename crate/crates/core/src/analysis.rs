//! Every constant and spectral quantity of one graph, for a range of `k`.

use std::collections::HashMap;

use num_traits::Zero;

use crate::cheeger::{CheegerOptions, CheegerSolver, CheegerValue};
use crate::combinatorics::labeling_count;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::rational::Rational;
use crate::spectra::{
    laplacian_spectrum, CheegerAudit, LowerBoundKind, MonotonicityAudit, OneLapBracket, SpectrumReport,
    DEFAULT_TOLERANCE,
};

/// A value, or the enumeration size that ruled it out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quantity<T> {
    Value(T),
    OverBudget { count: u128, budget: u128 },
}

impl<T> Quantity<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Quantity::Value(v) => Some(v),
            Quantity::OverBudget { .. } => None,
        }
    }

    pub fn map<U>(&self, f: impl FnOnce(&T) -> U) -> Quantity<U> {
        match self {
            Quantity::Value(v) => Quantity::Value(f(v)),
            Quantity::OverBudget { count, budget } => Quantity::OverBudget { count: *count, budget: *budget },
        }
    }

    fn capture(r: Result<T>) -> Result<Self> {
        match r {
            Ok(v) => Ok(Quantity::Value(v)),
            Err(Error::BudgetExceeded { count, budget }) => Ok(Quantity::OverBudget { count, budget }),
            Err(e) => Err(e),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// Cap for `h_k`, checked as `(k + 1)^n`.
    pub h_budget: u128,
    /// Cap for `l_k`, checked as `(n - k + 2)^n`.
    pub maxmin_budget: u128,
    pub oracle: bool,
    /// Recompute `h_k` through the union-closed family.
    pub union_family: bool,
    pub spectrum: bool,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            h_budget: crate::DEFAULT_BUDGET,
            maxmin_budget: crate::DEFAULT_BUDGET,
            oracle: false,
            union_family: false,
            spectrum: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KAnalysis {
    pub k: usize,
    pub h: Quantity<CheegerValue>,
    pub h_union: Option<Quantity<Rational>>,
    pub maxmin: Quantity<CheegerValue>,
    pub dirichlet: CheegerValue,
    /// `h_{k - beta}`, zero for `k <= beta`.
    pub h_shifted: Quantity<Rational>,
    pub bracket: Option<OneLapBracket>,
    pub lambda: Option<f64>,
    /// Present when `mu` is the weighted degree and a spectrum was computed.
    pub audit: Option<CheegerAudit>,
    /// Additionally requires a forest.
    pub monotonicity: Option<MonotonicityAudit>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Analysis {
    pub n: usize,
    pub edges: usize,
    pub beta: usize,
    pub components: usize,
    pub degree_convention: bool,
    pub spectrum: Option<SpectrumReport>,
    pub rows: Vec<KAnalysis>,
}

impl Analysis {
    pub fn row(&self, k: usize) -> Option<&KAnalysis> {
        self.rows.iter().find(|r| r.k == k)
    }
}

pub fn analyze(g: &WeightedGraph, ks: &[usize], opts: AnalysisOptions) -> Result<Analysis> {
    let n = g.n();
    if let Some(&k) = ks.iter().find(|&&k| k == 0 || k > n) {
        return Err(Error::InvalidK { k, n });
    }
    let solver = CheegerSolver::new(g)?;
    let beta = g.betti_number();
    let degree_convention = g.satisfies_degree_convention();
    let spectrum = if opts.spectrum { Some(laplacian_spectrum(g, DEFAULT_TOLERANCE)?) } else { None };
    let h_opts = CheegerOptions { budget: opts.h_budget, oracle: opts.oracle };

    let mut h_cache: HashMap<usize, Quantity<CheegerValue>> = HashMap::new();
    let mut h_at = |j: usize| -> Result<Quantity<CheegerValue>> {
        if let Some(q) = h_cache.get(&j) {
            return Ok(q.clone());
        }
        let q = Quantity::capture(solver.cheeger_k(j, h_opts))?;
        h_cache.insert(j, q.clone());
        Ok(q)
    };
    let zero_or = |j: Option<usize>,
                   h_at: &mut dyn FnMut(usize) -> Result<Quantity<CheegerValue>>|
     -> Result<Quantity<Rational>> {
        match j {
            Some(j) if j >= 1 => Ok(h_at(j)?.map(|v| v.value)),
            _ => Ok(Quantity::Value(Rational::zero())),
        }
    };

    let mut rows = Vec::with_capacity(ks.len());
    for &k in ks {
        let h = h_at(k)?;
        let h_union = if opts.union_family {
            Some(Quantity::capture(solver.cheeger_k_union_family(k, opts.h_budget).map(|v| v.value))?)
        } else {
            None
        };
        let maxmin = Quantity::capture(solver.maxmin_cheeger(k, opts.maxmin_budget))?;
        let dirichlet = solver.dirichlet_k(k)?;
        let h_shifted = zero_or(k.checked_sub(beta), &mut h_at)?;
        let bracket = match (h.value(), maxmin.value()) {
            (Some(upper), Some(lower)) => {
                Some(OneLapBracket::from_values(k, lower.value, LowerBoundKind::MaxMin, upper.value)?)
            }
            (Some(upper), None) => {
                Some(OneLapBracket::from_values(k, dirichlet.value, LowerBoundKind::Dirichlet, upper.value)?)
            }
            (None, _) => None,
        };
        let lambda = spectrum.as_ref().and_then(|s| s.lambda(k));
        let audit = match (lambda, h.value(), h_shifted.value()) {
            (Some(lambda), Some(hk), Some(shifted)) if degree_convention => {
                let h_prev = if beta == 1 { zero_or(k.checked_sub(1), &mut h_at)?.value().copied() } else { None };
                Some(CheegerAudit::from_values(k, beta, lambda, hk.value, *shifted, h_prev))
            }
            _ => None,
        };
        let monotonicity = match (lambda, h.value()) {
            (Some(lambda), Some(hk)) if degree_convention && beta == 0 => {
                Some(MonotonicityAudit::from_values(k, hk.value, lambda))
            }
            _ => None,
        };
        rows.push(KAnalysis { k, h, h_union, maxmin, dirichlet, h_shifted, bracket, lambda, audit, monotonicity });
    }
    Ok(Analysis { n, edges: g.edge_count(), beta, components: g.component_count(), degree_convention, spectrum, rows })
}

/// Labelings the `l_k` enumeration is charged for.
pub fn maxmin_cost(n: usize, k: usize) -> u128 {
    labeling_count(n, n + 1 - k)
}

/// Checks shared by the report and the verification suites. Each returns
/// `(k, message)` for every violated property.
pub mod checks {
    use super::*;

    pub type Violations = Vec<(Option<usize>, String)>;

    /// Forests: `h_k`, `l_k` (when computed) and the Dirichlet constant coincide.
    pub fn forest_identity(a: &Analysis) -> Violations {
        let mut out = Vec::new();
        if a.beta != 0 {
            return out;
        }
        for r in &a.rows {
            let Some(h) = r.h.value() else { continue };
            if h.value != r.dirichlet.value {
                out.push((Some(r.k), format!("h_k = {} but Dirichlet constant = {}", h.value, r.dirichlet.value)));
            }
            if let Some(l) = r.maxmin.value() {
                if l.value != h.value {
                    out.push((Some(r.k), format!("h_k = {} but l_k = {}", h.value, l.value)));
                }
            }
        }
        out
    }

    pub fn monotone_in_k(a: &Analysis) -> Violations {
        let mut out = Vec::new();
        let mut prev: Option<(usize, Rational)> = None;
        for r in &a.rows {
            if let Some(h) = r.h.value() {
                if let Some((j, p)) = prev {
                    if j < r.k && p > h.value {
                        out.push((Some(r.k), format!("h_{j} = {p} exceeds h_{} = {}", r.k, h.value)));
                    }
                }
                prev = Some((r.k, h.value));
            }
        }
        out
    }

    /// `h_k >= l_k >= dirichlet_k >= h_{k - beta}`.
    pub fn beta_chain(a: &Analysis) -> Violations {
        let mut out = Vec::new();
        for r in &a.rows {
            let d = r.dirichlet.value;
            if let Some(h) = r.h.value() {
                if h.value < d {
                    out.push((Some(r.k), format!("h_k = {} < Dirichlet constant {d}", h.value)));
                }
                if let Some(l) = r.maxmin.value() {
                    if h.value < l.value {
                        out.push((Some(r.k), format!("h_k = {} < l_k = {}", h.value, l.value)));
                    }
                }
            }
            if let Some(l) = r.maxmin.value() {
                if l.value < d {
                    out.push((Some(r.k), format!("l_k = {} < Dirichlet constant {d}", l.value)));
                }
            }
            if let Some(s) = r.h_shifted.value() {
                if d < *s {
                    out.push((Some(r.k), format!("Dirichlet constant {d} < h_(k-beta) = {s}")));
                }
            }
        }
        out
    }

    pub fn union_family(a: &Analysis) -> Violations {
        let mut out = Vec::new();
        for r in &a.rows {
            if let (Some(h), Some(Quantity::Value(u))) = (r.h.value(), &r.h_union) {
                if h.value != *u {
                    out.push((Some(r.k), format!("max over parts gives {} but union family gives {u}", h.value)));
                }
            }
        }
        out
    }

    pub fn cheeger_p2(a: &Analysis) -> Violations {
        let mut out = Vec::new();
        for r in &a.rows {
            if let Some(audit) = &r.audit {
                if !audit.all_hold {
                    out.push((Some(r.k), format!("p = 2 inequality fails: {audit:?}")));
                }
            }
        }
        out
    }

    pub fn monotonicity(a: &Analysis) -> Violations {
        let mut out = Vec::new();
        for r in &a.rows {
            if let Some(m) = &r.monotonicity {
                if !m.all_hold() {
                    out.push((Some(r.k), format!("endpoint monotonicity fails: {m:?}")));
                }
            }
        }
        out
    }

    /// Brackets are ordered, and collapse on forests.
    pub fn bracket(a: &Analysis) -> Violations {
        let mut out = Vec::new();
        for r in &a.rows {
            if let Some(b) = &r.bracket {
                if b.lower > b.upper {
                    out.push((Some(r.k), format!("bracket [{}, {}] is inverted", b.lower, b.upper)));
                }
                if a.beta == 0 && !b.exact {
                    out.push((Some(r.k), format!("forest bracket [{}, {}] did not collapse", b.lower, b.upper)));
                }
            }
        }
        out
    }

    pub const RESIDUAL_LIMIT: f64 = 1e-8;
    pub const TRACE_LIMIT: f64 = 1e-8;
    pub const ZERO_THRESHOLD: f64 = 1e-9;

    pub fn eigensolver(a: &Analysis) -> Violations {
        let mut out = Vec::new();
        let Some(s) = &a.spectrum else { return out };
        if s.max_residual() > RESIDUAL_LIMIT {
            out.push((None, format!("residual {:e} above {RESIDUAL_LIMIT:e}", s.max_residual())));
        }
        if s.trace_error() > TRACE_LIMIT {
            out.push((None, format!("eigenvalue sum misses the trace by {:e}", s.trace_error())));
        }
        if s.eigenvalues.first().is_some_and(|l| l.abs() > ZERO_THRESHOLD) {
            out.push((None, format!("smallest eigenvalue {:e} is not zero", s.eigenvalues[0])));
        }
        let zeros = s.zero_multiplicity(ZERO_THRESHOLD);
        if zeros != a.components {
            out.push((None, format!("{zeros} zero eigenvalues for {} components", a.components)));
        }
        out
    }
}
