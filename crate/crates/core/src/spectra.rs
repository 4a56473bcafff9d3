//! Rayleigh quotients, the normalized Laplacian pencil, sweep rounding and the
//! spectral audits that compare eigenvalues against Cheeger constants.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::cheeger::{CheegerOptions, CheegerSolver, Witness};
use crate::combinatorics::Subpartition;
use crate::error::{Error, Result};
use crate::graph::{VertexSet, WeightedGraph};
use crate::rational::{to_f64, Rational};

/// Float slack used by the spectral inequality checks.
pub const INEQUALITY_SLACK: f64 = 1e-8;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

fn check_len(g: &WeightedGraph, len: usize) -> Result<()> {
    if len != g.n() {
        return Err(Error::LengthMismatch { got: len, expected: g.n() });
    }
    Ok(())
}

/// `sum_{u~v} w_uv |x_u - x_v|^p / sum_v mu_v |x_v|^p`.
pub fn rayleigh(g: &WeightedGraph, x: &[f64], p: f64) -> Result<f64> {
    check_len(g, x.len())?;
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidP(p));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    if x.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroVector);
    }
    let num: f64 = g.edges().iter().map(|e| to_f64(&e.w) * (x[e.u] - x[e.v]).abs().powf(p)).sum();
    let den: f64 = g.mu().iter().zip(x).map(|(m, v)| to_f64(m) * v.abs().powf(p)).sum();
    Ok(num / den)
}

/// Exact `p = 1` quotient for rational vectors.
pub fn rayleigh_l1_exact(g: &WeightedGraph, x: &[Rational]) -> Result<Rational> {
    check_len(g, x.len())?;
    if x.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let num = g.edges().iter().fold(Rational::zero(), |acc, e| acc + e.w * (x[e.u] - x[e.v]).abs());
    let den = g.mu().iter().zip(x).fold(Rational::zero(), |acc, (m, v)| acc + *m * v.abs());
    Ok(num / den)
}

/// Eigen-decomposition of `L x = lambda M x`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `||L x - lambda M x||_2` for each pair, with `x^T M x = 1`.
    pub residuals: Vec<f64>,
    /// Generalized eigenvectors, one per eigenvalue.
    pub eigenvectors: Vec<Vec<f64>>,
    pub tolerance: f64,
    /// Trace of the symmetrized matrix, `sum_v deg(v) / mu_v`.
    pub trace: f64,
    pub sweeps: usize,
}

impl SpectrumReport {
    /// `lambda_k`, 1-based.
    pub fn lambda(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.eigenvalues.get(i).copied())
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn trace_error(&self) -> f64 {
        (self.eigenvalues.iter().sum::<f64>() - self.trace).abs()
    }

    pub fn zero_multiplicity(&self, threshold: f64) -> usize {
        self.eigenvalues.iter().filter(|l| l.abs() <= threshold).count()
    }
}

/// Cyclic Jacobi on `M^{-1/2} L M^{-1/2}`.
#[allow(clippy::needless_range_loop)]
pub fn laplacian_spectrum(g: &WeightedGraph, tolerance: f64) -> Result<SpectrumReport> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::Precondition(format!("tolerance must be positive, got {tolerance}")));
    }
    let n = g.n();
    let mu: Vec<f64> = g.mu().iter().map(to_f64).collect();
    let scale: Vec<f64> = mu.iter().map(|m| m.sqrt().recip()).collect();
    let mut lap = vec![vec![0.0; n]; n];
    for e in g.edges() {
        let w = to_f64(&e.w);
        lap[e.u][e.u] += w;
        lap[e.v][e.v] += w;
        lap[e.u][e.v] -= w;
        lap[e.v][e.u] -= w;
    }
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| scale[i] * lap[i][j] * scale[j]).collect()).collect();
    let trace = (0..n).map(|i| a[i][i]).sum();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();

    let off = |a: &[Vec<f64>]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += a[i][j] * a[i][j];
            }
        }
        s.sqrt()
    };
    let target = tolerance * 1e-3;
    let mut sweeps = 0;
    while off(&a) > target && sweeps < 100 {
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = (t * t + 1.0).sqrt().recip();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    if off(&a) > target {
        return Err(Error::Internal(format!("Jacobi iteration did not converge in {sweeps} sweeps")));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for &col in &order {
        let lambda = a[col][col];
        let x: Vec<f64> = (0..n).map(|i| scale[i] * v[i][col]).collect();
        let res = (0..n)
            .map(|i| {
                let lx: f64 = (0..n).map(|j| lap[i][j] * x[j]).sum();
                (lx - lambda * mu[i] * x[i]).powi(2)
            })
            .sum::<f64>()
            .sqrt();
        eigenvalues.push(lambda);
        eigenvectors.push(x);
        residuals.push(res);
    }
    Ok(SpectrumReport { eigenvalues, residuals, eigenvectors, tolerance, trace, sweeps })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignedPart {
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepResult {
    pub set: VertexSet,
    pub expansion: Rational,
    /// Which of `x+`, `x-` produced the level set.
    pub part: SignedPart,
}

/// Level sets `{v : y_v >= s}` of `y = x+` and `y = x-`, over every distinct
/// positive `s`; returns the one with least expansion.
///
/// Ties: smaller cardinality, then smaller mask, then the positive part.
pub fn sweep_round(g: &WeightedGraph, x: &[f64]) -> Result<SweepResult> {
    check_len(g, x.len())?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    if x.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroVector);
    }
    let pos: Vec<f64> = x.iter().map(|&v| v.max(0.0)).collect();
    let neg: Vec<f64> = x.iter().map(|&v| (-v).max(0.0)).collect();
    best_level_set(g, &pos, &neg, |a, b| a.total_cmp(b), |v| *v > 0.0)
}

/// [`sweep_round`] on an exact rational vector.
pub fn sweep_round_exact(g: &WeightedGraph, x: &[Rational]) -> Result<SweepResult> {
    check_len(g, x.len())?;
    if x.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let zero = Rational::zero();
    let pos: Vec<Rational> = x.iter().map(|v| *v.max(&zero)).collect();
    let neg: Vec<Rational> = x.iter().map(|v| (-*v).max(zero)).collect();
    best_level_set(g, &pos, &neg, Ord::cmp, Signed::is_positive)
}

fn best_level_set<T>(
    g: &WeightedGraph,
    pos: &[T],
    neg: &[T],
    cmp: impl Fn(&T, &T) -> std::cmp::Ordering,
    positive: impl Fn(&T) -> bool,
) -> Result<SweepResult> {
    let mut best: Option<(crate::rational::Frac, u32, u32, SignedPart)> = None;
    for (values, part) in [(pos, SignedPart::Positive), (neg, SignedPart::Negative)] {
        let mut order: Vec<usize> = (0..values.len()).filter(|&v| positive(&values[v])).collect();
        order.sort_by(|&a, &b| cmp(&values[b], &values[a]));
        let mut mask = 0u32;
        for (i, &v) in order.iter().enumerate() {
            mask |= 1 << v;
            let closes_level = order.get(i + 1).is_none_or(|&next| cmp(&values[next], &values[v]).is_ne());
            if !closes_level {
                continue;
            }
            let phi = g.phi(mask);
            let key = (phi, mask.count_ones(), mask);
            if best.is_none_or(|(bp, bc, bm, _)| key < (bp, bc, bm)) {
                best = Some((phi, mask.count_ones(), mask, part));
            }
        }
    }
    let (phi, _, mask, part) = best.ok_or(Error::ZeroVector)?;
    Ok(SweepResult { set: VertexSet::from_mask(g.n(), mask), expansion: phi.to_rational(), part })
}

/// Builds `sum_i t_i 1_{A_i}`.
pub fn indicator_combination(sp: &Subpartition, t: &[Rational]) -> Result<Vec<Rational>> {
    if t.len() != sp.k() {
        return Err(Error::LengthMismatch { got: t.len(), expected: sp.k() });
    }
    let mut x = vec![Rational::zero(); sp.universe()];
    for (part, ti) in sp.parts().iter().zip(t) {
        for v in part.iter() {
            x[v] = *ti;
        }
    }
    Ok(x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanSupCheck {
    pub samples: usize,
    /// `max_i phi(A_i)`.
    pub bound: Rational,
    /// Largest sampled quotient.
    pub sup_observed: Rational,
    /// Every coordinate direction reproduced `phi(A_i)` exactly.
    pub coordinates_exact: bool,
    pub violations: usize,
    pub pass: bool,
}

/// Samples the L1 quotient over the span of the indicators of `sp`: every
/// coordinate direction, every sign pattern (up to 2^12) and `samples` random
/// integer draws. Each sample must stay at or below `max_i phi(A_i)`.
pub fn indicator_span_sup_check(
    g: &WeightedGraph,
    sp: &Subpartition,
    samples: usize,
    seed: u64,
) -> Result<SpanSupCheck> {
    if sp.universe() != g.n() {
        return Err(Error::LengthMismatch { got: sp.universe(), expected: g.n() });
    }
    let k = sp.k();
    let phis: Vec<Rational> = sp.parts().iter().map(|p| g.expansion(p).map(|c| c.expansion)).collect::<Result<_>>()?;
    let bound = phis.iter().copied().max().ok_or(Error::EmptySet)?;
    let mut sup_observed = Rational::zero();
    let mut violations = 0;
    let mut count = 0;
    let mut eval = |t: &[Rational]| -> Result<Rational> {
        let q = rayleigh_l1_exact(g, &indicator_combination(sp, t)?)?;
        count += 1;
        sup_observed = sup_observed.max(q);
        if q > bound {
            violations += 1;
        }
        Ok(q)
    };

    let mut coordinates_exact = true;
    for i in 0..k {
        let mut t = vec![Rational::zero(); k];
        t[i] = Rational::from_integer(1);
        coordinates_exact &= eval(&t)? == phis[i];
    }
    for signs in 0..1u32 << k.min(12) {
        let t: Vec<Rational> =
            (0..k).map(|i| Rational::from_integer(if signs >> i & 1 == 1 { -1 } else { 1 })).collect();
        eval(&t)?;
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    for _ in 0..samples {
        let mut t: Vec<Rational> =
            (0..k).map(|_| Rational::new(rng.random_range(-12..=12), rng.random_range(1..=4))).collect();
        if t.iter().all(Zero::is_zero) {
            t[0] = Rational::from_integer(1);
        }
        eval(&t)?;
    }
    Ok(SpanSupCheck {
        samples: count,
        bound,
        sup_observed,
        coordinates_exact,
        violations,
        pass: violations == 0 && coordinates_exact,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowerBoundKind {
    MaxMin,
    /// `l_k` was over budget; the Dirichlet constant stands in.
    Dirichlet,
}

/// Enclosure of the k-th 1-Laplacian min-max eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneLapBracket {
    pub k: usize,
    pub lower: Rational,
    pub upper: Rational,
    pub lower_kind: LowerBoundKind,
    pub exact: bool,
}

impl OneLapBracket {
    /// The pinned eigenvalue when the bounds coincide.
    pub fn value(&self) -> Option<Rational> {
        self.exact.then_some(self.upper)
    }
}

pub fn one_lap_bracket(g: &WeightedGraph, k: usize, opts: CheegerOptions) -> Result<OneLapBracket> {
    one_lap_bracket_with(&CheegerSolver::new(g)?, k, opts)
}

pub fn one_lap_bracket_with(solver: &CheegerSolver<'_>, k: usize, opts: CheegerOptions) -> Result<OneLapBracket> {
    let upper = solver.cheeger_k(k, opts)?.value;
    let (lower, lower_kind) = match solver.maxmin_cheeger(k, opts.budget) {
        Ok(v) => (v.value, LowerBoundKind::MaxMin),
        Err(Error::BudgetExceeded { .. }) => (solver.dirichlet_k(k)?.value, LowerBoundKind::Dirichlet),
        Err(e) => return Err(e),
    };
    OneLapBracket::from_values(k, lower, lower_kind, upper)
}

impl OneLapBracket {
    pub fn from_values(k: usize, lower: Rational, lower_kind: LowerBoundKind, upper: Rational) -> Result<Self> {
        if lower > upper {
            return Err(Error::Internal(format!("bracket inverted at k = {k}: {lower} > {upper}")));
        }
        Ok(OneLapBracket { k, lower, upper, lower_kind, exact: lower == upper })
    }
}

/// `lower <= value <= upper` up to [`INEQUALITY_SLACK`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InequalityCheck {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
    pub lower_margin: f64,
    pub upper_margin: f64,
    pub holds: bool,
}

impl InequalityCheck {
    pub fn new(lower: f64, value: f64, upper: f64) -> Self {
        let lower_margin = value - lower;
        let upper_margin = upper - value;
        let holds = lower_margin >= -INEQUALITY_SLACK && upper_margin >= -INEQUALITY_SLACK;
        Self { lower, value, upper, lower_margin, upper_margin, holds }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheegerAudit {
    pub k: usize,
    pub beta: usize,
    pub lambda: f64,
    pub h_k: Rational,
    /// `h_{k - beta}`, zero when `k <= beta`.
    pub h_shifted: Rational,
    /// `h_{k-beta}^2 / 2 <= lambda_k <= 2 h_k`.
    pub general: InequalityCheck,
    /// `h_k^2 / 2 <= lambda_k <= 2 h_k`; forests only.
    pub forest: Option<InequalityCheck>,
    /// `h_{k-1}^2 / 2 <= lambda_k <= 2 h_k`; single-loop graphs only.
    pub unicyclic: Option<InequalityCheck>,
    pub all_hold: bool,
}

fn require_degree_convention(g: &WeightedGraph) -> Result<()> {
    match g.degree_convention_violation() {
        Some(vertex) => Err(Error::MuConvention { vertex }),
        None => Ok(()),
    }
}

fn h_or_zero(solver: &CheegerSolver<'_>, j: Option<usize>, opts: CheegerOptions) -> Result<Rational> {
    match j {
        Some(j) if j >= 1 => Ok(solver.cheeger_k(j, opts)?.value),
        _ => Ok(Rational::zero()),
    }
}

pub fn cheeger_inequality_audit(g: &WeightedGraph, k: usize, opts: CheegerOptions) -> Result<CheegerAudit> {
    require_degree_convention(g)?;
    let spectrum = laplacian_spectrum(g, DEFAULT_TOLERANCE)?;
    cheeger_inequality_audit_with(&CheegerSolver::new(g)?, &spectrum, k, opts)
}

pub fn cheeger_inequality_audit_with(
    solver: &CheegerSolver<'_>,
    spectrum: &SpectrumReport,
    k: usize,
    opts: CheegerOptions,
) -> Result<CheegerAudit> {
    let g = solver.graph();
    require_degree_convention(g)?;
    let lambda = spectrum.lambda(k).ok_or(Error::InvalidK { k, n: g.n() })?;
    let beta = g.betti_number();
    let h_k = solver.cheeger_k(k, opts)?.value;
    let h_shifted = h_or_zero(solver, k.checked_sub(beta), opts)?;
    let h_prev = if beta == 1 { Some(h_or_zero(solver, k.checked_sub(1), opts)?) } else { None };
    Ok(CheegerAudit::from_values(k, beta, lambda, h_k, h_shifted, h_prev))
}

impl CheegerAudit {
    /// `h_prev` is `h_{k-1}` and enables the single-loop check; pass it only when `beta == 1`.
    pub fn from_values(
        k: usize,
        beta: usize,
        lambda: f64,
        h_k: Rational,
        h_shifted: Rational,
        h_prev: Option<Rational>,
    ) -> Self {
        let upper = 2.0 * to_f64(&h_k);
        let half_sq = |h: &Rational| to_f64(&(*h * *h)) / 2.0;
        let general = InequalityCheck::new(half_sq(&h_shifted), lambda, upper);
        let forest = (beta == 0).then(|| InequalityCheck::new(half_sq(&h_k), lambda, upper));
        let unicyclic = h_prev.filter(|_| beta == 1).map(|h| InequalityCheck::new(half_sq(&h), lambda, upper));
        let all_hold = general.holds && forest.is_none_or(|c| c.holds) && unicyclic.is_none_or(|c| c.holds);
        CheegerAudit { k, beta, lambda, h_k, h_shifted, general, forest, unicyclic, all_hold }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityAudit {
    pub k: usize,
    /// `lambda_k` of the 1-Laplacian, which equals `h_k` on forests.
    pub lambda_one: Rational,
    pub lambda_two: f64,
    /// `2 lambda_1 <= 2 sqrt(2 lambda_2)`.
    pub increasing: (f64, f64),
    /// `lambda_1 / 2 >= lambda_2 / 4`.
    pub decreasing: (f64, f64),
    pub increasing_holds: bool,
    pub decreasing_holds: bool,
}

impl MonotonicityAudit {
    pub fn all_hold(&self) -> bool {
        self.increasing_holds && self.decreasing_holds
    }
}

pub fn p_monotonicity_audit(g: &WeightedGraph, k: usize, opts: CheegerOptions) -> Result<MonotonicityAudit> {
    let beta = g.betti_number();
    if beta != 0 {
        return Err(Error::NotAForest { beta });
    }
    require_degree_convention(g)?;
    let spectrum = laplacian_spectrum(g, DEFAULT_TOLERANCE)?;
    p_monotonicity_audit_with(&CheegerSolver::new(g)?, &spectrum, k, opts)
}

pub fn p_monotonicity_audit_with(
    solver: &CheegerSolver<'_>,
    spectrum: &SpectrumReport,
    k: usize,
    opts: CheegerOptions,
) -> Result<MonotonicityAudit> {
    let g = solver.graph();
    let beta = g.betti_number();
    if beta != 0 {
        return Err(Error::NotAForest { beta });
    }
    require_degree_convention(g)?;
    let lambda_two = spectrum.lambda(k).ok_or(Error::InvalidK { k, n: g.n() })?;
    let lambda_one = solver.cheeger_k(k, opts)?.value;
    Ok(MonotonicityAudit::from_values(k, lambda_one, lambda_two))
}

impl MonotonicityAudit {
    /// `lambda_one` stands for the 1-Laplacian eigenvalue, i.e. `h_k` on a forest.
    pub fn from_values(k: usize, lambda_one: Rational, lambda_two: f64) -> Self {
        let l1 = to_f64(&lambda_one);
        let increasing = (2.0 * l1, 2.0 * (2.0 * lambda_two.max(0.0)).sqrt());
        let decreasing = (l1 / 2.0, lambda_two / 4.0);
        MonotonicityAudit {
            k,
            lambda_one,
            lambda_two,
            increasing,
            decreasing,
            increasing_holds: increasing.0 <= increasing.1 + INEQUALITY_SLACK,
            decreasing_holds: decreasing.0 + INEQUALITY_SLACK >= decreasing.1,
        }
    }
}

/// Numerical rank by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
pub fn matrix_rank(rows: &[Vec<f64>], tolerance: f64) -> usize {
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())) else {
            break;
        };
        if m[pivot][c].abs() <= tolerance {
            continue;
        }
        m.swap(rank, pivot);
        for r in rank + 1..m.len() {
            let f = m[r][c] / m[rank][c];
            for j in c..cols {
                m[r][j] -= f * m[rank][j];
            }
        }
        rank += 1;
    }
    rank
}

fn orthonormalize(vectors: &mut Vec<Vec<f64>>) {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for mut v in vectors.drain(..) {
        for b in &basis {
            let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    *vectors = basis;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubspaceKind {
    Random,
    /// Orthogonal complement of a random subspace one dimension smaller than the span.
    Complement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceTrial {
    pub kind: SubspaceKind,
    pub dim_x: usize,
    pub dim_span: usize,
    pub rank: usize,
    pub intersection: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceCheck {
    pub trials: Vec<SubspaceTrial>,
    pub pass: bool,
}

/// Meets `(n - k + 1)`-dimensional subspaces with the span of the indicators of
/// a `k`-part subpartition and records `dim(X cap span) = dim X + k - rank`.
pub fn subspace_intersection_check(sp: &Subpartition, trials: usize, seed: u64) -> Result<SubspaceCheck> {
    let n = sp.universe();
    let k = sp.k();
    let dim_x = n + 1 - k;
    let span: Vec<Vec<f64>> =
        sp.parts().iter().map(|p| (0..n).map(|v| f64::from(u8::from(p.contains(v)))).collect()).collect();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let random_vec =
        |rng: &mut Xoshiro256PlusPlus| -> Vec<f64> { (0..n).map(|_| rng.random_range(-1.0..1.0)).collect() };
    let mut out = Vec::with_capacity(trials);
    for trial in 0..trials {
        let kind = if trial % 2 == 0 { SubspaceKind::Random } else { SubspaceKind::Complement };
        let x = match kind {
            SubspaceKind::Random => {
                let mut x: Vec<Vec<f64>> = (0..dim_x).map(|_| random_vec(&mut rng)).collect();
                orthonormalize(&mut x);
                x
            }
            SubspaceKind::Complement => {
                let mut all: Vec<Vec<f64>> = (0..k - 1).map(|_| random_vec(&mut rng)).collect();
                orthonormalize(&mut all);
                let w = all.len();
                all.extend((0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()));
                orthonormalize(&mut all);
                all.split_off(w)
            }
        };
        if x.len() != dim_x {
            return Err(Error::Internal(format!("sampled subspace has dimension {} instead of {dim_x}", x.len())));
        }
        let stacked: Vec<Vec<f64>> = x.iter().chain(&span).cloned().collect();
        let rank = matrix_rank(&stacked, 1e-9);
        out.push(SubspaceTrial { kind, dim_x, dim_span: k, rank, intersection: dim_x + k - rank });
    }
    let pass = out.iter().all(|t| t.intersection >= 1);
    Ok(SubspaceCheck { trials: out, pass })
}

/// The indicator span that attains `h_k` and the sampled supremum over it.
pub fn optimal_span_check(
    solver: &CheegerSolver<'_>,
    k: usize,
    samples: usize,
    seed: u64,
    opts: CheegerOptions,
) -> Result<SpanSupCheck> {
    let v = solver.cheeger_k(k, opts)?;
    let Witness::Subpartition(sp) = v.witness else {
        return Err(Error::Internal("h_k witness is not a subpartition".into()));
    };
    let check = indicator_span_sup_check(solver.graph(), &sp, samples, seed)?;
    if check.bound != v.value {
        return Err(Error::Internal("witness parts do not reproduce h_k".into()));
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rayleigh_examples() {
        let p3 = path(3);
        assert!((rayleigh(&p3, &[1.0, 0.0, -1.0], 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(rayleigh(&p3, &[2.0, 2.0, 2.0], 1.5).unwrap(), 0.0);
        assert_eq!(rayleigh(&p3, &[0.0; 3], 1.0), Err(Error::ZeroVector));
        assert_eq!(rayleigh(&p3, &[1.0; 3], 0.5), Err(Error::InvalidP(0.5)));
        assert_eq!(rayleigh(&p3, &[1.0; 2], 1.0), Err(Error::LengthMismatch { got: 2, expected: 3 }));
        let ind = [r(0, 1), r(1, 1), r(1, 1)];
        assert_eq!(rayleigh_l1_exact(&p3, &ind).unwrap(), r(1, 3));
    }

    #[test]
    fn spectrum_examples() {
        let k2 = path(2);
        let s = laplacian_spectrum(&k2, DEFAULT_TOLERANCE).unwrap();
        assert!((s.eigenvalues[0]).abs() < 1e-12 && (s.eigenvalues[1] - 2.0).abs() < 1e-12);
        let s = laplacian_spectrum(&path(3), DEFAULT_TOLERANCE).unwrap();
        for (got, want) in s.eigenvalues.iter().zip([0.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert!(s.max_residual() < 1e-10);
        assert!(s.trace_error() < 1e-10);

        let two = WeightedGraph::with_default_mu(6, unit(&[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5)])).unwrap();
        let s = laplacian_spectrum(&two, DEFAULT_TOLERANCE).unwrap();
        assert_eq!(s.zero_multiplicity(1e-9), 2);
        assert!(laplacian_spectrum(&two, 0.0).is_err());
    }

    #[test]
    fn spectrum_matches_characteristic_polynomial_of_cycle() {
        // C_n with degree weights: 1 - cos(2 pi j / n).
        let n = 7;
        let s = laplacian_spectrum(&cycle(n), DEFAULT_TOLERANCE).unwrap();
        let mut want: Vec<f64> =
            (0..n).map(|j| 1.0 - (2.0 * std::f64::consts::PI * j as f64 / n as f64).cos()).collect();
        want.sort_by(f64::total_cmp);
        for (a, b) in s.eigenvalues.iter().zip(want) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn sweep_examples() {
        let p3 = path(3);
        let b = sweep_round(&p3, &[0.0, 1.0, 1.0]).unwrap();
        assert_eq!(b.set, set(&p3, &[1, 2]));
        assert_eq!(b.expansion, r(1, 3));

        let b = sweep_round(&p3, &[-3.0, 0.0, 0.0]).unwrap();
        assert_eq!(b.set, set(&p3, &[0]));
        assert_eq!(b.part, SignedPart::Negative);

        let x = [0.3, 2.0, 1.0];
        let b = sweep_round(&p3, &x).unwrap();
        assert!(crate::rational::to_f64(&b.expansion) <= rayleigh(&p3, &x, 1.0).unwrap() + 1e-12);
        assert_eq!(sweep_round(&p3, &[0.0; 3]), Err(Error::ZeroVector));
    }

    #[test]
    fn sweep_exact_stays_in_union_family() {
        let g = path(6);
        let sp = Subpartition::new(vec![set(&g, &[0]), set(&g, &[2, 3]), set(&g, &[5])]).unwrap();
        let x = indicator_combination(&sp, &[r(2, 1), r(-1, 2), r(2, 1)]).unwrap();
        let b = sweep_round_exact(&g, &x).unwrap();
        assert!(crate::combinatorics::union_family(&sp).contains(&b.set));
        assert!(b.expansion <= rayleigh_l1_exact(&g, &x).unwrap());
    }

    #[test]
    fn span_sup_examples() {
        let g = path(5);
        let sp = Subpartition::new(vec![set(&g, &[0]), set(&g, &[2]), set(&g, &[4])]).unwrap();
        let c = indicator_span_sup_check(&g, &sp, 200, 3).unwrap();
        assert!(c.pass);
        assert!(c.coordinates_exact);
        assert!(c.sup_observed <= c.bound);
    }

    #[test]
    fn bracket_examples() {
        let o = CheegerOptions::default();
        let b = one_lap_bracket(&cycle(3), 2, o).unwrap();
        assert_eq!((b.lower, b.upper, b.exact), (r(1, 2), r(1, 1), false));
        let b = one_lap_bracket(&path(4), 3, o).unwrap();
        assert!(b.exact);
        assert_eq!(b.value(), Some(b.upper));
        let b = one_lap_bracket(&cycle(5), 1, o).unwrap();
        assert_eq!((b.lower, b.upper), (r(0, 1), r(0, 1)));
    }

    #[test]
    fn audit_examples() {
        let o = CheegerOptions::default();
        let a = cheeger_inequality_audit(&path(3), 2, o).unwrap();
        assert!(a.all_hold);
        assert!((a.lambda - 1.0).abs() < 1e-12);
        let a = cheeger_inequality_audit(&path(2), 2, o).unwrap();
        assert!(a.all_hold && a.general.upper_margin.abs() < 1e-9);
        let a = cheeger_inequality_audit(&cycle(3), 2, o).unwrap();
        assert_eq!(a.h_shifted, r(0, 1));
        assert!(a.unicyclic.is_some() && a.all_hold);
        let off = WeightedGraph::new(vec![r(1, 1), r(1, 2)], unit(&[(0, 1)])).unwrap();
        assert_eq!(cheeger_inequality_audit(&off, 1, o).unwrap_err(), Error::MuConvention { vertex: 1 });
    }

    #[test]
    fn monotonicity_examples() {
        let o = CheegerOptions::default();
        let m = p_monotonicity_audit(&path(3), 2, o).unwrap();
        assert!(m.all_hold());
        assert!((m.increasing.1 - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        let m = p_monotonicity_audit(&path(2), 2, o).unwrap();
        assert!(m.all_hold() && (m.decreasing.0 - m.decreasing.1).abs() < 1e-12);
        assert_eq!(p_monotonicity_audit(&cycle(3), 2, o).unwrap_err(), Error::NotAForest { beta: 1 });
    }

    #[test]
    fn subspace_examples() {
        let g = path(3);
        let sp = Subpartition::new(vec![set(&g, &[0]), set(&g, &[1, 2])]).unwrap();
        let c = subspace_intersection_check(&sp, 20, 1).unwrap();
        assert!(c.pass);
        let full = Subpartition::new((0..3).map(|v| set(&g, &[v])).collect()).unwrap();
        let c = subspace_intersection_check(&full, 2, 1).unwrap();
        assert!(c.trials.iter().all(|t| t.dim_x == 1 && t.intersection == 1));
        assert_eq!(matrix_rank(&[vec![1.0, 2.0], vec![2.0, 4.0]], 1e-12), 1);
    }
}
