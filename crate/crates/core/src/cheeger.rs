//! Exact multiway Cheeger constants: the min-max constant `h_k`, the max-min
//! constant `l_k`, the Dirichlet constant, and the forest certificate.

use std::sync::OnceLock;

use num_traits::Zero;

use crate::combinatorics::{
    check_budget, fill_union_masks, labeling_count, ConnectedSubsets, Subpartition, SubpartitionIter,
};
use crate::error::{Error, Result};
use crate::graph::{bits, VertexSet, WeightedGraph};
use crate::rational::{Frac, Rational};

/// Largest graph for which the full expansion table is materialised.
pub const TABLE_MAX_VERTICES: usize = 20;

/// Rank of the largest expansion, parts attaining it, and their total volume.
type Objective = (u32, usize, u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheegerOptions {
    /// Cap on `(k + 1)^n` style labeling counts.
    pub budget: u128,
    /// Enumerate every subpartition instead of only those with connected parts.
    pub oracle: bool,
}

impl Default for CheegerOptions {
    fn default() -> Self {
        Self { budget: crate::DEFAULT_BUDGET, oracle: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Subpartition(Subpartition),
    /// A vertex set `set` together with a subset `minimizer` attaining `h(set)`.
    Dirichlet {
        set: VertexSet,
        minimizer: VertexSet,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheegerValue {
    pub value: Rational,
    pub witness: Witness,
}

impl CheegerValue {
    /// Recomputes the value from the witness alone.
    pub fn reevaluate(&self, g: &WeightedGraph, kind: WitnessKind) -> Result<Rational> {
        match (&self.witness, kind) {
            (Witness::Subpartition(sp), WitnessKind::MaxOverParts) => max_expansion(g, sp),
            (Witness::Subpartition(sp), WitnessKind::MinOverUnions) => min_union_expansion(g, sp),
            (Witness::Dirichlet { set, minimizer }, WitnessKind::Dirichlet) => {
                if !minimizer.is_subset(set) {
                    return Err(Error::Internal("minimizer escapes its set".into()));
                }
                Ok(g.expansion(minimizer)?.expansion)
            }
            _ => Err(Error::Precondition("witness kind mismatch".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    MaxOverParts,
    MinOverUnions,
    Dirichlet,
}

/// `max_i phi(A_i)` over the parts of `sp`.
pub fn max_expansion(g: &WeightedGraph, sp: &Subpartition) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    for p in sp.parts() {
        let e = g.expansion(p)?.expansion;
        best = Some(best.map_or(e, |b| b.max(e)));
    }
    best.ok_or(Error::EmptySet)
}

/// `max phi(B)` over the union-closed family generated by `sp`.
pub fn max_union_expansion(g: &WeightedGraph, sp: &Subpartition) -> Result<Rational> {
    union_extreme(g, sp, true)
}

/// `min phi(B)` over the union-closed family generated by `sp`.
pub fn min_union_expansion(g: &WeightedGraph, sp: &Subpartition) -> Result<Rational> {
    union_extreme(g, sp, false)
}

fn union_extreme(g: &WeightedGraph, sp: &Subpartition, take_max: bool) -> Result<Rational> {
    let family = crate::combinatorics::union_family(sp);
    let mut best: Option<Frac> = None;
    for m in family.members() {
        let e = g.phi(m.mask());
        best = Some(match best {
            None => e,
            Some(b) if take_max => b.max(e),
            Some(b) => b.min(e),
        });
    }
    best.map(Frac::to_rational).ok_or(Error::EmptySet)
}

/// `h(A)`: the least expansion of a nonempty subset of `a`.
///
/// Only connected subsets are scanned; every subset has a connected component
/// whose expansion is no larger.
pub fn dirichlet_cheeger(g: &WeightedGraph, a: &VertexSet) -> Result<CheegerValue> {
    g.expansion(a)?;
    let (mask, value) = min_connected(g, a.mask());
    Ok(CheegerValue {
        value: value.to_rational(),
        witness: Witness::Dirichlet { set: *a, minimizer: VertexSet::from_mask(g.n(), mask) },
    })
}

fn min_connected(g: &WeightedGraph, within: u32) -> (u32, Frac) {
    let mut best: Option<(u32, Frac)> = None;
    for m in ConnectedSubsets::within(g, within) {
        let e = g.phi(m);
        if best.is_none_or(|(_, b)| e < b) {
            best = Some((m, e));
        }
    }
    best.expect("nonempty set has a connected subset")
}

fn check_k(g: &WeightedGraph, k: usize) -> Result<()> {
    if k == 0 || k > g.n() {
        Err(Error::InvalidK { k, n: g.n() })
    } else {
        Ok(())
    }
}

/// Expansion of every subset, replaced by its rank among the distinct values.
///
/// Ranks compare exactly like the rationals they stand for.
struct PhiTable {
    ranks: Vec<u32>,
    values: Vec<Frac>,
}

impl PhiTable {
    fn build(g: &WeightedGraph) -> Result<Self> {
        let n = g.n();
        if n > TABLE_MAX_VERTICES {
            return Err(Error::TooManyVertices { n, max: TABLE_MAX_VERTICES });
        }
        let size = 1usize << n;
        let mut boundary = vec![0u64; size];
        let mut volume = vec![0u64; size];
        for mask in 1..size {
            let v = mask.trailing_zeros() as usize;
            let prev = mask & (mask - 1);
            let inner: u64 = g.neighbors_int(v).iter().filter(|(u, _)| prev >> u & 1 == 1).map(|&(_, w)| w).sum();
            volume[mask] = volume[prev] + g.mu_int(v);
            boundary[mask] = boundary[prev] + g.degree_int(v) - 2 * inner;
        }
        let frac = |m: usize| Frac { num: boundary[m], den: volume[m] };
        let mut order: Vec<u32> = (1..size as u32).collect();
        order.sort_unstable_by_key(|&m| frac(m as usize));
        let mut ranks = vec![u32::MAX; size];
        let mut values: Vec<Frac> = Vec::new();
        for m in order {
            let f = frac(m as usize);
            if values.last() != Some(&f) {
                values.push(f);
            }
            ranks[m as usize] = (values.len() - 1) as u32;
        }
        Ok(Self { ranks, values })
    }

    fn rank(&self, mask: u32) -> u32 {
        self.ranks[mask as usize]
    }

    fn value(&self, rank: u32) -> Rational {
        self.values[rank as usize].to_rational()
    }
}

/// Shares the expansion table of one graph across every `k`.
pub struct CheegerSolver<'g> {
    g: &'g WeightedGraph,
    table: PhiTable,
    subset_min: OnceLock<Vec<u32>>,
}

impl<'g> CheegerSolver<'g> {
    pub fn new(g: &'g WeightedGraph) -> Result<Self> {
        Ok(Self { g, table: PhiTable::build(g)?, subset_min: OnceLock::new() })
    }

    pub fn graph(&self) -> &'g WeightedGraph {
        self.g
    }

    fn subpartition(&self, masks: &[u32]) -> Subpartition {
        Subpartition::from_masks_unchecked(self.g.n(), masks).canonical()
    }

    /// `h_k`: the least achievable maximum part expansion over `k`-part subpartitions.
    ///
    /// The default search only places connected parts; swapping a part for its
    /// best component never raises the maximum. The witness is re-evaluated over
    /// its whole union-closed family, which must give the same value.
    pub fn cheeger_k(&self, k: usize, opts: CheegerOptions) -> Result<CheegerValue> {
        check_k(self.g, k)?;
        check_budget(self.g.n(), k, opts.budget)?;
        let (rank, masks) = if opts.oracle { self.min_max_unrestricted(k)? } else { self.min_max_connected(k) };
        let sp = self.subpartition(&masks);
        let value = self.table.value(rank);
        if max_union_expansion(self.g, &sp)? != value {
            return Err(Error::Internal(format!("union family maximum of {sp} differs from h_{k}")));
        }
        Ok(CheegerValue { value, witness: Witness::Subpartition(sp) })
    }

    fn min_max_connected(&self, k: usize) -> (u32, Vec<u32>) {
        struct Search<'a, 'g> {
            solver: &'a CheegerSolver<'g>,
            k: usize,
            parts: Vec<u32>,
            best_rank: u32,
            best: Vec<u32>,
        }
        impl Search<'_, '_> {
            fn walk(&mut self, free: u32, cur: u32) {
                let need = self.k - self.parts.len();
                if need == 0 {
                    if cur < self.best_rank {
                        self.best_rank = cur;
                        self.best = self.parts.clone();
                    }
                    return;
                }
                if (free.count_ones() as usize) < need || free == 0 {
                    return;
                }
                let v = free.trailing_zeros() as usize;
                let g = self.solver.g;
                for part in ConnectedSubsets::anchored(g, v, free) {
                    let m = cur.max(self.solver.table.rank(part));
                    if m >= self.best_rank || ((free & !part).count_ones() as usize) < need - 1 {
                        continue;
                    }
                    self.parts.push(part);
                    self.walk(free & !part, m);
                    self.parts.pop();
                }
                self.walk(free & !(1 << v), cur);
            }
        }
        let mut s = Search { solver: self, k, parts: Vec::new(), best_rank: u32::MAX, best: Vec::new() };
        s.walk(self.g.full(), 0);
        (s.best_rank, s.best)
    }

    fn min_max_unrestricted(&self, k: usize) -> Result<(u32, Vec<u32>)> {
        let mut it = SubpartitionIter::new(self.g.n(), k)?;
        let mut best: Option<(u32, Vec<u32>)> = None;
        while let Some(masks) = it.next_masks() {
            let worst = masks.iter().map(|&m| self.table.rank(m)).max().unwrap_or(0);
            if best.as_ref().is_none_or(|(b, _)| worst < *b) {
                best = Some((worst, masks.to_vec()));
            }
        }
        best.ok_or_else(|| Error::Internal("no subpartition enumerated".into()))
    }

    /// `h_k` through the union-closed family: the least value, over all `k`-part
    /// subpartitions, of the largest expansion of any union of parts.
    pub fn cheeger_k_union_family(&self, k: usize, budget: u128) -> Result<CheegerValue> {
        check_k(self.g, k)?;
        check_budget(self.g.n(), k, budget)?;
        let mut it = SubpartitionIter::new(self.g.n(), k)?;
        let mut unions = vec![0u32; 1 << k];
        let mut best_rank = u32::MAX;
        let mut best = Vec::new();
        while let Some(masks) = it.next_masks() {
            fill_union_masks(masks, &mut unions);
            let mut worst = 0;
            for &u in &unions[1..] {
                worst = worst.max(self.table.rank(u));
                if worst >= best_rank {
                    break;
                }
            }
            if worst < best_rank {
                best_rank = worst;
                best = masks.to_vec();
            }
        }
        Ok(CheegerValue {
            value: self.table.value(best_rank),
            witness: Witness::Subpartition(self.subpartition(&best)),
        })
    }

    /// `l_k`: the largest achievable minimum expansion over the union-closed family
    /// of an `(n - k + 1)`-part subpartition.
    pub fn maxmin_cheeger(&self, k: usize, budget: u128) -> Result<CheegerValue> {
        check_k(self.g, k)?;
        let parts = self.g.n() - k + 1;
        check_budget(self.g.n(), parts, budget)?;
        let mut it = SubpartitionIter::new(self.g.n(), parts)?;
        let mut unions = vec![0u32; 1 << parts];
        let mut best: Option<(u32, Vec<u32>)> = None;
        while let Some(masks) = it.next_masks() {
            fill_union_masks(masks, &mut unions);
            let floor = best.as_ref().map(|(b, _)| *b);
            let mut least = u32::MAX;
            // Full union first: it is frequently the minimiser.
            for &u in unions[1..].iter().rev() {
                least = least.min(self.table.rank(u));
                if floor.is_some_and(|f| least <= f) {
                    break;
                }
            }
            if floor.is_none_or(|f| least > f) {
                best = Some((least, masks.to_vec()));
            }
        }
        let (rank, masks) = best.ok_or_else(|| Error::Internal("no subpartition enumerated".into()))?;
        Ok(CheegerValue { value: self.table.value(rank), witness: Witness::Subpartition(self.subpartition(&masks)) })
    }

    fn subset_min(&self) -> &[u32] {
        self.subset_min.get_or_init(|| {
            let size = 1usize << self.g.n();
            let mut best = vec![u32::MAX; size];
            for mask in 1..size {
                let mut m = self.table.ranks[mask];
                for v in bits(mask as u32) {
                    m = m.min(best[mask & !(1 << v)]);
                }
                best[mask] = m;
            }
            best
        })
    }

    /// `h(A)` for one set, read from the subset-minimum table.
    pub fn dirichlet_value(&self, a: &VertexSet) -> Result<Rational> {
        self.g.expansion(a)?;
        Ok(self.table.value(self.subset_min()[a.mask() as usize]))
    }

    /// The Dirichlet constant: the largest `h(A)` over sets of size `n - k + 1`.
    pub fn dirichlet_k(&self, k: usize) -> Result<CheegerValue> {
        check_k(self.g, k)?;
        let size = self.g.n() - k + 1;
        let table = self.subset_min();
        let mut best: Option<(u32, u32)> = None;
        for mask in 1..table.len() as u32 {
            if mask.count_ones() as usize == size && best.is_none_or(|(b, _)| table[mask as usize] > b) {
                best = Some((table[mask as usize], mask));
            }
        }
        let (rank, mask) = best.expect("k <= n leaves a nonempty size class");
        let set = VertexSet::from_mask(self.g.n(), mask);
        let inner = dirichlet_cheeger(self.g, &set)?;
        if inner.value != self.table.value(rank) {
            return Err(Error::Internal(format!("connected scan and subset table disagree on h({set})")));
        }
        Ok(inner)
    }

    /// Builds a size-`(n - k + 1)` set whose Dirichlet constant equals `h_k`.
    ///
    /// Optimal subpartitions are refined to those with the fewest parts at the
    /// maximal expansion and then the least total volume; their parts are
    /// connected. Each refined subpartition, in canonical order, and each of its
    /// maximal parts is tried in turn: one vertex is removed from every other part
    /// so that the trimmed parts and the rest of the forest become pairwise
    /// nonadjacent. When no refined subpartition admits such vertices (a part can
    /// touch the rest at two vertices), the set is instead taken from an exact
    /// search over all sets of size `n - k + 1`. `budget` caps search nodes.
    pub fn forest_certificate(&self, k: usize, budget: u128) -> Result<ForestCertificate> {
        check_k(self.g, k)?;
        let beta = self.g.betti_number();
        if beta != 0 {
            return Err(Error::NotAForest { beta });
        }
        let (objective, candidates) = self.refined_selection(k, budget)?;
        let top = objective.0;
        let h_k = self.table.value(top);
        let refined = candidates.len();
        for masks in &candidates {
            let sp = Subpartition::from_masks_unchecked(self.g.n(), masks);
            for (i, p) in sp.parts().iter().enumerate() {
                if !self.g.is_connected_mask(p.mask()) {
                    return Err(Error::Internal(format!("refined part {i} = {p} is disconnected")));
                }
            }
            for attaining in (0..sp.k()).filter(|&i| self.table.rank(sp.parts()[i].mask()) == top) {
                if let Some(removed) = separators(self.g, &sp, attaining)? {
                    let keep = removed.iter().fold(self.g.full(), |m, &v| m & !(1 << v));
                    let dirichlet_set = VertexSet::from_mask(self.g.n(), keep);
                    let dirichlet = dirichlet_cheeger(self.g, &dirichlet_set)?;
                    return Ok(ForestCertificate {
                        k,
                        h_k,
                        subpartition: sp,
                        attaining_part: Some(attaining),
                        removed,
                        dirichlet_set,
                        dirichlet,
                        method: CertificateMethod::Separators,
                        refined,
                    });
                }
            }
        }
        let sp = Subpartition::from_masks_unchecked(self.g.n(), &candidates[0]);
        let dirichlet = self.dirichlet_k(k)?;
        let Witness::Dirichlet { set: dirichlet_set, .. } = dirichlet.witness else {
            return Err(Error::Internal("Dirichlet witness has the wrong shape".into()));
        };
        let removed = dirichlet_set.complement().to_vec();
        Ok(ForestCertificate {
            k,
            h_k,
            subpartition: sp,
            attaining_part: None,
            removed,
            dirichlet_set,
            dirichlet,
            method: CertificateMethod::DirichletSearch,
            refined,
        })
    }

    /// Every subpartition with connected parts minimising (max rank, parts at max
    /// rank, total volume), as canonical masks in canonical order.
    fn refined_selection(&self, k: usize, budget: u128) -> Result<(Objective, Vec<Vec<u32>>)> {
        type Objective = (u32, usize, u64);
        struct Search<'a, 'g> {
            solver: &'a CheegerSolver<'g>,
            k: usize,
            parts: Vec<u32>,
            best: Option<Objective>,
            ties: Vec<Vec<u32>>,
            nodes: u128,
            budget: u128,
        }
        impl Search<'_, '_> {
            fn walk(&mut self, free: u32, obj: Objective) -> Result<()> {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(Error::BudgetExceeded { count: self.nodes, budget: self.budget });
                }
                let need = self.k - self.parts.len();
                if need == 0 {
                    match self.best {
                        Some(b) if obj > b => {}
                        Some(b) if obj == b => self.ties.push(self.parts.clone()),
                        _ => {
                            self.best = Some(obj);
                            self.ties = vec![self.parts.clone()];
                        }
                    }
                    return Ok(());
                }
                if (free.count_ones() as usize) < need || free == 0 {
                    return Ok(());
                }
                let v = free.trailing_zeros() as usize;
                let g = self.solver.g;
                for part in ConnectedSubsets::anchored(g, v, free) {
                    let rank = self.solver.table.rank(part);
                    let vol = obj.2 + g.volume_int(part);
                    let next = match rank.cmp(&obj.0) {
                        std::cmp::Ordering::Greater => (rank, 1, vol),
                        std::cmp::Ordering::Equal => (obj.0, obj.1 + 1, vol),
                        std::cmp::Ordering::Less => (obj.0, obj.1, vol),
                    };
                    if self.best.is_some_and(|b| next > b) || ((free & !part).count_ones() as usize) < need - 1 {
                        continue;
                    }
                    self.parts.push(part);
                    self.walk(free & !part, next)?;
                    self.parts.pop();
                }
                self.walk(free & !(1 << v), obj)
            }
        }
        let mut s = Search { solver: self, k, parts: Vec::new(), best: None, ties: Vec::new(), nodes: 0, budget };
        s.walk(self.g.full(), (0, 0, 0))?;
        let best = s.best.ok_or_else(|| Error::Internal("no subpartition found".into()))?;
        // Parts are placed in order of their least vertex, so each tie is already canonical.
        let mut ties = s.ties;
        ties.sort_by_cached_key(|masks| Subpartition::from_masks_unchecked(self.g.n(), masks).canonical_key());
        Ok((best, ties))
    }

    /// The chain `h_k >= l_k >= dirichlet_k >= h_{k - beta}`.
    pub fn beta_chain(&self, k: usize, opts: CheegerOptions) -> Result<BetaChain> {
        check_k(self.g, k)?;
        let beta = self.g.betti_number();
        let h_k = self.cheeger_k(k, opts)?.value;
        let maxmin = match self.maxmin_cheeger(k, opts.budget) {
            Ok(v) => Some(v.value),
            Err(Error::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        };
        let dirichlet = self.dirichlet_k(k)?.value;
        // h_j for j <= 0 is taken to be 0.
        let shifted_index = (k > beta).then(|| k - beta);
        let shifted = match shifted_index {
            Some(j) => self.cheeger_k(j, opts)?.value,
            None => Rational::zero(),
        };
        let h_ge_maxmin = maxmin.map(|l| h_k >= l);
        let maxmin_ge_dirichlet = maxmin.map(|l| l >= dirichlet);
        let h_ge_dirichlet = h_k >= dirichlet;
        let dirichlet_ge_shifted = dirichlet >= shifted;
        let all_hold = h_ge_maxmin.unwrap_or(true)
            && maxmin_ge_dirichlet.unwrap_or(true)
            && h_ge_dirichlet
            && dirichlet_ge_shifted;
        Ok(BetaChain {
            k,
            beta,
            h_k,
            maxmin,
            dirichlet,
            shifted_index,
            shifted,
            h_ge_maxmin,
            maxmin_ge_dirichlet,
            h_ge_dirichlet,
            dirichlet_ge_shifted,
            all_hold,
        })
    }
}

/// One vertex per non-attaining part such that, after removing them, no edge joins
/// two different groups among the trimmed parts and the remainder.
fn separators(g: &WeightedGraph, sp: &Subpartition, attaining: usize) -> Result<Option<Vec<usize>>> {
    let n = g.n();
    let others: Vec<usize> = (0..sp.k()).filter(|&i| i != attaining).collect();
    let mut group = vec![usize::MAX; n];
    for (slot, &i) in others.iter().enumerate() {
        for v in sp.parts()[i].iter() {
            group[v] = slot;
        }
    }
    let rest: u32 = (0..n).filter(|&v| group[v] == usize::MAX).fold(0, |m, v| m | 1 << v);
    let fail = |why: String| Err(Error::Internal(format!("separator selection: {why}")));

    // Edges into the remainder can only be cut inside the part.
    let mut candidates: Vec<u32> = Vec::with_capacity(others.len());
    for &i in &others {
        let part = sp.parts()[i].mask();
        let touching = bits(part).filter(|&x| g.adjacency_mask(x) & rest != 0).fold(0u32, |m, x| m | 1 << x);
        if touching.count_ones() > 1 {
            return Ok(None);
        }
        candidates.push(if touching != 0 { touching } else { part });
    }

    // Part-to-part edges; on a forest with connected parts they form a forest with
    // at most one edge per pair.
    let m = others.len();
    let mut links: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); m];
    for e in g.edges() {
        let (a, b) = (group[e.u], group[e.v]);
        if a != usize::MAX && b != usize::MAX && a != b {
            if links[a].iter().any(|&(j, _, _)| j == b) {
                return fail("two edges between the same pair of parts".into());
            }
            links[a].push((b, e.u, e.v));
            links[b].push((a, e.v, e.u));
        }
    }

    let mut order = Vec::with_capacity(m);
    let mut parent: Vec<Option<(usize, usize, usize)>> = vec![None; m];
    let mut seen = vec![false; m];
    for root in 0..m {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let start = order.len();
        order.push(root);
        let mut head = start;
        while head < order.len() {
            let i = order[head];
            head += 1;
            for &(j, x, y) in &links[i] {
                if parent[i].is_some_and(|(p, _, _)| p == j) {
                    continue;
                }
                if seen[j] {
                    return fail("parts are linked in a cycle".into());
                }
                seen[j] = true;
                // Edge (x in part i, y in part j): need choice_i == x or choice_j == y.
                parent[j] = Some((i, x, y));
                order.push(j);
            }
        }
    }

    let mut feasible = candidates.clone();
    for &j in order.iter().rev() {
        if feasible[j] == 0 {
            return Ok(None);
        }
        if let Some((i, x, y)) = parent[j] {
            if feasible[j] >> y & 1 == 0 {
                feasible[i] &= 1 << x;
            }
        }
    }
    let mut choice = vec![usize::MAX; m];
    for &j in &order {
        let pick = match parent[j] {
            Some((i, x, y)) if choice[i] != x => y,
            _ => feasible[j].trailing_zeros() as usize,
        };
        if feasible[j] >> pick & 1 == 0 {
            return fail("inconsistent separator choice".into());
        }
        choice[j] = pick;
    }

    let removed_mask = choice.iter().fold(0u32, |acc, &v| acc | 1 << v);
    for e in g.edges() {
        let cut = removed_mask >> e.u & 1 == 1 || removed_mask >> e.v & 1 == 1;
        if !cut && group[e.u] != group[e.v] {
            return fail(format!("edge {{{}, {}}} still joins two groups", e.u, e.v));
        }
    }
    let mut removed: Vec<usize> = choice;
    removed.sort_unstable();
    Ok(Some(removed))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateMethod {
    /// One separator vertex per non-attaining part of a refined subpartition.
    Separators,
    /// No refined subpartition admitted separators; exhaustive search over sets.
    DirichletSearch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestCertificate {
    pub k: usize,
    pub h_k: Rational,
    /// The refined optimal subpartition that produced the certificate, or the
    /// first one in canonical order when the search fallback was used.
    pub subpartition: Subpartition,
    /// Index of the part kept whole inside the remainder.
    pub attaining_part: Option<usize>,
    pub removed: Vec<usize>,
    pub dirichlet_set: VertexSet,
    /// `h(dirichlet_set)` with its minimiser; equals `h_k` on every forest.
    pub dirichlet: CheegerValue,
    pub method: CertificateMethod,
    /// Number of refined optimal subpartitions.
    pub refined: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaChain {
    pub k: usize,
    pub beta: usize,
    pub h_k: Rational,
    /// `None` when the enumeration budget rules it out.
    pub maxmin: Option<Rational>,
    pub dirichlet: Rational,
    /// `k - beta`, or `None` when it is not positive and `shifted` defaults to 0.
    pub shifted_index: Option<usize>,
    pub shifted: Rational,
    pub h_ge_maxmin: Option<bool>,
    pub maxmin_ge_dirichlet: Option<bool>,
    pub h_ge_dirichlet: bool,
    pub dirichlet_ge_shifted: bool,
    pub all_hold: bool,
}

pub fn cheeger_k(g: &WeightedGraph, k: usize, opts: CheegerOptions) -> Result<CheegerValue> {
    check_k(g, k)?;
    check_budget(g.n(), k, opts.budget)?;
    CheegerSolver::new(g)?.cheeger_k(k, opts)
}

pub fn maxmin_cheeger(g: &WeightedGraph, k: usize, budget: u128) -> Result<CheegerValue> {
    check_k(g, k)?;
    check_budget(g.n(), g.n() - k + 1, budget)?;
    CheegerSolver::new(g)?.maxmin_cheeger(k, budget)
}

/// Dirichlet constant; graphs above the table size fall back to scanning each set.
pub fn dirichlet_k(g: &WeightedGraph, k: usize) -> Result<CheegerValue> {
    check_k(g, k)?;
    if g.n() <= TABLE_MAX_VERTICES {
        return CheegerSolver::new(g)?.dirichlet_k(k);
    }
    let size = g.n() - k + 1;
    let mut best: Option<CheegerValue> = None;
    let mut mask: u32 = (1u32 << size) - 1;
    while mask <= g.full() {
        let v = dirichlet_cheeger(g, &VertexSet::from_mask(g.n(), mask))?;
        if best.as_ref().is_none_or(|b| v.value > b.value) {
            best = Some(v);
        }
        // Next mask with the same popcount.
        let low = mask & mask.wrapping_neg();
        let ripple = mask + low;
        if ripple == 0 {
            break;
        }
        mask = ripple | (((mask ^ ripple) >> 2) / low);
    }
    best.ok_or_else(|| Error::Internal("no set of the requested size".into()))
}

pub fn forest_certificate(g: &WeightedGraph, k: usize, budget: u128) -> Result<ForestCertificate> {
    check_k(g, k)?;
    let beta = g.betti_number();
    if beta != 0 {
        return Err(Error::NotAForest { beta });
    }
    CheegerSolver::new(g)?.forest_certificate(k, budget)
}

pub fn beta_chain(g: &WeightedGraph, k: usize, opts: CheegerOptions) -> Result<BetaChain> {
    CheegerSolver::new(g)?.beta_chain(k, opts)
}

/// Cost measure reported for an `l_k` enumeration.
pub fn maxmin_labeling_count(n: usize, k: usize) -> u128 {
    labeling_count(n, n + 1 - k)
}
