//! Subpartitions, union-closed families and connected-subset enumeration.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{bits, full_mask, VertexSet, WeightedGraph, MAX_VERTICES};

/// Default cap on the number of labelings an enumeration may walk.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Ordered tuple of pairwise-disjoint nonempty vertex sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subpartition {
    n: usize,
    parts: Vec<VertexSet>,
}

impl Subpartition {
    pub fn new(parts: Vec<VertexSet>) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidSubpartition("no parts".into()))?;
        let n = first.universe();
        let mut seen = 0u32;
        for (i, p) in parts.iter().enumerate() {
            if p.universe() != n {
                return Err(Error::InvalidSubpartition(format!("part {i} is over a different ground set")));
            }
            if p.is_empty() {
                return Err(Error::InvalidSubpartition(format!("part {i} is empty")));
            }
            if seen & p.mask() != 0 {
                return Err(Error::InvalidSubpartition(format!("part {i} overlaps an earlier part")));
            }
            seen |= p.mask();
        }
        Ok(Self { n, parts })
    }

    pub fn from_masks(n: usize, masks: &[u32]) -> Result<Self> {
        let parts = masks.iter().map(|&m| VertexSet::new(n, m)).collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }

    pub(crate) fn from_masks_unchecked(n: usize, masks: &[u32]) -> Self {
        Self { n, parts: masks.iter().map(|&m| VertexSet::from_mask(n, m)).collect() }
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn support(&self) -> VertexSet {
        self.parts.iter().fold(VertexSet::empty(self.n), |acc, p| acc.union(p))
    }

    pub(crate) fn masks(&self) -> Vec<u32> {
        self.parts.iter().map(|p| p.mask()).collect()
    }

    /// Parts sorted by their smallest member.
    pub fn canonical(&self) -> Self {
        let mut parts = self.parts.clone();
        parts.sort_by_key(|p| p.min());
        Self { n: self.n, parts }
    }

    /// Sorted member lists of the canonical form; compared lexicographically for tie-breaks.
    pub fn canonical_key(&self) -> Vec<Vec<usize>> {
        self.canonical().parts.iter().map(|p| p.to_vec()).collect()
    }

    /// Union of the parts whose indices are set in `selector`.
    pub fn union_of(&self, selector: &[usize]) -> VertexSet {
        selector.iter().fold(VertexSet::empty(self.n), |acc, &i| acc.union(&self.parts[i]))
    }
}

impl fmt::Display for Subpartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// The `2^k - 1` nonempty unions of the parts of a subpartition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnionFamily {
    generators: Subpartition,
    members: Vec<VertexSet>,
}

impl UnionFamily {
    pub fn generators(&self) -> &Subpartition {
        &self.generators
    }

    /// Member `s - 1` is the union of the parts selected by the bits of `s`.
    pub fn members(&self) -> &[VertexSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, set: &VertexSet) -> bool {
        self.members.contains(set)
    }
}

pub fn union_family(sp: &Subpartition) -> UnionFamily {
    let masks = sp.masks();
    let members = union_masks(&masks).into_iter().skip(1).map(|m| VertexSet::from_mask(sp.universe(), m)).collect();
    UnionFamily { generators: sp.clone(), members }
}

/// `out[s]` is the union of `parts[i]` over the set bits `i` of `s`; `out[0] = 0`.
pub(crate) fn union_masks(parts: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; 1 << parts.len()];
    fill_union_masks(parts, &mut out);
    out
}

pub(crate) fn fill_union_masks(parts: &[u32], out: &mut [u32]) {
    for s in 1..(1usize << parts.len()) {
        out[s] = out[s & (s - 1)] | parts[s.trailing_zeros() as usize];
    }
}

/// `(k + 1)^n`: the number of labelings the subpartition enumeration is charged for.
pub fn labeling_count(n: usize, k: usize) -> u128 {
    (k as u128 + 1).saturating_pow(n as u32)
}

pub(crate) fn check_budget(n: usize, k: usize, budget: u128) -> Result<()> {
    let count = labeling_count(n, k);
    if count > budget {
        Err(Error::BudgetExceeded { count, budget })
    } else {
        Ok(())
    }
}

/// Streams every `k`-part subpartition of `0..n` once, in canonical form.
///
/// Vertices carry labels `0..=k` (0 = unused) whose nonzero values first appear in
/// increasing order, so parts come out sorted by smallest member. Labelings are
/// visited in lexicographic order.
#[derive(Clone, Debug)]
pub struct SubpartitionIter {
    n: usize,
    k: usize,
    labels: Vec<usize>,
    masks: Vec<u32>,
    fresh: bool,
    done: bool,
}

impl SubpartitionIter {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
        }
        if k == 0 || k > n {
            return Err(Error::InvalidK { k, n });
        }
        let mut labels = vec![0; n];
        for (j, slot) in labels[n - k..].iter_mut().enumerate() {
            *slot = j + 1;
        }
        Ok(Self { n, k, labels, masks: vec![0; k], fresh: true, done: false })
    }

    /// Advances to the next labeling and returns its part masks.
    pub(crate) fn next_masks(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        self.masks.iter_mut().for_each(|m| *m = 0);
        for (v, &l) in self.labels.iter().enumerate() {
            if l > 0 {
                self.masks[l - 1] |= 1 << v;
            }
        }
        Some(&self.masks)
    }

    #[allow(clippy::needless_range_loop)]
    fn advance(&mut self) -> bool {
        let (n, k) = (self.n, self.k);
        let mut prefix_max = vec![0usize; n];
        let mut m = 0;
        for i in 0..n {
            prefix_max[i] = m;
            m = m.max(self.labels[i]);
        }
        for i in (0..n).rev() {
            let before = prefix_max[i];
            let remaining = n - 1 - i;
            let top = k.min(before + 1);
            let pick = (self.labels[i] + 1..=top).find(|&v| remaining >= k - before.max(v));
            if let Some(v) = pick {
                self.labels[i] = v;
                let reached = before.max(v);
                let zeros = remaining - (k - reached);
                for (j, slot) in self.labels[i + 1..].iter_mut().enumerate() {
                    *slot = if j < zeros { 0 } else { reached + (j - zeros) + 1 };
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for SubpartitionIter {
    type Item = Subpartition;

    fn next(&mut self) -> Option<Subpartition> {
        let n = self.n;
        self.next_masks().map(|m| Subpartition::from_masks_unchecked(n, m))
    }
}

/// All `k`-part subpartitions of the vertex set of `g`, subject to the labeling budget.
pub fn enumerate_subpartitions(g: &WeightedGraph, k: usize, budget: u128) -> Result<SubpartitionIter> {
    if k == 0 || k > g.n() {
        return Err(Error::InvalidK { k, n: g.n() });
    }
    check_budget(g.n(), k, budget)?;
    SubpartitionIter::new(g.n(), k)
}

/// Connected induced subsets, grown from each anchor vertex while forbidding smaller anchors.
///
/// Each set is produced exactly once: the branch that includes or excludes every
/// frontier vertex is fixed, and a set is emitted when its frontier is exhausted.
pub struct ConnectedSubsets<'g> {
    g: &'g WeightedGraph,
    within: u32,
    pending_anchors: u32,
    allowed: u32,
    // (current set, undecided frontier, excluded vertices)
    stack: Vec<(u32, u32, u32)>,
}

impl<'g> ConnectedSubsets<'g> {
    pub(crate) fn within(g: &'g WeightedGraph, within: u32) -> Self {
        Self { g, within, pending_anchors: within, allowed: 0, stack: Vec::new() }
    }

    /// Connected subsets of `within` whose smallest member is `anchor`.
    pub(crate) fn anchored(g: &'g WeightedGraph, anchor: usize, within: u32) -> Self {
        debug_assert!(within >> anchor & 1 == 1);
        let mut it = Self { g, within, pending_anchors: 0, allowed: 0, stack: Vec::new() };
        it.start(anchor);
        it
    }

    fn start(&mut self, anchor: usize) {
        self.allowed = self.within & !full_mask(anchor + 1);
        let frontier = self.g.adjacency_mask(anchor) & self.allowed;
        self.stack.push((1 << anchor, frontier, 0));
    }
}

impl Iterator for ConnectedSubsets<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        loop {
            let Some((set, frontier, excluded)) = self.stack.pop() else {
                if self.pending_anchors == 0 {
                    return None;
                }
                let anchor = self.pending_anchors.trailing_zeros() as usize;
                self.pending_anchors &= self.pending_anchors - 1;
                self.start(anchor);
                continue;
            };
            if frontier == 0 {
                return Some(set);
            }
            let u = frontier.trailing_zeros();
            let bit = 1u32 << u;
            let rest = frontier & !bit;
            self.stack.push((set, rest, excluded | bit));
            let grown = set | bit;
            let added = self.g.adjacency_mask(u as usize) & self.allowed & !grown & !excluded;
            self.stack.push((grown, rest | added, excluded));
        }
    }
}

/// Every nonempty connected subset of the subgraph induced on `a`.
pub fn enumerate_connected_subsets<'g>(
    g: &'g WeightedGraph,
    a: &VertexSet,
) -> Result<impl Iterator<Item = VertexSet> + 'g> {
    if a.universe() != g.n() {
        return Err(Error::Precondition("vertex set does not match the graph".into()));
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = g.n();
    Ok(ConnectedSubsets::within(g, a.mask()).map(move |m| VertexSet::from_mask(n, m)))
}

/// Finds nonempty index sets `I`, `J` with `union of a[I] = union of b[J]`.
///
/// `a` has `k` parts and `b` has `n - k + 1` parts over the same ground set of size
/// `n`. Follows the strong induction on the common intersection: while the two
/// supports differ, restrict to their intersection `C` and keep only parts inside
/// `C`; at least `|C| + 1` of them survive, which re-establishes the size condition
/// on a strictly smaller ground set.
pub fn common_union(a: &Subpartition, b: &Subpartition) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = a.universe();
    if b.universe() != n {
        return Err(Error::Precondition("subpartitions over different ground sets".into()));
    }
    if a.k() + b.k() != n + 1 {
        return Err(Error::Precondition(format!(
            "part counts {} and {} must add up to n + 1 = {}",
            a.k(),
            b.k(),
            n + 1
        )));
    }
    let (pa, pb) = (a.masks(), b.masks());
    let mut ground = full_mask(n);
    let mut ia: Vec<usize> = (0..a.k()).collect();
    let mut ib: Vec<usize> = (0..b.k()).collect();
    loop {
        let ua = ia.iter().fold(0, |acc, &i| acc | pa[i]);
        let ub = ib.iter().fold(0, |acc, &j| acc | pb[j]);
        if ua == ground && ub == ground {
            return Ok((ia, ib));
        }
        let common = ua & ub;
        let size = common.count_ones() as usize;
        let inside_a: Vec<usize> = ia.iter().copied().filter(|&i| pa[i] & !common == 0).collect();
        let mut inside_b: Vec<usize> = ib.iter().copied().filter(|&j| pb[j] & !common == 0).collect();
        if inside_a.is_empty() || inside_b.is_empty() || inside_a.len() + inside_b.len() < size + 1 {
            return Err(Error::Internal(format!(
                "common union construction stalled on ground set {:?}",
                bits(common).collect::<Vec<_>>()
            )));
        }
        inside_b.truncate(size + 1 - inside_a.len());
        ground = common;
        ia = inside_a;
        ib = inside_b;
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::graph::fixtures::*;

    fn sp(n: usize, parts: &[&[usize]]) -> Subpartition {
        Subpartition::new(parts.iter().map(|p| VertexSet::from_vertices(n, p.iter().copied()).unwrap()).collect())
            .unwrap()
    }

    #[test]
    fn small_enumerations() {
        let all: Vec<_> = SubpartitionIter::new(2, 2).unwrap().collect();
        assert_eq!(all, vec![sp(2, &[&[0], &[1]])]);
        let all: Vec<_> = SubpartitionIter::new(2, 1).unwrap().map(|s| s.canonical_key()).collect();
        let expected: BTreeSet<_> = [vec![vec![0]], vec![vec![1]], vec![vec![0, 1]]].into_iter().collect();
        assert_eq!(all.len(), 3);
        assert_eq!(all.into_iter().collect::<BTreeSet<_>>(), expected);
        assert_eq!(SubpartitionIter::new(3, 3).unwrap().count(), 1);
    }

    /// Stirling numbers of the second kind, `S(n + 1, k + 1)` counts `k`-part subpartitions of `n`.
    fn stirling2(n: usize, k: usize) -> u64 {
        let mut t = vec![vec![0u64; n + 1]; n + 1];
        t[0][0] = 1;
        for i in 1..=n {
            for j in 1..=i {
                t[i][j] = j as u64 * t[i - 1][j] + t[i - 1][j - 1];
            }
        }
        t[n][k]
    }

    #[test]
    fn enumeration_matches_deduplicated_labelings() {
        for n in 1..=8 {
            for k in 1..=n {
                let mut brute = BTreeSet::new();
                let total = (k + 1usize).pow(n as u32);
                for mut code in 0..total {
                    let mut parts = vec![Vec::new(); k];
                    for v in 0..n {
                        let label = code % (k + 1);
                        code /= k + 1;
                        if label > 0 {
                            parts[label - 1].push(v);
                        }
                    }
                    if parts.iter().all(|p| !p.is_empty()) {
                        parts.sort();
                        brute.insert(parts);
                    }
                }
                let streamed: Vec<_> = SubpartitionIter::new(n, k).unwrap().collect();
                let keys: BTreeSet<_> = streamed.iter().map(|s| s.canonical_key()).collect();
                assert_eq!(keys.len(), streamed.len(), "duplicates for n={n} k={k}");
                assert_eq!(keys, brute, "n={n} k={k}");
                assert_eq!(streamed.len() as u64, stirling2(n + 1, k + 1));
                for s in &streamed {
                    assert_eq!(s, &s.canonical());
                    assert!(Subpartition::new(s.parts().to_vec()).is_ok());
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = path(6);
        let err = enumerate_subpartitions(&g, 3, 1000).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { count: 4096, budget: 1000 });
        assert_eq!(enumerate_subpartitions(&g, 3, 4096).unwrap().count() as u64, stirling2(7, 4));
        assert!(matches!(enumerate_subpartitions(&g, 0, 10), Err(Error::InvalidK { .. })));
    }

    #[test]
    fn union_family_sizes() {
        let f = union_family(&sp(3, &[&[1], &[2]]));
        let members: BTreeSet<_> = f.members().iter().map(|s| s.to_vec()).collect();
        assert_eq!(members, [vec![1], vec![2], vec![1, 2]].into_iter().collect());
        assert_eq!(union_family(&sp(3, &[&[1]])).members().len(), 1);
        let f = union_family(&sp(4, &[&[1], &[2], &[3]]));
        assert_eq!(f.len(), 7);
        let distinct: BTreeSet<_> = f.members().iter().collect();
        assert_eq!(distinct.len(), 7);
        for x in f.members() {
            for y in f.members() {
                assert!(f.contains(&x.union(y)));
            }
        }
    }

    #[test]
    fn invalid_subpartitions() {
        let a = VertexSet::from_vertices(3, [0, 1]).unwrap();
        let b = VertexSet::from_vertices(3, [1]).unwrap();
        assert!(Subpartition::new(vec![a, b]).is_err());
        assert!(Subpartition::new(vec![]).is_err());
        assert!(Subpartition::new(vec![VertexSet::empty(3)]).is_err());
    }

    fn brute_connected(g: &WeightedGraph, within: u32) -> BTreeSet<u32> {
        (1..=within).filter(|&m| m & !within == 0 && g.is_connected_mask(m)).collect()
    }

    #[test]
    fn connected_subsets_examples() {
        let g = path(3);
        let got: Vec<_> = enumerate_connected_subsets(&g, &g.vertex_set()).unwrap().map(|s| s.to_vec()).collect();
        let got_set: BTreeSet<_> = got.iter().cloned().collect();
        assert_eq!(got.len(), 6);
        let expected: BTreeSet<_> =
            [vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2], vec![0, 1, 2]].into_iter().collect();
        assert_eq!(got_set, expected);

        let single = set(&g, &[2]);
        assert_eq!(enumerate_connected_subsets(&g, &single).unwrap().collect::<Vec<_>>(), vec![single]);

        let c3 = cycle(3);
        assert_eq!(enumerate_connected_subsets(&c3, &c3.vertex_set()).unwrap().count(), 7);
    }

    #[test]
    fn connected_subsets_match_brute_force() {
        let graphs = [path(6), cycle(6), star(5), {
            let e = unit(&[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (4, 5), (5, 6), (3, 6)]);
            WeightedGraph::with_default_mu(7, e).unwrap()
        }];
        for g in &graphs {
            for within in [g.full(), g.full() & 0b1011011, g.full() & 0b0110110] {
                let got: Vec<u32> = ConnectedSubsets::within(g, within).collect();
                let uniq: BTreeSet<u32> = got.iter().copied().collect();
                assert_eq!(uniq.len(), got.len());
                assert_eq!(uniq, brute_connected(g, within));
            }
            for anchor in 0..g.n() {
                let got: BTreeSet<u32> = ConnectedSubsets::anchored(g, anchor, g.full()).collect();
                let expected: BTreeSet<u32> = brute_connected(g, g.full())
                    .into_iter()
                    .filter(|m| m.trailing_zeros() as usize == anchor)
                    .collect();
                assert_eq!(got, expected);
            }
        }
    }

    #[test]
    fn common_union_examples() {
        let (ia, ib) = common_union(&sp(3, &[&[0], &[1, 2]]), &sp(3, &[&[0], &[1]])).unwrap();
        let a = sp(3, &[&[0], &[1, 2]]);
        let b = sp(3, &[&[0], &[1]]);
        assert_eq!(a.union_of(&ia), b.union_of(&ib));
        assert_eq!((ia, ib), (vec![0], vec![0]));

        let a = sp(2, &[&[0], &[1]]);
        let b = sp(2, &[&[0]]);
        let (ia, ib) = common_union(&a, &b).unwrap();
        assert_eq!(a.union_of(&ia).to_vec(), vec![0]);
        assert_eq!(b.union_of(&ib).to_vec(), vec![0]);

        assert!(matches!(common_union(&a, &a), Err(Error::Precondition(_))));
    }
}
