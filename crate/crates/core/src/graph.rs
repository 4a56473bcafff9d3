//! Weighted graphs, vertex subsets and the cut primitives everything else is built on.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{format_compact, is_positive, lcm_checked, Frac, Rational};

/// Largest vertex count representable by the bitmask vertex sets.
pub const MAX_VERTICES: usize = 24;

const SUM_LIMIT: u128 = 1 << 62;

/// A subset of `0..n` stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VertexSet {
    mask: u32,
    n: u8,
}

impl VertexSet {
    pub fn new(n: usize, mask: u32) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
        }
        if mask & !full_mask(n) != 0 {
            let vertex = 31 - mask.leading_zeros() as usize;
            return Err(Error::VertexOutOfRange { vertex, n });
        }
        Ok(Self { mask, n: n as u8 })
    }

    pub(crate) fn from_mask(n: usize, mask: u32) -> Self {
        debug_assert!(n <= MAX_VERTICES && mask & !full_mask(n) == 0);
        Self { mask, n: n as u8 }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_mask(n, 0)
    }

    pub fn full(n: usize) -> Self {
        Self::from_mask(n, full_mask(n))
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(n: usize, vertices: I) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
        }
        let mut mask = 0u32;
        for v in vertices {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            mask |= 1 << v;
        }
        Ok(Self::from_mask(n, mask))
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    /// Size of the ground set this subset lives in.
    pub fn universe(&self) -> usize {
        self.n as usize
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.universe() && self.mask >> v & 1 == 1
    }

    pub fn min(&self) -> Option<usize> {
        (!self.is_empty()).then(|| self.mask.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        bits(self.mask)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "vertex sets over different ground sets");
        Self { mask: self.mask | other.mask, n: self.n }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "vertex sets over different ground sets");
        Self { mask: self.mask & other.mask, n: self.n }
    }

    pub fn difference(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "vertex sets over different ground sets");
        Self { mask: self.mask & !other.mask, n: self.n }
    }

    pub fn complement(&self) -> Self {
        Self { mask: !self.mask & full_mask(self.universe()), n: self.n }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.mask & other.mask == 0
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub(crate) fn bits(mut mask: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: Rational,
}

/// Boundary weight, volume and expansion of one vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutProfile {
    pub boundary: Rational,
    pub volume: Rational,
    pub expansion: Rational,
}

/// Undirected graph with positive rational vertex weights `mu` and edge weights `w`.
///
/// All weights are also kept as integers after multiplying by the least common
/// denominator, so cut and volume sums are exact `u64` arithmetic.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    mu: Vec<Rational>,
    edges: Vec<Edge>,
    labels: Vec<String>,
    scale: i128,
    mu_int: Vec<u64>,
    degree_int: Vec<u64>,
    neighbors: Vec<Vec<(usize, u64)>>,
    adjacency: Vec<u32>,
}

impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.mu == other.mu && self.edges == other.edges && self.labels == other.labels
    }
}

impl Eq for WeightedGraph {}

impl WeightedGraph {
    pub fn new<I>(mu: Vec<Rational>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let n = mu.len();
        if n == 0 {
            return Err(Error::NoVertices);
        }
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
        }
        for (v, m) in mu.iter().enumerate() {
            if !is_positive(m) {
                return Err(Error::NonPositiveWeight { what: format!("mu of vertex {v}"), value: format_compact(m) });
            }
        }
        let mut adjacency = vec![0u32; n];
        let mut list = Vec::new();
        for (u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !is_positive(&w) {
                return Err(Error::NonPositiveWeight {
                    what: format!("weight of edge {{{u}, {v}}}"),
                    value: format_compact(&w),
                });
            }
            let (a, b) = (u.min(v), u.max(v));
            if adjacency[a] >> b & 1 == 1 {
                return Err(Error::DuplicateEdge(a, b));
            }
            adjacency[a] |= 1 << b;
            adjacency[b] |= 1 << a;
            list.push(Edge { u: a, v: b, w });
        }
        list.sort_by_key(|e| (e.u, e.v));

        let mut scale = 1i128;
        for r in mu.iter().chain(list.iter().map(|e| &e.w)) {
            scale = lcm_checked(scale, *r.denom()).ok_or(Error::Overflow)?;
        }
        let to_int = |r: &Rational| -> Result<u64> {
            let value = r.numer().checked_mul(scale / r.denom()).ok_or(Error::Overflow)?;
            u64::try_from(value).map_err(|_| Error::Overflow)
        };
        let mu_int = mu.iter().map(to_int).collect::<Result<Vec<_>>>()?;
        let mut neighbors = vec![Vec::new(); n];
        let mut degree_int = vec![0u64; n];
        let mut total: u128 = mu_int.iter().map(|&m| m as u128).sum();
        for e in &list {
            let w = to_int(&e.w)?;
            neighbors[e.u].push((e.v, w));
            neighbors[e.v].push((e.u, w));
            degree_int[e.u] += w;
            degree_int[e.v] += w;
            total += 2 * w as u128;
            if total >= SUM_LIMIT {
                return Err(Error::Overflow);
            }
        }
        if total >= SUM_LIMIT {
            return Err(Error::Overflow);
        }
        Ok(Self {
            mu,
            edges: list,
            labels: (0..n).map(|v| v.to_string()).collect(),
            scale,
            mu_int,
            degree_int,
            neighbors,
            adjacency,
        })
    }

    /// Builds the graph with `mu` set to the weighted degree of each vertex.
    pub fn with_default_mu<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let edges: Vec<_> = edges.into_iter().collect();
        let mu = default_mu(n, &edges)?;
        Self::new(mu, edges)
    }

    /// Attaches external vertex ids, used only for display and file output.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::Precondition(format!("{} labels for {} vertices", labels.len(), self.n())));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[Rational] {
        &self.mu
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    /// Neighbours of `v` as a bitmask.
    pub fn adjacency_mask(&self, v: usize) -> u32 {
        self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u] >> v & 1 == 1
    }

    pub fn weighted_degree(&self, v: usize) -> Rational {
        Rational::new(self.degree_int[v] as i128, self.scale)
    }

    /// Sum of edge weights leaving `a`.
    pub fn boundary_weight(&self, a: &VertexSet) -> Result<Rational> {
        self.check_set(a)?;
        Ok(Rational::new(self.boundary_int(a.mask()) as i128, self.scale))
    }

    pub fn volume(&self, a: &VertexSet) -> Result<Rational> {
        self.check_set(a)?;
        Ok(Rational::new(self.volume_int(a.mask()) as i128, self.scale))
    }

    pub fn expansion(&self, a: &VertexSet) -> Result<CutProfile> {
        self.check_set(a)?;
        let boundary = Rational::new(self.boundary_int(a.mask()) as i128, self.scale);
        let volume = Rational::new(self.volume_int(a.mask()) as i128, self.scale);
        Ok(CutProfile { expansion: boundary / volume, boundary, volume })
    }

    /// Maximal connected pieces of the subgraph induced on `a`, ordered by smallest member.
    pub fn connected_components(&self, a: &VertexSet) -> Result<Vec<VertexSet>> {
        self.check_set(a)?;
        Ok(self.component_masks(a.mask()).map(|m| VertexSet::from_mask(self.n(), m)).collect())
    }

    pub fn component_count(&self) -> usize {
        self.component_masks(full_mask(self.n())).count()
    }

    /// Cycle-space dimension `|E| - |V| + c`.
    pub fn betti_number(&self) -> usize {
        self.edge_count() + self.component_count() - self.n()
    }

    pub fn is_forest(&self) -> bool {
        self.betti_number() == 0
    }

    /// First vertex whose `mu` differs from its weighted degree, if any.
    pub fn degree_convention_violation(&self) -> Option<usize> {
        (0..self.n()).find(|&v| self.mu_int[v] != self.degree_int[v])
    }

    pub fn satisfies_degree_convention(&self) -> bool {
        self.degree_convention_violation().is_none()
    }

    fn check_set(&self, a: &VertexSet) -> Result<()> {
        if a.universe() != self.n() {
            return Err(Error::Precondition(format!(
                "vertex set over {} vertices used with a graph on {}",
                a.universe(),
                self.n()
            )));
        }
        if a.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(())
    }

    pub(crate) fn full(&self) -> u32 {
        full_mask(self.n())
    }

    pub(crate) fn boundary_int(&self, mask: u32) -> u64 {
        let mut total = 0;
        for v in bits(mask) {
            for &(u, w) in &self.neighbors[v] {
                if mask >> u & 1 == 0 {
                    total += w;
                }
            }
        }
        total
    }

    pub(crate) fn volume_int(&self, mask: u32) -> u64 {
        bits(mask).map(|v| self.mu_int[v]).sum()
    }

    pub(crate) fn mu_int(&self, v: usize) -> u64 {
        self.mu_int[v]
    }

    pub(crate) fn degree_int(&self, v: usize) -> u64 {
        self.degree_int[v]
    }

    pub(crate) fn neighbors_int(&self, v: usize) -> &[(usize, u64)] {
        &self.neighbors[v]
    }

    pub(crate) fn phi(&self, mask: u32) -> Frac {
        Frac { num: self.boundary_int(mask), den: self.volume_int(mask) }
    }

    pub(crate) fn is_connected_mask(&self, mask: u32) -> bool {
        mask != 0 && self.reach(mask.trailing_zeros() as usize, mask) == mask
    }

    /// Vertices of `within` reachable from `start` inside `within`.
    pub(crate) fn reach(&self, start: usize, within: u32) -> u32 {
        let mut seen = 1u32 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adjacency[v];
            }
            next &= within & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    pub(crate) fn component_masks(&self, mask: u32) -> impl Iterator<Item = u32> + '_ {
        let mut rest = mask;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let comp = self.reach(rest.trailing_zeros() as usize, rest);
            rest &= !comp;
            Some(comp)
        })
    }
}

/// Weighted degrees `mu_v = sum of w_uv over neighbours u`.
pub fn default_mu(n: usize, edges: &[(usize, usize, Rational)]) -> Result<Vec<Rational>> {
    let mut mu = vec![Rational::zero(); n];
    for (u, v, w) in edges {
        for x in [*u, *v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if !is_positive(w) {
            return Err(Error::NonPositiveWeight {
                what: format!("weight of edge {{{u}, {v}}}"),
                value: format_compact(w),
            });
        }
        mu[*u] += w;
        mu[*v] += w;
    }
    match mu.iter().position(|m| m.is_zero()) {
        Some(vertex) => Err(Error::ZeroMu { vertex }),
        None => Ok(mu),
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn unit(edges: &[(usize, usize)]) -> Vec<(usize, usize, Rational)> {
        edges.iter().map(|&(u, v)| (u, v, Rational::from_integer(1))).collect()
    }

    /// Path on `n` vertices with unit weights and degree vertex weights.
    pub fn path(n: usize) -> WeightedGraph {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        WeightedGraph::with_default_mu(n, unit(&e)).unwrap()
    }

    pub fn cycle(n: usize) -> WeightedGraph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        WeightedGraph::with_default_mu(n, unit(&e)).unwrap()
    }

    pub fn star(leaves: usize) -> WeightedGraph {
        let e: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        WeightedGraph::with_default_mu(leaves + 1, unit(&e)).unwrap()
    }

    pub fn set(g: &WeightedGraph, vs: &[usize]) -> VertexSet {
        VertexSet::from_vertices(g.n(), vs.iter().copied()).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn boundary_examples_on_p3() {
        let g = path(3);
        assert_eq!(g.boundary_weight(&g.vertex_set()).unwrap(), r(0, 1));
        assert_eq!(g.boundary_weight(&set(&g, &[1])).unwrap(), r(2, 1));
        assert_eq!(g.boundary_weight(&set(&g, &[0, 1])).unwrap(), r(1, 1));
        assert_eq!(g.boundary_weight(&VertexSet::empty(3)), Err(Error::EmptySet));
    }

    #[test]
    fn expansion_examples_on_p3() {
        let g = path(3);
        assert_eq!(g.expansion(&set(&g, &[0])).unwrap().expansion, r(1, 1));
        let p = g.expansion(&set(&g, &[1, 2])).unwrap();
        assert_eq!((p.boundary, p.volume, p.expansion), (r(1, 1), r(3, 1), r(1, 3)));
        assert_eq!(g.expansion(&g.vertex_set()).unwrap().expansion, r(0, 1));
    }

    #[test]
    fn cut_profile_is_consistent_under_fractional_weights() {
        let g = WeightedGraph::new(vec![r(1, 3), r(5, 7), r(2, 1)], vec![(0, 1, r(3, 4)), (1, 2, r(1, 6))]).unwrap();
        let a = set(&g, &[1]);
        let p = g.expansion(&a).unwrap();
        assert_eq!(p.boundary, r(3, 4) + r(1, 6));
        assert_eq!(p.volume, r(5, 7));
        assert_eq!(p.expansion * p.volume, p.boundary);
    }

    #[test]
    fn components() {
        let g = path(3);
        let comps = g.connected_components(&set(&g, &[0, 2])).unwrap();
        assert_eq!(comps, vec![set(&g, &[0]), set(&g, &[2])]);
        assert_eq!(g.connected_components(&g.vertex_set()).unwrap(), vec![g.vertex_set()]);
        let c3 = cycle(3);
        assert_eq!(c3.connected_components(&set(&c3, &[0, 1])).unwrap(), vec![set(&c3, &[0, 1])]);
    }

    #[test]
    fn betti_numbers() {
        assert_eq!(path(5).betti_number(), 0);
        assert_eq!(star(4).betti_number(), 0);
        assert_eq!(cycle(3).betti_number(), 1);
        let two = WeightedGraph::with_default_mu(6, unit(&[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])).unwrap();
        assert_eq!(two.betti_number(), 2);
        assert!(!two.is_forest());
        assert!(path(4).is_forest());
    }

    #[test]
    fn default_mu_examples() {
        let one = Rational::from_integer;
        assert_eq!(default_mu(3, &unit(&[(0, 1), (1, 2)])).unwrap(), vec![one(1), one(2), one(1)]);
        assert_eq!(default_mu(3, &unit(&[(0, 1), (1, 2), (2, 0)])).unwrap(), vec![one(2); 3]);
        let star_mu = default_mu(4, &unit(&[(0, 1), (0, 2), (0, 3)])).unwrap();
        assert_eq!(star_mu, vec![one(3), one(1), one(1), one(1)]);
        assert_eq!(default_mu(3, &unit(&[(0, 1)])), Err(Error::ZeroMu { vertex: 2 }));
    }

    #[test]
    fn isolated_vertices_allowed_with_explicit_mu() {
        let g = WeightedGraph::new(vec![r(1, 1); 3], vec![]).unwrap();
        assert_eq!(g.betti_number(), 0);
        assert_eq!(g.component_count(), 3);
    }

    #[test]
    fn construction_rejects_invalid_input() {
        let one = r(1, 1);
        assert_eq!(WeightedGraph::new(vec![one; 2], vec![(0, 0, one)]).unwrap_err(), Error::SelfLoop(0));
        assert_eq!(
            WeightedGraph::new(vec![one; 2], vec![(0, 1, one), (1, 0, one)]).unwrap_err(),
            Error::DuplicateEdge(0, 1)
        );
        assert!(matches!(
            WeightedGraph::new(vec![one; 2], vec![(0, 1, r(0, 1))]),
            Err(Error::NonPositiveWeight { .. })
        ));
        assert!(matches!(WeightedGraph::new(vec![one, r(-1, 2)], vec![]), Err(Error::NonPositiveWeight { .. })));
        assert!(matches!(
            WeightedGraph::new(vec![one; 2], vec![(0, 2, one)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
        assert!(matches!(WeightedGraph::new(vec![one; 25], vec![]), Err(Error::TooManyVertices { .. })));
        assert_eq!(WeightedGraph::new(vec![], vec![]).unwrap_err(), Error::NoVertices);
    }

    #[test]
    fn vertex_set_algebra() {
        let a = VertexSet::from_vertices(5, [0, 2]).unwrap();
        let b = VertexSet::from_vertices(5, [2, 3]).unwrap();
        assert_eq!(a.union(&b).to_vec(), vec![0, 2, 3]);
        assert_eq!(a.intersection(&b).to_vec(), vec![2]);
        assert_eq!(a.difference(&b).to_vec(), vec![0]);
        assert_eq!(a.complement().to_vec(), vec![1, 3, 4]);
        assert_eq!(a.len(), 2);
        assert_eq!(a.to_string(), "{0,2}");
        assert!(VertexSet::new(3, 0b1000).is_err());
        assert!(VertexSet::from_vertices(3, [3]).is_err());
    }
}
