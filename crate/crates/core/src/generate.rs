//! Seeded instance generators.
//!
//! Randomness comes from xoshiro256++ seeded through SplitMix64
//! (`Xoshiro256PlusPlus::seed_from_u64`). Bounded draws use the multiply-shift
//! map `(x * bound) >> 64` on each 64-bit output, so a seed produces the same
//! graph in any implementation of these two generators.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::graph::{WeightedGraph, MAX_VERTICES};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Path,
    Star,
    Cycle,
    RandomTree,
    RandomForest,
    Unicyclic,
    RandomConnected,
}

impl GraphKind {
    pub const ALL: [GraphKind; 7] = [
        GraphKind::Path,
        GraphKind::Star,
        GraphKind::Cycle,
        GraphKind::RandomTree,
        GraphKind::RandomForest,
        GraphKind::Unicyclic,
        GraphKind::RandomConnected,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Path => "path",
            GraphKind::Star => "star",
            GraphKind::Cycle => "cycle",
            GraphKind::RandomTree => "random-tree",
            GraphKind::RandomForest => "random-forest",
            GraphKind::Unicyclic => "unicyclic",
            GraphKind::RandomConnected => "random-connected",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| Error::Parse(format!("unknown graph kind {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum WeightMode {
    #[default]
    Unit,
    /// `a / b` with `a` in `1..=10` and `b` in `1..=5`.
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub kind: GraphKind,
    pub n: usize,
    pub seed: u64,
    pub weights: WeightMode,
    /// Draw `mu` independently instead of using the weighted degree.
    pub explicit_mu: bool,
    /// Extra edges on top of a spanning tree, for `random-connected`.
    pub loops: usize,
}

impl GenParams {
    pub fn new(kind: GraphKind, n: usize) -> Self {
        Self { kind, n, seed: 0, weights: WeightMode::Unit, explicit_mu: false, loops: 1 }
    }
}

/// Seeded source of bounded integers.
#[derive(Clone, Debug)]
pub struct InstanceRng(Xoshiro256PlusPlus);

impl InstanceRng {
    pub fn new(seed: u64) -> Self {
        Self(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    /// Uniform in `0..bound`; `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        ((self.0.next_u64() as u128 * bound as u128) >> 64) as u64
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.below(bound as u64) as usize
    }

    /// Inclusive range.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    pub fn weight(&mut self, mode: WeightMode) -> Rational {
        match mode {
            WeightMode::Unit => Rational::from_integer(1),
            WeightMode::Random => {
                let a = self.range(1, 10) as i128;
                let b = self.range(1, 5) as i128;
                Rational::new(a, b)
            }
        }
    }

    /// Uniform in `[-1, 1)` with 53 random bits.
    pub fn unit_interval(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }

    pub fn rng(&mut self) -> &mut Xoshiro256PlusPlus {
        &mut self.0
    }
}

/// Decodes a Prüfer sequence of length `n - 2` into the edges of a labeled tree.
pub fn tree_from_prufer(code: &[usize]) -> Result<Vec<(usize, usize)>> {
    let n = code.len() + 2;
    if let Some(&bad) = code.iter().find(|&&c| c >= n) {
        return Err(Error::VertexOutOfRange { vertex: bad, n });
    }
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaf = (0..n).find(|&v| degree[v] == 1).expect("a tree has a leaf");
    let mut ptr = leaf;
    for &c in code {
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 && c < ptr {
            leaf = c;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    Ok(edges)
}

/// Every Prüfer sequence for `n` vertices, in lexicographic order.
pub fn prufer_codes(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let len = n.saturating_sub(2);
    let total = if n < 2 { 0 } else { (n as u64).pow(len as u32) };
    (0..total).map(move |mut idx| {
        let mut code = vec![0; len];
        for slot in code.iter_mut().rev() {
            *slot = (idx % n as u64) as usize;
            idx /= n as u64;
        }
        code
    })
}

/// All labeled trees on `n >= 2` vertices.
pub fn all_trees(n: usize, weights: WeightMode, seed: u64) -> impl Iterator<Item = Result<WeightedGraph>> {
    let mut rng = InstanceRng::new(seed);
    prufer_codes(n).map(move |code| {
        let edges = tree_from_prufer(&code)?;
        finish(n, &edges, weights, false, &mut rng)
    })
}

fn random_tree_edges(n: usize, rng: &mut InstanceRng) -> Vec<(usize, usize)> {
    if n == 1 {
        return Vec::new();
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.index(n)).collect();
    tree_from_prufer(&code).expect("entries are below n")
}

fn add_random_edges(n: usize, edges: &mut Vec<(usize, usize)>, count: usize, rng: &mut InstanceRng) -> Result<()> {
    let mut present = vec![vec![false; n]; n];
    for &(u, v) in edges.iter() {
        present[u][v] = true;
        present[v][u] = true;
    }
    for _ in 0..count {
        let free: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| !present[u][v]).collect();
        if free.is_empty() {
            return Err(Error::Precondition(format!(
                "a simple graph on {n} vertices has no room for {count} extra edges"
            )));
        }
        let (u, v) = free[rng.index(free.len())];
        present[u][v] = true;
        present[v][u] = true;
        edges.push((u, v));
    }
    Ok(())
}

fn finish(
    n: usize,
    edges: &[(usize, usize)],
    weights: WeightMode,
    explicit_mu: bool,
    rng: &mut InstanceRng,
) -> Result<WeightedGraph> {
    let weighted: Vec<(usize, usize, Rational)> = edges.iter().map(|&(u, v)| (u, v, rng.weight(weights))).collect();
    let g = if explicit_mu {
        let mu = (0..n).map(|_| rng.weight(weights)).collect();
        WeightedGraph::new(mu, weighted)?
    } else {
        WeightedGraph::with_default_mu(n, weighted)?
    };
    g.with_labels((1..=n).map(|v| v.to_string()).collect())
}

pub fn generate(params: &GenParams) -> Result<WeightedGraph> {
    let n = params.n;
    if n == 0 {
        return Err(Error::NoVertices);
    }
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices { n, max: MAX_VERTICES });
    }
    let need = |min: usize| {
        if n < min {
            Err(Error::Precondition(format!("{} needs at least {min} vertices", params.kind)))
        } else {
            Ok(())
        }
    };
    let mut rng = InstanceRng::new(params.seed);
    let edges: Vec<(usize, usize)> = match params.kind {
        GraphKind::Path => {
            need(2)?;
            (1..n).map(|v| (v - 1, v)).collect()
        }
        GraphKind::Star => {
            need(2)?;
            (1..n).map(|v| (0, v)).collect()
        }
        GraphKind::Cycle => {
            need(3)?;
            (0..n).map(|v| (v.min((v + 1) % n), v.max((v + 1) % n))).collect()
        }
        GraphKind::RandomTree => {
            need(2)?;
            random_tree_edges(n, &mut rng)
        }
        GraphKind::RandomForest => {
            need(2)?;
            let mut edges = random_tree_edges(n, &mut rng);
            let cuts = rng.index(n / 3 + 1);
            for _ in 0..cuts {
                let mut degree = vec![0usize; n];
                for &(u, v) in &edges {
                    degree[u] += 1;
                    degree[v] += 1;
                }
                // Under the degree convention no vertex may end up isolated.
                let removable: Vec<usize> = (0..edges.len())
                    .filter(|&i| params.explicit_mu || (degree[edges[i].0] > 1 && degree[edges[i].1] > 1))
                    .collect();
                if removable.is_empty() {
                    break;
                }
                edges.remove(removable[rng.index(removable.len())]);
            }
            edges
        }
        GraphKind::Unicyclic => {
            need(3)?;
            let mut edges = random_tree_edges(n, &mut rng);
            add_random_edges(n, &mut edges, 1, &mut rng)?;
            edges
        }
        GraphKind::RandomConnected => {
            need(2)?;
            let mut edges = random_tree_edges(n, &mut rng);
            add_random_edges(n, &mut edges, params.loops, &mut rng)?;
            edges
        }
    };
    finish(n, &edges, params.weights, params.explicit_mu, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prufer_decode_examples() {
        // Code (3, 3, 3) on 5 vertices is the star centred at 3.
        let mut e = tree_from_prufer(&[3, 3, 3]).unwrap();
        e.sort();
        assert_eq!(e, vec![(0, 3), (1, 3), (2, 3), (3, 4)]);
        let mut e = tree_from_prufer(&[]).unwrap();
        e.sort();
        assert_eq!(e, vec![(0, 1)]);
        assert!(tree_from_prufer(&[5]).is_err());
    }

    #[test]
    fn prufer_codes_give_distinct_trees() {
        // Cayley: n^(n-2) labeled trees.
        for n in 2..=6 {
            let mut seen = std::collections::BTreeSet::new();
            for code in prufer_codes(n) {
                let mut e: Vec<(usize, usize)> =
                    tree_from_prufer(&code).unwrap().into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
                e.sort();
                let g = WeightedGraph::with_default_mu(n, e.iter().map(|&(a, b)| (a, b, Rational::from_integer(1))))
                    .unwrap();
                assert!(g.is_forest() && g.component_count() == 1);
                seen.insert(e);
            }
            assert_eq!(seen.len() as u64, (n as u64).pow(n as u32 - 2));
        }
    }

    #[test]
    fn generators_have_expected_shape() {
        let p3 = generate(&GenParams::new(GraphKind::Path, 3)).unwrap();
        assert_eq!(p3.edge_count(), 2);
        assert_eq!(p3.labels(), &["1", "2", "3"]);
        let u = generate(&GenParams { seed: 7, ..GenParams::new(GraphKind::Unicyclic, 6) }).unwrap();
        assert_eq!(u.betti_number(), 1);
        let t = generate(&GenParams { seed: 1, ..GenParams::new(GraphKind::RandomTree, 8) }).unwrap();
        assert_eq!(t.betti_number(), 0);
        assert_eq!(t.component_count(), 1);
        let c = generate(&GenParams { loops: 4, seed: 3, ..GenParams::new(GraphKind::RandomConnected, 8) }).unwrap();
        assert_eq!(c.betti_number(), 4);
        for seed in 0..50 {
            let f = generate(&GenParams {
                seed,
                weights: WeightMode::Random,
                ..GenParams::new(GraphKind::RandomForest, 9)
            })
            .unwrap();
            assert!(f.is_forest() && f.satisfies_degree_convention());
        }
        assert!(generate(&GenParams::new(GraphKind::Cycle, 2)).is_err());
        assert!(generate(&GenParams { loops: 10, ..GenParams::new(GraphKind::RandomConnected, 4) }).is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let p = GenParams {
            seed: 42,
            weights: WeightMode::Random,
            explicit_mu: true,
            ..GenParams::new(GraphKind::RandomConnected, 7)
        };
        assert_eq!(generate(&p).unwrap(), generate(&p).unwrap());
        let q = GenParams { seed: 43, ..p.clone() };
        assert_ne!(generate(&p).unwrap(), generate(&q).unwrap());
    }

    #[test]
    fn multiply_shift_stays_in_range() {
        let mut rng = InstanceRng::new(9);
        for bound in 1..50 {
            assert!(rng.below(bound) < bound);
        }
        let x = rng.unit_interval();
        assert!((-1.0..1.0).contains(&x));
    }
}
