use cheeger_lab::generate::{all_trees, generate, GenParams, GraphKind, InstanceRng, WeightMode};
use cheeger_lab::io::{emit_json, emit_tsv, parse_json, parse_tsv};
use cheeger_lab::rational::to_f64;
use cheeger_lab::spectra::indicator_combination;
use cheeger_lab::verify::random_subpartition;
use cheeger_lab::{
    cheeger_k, common_union, dirichlet_k, forest_certificate, rayleigh, rayleigh_l1_exact, sweep_round,
    sweep_round_exact, union_family, CheegerOptions, Rational, VertexSet, WeightedGraph,
};
use proptest::prelude::*;

fn graph(kind: GraphKind, n: usize, seed: u64, explicit_mu: bool) -> WeightedGraph {
    let loops = ((seed % 4) as usize).min(n * (n - 1) / 2 - (n - 1));
    let kind = if kind == GraphKind::Unicyclic && n < 3 { GraphKind::RandomTree } else { kind };
    generate(&GenParams { seed, weights: WeightMode::Random, explicit_mu, loops, ..GenParams::new(kind, n) }).unwrap()
}

fn any_kind() -> impl Strategy<Value = GraphKind> {
    prop_oneof![
        Just(GraphKind::RandomTree),
        Just(GraphKind::RandomForest),
        Just(GraphKind::Unicyclic),
        Just(GraphKind::RandomConnected),
    ]
}

fn set(n: usize, mask: u32) -> VertexSet {
    VertexSet::new(n, mask).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn disjoint_union_expansion_bounds(kind in any_kind(), n in 2usize..=7, seed in any::<u64>(), mu in any::<bool>()) {
        let g = graph(kind, n, seed, mu);
        let full = (1u32 << n) - 1;
        for a in 1..=full {
            let ea = g.expansion(&set(n, a)).unwrap();
            if a != full {
                let rest = g.expansion(&set(n, full & !a)).unwrap();
                prop_assert_eq!(ea.boundary, rest.boundary);
            }
            let others = full & !a;
            let mut b = others;
            while b != 0 {
                let pa = ea.expansion;
                let pb = g.expansion(&set(n, b)).unwrap().expansion;
                let pu = g.expansion(&set(n, a | b)).unwrap().expansion;
                prop_assert!(pu <= pa.max(pb));
                let joined = g.edges().iter().any(|e| (a >> e.u & 1 == 1 && b >> e.v & 1 == 1) || (a >> e.v & 1 == 1 && b >> e.u & 1 == 1));
                if !joined {
                    prop_assert!(pu >= pa.min(pb));
                }
                b = (b - 1) & others;
            }
        }
    }

    #[test]
    fn forests_have_equal_constants(n in 2usize..=10, seed in any::<u64>(), unit in any::<bool>()) {
        let weights = if unit { WeightMode::Unit } else { WeightMode::Random };
        let g = generate(&GenParams { seed, weights, ..GenParams::new(GraphKind::RandomForest, n) }).unwrap();
        let opts = CheegerOptions { budget: u128::MAX, oracle: false };
        for k in 1..=n {
            let h = cheeger_k(&g, k, opts).unwrap().value;
            prop_assert_eq!(dirichlet_k(&g, k).unwrap().value, h);
            let c = forest_certificate(&g, k, u128::MAX).unwrap();
            prop_assert!(c.removed.len() < k);
            prop_assert_eq!(c.dirichlet.value, h);
        }
    }

    #[test]
    fn common_union_is_a_shared_union(n in 1usize..=12, seed in any::<u64>()) {
        let mut rng = InstanceRng::new(seed);
        let k = 1 + rng.index(n);
        let a = random_subpartition(n, k, &mut rng).unwrap();
        let b = random_subpartition(n, n + 1 - k, &mut rng).unwrap();
        let (ia, ib) = common_union(&a, &b).unwrap();
        prop_assert!(!ia.is_empty() && !ib.is_empty());
        let u = a.union_of(&ia);
        prop_assert_eq!(&u, &b.union_of(&ib));
        prop_assert!(union_family(&a).contains(&u) && union_family(&b).contains(&u));
    }

    #[test]
    fn sweep_stays_below_the_quotient(kind in any_kind(), n in 2usize..=10, seed in any::<u64>(), mu in any::<bool>()) {
        let g = graph(kind, n, seed, mu);
        let mut rng = InstanceRng::new(seed ^ 1);
        for _ in 0..20 {
            let x: Vec<f64> = (0..n).map(|_| rng.unit_interval() - 0.5).collect();
            let b = sweep_round(&g, &x).unwrap();
            prop_assert!(to_f64(&b.expansion) <= rayleigh(&g, &x, 1.0).unwrap() + 1e-12);

            let sp = random_subpartition(n, 1 + rng.index(n), &mut rng).unwrap();
            let t: Vec<Rational> = (0..sp.k()).map(|i| Rational::from_integer(rng.range(-5, 5) as i128 + i128::from(i == 0 && rng.index(2) == 0))).collect();
            if t.iter().all(|v| *v == Rational::from_integer(0)) {
                continue;
            }
            let x = indicator_combination(&sp, &t).unwrap();
            let b = sweep_round_exact(&g, &x).unwrap();
            prop_assert!(b.expansion <= rayleigh_l1_exact(&g, &x).unwrap());
            prop_assert!(union_family(&sp).contains(&b.set));
        }
    }

    #[test]
    fn files_round_trip(kind in any_kind(), n in 2usize..=12, seed in any::<u64>(), mu in any::<bool>()) {
        let g = graph(kind, n, seed, mu);
        prop_assert_eq!(&parse_json(&emit_json(&g, mu)).unwrap(), &g);
        prop_assert_eq!(&parse_json(&emit_json(&g, true)).unwrap(), &g);
        match emit_tsv(&g) {
            Ok(text) => prop_assert_eq!(&parse_tsv(&text).unwrap(), &g),
            Err(_) => prop_assert!(!g.satisfies_degree_convention()),
        }
    }
}

#[test]
fn every_small_tree_satisfies_the_identity() {
    let opts = CheegerOptions { budget: u128::MAX, oracle: false };
    for n in 2..=6 {
        for g in all_trees(n, WeightMode::Unit, 0) {
            let g = g.unwrap();
            for k in 1..=n {
                assert_eq!(cheeger_k(&g, k, opts).unwrap().value, dirichlet_k(&g, k).unwrap().value);
            }
        }
    }
}
