//! Invariants checked on random inputs.

use std::collections::BTreeSet;

use hvclust::analytic::{c_ab_h, g_factor};
use hvclust::clustering::{brute_force_triangles, local_clustering};
use hvclust::lerch::{lerch_phi, LerchParams};
use hvclust::powerlaw::{expected_max_bounds, expected_max_untruncated, TruncatedPowerLaw};
use hvclust::seeding::replica_seed;
use hvclust::{count_triangles, AnalyticConfig, CutoffScheme, Graph, Kernel, PowerLawModel, RunningStats};
use proptest::prelude::*;

fn builtin() -> impl Strategy<Value = Kernel> {
    prop_oneof![Just(Kernel::max_dense()), Just(Kernel::poisson()), Just(Kernel::max_random())]
}

fn random_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (3..max_n).prop_flat_map(|n| {
        let pairs = proptest::collection::vec((0..n as u32, 0..n as u32), 0..4 * n);
        pairs.prop_map(move |pairs| {
            let edges: BTreeSet<(u32, u32)> =
                pairs.into_iter().filter(|(i, j)| i != j).map(|(i, j)| (i.min(j), i.max(j))).collect();
            let edges: Vec<_> = edges.into_iter().collect();
            Graph::from_edges(vec![1.0; n], &edges).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn connection_probability_is_bounded_and_monotone(k in builtin(), u in 0.0f64..1e4, v in 0.0f64..1e4) {
        let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
        let (r_lo, r_hi) = (k.eval_r(lo).unwrap(), k.eval_r(hi).unwrap());
        prop_assert!((0.0..=1.0).contains(&r_lo) && (0.0..=1.0).contains(&r_hi));
        prop_assert!(r_lo <= r_hi);
        prop_assert!(k.eval_f(hi).unwrap() <= k.eval_f(lo).unwrap());
        prop_assert!(r_hi <= hi.min(1.0) * (1.0 + 1e-15));
    }

    #[test]
    fn triangle_counts_match_enumeration(g in random_graph(40)) {
        let fast = count_triangles(&g);
        prop_assert_eq!(&fast, &brute_force_triangles(&g).unwrap());
        prop_assert_eq!(fast.iter().sum::<u64>() % 3, 0);
        for (v, c) in local_clustering(&g, &fast).into_iter().enumerate() {
            prop_assert!((0.0..=1.0).contains(&c), "vertex {v}: {c}");
        }
    }

    #[test]
    fn graph_is_symmetric(g in random_graph(60)) {
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
        prop_assert!(g.validate().is_ok());
        for (i, j) in g.edges() {
            prop_assert!(i < j);
            prop_assert!(g.has_edge(i as usize, j as usize) && g.has_edge(j as usize, i as usize));
        }
    }

    #[test]
    fn running_stats_merge_is_order_free(xs in proptest::collection::vec(-1e3f64..1e3, 1..60), split in 0usize..60) {
        let split = split.min(xs.len());
        let mut all = RunningStats::default();
        xs.iter().for_each(|&x| all.push(x));
        let (mut left, mut right) = (RunningStats::default(), RunningStats::default());
        xs[..split].iter().for_each(|&x| left.push(x));
        xs[split..].iter().for_each(|&x| right.push(x));
        right.merge(&left);
        prop_assert_eq!(right.count, all.count);
        prop_assert!((right.mean().unwrap() - all.mean().unwrap()).abs() < 1e-9);
        if let (Some(a), Some(b)) = (right.variance(), all.variance()) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b));
        }
    }

    #[test]
    fn quantile_inverts_cdf(tau in 2.01f64..3.0, upper in 2.0f64..1e6, p in 0.0f64..=1.0) {
        let d = TruncatedPowerLaw::new(tau, 1.0, upper).unwrap();
        let h = d.quantile(p);
        prop_assert!((1.0..=upper).contains(&h));
        prop_assert!((d.cdf(h) - p).abs() < 1e-9);
    }

    #[test]
    fn local_clustering_nonincreasing_in_h(k in builtin(), tau in 2.05f64..2.95, lo in 0.0f64..8.0, step in 0.01f64..3.0) {
        let s = PowerLawModel::new(tau, 1.0, 100_000).unwrap().default_cutoffs().unwrap();
        let cfg = AnalyticConfig::default();
        let (h1, h2) = (lo.exp(), (lo + step).exp());
        let c1 = c_ab_h(&k, &s, tau, 1.0, h1, &cfg).unwrap();
        let c2 = c_ab_h(&k, &s, tau, 1.0, h2, &cfg).unwrap();
        let slack = 10.0 * (c1.error.max(cfg.rel_tol * c1.value) + c2.error.max(cfg.rel_tol * c2.value));
        prop_assert!(c2.value <= c1.value + slack, "c({h1}) = {} < c({h2}) = {}", c1.value, c2.value);
    }

    #[test]
    fn zero_h_clustering_nondecreasing_in_b(k in builtin(), tau in 2.05f64..2.95, b in 1.5f64..200.0, grow in 1.01f64..3.0) {
        let cfg = AnalyticConfig::default();
        let alpha = 1e-3;
        let g1 = g_factor(&k, tau, alpha, b, &cfg).unwrap();
        let g2 = g_factor(&k, tau, alpha, b * grow, &cfg).unwrap();
        let slack = 10.0 * (g1.error.max(cfg.rel_tol * g1.value) + g2.error.max(cfg.rel_tol * g2.value));
        prop_assert!(g1.value <= g2.value + slack);
    }

    #[test]
    fn lerch_decreasing_in_v(z in 0.0f64..0.99, s in 0.1f64..3.0, v in 0.1f64..20.0, dv in 0.01f64..5.0) {
        let a = lerch_phi(&LerchParams::new(z, s, v).unwrap(), 1e-13).unwrap();
        let b = lerch_phi(&LerchParams::new(z, s, v + dv).unwrap(), 1e-13).unwrap();
        prop_assert!(b < a);
    }

    #[test]
    fn natural_cutoff_sandwich(tau in 2.05f64..3.0, exponent in 1.0f64..9.0) {
        let n = 10f64.powf(exponent).round() as u64;
        let exact = expected_max_untruncated(tau, 1.0, n).unwrap();
        let (lo, hi) = expected_max_bounds(tau, 1.0, n).unwrap();
        prop_assert!(lo <= exact && exact <= hi, "tau = {tau}, N = {n}: {lo} <= {exact} <= {hi}");
    }

    #[test]
    fn cutoff_scheme_round_trips(h_s in 1.0f64..1e4, ratio in 1.0f64..1e3) {
        let s = CutoffScheme::new(h_s, h_s * ratio).unwrap();
        let t = CutoffScheme::from_ab(s.a, s.b).unwrap();
        prop_assert!(((t.h_s - s.h_s) / s.h_s).abs() < 1e-12);
        prop_assert!(((t.h_c - s.h_c) / s.h_c).abs() < 1e-12);
    }

    #[test]
    fn replica_seeds_are_distinct(master in any::<u64>(), r in 0u64..1_000_000) {
        prop_assert_ne!(replica_seed(master, r), replica_seed(master, r + 1));
    }
}
