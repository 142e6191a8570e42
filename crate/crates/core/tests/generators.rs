use hvclust::analytic::expected_degree;
use hvclust::clustering::HBinSpec;
use hvclust::graphgen::{expected_edge_count, generate, GeneratorKind};
use hvclust::powerlaw::sample_hidden;
use hvclust::seeding::replica_rng;
use hvclust::{AnalyticConfig, Kernel, PowerLawModel, RunningStats};

#[test]
fn mean_degree_follows_the_hidden_variable() {
    let (tau, n) = (2.7, 5_000);
    let m = PowerLawModel::new(tau, 1.0, n).unwrap();
    let s = m.default_cutoffs().unwrap();
    let bins = HBinSpec::logarithmic(1.0, 16.0, 4).unwrap();
    let cfg = AnalyticConfig::default();
    for kernel in [Kernel::max_dense(), Kernel::poisson(), Kernel::max_random()] {
        // Vertices of one replica share its hubs, so errors are taken across replicas.
        let mut per_bin = vec![RunningStats::default(); bins.len()];
        let mut per_bin_expected = vec![RunningStats::default(); bins.len()];
        for r in 0..40 {
            let mut rng = replica_rng(44, r);
            let hidden = sample_hidden(&m, s.h_c, n as usize, &mut rng).unwrap();
            let g = generate(GeneratorKind::Fast, &kernel, hidden, &s, &mut rng).unwrap();
            let mut got = vec![RunningStats::default(); bins.len()];
            let mut want = vec![RunningStats::default(); bins.len()];
            for v in 0..g.n() {
                if let Some(b) = bins.locate(g.hidden()[v]) {
                    got[b].push(g.degree(v) as f64);
                    want[b].push(expected_degree(&kernel, &s, tau, 1.0, m.n(), g.hidden()[v], &cfg).unwrap().value);
                }
            }
            for b in 0..bins.len() {
                per_bin[b].push(got[b].mean().unwrap() - want[b].mean().unwrap());
                per_bin_expected[b].push(want[b].mean().unwrap());
            }
        }
        for (diff, want) in per_bin.iter().zip(&per_bin_expected) {
            let z = diff.mean().unwrap() / diff.stderr().unwrap();
            assert!(
                z.abs() < 4.0,
                "{}: mean degree off by {} from {}",
                kernel.label(),
                diff.mean().unwrap(),
                want.mean().unwrap()
            );
        }
    }
}

#[test]
fn fast_and_naive_agree_on_edge_counts() {
    let m = PowerLawModel::new(2.4, 1.0, 800).unwrap();
    let s = m.default_cutoffs().unwrap();
    let kernel = Kernel::poisson();
    let hidden = sample_hidden(&m, s.h_c, 800, &mut replica_rng(5, 0)).unwrap();
    let (mean, var) = expected_edge_count(&kernel, &hidden, &s).unwrap();
    for kind in [GeneratorKind::Fast, GeneratorKind::Naive] {
        let mut edges = RunningStats::default();
        for r in 0..100 {
            let g = generate(kind, &kernel, hidden.clone(), &s, &mut replica_rng(6, r)).unwrap();
            edges.push(g.edge_count() as f64);
        }
        let z = (edges.mean().unwrap() - mean) / (var / 100.0).sqrt();
        assert!(z.abs() < 4.0, "{kind:?}: z = {z}");
    }
}
