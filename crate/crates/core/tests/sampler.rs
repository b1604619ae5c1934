use gtc::engine::retic_distribution;
use gtc::oracle::{is_galled, is_tree_child, no_leaf_child_count};
use gtc::sampler::{
    draw_rng, parse, parse_newick, sample_gtc, sample_plan, sample_retic_count, serialize, to_newick, Format,
};
use gtc::verify::sampler_chi_square;
use proptest::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn samples_are_valid_and_round_trip(n in 1usize..60, seed in any::<u64>()) {
        let plan = sample_plan(n, &mut draw_rng(seed, 0)).unwrap();
        let net = plan.realize();
        prop_assert!(net.is_valid());
        prop_assert!(is_tree_child(&net) && is_galled(&net));
        prop_assert_eq!(net.size(), n);
        prop_assert_eq!(net.reticulation_count(), plan.root.reticulations());
        prop_assert_eq!(no_leaf_child_count(&net), plan.root.no_leaf_child());
        for format in [Format::Newick, Format::EdgeJson] {
            let back = parse(&serialize(&net, format), format).unwrap();
            prop_assert!(back.structurally_equal(&net));
        }
        let text = to_newick(&net);
        prop_assert_eq!(to_newick(&parse_newick(&text).unwrap()), text);
    }

    #[test]
    fn same_seed_same_network(n in 1usize..40, seed in any::<u64>(), index in 0u64..1000) {
        let a = sample_gtc(n, &mut draw_rng(seed, index)).unwrap();
        let b = sample_gtc(n, &mut draw_rng(seed, index)).unwrap();
        prop_assert_eq!(to_newick(&a), to_newick(&b));
    }
}

#[test]
fn uniform_over_the_size_three_list() {
    let (_, df, p, failures) = sampler_chi_square(3, 48_000, 5).unwrap();
    assert_eq!((df, failures), (47.0, 0));
    assert!(p > 1e-3, "p = {p}");
}

/// Reticulation counts of full samples against the exact law.
#[test]
fn reticulation_law_of_samples_at_eight() {
    let n = 8;
    let law = retic_distribution(n).unwrap();
    let draws = 40_000u64;
    let mut hits = vec![0u64; n];
    for d in 0..draws {
        hits[sample_gtc(n, &mut draw_rng(99, d)).unwrap().reticulation_count()] += 1;
    }
    // pool the sparse low-k cells into one
    let expected: Vec<f64> = law.probs.iter().map(|p| p * draws as f64).collect();
    let (mut stat, mut cells, mut pool_o, mut pool_e) = (0.0, 0usize, 0.0, 0.0);
    for k in 0..n {
        if expected[k] < 20.0 {
            pool_o += hits[k] as f64;
            pool_e += expected[k];
        } else {
            stat += (hits[k] as f64 - expected[k]).powi(2) / expected[k];
            cells += 1;
        }
    }
    if pool_e > 0.0 {
        stat += (pool_o - pool_e).powi(2) / pool_e;
        cells += 1;
    }
    let p = 1.0 - ChiSquared::new((cells - 1) as f64).unwrap().cdf(stat);
    assert!(p > 1e-3, "χ² = {stat}, p = {p}");
}

#[test]
fn reticulation_count_sampler_mean_at_fifty() {
    let law = retic_distribution(50).unwrap();
    let (mean, sd) = (law.mean_f64(), law.variance_f64().sqrt());
    let draws = 20_000;
    let total: usize = (0..draws).map(|d| sample_retic_count(50, &mut draw_rng(3, d)).unwrap()).sum();
    let got = total as f64 / draws as f64;
    // five standard errors
    assert!((got - mean).abs() < 5.0 * sd / (draws as f64).sqrt(), "{got} vs {mean}");
}

#[test]
fn large_samples() {
    for n in [150usize, 300] {
        let net = sample_gtc(n, &mut draw_rng(1, 0)).unwrap();
        assert!(net.is_valid() && is_tree_child(&net) && is_galled(&net));
        assert_eq!(net.size(), n);
    }
}
