use std::collections::HashMap;

use gtc::combin::binom;
use gtc::onecomp::{l_count, otc, otc_total, sample_one_component, LabelModel};
use gtc::oracle::{enumerate_one_component, for_each_one_component, is_galled, is_one_component, reticulation_count};
use gtc::sampler::to_newick;
use gtc::verify::chi_square_uniform;
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn closed_form_matches_enumeration_and_every_member_is_galled() {
    for n in 1..=6 {
        let mut counts = vec![0u64; n];
        let mut galled = 0u64;
        for_each_one_component(n, |net| {
            counts[reticulation_count(net)] += 1;
            galled += is_galled(net) as u64;
        })
        .unwrap();
        let want: Vec<u64> = (0..n).map(|k| u64::try_from(otc(n, k)).unwrap()).collect();
        assert_eq!(counts, want, "n = {n}");
        assert_eq!(galled, counts.iter().sum::<u64>(), "n = {n}");
    }
}

#[test]
fn frozen_values() {
    assert_eq!(
        (0..3).map(|k| otc(3, k)).collect::<Vec<_>>(),
        [3u32, 18, 18].map(BigUint::from)
    );
    assert_eq!(otc_total(4), BigUint::from(enumerate_one_component(4).unwrap().len()));
    assert_eq!(otc_total(4), BigUint::from(1095u32));
}

/// Hat samples with uniform labels hit every member of the class equally often.
#[test]
fn one_component_sampler_is_uniform_at_four() {
    let nets = enumerate_one_component(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for k in 0..4 {
        let class: HashMap<String, usize> = nets
            .iter()
            .filter(|n| reticulation_count(*n) == k)
            .enumerate()
            .map(|(i, n)| (to_newick(n), i))
            .collect();
        let mut hits = vec![0u64; class.len()];
        for _ in 0..40 * class.len() {
            let s = sample_one_component(4, k, LabelModel::Uniform, &mut rng).unwrap();
            assert!(is_one_component(&s));
            hits[class[&to_newick(&s)]] += 1;
        }
        let (_, _, p) = chi_square_uniform(&hits);
        assert!(p > 1e-3, "k = {k}: p = {p}");
    }
}

proptest! {
    #[test]
    fn l_count_times_binomial_is_otc(n in 1usize..=500, frac in 0.0f64..1.0) {
        let k = ((n as f64) * frac) as usize;
        let k = k.min(n - 1);
        prop_assert_eq!(l_count(n, k) * binom(n, k), otc(n, k));
    }

    #[test]
    fn row_sums_are_totals(n in 1usize..=200) {
        let s: BigUint = (0..n).map(|k| otc(n, k)).sum();
        prop_assert_eq!(s, otc_total(n));
    }
}
