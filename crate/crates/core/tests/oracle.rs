use gtc::engine::gtc_table;
use gtc::onecomp::sample_tree;
use gtc::oracle::{
    component_graph, distinct_canonical_forms, enumerate_gtc, enumerate_tree_child_not_galled, is_galled,
    is_one_component, is_tree_child, reticulation_count, Corpus,
};
use gtc::sampler::parse_newick;
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn corpus_matches_the_joint_table() {
    let t = gtc_table(4, true).unwrap();
    for n in 1..=4 {
        let c = Corpus::gtc(n).unwrap();
        assert_eq!(BigUint::from(c.networks.len()), t.total(n));
        for ((k, i), count) in c.counts() {
            assert!(k < n);
            assert_eq!(t.get_i(n, k, i), Some(BigUint::from(count)), "n = {n}, k = {k}, i = {i}");
        }
    }
}

#[test]
fn canonical_strings_are_injective() {
    for n in 1..=3 {
        let nets = enumerate_gtc(n).unwrap();
        for (a, x) in nets.iter().enumerate() {
            for y in &nets[a + 1..] {
                assert!(!x.structurally_equal(y));
            }
        }
        assert!(distinct_canonical_forms(&nets));
    }
    assert!(distinct_canonical_forms(&enumerate_gtc(4).unwrap()));
}

#[test]
fn galled_iff_component_graph_is_a_tree() {
    for n in 1..=4 {
        for net in enumerate_gtc(n).unwrap() {
            assert!(component_graph(&net).is_phylogenetic_tree());
        }
        for net in enumerate_tree_child_not_galled(n).unwrap() {
            assert!(is_tree_child(&net) && !is_galled(&net));
            assert!(!component_graph(&net).is_phylogenetic_tree());
        }
    }
}

#[test]
fn predicate_examples() {
    // two reticulations under one tree node: tree-child fails
    let t = parse_newick("(((1)#H1,(2)#H2),(#H1,(#H2,3)));").unwrap();
    assert!(!is_tree_child(&t));
    let g = parse_newick("((1,(2)#H1),#H1);").unwrap();
    assert!(is_tree_child(&g) && is_galled(&g) && is_one_component(&g));
    assert_eq!(reticulation_count(&g), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trees_pass_every_predicate(n in 1usize..40, seed in any::<u64>()) {
        let labels: Vec<u32> = (1..=n as u32).collect();
        let t = sample_tree(&labels, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(t.is_valid());
        prop_assert!(is_tree_child(&t) && is_galled(&t) && is_one_component(&t));
        prop_assert!(component_graph(&t).is_phylogenetic_tree());
    }
}
