use gtc::combin::tree_count;
use gtc::engine::{
    cached_table, gtc_direct, gtc_table, gtc_total, i_distribution, max_ret_series, retic_distribution, tree_column,
    EngineError,
};
use gtc::verify::SMALL_TOTALS;
use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

#[test]
fn small_totals_and_rows() {
    for (n, &want) in SMALL_TOTALS.iter().enumerate() {
        assert_eq!(gtc_total(n + 1).unwrap(), big(want));
    }
    let t = gtc_table(10, false).unwrap();
    for n in 1..=10 {
        assert_eq!(t.total(n), big(SMALL_TOTALS[n - 1]));
    }
    assert_eq!(t.row(3), &[big(3), big(21), big(24)]);
    assert_eq!(t.row(4), &[big(15), big(228), big(768), big(600)]);
    assert!(matches!(gtc_total(0), Err(EngineError::Empty)));
}

#[test]
fn direct_formula_matches_table() {
    let t = gtc_table(7, false).unwrap();
    for n in 1..=7 {
        assert_eq!(gtc_direct(n).unwrap(), t.row(n), "n = {n}");
    }
}

#[test]
fn trivariate_marginal_is_bivariate() {
    let tri = gtc_table(30, true).unwrap();
    let bi = gtc_table(30, false).unwrap();
    for n in 1..=30 {
        for k in 0..n {
            let s: BigUint = (0..=k).filter_map(|i| tri.get_i(n, k, i)).sum();
            assert_eq!(s, bi.get(n, k), "n = {n}, k = {k}");
        }
    }
    // size three: (k, i) = (1, 1) three times, (2, 1) six times
    assert_eq!(tri.get_i(3, 1, 1), Some(big(3)));
    assert_eq!(tri.get_i(3, 2, 1), Some(big(6)));
}

#[test]
fn max_reticulated_column() {
    let m = max_ret_series(120).unwrap();
    assert_eq!(&m[..4], &[big(1), big(2), big(24), big(600)]);
    let t = cached_table(120).unwrap();
    for n in 1..=120 {
        assert_eq!(t.get(n, n - 1), m[n - 1], "n = {n}");
    }
}

#[test]
fn distributions_at_small_sizes() {
    let d = retic_distribution(3).unwrap();
    assert_eq!(d.total, big(48));
    assert_eq!(d.mass(2), BigRational::new(24.into(), 48.into()));
    let i = i_distribution(3, 4).unwrap();
    assert!((i.probs[1] - 9.0 / 48.0).abs() < 1e-15);
    assert!((i.probs[0] - 39.0 / 48.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tree_column_and_row_sums(n in 1usize..=120) {
        let t = cached_table(120).unwrap();
        prop_assert_eq!(t.get(n, 0), tree_count(n));
        prop_assert_eq!(tree_column(n), tree_count(n));
        prop_assert_eq!(t.total(n), gtc_total(n).unwrap());
    }
}
