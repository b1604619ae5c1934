use gtc::analysis::{asym_eval, l_lower_sequence, limit_law_report, sandwich_check, u_sequence, AsymFormula};
use gtc::engine::gtc_totals;
use proptest::prelude::*;

#[test]
fn upper_bound_is_exact_up_to_two_and_strict_at_three() {
    let u = u_sequence(10).unwrap();
    let g = gtc_totals(10).unwrap();
    assert_eq!(&u[1..3], &g[1..3]);
    assert!(u[3] > g[3]);
    let l = l_lower_sequence(10).unwrap();
    assert_eq!((l[3].to_string(), g[3].to_string(), u[3].to_string()), ("42".into(), "48".into(), "66".into()));
}

#[test]
fn sandwich_holds_to_one_hundred() {
    let r = sandwich_check(100).unwrap();
    assert_eq!(r.rows.len(), 100);
    assert!(r.rows.iter().all(|row| row.upper_ratio >= 1.0 && row.lower_ratio >= 1.0));
    // U_n approaches GTC_n from above
    assert!(r.row(100).unwrap().upper_ratio < r.row(50).unwrap().upper_ratio);
}

#[test]
fn limit_law_quantities_on_a_doubling_ladder() {
    let reports: Vec<_> = [30, 60, 120].iter().map(|&n| limit_law_report(n, true).unwrap()).collect();
    let col = |f: &dyn Fn(&gtc::analysis::LimitLawReport) -> f64| reports.iter().map(f).collect::<Vec<_>>();
    let down = |xs: Vec<f64>| xs.windows(2).all(|w| w[1] <= w[0]);
    assert!(down(col(&|r| r.mean_gap)));
    assert!(down(col(&|r| r.variance_gap)));
    assert!(down(col(&|r| r.tv_normal)));
    assert!(down(col(&|r| r.independence_defect.unwrap())));
    // the distance to Poisson(1/4) grows along the ladder
    let tv = col(&|r| r.tv_poisson.unwrap());
    assert!(tv.windows(2).all(|w| w[1] > w[0]), "{tv:?}");
}

proptest! {
    #[test]
    fn evaluators_are_finite(n in 1usize..2_000_000, k in 1usize..4) {
        for f in AsymFormula::ALL {
            let v = asym_eval(f, n, Some(k)).unwrap();
            prop_assert!(f64::from(v.ln).is_finite());
        }
    }

    #[test]
    fn total_formula_grows_between_consecutive_sizes(n in 1usize..100_000) {
        let a = f64::from(asym_eval(AsymFormula::GtcTotal, n, None).unwrap().ln);
        let b = f64::from(asym_eval(AsymFormula::GtcTotal, n + 1, None).unwrap().ln);
        prop_assert!(b > a);
    }
}
