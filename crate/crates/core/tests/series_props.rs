use gtc::series::{lagrange_coeff, pow_table, rat, solve_fixed_point, ExactRational, FixedPointSpec, TruncSeries};
use num_traits::Zero;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = ExactRational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn univariate(order: usize) -> impl Strategy<Value = TruncSeries> {
    prop::collection::vec(coeff(), order + 1).prop_map(move |c| TruncSeries::from_coeffs(order, &c))
}

/// Series in z and one marker x with x-exponent ≤ z-exponent.
fn marked(order: usize) -> impl Strategy<Value = TruncSeries> {
    prop::collection::vec((0..=order, 0u32..=8, coeff()), 0..12).prop_map(move |terms| {
        let mut s = TruncSeries::zero(order, &["x"]);
        for (z, e, c) in terms {
            s.add_term(z, &[e.min(z as u32)], c).unwrap();
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mul_matches_naive_convolution(
        (x, y) in (0usize..=8).prop_flat_map(|order| (univariate(order), univariate(order)))
    ) {
        let order = x.order();
        let got = x.mul(&y).unwrap().univariate_coeffs();
        let (xc, yc) = (x.univariate_coeffs(), y.univariate_coeffs());
        for n in 0..=order {
            let mut want = ExactRational::zero();
            for i in 0..=n {
                want += &xc[i] * &yc[n - i];
            }
            prop_assert_eq!(&got[n], &want);
        }
    }

    #[test]
    fn marked_mul_matches_naive_and_keeps_the_bound(a in marked(6), b in marked(6)) {
        let p = a.mul(&b).unwrap();
        prop_assert!(p.marker_bound_holds());
        prop_assert!(a.add(&b).unwrap().marker_bound_holds());
        for n in 0..=6usize {
            for e in 0..=n as u32 {
                let mut want = ExactRational::zero();
                for i in 0..=n {
                    for f in 0..=e {
                        want += a.coeff(i, &[f]) * b.coeff(n - i, &[e - f]);
                    }
                }
                prop_assert_eq!(p.coeff(n, &[e]), want);
            }
        }
    }

    #[test]
    fn pow_table_matches_repeated_products(a in marked(5), k in 0usize..5) {
        let t = pow_table(&a, k);
        let mut p = TruncSeries::constant(5, &["x"], rat(1, 1));
        for (j, tj) in t.iter().enumerate() {
            prop_assert_eq!(tj, &p, "power {}", j);
            prop_assert!(tj.marker_bound_holds());
            p = p.mul(&a).unwrap();
        }
    }

    /// M = z·φ(M): zero residual, and every coefficient equals the Lagrange one.
    #[test]
    fn fixed_point_and_lagrange_agree(
        phi0 in (1i64..=5, 1i64..=3).prop_map(|(n, d)| rat(n, d)),
        rest in prop::collection::vec(coeff(), 7),
    ) {
        let order = 7;
        let mut c = vec![phi0];
        c.extend(rest);
        let phi = TruncSeries::from_coeffs(order, &c);
        let mut spec = FixedPointSpec::new(order, &[]);
        let m = spec.unknown(1);
        let composed = spec.compose(&phi, m).unwrap();
        let rhs = spec.shift(composed, 1);
        spec.set_rhs(rhs);
        let sol = solve_fixed_point(&spec).unwrap();
        prop_assert!(spec.evaluate(&sol).unwrap().sub(&sol).unwrap().is_zero());
        let coeffs = sol.univariate_coeffs();
        for n in 1..=order {
            prop_assert_eq!(&lagrange_coeff(&phi, n).unwrap(), &coeffs[n]);
        }
    }
}
