//! Maximal reticulated networks, `GTC_{n,n-1}`, by independent routes.
//!
//! Every component of a maximal network has exactly one plain leaf, so the
//! generating function solves `M = z·L'(M)` with `L'(ω) = Σ (2i-1)!! ω^i`.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use super::modular::{self, Marker};
use super::EngineError;
use crate::combin::factorial;
use crate::modp::primes_for_bound;
use crate::onecomp::series_lprime;
use crate::series::{lagrange_coeff, solve_fixed_point, FixedPointSpec, TruncSeries};

fn to_count(n: usize, c: &BigRational) -> Result<BigUint, EngineError> {
    let v = c * BigRational::from_integer(factorial(n).into());
    if !v.is_integer() {
        return Err(EngineError::NotIntegral { n, k: n.saturating_sub(1) });
    }
    v.to_integer().to_biguint().ok_or(EngineError::NotIntegral { n, k: n.saturating_sub(1) })
}

/// `n!·[z^n] M` for `n = 1..=n_max` from the fixed point `M = z·L'(M)`.
pub fn by_fixed_point(n_max: usize) -> Result<Vec<BigUint>, EngineError> {
    let mut spec = FixedPointSpec::new(n_max, &[]);
    let m = spec.unknown(1);
    let lp = series_lprime(n_max);
    let c = spec.compose(&lp, m).map_err(EngineError::Series)?;
    let rhs = spec.shift(c, 1);
    spec.set_rhs(rhs);
    let sol = solve_fixed_point(&spec).map_err(EngineError::Series)?;
    (1..=n_max).map(|n| to_count(n, &sol.coeff(n, &[]))).collect()
}

/// The same numbers by Lagrange inversion with `φ = L'`.
pub fn by_lagrange(n_max: usize) -> Result<Vec<BigUint>, EngineError> {
    lagrange_with(&series_lprime(n_max), n_max)
}

fn lagrange_with(phi: &TruncSeries, n_max: usize) -> Result<Vec<BigUint>, EngineError> {
    (1..=n_max)
        .map(|n| to_count(n, &lagrange_coeff(phi, n).map_err(EngineError::Series)?))
        .collect()
}

/// Deficit-zero column of the counting engine, reconstructed from residues.
pub fn by_engine(n_max: usize, totals: &[BigUint]) -> Vec<BigUint> {
    let bound = totals.iter().max().cloned().unwrap_or_default();
    let cols = modular::run(n_max, Marker::Deficit { len: 1 }, &primes_for_bound(&bound));
    (1..=n_max).map(|n| cols[n][0].clone()).collect()
}

/// `GTC_{n,n-1}` for `n ≤ n_max`; the fixed-point and Lagrange routes must agree.
pub fn max_ret_series(n_max: usize) -> Result<Vec<BigUint>, EngineError> {
    let fp = by_fixed_point(n_max)?;
    let lg = by_lagrange(n_max)?;
    if let Some(n) = (0..n_max).find(|&i| fp[i] != lg[i]) {
        return Err(EngineError::RouteDisagreement {
            what: "max_ret_series",
            n: n + 1,
            left: fp[n].to_string(),
            right: lg[n].to_string(),
        });
    }
    Ok(fp)
}

/// The equation as printed with `φ = 1 + L'`, kept as a diagnostic only.
#[derive(Clone, Debug, Serialize)]
pub struct ErratumReport {
    pub values: Vec<(usize, String)>,
    pub table: Vec<(usize, String)>,
    pub status: &'static str,
}

pub fn erratum_diagnostic() -> ErratumReport {
    let order = 3;
    let mut phi = series_lprime(order);
    phi.add_term(0, &[], BigRational::from_integer(1.into())).expect("univariate constant");
    let printed = lagrange_with(&phi, order).expect("valid inputs");
    let corrected = by_lagrange(order).expect("valid inputs");
    ErratumReport {
        values: printed.iter().enumerate().map(|(i, v)| (i + 1, v.to_string())).collect(),
        table: corrected.iter().enumerate().map(|(i, v)| (i + 1, v.to_string())).collect(),
        status: "documented-erratum",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values_and_erratum() {
        let want: Vec<BigUint> = [1u32, 2, 24, 600].iter().map(|&x| x.into()).collect();
        assert_eq!(max_ret_series(4).unwrap(), want);
        let e = erratum_diagnostic();
        assert_eq!(e.values[0], (1, "2".to_string()));
        assert_eq!(e.values[2], (3, "84".to_string()));
        assert_eq!(e.status, "documented-erratum");
    }
}
