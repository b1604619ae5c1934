//! Upper and lower bounds sandwiching `GTC_n`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{convergence, AnalysisError, ConvergenceReport};
use crate::combin::{factorial, ln_ratio};
use crate::engine::{gtc_totals, OneCompTable};
use crate::onecomp::series_a;
use crate::series::{solve_fixed_point, FixedPointSpec, TruncSeries};

/// `U_1, …, U_n` (index 0 unused) from `U = z + U·A(U)`.
///
/// `U_n` decompresses every phylogenetic tree with arbitrary one-component
/// networks; `GTC_n ≤ U_n`.
pub fn u_sequence(n_max: usize) -> Result<Vec<BigUint>, AnalysisError> {
    if n_max == 0 {
        return Err(AnalysisError::BadArgument("n must be at least 1".into()));
    }
    let mut spec = FixedPointSpec::new(n_max, &[]);
    let u = spec.unknown(1);
    let z = spec.known(TruncSeries::z(n_max, &[]))?;
    // A has valuation 1, so U·A(U) only needs A through order n_max - 1
    let a = series_a(n_max);
    let au = spec.compose(&a, u)?;
    let prod = spec.product(&[u, au]);
    let rhs = spec.sum(&[z, prod]);
    spec.set_rhs(rhs);
    let sol = solve_fixed_point(&spec)?;
    let mut out = vec![BigUint::zero()];
    for n in 1..=n_max {
        let v = sol.coeff(n, &[]) * BigRational::from_integer(factorial(n).into());
        if !v.is_integer() {
            return Err(AnalysisError::NotIntegral { n });
        }
        out.push(v.to_integer().to_biguint().ok_or(AnalysisError::NotIntegral { n })?);
    }
    Ok(out)
}

/// `L_1, …, L_n` (index 0 unused): the component-tree sum restricted to a
/// root with `j` cherries and `n - 2j` leaves,
///
/// ```text
/// L_n = Σ_j C(n, 2j)·(2j)!/(j!·2^j) · Σ_ℓ C(n-2j, ℓ)·L(n-j, j+ℓ)
/// ```
///
/// with `L(c, k) = 0` for `k ≥ c`.
pub fn l_lower_sequence(n_max: usize) -> Result<Vec<BigUint>, AnalysisError> {
    if n_max == 0 {
        return Err(AnalysisError::BadArgument("n must be at least 1".into()));
    }
    let l = OneCompTable::new(n_max);
    let mut pascal: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for r in 1..=n_max {
        let prev = &pascal[r - 1];
        let row = (0..=r)
            .map(|i| {
                let a = if i > 0 { prev[i - 1].clone() } else { BigUint::zero() };
                let b = prev.get(i).cloned().unwrap_or_default();
                a + b
            })
            .collect();
        pascal.push(row);
    }
    // matchings[j] = (2j)!/(j!·2^j)
    let mut matchings = vec![BigUint::one()];
    for j in 1..=n_max / 2 {
        let next = &matchings[j - 1] * (2 * j - 1);
        matchings.push(next);
    }
    let mut out = vec![BigUint::zero()];
    for n in 1..=n_max {
        let mut total = BigUint::zero();
        for j in 0..=n / 2 {
            let c = n - j;
            let mut inner = BigUint::zero();
            for ell in 0..=(n - 2 * j) {
                if j + ell >= c {
                    break;
                }
                inner += &pascal[n - 2 * j][ell] * l.get(c, j + ell);
            }
            total += inner * &pascal[n][2 * j] * &matchings[j];
        }
        out.push(total);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichRow {
    pub n: usize,
    pub lower: String,
    pub gtc: String,
    pub upper: String,
    /// `U_n / GTC_n`.
    pub upper_ratio: f64,
    /// `GTC_n / L_n`.
    pub lower_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    pub rows: Vec<SandwichRow>,
    /// `U_n` and `L_n` against the shared first-order asymptotics.
    pub upper: ConvergenceReport,
    pub lower: ConvergenceReport,
}

impl SandwichReport {
    pub fn row(&self, n: usize) -> Option<&SandwichRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

/// Checks `L_n ≤ GTC_n ≤ U_n` for every `n ≤ n_max`.
pub fn sandwich_check(n_max: usize) -> Result<SandwichReport, AnalysisError> {
    let g = gtc_totals(n_max)?;
    let u = u_sequence(n_max)?;
    let l = l_lower_sequence(n_max)?;
    sandwich_from(&l, &g, &u)
}

/// The sandwich check on precomputed sequences (index 0 unused).
pub fn sandwich_from(l: &[BigUint], g: &[BigUint], u: &[BigUint]) -> Result<SandwichReport, AnalysisError> {
    let n_max = g.len() - 1;
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        if !(l[n] <= g[n] && g[n] <= u[n]) {
            return Err(AnalysisError::Sandwich {
                n,
                lower: l[n].to_string(),
                gtc: g[n].to_string(),
                upper: u[n].to_string(),
            });
        }
        rows.push(SandwichRow {
            n,
            lower: l[n].to_string(),
            gtc: g[n].to_string(),
            upper: u[n].to_string(),
            upper_ratio: f64::from(ln_ratio(&u[n], &g[n])).exp(),
            lower_ratio: f64::from(ln_ratio(&g[n], &l[n])).exp(),
        });
    }
    let ns: Vec<usize> = (1..=n_max).collect();
    let upper = convergence("upper_bound", &ns, |n| Ok(u[n].clone()), super::AsymFormula::GtcTotal, None)?;
    let lower = convergence("lower_bound", &ns, |n| Ok(l[n].clone()), super::AsymFormula::GtcTotal, None)?;
    Ok(SandwichReport { rows, upper, lower })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(xs: &[u64]) -> Vec<BigUint> {
        std::iter::once(0).chain(xs.iter().copied()).map(BigUint::from).collect()
    }

    #[test]
    fn first_values() {
        assert_eq!(u_sequence(3).unwrap(), n(&[1, 3, 66]));
        assert_eq!(l_lower_sequence(3).unwrap(), n(&[1, 3, 42]));
        let r = sandwich_check(6).unwrap();
        let three = r.row(3).unwrap();
        assert_eq!((three.lower.as_str(), three.gtc.as_str(), three.upper.as_str()), ("42", "48", "66"));
        let one = r.row(1).unwrap();
        assert_eq!((one.lower.as_str(), one.gtc.as_str(), one.upper.as_str()), ("1", "1", "1"));
        assert_eq!(r.row(2).unwrap().upper, "3");
    }

    #[test]
    fn violation_names_the_size() {
        let err = sandwich_from(&n(&[1, 4]), &n(&[1, 3]), &n(&[1, 3])).unwrap_err();
        assert!(matches!(err, AnalysisError::Sandwich { n: 2, .. }));
    }
}
