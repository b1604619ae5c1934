//! Finite-size distances to the limit laws of `R_n` and `I_n`.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Discrete, Normal, Poisson};

use super::AnalysisError;
use crate::combin::ln_big;
use crate::engine::{self, DistSummary, EngineConfig};

/// Values of `i` carried exactly; `P(I ≥ 12)` under `Poisson(1/4)` is below `1e-20`.
pub const I_LEN: usize = 12;
/// Deficit values carried by the float band above the table cap.
pub const BAND_LEN: usize = 40;
/// Bin edges on the standardized `R_n` scale for the independence defect.
pub const R_BIN_EDGES: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

#[derive(Clone, Debug, Serialize)]
pub struct LimitLawReport {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    /// `|E(R_n) - (n - √n)|`.
    pub mean_gap: f64,
    /// `|Var(R_n)/(√n/2) - 1|`.
    pub variance_gap: f64,
    /// TV between standardized `R_n` (exact centering) and `N(0,1)`.
    pub tv_normal: f64,
    /// The same with centering `n - √n` and variance `√n/2`.
    pub tv_normal_nominal: f64,
    /// TV between `I_n` and `Poisson(1/4)`.
    pub tv_poisson: Option<f64>,
    /// `max |P(I=i, R∈B) - P(I=i)·P(R∈B)|` over `i` and standardized bins `B`.
    pub independence_defect: Option<f64>,
    /// Whether the law of `R_n` came from the exact table or the float band.
    pub exact_r: bool,
}

fn prob(c: &BigUint, total: &BigUint) -> f64 {
    if c.is_zero() {
        0.0
    } else {
        f64::from(ln_big(c) - ln_big(total)).exp()
    }
}

/// TV between a lattice law and `N(center, sd²)` binned to unit intervals
/// around the support points.
pub fn tv_normal(d: &DistSummary, center: f64, sd: f64) -> f64 {
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let mut diff = 0.0;
    let mut covered = 0.0;
    for (&k, &p) in d.support.iter().zip(&d.probs) {
        let hi = normal.cdf((k as f64 + 0.5 - center) / sd);
        let lo = normal.cdf((k as f64 - 0.5 - center) / sd);
        let q = hi - lo;
        covered += q;
        diff += (p - q).abs();
    }
    0.5 * (diff + d.tail + (1.0 - covered).max(0.0))
}

/// TV between the law `probs` on `0..probs.len()` (plus `tail` beyond) and
/// `Poisson(lambda)`.
pub fn tv_poisson(probs: &[f64], tail: f64, lambda: f64) -> f64 {
    let pois = Poisson::new(lambda).expect("positive rate");
    let mut diff = 0.0;
    let mut covered = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        let q = pois.pmf(i as u64);
        covered += q;
        diff += (p - q).abs();
    }
    0.5 * (diff + tail + (1.0 - covered).max(0.0))
}

/// Dependence between `I_n` and standardized `R_n`.
///
/// `joint[k][i]` holds `GTC_{n,k,i}` for `i < len`; the counts with
/// `i ≥ len` are recovered from `row[k] = GTC_{n,k}`.
pub fn independence_defect(joint: &[Vec<BigUint>], row: &[BigUint], mean: f64, sd: f64) -> f64 {
    let total: BigUint = row.iter().sum();
    let len = joint.iter().map(Vec::len).max().unwrap_or(0);
    let bins = R_BIN_EDGES.len() + 1;
    let bin_of = |k: usize| {
        let z = (k as f64 - mean) / sd;
        R_BIN_EDGES.iter().take_while(|&&e| z >= e).count()
    };
    // cells[b][i], with i = len collecting the rest
    let mut cells = vec![vec![BigUint::zero(); len + 1]; bins];
    for (k, r) in row.iter().enumerate() {
        let b = bin_of(k);
        let mut seen = BigUint::zero();
        for (i, c) in joint[k].iter().enumerate() {
            cells[b][i] += c;
            seen += c;
        }
        cells[b][len] += r - seen;
    }
    let p_bin: Vec<f64> = cells.iter().map(|c| prob(&c.iter().sum(), &total)).collect();
    let p_i: Vec<f64> = (0..=len)
        .map(|i| prob(&cells.iter().map(|c| &c[i]).sum(), &total))
        .collect();
    let mut worst: f64 = 0.0;
    for (b, c) in cells.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            worst = worst.max((prob(x, &total) - p_bin[b] * p_i[i]).abs());
        }
    }
    worst
}

/// Law of `R_n`: exact within the table cap, float band above it.
pub fn r_law(n: usize) -> Result<DistSummary, AnalysisError> {
    if n <= EngineConfig::default().bivariate_cap {
        Ok(engine::retic_distribution(n)?)
    } else {
        Ok(engine::retic_distribution_band(n, BAND_LEN)?)
    }
}

/// Quantities (a)–(e) at size `n`; (d) and (e) only when `with_i` is set.
pub fn limit_law_report(n: usize, with_i: bool) -> Result<LimitLawReport, AnalysisError> {
    let r = r_law(n)?;
    let (mean, variance) = (r.mean_f64(), r.variance_f64());
    let nf = n as f64;
    let (nominal_mean, nominal_var) = (nf - nf.sqrt(), nf.sqrt() / 2.0);
    let (tv_poisson_v, defect) = if with_i {
        let i = engine::i_distribution(n, I_LEN)?;
        let joint = engine::joint_law(n, I_LEN)?;
        let row = engine::cached_table(n)?.row(n).to_vec();
        (
            Some(tv_poisson(&i.probs, i.tail, 0.25)),
            Some(independence_defect(&joint, &row, mean, variance.sqrt())),
        )
    } else {
        (None, None)
    };
    Ok(LimitLawReport {
        n,
        mean,
        variance,
        mean_gap: (mean - nominal_mean).abs(),
        variance_gap: (variance / nominal_var - 1.0).abs(),
        tv_normal: tv_normal(&r, mean, variance.sqrt()),
        tv_normal_nominal: tv_normal(&r, nominal_mean, nominal_var.sqrt()),
        tv_poisson: tv_poisson_v,
        independence_defect: defect,
        exact_r: r.counts.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn size_three() {
        let r = engine::retic_distribution(3).unwrap();
        let var = BigRational::new((3 * 0 + 21 * 1 + 24 * 4).into(), 48.into()) - &r.mean * &r.mean;
        assert_eq!(r.variance, var);
        let rep = limit_law_report(3, true).unwrap();
        assert!((rep.mean - 23.0 / 16.0).abs() < 1e-15);
        assert!(rep.exact_r);
        assert!(rep.tv_normal > 0.0 && rep.tv_normal < 1.0);
    }

    #[test]
    fn point_masses() {
        // I_2 = 0 surely: TV to Poisson(1/4) is 1 - e^{-1/4}
        let tv = tv_poisson(&[1.0], 0.0, 0.25);
        assert!((tv - (1.0 - (-0.25f64).exp())).abs() < 1e-12);
        let pois = Poisson::new(0.25).unwrap();
        let law: Vec<f64> = (0..20).map(|i| pois.pmf(i)).collect();
        assert!(tv_poisson(&law, 0.0, 0.25).abs() < 1e-15);
        // an unresolved tail counts fully against the match
        let tv = tv_poisson(&law[..1], 1.0 - law[0], 0.25);
        assert!((tv - (1.0 - law[0])).abs() < 1e-15);
    }

    #[test]
    fn independent_product_has_no_defect() {
        let row: Vec<BigUint> = [4u32, 8, 4].iter().map(|&x| x.into()).collect();
        let joint: Vec<Vec<BigUint>> = [[3u32, 1], [6, 2], [3, 1]]
            .iter()
            .map(|r| r.iter().map(|&x| x.into()).collect())
            .collect();
        assert!(independence_defect(&joint, &row, 1.0, 0.7).abs() < 1e-15);
    }
}
