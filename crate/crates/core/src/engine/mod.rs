//! Counting galled tree-child networks by size, reticulations and
//! reticulations without a leaf child.
//!
//! Exact tables come from the modular engine (residues reconstructed by CRT);
//! the totals alone come from a plain big-integer recurrence. The literal
//! fixed-point solve of the engine equation and the component-tree sum are
//! kept as reference routes for small sizes.

pub mod band;
pub mod direct;
pub mod exact;
pub mod literal;
pub mod maxret;
pub mod modular;
pub mod trivariate;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

pub use direct::{component_tree_shapes, gtc_direct, ComponentTreeShape, DIRECT_MAX};
pub use exact::{OneCompTable, Totals};
pub use literal::{literal_trivariate, LITERAL_MAX};
pub use maxret::{erratum_diagnostic, max_ret_series, ErratumReport};
pub use modular::Marker;

use crate::combin::{ln_big, tree_count};
use crate::modp::primes_for_bound;
use crate::series::SeriesError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("{what}: n = {n} exceeds the cap {cap}; {advice}")]
    Cap {
        what: &'static str,
        n: usize,
        cap: usize,
        advice: &'static str,
    },
    #[error("series failure: {0}")]
    Series(SeriesError),
    #[error("coefficient at n = {n}, k = {k} is not a non-negative integer after scaling by n!")]
    NotIntegral { n: usize, k: usize },
    #[error("{what} disagrees at n = {n}: {left} vs {right}")]
    RouteDisagreement {
        what: &'static str,
        n: usize,
        left: String,
        right: String,
    },
    #[error("size must be at least 1")]
    Empty,
}

/// Size caps for the table builders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EngineConfig {
    /// Largest full `(n, k)` table.
    pub bivariate_cap: usize,
    /// Largest full `(n, k, i)` table.
    pub trivariate_cap: usize,
    /// Largest size for totals, moments and single columns.
    pub column_cap: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            bivariate_cap: 120,
            trivariate_cap: 120,
            column_cap: 600,
        }
    }
}

/// `GTC_{n,k}` for `n ≤ max_n`, optionally split by `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    max_n: usize,
    /// `cells[n][k]` for `k < n`; `cells[0]` is empty.
    cells: Vec<Vec<BigUint>>,
    tri: Option<Vec<Vec<Vec<BigUint>>>>,
}

#[derive(Serialize)]
struct JsonCell<'a> {
    n: usize,
    k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    i: Option<usize>,
    count: &'a str,
}

impl CountTable {
    pub fn from_cells(cells: Vec<Vec<BigUint>>, tri: Option<Vec<Vec<Vec<BigUint>>>>) -> Self {
        CountTable {
            max_n: cells.len().saturating_sub(1),
            cells,
            tri,
        }
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn has_i(&self) -> bool {
        self.tri.is_some()
    }

    /// `GTC_{n,k}`, zero outside `k < n`.
    pub fn get(&self, n: usize, k: usize) -> BigUint {
        self.cells.get(n).and_then(|r| r.get(k)).cloned().unwrap_or_default()
    }

    /// `GTC_{n,k,i}` when the table carries the `i` index.
    pub fn get_i(&self, n: usize, k: usize, i: usize) -> Option<BigUint> {
        let t = self.tri.as_ref()?;
        Some(t.get(n).and_then(|r| r.get(k)).and_then(|c| c.get(i)).cloned().unwrap_or_default())
    }

    pub fn row(&self, n: usize) -> &[BigUint] {
        &self.cells[n]
    }

    pub fn joint_row(&self, n: usize) -> Option<&[Vec<BigUint>]> {
        self.tri.as_ref().map(|t| t[n].as_slice())
    }

    pub fn total(&self, n: usize) -> BigUint {
        self.cells[n].iter().sum()
    }

    /// Row sums against `totals[n]`, then the `i`-marginal against the row.
    pub fn check(&self, totals: &[BigUint]) -> Result<(), EngineError> {
        for n in 1..=self.max_n {
            let s = self.total(n);
            if s != totals[n] {
                return Err(EngineError::RouteDisagreement {
                    what: "row sum",
                    n,
                    left: s.to_string(),
                    right: totals[n].to_string(),
                });
            }
            if let Some(t) = &self.tri {
                for k in 0..n {
                    let m: BigUint = t[n][k].iter().sum();
                    if m != self.cells[n][k] {
                        return Err(EngineError::RouteDisagreement {
                            what: "i-marginal",
                            n,
                            left: m.to_string(),
                            right: self.cells[n][k].to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// `n,k,count` (or `n,k,i,count` for a joint table).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.tri {
            None => {
                out.push_str("n,k,count\n");
                for n in 1..=self.max_n {
                    for (k, c) in self.cells[n].iter().enumerate() {
                        let _ = writeln!(out, "{n},{k},{c}");
                    }
                }
            }
            Some(t) => {
                out.push_str("n,k,i,count\n");
                for (n, row) in t.iter().enumerate().skip(1) {
                    for (k, cell) in row.iter().enumerate() {
                        for (i, c) in cell.iter().enumerate() {
                            let _ = writeln!(out, "{n},{k},{i},{c}");
                        }
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut strings = Vec::new();
        match &self.tri {
            None => {
                for n in 1..=self.max_n {
                    for (k, c) in self.cells[n].iter().enumerate() {
                        strings.push((n, k, None, c.to_string()));
                    }
                }
            }
            Some(t) => {
                for (n, row) in t.iter().enumerate().skip(1) {
                    for (k, cell) in row.iter().enumerate() {
                        for (i, c) in cell.iter().enumerate() {
                            strings.push((n, k, Some(i), c.to_string()));
                        }
                    }
                }
            }
        }
        let cells: Vec<JsonCell> = strings
            .iter()
            .map(|(n, k, i, c)| JsonCell {
                n: *n,
                k: *k,
                i: *i,
                count: c,
            })
            .collect();
        serde_json::json!({ "max_n": self.max_n, "cells": cells })
    }
}

type Slot<T> = Mutex<Option<Arc<T>>>;

fn slot<T>(cell: &'static OnceLock<Slot<T>>) -> &'static Slot<T> {
    cell.get_or_init(|| Mutex::new(None))
}

/// Shared [`Totals`] covering at least `n`.
pub fn totals(n: usize) -> Arc<Totals> {
    static CACHE: OnceLock<Slot<Totals>> = OnceLock::new();
    let mut guard = slot(&CACHE).lock().unwrap_or_else(|e| e.into_inner());
    if let Some(t) = guard.as_ref().filter(|t| t.n_max() >= n) {
        return t.clone();
    }
    let t = Arc::new(Totals::build(n.next_multiple_of(50).max(10)));
    *guard = Some(t.clone());
    t
}

fn check_size(what: &'static str, n: usize, cap: usize, advice: &'static str) -> Result<(), EngineError> {
    if n == 0 {
        return Err(EngineError::Empty);
    }
    if n > cap {
        return Err(EngineError::Cap { what, n, cap, advice });
    }
    Ok(())
}

/// `GTC_n`.
pub fn gtc_total(n: usize) -> Result<BigUint, EngineError> {
    check_size("gtc_total", n, EngineConfig::default().column_cap, "totals beyond this need a larger column_cap")?;
    Ok(totals(n).total(n).clone())
}

/// `GTC_1, …, GTC_n`, index 0 unused.
pub fn gtc_totals(n: usize) -> Result<Vec<BigUint>, EngineError> {
    check_size("gtc_totals", n, EngineConfig::default().column_cap, "totals beyond this need a larger column_cap")?;
    Ok(totals(n).totals()[..=n].to_vec())
}

fn primes_up_to_total(n: usize, extra_bits: u64) -> Vec<u64> {
    let t = totals(n);
    let bound = t.totals()[..=n].iter().max().cloned().unwrap_or_default() << extra_bits;
    primes_for_bound(&bound)
}

/// The `(n, k)` table, with the `i` split when `with_i_marker` is set.
pub fn gtc_table(n: usize, with_i_marker: bool) -> Result<CountTable, EngineError> {
    gtc_table_with(n, with_i_marker, &EngineConfig::default())
}

pub fn gtc_table_with(n: usize, with_i_marker: bool, cfg: &EngineConfig) -> Result<CountTable, EngineError> {
    if with_i_marker {
        check_size("trivariate table", n, cfg.trivariate_cap, "request the bivariate table instead")?;
    }
    check_size("bivariate table", n, cfg.bivariate_cap, "use gtc_total or the column routes for larger sizes")?;
    let primes = primes_up_to_total(n, 0);
    let cells: Vec<Vec<BigUint>> = modular::run(n, Marker::Reticulations { len: n }, &primes)
        .into_iter()
        .enumerate()
        .map(|(m, mut row)| {
            row.truncate(m);
            row
        })
        .collect();
    let tri = with_i_marker.then(|| trivariate::run(n, n, &primes));
    let table = CountTable::from_cells(cells, tri);
    table.check(totals(n).totals())?;
    Ok(table)
}

/// Shared bivariate table covering at least `n` (within the default cap).
pub fn cached_table(n: usize) -> Result<Arc<CountTable>, EngineError> {
    static CACHE: OnceLock<Slot<CountTable>> = OnceLock::new();
    let mut guard = slot(&CACHE).lock().unwrap_or_else(|e| e.into_inner());
    if let Some(t) = guard.as_ref().filter(|t| t.max_n() >= n) {
        return Ok(t.clone());
    }
    let t = Arc::new(gtc_table(n, false)?);
    *guard = Some(t.clone());
    Ok(t)
}

/// `GTC_{n,k}` for `k < len`, `n ≤ n_max`: `out[n][k]`.
pub fn low_k_columns(n_max: usize, len: usize) -> Result<Vec<Vec<BigUint>>, EngineError> {
    check_size("low_k_columns", n_max, EngineConfig::default().column_cap, "reduce n")?;
    Ok(modular::run(n_max, Marker::Reticulations { len }, &primes_up_to_total(n_max, 0)))
}

/// `GTC_{n,n-1-d}` for `d < len`: `out[n][d]`.
pub fn deficit_columns(n_max: usize, len: usize) -> Result<Vec<Vec<BigUint>>, EngineError> {
    check_size("deficit_columns", n_max, EngineConfig::default().column_cap, "reduce n")?;
    Ok(modular::run(n_max, Marker::Deficit { len }, &primes_up_to_total(n_max, 0)))
}

/// `(Σ_k k·GTC_{n,k}, Σ_k C(k,2)·GTC_{n,k})` for `n ≤ n_max`.
pub fn reticulation_moments(n_max: usize) -> Result<Vec<(BigUint, BigUint)>, EngineError> {
    check_size("reticulation_moments", n_max, EngineConfig::default().column_cap, "reduce n")?;
    let extra = 2 * (usize::BITS - n_max.leading_zeros()) as u64;
    let jet = modular::run(n_max, Marker::Jet, &primes_up_to_total(n_max, extra));
    Ok(jet
        .into_iter()
        .map(|c| {
            let at = |j: usize| c.get(j).cloned().unwrap_or_default();
            (at(1), at(2))
        })
        .collect())
}

/// Cached [`reticulation_moments`].
pub fn cached_moments(n_max: usize) -> Result<Arc<Vec<(BigUint, BigUint)>>, EngineError> {
    static CACHE: OnceLock<Slot<Vec<(BigUint, BigUint)>>> = OnceLock::new();
    let mut guard = slot(&CACHE).lock().unwrap_or_else(|e| e.into_inner());
    if let Some(t) = guard.as_ref().filter(|t| t.len() > n_max) {
        return Ok(t.clone());
    }
    let t = Arc::new(reticulation_moments(n_max)?);
    *guard = Some(t.clone());
    Ok(t)
}

/// Cached float deficit band, `ln(GTC_{n,n-1-d}/n!)` for `d < len`.
pub fn cached_band(n_max: usize, len: usize) -> Arc<Vec<Vec<f64>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<Vec<f64>>>>>> = OnceLock::new();
    let mut guard = CACHE.get_or_init(Default::default).lock().unwrap_or_else(|e| e.into_inner());
    if let Some(b) = guard.get(&len).filter(|b| b.len() > n_max) {
        return b.clone();
    }
    let b = Arc::new(band::deficit_band(n_max, len));
    guard.insert(len, b.clone());
    b
}

/// Agreement of the fixed-point, Lagrange and engine routes for `GTC_{n,n-1}`.
pub fn max_ret_checked(n_max: usize) -> Result<Vec<BigUint>, EngineError> {
    check_size("max_ret_checked", n_max, EngineConfig::default().column_cap, "reduce n")?;
    let series = max_ret_series(n_max)?;
    let engine = maxret::by_engine(n_max, &totals(n_max).totals()[..=n_max]);
    if let Some(i) = (0..n_max).find(|&i| series[i] != engine[i]) {
        return Err(EngineError::RouteDisagreement {
            what: "max_ret engine column",
            n: i + 1,
            left: series[i].to_string(),
            right: engine[i].to_string(),
        });
    }
    Ok(series)
}

/// A distribution on `0..` given by counts over a total, possibly only on part
/// of its support.
#[derive(Clone, Debug, Serialize)]
pub struct DistSummary {
    pub n: usize,
    /// Values carrying recorded mass, increasing.
    pub support: Vec<usize>,
    /// Exact counts aligned with `support`, when available.
    #[serde(skip)]
    pub counts: Option<Vec<BigUint>>,
    #[serde(skip)]
    pub total: BigUint,
    pub probs: Vec<f64>,
    /// Mass outside `support`; zero for an exact summary.
    pub tail: f64,
    #[serde(skip)]
    pub mean: BigRational,
    #[serde(skip)]
    pub variance: BigRational,
    /// `((k - mean)/sd, P(k))` over `support`.
    pub standardized: Vec<(f64, f64)>,
}

fn rat_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl DistSummary {
    fn finish(
        n: usize,
        support: Vec<usize>,
        counts: Option<Vec<BigUint>>,
        total: BigUint,
        probs: Vec<f64>,
        tail: f64,
        mean: BigRational,
        variance: BigRational,
    ) -> Self {
        let (m, sd) = (rat_f64(&mean), rat_f64(&variance).sqrt());
        let standardized = support
            .iter()
            .zip(&probs)
            .map(|(&k, &p)| (if sd > 0.0 { (k as f64 - m) / sd } else { 0.0 }, p))
            .collect();
        DistSummary {
            n,
            support,
            counts,
            total,
            probs,
            tail,
            mean,
            variance,
            standardized,
        }
    }

    /// Exact law from counts on `0..counts.len()`.
    pub fn from_counts(n: usize, counts: Vec<BigUint>) -> Self {
        let total: BigUint = counts.iter().sum();
        let t = BigInt::from(total.clone());
        let (mut s1, mut s2) = (BigInt::zero(), BigInt::zero());
        for (k, c) in counts.iter().enumerate() {
            let c = BigInt::from(c.clone());
            s1 += &c * k;
            s2 += &c * (k * k);
        }
        let mean = BigRational::new(s1, t.clone());
        let variance = BigRational::new(s2, t) - &mean * &mean;
        let lt = ln_big(&total);
        let probs = counts
            .iter()
            .map(|c| if c.is_zero() { 0.0 } else { f64::from(ln_big(c) - lt).exp() })
            .collect();
        let support = (0..counts.len()).collect();
        Self::finish(n, support, Some(counts), total, probs, 0.0, mean, variance)
    }

    pub fn mass(&self, k: usize) -> BigRational {
        let (Some(counts), Some(pos)) = (&self.counts, self.support.iter().position(|&s| s == k)) else {
            return BigRational::zero();
        };
        BigRational::new(counts[pos].clone().into(), self.total.clone().into())
    }

    pub fn mean_f64(&self) -> f64 {
        rat_f64(&self.mean)
    }

    pub fn variance_f64(&self) -> f64 {
        rat_f64(&self.variance)
    }
}

/// Law of `R_n` from the exact table.
pub fn retic_distribution(n: usize) -> Result<DistSummary, EngineError> {
    let t = cached_table(n)?;
    Ok(DistSummary::from_counts(n, t.row(n).to_vec()))
}

/// Law of `R_n` for sizes past the table cap: exact mean and variance,
/// float masses on the `len` largest values of `k`.
pub fn retic_distribution_band(n: usize, len: usize) -> Result<DistSummary, EngineError> {
    check_size("retic_distribution_band", n, EngineConfig::default().column_cap, "reduce n")?;
    let moments = cached_moments(n)?;
    let total = totals(n).total(n).clone();
    let (s1, s2) = &moments[n];
    let t = BigInt::from(total.clone());
    let mean = BigRational::new(BigInt::from(s1.clone()), t.clone());
    let second = BigRational::new(BigInt::from(s2.clone()) * 2, t);
    let variance = second + &mean - &mean * &mean;
    let band = cached_band(n, len);
    let ln_norm = f64::from(ln_big(&total) - ln_big(&crate::combin::factorial(n)));
    let len = len.min(n);
    let support: Vec<usize> = (0..len).rev().map(|d| n - 1 - d).collect();
    let probs: Vec<f64> = (0..len)
        .rev()
        .map(|d| {
            let l = band[n][d];
            if l.is_finite() {
                (l - ln_norm).exp()
            } else {
                0.0
            }
        })
        .collect();
    let tail = (1.0 - probs.iter().sum::<f64>()).max(0.0);
    Ok(DistSummary::finish(n, support, None, total, probs, tail, mean, variance))
}

/// Law of `I_n`, exact when `i_len ≥ n`; otherwise the values `i ≥ i_len`
/// are folded into `tail` and the moments cover the recorded values only.
pub fn i_distribution(n: usize, i_len: usize) -> Result<DistSummary, EngineError> {
    let joint = joint_law(n, i_len)?;
    let mut counts = vec![BigUint::zero(); i_len.min(n).max(1)];
    for row in &joint {
        for (i, c) in row.iter().enumerate() {
            counts[i] += c;
        }
    }
    if i_len >= n {
        return Ok(DistSummary::from_counts(n, counts));
    }
    let total = totals(n).total(n).clone();
    let rest = &total - counts.iter().sum::<BigUint>();
    let mut s = DistSummary::from_counts(n, counts);
    let lt = ln_big(&total);
    s.probs = s
        .counts
        .iter()
        .flatten()
        .map(|c| if c.is_zero() { 0.0 } else { f64::from(ln_big(c) - lt).exp() })
        .collect();
    s.tail = rat_f64(&BigRational::new(rest.into(), total.clone().into()));
    s.total = total;
    Ok(s)
}

/// `GTC_{n,k,i}` for `i < i_len` as `out[k][i]`.
pub fn joint_law(n: usize, i_len: usize) -> Result<Vec<Vec<BigUint>>, EngineError> {
    check_size("joint_law", n, EngineConfig::default().trivariate_cap, "use the bivariate table")?;
    let key = (n, i_len);
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Vec<Vec<BigUint>>>>>> = OnceLock::new();
    let mut guard = CACHE.get_or_init(Default::default).lock().unwrap_or_else(|e| e.into_inner());
    if let Some(j) = guard.get(&key) {
        return Ok(j.as_ref().clone());
    }
    let primes = primes_up_to_total(n, 0);
    let tri = trivariate::run(n, i_len.max(1), &primes);
    let row = tri.into_iter().nth(n).expect("row n");
    guard.insert(key, Arc::new(row.clone()));
    Ok(row)
}

/// `GTC_{n,0}` as the number of phylogenetic trees, for the invariant checks.
pub fn tree_column(n: usize) -> BigUint {
    tree_count(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn small_rows_and_exports() {
        let t = gtc_table(4, true).unwrap();
        assert_eq!(t.row(3), &[u(3), u(21), u(24)]);
        assert_eq!(t.get(4, 3), u(600));
        assert_eq!(t.get(4, 4), u(0));
        assert_eq!(t.get_i(3, 2, 1), Some(u(6)));
        let csv = t.to_csv();
        assert!(csv.starts_with("n,k,i,count\n1,0,0,1\n"));
        let bi = gtc_table(3, false).unwrap();
        assert_eq!(bi.to_csv(), "n,k,count\n1,0,1\n2,0,1\n2,1,2\n3,0,3\n3,1,21\n3,2,24\n");
        assert_eq!(bi.to_json()["cells"][5]["count"], "24");
    }

    #[test]
    fn caps_are_enforced() {
        let cfg = EngineConfig {
            trivariate_cap: 5,
            ..EngineConfig::default()
        };
        assert!(matches!(gtc_table_with(6, true, &cfg), Err(EngineError::Cap { .. })));
        assert!(gtc_table_with(6, false, &cfg).is_ok());
        assert_eq!(gtc_table(0, false), Err(EngineError::Empty));
    }

    #[test]
    fn distribution_at_three() {
        let d = retic_distribution(3).unwrap();
        assert_eq!(d.mean, BigRational::new(23.into(), 16.into()));
        assert_eq!(d.mass(1), BigRational::new(21.into(), 48.into()));
        let one = retic_distribution(1).unwrap();
        assert_eq!(one.mass(0), BigRational::from_integer(1.into()));
        let i2 = i_distribution(2, 5).unwrap();
        assert_eq!(i2.mass(0), BigRational::from_integer(1.into()));
    }

    #[test]
    fn band_matches_exact_law() {
        let exact = retic_distribution(30).unwrap();
        let band = retic_distribution_band(30, 30).unwrap();
        assert_eq!(band.mean, exact.mean);
        assert_eq!(band.variance, exact.variance);
        for (k, p) in band.support.iter().zip(&band.probs) {
            assert!((p - exact.probs[*k]).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn columns_agree_with_table() {
        let t = gtc_table(12, false).unwrap();
        let low = low_k_columns(12, 3).unwrap();
        let def = deficit_columns(12, 2).unwrap();
        for n in 1..=12 {
            for k in 0..3.min(n) {
                assert_eq!(low[n][k], t.get(n, k));
            }
            assert_eq!(def[n][0], t.get(n, n - 1));
            assert_eq!(t.get(n, 0), tree_column(n));
        }
        assert_eq!(max_ret_checked(12).unwrap()[11], t.get(12, 11));
    }
}
