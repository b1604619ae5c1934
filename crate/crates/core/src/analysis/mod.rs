//! Bounds, asymptotic evaluators and limit-law diagnostics.

pub mod asym;
pub mod bounds;
pub mod limits;

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::Serialize;

pub use asym::{asym_eval, AsymFormula};
pub use bounds::{l_lower_sequence, sandwich_check, sandwich_from, u_sequence, SandwichReport, SandwichRow};
pub use limits::{independence_defect, limit_law_report, tv_normal, tv_poisson, LimitLawReport};

use crate::combin::ln_big;
use crate::engine::EngineError;
use crate::series::SeriesError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("unknown formula {0:?}")]
    UnknownFormula(String),
    #[error("the fixed-k formula needs k")]
    MissingK,
    #[error("{0}")]
    BadArgument(String),
    #[error("sandwich violated at n = {n}: {lower} ≤ {gtc} ≤ {upper} fails")]
    Sandwich {
        n: usize,
        lower: String,
        gtc: String,
        upper: String,
    },
    #[error("coefficient at n = {n} is not an integer after scaling by n!")]
    NotIntegral { n: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub exact_log: f64,
    pub asym_log: f64,
    /// `exact / asym`.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub sequence: String,
    pub formula: AsymFormula,
    pub rows: Vec<ConvergenceRow>,
    /// `|ratio - 1|` never increases along the rows.
    pub non_increasing: bool,
    /// `|ratio - 1|` decreases at every step.
    pub strictly_decreasing: bool,
}

impl ConvergenceReport {
    pub fn distances(&self) -> Vec<f64> {
        self.rows.iter().map(|r| (r.ratio - 1.0).abs()).collect()
    }

    pub fn last_distance(&self) -> Option<f64> {
        self.rows.last().map(|r| (r.ratio - 1.0).abs())
    }

    /// `n,exact_log,asym_log,ratio`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,exact_log,asym_log,ratio\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{}", r.n, r.exact_log, r.asym_log, r.ratio);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
}

pub fn non_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] <= w[0])
}

pub fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

/// Compares `exact(n)` with `formula` over `ns`.
pub fn convergence<F>(
    sequence: &str,
    ns: &[usize],
    mut exact: F,
    formula: AsymFormula,
    k: Option<usize>,
) -> Result<ConvergenceReport, AnalysisError>
where
    F: FnMut(usize) -> Result<BigUint, AnalysisError>,
{
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let e = ln_big(&exact(n)?);
        let a = asym_eval(formula, n, k)?.ln;
        rows.push(ConvergenceRow {
            n,
            exact_log: e.into(),
            asym_log: a.into(),
            ratio: f64::from(e - a).exp(),
        });
    }
    let d: Vec<f64> = rows.iter().map(|r| (r.ratio - 1.0).abs()).collect();
    Ok(ConvergenceReport {
        sequence: sequence.to_string(),
        formula,
        non_increasing: non_increasing(&d),
        strictly_decreasing: strictly_decreasing(&d),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trend_flags_and_csv() {
        assert!(non_increasing(&[3.0, 2.0, 2.0]));
        assert!(!strictly_decreasing(&[3.0, 2.0, 2.0]));
        assert!(strictly_decreasing(&[3.0, 2.0, 1.0]));
        let r = convergence("trees", &[1, 2], |n| Ok(crate::combin::tree_count(n)), AsymFormula::FixedK, Some(0)).unwrap();
        assert!(r.to_csv().starts_with("n,exact_log,asym_log,ratio\n1,"));
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.to_json()["sequence"], "trees");
    }
}
