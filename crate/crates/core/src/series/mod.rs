//! Exact truncated power series and functional-equation solving.
//!
//! A [`TruncSeries`] is a power series in `z` truncated at order `N`, whose
//! coefficients are polynomials in a fixed list of marker variables. Every
//! stored monomial satisfies the bound "each marker exponent is at most the
//! `z`-exponent", which mirrors the counting fact that a network of size `n`
//! has fewer than `n` reticulations.

mod accum;
mod poly;
mod solve;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use accum::{dot, RatAccumulator};
pub use poly::MarkerPoly;
pub use solve::{lagrange_coeff, solve_fixed_point, FixedPointSpec, NodeId};

/// Exact rational number in lowest terms with positive denominator.
pub type ExactRational = BigRational;

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> ExactRational {
    ExactRational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer-valued rational.
pub fn rat_int<T: Into<BigInt>>(n: T) -> ExactRational {
    ExactRational::from_integer(n.into())
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("marker sets differ: {left:?} vs {right:?}")]
    MarkerMismatch { left: Vec<String>, right: Vec<String> },
    #[error("monomial z^{z} with marker exponents {exps:?} violates the marker bound")]
    MarkerBound { z: usize, exps: Vec<u32> },
    #[error("exponent tuple has {got} markers, series has {want}")]
    Arity { got: usize, want: usize },
    #[error("fixed point is not contracting: {0}")]
    Contraction(String),
    #[error("declared valuation {declared} of the unknown is contradicted at z^{at}")]
    Valuation { declared: usize, at: usize },
    #[error("Lagrange inversion needs a nonzero constant term")]
    ZeroConstantTerm,
    #[error("series truncated at order {have}, order {need} is required")]
    OrderTooLow { have: usize, need: usize },
    #[error("composition needs an inner series with zero constant term")]
    CompositionValuation,
    #[error("{0}")]
    Invalid(String),
}

/// A truncated power series in `z` with marker-polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    order: usize,
    markers: Vec<String>,
    terms: Vec<MarkerPoly>,
}

/// One row of the JSON debug dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub exponents: Vec<u32>,
    pub numerator: String,
    pub denominator: String,
}

impl TruncSeries {
    /// The zero series of the given order and markers.
    pub fn zero(order: usize, markers: &[&str]) -> Self {
        let arity = markers.len();
        TruncSeries {
            order,
            markers: markers.iter().map(|s| s.to_string()).collect(),
            terms: (0..=order).map(|_| MarkerPoly::zero(arity)).collect(),
        }
    }

    /// A univariate series from its first coefficients; later ones are dropped.
    pub fn from_coeffs(order: usize, coeffs: &[ExactRational]) -> Self {
        let mut s = Self::zero(order, &[]);
        for (n, c) in coeffs.iter().enumerate().take(order + 1) {
            s.terms[n] = MarkerPoly::constant(0, c.clone());
        }
        s
    }

    /// The series `z` (or `0` at order 0).
    pub fn z(order: usize, markers: &[&str]) -> Self {
        let mut s = Self::zero(order, markers);
        if order >= 1 {
            s.terms[1] = MarkerPoly::constant(markers.len(), ExactRational::one());
        }
        s
    }

    /// The constant series `c`.
    pub fn constant(order: usize, markers: &[&str], c: ExactRational) -> Self {
        let mut s = Self::zero(order, markers);
        s.terms[0] = MarkerPoly::constant(markers.len(), c);
        s
    }

    /// Builder-style insertion of one monomial; enforces the marker bound.
    pub fn with_term(mut self, z: usize, exps: &[u32], c: ExactRational) -> Result<Self, SeriesError> {
        self.add_term(z, exps, c)?;
        Ok(self)
    }

    /// Add `c · z^z · Π marker^exp`; monomials beyond the order are dropped.
    pub fn add_term(&mut self, z: usize, exps: &[u32], c: ExactRational) -> Result<(), SeriesError> {
        if exps.len() != self.arity() {
            return Err(SeriesError::Arity {
                got: exps.len(),
                want: self.arity(),
            });
        }
        if exps.iter().any(|&e| e as usize > z) {
            return Err(SeriesError::MarkerBound {
                z,
                exps: exps.to_vec(),
            });
        }
        if z <= self.order {
            self.terms[z].add_term(exps, c);
        }
        Ok(())
    }

    pub(crate) fn from_parts(order: usize, markers: Vec<String>, terms: Vec<MarkerPoly>) -> Self {
        debug_assert_eq!(terms.len(), order + 1);
        TruncSeries { order, markers, terms }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn markers(&self) -> &[String] {
        &self.markers
    }

    pub fn arity(&self) -> usize {
        self.markers.len()
    }

    /// The marker polynomial multiplying `z^n` (zero beyond the order).
    pub fn z_coeff(&self, n: usize) -> MarkerPoly {
        self.terms
            .get(n)
            .cloned()
            .unwrap_or_else(|| MarkerPoly::zero(self.arity()))
    }

    pub(crate) fn z_coeff_ref(&self, n: usize) -> &MarkerPoly {
        &self.terms[n]
    }

    /// The coefficient of one monomial.
    pub fn coeff(&self, z: usize, exps: &[u32]) -> ExactRational {
        match self.terms.get(z) {
            Some(p) => p.coeff(exps),
            None => ExactRational::zero(),
        }
    }

    /// Univariate coefficient list `[z^0], …, [z^N]` (markers must be absent).
    pub fn univariate_coeffs(&self) -> Vec<ExactRational> {
        assert_eq!(self.arity(), 0, "series carries markers");
        (0..=self.order).map(|n| self.coeff(n, &[])).collect()
    }

    /// Smallest `z`-exponent carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.terms.iter().position(|p| !p.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    /// True iff every stored monomial respects the marker bound.
    pub fn marker_bound_holds(&self) -> bool {
        self.terms
            .iter()
            .enumerate()
            .all(|(z, p)| p.max_marker_exponent().is_none_or(|m| m as usize <= z))
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        TruncSeries {
            order,
            markers: self.markers.clone(),
            terms: self.terms[..=order].to_vec(),
        }
    }

    fn check_markers(&self, other: &TruncSeries) -> Result<(), SeriesError> {
        if self.markers != other.markers {
            return Err(SeriesError::MarkerMismatch {
                left: self.markers.clone(),
                right: other.markers.clone(),
            });
        }
        Ok(())
    }

    /// Coefficient-wise sum, truncated to the smaller order.
    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        self.check_markers(other)?;
        let order = self.order.min(other.order);
        let terms = (0..=order).map(|n| self.terms[n].add(&other.terms[n])).collect();
        Ok(TruncSeries::from_parts(order, self.markers.clone(), terms))
    }

    pub fn scale(&self, c: &ExactRational) -> TruncSeries {
        TruncSeries {
            order: self.order,
            markers: self.markers.clone(),
            terms: self.terms.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        self.add(&other.scale(&-ExactRational::one()))
    }

    /// Truncated Cauchy product, truncated to the smaller order.
    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        self.check_markers(other)?;
        let order = self.order.min(other.order);
        let arity = self.arity();
        let va = self.valuation();
        let vb = other.valuation();
        let terms = (0..=order)
            .map(|n| match (va, vb) {
                (Some(va), Some(vb)) if va + vb <= n => {
                    let pairs: Vec<_> = (va..=n - vb)
                        .map(|i| (&self.terms[i], &other.terms[n - i]))
                        .collect();
                    MarkerPoly::sum_of_products(&pairs, arity)
                }
                _ => MarkerPoly::zero(arity),
            })
            .collect();
        Ok(TruncSeries::from_parts(order, self.markers.clone(), terms))
    }

    /// Formal derivative in `z`; the order drops by one.
    pub fn derivative(&self) -> TruncSeries {
        let order = self.order.saturating_sub(1);
        let terms = (0..=order)
            .map(|n| match self.terms.get(n + 1) {
                Some(p) => p.scale(&rat_int(n as i64 + 1)),
                None => MarkerPoly::zero(self.arity()),
            })
            .collect();
        TruncSeries::from_parts(order, self.markers.clone(), terms)
    }

    /// Every nonzero monomial as `(z-exponent, marker exponents, coefficient)`.
    pub fn monomials(&self) -> Vec<(usize, Vec<u32>, ExactRational)> {
        let mut out = Vec::new();
        for (z, p) in self.terms.iter().enumerate() {
            for (e, c) in p.terms(self.arity()) {
                out.push((z, e, c));
            }
        }
        out
    }

    /// Debug dump: one `{exponents, numerator, denominator}` object per monomial.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<JsonTerm> = self
            .monomials()
            .into_iter()
            .map(|(z, e, c)| {
                let mut exponents = vec![z as u32];
                exponents.extend(e);
                JsonTerm {
                    exponents,
                    numerator: c.numer().to_string(),
                    denominator: c.denom().to_string(),
                }
            })
            .collect();
        serde_json::to_value(rows).expect("plain data serializes")
    }
}

/// `[a^0, a^1, …, a^kmax]`, each truncated to the order of `a`.
pub fn pow_table(a: &TruncSeries, kmax: usize) -> Vec<TruncSeries> {
    let markers: Vec<&str> = a.markers.iter().map(String::as_str).collect();
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(TruncSeries::constant(a.order, &markers, ExactRational::one()));
    for k in 1..=kmax {
        let next = out[k - 1].mul(a).expect("same markers");
        out.push(next);
    }
    out
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let monos = self.monomials();
        if monos.is_empty() {
            return write!(f, "0 + O(z^{})", self.order + 1);
        }
        for (i, (z, e, c)) in monos.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if *z > 0 {
                write!(f, "·z^{z}")?;
            }
            for (m, p) in self.markers.iter().zip(e) {
                if *p > 0 {
                    write!(f, "·{m}^{p}")?;
                }
            }
        }
        write!(f, " + O(z^{})", self.order + 1)
    }
}
