//! Polynomials in the marker variables, used as the coefficient of one power of `z`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::accum::RatAccumulator;
use super::ExactRational;

/// A polynomial in `arity` marker variables with exact rational coefficients.
///
/// With at most one marker the coefficients are stored densely by exponent;
/// with two or more they live in a sparse map keyed by the exponent tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MarkerPoly {
    Dense(Vec<ExactRational>),
    Sparse(BTreeMap<Vec<u32>, ExactRational>),
}

impl MarkerPoly {
    pub fn zero(arity: usize) -> Self {
        if arity <= 1 {
            MarkerPoly::Dense(Vec::new())
        } else {
            MarkerPoly::Sparse(BTreeMap::new())
        }
    }

    pub fn monomial(arity: usize, exps: &[u32], c: ExactRational) -> Self {
        assert_eq!(exps.len(), arity, "exponent tuple length must equal marker count");
        let mut p = Self::zero(arity);
        p.add_term(exps, c);
        p
    }

    pub fn constant(arity: usize, c: ExactRational) -> Self {
        Self::monomial(arity, &vec![0; arity], c)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            MarkerPoly::Dense(v) => v.iter().all(Zero::is_zero),
            MarkerPoly::Sparse(m) => m.is_empty(),
        }
    }

    fn normalize(&mut self) {
        match self {
            MarkerPoly::Dense(v) => {
                while v.last().is_some_and(Zero::is_zero) {
                    v.pop();
                }
            }
            MarkerPoly::Sparse(m) => m.retain(|_, c| !c.is_zero()),
        }
    }

    pub fn add_term(&mut self, exps: &[u32], c: ExactRational) {
        if c.is_zero() {
            return;
        }
        match self {
            MarkerPoly::Dense(v) => {
                let i = exps.first().copied().unwrap_or(0) as usize;
                if v.len() <= i {
                    v.resize(i + 1, ExactRational::zero());
                }
                v[i] += c;
            }
            MarkerPoly::Sparse(m) => {
                *m.entry(exps.to_vec()).or_insert_with(ExactRational::zero) += c;
            }
        }
        self.normalize();
    }

    /// All nonzero terms as `(exponents, coefficient)`.
    pub fn terms(&self, arity: usize) -> Vec<(Vec<u32>, ExactRational)> {
        match self {
            MarkerPoly::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| {
                    let e = if arity == 0 { vec![] } else { vec![i as u32] };
                    (e, c.clone())
                })
                .collect(),
            MarkerPoly::Sparse(m) => m.iter().map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> ExactRational {
        match self {
            MarkerPoly::Dense(v) => {
                let i = exps.first().copied().unwrap_or(0) as usize;
                if exps.len() > 1 && exps[1..].iter().any(|&e| e != 0) {
                    return ExactRational::zero();
                }
                v.get(i).cloned().unwrap_or_else(ExactRational::zero)
            }
            MarkerPoly::Sparse(m) => m.get(exps).cloned().unwrap_or_else(ExactRational::zero),
        }
    }

    /// Largest exponent of any single marker, or `None` for the zero polynomial.
    pub fn max_marker_exponent(&self) -> Option<u32> {
        match self {
            MarkerPoly::Dense(v) => {
                if v.is_empty() {
                    None
                } else {
                    Some((v.len() - 1) as u32)
                }
            }
            MarkerPoly::Sparse(m) => m.keys().map(|e| e.iter().copied().max().unwrap_or(0)).max(),
        }
    }

    pub fn add(&self, other: &MarkerPoly) -> MarkerPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &MarkerPoly) {
        match (&mut *self, other) {
            (MarkerPoly::Dense(a), MarkerPoly::Dense(b)) => {
                if a.len() < b.len() {
                    a.resize(b.len(), ExactRational::zero());
                }
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
            }
            (MarkerPoly::Sparse(a), MarkerPoly::Sparse(b)) => {
                for (e, c) in b {
                    *a.entry(e.clone()).or_insert_with(ExactRational::zero) += c;
                }
            }
            _ => panic!("marker polynomials of different arity"),
        }
        self.normalize();
    }

    pub fn scale(&self, c: &ExactRational) -> MarkerPoly {
        let mut out = self.clone();
        match &mut out {
            MarkerPoly::Dense(v) => v.iter_mut().for_each(|x| *x *= c),
            MarkerPoly::Sparse(m) => m.values_mut().for_each(|x| *x *= c),
        }
        out.normalize();
        out
    }

    /// Multiply by `marker^power`.
    pub fn mark(&self, marker: usize, power: u32) -> MarkerPoly {
        match self {
            MarkerPoly::Dense(v) => {
                assert_eq!(marker, 0, "dense marker polynomial has one marker");
                if v.is_empty() {
                    return self.clone();
                }
                let mut w = vec![ExactRational::zero(); power as usize];
                w.extend(v.iter().cloned());
                MarkerPoly::Dense(w)
            }
            MarkerPoly::Sparse(m) => MarkerPoly::Sparse(
                m.iter()
                    .map(|(e, c)| {
                        let mut e = e.clone();
                        e[marker] += power;
                        (e, c.clone())
                    })
                    .collect(),
            ),
        }
    }

    /// Exact `Σ a_i · b_i` over marker polynomials, reducing each output
    /// coefficient once.
    pub fn sum_of_products(pairs: &[(&MarkerPoly, &MarkerPoly)], arity: usize) -> MarkerPoly {
        if arity <= 1 {
            let mut accs: Vec<RatAccumulator> = Vec::new();
            for (a, b) in pairs {
                let (MarkerPoly::Dense(a), MarkerPoly::Dense(b)) = (a, b) else {
                    panic!("marker polynomials of different arity");
                };
                if a.is_empty() || b.is_empty() {
                    continue;
                }
                let need = a.len() + b.len() - 1;
                if accs.len() < need {
                    accs.resize_with(need, RatAccumulator::new);
                }
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        accs[i + j].add_product(x, y);
                    }
                }
            }
            let mut out = MarkerPoly::Dense(accs.into_iter().map(RatAccumulator::finish).collect());
            out.normalize();
            out
        } else {
            let mut accs: BTreeMap<Vec<u32>, RatAccumulator> = BTreeMap::new();
            for (a, b) in pairs {
                let (MarkerPoly::Sparse(a), MarkerPoly::Sparse(b)) = (a, b) else {
                    panic!("marker polynomials of different arity");
                };
                for (ea, ca) in a {
                    for (eb, cb) in b {
                        let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                        accs.entry(e).or_default().add_product(ca, cb);
                    }
                }
            }
            let mut out = MarkerPoly::Sparse(
                accs.into_iter()
                    .map(|(e, acc)| (e, acc.finish()))
                    .collect(),
            );
            out.normalize();
            out
        }
    }

    /// Exact `Σ c_i · p_i`.
    pub fn linear_combination(terms: &[(&ExactRational, &MarkerPoly)], arity: usize) -> MarkerPoly {
        if arity <= 1 {
            let mut accs: Vec<RatAccumulator> = Vec::new();
            for (c, p) in terms {
                let MarkerPoly::Dense(v) = p else {
                    panic!("marker polynomials of different arity");
                };
                if accs.len() < v.len() {
                    accs.resize_with(v.len(), RatAccumulator::new);
                }
                for (i, x) in v.iter().enumerate() {
                    accs[i].add_product(c, x);
                }
            }
            let mut out = MarkerPoly::Dense(accs.into_iter().map(RatAccumulator::finish).collect());
            out.normalize();
            out
        } else {
            let mut accs: BTreeMap<Vec<u32>, RatAccumulator> = BTreeMap::new();
            for (c, p) in terms {
                let MarkerPoly::Sparse(m) = p else {
                    panic!("marker polynomials of different arity");
                };
                for (e, x) in m {
                    accs.entry(e.clone()).or_default().add_product(c, x);
                }
            }
            let mut out = MarkerPoly::Sparse(
                accs.into_iter()
                    .map(|(e, acc)| (e, acc.finish()))
                    .collect(),
            );
            out.normalize();
            out
        }
    }
}
