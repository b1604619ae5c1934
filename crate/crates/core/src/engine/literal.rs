//! The engine equation solved as written, by the generic fixed-point solver.
//!
//! ```text
//! G(z,u,v) = z + Σ_{c≥2} Σ_{k<c} L(c,k) · u^k (z + v(G - z))^k / k! · z^{c-k} / (c-k)!
//! ```
//!
//! This carries exact rationals in three variables and is only practical for
//! small orders; it is the reference the fast routes are checked against.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::EngineError;
use crate::combin::factorial;
use crate::onecomp::l_count;
use crate::series::{solve_fixed_point, FixedPointSpec, TruncSeries};

pub const LITERAL_MAX: usize = 12;

/// `GTC_{n,k,i}` indexed `[n][k][i]` for `n ≤ n_max`.
pub fn literal_trivariate(n_max: usize) -> Result<Vec<Vec<Vec<BigUint>>>, EngineError> {
    if n_max == 0 || n_max > LITERAL_MAX {
        return Err(EngineError::Cap {
            what: "literal engine equation",
            n: n_max,
            cap: LITERAL_MAX,
            advice: "use the modular engine",
        });
    }
    let markers = ["u", "v"];
    let mut spec = FixedPointSpec::new(n_max, &markers);
    let g = spec.unknown(1);
    let z = spec.known(TruncSeries::z(n_max, &markers)).map_err(EngineError::Series)?;
    let minus = BigRational::from_integer((-1).into());
    let g_minus_z = spec.lin(&[(BigRational::one(), g), (minus, z)]);
    let marked = spec.mark(g_minus_z, 1, 1);
    let h = spec.sum(&[z, marked]);
    let uh = spec.mark(h, 0, 1);
    let mut powers = vec![spec.constant(BigRational::one()), uh];
    for k in 2..n_max {
        let next = spec.product(&[powers[k - 1], uh]);
        powers.push(next);
    }
    let mut terms = vec![(BigRational::one(), z)];
    for c in 2..=n_max {
        for k in 0..c {
            let m = c - k;
            let coef = BigRational::new(
                l_count(c, k).into(),
                (factorial(k) * factorial(m)).into(),
            );
            let zm = {
                let mut s = TruncSeries::zero(n_max, &markers);
                s.add_term(m, &[0, 0], coef).map_err(EngineError::Series)?;
                spec.known(s).map_err(EngineError::Series)?
            };
            let t = spec.product(&[zm, powers[k]]);
            terms.push((BigRational::one(), t));
        }
    }
    let rhs = spec.lin(&terms);
    spec.set_rhs(rhs);
    let sol = solve_fixed_point(&spec).map_err(EngineError::Series)?;
    let mut out: Vec<Vec<Vec<BigUint>>> = (0..=n_max)
        .map(|n| (0..n).map(|k| vec![BigUint::zero(); k + 1]).collect())
        .collect();
    for (n, exps, c) in sol.monomials() {
        let (k, i) = (exps[0] as usize, exps[1] as usize);
        let v = c * BigRational::from_integer(factorial(n).into());
        if !v.is_integer() || v < BigRational::zero() {
            return Err(EngineError::NotIntegral { n, k });
        }
        out[n][k][i] = v.to_integer().to_biguint().expect("non-negative");
    }
    Ok(out)
}
