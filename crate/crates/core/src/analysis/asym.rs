//! First-order asymptotic formulas, evaluated as logarithms.

use serde::Serialize;
use twofloat::TwoFloat;

use super::AnalysisError;
use crate::combin::{factorial, ln2, ln_big, ln_tf};
use crate::logspace::{ln_pi, tf_usize, LogValue};
use crate::onecomp::otc_total_asym;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymFormula {
    /// `GTC_n ~ (1/(2e^{1/4})) n^{-5/4} e^{2√n} (2/e²)^n n^{2n}`; also the
    /// asymptotics of both sandwich bounds.
    GtcTotal,
    /// `GTC_{n,n-1} ~ √(eπ) n^{-1/2} (2/e²)^n n^{2n}`.
    MaxRet,
    /// `GTC_{n,k} ~ (2^{k-1}√2/k!) (2/e)^n n^{n+2k-1}` for fixed `k`.
    FixedK,
    /// `OTC_n ~ (1/(2√e)) n^{-5/4} e^{2√n} (2/e²)^n n^{2n}`.
    OtcTotal,
    /// `GN_n ~ (√(2e·e^{1/4})/4) n^{-1} (8/e²)^n n^{2n}`, a reference curve.
    Galled,
}

impl AsymFormula {
    pub const ALL: [AsymFormula; 5] = [
        AsymFormula::GtcTotal,
        AsymFormula::MaxRet,
        AsymFormula::FixedK,
        AsymFormula::OtcTotal,
        AsymFormula::Galled,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AsymFormula::GtcTotal => "gtc_total",
            AsymFormula::MaxRet => "max_ret",
            AsymFormula::FixedK => "fixed_k",
            AsymFormula::OtcTotal => "otc_total",
            AsymFormula::Galled => "galled",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, AnalysisError> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| AnalysisError::UnknownFormula(name.to_string()))
    }
}

/// `2n·ln n + n·ln c`, the shared `c^n n^{2n}` factor.
fn power_part(n: TwoFloat, ln_c: TwoFloat, ln_n: TwoFloat) -> TwoFloat {
    n * ln_n * 2.0 + n * ln_c
}

/// Natural log of the formula's right-hand side at `n` (and `k` for `FixedK`).
pub fn asym_eval(formula: AsymFormula, n: usize, k: Option<usize>) -> Result<LogValue, AnalysisError> {
    if n == 0 {
        return Err(AnalysisError::BadArgument("n must be at least 1".into()));
    }
    let nn = tf_usize(n);
    let ln_n = ln_tf(nn);
    let two_over_e2 = ln2() - 2.0;
    let ln = match formula {
        AsymFormula::GtcTotal => -ln2() - 0.25 - ln_n * 1.25 + nn.sqrt() * 2.0 + power_part(nn, two_over_e2, ln_n),
        AsymFormula::MaxRet => (ln_pi() + 1.0) * 0.5 - ln_n * 0.5 + power_part(nn, two_over_e2, ln_n),
        AsymFormula::FixedK => {
            let k = k.ok_or(AnalysisError::MissingK)?;
            let kk = tf_usize(k);
            ln2() * (kk - 0.5) - ln_big(&factorial(k)) + nn * (ln2() - 1.0) + (nn + kk * 2.0 - 1.0) * ln_n
        }
        AsymFormula::OtcTotal => otc_total_asym(n).ln,
        AsymFormula::Galled => {
            // √(2e·e^{1/4})/4 = 2^{-3/2} e^{5/8}
            -ln2() * 1.5 + 0.625 - ln_n + power_part(nn, ln2() * 3.0 - 2.0, ln_n)
        }
    };
    Ok(LogValue::from_ln(ln))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_one() {
        let t = asym_eval(AsymFormula::GtcTotal, 1, None).unwrap();
        assert!((t.value().unwrap() - (-0.25f64).exp()).abs() < 1e-15);
        let m = asym_eval(AsymFormula::MaxRet, 1, None).unwrap();
        let want = (std::f64::consts::E * std::f64::consts::PI).sqrt() * 2.0 / std::f64::consts::E.powi(2);
        assert!((m.value().unwrap() - want).abs() < 1e-15);
        assert!((m.value().unwrap() - 0.79098).abs() < 1e-5);
        // k = 1 at n = 1: √2·(2/e)
        let f = asym_eval(AsymFormula::FixedK, 1, Some(1)).unwrap();
        assert!((f.value().unwrap() - 2f64.sqrt() * 2.0 / std::f64::consts::E).abs() < 1e-15);
        let g = asym_eval(AsymFormula::Galled, 1, None).unwrap();
        let want = (2.0 * std::f64::consts::E * 0.25f64.exp()).sqrt() / 4.0 * 8.0 / std::f64::consts::E.powi(2);
        assert!((g.value().unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn names_round_trip_and_errors() {
        for f in AsymFormula::ALL {
            assert_eq!(AsymFormula::from_name(f.name()).unwrap(), f);
        }
        assert!(matches!(AsymFormula::from_name("tc_total"), Err(AnalysisError::UnknownFormula(_))));
        assert!(matches!(asym_eval(AsymFormula::FixedK, 5, None), Err(AnalysisError::MissingK)));
    }

    #[test]
    fn no_overflow_at_a_million() {
        for f in AsymFormula::ALL {
            let v = asym_eval(f, 1_000_000, Some(2)).unwrap();
            assert!(v.ln_f64().is_finite());
        }
    }
}
