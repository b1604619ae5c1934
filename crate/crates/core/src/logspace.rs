//! Values carried as natural logarithms in double-double precision.

use std::fmt;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};
use twofloat::TwoFloat;

use crate::combin::ln_big;

/// A positive quantity stored as its natural logarithm.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogValue {
    pub ln: TwoFloat,
}

impl LogValue {
    pub fn from_ln(ln: TwoFloat) -> Self {
        LogValue { ln }
    }

    pub fn of_big(x: &BigUint) -> Self {
        LogValue { ln: ln_big(x) }
    }

    pub fn ln_f64(&self) -> f64 {
        self.ln.into()
    }

    /// The value itself when it is a finite, normal `f64`.
    pub fn value(&self) -> Option<f64> {
        let v = self.ln_f64().exp();
        (v.is_finite() && v > 0.0).then_some(v)
    }

    /// `self / other` as an ordinary float.
    pub fn ratio(&self, other: &LogValue) -> f64 {
        let d: f64 = (self.ln - other.ln).into();
        d.exp()
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({})", self.ln_f64())
    }
}

impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.ln_f64())
    }
}

pub(crate) fn tf_usize(n: usize) -> TwoFloat {
    TwoFloat::from(n as f64)
}

pub(crate) fn ln_pi() -> TwoFloat {
    crate::combin::ln_tf(twofloat::consts::PI)
}
