//! Exact factorials, binomials and related integer helpers.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use twofloat::TwoFloat;

/// Cached table of `0!, 1!, …, n!`.
#[derive(Clone, Debug)]
pub struct Factorials {
    f: Vec<BigUint>,
}

impl Factorials {
    pub fn new(n: usize) -> Self {
        let mut f = Vec::with_capacity(n + 1);
        f.push(BigUint::one());
        for i in 1..=n {
            let next = &f[i - 1] * i;
            f.push(next);
        }
        Factorials { f }
    }

    pub fn max(&self) -> usize {
        self.f.len() - 1
    }

    pub fn get(&self, n: usize) -> &BigUint {
        &self.f[n]
    }

    pub fn binom(&self, n: usize, k: usize) -> BigUint {
        if k > n {
            return BigUint::zero();
        }
        &self.f[n] / (&self.f[k] * &self.f[n - k])
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `C(n, k)`, zero when `k > n`.
pub fn binom(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut r = BigUint::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// `(2m - 1)!! = 1·3·5···(2m - 1)`, with `(-1)!! = 1`.
pub fn odd_double_factorial(m: usize) -> BigUint {
    (1..=m).fold(BigUint::one(), |acc, i| acc * (2 * i - 1))
}

/// Number of rooted binary phylogenetic trees on `n ≥ 1` labeled leaves, `(2n - 3)!!`.
pub fn tree_count(n: usize) -> BigUint {
    assert!(n >= 1);
    odd_double_factorial(n - 1)
}

/// Natural logarithm of a positive big integer in double-double precision.
pub fn ln_big(x: &BigUint) -> TwoFloat {
    assert!(!x.is_zero(), "logarithm of zero");
    let bits = x.bits();
    if bits <= 100 {
        return ln_tf(big_to_tf(x));
    }
    let shift = bits - 100;
    let top = x >> shift;
    ln_tf(big_to_tf(&top)) + TwoFloat::from(shift as f64) * ln2()
}

/// A big integer with at most ~106 significant bits as a double-double.
fn big_to_tf(x: &BigUint) -> TwoFloat {
    let hi_shift = x.bits().saturating_sub(53);
    let hi = (x >> hi_shift).to_f64().expect("fits in 53 bits");
    let rest = x - ((x >> hi_shift) << hi_shift);
    let lo = rest.to_f64().expect("finite");
    TwoFloat::from(hi) * TwoFloat::from(2f64.powi(hi_shift as i32)) + TwoFloat::from(lo)
}

pub fn ln2() -> TwoFloat {
    twofloat::consts::LN_2
}

/// Natural logarithm of a positive double-double.
///
/// `TwoFloat::ln` is only accurate to about `1e-14`, so this reduces to a
/// mantissa in `[1/√2, √2)` and sums the `atanh` series in full precision.
pub fn ln_tf(x: TwoFloat) -> TwoFloat {
    assert!(x.hi() > 0.0, "logarithm of a non-positive number");
    let mut e = x.hi().log2().round() as i32;
    let mut m = x / TwoFloat::from(2f64.powi(e));
    if m.hi() > std::f64::consts::SQRT_2 {
        m /= 2.0;
        e += 1;
    } else if m.hi() < std::f64::consts::FRAC_1_SQRT_2 {
        m *= 2.0;
        e -= 1;
    }
    let s = div_tf(m - 1.0, m + 1.0);
    let s2 = s * s;
    let mut term = s;
    let mut sum = s;
    for k in 1..60 {
        term *= s2;
        let add = term / (2 * k + 1) as f64;
        sum += add;
        if add.hi().abs() < 1e-34 {
            break;
        }
    }
    sum * 2.0 + TwoFloat::from(e as f64) * ln2()
}

/// Double-double quotient.
///
/// `TwoFloat`'s own `TwoFloat / TwoFloat` keeps only about 53 bits, so the
/// quotient is refined by two correction steps using exact products.
pub fn div_tf(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    let r1 = a - b * q1;
    let q2 = r1.hi() / b.hi();
    let r2 = r1 - b * q2;
    let q3 = r2.hi() / b.hi();
    TwoFloat::new_add(q1, q2) + q3
}

/// `ln(a/b)` for positive big integers.
pub fn ln_ratio(a: &BigUint, b: &BigUint) -> TwoFloat {
    ln_big(a) - ln_big(b)
}
