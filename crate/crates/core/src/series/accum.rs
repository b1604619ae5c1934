use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::ExactRational;

/// Running exact sum of rational terms over a shared denominator.
///
/// Reducing after every addition (as `BigRational` does) costs a big gcd per
/// term. Here the denominator only grows when a term does not divide it, and
/// the fraction is reduced once in [`RatAccumulator::finish`].
#[derive(Clone, Debug)]
pub struct RatAccumulator {
    num: BigInt,
    den: BigInt,
}

impl Default for RatAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl RatAccumulator {
    pub fn new() -> Self {
        RatAccumulator {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    fn push(&mut self, x: BigInt, y: BigInt) {
        if y.is_one() {
            if self.den.is_one() {
                self.num += x;
            } else {
                self.num += x * &self.den;
            }
            return;
        }
        let (q, r) = self.den.div_rem(&y);
        if r.is_zero() {
            self.num += x * q;
        } else {
            let g = self.den.gcd(&y);
            let l = &self.den / &g * &y;
            let up = &l / &self.den;
            let down = &l / &y;
            self.num = std::mem::take(&mut self.num) * up + x * down;
            self.den = l;
        }
    }

    pub fn add(&mut self, a: &ExactRational) {
        if a.is_zero() {
            return;
        }
        self.push(a.numer().clone(), a.denom().clone());
    }

    pub fn add_product(&mut self, a: &ExactRational, b: &ExactRational) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        self.push(a.numer() * b.numer(), a.denom() * b.denom());
    }

    pub fn add_scaled_product(&mut self, c: &BigInt, a: &ExactRational, b: &ExactRational) {
        if c.is_zero() || a.is_zero() || b.is_zero() {
            return;
        }
        self.push(c * a.numer() * b.numer(), a.denom() * b.denom());
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn finish(self) -> ExactRational {
        ExactRational::new(self.num, self.den)
    }
}

/// Exact `Σ a_i b_i`.
pub fn dot<'a, I>(pairs: I) -> ExactRational
where
    I: IntoIterator<Item = (&'a ExactRational, &'a ExactRational)>,
{
    let mut acc = RatAccumulator::new();
    for (a, b) in pairs {
        acc.add_product(a, b);
    }
    acc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn mixed_denominators() {
        let a = [q(1, 2), q(1, 3), q(-5, 6)];
        let b = [q(1, 1), q(3, 1), q(1, 5)];
        // 1/2 + 1 - 1/6
        assert_eq!(dot(a.iter().zip(b.iter())), q(4, 3));
    }

    #[test]
    fn cancels_to_zero() {
        let mut acc = RatAccumulator::new();
        acc.add(&q(3, 7));
        acc.add(&q(-3, 7));
        assert!(acc.is_zero());
        assert_eq!(acc.finish(), q(0, 1));
    }
}
