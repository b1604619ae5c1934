//! Word-sized prime fields and Chinese remaindering.
//!
//! Large count tables are computed independently modulo several primes just
//! below `2^61` and reconstructed with Garner's algorithm. Products of two
//! residues fit in 122 bits, so 63 of them plus a residue can be summed in a `u128`
//! before a reduction is needed.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Largest number of unreduced products a [`Lazy`] may hold.
pub const LAZY_TERMS: u32 = 63;

/// A prime modulus below `2^61`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zp {
    pub p: u64,
}

impl Zp {
    pub fn new(p: u64) -> Self {
        assert!(p < (1 << 61) && is_prime(p), "modulus must be a prime below 2^61");
        Zp { p }
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u64) -> u64 {
        assert!(a % self.p != 0, "zero has no inverse");
        self.pow(a, self.p - 2)
    }

    pub fn from_big(self, x: &BigUint) -> u64 {
        let r = x % self.p;
        r.iter_u64_digits().next().unwrap_or(0)
    }

    /// `[1, 1/1, 1/2, …, 1/n]` by the linear-time recurrence.
    pub fn inverses(self, n: usize) -> Vec<u64> {
        let mut inv = vec![0u64; n + 1];
        if n >= 1 {
            inv[1] = 1;
        }
        for i in 2..=n {
            let q = self.p / i as u64;
            let r = (self.p % i as u64) as usize;
            inv[i] = self.mul(self.p - q, inv[r]);
        }
        inv[0] = 1;
        inv
    }

    /// `[0!, 1!, …, n!]`.
    pub fn factorials(self, n: usize) -> Vec<u64> {
        let mut f = vec![1 % self.p; n + 1];
        for i in 1..=n {
            f[i] = self.mul(f[i - 1], i as u64);
        }
        f
    }

    /// `[1/0!, 1/1!, …, 1/n!]`.
    pub fn inv_factorials(self, n: usize) -> Vec<u64> {
        let inv = self.inverses(n);
        let mut f = vec![1 % self.p; n + 1];
        for i in 1..=n {
            f[i] = self.mul(f[i - 1], inv[i]);
        }
        f
    }
}

/// Unreduced sum of residue products.
#[derive(Clone, Copy, Debug)]
pub struct Lazy {
    acc: u128,
    pending: u32,
    p: u64,
}

impl Lazy {
    #[inline]
    pub fn new(f: Zp) -> Self {
        Lazy {
            acc: 0,
            pending: 0,
            p: f.p,
        }
    }

    #[inline]
    pub fn add_mul(&mut self, a: u64, b: u64) {
        self.acc += a as u128 * b as u128;
        self.pending += 1;
        if self.pending == LAZY_TERMS {
            self.acc %= self.p as u128;
            self.pending = 0;
        }
    }

    #[inline]
    pub fn add(&mut self, a: u64) {
        self.add_mul(a, 1);
    }

    #[inline]
    pub fn get(&self) -> u64 {
        (self.acc % self.p as u128) as u64
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes below `2^61`, in decreasing order.
pub fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = (1u64 << 61) - 1;
    while out.len() < count {
        if is_prime(c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

/// Just enough of the primes from [`primes`] for their product to exceed `bound`.
pub fn primes_for_bound(bound: &BigUint) -> Vec<u64> {
    let bits = bound.bits() as usize + 1;
    // each prime contributes just under 61 bits
    let count = bits.div_ceil(60).max(1);
    primes(count)
}

/// Reconstructs integers in `[0, Π p)` from residues by Garner's algorithm.
#[derive(Clone, Debug)]
pub struct Crt {
    moduli: Vec<Zp>,
    // inv[i][j] = p_j^{-1} mod p_i for j < i
    inv: Vec<Vec<u64>>,
}

impl Crt {
    pub fn new(primes: &[u64]) -> Self {
        let moduli: Vec<Zp> = primes.iter().map(|&p| Zp::new(p)).collect();
        let inv = moduli
            .iter()
            .enumerate()
            .map(|(i, fi)| (0..i).map(|j| fi.inv(moduli[j].p % fi.p)).collect())
            .collect();
        Crt { moduli, inv }
    }

    pub fn moduli(&self) -> &[Zp] {
        &self.moduli
    }

    pub fn product(&self) -> BigUint {
        self.moduli.iter().fold(BigUint::one(), |acc, f| acc * f.p)
    }

    pub fn reconstruct(&self, residues: &[u64]) -> BigUint {
        assert_eq!(residues.len(), self.moduli.len());
        // mixed-radix digits
        let mut digits: Vec<u64> = Vec::with_capacity(residues.len());
        for (i, fi) in self.moduli.iter().enumerate() {
            let mut x = residues[i] % fi.p;
            for (j, &dj) in digits.iter().enumerate() {
                x = fi.mul(fi.sub(x, dj % fi.p), self.inv[i][j]);
            }
            digits.push(x);
        }
        let mut out = BigUint::zero();
        for (i, &d) in digits.iter().enumerate().rev() {
            out = out * self.moduli[i].p + d;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_prime_and_large() {
        let ps = primes(5);
        assert_eq!(ps.len(), 5);
        for w in ps.windows(2) {
            assert!(w[0] > w[1]);
        }
        assert!(ps.iter().all(|&p| is_prime(p) && p > (1 << 60)));
        assert!(!is_prime(561));
        assert!(is_prime(1_000_000_007));
    }

    #[test]
    fn inverses_and_factorials() {
        let f = Zp::new(1_000_000_007);
        let inv = f.inverses(50);
        for i in 1..=50u64 {
            assert_eq!(f.mul(i, inv[i as usize]), 1);
        }
        let fa = f.factorials(20);
        let ifa = f.inv_factorials(20);
        for i in 0..=20 {
            assert_eq!(f.mul(fa[i], ifa[i]), 1);
        }
    }

    #[test]
    fn lazy_matches_eager() {
        let f = Zp::new(primes(1)[0]);
        let mut lazy = Lazy::new(f);
        let mut eager = 0;
        for i in 0..500u64 {
            let a = f.p - 1 - i;
            let b = f.p - 7 - 3 * i;
            lazy.add_mul(a, b);
            eager = f.add(eager, f.mul(a, b));
        }
        assert_eq!(lazy.get(), eager);
    }

    #[test]
    fn crt_round_trip() {
        let ps = primes(4);
        let crt = Crt::new(&ps);
        let x: BigUint = "123456789012345678901234567890123456789012345".parse().unwrap();
        assert!(x < crt.product());
        let res: Vec<u64> = crt.moduli().iter().map(|f| f.from_big(&x)).collect();
        assert_eq!(crt.reconstruct(&res), x);
    }
}
