//! Joint counts by reticulations `k` and reticulations without a leaf child `i`.
//!
//! Let `Ê(z, X) = Σ L(c, k)/(k!·m!) X^k z^{m-1}` over one-component shapes of
//! size `c = k + m ≥ 2`: `X` marks reticulations and `z` the plain leaves
//! beyond the first. Substituting subnetworks below reticulations and
//! inverting the resulting equation in the reticulation marker gives
//!
//! ```text
//! GTC_{n,k,i} = n! · C(k+1, i+1)/(k+1) · [z^{n-1-k} X^k] Ê^{i+1}     (n ≥ 2)
//! ```
//!
//! The exponent `i + 1` counts components; all but the root component hang
//! below a reticulation, and exactly those reticulations lack a leaf child.
//! Summing over `i` recovers `GTC_{n,k} = n!/(k+1) · [z^{n-1-k} X^k] (1+Ê)^{k+1}`.

use num_bigint::BigUint;

use crate::modp::{Crt, Lazy, Zp};

/// Triangular array indexed by `(a, b)` with `a + b < n`.
struct Tri {
    v: Vec<u64>,
    start: Vec<usize>,
}

impl Tri {
    fn new(n: usize) -> Self {
        let mut start = Vec::with_capacity(n + 1);
        let mut s = 0;
        for a in 0..=n {
            start.push(s);
            s += n.saturating_sub(a);
        }
        Tri {
            v: vec![0; s],
            start,
        }
    }

    #[inline]
    fn get(&self, a: usize, b: usize) -> u64 {
        self.v[self.start[a] + b]
    }

    #[inline]
    fn set(&mut self, a: usize, b: usize, x: u64) {
        self.v[self.start[a] + b] = x;
    }
}

/// Residues of `GTC_{n,k,i}`, indexed `[n][k][i]`, for `i < i_len`.
pub fn run_prime(f: Zp, n_max: usize, i_len: usize) -> Vec<Vec<Vec<u64>>> {
    let top = 2 * n_max.max(1);
    let fact = f.factorials(top);
    let inv_fact = f.inv_factorials(top);
    let inv2 = f.inv(2);
    let mut out: Vec<Vec<Vec<u64>>> = (0..=n_max)
        .map(|n| (0..n).map(|k| vec![0u64; (k + 1).min(i_len)]).collect())
        .collect();
    if n_max >= 1 && i_len >= 1 {
        out[1][0][0] = 1;
    }
    if n_max < 2 {
        return out;
    }
    let size = n_max; // total degree a + b ≤ n_max - 1
    let mut e = Tri::new(size);
    for a in 0..size {
        for b in 0..size - a {
            let c = a + b + 1;
            if c < 2 {
                continue;
            }
            // L(c, b)/(b!·(a+1)!), L(c, b) = (2c-2)!/(2^{c-1} a!)
            let l = f.mul(fact[2 * c - 2], f.mul(f.pow(inv2, (c - 1) as u64), inv_fact[a]));
            e.set(a, b, f.mul(l, f.mul(inv_fact[b], inv_fact[a + 1])));
        }
    }
    let mut power = Tri::new(size);
    power.v.copy_from_slice(&e.v);
    for p in 1..=i_len.min(n_max - 1) {
        if p > 1 {
            let mut next = Tri::new(size);
            for a in 0..size {
                for b in 0..size - a {
                    if a + b < p {
                        continue;
                    }
                    let mut acc = Lazy::new(f);
                    for a2 in 0..=a {
                        for b2 in 0..=b {
                            if a2 + b2 == 0 || a - a2 + b - b2 < p - 1 {
                                continue;
                            }
                            acc.add_mul(e.get(a2, b2), power.get(a - a2, b - b2));
                        }
                    }
                    next.set(a, b, acc.get());
                }
            }
            power = next;
        }
        let i = p - 1;
        for n in 2..=n_max {
            for k in i..n {
                let d = n - 1 - k;
                let coeff = power.get(d, k);
                if coeff == 0 {
                    continue;
                }
                // C(k+1, i+1)/(k+1) = k!/((i+1)!(k-i)!)
                let binom = f.mul(fact[k], f.mul(inv_fact[i + 1], inv_fact[k - i]));
                out[n][k][i] = f.mul(fact[n], f.mul(binom, coeff));
            }
        }
    }
    out
}

/// Exact joint counts `[n][k][i]` for `i < i_len`.
pub fn run(n_max: usize, i_len: usize, primes: &[u64]) -> Vec<Vec<Vec<BigUint>>> {
    let crt = Crt::new(primes);
    let residues: Vec<_> = crt.moduli().iter().map(|&f| run_prime(f, n_max, i_len)).collect();
    let mut buf = vec![0u64; primes.len()];
    (0..=n_max)
        .map(|n| {
            (0..n)
                .map(|k| {
                    (0..residues[0][n][k].len())
                        .map(|i| {
                            for (j, r) in residues.iter().enumerate() {
                                buf[j] = r[n][k][i];
                            }
                            crt.reconstruct(&buf)
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modp::primes;

    #[test]
    fn joint_counts_at_four() {
        let t = run(4, 4, &primes(1));
        let c = |n: usize, k: usize, i: usize| u64::try_from(&t[n][k][i]).unwrap();
        assert_eq!(c(2, 1, 0), 2);
        assert_eq!(t[2][1].len(), 2);
        assert_eq!(c(2, 1, 1), 0);
        assert_eq!((c(3, 1, 1), c(3, 2, 1), c(3, 2, 2)), (3, 6, 0));
        assert_eq!((c(4, 2, 2), c(4, 3, 1), c(4, 3, 2)), (12, 216, 24));
    }
}
