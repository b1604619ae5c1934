//! The smallest-label recurrence over `Z_p[x]/(x^ℓ)`, reconstructed by CRT.
//!
//! Working with EGF coefficients `ĝ_n = g_n/n!` and `P̂_q(s) = P_q(s)/s!`,
//! the recurrence becomes
//!
//! ```text
//! P̂_q(s) = (1/q) Σ_j ĝ_j P̂_{q-1}(s-j)
//! ĝ_n    = Σ_{m,q} L(m+q, q)/m! · w(m, q) · P̂_q(n-m)
//! ```
//!
//! where `w(m, q)` is the marker weight of a root component. Cell lengths are
//! capped at `min(ℓ, s - q + 1)` since `q` networks on `s` labels carry at
//! most `s - q` reticulations (and at most `s - q` deficit).

use num_bigint::BigUint;

use crate::modp::{Crt, Lazy, Zp};

/// What the marker variable `x` records.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Marker {
    /// `x` unused, `ℓ = 1`.
    Totals,
    /// `x^k` for `k` reticulations, truncated below `x^len`.
    Reticulations { len: usize },
    /// `(1 + x)^k` truncated below `x^3`: coefficients `Σ C(k, s)·GTC_{n,k}` for `s ≤ 2`.
    Jet,
    /// `x^d` for deficit `d = n - 1 - k`, truncated below `x^len`.
    Deficit { len: usize },
}

impl Marker {
    fn len(self) -> usize {
        match self {
            Marker::Totals => 1,
            Marker::Reticulations { len } | Marker::Deficit { len } => len.max(1),
            Marker::Jet => 3,
        }
    }

    /// Terms `(offset, coefficient)` of `w(m, q)`.
    fn weight(self, f: Zp, inv2: u64, m: usize, q: usize, out: &mut Vec<(usize, u64)>) {
        out.clear();
        match self {
            Marker::Totals => out.push((0, 1)),
            Marker::Reticulations { len } => {
                if q < len {
                    out.push((q, 1));
                }
            }
            Marker::Jet => {
                let q64 = q as u64 % f.p;
                out.push((0, 1));
                if q >= 1 {
                    out.push((1, q64));
                }
                if q >= 2 {
                    out.push((2, f.mul(q64, f.mul(q64 + f.p - 1, inv2))));
                }
            }
            Marker::Deficit { len } => {
                if m - 1 < len {
                    out.push((m - 1, 1));
                }
            }
        }
    }
}

/// `L(c, k) mod p` via factorial residues.
fn l_mod(f: Zp, fact: &[u64], inv_fact: &[u64], inv2_pow: &[u64], c: usize, k: usize) -> u64 {
    if k >= c {
        return 0;
    }
    f.mul(f.mul(fact[2 * c - 2], inv2_pow[c - 1]), inv_fact[c - k - 1])
}

/// GTC marker polynomials `n!·ĝ_n mod p` for `n = 0..=n_max` (index 0 empty).
pub fn run_prime(f: Zp, n_max: usize, marker: Marker) -> Vec<Vec<u64>> {
    let ell = marker.len();
    let top = 2 * n_max.max(1);
    let fact = f.factorials(top);
    let inv_fact = f.inv_factorials(top);
    let inv = f.inverses(n_max.max(1));
    let inv2 = f.inv(2);
    let mut inv2_pow = vec![1u64; n_max + 1];
    for i in 1..=n_max {
        inv2_pow[i] = f.mul(inv2_pow[i - 1], inv2);
    }
    // coef[m][q] = L(m+q, q)/m!
    let coef: Vec<Vec<u64>> = (0..=n_max)
        .map(|m| {
            (0..=n_max - m)
                .map(|q| {
                    if m == 0 || m + q < 2 {
                        0
                    } else {
                        f.mul(l_mod(f, &fact, &inv_fact, &inv2_pow, m + q, q), inv_fact[m])
                    }
                })
                .collect()
        })
        .collect();

    let cell_len = |q: usize, s: usize| ell.min(s + 1 - q.min(s));
    let mut g: Vec<Vec<u64>> = vec![Vec::new(); n_max + 1];
    // sets[q][s] = P̂_q(s)
    let mut sets: Vec<Vec<Vec<u64>>> = vec![vec![Vec::new(); n_max + 1]; n_max + 1];
    sets[0][0] = vec![1];
    let mut w = Vec::new();
    for n in 1..=n_max {
        let glen = ell.min(n);
        let mut acc = vec![Lazy::new(f); glen];
        if n == 1 {
            acc[0].add(1);
        } else {
            for m in 1..=n {
                for q in (if m == 1 { 1 } else { 0 })..=(n - m) {
                    let c = coef[m][q];
                    let src = &sets[q][n - m];
                    if c == 0 || src.is_empty() {
                        continue;
                    }
                    marker.weight(f, inv2, m, q, &mut w);
                    for &(off, wc) in &w {
                        if off >= glen {
                            continue;
                        }
                        let cc = f.mul(c, wc);
                        for (b, &v) in src.iter().enumerate().take(glen - off) {
                            acc[off + b].add_mul(cc, v);
                        }
                    }
                }
            }
        }
        g[n] = acc.iter().map(Lazy::get).collect();
        for q in 1..=n {
            let len = cell_len(q, n);
            let mut acc = vec![Lazy::new(f); len];
            for j in 1..=(n - q + 1) {
                let a = &g[j];
                let b = &sets[q - 1][n - j];
                if b.is_empty() {
                    continue;
                }
                for (s, &x) in a.iter().enumerate().take(len) {
                    if x == 0 {
                        continue;
                    }
                    for (t, &y) in b.iter().enumerate().take(len - s) {
                        acc[s + t].add_mul(x, y);
                    }
                }
            }
            sets[q][n] = acc.iter().map(|a| f.mul(a.get(), inv[q])).collect();
        }
    }
    g.iter()
        .enumerate()
        .map(|(n, v)| v.iter().map(|&x| f.mul(x, fact[n])).collect())
        .collect()
}

/// Exact marker polynomials of `GTC_n` for `n ≤ n_max`, assuming every
/// coefficient lies below the product of `primes`.
pub fn run(n_max: usize, marker: Marker, primes: &[u64]) -> Vec<Vec<BigUint>> {
    let crt = Crt::new(primes);
    let residues: Vec<Vec<Vec<u64>>> = crt.moduli().iter().map(|&f| run_prime(f, n_max, marker)).collect();
    let mut out = Vec::with_capacity(n_max + 1);
    let mut buf = vec![0u64; primes.len()];
    for n in 0..=n_max {
        let len = residues[0][n].len();
        let mut row = Vec::with_capacity(len);
        for t in 0..len {
            for (i, r) in residues.iter().enumerate() {
                buf[i] = r[n][t];
            }
            row.push(crt.reconstruct(&buf));
        }
        out.push(row);
    }
    out
}
