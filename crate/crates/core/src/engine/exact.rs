//! Exact totals by the smallest-label recurrence.
//!
//! A network of size `n ≥ 2` is its root component, a one-component network
//! of size `c = m + q` with `q` reticulations, whose `m` plain leaves are
//! labels and whose reticulation leaves each carry a subnetwork. Writing
//! `P_q(s)` for the number of unordered `q`-sets of networks on `s` labels,
//!
//! ```text
//! P_0(0) = 1,   P_q(s) = Σ_j C(s-1, j-1) g_j P_{q-1}(s-j),
//! g_1 = 1,      g_n   = Σ_{m≥1, q≥0, m+q≥2} L(m+q, q) C(n, m) P_q(n-m).
//! ```
//!
//! The block containing the smallest label is peeled off first in `P_q`,
//! which is what makes the sets unordered.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::combin::Factorials;
use crate::onecomp::l_count;

/// `L(c, k)` for `1 ≤ c ≤ n_max`, indexed `[c][k]`.
#[derive(Clone, Debug)]
pub struct OneCompTable {
    l: Vec<Vec<BigUint>>,
}

impl OneCompTable {
    pub fn new(n_max: usize) -> Self {
        let mut l = vec![Vec::new()];
        for c in 1..=n_max {
            l.push((0..c).map(|k| l_count(c, k)).collect());
        }
        OneCompTable { l }
    }

    pub fn get(&self, c: usize, k: usize) -> &BigUint {
        &self.l[c][k]
    }
}

/// The recurrence tables through `n_max`, reused by the sampler.
#[derive(Clone, Debug)]
pub struct Totals {
    n_max: usize,
    g: Vec<BigUint>,
    /// `sets[q][s] = P_q(s)`.
    sets: Vec<Vec<BigUint>>,
    fact: Factorials,
    l: OneCompTable,
}

impl Totals {
    pub fn build(n_max: usize) -> Self {
        let fact = Factorials::new(n_max.max(1));
        let l = OneCompTable::new(n_max);
        let mut g = vec![BigUint::zero(); n_max + 1];
        let mut sets = vec![vec![BigUint::zero(); n_max + 1]; n_max + 1];
        sets[0][0] = BigUint::one();
        for n in 1..=n_max {
            g[n] = if n == 1 {
                BigUint::one()
            } else {
                let mut total = BigUint::zero();
                for m in 1..=n {
                    let mut inner = BigUint::zero();
                    for q in (if m == 1 { 1 } else { 0 })..=(n - m) {
                        let p = &sets[q][n - m];
                        if !p.is_zero() {
                            inner += l.get(q + m, q) * p;
                        }
                    }
                    if !inner.is_zero() {
                        total += inner * fact.binom(n, m);
                    }
                }
                total
            };
            let cg: Vec<BigUint> = (0..=n)
                .map(|j| if j == 0 { BigUint::zero() } else { fact.binom(n - 1, j - 1) * &g[j] })
                .collect();
            for q in 1..=n {
                let mut acc = BigUint::zero();
                for j in 1..=(n - q + 1) {
                    let p = &sets[q - 1][n - j];
                    if !p.is_zero() {
                        acc += &cg[j] * p;
                    }
                }
                sets[q][n] = acc;
            }
        }
        Totals {
            n_max,
            g,
            sets,
            fact,
            l,
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `GTC_n`.
    pub fn total(&self, n: usize) -> &BigUint {
        &self.g[n]
    }

    pub fn totals(&self) -> &[BigUint] {
        &self.g
    }

    /// Unordered `q`-sets of networks on `s` labels.
    pub fn sets(&self, q: usize, s: usize) -> &BigUint {
        &self.sets[q][s]
    }

    pub fn factorials(&self) -> &Factorials {
        &self.fact
    }

    pub fn one_component(&self) -> &OneCompTable {
        &self.l
    }

    /// Weight of a root component with `m` plain leaves and `q` reticulations
    /// in `g_n`; these sum to `g_n` over the admissible `(m, q)`.
    pub fn root_weight(&self, n: usize, m: usize, q: usize) -> BigUint {
        if m == 0 || m + q < 2 || m + q > n || q > n - m {
            return BigUint::zero();
        }
        self.l.get(q + m, q) * self.fact.binom(n, m) * &self.sets[q][n - m]
    }

    /// Weight of the block of size `j` holding the smallest of `s` labels in `P_q(s)`.
    pub fn block_weight(&self, s: usize, q: usize, j: usize) -> BigUint {
        if j == 0 || j > s || q == 0 {
            return BigUint::zero();
        }
        self.fact.binom(s - 1, j - 1) * &self.g[j] * &self.sets[q - 1][s - j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_totals() {
        let t = Totals::build(10);
        let want: [u64; 10] = [
            1,
            3,
            48,
            1611,
            87660,
            6891615,
            734112540,
            101717195895,
            17813516259420,
            3857230509496875,
        ];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(t.total(n + 1), &BigUint::from(*w));
        }
    }

    #[test]
    fn weights_sum_to_totals() {
        let t = Totals::build(8);
        for n in 2..=8 {
            let s: BigUint = (1..=n).flat_map(|m| (0..=n - m).map(move |q| (m, q))).map(|(m, q)| t.root_weight(n, m, q)).sum();
            assert_eq!(&s, t.total(n));
            for q in 1..=n {
                let b: BigUint = (1..=n).map(|j| t.block_weight(n, q, j)).sum();
                assert_eq!(&b, t.sets(q, n));
            }
        }
    }
}
