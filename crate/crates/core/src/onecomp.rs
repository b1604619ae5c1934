//! One-component tree-child networks: every reticulation has a leaf child.
//!
//! `L(c, k)` counts those networks of size `c` with `k` reticulations whose
//! reticulation-child leaves carry the labels `1..=k`; choosing which labels
//! sit below reticulations gives `OTC(c, k) = C(c, k)·L(c, k)`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

use crate::combin::{binom, div_tf, factorial, ln_tf, tree_count};
use crate::logspace::{ln_pi, tf_usize, LogValue};
use crate::network::{NodeType, PhyloNetwork};
use crate::series::{ExactRational, TruncSeries};

/// `L(n, k) = (2n-2)! / (2^(n-1) (n-k-1)!)`, zero when `k >= n`.
pub fn l_count(n: usize, k: usize) -> BigUint {
    assert!(n >= 1, "size must be positive");
    if k >= n {
        return BigUint::zero();
    }
    let num: BigUint = ((n - k)..=(2 * n - 2)).fold(BigUint::one(), |acc, i| acc * i);
    num >> (n - 1)
}

/// `OTC(n, k) = C(n, k)·L(n, k)`.
pub fn otc(n: usize, k: usize) -> BigUint {
    binom(n, k) * l_count(n, k)
}

pub fn otc_total(n: usize) -> BigUint {
    (0..n).map(|k| otc(n, k)).sum()
}

/// `L(z) = Σ_{n≥1} (2n-2)! / (2^(n-1) n!) z^n`.
pub fn series_l(order: usize) -> TruncSeries {
    let mut c = vec![ExactRational::zero()];
    for n in 1..=order {
        c.push(ExactRational::new(l_count(n, n - 1).into(), factorial(n).into()));
    }
    TruncSeries::from_coeffs(order, &c)
}

/// `L'(z) = Σ_{i≥0} (2i-1)!! z^i`.
pub fn series_lprime(order: usize) -> TruncSeries {
    let mut c = Vec::with_capacity(order + 1);
    let mut x = BigUint::one();
    for i in 0..=order {
        if i > 0 {
            x *= 2 * i - 1;
        }
        c.push(ExactRational::from_integer(x.clone().into()));
    }
    TruncSeries::from_coeffs(order, &c)
}

/// `A(z) = Σ_{n≥1} OTC_{n+1} z^n / (n+1)!`.
pub fn series_a(order: usize) -> TruncSeries {
    let mut c = vec![ExactRational::zero()];
    for n in 1..=order {
        c.push(ExactRational::new(otc_total(n + 1).into(), factorial(n + 1).into()));
    }
    TruncSeries::from_coeffs(order, &c)
}

/// Local limit approximation of `OTC(n, k)` around `k ≈ n - √n`.
pub fn otc_local_limit(n: usize, k: usize) -> LogValue {
    let nn = tf_usize(n);
    let rt = nn.sqrt();
    let x = tf_usize(k) - nn + rt;
    let ln = -crate::combin::ln2() - (ln_pi() + 1.0) / 2.0 - ln_tf(nn) * 1.5
        + rt * 2.0
        + nn * (crate::combin::ln2() - 2.0)
        + nn * ln_tf(nn) * 2.0
        - div_tf(x * x, rt);
    LogValue::from_ln(ln)
}

/// First-order asymptotics of `OTC_n`.
pub fn otc_total_asym(n: usize) -> LogValue {
    let nn = tf_usize(n);
    let ln = -crate::combin::ln2() - 0.5 - ln_tf(nn) * 1.25
        + nn.sqrt() * 2.0
        + nn * (crate::combin::ln2() - 2.0)
        + nn * ln_tf(nn) * 2.0;
    LogValue::from_ln(ln)
}

/// Uniform rooted binary phylogenetic tree on `labels` by sequential leaf
/// insertion into a uniformly chosen edge (the root edge included).
pub fn sample_tree<R: Rng + ?Sized>(labels: &[u32], rng: &mut R) -> PhyloNetwork {
    assert!(!labels.is_empty(), "a tree needs at least one leaf");
    let mut net = PhyloNetwork::single_leaf(labels[0]);
    let mut edges = vec![(0usize, 1usize)];
    for &l in &labels[1..] {
        let e = rng.gen_range(0..edges.len());
        insert_leaf(&mut net, &mut edges, e, l);
    }
    net
}

fn insert_leaf(net: &mut PhyloNetwork, edges: &mut Vec<(usize, usize)>, e: usize, label: u32) {
    let (u, v) = edges[e];
    let w = net.subdivide(u, v, NodeType::Tree);
    let leaf = net.add_leaf(label);
    net.add_edge(w, leaf);
    edges[e] = (u, w);
    edges.push((w, v));
    edges.push((w, leaf));
}

/// How the reticulation-child leaves of a one-component sample are labeled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelModel {
    /// Reticulation leaves get `1..=k`, the others `k+1..=c` (the `L(c, k)` class).
    Fixed,
    /// Reticulation leaves get a uniform `k`-subset of `1..=c` (the `OTC(c, k)` class).
    Uniform,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OneCompError {
    #[error("a one-component network of size {c} has at most {} reticulations, not {k}", c.saturating_sub(1))]
    TooManyReticulations { c: usize, k: usize },
    #[error("size must be positive")]
    EmptySize,
}

/// Number of ways to place the next hat: unordered pairs with repetition
/// from `eligible` edges.
pub fn hat_choices(eligible: usize) -> usize {
    eligible * (eligible + 1) / 2
}

/// `trees(c-k) · Π_i C(E_i + 1, 2)`, the number of outcomes of the hat
/// construction; it must equal `L(c, k)`.
pub fn hat_weight(c: usize, k: usize) -> BigUint {
    if c == 0 || k >= c {
        return BigUint::zero();
    }
    let t = c - k;
    let mut w = tree_count(t);
    for i in 0..k {
        w *= hat_choices(2 * t - 1 + 2 * i);
    }
    w
}

/// Uniform one-component tree-child network of size `c` with `k` reticulations.
///
/// A uniform tree on `c - k` leaves receives `k` hats in turn. Hat `i` picks a
/// uniform multiset of two eligible edges (any edge not incident to an
/// existing reticulation), subdivides them with the parents of a new
/// reticulation, and hangs leaf `i` below it.
pub fn sample_one_component<R: Rng + ?Sized>(
    c: usize,
    k: usize,
    model: LabelModel,
    rng: &mut R,
) -> Result<PhyloNetwork, OneCompError> {
    if c == 0 {
        return Err(OneCompError::EmptySize);
    }
    if k >= c {
        return Err(OneCompError::TooManyReticulations { c, k });
    }
    let t = c - k;
    let tree_labels: Vec<u32> = ((k + 1) as u32..=c as u32).collect();
    let mut net = PhyloNetwork::single_leaf(tree_labels[0]);
    let mut eligible = vec![(0usize, 1usize)];
    for &l in &tree_labels[1..] {
        let e = rng.gen_range(0..eligible.len());
        insert_leaf(&mut net, &mut eligible, e, l);
    }
    debug_assert_eq!(eligible.len(), 2 * t - 1);
    for i in 1..=k {
        let e = eligible.len();
        let (a, b) = unrank_pair(rng.gen_range(0..hat_choices(e)), e);
        let (p1, p2) = if a == b {
            let (u, v) = eligible[a];
            let p1 = net.subdivide(u, v, NodeType::Tree);
            let p2 = net.subdivide(p1, v, NodeType::Tree);
            eligible[a] = (u, p1);
            eligible.push((p1, p2));
            eligible.push((p2, v));
            (p1, p2)
        } else {
            let (u1, v1) = eligible[a];
            let (u2, v2) = eligible[b];
            let p1 = net.subdivide(u1, v1, NodeType::Tree);
            let p2 = net.subdivide(u2, v2, NodeType::Tree);
            eligible[a] = (u1, p1);
            eligible[b] = (u2, p2);
            eligible.push((p1, v1));
            eligible.push((p2, v2));
            (p1, p2)
        };
        let r = net.add_node(NodeType::Reticulation, None);
        net.add_edge(p1, r);
        net.add_edge(p2, r);
        let leaf = net.add_leaf(i as u32);
        net.add_edge(r, leaf);
    }
    if model == LabelModel::Uniform && k > 0 {
        let subset = rand::seq::index::sample(rng, c, k);
        let mut chosen: Vec<u32> = subset.iter().map(|x| x as u32 + 1).collect();
        chosen.sort_unstable();
        let rest: Vec<u32> = (1..=c as u32).filter(|l| !chosen.contains(l)).collect();
        net.relabel(|l| {
            if (l as usize) <= k {
                chosen[l as usize - 1]
            } else {
                rest[l as usize - k - 1]
            }
        });
    }
    Ok(net)
}

/// The `x`-th pair `(a, b)` with `a <= b < e` in lexicographic order.
fn unrank_pair(mut x: usize, e: usize) -> (usize, usize) {
    for a in 0..e {
        let row = e - a;
        if x < row {
            return (a, a + x);
        }
        x -= row;
    }
    unreachable!("rank below e(e+1)/2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn closed_forms_small() {
        assert_eq!(otc(3, 0), big(3));
        assert_eq!(otc(3, 1), big(18));
        assert_eq!(otc(3, 2), big(18));
        assert_eq!(otc(3, 3), big(0));
        assert_eq!(l_count(2, 1), big(1));
        assert_eq!(l_count(3, 2), big(6));
        for n in 1..6 {
            assert_eq!(l_count(n, n), big(0));
        }
        assert_eq!(otc_total(1), big(1));
        assert_eq!(otc_total(2), big(3));
        assert_eq!(otc_total(3), big(39));
    }

    #[test]
    fn series_first_terms() {
        let lp = series_lprime(3);
        assert_eq!(lp.univariate_coeffs(), vec![rat(1, 1), rat(1, 1), rat(3, 1), rat(15, 1)]);
        assert_eq!(series_l(2).univariate_coeffs(), vec![rat(0, 1), rat(1, 1), rat(1, 2)]);
        assert_eq!(series_a(2).univariate_coeffs(), vec![rat(0, 1), rat(3, 2), rat(13, 2)]);
        assert_eq!(series_l(6).derivative(), series_lprime(5));
    }

    #[test]
    fn tree_column_is_tree_count() {
        for n in 1..30 {
            assert_eq!(otc(n, 0), tree_count(n));
        }
    }

    #[test]
    fn hat_weight_telescopes_to_l() {
        for c in 1..=12 {
            for k in 0..c {
                assert_eq!(hat_weight(c, k), l_count(c, k), "c={c} k={k}");
            }
        }
    }

    #[test]
    fn asymptotic_at_one() {
        let v = otc_total_asym(1).value().unwrap();
        assert!((v - (-0.5f64).exp()).abs() < 1e-12);
        assert!(otc_total_asym(1_000_000).ln_f64().is_finite());
    }

    #[test]
    fn local_limit_centre_has_no_gaussian_penalty() {
        // at k = n - √n the exponential factor is exactly 1
        let n = 100;
        let with: f64 = otc_local_limit(n, 90).ln_f64();
        let base: f64 = {
            let nf = n as f64;
            -(2f64.ln()) - 0.5 * (1.0 + std::f64::consts::PI.ln()) - 1.5 * nf.ln()
                + 2.0 * nf.sqrt()
                + nf * (2f64.ln() - 2.0)
                + 2.0 * nf * nf.ln()
        };
        assert!((with - base).abs() < 1e-9);
    }

    #[test]
    fn samples_have_requested_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for c in 1..8 {
            for k in 0..c {
                for model in [LabelModel::Fixed, LabelModel::Uniform] {
                    let net = sample_one_component(c, k, model, &mut rng).unwrap();
                    assert!(net.is_valid(), "{:?}", net.validate());
                    assert_eq!(net.size(), c);
                    assert_eq!(net.reticulation_count(), k);
                }
            }
        }
        assert!(sample_one_component(3, 3, LabelModel::Fixed, &mut rng).is_err());
    }

    #[test]
    fn unrank_covers_all_pairs() {
        let e = 5;
        let all: Vec<_> = (0..hat_choices(e)).map(|x| unrank_pair(x, e)).collect();
        let mut want = Vec::new();
        for a in 0..e {
            for b in a..e {
                want.push((a, b));
            }
        }
        assert_eq!(all, want);
    }
}
