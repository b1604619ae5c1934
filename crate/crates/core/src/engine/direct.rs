//! The tree sum over component-tree shapes, evaluated term by term.
//!
//! Every galled tree-child network compresses to a multiway tree whose
//! internal vertices stand for one-component networks. A vertex with `c`
//! children, `c_lf` of them leaves, must put arrows on its `c - c_lf`
//! internal children and may add arrows on `j` of its leaf children, giving
//! the vertex weight `Σ_j C(c_lf, j)·L(c, c - c_lf + j)·u^{c - c_lf + j}`.

use num_bigint::BigUint;

use super::EngineError;
use crate::combin::binom;
use crate::onecomp::l_count;

/// Largest size for which [`gtc_direct`] enumerates shapes.
pub const DIRECT_MAX: usize = 8;

/// A component-tree shape on a label set: leaf children and internal children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentTreeShape {
    pub leaves: Vec<u32>,
    pub subtrees: Vec<ComponentTreeShape>,
}

impl ComponentTreeShape {
    pub fn children(&self) -> usize {
        self.leaves.len() + self.subtrees.len()
    }

    /// Labels below this vertex, sorted.
    pub fn labels(&self) -> Vec<u32> {
        let mut v = self.leaves.clone();
        for s in &self.subtrees {
            v.extend(s.labels());
        }
        v.sort_unstable();
        v
    }

    /// Weight polynomial in `u` (coefficient of `u^k` at index `k`).
    pub fn weight(&self) -> Vec<u128> {
        let c = self.children();
        let c_lf = self.leaves.len();
        let forced = c - c_lf;
        let mut w = vec![0u128; c];
        for j in 0..=c_lf {
            let k = forced + j;
            if k >= c {
                continue;
            }
            let term = binom(c_lf, j) * l_count(c, k);
            w[k] += u128::try_from(term).expect("fits for small shapes");
        }
        self.subtrees.iter().fold(w, |acc, s| poly_mul(&acc, &s.weight()))
    }
}

fn poly_mul(a: &[u128], b: &[u128]) -> Vec<u128> {
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// All partitions of `items` into at least `min_blocks` blocks.
fn set_partitions(items: &[u32], min_blocks: usize) -> Vec<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    fn go(items: &[u32], i: usize, blocks: &mut Vec<Vec<u32>>, min: usize, out: &mut Vec<Vec<Vec<u32>>>) {
        if i == items.len() {
            if blocks.len() >= min {
                out.push(blocks.clone());
            }
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(items[i]);
            go(items, i + 1, blocks, min, out);
            blocks[b].pop();
        }
        blocks.push(vec![items[i]]);
        go(items, i + 1, blocks, min, out);
        blocks.pop();
    }
    go(items, 0, &mut blocks, min_blocks, &mut out);
    out
}

/// Every component-tree shape on `labels` (at least two labels).
pub fn component_tree_shapes(labels: &[u32]) -> Vec<ComponentTreeShape> {
    let mut out = Vec::new();
    for partition in set_partitions(labels, 2) {
        let leaves: Vec<u32> = partition.iter().filter(|b| b.len() == 1).map(|b| b[0]).collect();
        let choices: Vec<Vec<ComponentTreeShape>> = partition
            .iter()
            .filter(|b| b.len() >= 2)
            .map(|b| component_tree_shapes(b))
            .collect();
        let mut pick = vec![0usize; choices.len()];
        loop {
            out.push(ComponentTreeShape {
                leaves: leaves.clone(),
                subtrees: pick.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect(),
            });
            // odometer over the sub-shape choices
            let mut pos = 0;
            while pos < pick.len() {
                pick[pos] += 1;
                if pick[pos] < choices[pos].len() {
                    break;
                }
                pick[pos] = 0;
                pos += 1;
            }
            if pos == pick.len() {
                break;
            }
        }
    }
    out
}

/// `GTC_{n,k}` for `k < n` by summing shape weights.
pub fn gtc_direct(n: usize) -> Result<Vec<BigUint>, EngineError> {
    if n == 0 || n > DIRECT_MAX {
        return Err(EngineError::Cap {
            what: "gtc_direct",
            n,
            cap: DIRECT_MAX,
            advice: "use gtc_table for larger sizes",
        });
    }
    if n == 1 {
        return Ok(vec![BigUint::from(1u32)]);
    }
    let labels: Vec<u32> = (1..=n as u32).collect();
    let mut row = vec![0u128; n];
    for shape in component_tree_shapes(&labels) {
        for (k, w) in shape.weight().into_iter().enumerate() {
            row[k] += w;
        }
    }
    Ok(row.into_iter().map(BigUint::from).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_labels() {
        let shapes = component_tree_shapes(&[1, 2, 3]);
        assert_eq!(shapes.len(), 4);
        let star = shapes.iter().find(|s| s.subtrees.is_empty()).unwrap();
        assert_eq!(star.weight().iter().sum::<u128>(), 39);
        for s in shapes.iter().filter(|s| !s.subtrees.is_empty()) {
            assert_eq!(s.weight().iter().sum::<u128>(), 3);
        }
        let row: Vec<u64> = gtc_direct(3).unwrap().iter().map(|x| u64::try_from(x).unwrap()).collect();
        assert_eq!(row, vec![3, 21, 24]);
    }

    #[test]
    fn shape_counts() {
        // labeled multiway trees with n leaves: 1, 4, 26, 236
        for (n, want) in [(2usize, 1usize), (3, 4), (4, 26), (5, 236)] {
            let labels: Vec<u32> = (1..=n as u32).collect();
            assert_eq!(component_tree_shapes(&labels).len(), want);
        }
    }
}
