//! Rooted leaf-labeled binary phylogenetic networks.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeType {
    Root,
    Tree,
    Reticulation,
    Leaf,
}

/// A directed graph with typed nodes. Node ids are dense indices.
///
/// Mutating methods keep adjacency lists consistent but do not enforce the
/// network axioms; call [`PhyloNetwork::validate`] for that.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhyloNetwork {
    kinds: Vec<NodeType>,
    labels: Vec<Option<u32>>,
    children: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The graph has a directed cycle.
    Acyclicity,
    /// Not exactly one root, or the root has the wrong degrees.
    Root(String),
    Degree {
        node: usize,
        kind: NodeType,
        indegree: usize,
        outdegree: usize,
    },
    /// Leaf labels are not a bijection onto `{1, …, n}`.
    LabelBijection(String),
    /// Two parallel edges.
    MultiEdge { from: usize, to: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Acyclicity => write!(f, "acyclicity"),
            Violation::Root(m) => write!(f, "root: {m}"),
            Violation::Degree {
                node,
                kind,
                indegree,
                outdegree,
            } => write!(f, "degree: node {node} of type {kind:?} has indegree {indegree}, outdegree {outdegree}"),
            Violation::LabelBijection(m) => write!(f, "label bijection: {m}"),
            Violation::MultiEdge { from, to } => write!(f, "simple: parallel edges {from}->{to}"),
        }
    }
}

impl Default for PhyloNetwork {
    fn default() -> Self {
        Self::new()
    }
}

impl PhyloNetwork {
    /// An empty graph (not a valid network until nodes are added).
    pub fn new() -> Self {
        PhyloNetwork {
            kinds: Vec::new(),
            labels: Vec::new(),
            children: Vec::new(),
            parents: Vec::new(),
        }
    }

    /// The network with one leaf labeled `label` below the root.
    pub fn single_leaf(label: u32) -> Self {
        let mut n = Self::new();
        let r = n.add_node(NodeType::Root, None);
        let l = n.add_node(NodeType::Leaf, Some(label));
        n.add_edge(r, l);
        n
    }

    pub fn add_node(&mut self, kind: NodeType, label: Option<u32>) -> usize {
        self.kinds.push(kind);
        self.labels.push(label);
        self.children.push(Vec::new());
        self.parents.push(Vec::new());
        self.kinds.len() - 1
    }

    pub fn add_leaf(&mut self, label: u32) -> usize {
        self.add_node(NodeType::Leaf, Some(label))
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        self.children[from].push(to);
        self.parents[to].push(from);
    }

    /// Remove one copy of the edge `from -> to`; returns whether it existed.
    pub fn remove_edge(&mut self, from: usize, to: usize) -> bool {
        let Some(i) = self.children[from].iter().position(|&c| c == to) else {
            return false;
        };
        self.children[from].remove(i);
        let j = self.parents[to].iter().position(|&p| p == from).expect("adjacency in sync");
        self.parents[to].remove(j);
        true
    }

    /// Replace the edge `from -> to` by `from -> w -> to` for a new node `w`.
    /// Positions in both adjacency lists are preserved.
    pub fn subdivide(&mut self, from: usize, to: usize, kind: NodeType) -> usize {
        let w = self.add_node(kind, None);
        let i = self.children[from].iter().position(|&c| c == to).expect("edge exists");
        self.children[from][i] = w;
        let j = self.parents[to].iter().position(|&p| p == from).expect("edge exists");
        self.parents[to][j] = w;
        self.parents[w].push(from);
        self.children[w].push(to);
        w
    }

    pub fn node_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn kind(&self, v: usize) -> NodeType {
        self.kinds[v]
    }

    pub fn label(&self, v: usize) -> Option<u32> {
        self.labels[v]
    }

    pub fn set_label(&mut self, v: usize, label: u32) {
        self.labels[v] = Some(label);
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn parents(&self, v: usize) -> &[usize] {
        &self.parents[v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, cs) in self.children.iter().enumerate() {
            for &c in cs {
                out.push((u, c));
            }
        }
        out
    }

    pub fn root(&self) -> Option<usize> {
        self.kinds.iter().position(|&k| k == NodeType::Root)
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.node_count()).filter(|&v| self.kinds[v] == NodeType::Leaf).collect()
    }

    /// Number of leaves, the size of the network.
    pub fn size(&self) -> usize {
        self.leaves().len()
    }

    pub fn reticulations(&self) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&v| self.kinds[v] == NodeType::Reticulation)
            .collect()
    }

    pub fn reticulation_count(&self) -> usize {
        self.reticulations().len()
    }

    pub fn leaf_with_label(&self, label: u32) -> Option<usize> {
        (0..self.node_count()).find(|&v| self.kinds[v] == NodeType::Leaf && self.labels[v] == Some(label))
    }

    /// Apply `f` to every leaf label.
    pub fn relabel(&mut self, f: impl Fn(u32) -> u32) {
        for v in 0..self.node_count() {
            if let Some(l) = self.labels[v] {
                self.labels[v] = Some(f(l));
            }
        }
    }

    /// Nodes in an order where every parent precedes its children, or `None`
    /// if there is a directed cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let mut stack: Vec<usize> = (0..self.node_count()).filter(|&v| indeg[v] == 0).collect();
        let mut out = Vec::with_capacity(self.node_count());
        while let Some(v) = stack.pop() {
            out.push(v);
            for &c in &self.children[v] {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    stack.push(c);
                }
            }
        }
        (out.len() == self.node_count()).then_some(out)
    }

    /// Every violated structural axiom; empty means the network is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.topological_order().is_none() {
            out.push(Violation::Acyclicity);
        }
        let roots: Vec<usize> = (0..self.node_count()).filter(|&v| self.kinds[v] == NodeType::Root).collect();
        if roots.len() != 1 {
            out.push(Violation::Root(format!("{} root nodes", roots.len())));
        }
        for v in 0..self.node_count() {
            let (i, o) = (self.parents[v].len(), self.children[v].len());
            let ok = match self.kinds[v] {
                NodeType::Root => i == 0 && o == 1,
                NodeType::Tree => i == 1 && o == 2,
                NodeType::Reticulation => i == 2 && o == 1,
                NodeType::Leaf => i == 1 && o == 0,
            };
            if !ok {
                out.push(Violation::Degree {
                    node: v,
                    kind: self.kinds[v],
                    indegree: i,
                    outdegree: o,
                });
            }
            let distinct: BTreeSet<usize> = self.children[v].iter().copied().collect();
            if distinct.len() != self.children[v].len() {
                for &c in &distinct {
                    if self.children[v].iter().filter(|&&x| x == c).count() > 1 {
                        out.push(Violation::MultiEdge { from: v, to: c });
                    }
                }
            }
        }
        let mut labels = Vec::new();
        for v in 0..self.node_count() {
            match (self.kinds[v], self.labels[v]) {
                (NodeType::Leaf, Some(l)) => labels.push(l),
                (NodeType::Leaf, None) => out.push(Violation::LabelBijection(format!("leaf {v} is unlabeled"))),
                (_, Some(l)) => out.push(Violation::LabelBijection(format!("non-leaf {v} carries label {l}"))),
                _ => {}
            }
        }
        labels.sort_unstable();
        let n = labels.len() as u32;
        for w in labels.windows(2) {
            if w[0] == w[1] {
                out.push(Violation::LabelBijection(format!("duplicate label {}", w[0])));
            }
        }
        if let Some(&l) = labels.iter().find(|&&l| l == 0 || l > n) {
            out.push(Violation::LabelBijection(format!("label {l} outside 1..={n}")));
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Drop nodes that are not reachable from the root and renumber densely.
    pub fn compact(&self) -> PhyloNetwork {
        let Some(r) = self.root() else {
            return self.clone();
        };
        let mut seen = vec![false; self.node_count()];
        let mut order = Vec::new();
        let mut stack = vec![r];
        while let Some(v) = stack.pop() {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            order.push(v);
            for &c in self.children[v].iter().rev() {
                stack.push(c);
            }
        }
        let mut map = vec![usize::MAX; self.node_count()];
        let mut out = PhyloNetwork::new();
        for &v in &order {
            map[v] = out.add_node(self.kinds[v], self.labels[v]);
        }
        for &v in &order {
            for &c in &self.children[v] {
                out.add_edge(map[v], map[c]);
            }
        }
        out
    }

    /// Label-preserving isomorphism test by direct backtracking search.
    ///
    /// Exponential in the worst case; intended for small networks.
    pub fn structurally_equal(&self, other: &PhyloNetwork) -> bool {
        if self.node_count() != other.node_count() || self.edges().len() != other.edges().len() {
            return false;
        }
        let (Some(ra), Some(rb)) = (self.root(), other.root()) else {
            return false;
        };
        let map = vec![usize::MAX; self.node_count()];
        let inv = vec![usize::MAX; other.node_count()];
        self.iso_search(other, map, inv, vec![(ra, rb)])
    }

    fn iso_search(
        &self,
        other: &PhyloNetwork,
        mut map: Vec<usize>,
        mut inv: Vec<usize>,
        mut pending: Vec<(usize, usize)>,
    ) -> bool {
        while let Some((a, b)) = pending.pop() {
            if map[a] != usize::MAX || inv[b] != usize::MAX {
                if map[a] == b && inv[b] == a {
                    continue;
                }
                return false;
            }
            if self.kinds[a] != other.kinds[b]
                || self.labels[a] != other.labels[b]
                || self.children[a].len() != other.children[b].len()
                || self.parents[a].len() != other.parents[b].len()
            {
                return false;
            }
            map[a] = b;
            inv[b] = a;
            let (ca, cb) = (&self.children[a], &other.children[b]);
            if ca.len() == 2 {
                for perm in [[cb[0], cb[1]], [cb[1], cb[0]]] {
                    let mut p = pending.clone();
                    p.push((ca[0], perm[0]));
                    p.push((ca[1], perm[1]));
                    if self.iso_search(other, map.clone(), inv.clone(), p) {
                        return true;
                    }
                }
                return false;
            }
            for (x, y) in ca.iter().zip(cb) {
                pending.push((*x, *y));
            }
        }
        true
    }
}

/// Read-only view of a network, shared by [`PhyloNetwork`] and the compact
/// representation used during enumeration.
pub trait NetView {
    fn node_count(&self) -> usize;
    fn kind(&self, v: usize) -> NodeType;
    fn label(&self, v: usize) -> Option<u32>;
    fn child_count(&self, v: usize) -> usize;
    fn child(&self, v: usize, i: usize) -> usize;
    fn parent_count(&self, v: usize) -> usize;
    fn parent(&self, v: usize, i: usize) -> usize;

    fn root(&self) -> Option<usize> {
        (0..self.node_count()).find(|&v| self.kind(v) == NodeType::Root)
    }
}

impl NetView for PhyloNetwork {
    fn node_count(&self) -> usize {
        self.kinds.len()
    }
    fn kind(&self, v: usize) -> NodeType {
        self.kinds[v]
    }
    fn label(&self, v: usize) -> Option<u32> {
        self.labels[v]
    }
    fn child_count(&self, v: usize) -> usize {
        self.children[v].len()
    }
    fn child(&self, v: usize, i: usize) -> usize {
        self.children[v][i]
    }
    fn parent_count(&self, v: usize) -> usize {
        self.parents[v].len()
    }
    fn parent(&self, v: usize, i: usize) -> usize {
        self.parents[v][i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cherry() -> PhyloNetwork {
        let mut n = PhyloNetwork::new();
        let r = n.add_node(NodeType::Root, None);
        let t = n.add_node(NodeType::Tree, None);
        let a = n.add_leaf(1);
        let b = n.add_leaf(2);
        n.add_edge(r, t);
        n.add_edge(t, a);
        n.add_edge(t, b);
        n
    }

    #[test]
    fn single_leaf_is_valid() {
        assert!(PhyloNetwork::single_leaf(1).is_valid());
    }

    #[test]
    fn two_cycle_is_reported() {
        let mut n = cherry();
        let x = n.add_node(NodeType::Tree, None);
        let y = n.add_node(NodeType::Tree, None);
        n.add_edge(x, y);
        n.add_edge(y, x);
        assert!(n.validate().contains(&Violation::Acyclicity));
    }

    #[test]
    fn duplicate_label_is_reported() {
        let mut n = cherry();
        let b = n.leaf_with_label(2).unwrap();
        n.set_label(b, 1);
        assert!(n
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::LabelBijection(m) if m.contains("duplicate"))));
    }

    #[test]
    fn subdivision_preserves_validity_of_degrees() {
        let mut n = cherry();
        let t = n.children(0)[0];
        let a = n.leaf_with_label(1).unwrap();
        let w = n.subdivide(t, a, NodeType::Tree);
        let l = n.add_leaf(3);
        n.add_edge(w, l);
        assert!(n.is_valid(), "{:?}", n.validate());
    }

    #[test]
    fn isomorphism_ignores_child_order() {
        let a = cherry();
        let mut b = PhyloNetwork::new();
        let r = b.add_node(NodeType::Root, None);
        let x = b.add_leaf(2);
        let t = b.add_node(NodeType::Tree, None);
        let y = b.add_leaf(1);
        b.add_edge(r, t);
        b.add_edge(t, x);
        b.add_edge(t, y);
        assert!(a.structurally_equal(&b));
        let mut c = b.clone();
        c.relabel(|l| 3 - l);
        assert!(a.structurally_equal(&c));
        let mut d = cherry();
        let t = d.children(0)[0];
        let leaf = d.leaf_with_label(1).unwrap();
        let w = d.subdivide(t, leaf, NodeType::Tree);
        let l = d.add_leaf(3);
        d.add_edge(w, l);
        assert!(!a.structurally_equal(&d));
    }
}
