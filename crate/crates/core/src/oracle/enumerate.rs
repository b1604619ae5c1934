//! Exhaustive generation of small networks.
//!
//! Galled tree-child networks come from reverse cherry expansion: starting at
//! the one-leaf network, repeatedly attach a cherry (a new leaf inserted at
//! any label rank) or add a reticulated cherry between two pendant edges.
//! Every tree-child network reduces to a single leaf by cherry picking and
//! each reduction stays tree-child, so closing under the inverse moves while
//! keeping only tree-child intermediates reaches all of them. Duplicates are
//! removed by canonical string, and the galled filter is applied last.
//!
//! One-component networks at n = 6 are too many to hold, so they are visited
//! by reverse search instead: each network with k + 1 reticulations has one
//! designated reticulation edge whose deletion yields its parent at level k,
//! and a child is accepted only from that parent.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::predicates::{is_galled, is_one_component, is_tree_child, no_leaf_child_count, reticulation_count};
use crate::network::{NetView, NodeType, PhyloNetwork};
use crate::sampler::newick::{canonical_preorder, to_newick};
use crate::sampler::to_edge_json;

const CAP: usize = 32;
const NIL: u8 = u8::MAX;

/// A fixed-capacity copyable network used by the enumerators.
#[derive(Clone, Copy)]
pub struct Compact {
    len: u8,
    kind: [NodeType; CAP],
    label: [u8; CAP],
    ch: [[u8; 2]; CAP],
    par: [[u8; 2]; CAP],
}

impl Compact {
    pub fn single_leaf() -> Self {
        let mut c = Compact {
            len: 0,
            kind: [NodeType::Tree; CAP],
            label: [NIL; CAP],
            ch: [[NIL; 2]; CAP],
            par: [[NIL; 2]; CAP],
        };
        let r = c.push(NodeType::Root, NIL);
        let l = c.push(NodeType::Leaf, 1);
        c.link(r, l);
        c
    }

    fn push(&mut self, kind: NodeType, label: u8) -> usize {
        let v = self.len as usize;
        assert!(v < CAP, "compact network capacity exceeded");
        self.kind[v] = kind;
        self.label[v] = label;
        self.ch[v] = [NIL; 2];
        self.par[v] = [NIL; 2];
        self.len += 1;
        v
    }

    fn link(&mut self, a: usize, b: usize) {
        let slot = self.ch[a].iter().position(|&x| x == NIL).expect("child slot");
        self.ch[a][slot] = b as u8;
        let slot = self.par[b].iter().position(|&x| x == NIL).expect("parent slot");
        self.par[b][slot] = a as u8;
    }

    /// Replace edge a→b by a→m→b with a fresh node m, keeping slot positions.
    fn subdivide(&mut self, a: usize, b: usize, kind: NodeType) -> usize {
        let m = self.push(kind, NIL);
        for x in self.ch[a].iter_mut() {
            if *x == b as u8 {
                *x = m as u8;
                break;
            }
        }
        for x in self.par[b].iter_mut() {
            if *x == a as u8 {
                *x = m as u8;
                break;
            }
        }
        self.ch[m][0] = b as u8;
        self.par[m][0] = a as u8;
        m
    }

    fn leaf_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len as usize).filter(|&v| self.kind[v] == NodeType::Leaf)
    }

    fn pendant_parent(&self, leaf: usize) -> usize {
        self.par[leaf][0] as usize
    }

    /// The edges a→b of the network.
    fn edge_list(&self) -> Vec<(usize, usize)> {
        (0..self.len as usize)
            .flat_map(|a| (0..self.child_count(a)).map(move |i| (a, i)))
            .map(|(a, i)| (a, self.child(a, i)))
            .collect()
    }

    pub fn to_network(&self) -> PhyloNetwork {
        let mut net = PhyloNetwork::new();
        for v in 0..self.len as usize {
            net.add_node(self.kind[v], self.label(v));
        }
        for (a, b) in self.edge_list() {
            net.add_edge(a, b);
        }
        net
    }

    /// Attach a new leaf of rank `y` as a sibling of leaf node `x`.
    fn with_cherry(&self, x: usize, y: u8) -> Compact {
        let mut c = *self;
        for v in 0..c.len as usize {
            if c.kind[v] == NodeType::Leaf && c.label[v] >= y {
                c.label[v] += 1;
            }
        }
        let a = c.pendant_parent(x);
        let p = c.subdivide(a, x, NodeType::Tree);
        let l = c.push(NodeType::Leaf, y);
        c.link(p, l);
        c
    }

    /// Put a reticulation above leaf `y` fed from a new tree node above `x`.
    fn with_ret_cherry(&self, x: usize, y: usize) -> Compact {
        let mut c = *self;
        let qy = c.pendant_parent(y);
        let r = c.subdivide(qy, y, NodeType::Reticulation);
        let qx = c.pendant_parent(x);
        let p = c.subdivide(qx, x, NodeType::Tree);
        c.link(p, r);
        c
    }
}

impl NetView for Compact {
    fn node_count(&self) -> usize {
        self.len as usize
    }
    fn kind(&self, v: usize) -> NodeType {
        self.kind[v]
    }
    fn label(&self, v: usize) -> Option<u32> {
        (self.label[v] != NIL).then_some(self.label[v] as u32)
    }
    fn child_count(&self, v: usize) -> usize {
        self.ch[v].iter().take_while(|&&x| x != NIL).count()
    }
    fn child(&self, v: usize, i: usize) -> usize {
        self.ch[v][i] as usize
    }
    fn parent_count(&self, v: usize) -> usize {
        self.par[v].iter().take_while(|&&x| x != NIL).count()
    }
    fn parent(&self, v: usize, i: usize) -> usize {
        self.par[v][i] as usize
    }
    fn root(&self) -> Option<usize> {
        (self.len > 0).then_some(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumError {
    #[error("enumeration at n = {n} exceeds the cap of {max}{hint}")]
    SizeCap { n: usize, max: usize, hint: &'static str },
}

/// Largest n for [`enumerate_gtc`] without the long-running opt-in.
pub const GTC_DEFAULT_MAX: usize = 4;
pub const GTC_LONG_MAX: usize = 5;
pub const ONE_COMPONENT_MAX: usize = 6;
/// Largest n for which one-component networks are returned as a list.
pub const ONE_COMPONENT_LIST_MAX: usize = 5;

/// All tree-child networks on `{1..n}`, deduplicated, keyed by canonical string.
fn tree_child_closure(n: usize) -> HashMap<String, Compact> {
    let mut level: HashMap<String, Compact> = HashMap::new();
    let start = Compact::single_leaf();
    level.insert(to_newick(&start), start);
    for m in 1..=n {
        if m > 1 {
            let mut next = HashMap::new();
            for net in level.values() {
                let leaves: Vec<usize> = net.leaf_nodes().collect();
                for y in 1..=m as u8 {
                    for &x in &leaves {
                        let c = net.with_cherry(x, y);
                        next.entry(to_newick(&c)).or_insert(c);
                    }
                }
            }
            level = next;
        }
        let mut queue: Vec<Compact> = level.values().copied().collect();
        while let Some(net) = queue.pop() {
            let leaves: Vec<usize> = net.leaf_nodes().collect();
            for &x in &leaves {
                for &y in &leaves {
                    if x == y {
                        continue;
                    }
                    let c = net.with_ret_cherry(x, y);
                    if !is_tree_child(&c) {
                        continue;
                    }
                    let key = to_newick(&c);
                    if !level.contains_key(&key) {
                        level.insert(key, c);
                        queue.push(c);
                    }
                }
            }
        }
    }
    level
}

fn gtc_compacts(n: usize, long_running: bool) -> Result<Vec<(String, Compact)>, EnumError> {
    let max = if long_running { GTC_LONG_MAX } else { GTC_DEFAULT_MAX };
    if n == 0 || n > max {
        return Err(EnumError::SizeCap {
            n,
            max,
            hint: if long_running { "" } else { " (n = 5 needs the long-running flag)" },
        });
    }
    let mut out: Vec<(String, Compact)> = tree_child_closure(n)
        .into_iter()
        .filter(|(_, c)| is_galled(c))
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Every galled tree-child network on `{1..n}`, sorted by canonical string.
pub fn enumerate_gtc(n: usize) -> Result<Vec<PhyloNetwork>, EnumError> {
    enumerate_gtc_with(n, false)
}

/// As [`enumerate_gtc`]; `long_running` raises the cap to n = 5.
pub fn enumerate_gtc_with(n: usize, long_running: bool) -> Result<Vec<PhyloNetwork>, EnumError> {
    Ok(gtc_compacts(n, long_running)?
        .into_iter()
        .map(|(_, c)| c.to_network())
        .collect())
}

/// Tree-child networks that are not galled, a source of Prop-style counterexamples.
pub fn enumerate_tree_child_not_galled(n: usize) -> Result<Vec<PhyloNetwork>, EnumError> {
    if n == 0 || n > GTC_DEFAULT_MAX {
        return Err(EnumError::SizeCap {
            n,
            max: GTC_DEFAULT_MAX,
            hint: "",
        });
    }
    let mut out: Vec<(String, Compact)> = tree_child_closure(n)
        .into_iter()
        .filter(|(_, c)| !is_galled(c))
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, c)| c.to_network()).collect())
}

/// All phylogenetic trees on `{1..n}`, each once, by inserting leaf m + 1 on every edge.
fn for_each_tree(n: usize, f: &mut impl FnMut(&Compact)) {
    fn go(t: &Compact, m: usize, n: usize, f: &mut impl FnMut(&Compact)) {
        if m == n {
            f(t);
            return;
        }
        for (a, b) in t.edge_list() {
            let mut c = *t;
            let p = c.subdivide(a, b, NodeType::Tree);
            let l = c.push(NodeType::Leaf, (m + 1) as u8);
            c.link(p, l);
            go(&c, m + 1, n, f);
        }
    }
    go(&Compact::single_leaf(), 1, n, f);
}

/// The designated reticulation edge of a one-component network: the
/// reticulation over the largest label, entered from whichever parent comes
/// first in canonical preorder. Returns (parent, reticulation).
fn designated_edge(c: &Compact) -> Option<(usize, usize)> {
    let r = (0..c.node_count())
        .filter(|&v| c.kind(v) == NodeType::Reticulation)
        .max_by_key(|&r| c.label(c.child(r, 0)))?;
    let (a, b) = (c.parent(r, 0), c.parent(r, 1));
    let pre = canonical_preorder(c);
    let pos = |v: usize| pre.iter().position(|&x| x == v);
    Some(if pos(a) < pos(b) { (a, r) } else { (b, r) })
}

fn max_ret_leaf(c: &Compact) -> Option<u8> {
    (0..c.node_count())
        .filter(|&v| c.kind(v) == NodeType::Reticulation)
        .map(|r| c.label[c.child(r, 0)])
        .max()
}

fn one_component_children(net: &Compact, f: &mut impl FnMut(&Compact)) {
    let floor = max_ret_leaf(net);
    let edges = net.edge_list();
    for y in net.leaf_nodes() {
        let q = net.pendant_parent(y);
        if net.kind(q) != NodeType::Tree || floor.is_some_and(|m| net.label[y] < m) {
            continue;
        }
        // q keeps y's sibling; it must not be a reticulation
        let sib = (0..2).map(|i| net.child(q, i)).find(|&s| s != y).expect("binary tree node");
        if net.kind(sib) == NodeType::Reticulation {
            continue;
        }
        for &(g, c) in &edges {
            if (g, c) == (q, y)
                || net.kind(g) == NodeType::Reticulation
                || net.kind(c) == NodeType::Reticulation
            {
                continue;
            }
            let mut ch = *net;
            let r = ch.subdivide(q, y, NodeType::Reticulation);
            let p = ch.subdivide(g, c, NodeType::Tree);
            ch.link(p, r);
            if designated_edge(&ch) == Some((p, r)) {
                f(&ch);
            }
        }
    }
}

/// Visit every one-component tree-child network on `{1..n}` exactly once.
pub fn for_each_one_component(n: usize, mut f: impl FnMut(&Compact)) -> Result<(), EnumError> {
    if n == 0 || n > ONE_COMPONENT_MAX {
        return Err(EnumError::SizeCap {
            n,
            max: ONE_COMPONENT_MAX,
            hint: "",
        });
    }
    fn go(net: &Compact, f: &mut impl FnMut(&Compact)) {
        f(net);
        one_component_children(net, &mut |c: &Compact| go(c, f));
    }
    for_each_tree(n, &mut |t: &Compact| go(t, &mut f));
    Ok(())
}

/// Counts of one-component tree-child networks on `{1..n}` by reticulation number.
pub fn count_one_component(n: usize) -> Result<Vec<u64>, EnumError> {
    let mut counts = vec![0u64; n];
    for_each_one_component(n, |c| counts[reticulation_count(c)] += 1)?;
    Ok(counts)
}

/// One-component tree-child networks as a list (n ≤ 5; use the visitor at n = 6).
pub fn enumerate_one_component(n: usize) -> Result<Vec<PhyloNetwork>, EnumError> {
    if n > ONE_COMPONENT_LIST_MAX {
        return Err(EnumError::SizeCap {
            n,
            max: ONE_COMPONENT_LIST_MAX,
            hint: " (use for_each_one_component or count_one_component for n = 6)",
        });
    }
    let mut out = Vec::new();
    for_each_one_component(n, |c| out.push(c.to_network()))?;
    Ok(out)
}

/// The oracle corpus for one size: every network with its (k, i) statistics.
pub struct Corpus {
    pub n: usize,
    pub networks: Vec<PhyloNetwork>,
}

impl Corpus {
    pub fn gtc(n: usize) -> Result<Self, EnumError> {
        Ok(Corpus {
            n,
            networks: enumerate_gtc(n)?,
        })
    }

    /// Counts keyed by (k, i).
    pub fn counts(&self) -> BTreeMap<(usize, usize), u64> {
        let mut m = BTreeMap::new();
        for net in &self.networks {
            *m.entry((reticulation_count(net), no_leaf_child_count(net))).or_default() += 1;
        }
        m
    }

    pub fn counts_by_k(&self) -> Vec<u64> {
        let mut v = vec![0u64; self.n.max(1)];
        for ((k, _), c) in self.counts() {
            v[k] += c;
        }
        v
    }

    /// One edge-list JSON document per line.
    pub fn to_json_lines(&self) -> String {
        let mut s = String::new();
        for net in &self.networks {
            s.push_str(&to_edge_json(net));
            s.push('\n');
        }
        s
    }

    /// `n,k,i,count` rows for every occupied cell.
    pub fn summary_csv(&self) -> String {
        let mut s = String::from("n,k,i,count\n");
        for ((k, i), c) in self.counts() {
            s.push_str(&format!("{},{k},{i},{c}\n", self.n));
        }
        s
    }
}

/// Canonical strings of a list, checking they are pairwise distinct.
pub fn distinct_canonical_forms(nets: &[PhyloNetwork]) -> bool {
    let set: HashSet<String> = nets.iter().map(to_newick).collect();
    set.len() == nets.len()
}

/// Whether a network lies in the one-component tree-child class.
pub fn is_one_component_tree_child<N: NetView + ?Sized>(net: &N) -> bool {
    is_tree_child(net) && is_one_component(net)
}
