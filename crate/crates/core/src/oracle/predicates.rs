//! Class-membership predicates.

use crate::network::{NetView, NodeType};

fn is_tree_or_leaf(kind: NodeType) -> bool {
    matches!(kind, NodeType::Tree | NodeType::Leaf)
}

/// Every non-leaf node has at least one child that is a tree node or a leaf.
pub fn is_tree_child<N: NetView + ?Sized>(net: &N) -> bool {
    (0..net.node_count()).all(|v| {
        net.kind(v) == NodeType::Leaf
            || (0..net.child_count(v)).any(|i| is_tree_or_leaf(net.kind(net.child(v, i))))
    })
}

/// The tree nodes met walking up from `v` while the current node is a tree node.
///
/// A tree node has one parent, so the walk is a single chain.
fn tree_chain<N: NetView + ?Sized>(net: &N, mut v: usize) -> Vec<usize> {
    let mut out = Vec::new();
    while net.kind(v) == NodeType::Tree {
        out.push(v);
        v = net.parent(v, 0);
    }
    out
}

/// The tree-node origin of a tree cycle through reticulation `r`, if any.
///
/// A tree cycle needs two paths to `r` through tree nodes only, so both
/// paths climb the unique tree-node chains above the parents of `r`; the
/// cycle exists iff the chains meet, and the first meeting point makes the
/// two paths edge-disjoint.
pub fn tree_cycle_origin<N: NetView + ?Sized>(net: &N, r: usize) -> Option<usize> {
    if net.parent_count(r) != 2 {
        return None;
    }
    let a = tree_chain(net, net.parent(r, 0));
    let b = tree_chain(net, net.parent(r, 1));
    a.into_iter().find(|x| b.contains(x))
}

/// Every reticulation lies on a tree cycle.
pub fn is_galled<N: NetView + ?Sized>(net: &N) -> bool {
    (0..net.node_count())
        .filter(|&v| net.kind(v) == NodeType::Reticulation)
        .all(|r| tree_cycle_origin(net, r).is_some())
}

/// Every reticulation's unique child is a leaf.
pub fn is_one_component<N: NetView + ?Sized>(net: &N) -> bool {
    (0..net.node_count())
        .filter(|&v| net.kind(v) == NodeType::Reticulation)
        .all(|r| net.child_count(r) == 1 && net.kind(net.child(r, 0)) == NodeType::Leaf)
}

pub fn is_gtc<N: NetView + ?Sized>(net: &N) -> bool {
    is_tree_child(net) && is_galled(net)
}

pub fn reticulation_count<N: NetView + ?Sized>(net: &N) -> usize {
    (0..net.node_count())
        .filter(|&v| net.kind(v) == NodeType::Reticulation)
        .count()
}

/// Reticulations whose child is not a leaf.
pub fn no_leaf_child_count<N: NetView + ?Sized>(net: &N) -> usize {
    (0..net.node_count())
        .filter(|&v| net.kind(v) == NodeType::Reticulation)
        .filter(|&r| net.child_count(r) != 1 || net.kind(net.child(r, 0)) != NodeType::Leaf)
        .count()
}
