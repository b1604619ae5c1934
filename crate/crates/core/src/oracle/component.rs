//! The component graph: tree-components contracted to vertices.

use std::collections::BTreeMap;

use crate::network::{NetView, NodeType};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentEdge {
    pub to: usize,
    /// Set when both reticulation edges into `to` leave the same component.
    pub arrow: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComponentVertex {
    /// Label of a terminal vertex whose component holds a single leaf.
    pub label: Option<u32>,
    /// Leaves hanging directly off this vertex.
    pub leaves: Vec<u32>,
    pub children: Vec<ComponentEdge>,
    /// Source component of each incoming reticulation edge, with repetition.
    pub parents: Vec<usize>,
}

impl ComponentVertex {
    /// Outdegree once arrows are erased and a double edge counts once.
    pub fn outdegree(&self) -> usize {
        self.leaves.len() + self.children.len()
    }

    pub fn arrows(&self) -> usize {
        self.children.iter().filter(|e| e.arrow).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentTree {
    pub vertices: Vec<ComponentVertex>,
    pub root: usize,
}

impl ComponentTree {
    /// Whether the arrow-erased graph is a (multiway) phylogenetic tree.
    pub fn is_phylogenetic_tree(&self) -> bool {
        let roots = self.vertices.iter().filter(|v| v.parents.is_empty()).count();
        if roots != 1 || !self.vertices[self.root].parents.is_empty() {
            return false;
        }
        let single_leaf = self.vertices.len() == 1 && self.vertices[0].label.is_some();
        self.vertices.iter().enumerate().all(|(i, v)| {
            let mut ps = v.parents.clone();
            ps.sort_unstable();
            ps.dedup();
            let parent_ok = i == self.root || ps.len() == 1;
            let degree_ok = v.label.is_some() || v.outdegree() >= 2 || single_leaf;
            // a labelled vertex is a tree leaf and must have nothing below it
            let leaf_ok = v.label.is_none() || v.outdegree() == 0;
            parent_ok && degree_ok && leaf_ok
        })
    }

    pub fn arrow_count(&self) -> usize {
        self.vertices.iter().map(ComponentVertex::arrows).sum()
    }

    /// Nested rendering, `*` marking arrowed edges; vertex children sorted.
    pub fn render(&self) -> String {
        fn go(t: &ComponentTree, v: usize) -> String {
            let x = &t.vertices[v];
            if let Some(l) = x.label {
                return l.to_string();
            }
            let mut parts: Vec<String> = x.leaves.iter().map(|l| l.to_string()).collect();
            for e in &x.children {
                let s = go(t, e.to);
                parts.push(if e.arrow { format!("*{s}") } else { s });
            }
            parts.sort();
            format!("[{}]", parts.join(","))
        }
        go(self, self.root)
    }
}

/// Build C(N) for a validated network.
pub fn component_graph<N: NetView + ?Sized>(net: &N) -> ComponentTree {
    let n = net.node_count();
    let root = net.root().expect("validated network has a root");
    // component index of every node, assigned top-down
    let mut comp = vec![usize::MAX; n];
    let mut heads = vec![root];
    comp[root] = 0;
    let mut stack = vec![root];
    let mut visited = vec![false; n];
    while let Some(v) = stack.pop() {
        if visited[v] {
            continue;
        }
        visited[v] = true;
        for i in 0..net.child_count(v) {
            let c = net.child(v, i);
            if net.kind(c) == NodeType::Reticulation {
                if comp[c] == usize::MAX {
                    comp[c] = heads.len();
                    heads.push(c);
                }
            } else {
                comp[c] = comp[v];
            }
            stack.push(c);
        }
    }
    let mut vertices = vec![ComponentVertex::default(); heads.len()];
    let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for v in 0..n {
        match net.kind(v) {
            NodeType::Leaf => {
                if let Some(l) = net.label(v) {
                    vertices[comp[v]].leaves.push(l);
                }
            }
            NodeType::Reticulation => {
                for i in 0..net.parent_count(v) {
                    let p = comp[net.parent(v, i)];
                    vertices[comp[v]].parents.push(p);
                    *edges.entry((p, comp[v])).or_default() += 1;
                }
            }
            _ => {}
        }
    }
    for ((from, to), mult) in edges {
        vertices[from].children.push(ComponentEdge { to, arrow: mult >= 2 });
    }
    for x in &mut vertices {
        x.leaves.sort_unstable();
        if x.children.is_empty() && x.leaves.len() == 1 {
            x.label = x.leaves.pop();
        }
    }
    ComponentTree { vertices, root: 0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::newick::parse_newick;

    #[test]
    fn cherry_is_one_vertex() {
        let c = component_graph(&parse_newick("(1,2);").unwrap());
        assert_eq!(c.vertices.len(), 1);
        assert_eq!(c.vertices[0].leaves, vec![1, 2]);
        assert!(c.is_phylogenetic_tree());
    }

    #[test]
    fn two_leaf_network_has_an_arrow() {
        let c = component_graph(&parse_newick("((1,(2)#H1),#H1);").unwrap());
        assert_eq!(c.render(), "[*2,1]");
        assert_eq!(c.arrow_count(), 1);
        assert!(c.is_phylogenetic_tree());
    }

    #[test]
    fn single_leaf() {
        let c = component_graph(&parse_newick("1;").unwrap());
        assert_eq!(c.vertices[0].label, Some(1));
        assert!(c.is_phylogenetic_tree());
    }
}
