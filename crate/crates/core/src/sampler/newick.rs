//! Extended Newick with `#Hi` reticulation tags, in a canonical child order.
//!
//! Children are ordered by the smallest leaf label reachable from them
//! without entering a reticulation. In a tree-child network siblings never
//! tie under this key, so the output is a canonical form for labeled
//! networks; ties (possible only outside the tree-child class) fall back to
//! comparing the unfolded subtrees.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use crate::network::{NetView, NodeType, PhyloNetwork, Violation};

const NONE: u32 = u32::MAX;

/// Child-ordering keys for every node.
pub(crate) struct Order {
    tmin: Vec<u32>,
}

impl Order {
    pub(crate) fn new<N: NetView + ?Sized>(net: &N) -> Self {
        let n = net.node_count();
        let mut tmin = vec![NONE; n];
        let mut done = vec![false; n];
        // iterative post-order to stay off the call stack for big samples
        for start in 0..n {
            if done[start] {
                continue;
            }
            let mut stack = vec![(start, false)];
            while let Some((v, expanded)) = stack.pop() {
                if done[v] {
                    continue;
                }
                if !expanded {
                    stack.push((v, true));
                    for i in 0..net.child_count(v) {
                        let c = net.child(v, i);
                        if !done[c] {
                            stack.push((c, false));
                        }
                    }
                    continue;
                }
                let val = match net.kind(v) {
                    NodeType::Leaf => net.label(v).unwrap_or(NONE),
                    NodeType::Tree | NodeType::Root => (0..net.child_count(v))
                        .map(|i| net.child(v, i))
                        .filter(|&c| net.kind(c) != NodeType::Reticulation)
                        .map(|c| tmin[c])
                        .min()
                        .unwrap_or(NONE),
                    NodeType::Reticulation => (0..net.child_count(v))
                        .map(|i| tmin[net.child(v, i)])
                        .min()
                        .unwrap_or(NONE),
                };
                tmin[v] = val;
                done[v] = true;
            }
        }
        Order { tmin }
    }

    /// Children of `v` in canonical order.
    pub(crate) fn sorted_children<N: NetView + ?Sized>(&self, net: &N, v: usize) -> Vec<usize> {
        let mut cs: Vec<usize> = (0..net.child_count(v)).map(|i| net.child(v, i)).collect();
        let key = |c: usize| {
            if net.kind(c) == NodeType::Reticulation {
                (0..net.child_count(c))
                    .map(|i| self.tmin[net.child(c, i)])
                    .min()
                    .unwrap_or(NONE)
            } else {
                self.tmin[c]
            }
        };
        cs.sort_by(|&a, &b| match key(a).cmp(&key(b)) {
            Ordering::Equal if a != b => unfold(net, a).cmp(&unfold(net, b)),
            o => o,
        });
        cs
    }
}

/// Tag-free expansion of the subtree below `v` (exponential in nesting depth).
fn unfold<N: NetView + ?Sized>(net: &N, v: usize) -> String {
    match net.kind(v) {
        NodeType::Leaf => net.label(v).map(|l| l.to_string()).unwrap_or_default(),
        kind => {
            let mut parts: Vec<String> = (0..net.child_count(v)).map(|i| unfold(net, net.child(v, i))).collect();
            parts.sort();
            let (open, close) = if kind == NodeType::Reticulation { ("[", "]") } else { ("(", ")") };
            format!("{open}{}{close}", parts.join(","))
        }
    }
}

/// Canonical extended Newick string, ending in `;`.
pub fn to_newick<N: NetView + ?Sized>(net: &N) -> String {
    let order = Order::new(net);
    let mut out = String::new();
    let mut tags: HashMap<usize, usize> = HashMap::new();
    let Some(root) = net.root() else {
        return ";".into();
    };
    let tops = order.sorted_children(net, root);
    match tops.as_slice() {
        [only] => write_node(net, &order, *only, &mut tags, &mut out),
        _ => {
            out.push('(');
            for (i, &c) in tops.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_node(net, &order, c, &mut tags, &mut out);
            }
            out.push(')');
        }
    }
    out.push(';');
    out
}

fn write_node<N: NetView + ?Sized>(
    net: &N,
    order: &Order,
    v: usize,
    tags: &mut HashMap<usize, usize>,
    out: &mut String,
) {
    // explicit stack: (node, phase); phase 0 opens, phase 1 closes
    enum Step {
        Visit(usize),
        Text(&'static str),
        Tag(usize),
    }
    let mut stack = vec![Step::Visit(v)];
    while let Some(step) = stack.pop() {
        match step {
            Step::Text(t) => out.push_str(t),
            Step::Tag(id) => {
                let _ = write!(out, "#H{id}");
            }
            Step::Visit(v) => match net.kind(v) {
                NodeType::Leaf => {
                    let _ = write!(out, "{}", net.label(v).unwrap_or(0));
                }
                kind => {
                    if kind == NodeType::Reticulation {
                        if let Some(id) = tags.get(&v) {
                            let _ = write!(out, "#H{id}");
                            continue;
                        }
                        let id = tags.len() + 1;
                        tags.insert(v, id);
                        stack.push(Step::Tag(id));
                    }
                    let cs = order.sorted_children(net, v);
                    stack.push(Step::Text(")"));
                    for (i, &c) in cs.iter().enumerate().rev() {
                        stack.push(Step::Visit(c));
                        if i > 0 {
                            stack.push(Step::Text(","));
                        }
                    }
                    out.push('(');
                }
            },
        }
    }
}

/// Canonical preorder of the nodes (root first), following the Newick traversal.
pub fn canonical_preorder<N: NetView + ?Sized>(net: &N) -> Vec<usize> {
    let order = Order::new(net);
    let mut seen = vec![false; net.node_count()];
    let mut out = Vec::with_capacity(net.node_count());
    let Some(root) = net.root() else {
        return out;
    };
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        out.push(v);
        for c in order.sorted_children(net, v).into_iter().rev() {
            if !seen[c] {
                stack.push(c);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("invalid network: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    net: PhyloNetwork,
    tagged: HashMap<u32, (usize, bool)>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u32, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii digits")
            .parse()
            .or_else(|_| {
                self.pos = start;
                self.err("number out of range")
            })
    }

    fn tag(&mut self) -> Result<Option<u32>, ParseError> {
        if self.peek() != Some(b'#') {
            return Ok(None);
        }
        self.pos += 1;
        if self.s.get(self.pos) != Some(&b'H') {
            return self.err("expected 'H' after '#'");
        }
        self.pos += 1;
        self.number().map(Some)
    }

    fn reticulation(&mut self, id: u32) -> usize {
        if let Some(&(v, _)) = self.tagged.get(&id) {
            return v;
        }
        let v = self.net.add_node(NodeType::Reticulation, None);
        self.tagged.insert(id, (v, false));
        v
    }

    /// Parse one subtree and return its node.
    fn subtree(&mut self) -> Result<usize, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let mut kids = vec![self.subtree()?];
                loop {
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                            kids.push(self.subtree()?);
                        }
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        Some(_) => return self.err("expected ',' or ')'"),
                        None => return self.err("unbalanced parentheses"),
                    }
                }
                if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    return self.err("internal node labels are not supported");
                }
                let at = self.pos;
                let v = match self.tag()? {
                    Some(id) => {
                        let v = self.reticulation(id);
                        let entry = self.tagged.get_mut(&id).expect("just inserted");
                        if entry.1 {
                            self.pos = at;
                            return self.err(format!("reticulation #H{id} defined twice"));
                        }
                        entry.1 = true;
                        v
                    }
                    None => self.net.add_node(NodeType::Tree, None),
                };
                for k in kids {
                    self.net.add_edge(v, k);
                }
                Ok(v)
            }
            Some(b'#') => {
                let id = self.tag()?.expect("peeked '#'");
                Ok(self.reticulation(id))
            }
            Some(c) if c.is_ascii_digit() => {
                let l = self.number()?;
                if self.peek() == Some(b'#') {
                    return self.err("a leaf cannot carry a reticulation tag");
                }
                Ok(self.net.add_leaf(l))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse extended Newick produced by [`to_newick`] (or any equivalent layout).
pub fn parse_newick(text: &str) -> Result<PhyloNetwork, ParseError> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
        net: PhyloNetwork::new(),
        tagged: HashMap::new(),
    };
    let root = p.net.add_node(NodeType::Root, None);
    let top = p.subtree()?;
    p.net.add_edge(root, top);
    if p.peek() != Some(b';') {
        return p.err("expected ';'");
    }
    p.pos += 1;
    if p.peek().is_some() {
        return p.err("trailing input after ';'");
    }
    if let Some((id, _)) = p.tagged.iter().find(|(_, (_, defined))| !defined) {
        return Err(ParseError::Syntax {
            offset: text.len(),
            message: format!("reticulation #H{id} is referenced but never defined"),
        });
    }
    let violations = p.net.validate();
    if !violations.is_empty() {
        return Err(ParseError::Invalid(violations));
    }
    Ok(p.net)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaf_and_cherry() {
        assert_eq!(to_newick(&PhyloNetwork::single_leaf(1)), "1;");
        let c = parse_newick("(2,1);").unwrap();
        assert_eq!(to_newick(&c), "(1,2);");
        assert_eq!(to_newick(&parse_newick("1;").unwrap()), "1;");
    }

    #[test]
    fn reticulation_round_trip() {
        let text = "((1,(2)#H1),#H1);";
        let net = parse_newick(text).unwrap();
        assert_eq!(net.reticulation_count(), 1);
        let out = to_newick(&net);
        assert!(parse_newick(&out).unwrap().structurally_equal(&net));
        assert_eq!(to_newick(&parse_newick(&out).unwrap()), out);
    }

    #[test]
    fn malformed_input_reports_offset() {
        match parse_newick("((1,2);") {
            Err(ParseError::Syntax { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_newick("(1,#H2);"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_newick("(1,1);"), Err(ParseError::Invalid(_))));
    }
}
