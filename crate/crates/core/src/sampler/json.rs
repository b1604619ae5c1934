//! Edge-list JSON: `{"nodes":[{"id","type","label"?}],"edges":[[from,to]]}`.

use serde::{Deserialize, Serialize};

use super::newick::canonical_preorder;
use crate::network::{NetView, NodeType, PhyloNetwork, Violation};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct JsonNode {
    pub id: usize,
    #[serde(rename = "type")]
    pub kind: NodeType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct EdgeList {
    pub nodes: Vec<JsonNode>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("edge endpoint {0} is not a declared node id")]
    UnknownNode(usize),
    #[error("node id {0} declared twice")]
    DuplicateId(usize),
    #[error("invalid network: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// Nodes renumbered in canonical preorder, so equal networks give equal output.
pub fn to_edge_list<N: NetView + ?Sized>(net: &N) -> EdgeList {
    let order = canonical_preorder(net);
    let mut id = vec![usize::MAX; net.node_count()];
    for (i, &v) in order.iter().enumerate() {
        id[v] = i;
    }
    let nodes = order
        .iter()
        .enumerate()
        .map(|(i, &v)| JsonNode {
            id: i,
            kind: net.kind(v),
            label: net.label(v),
        })
        .collect();
    let mut edges: Vec<[usize; 2]> = order
        .iter()
        .flat_map(|&v| (0..net.child_count(v)).map(move |j| (v, j)))
        .map(|(v, j)| [id[v], id[net.child(v, j)]])
        .collect();
    edges.sort_unstable();
    EdgeList { nodes, edges }
}

pub fn to_edge_json<N: NetView + ?Sized>(net: &N) -> String {
    serde_json::to_string(&to_edge_list(net)).expect("plain data serializes")
}

pub fn from_edge_list(list: &EdgeList) -> Result<PhyloNetwork, JsonError> {
    let mut net = PhyloNetwork::new();
    let mut map = std::collections::HashMap::new();
    for node in &list.nodes {
        let v = net.add_node(node.kind, node.label);
        if map.insert(node.id, v).is_some() {
            return Err(JsonError::DuplicateId(node.id));
        }
    }
    for &[a, b] in &list.edges {
        let from = *map.get(&a).ok_or(JsonError::UnknownNode(a))?;
        let to = *map.get(&b).ok_or(JsonError::UnknownNode(b))?;
        net.add_edge(from, to);
    }
    let violations = net.validate();
    if violations.is_empty() {
        Ok(net)
    } else {
        Err(JsonError::Invalid(violations))
    }
}

pub fn parse_edge_json(text: &str) -> Result<PhyloNetwork, JsonError> {
    let list: EdgeList = serde_json::from_str(text).map_err(|e| JsonError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    from_edge_list(&list)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::newick::{parse_newick, to_newick};

    #[test]
    fn round_trip_through_json() {
        let net = parse_newick("((1,(2)#H1),(#H1,3));").unwrap();
        let text = to_edge_json(&net);
        let back = parse_edge_json(&text).unwrap();
        assert_eq!(to_newick(&back), to_newick(&net));
        assert_eq!(to_edge_json(&back), text);
        assert!(text.starts_with(r#"{"nodes":[{"id":0,"type":"root"}"#));
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(parse_edge_json("{\"nodes\":["), Err(JsonError::Syntax { .. })));
        let bad = r#"{"nodes":[{"id":0,"type":"root"},{"id":1,"type":"leaf","label":1}],"edges":[[0,2]]}"#;
        assert!(matches!(parse_edge_json(bad), Err(JsonError::UnknownNode(2))));
        let cyc = r#"{"nodes":[{"id":0,"type":"root"},{"id":1,"type":"tree"},{"id":2,"type":"tree"},{"id":3,"type":"leaf","label":1}],"edges":[[0,1],[1,2],[2,1],[2,3]]}"#;
        match parse_edge_json(cyc) {
            Err(JsonError::Invalid(v)) => assert!(v.iter().any(|x| x.to_string().contains("acyclicity"))),
            other => panic!("{other:?}"),
        }
    }
}
