//! Serialization formats and uniform random generation.

pub mod json;
pub mod newick;
pub mod recursive;

pub use json::{parse_edge_json, to_edge_json, to_edge_list, EdgeList, JsonError};
pub use newick::{parse_newick, to_newick, ParseError};
pub use recursive::{
    draw_rng, sample_gtc, sample_plan, sample_retic_count, DecompressionPlan, PlanNode, SampleError, SampleHeader,
    TABLE_VERSION,
};

use crate::network::PhyloNetwork;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Newick,
    EdgeJson,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "newick" => Ok(Format::Newick),
            "edge-json" => Ok(Format::EdgeJson),
            other => Err(format!("unknown format {other:?}; expected newick or edge-json")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error(transparent)]
    Newick(#[from] ParseError),
    #[error(transparent)]
    Json(#[from] JsonError),
}

pub fn serialize(net: &PhyloNetwork, format: Format) -> String {
    match format {
        Format::Newick => to_newick(net),
        Format::EdgeJson => to_edge_json(net),
    }
}

pub fn parse(text: &str, format: Format) -> Result<PhyloNetwork, FormatError> {
    match format {
        Format::Newick => Ok(parse_newick(text)?),
        Format::EdgeJson => Ok(parse_edge_json(text)?),
    }
}
