//! Uniform galled tree-child networks by the recursive method.
//!
//! A draw follows the smallest-label recurrence of [`Totals`]: pick the root
//! component's plain-leaf count `m` and reticulation count `q` with weight
//! `L(m+q, q)·C(n, m)·P_q(n-m)`, a uniform `m`-set of plain labels, then peel
//! the `q` subnetworks off the remaining labels, the block holding the
//! smallest label first. The root component is a uniform member of the
//! `L(m+q, q)` class whose reticulation leaf `i` receives the block with the
//! `i`-th smallest minimum label.

use num_bigint::{BigUint, RandBigInt};
use num_traits::Zero;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::{cached_table, totals, EngineConfig, EngineError, Totals};
use crate::network::{NodeType, PhyloNetwork};
use crate::onecomp::{sample_one_component, LabelModel};

/// Version tag written into sample headers; bump when the draw procedure changes.
pub const TABLE_VERSION: &str = "gtc-recurrence-1";

/// One node of a decompression plan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanNode {
    Leaf(u32),
    Component {
        /// Labels of the component's plain leaves, increasing.
        plain: Vec<u32>,
        /// One-component network whose leaves `1..=q` sit below reticulations
        /// and `q+1..` are the plain leaves in order.
        shape: PhyloNetwork,
        /// Subnetworks hung below reticulation leaves `1..=q`, by increasing
        /// minimum label.
        below: Vec<PlanNode>,
    },
}

impl PlanNode {
    pub fn labels(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out.sort_unstable();
        out
    }

    fn collect(&self, out: &mut Vec<u32>) {
        match self {
            PlanNode::Leaf(l) => out.push(*l),
            PlanNode::Component { plain, below, .. } => {
                out.extend(plain);
                for b in below {
                    b.collect(out);
                }
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            PlanNode::Leaf(_) => 1,
            PlanNode::Component { plain, below, .. } => plain.len() + below.iter().map(PlanNode::size).sum::<usize>(),
        }
    }

    /// Total reticulations over all components.
    pub fn reticulations(&self) -> usize {
        match self {
            PlanNode::Leaf(_) => 0,
            PlanNode::Component { below, .. } => below.len() + below.iter().map(PlanNode::reticulations).sum::<usize>(),
        }
    }

    /// Reticulations whose attached subnetwork is not a single leaf.
    pub fn no_leaf_child(&self) -> usize {
        match self {
            PlanNode::Leaf(_) => 0,
            PlanNode::Component { below, .. } => below
                .iter()
                .map(|b| usize::from(!matches!(b, PlanNode::Leaf(_))) + b.no_leaf_child())
                .sum(),
        }
    }

    fn min_label(&self) -> u32 {
        match self {
            PlanNode::Leaf(l) => *l,
            PlanNode::Component { plain, below, .. } => {
                plain.iter().copied().chain(below.iter().map(PlanNode::min_label)).min().expect("non-empty")
            }
        }
    }

    /// Checks the structural invariants of a plan; returns the first failure.
    pub fn check(&self) -> Result<(), String> {
        let PlanNode::Component { plain, shape, below } = self else {
            return Ok(());
        };
        let q = below.len();
        if plain.is_empty() {
            return Err("component without a plain leaf".into());
        }
        if shape.size() != q + plain.len() || shape.reticulation_count() != q {
            return Err(format!("shape has size {} and {} reticulations", shape.size(), shape.reticulation_count()));
        }
        if !plain.windows(2).all(|w| w[0] < w[1]) {
            return Err("plain labels not increasing".into());
        }
        let mins: Vec<u32> = below.iter().map(PlanNode::min_label).collect();
        if !mins.windows(2).all(|w| w[0] < w[1]) {
            return Err("blocks not ordered by minimum label".into());
        }
        below.iter().try_for_each(PlanNode::check)
    }
}

/// A full plan: the tree of components with all label choices made.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompressionPlan {
    pub root: PlanNode,
}

impl DecompressionPlan {
    pub fn realize(&self) -> PhyloNetwork {
        let mut out = PhyloNetwork::new();
        let root = out.add_node(NodeType::Root, None);
        let top = realize_into(&mut out, &self.root);
        out.add_edge(root, top);
        out
    }
}

fn realize_into(out: &mut PhyloNetwork, node: &PlanNode) -> usize {
    match node {
        PlanNode::Leaf(l) => out.add_leaf(*l),
        PlanNode::Component { plain, shape, below } => {
            let q = below.len() as u32;
            let mut map = vec![usize::MAX; shape.node_count()];
            let root = shape.root().expect("shape has a root");
            for v in 0..shape.node_count() {
                map[v] = match (shape.kind(v), shape.label(v)) {
                    (NodeType::Root, _) => continue,
                    (NodeType::Leaf, Some(l)) if l <= q => realize_into(out, &below[l as usize - 1]),
                    (NodeType::Leaf, Some(l)) => out.add_leaf(plain[(l - q) as usize - 1]),
                    (kind, _) => out.add_node(kind, None),
                };
            }
            for (u, v) in shape.edges() {
                if u != root {
                    out.add_edge(map[u], map[v]);
                }
            }
            map[shape.children(root)[0]]
        }
    }
}

/// Index drawn with probability proportional to `weights`.
fn choose<R: Rng + ?Sized>(weights: &[BigUint], rng: &mut R) -> usize {
    let total: BigUint = weights.iter().sum();
    assert!(!total.is_zero(), "no admissible alternative");
    let mut x = rng.gen_biguint_below(&total);
    for (i, w) in weights.iter().enumerate() {
        if &x < w {
            return i;
        }
        x -= w;
    }
    unreachable!("draw below the total")
}

fn plan_on<R: Rng + ?Sized>(t: &Totals, labels: &[u32], rng: &mut R) -> PlanNode {
    let n = labels.len();
    if n == 1 {
        return PlanNode::Leaf(labels[0]);
    }
    let mut options = Vec::new();
    let mut weights = Vec::new();
    for m in 1..=n {
        for q in 0..=(n - m) {
            let w = t.root_weight(n, m, q);
            if !w.is_zero() {
                options.push((m, q));
                weights.push(w);
            }
        }
    }
    let (m, q) = options[choose(&weights, rng)];
    let mut picked: Vec<usize> = index::sample(rng, n, m).into_vec();
    picked.sort_unstable();
    let plain: Vec<u32> = picked.iter().map(|&i| labels[i]).collect();
    let mut rest: Vec<u32> = labels.iter().copied().filter(|l| !plain.contains(l)).collect();
    let mut below = Vec::with_capacity(q);
    for blocks_left in (1..=q).rev() {
        let s = rest.len();
        let w: Vec<BigUint> = (1..=s).map(|j| t.block_weight(s, blocks_left, j)).collect();
        let j = choose(&w, rng) + 1;
        // the smallest remaining label plus j - 1 others
        let smallest = rest.remove(0);
        let mut others: Vec<usize> = index::sample(rng, rest.len(), j - 1).into_vec();
        others.sort_unstable();
        let mut block: Vec<u32> = std::iter::once(smallest).chain(others.iter().map(|&i| rest[i])).collect();
        for &i in others.iter().rev() {
            rest.remove(i);
        }
        block.sort_unstable();
        below.push(plan_on(t, &block, rng));
    }
    debug_assert!(rest.is_empty());
    let shape = sample_one_component(m + q, q, LabelModel::Fixed, rng).expect("q < m + q");
    PlanNode::Component { plain, shape, below }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SampleError {
    #[error("size must be at least 1")]
    Empty,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

fn check_n(n: usize) -> Result<(), SampleError> {
    if n == 0 {
        return Err(SampleError::Empty);
    }
    let cap = EngineConfig::default().column_cap;
    if n > cap {
        return Err(EngineError::Cap {
            what: "sample_gtc",
            n,
            cap,
            advice: "the recurrence tables are not built this far",
        }
        .into());
    }
    Ok(())
}

/// A uniform decompression plan on labels `1..=n`.
pub fn sample_plan<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DecompressionPlan, SampleError> {
    check_n(n)?;
    let t = totals(n);
    let labels: Vec<u32> = (1..=n as u32).collect();
    Ok(DecompressionPlan {
        root: plan_on(&t, &labels, rng),
    })
}

/// A uniform galled tree-child network of size `n`.
pub fn sample_gtc<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PhyloNetwork, SampleError> {
    Ok(sample_plan(n, rng)?.realize())
}

/// `R_n` drawn exactly from the table row.
pub fn sample_retic_count<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<usize, SampleError> {
    if n == 0 {
        return Err(SampleError::Empty);
    }
    let t = cached_table(n)?;
    Ok(choose(t.row(n), rng))
}

/// Generator for draw `index` of a batch rooted at `seed`; draws are
/// independent of batch order and of each other.
pub fn draw_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// First line of a sample file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct SampleHeader {
    pub n: usize,
    pub seed: u64,
    pub count: u64,
    pub format: String,
    pub table_version: String,
}

impl SampleHeader {
    pub fn new(n: usize, seed: u64, count: u64, format: &str) -> Self {
        SampleHeader {
            n,
            seed,
            count,
            format: format.to_string(),
            table_version: TABLE_VERSION.to_string(),
        }
    }

    /// `# {json}`.
    pub fn to_line(&self) -> String {
        format!("# {}", serde_json::to_string(self).expect("plain data"))
    }

    pub fn parse_line(line: &str) -> Option<Self> {
        serde_json::from_str(line.strip_prefix("# ")?).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{is_galled, is_tree_child, no_leaf_child_count};
    use crate::sampler::to_newick;

    #[test]
    fn plans_are_consistent() {
        let mut rng = draw_rng(11, 0);
        for n in 1..=12 {
            for _ in 0..20 {
                let plan = sample_plan(n, &mut rng).unwrap();
                plan.root.check().unwrap();
                assert_eq!(plan.root.labels(), (1..=n as u32).collect::<Vec<_>>());
                let net = plan.realize();
                assert!(net.is_valid(), "{:?}", net.validate());
                assert!(is_tree_child(&net) && is_galled(&net), "{}", to_newick(&net));
                assert_eq!(net.reticulation_count(), plan.root.reticulations());
                assert_eq!(no_leaf_child_count(&net), plan.root.no_leaf_child());
            }
        }
    }

    #[test]
    fn single_leaf_and_determinism() {
        let mut rng = draw_rng(0, 0);
        assert_eq!(to_newick(&sample_gtc(1, &mut rng).unwrap()), "1;");
        let a = sample_gtc(9, &mut draw_rng(5, 3)).unwrap();
        let b = sample_gtc(9, &mut draw_rng(5, 3)).unwrap();
        assert_eq!(to_newick(&a), to_newick(&b));
        assert!(matches!(sample_gtc(0, &mut rng), Err(SampleError::Empty)));
    }

    #[test]
    fn retic_count_law_at_one() {
        let mut rng = draw_rng(1, 0);
        assert!((0..50).all(|_| sample_retic_count(1, &mut rng).unwrap() == 0));
    }

    #[test]
    fn header_round_trip() {
        let h = SampleHeader::new(4, 7, 10, "newick");
        assert_eq!(SampleHeader::parse_line(&h.to_line()), Some(h));
    }
}
