//! Signed-graph data model. Edges carry an observed or hidden sign and an
//! optional sentiment probability; triangles are indexed on first use.

mod io;
mod sampling;
mod synth;
mod triangles;

pub use io::{parse_edge_list, read_edge_list, write_edge_list, write_edge_list_file};
pub use sampling::{
    apply_evidence_mask, bfs_sample, random_edge_partition, remove_overlap, BfsSample, EdgeRole,
    EvidencePartition,
};
pub use synth::{generate_synthetic, SynthConfig, TextConfig};
pub use triangles::{brute_force_triangles, enumerate_triangles};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

/// Dense node index, `0 <= id < node_count`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignState {
    ObservedPositive,
    ObservedNegative,
    Unknown,
}

impl SignState {
    pub fn from_bool(positive: bool) -> Self {
        if positive {
            SignState::ObservedPositive
        } else {
            SignState::ObservedNegative
        }
    }

    /// `Some(true)` for positive, `Some(false)` for negative.
    pub fn as_bool(self) -> Option<bool> {
        match self {
            SignState::ObservedPositive => Some(true),
            SignState::ObservedNegative => Some(false),
            SignState::Unknown => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignedEdge<T> {
    pub source: NodeId,
    pub target: NodeId,
    pub sign: SignState,
    /// Sentiment-model probability that the edge is positive.
    pub p: Option<T>,
    pub text: Option<String>,
}

impl<T> SignedEdge<T> {
    pub fn new(source: usize, target: usize, sign: SignState) -> Self {
        SignedEdge {
            source: NodeId(source),
            target: NodeId(target),
            sign,
            p: None,
            text: None,
        }
    }

    pub fn with_p(mut self, p: T) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Self {
        self.text = Some(text.into());
        self
    }

    /// Unordered endpoint pair `(min, max)`.
    pub fn pair(&self) -> (usize, usize) {
        let (a, b) = (self.source.0, self.target.0);
        (a.min(b), a.max(b))
    }

    pub fn other(&self, node: NodeId) -> NodeId {
        if self.source == node {
            self.target
        } else {
            self.source
        }
    }
}

/// Three edges closing a cycle over three distinct nodes; indices ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangle {
    pub edges: [usize; 3],
}

impl Triangle {
    pub fn new(mut edges: [usize; 3]) -> Self {
        edges.sort_unstable();
        Triangle { edges }
    }
}

#[derive(Debug, Default)]
struct Adjacency {
    /// Per node, `(neighbor, edge index)` sorted by neighbor.
    neighbors: Vec<Vec<(usize, usize)>>,
    pairs: HashMap<(usize, usize), usize>,
}

/// `G = (V, E, x)`: immutable after construction, shareable across threads.
pub struct SignedGraph<T> {
    node_count: usize,
    directed: bool,
    edges: Vec<SignedEdge<T>>,
    labels: Option<Vec<String>>,
    adjacency: OnceLock<Adjacency>,
    triangles: OnceLock<Vec<Triangle>>,
}

impl<T: Clone> Clone for SignedGraph<T> {
    fn clone(&self) -> Self {
        SignedGraph {
            node_count: self.node_count,
            directed: self.directed,
            edges: self.edges.clone(),
            labels: self.labels.clone(),
            adjacency: OnceLock::new(),
            triangles: self.triangles.clone(),
        }
    }
}

impl<T: PartialEq> PartialEq for SignedGraph<T> {
    fn eq(&self, other: &Self) -> bool {
        self.node_count == other.node_count
            && self.directed == other.directed
            && self.edges == other.edges
            && self.labels == other.labels
    }
}

impl<T: fmt::Debug> fmt::Debug for SignedGraph<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SignedGraph")
            .field("node_count", &self.node_count)
            .field("directed", &self.directed)
            .field("edges", &self.edges.len())
            .finish()
    }
}

impl<T: Scalar> SignedGraph<T> {
    /// Validates and builds a graph. Self-loops, out-of-range endpoints,
    /// invalid probabilities and a second edge between the same node pair
    /// (in either direction) are rejected.
    pub fn new(node_count: usize, directed: bool, edges: Vec<SignedEdge<T>>) -> Result<Self> {
        let mut seen = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if e.source.0 >= node_count || e.target.0 >= node_count {
                return Err(Error::invalid(format!(
                    "edge {i} endpoint out of range ({} nodes)",
                    node_count
                )));
            }
            if e.source == e.target {
                return Err(Error::invalid(format!("edge {i} is a self-loop")));
            }
            if let Some(p) = e.p {
                if !p.is_finite() || p < T::zero() || p > T::one() {
                    return Err(Error::invalid(format!("edge {i} has p outside [0,1]")));
                }
            }
            if let Some(j) = seen.insert(e.pair(), i) {
                return Err(Error::invalid(format!(
                    "edges {j} and {i} join the same node pair"
                )));
            }
        }
        Ok(SignedGraph {
            node_count,
            directed,
            edges,
            labels: None,
            adjacency: OnceLock::new(),
            triangles: OnceLock::new(),
        })
    }

    pub fn empty(directed: bool) -> Self {
        Self::new(0, directed, Vec::new()).expect("empty graph is valid")
    }

    /// Attaches external node names (one per node).
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.node_count {
            return Err(Error::invalid("label count differs from node count"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Copy of the graph with each edge's probability replaced.
    pub fn with_probabilities(&self, p: &[Option<T>]) -> Result<Self> {
        if p.len() != self.edges.len() {
            return Err(Error::invalid("probability vector length differs from edge count"));
        }
        let edges = self
            .edges
            .iter()
            .zip(p)
            .map(|(e, &p)| SignedEdge { p, ..e.clone() })
            .collect();
        let mut g = Self::new(self.node_count, self.directed, edges)?;
        g.labels = self.labels.clone();
        Ok(g)
    }

    /// Subgraph keeping the listed edges (in the given order) and the parent's
    /// node namespace.
    pub fn edge_subgraph(&self, edge_indices: &[usize]) -> Self {
        let edges = edge_indices.iter().map(|&i| self.edges[i].clone()).collect();
        SignedGraph {
            node_count: self.node_count,
            directed: self.directed,
            edges,
            labels: self.labels.clone(),
            adjacency: OnceLock::new(),
            triangles: OnceLock::new(),
        }
    }

    pub fn probabilities(&self) -> Vec<Option<T>> {
        self.edges.iter().map(|e| e.p).collect()
    }
}

impl<T> SignedGraph<T> {
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[SignedEdge<T>] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &SignedEdge<T> {
        &self.edges[index]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, node: NodeId) -> String {
        match &self.labels {
            Some(l) => l[node.0].clone(),
            None => node.0.to_string(),
        }
    }

    /// Ground-truth sign of an edge when recorded.
    pub fn truth(&self, index: usize) -> Option<bool> {
        self.edges[index].sign.as_bool()
    }

    pub fn positive_fraction(&self) -> Option<f64> {
        let (mut pos, mut known) = (0usize, 0usize);
        for e in &self.edges {
            if let Some(s) = e.sign.as_bool() {
                known += 1;
                pos += usize::from(s);
            }
        }
        (known > 0).then(|| pos as f64 / known as f64)
    }

    fn adjacency(&self) -> &Adjacency {
        self.adjacency.get_or_init(|| {
            let mut neighbors = vec![Vec::new(); self.node_count];
            let mut pairs = HashMap::with_capacity(self.edges.len());
            for (i, e) in self.edges.iter().enumerate() {
                let (a, b) = (e.source.0, e.target.0);
                neighbors[a].push((b, i));
                neighbors[b].push((a, i));
                pairs.insert(e.pair(), i);
            }
            for list in &mut neighbors {
                list.sort_unstable();
            }
            Adjacency { neighbors, pairs }
        })
    }

    /// Incident `(neighbor, edge index)` pairs, ignoring direction, sorted by neighbor.
    pub fn neighbors(&self, node: NodeId) -> &[(usize, usize)] {
        &self.adjacency().neighbors[node.0]
    }

    /// Index of the edge joining `a` and `b` in either direction.
    pub fn edge_between(&self, a: NodeId, b: NodeId) -> Option<usize> {
        let key = (a.0.min(b.0), a.0.max(b.0));
        self.adjacency().pairs.get(&key).copied()
    }
}

impl<T: Send + Sync> SignedGraph<T> {
    /// The triangle set `T`, built on first use.
    pub fn triangles(&self) -> &[Triangle] {
        self.triangles.get_or_init(|| enumerate_triangles(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: usize, b: usize) -> SignedEdge<f64> {
        SignedEdge::new(a, b, SignState::ObservedPositive)
    }

    #[test]
    fn rejects_self_loops_and_parallel_edges() {
        assert!(SignedGraph::new(3, false, vec![e(1, 1)]).is_err());
        assert!(SignedGraph::new(3, true, vec![e(0, 1), e(1, 0)]).is_err());
        assert!(SignedGraph::new(2, false, vec![e(0, 2)]).is_err());
        let bad_p = e(0, 1).with_p(1.5);
        assert!(SignedGraph::new(2, false, vec![bad_p]).is_err());
        assert!(SignedGraph::new(3, false, vec![e(0, 1), e(1, 2)]).is_ok());
    }

    #[test]
    fn edge_lookup_ignores_direction() {
        let g = SignedGraph::new(3, true, vec![e(0, 1), e(2, 1)]).unwrap();
        assert_eq!(g.edge_between(NodeId(1), NodeId(0)), Some(0));
        assert_eq!(g.edge_between(NodeId(1), NodeId(2)), Some(1));
        assert_eq!(g.edge_between(NodeId(0), NodeId(2)), None);
        assert_eq!(g.neighbors(NodeId(1)), &[(0, 0), (2, 1)]);
    }
}
