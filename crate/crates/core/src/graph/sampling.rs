//! Train/test sampling and evidence masking. All operations are pure
//! functions of their inputs and the supplied seed.

use super::{NodeId, SignedGraph};
use crate::error::{Error, Result};
use crate::rng;
use crate::scalar::Scalar;
use rand::seq::SliceRandom;
use std::collections::{HashSet, VecDeque};

/// Induced subgraph reached by a breadth-first search. The subgraph keeps the
/// parent's node namespace.
#[derive(Clone, Debug)]
pub struct BfsSample<T> {
    /// Visited nodes in visiting order; the seed is first.
    pub nodes: Vec<NodeId>,
    pub graph: SignedGraph<T>,
    /// Parent index of every subgraph edge.
    pub parent_edges: Vec<usize>,
}

/// Breadth-first search from `seed`, following edges in both directions, until
/// `node_budget` nodes (seed included) have been visited. Each adjacency list
/// is shuffled with the seeded rng before expansion.
pub fn bfs_sample<T: Scalar>(
    graph: &SignedGraph<T>,
    seed: NodeId,
    node_budget: usize,
    rng_seed: u64,
) -> Result<BfsSample<T>> {
    if seed.0 >= graph.node_count() {
        return Err(Error::invalid(format!(
            "seed node {} out of range ({} nodes)",
            seed.0,
            graph.node_count()
        )));
    }
    if node_budget == 0 {
        return Err(Error::invalid("node budget must be at least 1"));
    }
    let mut rng = rng::seeded(rng_seed);
    let mut visited = vec![false; graph.node_count()];
    let mut order = vec![seed];
    let mut queue = VecDeque::from([seed]);
    visited[seed.0] = true;

    'search: while let Some(u) = queue.pop_front() {
        if order.len() >= node_budget {
            break;
        }
        let mut next: Vec<usize> = graph.neighbors(u).iter().map(|&(v, _)| v).collect();
        next.shuffle(&mut rng);
        for v in next {
            if !visited[v] {
                visited[v] = true;
                order.push(NodeId(v));
                queue.push_back(NodeId(v));
                if order.len() >= node_budget {
                    break 'search;
                }
            }
        }
    }

    let parent_edges: Vec<usize> = graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| visited[e.source.0] && visited[e.target.0])
        .map(|(i, _)| i)
        .collect();
    Ok(BfsSample {
        nodes: order,
        graph: graph.edge_subgraph(&parent_edges),
        parent_edges,
    })
}

/// Random partition of all edge indices into `folds` disjoint sets whose sizes
/// differ by at most one.
pub fn random_edge_partition<T>(
    graph: &SignedGraph<T>,
    folds: usize,
    rng_seed: u64,
) -> Result<Vec<Vec<usize>>> {
    if folds < 2 {
        return Err(Error::invalid("at least two folds are required"));
    }
    if folds > graph.edge_count() {
        return Err(Error::invalid(format!(
            "{folds} folds requested for {} edges",
            graph.edge_count()
        )));
    }
    let mut idx: Vec<usize> = (0..graph.edge_count()).collect();
    idx.shuffle(&mut rng::seeded(rng_seed));
    let mut out = vec![Vec::new(); folds];
    for (k, i) in idx.into_iter().enumerate() {
        out[k % folds].push(i);
    }
    for fold in &mut out {
        fold.sort_unstable();
    }
    Ok(out)
}

/// What the model sees of one edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeRole {
    /// Sign revealed and held fixed.
    Evidence,
    /// Sign hidden and scored.
    Target,
    /// Sign hidden but not scored (outside the pool).
    Hidden,
}

/// Evidence/target split of one graph's edges. Every non-evidence edge is an
/// inference variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvidencePartition {
    roles: Vec<EdgeRole>,
}

impl EvidencePartition {
    pub fn from_roles(roles: Vec<EdgeRole>) -> Self {
        EvidencePartition { roles }
    }

    /// Every edge is a target.
    pub fn all_targets(edge_count: usize) -> Self {
        Self::from_roles(vec![EdgeRole::Target; edge_count])
    }

    /// Every edge is evidence.
    pub fn all_evidence(edge_count: usize) -> Self {
        Self::from_roles(vec![EdgeRole::Evidence; edge_count])
    }

    pub fn edge_count(&self) -> usize {
        self.roles.len()
    }

    pub fn role(&self, edge: usize) -> EdgeRole {
        self.roles[edge]
    }

    pub fn is_evidence(&self, edge: usize) -> bool {
        self.roles[edge] == EdgeRole::Evidence
    }

    pub fn evidence(&self) -> Vec<usize> {
        self.with_role(EdgeRole::Evidence)
    }

    pub fn targets(&self) -> Vec<usize> {
        self.with_role(EdgeRole::Target)
    }

    /// Edges whose sign is inferred (targets and hidden edges).
    pub fn unknown(&self) -> Vec<usize> {
        (0..self.roles.len())
            .filter(|&i| self.roles[i] != EdgeRole::Evidence)
            .collect()
    }

    /// Evidence and targets.
    pub fn pool(&self) -> Vec<usize> {
        (0..self.roles.len())
            .filter(|&i| self.roles[i] != EdgeRole::Hidden)
            .collect()
    }

    fn with_role(&self, role: EdgeRole) -> Vec<usize> {
        (0..self.roles.len())
            .filter(|&i| self.roles[i] == role)
            .collect()
    }

    /// Checks that every evidence edge carries an observed sign.
    pub fn validate<T>(&self, graph: &SignedGraph<T>) -> Result<()> {
        if self.roles.len() != graph.edge_count() {
            return Err(Error::invalid("partition size differs from edge count"));
        }
        for edge in self.evidence() {
            if graph.truth(edge).is_none() {
                return Err(Error::UnsignedEvidence { edge });
            }
        }
        Ok(())
    }
}

/// Reveals `round(evidence_ratio * |pool|)` pool edges, drawn uniformly
/// without replacement; the rest of the pool become targets and edges outside
/// the pool stay hidden.
pub fn apply_evidence_mask<T>(
    graph: &SignedGraph<T>,
    edge_pool: &[usize],
    evidence_ratio: f64,
    rng_seed: u64,
) -> Result<EvidencePartition> {
    if !(0.0..=1.0).contains(&evidence_ratio) {
        return Err(Error::invalid(format!(
            "evidence ratio {evidence_ratio} outside [0,1]"
        )));
    }
    let mut pool: Vec<usize> = edge_pool.to_vec();
    pool.sort_unstable();
    pool.dedup();
    if let Some(&bad) = pool.iter().find(|&&e| e >= graph.edge_count()) {
        return Err(Error::invalid(format!("edge {bad} not in graph")));
    }
    if let Some(&edge) = pool.iter().find(|&&e| graph.truth(e).is_none()) {
        return Err(Error::UnsignedEvidence { edge });
    }
    let n_evidence = (evidence_ratio * pool.len() as f64).round() as usize;
    pool.shuffle(&mut rng::seeded(rng_seed));
    let mut roles = vec![EdgeRole::Hidden; graph.edge_count()];
    for (k, &e) in pool.iter().enumerate() {
        roles[e] = if k < n_evidence {
            EdgeRole::Evidence
        } else {
            EdgeRole::Target
        };
    }
    Ok(EvidencePartition { roles })
}

/// `test_graph` without the edges that also occur in `train_graph` (matched by
/// source, target and, for undirected graphs, either orientation).
pub fn remove_overlap<T: Scalar>(
    test_graph: &SignedGraph<T>,
    train_graph: &SignedGraph<T>,
) -> SignedGraph<T> {
    let key = |g: &SignedGraph<T>, s: usize, t: usize| {
        if g.is_directed() {
            (s, t)
        } else {
            (s.min(t), s.max(t))
        }
    };
    let train: HashSet<(usize, usize)> = train_graph
        .edges()
        .iter()
        .map(|e| key(test_graph, e.source.0, e.target.0))
        .collect();
    let keep: Vec<usize> = test_graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| !train.contains(&key(test_graph, e.source.0, e.target.0)))
        .map(|(i, _)| i)
        .collect();
    test_graph.edge_subgraph(&keep)
}
