#![allow(dead_code)]

use edgesign::graph::{EdgeRole, EvidencePartition, SignState, SignedEdge, SignedGraph};
use edgesign::potentials::{CostWeights, BINS, TRIANGLE_CLASSES};
use edgesign::rng;
use rand::Rng;

/// Small random undirected graph with signs and probabilities on every edge,
/// and at most `max_unknown` non-evidence edges.
pub fn random_instance(
    seed: u64,
    max_unknown: usize,
) -> (SignedGraph<f64>, EvidencePartition, Vec<Option<f64>>) {
    let mut r = rng::seeded(seed);
    let n = r.random_range(3..=7);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.random_bool(0.6) {
                let sign = SignState::from_bool(r.random_bool(0.6));
                edges.push(SignedEdge::new(u, v, sign).with_p(r.random::<f64>()));
            }
        }
    }
    if edges.is_empty() {
        edges.push(SignedEdge::new(0, 1, SignState::ObservedPositive).with_p(0.7));
    }
    let g = SignedGraph::new(n, false, edges).unwrap();
    let m = g.edge_count();
    let unknown_target = r.random_range(1..=max_unknown.min(m));
    let mut idx: Vec<usize> = (0..m).collect();
    rand::seq::SliceRandom::shuffle(idx.as_mut_slice(), &mut r);
    let mut roles = vec![EdgeRole::Evidence; m];
    for &e in &idx[..unknown_target] {
        roles[e] = EdgeRole::Target;
    }
    let p = g.probabilities();
    (g, EvidencePartition::from_roles(roles), p)
}

pub fn random_weights(seed: u64) -> CostWeights<f64> {
    let mut r = rng::seeded(rng::substream(seed, "weights"));
    let mut w = CostWeights::zeros(r.random::<f64>());
    for k in 0..BINS {
        w.lambda1[k] = 2.0 * r.random::<f64>();
        w.lambda0[k] = 2.0 * r.random::<f64>();
    }
    for k in 0..TRIANGLE_CLASSES {
        w.triangle_cost[k] = 2.0 * r.random::<f64>();
    }
    w.prior_weight = r.random::<f64>();
    w
}
