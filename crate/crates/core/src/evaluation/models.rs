use super::metrics::ScoredEdge;
use crate::error::{Error, Result};
use crate::graph::{EvidencePartition, SignedGraph};
use crate::inference::{admm_solve, build_problem, SolverOptions, SolverResult};
use crate::potentials::CostWeights;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct ModelOptions<T> {
    /// Squared triangle hinges.
    pub squared: bool,
    pub solver: SolverOptions<T>,
}

impl<T: Scalar> Default for ModelOptions<T> {
    fn default() -> Self {
        ModelOptions { squared: true, solver: SolverOptions::default() }
    }
}

fn truth_of<T: Scalar>(graph: &SignedGraph<T>, edge: usize) -> Result<bool> {
    graph
        .truth(edge)
        .ok_or_else(|| Error::invalid(format!("target edge {edge} has no ground-truth sign")))
}

/// Scores are the sentiment probabilities themselves.
pub fn predict_sentiment_only<T: Scalar>(
    graph: &SignedGraph<T>,
    partition: &EvidencePartition,
    p: &[Option<T>],
) -> Result<Vec<ScoredEdge<T>>> {
    if p.len() != graph.edge_count() {
        return Err(Error::invalid("probability vector length differs from edge count"));
    }
    partition
        .targets()
        .into_iter()
        .map(|e| {
            let score = p[e].ok_or(Error::MissingProbability { edge: e })?;
            Ok(ScoredEdge { edge: e, score, truth: truth_of(graph, e)? })
        })
        .collect()
}

/// Solve MAP inference and return the relaxed value of every unknown edge,
/// as `(edge index, value)` pairs, with the solver diagnostics.
pub fn infer_unknown<T: Scalar>(
    graph: &SignedGraph<T>,
    partition: &EvidencePartition,
    p: &[Option<T>],
    weights: &CostWeights<T>,
    options: &ModelOptions<T>,
) -> Result<(Vec<(usize, T)>, SolverResult<T>)> {
    let problem = build_problem(graph, partition, p, weights, options.squared)?;
    let result = admm_solve(&problem, &options.solver)?;
    if !result.converged {
        log::warn!(
            "solver stopped after {} iterations without converging (primal {}, dual {})",
            result.iterations,
            result.primal_residual,
            result.dual_residual
        );
    }
    let values = problem.unknown_edges.iter().copied().zip(result.x.iter().copied()).collect();
    Ok((values, result))
}

fn score_targets<T: Scalar>(
    graph: &SignedGraph<T>,
    partition: &EvidencePartition,
    p: &[Option<T>],
    weights: &CostWeights<T>,
    options: &ModelOptions<T>,
) -> Result<Vec<ScoredEdge<T>>> {
    let (values, _) = infer_unknown(graph, partition, p, weights, options)?;
    values
        .into_iter()
        .filter(|&(e, _)| partition.role(e) == crate::graph::EdgeRole::Target)
        .map(|(e, score)| Ok(ScoredEdge { edge: e, score, truth: truth_of(graph, e)? }))
        .collect()
}

/// Triangle and prior terms only; the sentiment probabilities are ignored.
pub fn predict_network_only<T: Scalar>(
    graph: &SignedGraph<T>,
    partition: &EvidencePartition,
    weights: &CostWeights<T>,
    options: &ModelOptions<T>,
) -> Result<Vec<ScoredEdge<T>>> {
    weights.validate()?;
    let none = vec![None; graph.edge_count()];
    score_targets(graph, partition, &none, &weights.without_edge_costs(), options)
}

/// Full objective: binned edge costs plus triangle and prior terms.
pub fn predict_combined<T: Scalar>(
    graph: &SignedGraph<T>,
    partition: &EvidencePartition,
    p: &[Option<T>],
    weights: &CostWeights<T>,
    options: &ModelOptions<T>,
) -> Result<Vec<ScoredEdge<T>>> {
    weights.validate()?;
    score_targets(graph, partition, p, weights, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_synthetic, EdgeRole, SignState, SignedEdge};

    #[test]
    fn sentiment_passthrough() {
        let g: SignedGraph<f64> = generate_synthetic(15, 0.4, 0.1, 0.2, 3);
        let p = g.probabilities();
        let part = EvidencePartition::all_targets(g.edge_count());
        let s = predict_sentiment_only(&g, &part, &p).unwrap();
        assert_eq!(s.len(), g.edge_count());
        assert!(s.iter().all(|x| Some(x.score) == p[x.edge]));
        let none = EvidencePartition::all_evidence(g.edge_count());
        assert!(predict_sentiment_only(&g, &none, &p).unwrap().is_empty());
        let mut missing = p.clone();
        missing[0] = None;
        assert!(matches!(
            predict_sentiment_only(&g, &part, &missing),
            Err(Error::MissingProbability { edge: 0 })
        ));
    }

    #[test]
    fn isolated_edge_scores_prior() {
        let g: SignedGraph<f64> =
            SignedGraph::new(2, false, vec![SignedEdge::new(0, 1, SignState::ObservedNegative).with_p(0.9)]).unwrap();
        let w = CostWeights::uniform(1.0, 0.37);
        let s = predict_network_only(&g, &EvidencePartition::all_targets(1), &w, &ModelOptions::default()).unwrap();
        assert_eq!(s[0].score, 0.37);
    }

    #[test]
    fn decoupled_combined_equals_p() {
        let g: SignedGraph<f64> = generate_synthetic(20, 0.4, 0.1, 0.3, 8);
        let p = g.probabilities();
        let part = EvidencePartition::all_targets(g.edge_count());
        let mut w = CostWeights::uniform(0.7, 0.5);
        w.triangle_cost = [0.0; 4];
        w.prior_weight = 0.0;
        let c = predict_combined(&g, &part, &p, &w, &ModelOptions::default()).unwrap();
        let s = predict_sentiment_only(&g, &part, &p).unwrap();
        assert_eq!(c, s);
    }

    #[test]
    fn zero_lambdas_equal_network() {
        let g: SignedGraph<f64> = generate_synthetic(20, 0.4, 0.1, 0.3, 9);
        let p = g.probabilities();
        let mut roles = vec![EdgeRole::Target; g.edge_count()];
        roles.iter_mut().step_by(3).for_each(|r| *r = EdgeRole::Evidence);
        let part = EvidencePartition::from_roles(roles);
        let w = CostWeights::uniform(1.0, 0.6).without_edge_costs();
        let opts = ModelOptions::default();
        assert_eq!(
            predict_combined(&g, &part, &p, &w, &opts).unwrap(),
            predict_network_only(&g, &part, &w, &opts).unwrap()
        );
    }

    #[test]
    fn teasing_triangle_network_only() {
        // Two positive evidence edges close a triangle around the target.
        let pos = SignState::ObservedPositive;
        let edges = vec![
            SignedEdge::new(0, 1, pos).with_p(0.2f64),
            SignedEdge::new(0, 2, pos),
            SignedEdge::new(1, 2, pos),
        ];
        let g = SignedGraph::new(3, false, edges).unwrap();
        let part = EvidencePartition::from_roles(vec![EdgeRole::Target, EdgeRole::Evidence, EdgeRole::Evidence]);
        let w = CostWeights::balance(0.5);
        let s = predict_network_only(&g, &part, &w, &ModelOptions { squared: false, ..Default::default() }).unwrap();
        assert!(s[0].score >= 0.9);
    }
}
