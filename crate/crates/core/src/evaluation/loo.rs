//! Leave-one-out baseline: predict each sign from the signs around it.

use super::metrics::ScoredEdge;
use crate::error::{Error, Result};
use crate::graph::SignedGraph;
use crate::scalar::Scalar;
use crate::sentiment::{train_logreg, LogisticModel, SparseRow};

pub const DIRECTED_TRIANGLE_TYPES: usize = 16;
pub const UNDIRECTED_TRIANGLE_TYPES: usize = 4;
pub const DEGREE_FEATURES: usize = 4;

/// Feature count for a graph, plus one slot when the sentiment probability
/// is appended.
pub fn loo_feature_len(directed: bool, include_sentiment: bool) -> usize {
    let types = if directed { DIRECTED_TRIANGLE_TYPES } else { UNDIRECTED_TRIANGLE_TYPES };
    types + DEGREE_FEATURES + include_sentiment as usize
}

/// Triangle-type histogram and degree counts of edge `(u, v)`, using the
/// known signs of every other edge. Edges without a sign are ignored.
///
/// Each common neighbour `w` contributes one triangle, typed by the sign of
/// the `u`-`w` and `v`-`w` edges and, for directed graphs, whether each of
/// them points toward `w`. Degree features are `u`'s positive and negative
/// out-links and `v`'s positive and negative in-links (all incident links for
/// undirected graphs), excluding the edge itself.
pub fn loo_features<T: Scalar>(graph: &SignedGraph<T>, edge: usize) -> Vec<T> {
    let directed = graph.is_directed();
    let e = graph.edge(edge);
    let (u, v) = (e.source, e.target);
    let types = if directed { DIRECTED_TRIANGLE_TYPES } else { UNDIRECTED_TRIANGLE_TYPES };
    let mut f = vec![T::zero(); types + DEGREE_FEATURES];

    // Sign and "points toward w" of every signed edge at u, keyed by w.
    let side = |node: crate::graph::NodeId| {
        let mut out: Vec<(usize, bool, bool)> = graph
            .neighbors(node)
            .iter()
            .filter(|&&(_, ei)| ei != edge)
            .filter_map(|&(w, ei)| {
                let s = graph.truth(ei)?;
                let toward = graph.edge(ei).target.0 == w;
                Some((w, s, toward))
            })
            .collect();
        out.sort_unstable_by_key(|x| x.0);
        out
    };
    let (a, b) = (side(u), side(v));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let (_, su, tu) = a[i];
                let (_, sv, tv) = b[j];
                let idx = if directed {
                    ((((!tu) as usize * 2 + (!su) as usize) * 2) + (!tv) as usize) * 2 + (!sv) as usize
                } else {
                    (!su) as usize * 2 + (!sv) as usize
                };
                f[idx] += T::one();
                i += 1;
                j += 1;
            }
        }
    }
    for &(_, s, toward) in &a {
        // u's out-links point away from u, i.e. toward the neighbour.
        if !directed || toward {
            f[types + (!s) as usize] += T::one();
        }
    }
    for &(_, s, toward) in &b {
        if !directed || !toward {
            f[types + 2 + (!s) as usize] += T::one();
        }
    }
    f
}

fn to_row<T: Scalar>(dense: Vec<T>) -> SparseRow<T> {
    dense.into_iter().enumerate().filter(|(_, v)| *v != T::zero()).collect()
}

fn edge_rows<T: Scalar>(graph: &SignedGraph<T>, edges: &[usize], include_sentiment: bool) -> Vec<SparseRow<T>> {
    edges
        .iter()
        .map(|&e| {
            let mut f = loo_features(graph, e);
            if include_sentiment {
                f.push(graph.edge(e).p.unwrap_or_else(|| T::lit(0.5)));
            }
            to_row(f)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct LooConfig {
    pub include_sentiment: bool,
    pub l2_grid: Vec<f64>,
    pub cv_folds: usize,
    pub seed: u64,
}

impl Default for LooConfig {
    fn default() -> Self {
        LooConfig {
            include_sentiment: false,
            l2_grid: vec![1e-4, 1e-3, 1e-2, 1e-1, 1.0],
            cv_folds: 5,
            seed: 0,
        }
    }
}

/// Fit the LOO classifier on every signed edge of `train`.
pub fn train_loo<T: Scalar>(train: &SignedGraph<T>, config: &LooConfig) -> Result<LogisticModel<T>> {
    let edges: Vec<usize> = (0..train.edge_count()).filter(|&e| train.truth(e).is_some()).collect();
    let rows = edge_rows(train, &edges, config.include_sentiment);
    let labels: Vec<bool> = edges.iter().map(|&e| train.truth(e).unwrap_or(false)).collect();
    let grid: Vec<T> = config.l2_grid.iter().map(|&l| T::lit(l)).collect();
    let dim = loo_feature_len(train.is_directed(), config.include_sentiment);
    Ok(train_logreg(&rows, dim, &labels, &grid, config.cv_folds, config.seed)?.0)
}

/// Score every signed edge of `test`, each with all other signs known.
pub fn score_loo<T: Scalar>(
    model: &LogisticModel<T>,
    test: &SignedGraph<T>,
    include_sentiment: bool,
) -> Result<Vec<ScoredEdge<T>>> {
    let dim = loo_feature_len(test.is_directed(), include_sentiment);
    if model.weights.len() != dim {
        return Err(Error::invalid("classifier does not match the graph's feature layout"));
    }
    let edges: Vec<usize> = (0..test.edge_count()).filter(|&e| test.truth(e).is_some()).collect();
    let rows = edge_rows(test, &edges, include_sentiment);
    Ok(edges
        .iter()
        .zip(rows)
        .map(|(&e, row)| ScoredEdge {
            edge: e,
            score: model.predict_proba(&row),
            truth: test.truth(e).unwrap_or(false),
        })
        .collect())
}
