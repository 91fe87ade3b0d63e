//! Evidence-ratio and feature-drop sweeps over train/test fold pairs.

use super::loo::{score_loo, train_loo, LooConfig};
use super::metrics::{auc_neg_pr, auc_roc, mean_and_standard_error, ScoredEdge};
use super::models::{predict_combined, predict_network_only, predict_sentiment_only, ModelOptions};
use crate::error::{Error, Result};
use crate::graph::{
    apply_evidence_mask, bfs_sample, random_edge_partition, remove_overlap, EvidencePartition, NodeId,
    SignedGraph,
};
use crate::learning::{learn_weights, LearnConfig};
use crate::rng;
use crate::scalar::Scalar;
use crate::sentiment::{labeled_texts, score_edges, train_sentiment, SentimentConfig, SentimentModel};
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "sentiment")]
    Sentiment,
    #[serde(rename = "network")]
    Network,
    #[serde(rename = "combined")]
    Combined,
    #[serde(rename = "loo")]
    Loo,
    #[serde(rename = "loo+sent")]
    LooSent,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Sentiment,
        ModelKind::Network,
        ModelKind::Combined,
        ModelKind::Loo,
        ModelKind::LooSent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Sentiment => "sentiment",
            ModelKind::Network => "network",
            ModelKind::Combined => "combined",
            ModelKind::Loo => "loo",
            ModelKind::LooSent => "loo+sent",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown model {s:?}")))
    }
}

/// How train/test pairs are drawn. Pair `i` trains on sample `i` and tests
/// on sample `i + 1 (mod k)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FoldScheme {
    /// Breadth-first subgraphs of `nodes` nodes from `subgraphs` random seeds;
    /// test edges that also occur in the training subgraph are removed.
    Bfs { subgraphs: usize, nodes: usize },
    /// Random edge folds over a fixed node set.
    Random { folds: usize },
}

#[derive(Clone, Debug)]
pub struct FoldPair<T> {
    pub index: usize,
    pub train: SignedGraph<T>,
    pub test: SignedGraph<T>,
}

pub fn make_folds<T: Scalar>(graph: &SignedGraph<T>, scheme: FoldScheme, seed: u64) -> Result<Vec<FoldPair<T>>> {
    let samples: Vec<SignedGraph<T>> = match scheme {
        FoldScheme::Bfs { subgraphs, nodes } => {
            if subgraphs < 2 {
                return Err(Error::invalid("at least two subgraphs are required"));
            }
            let mut candidates: Vec<usize> =
                (0..graph.node_count()).filter(|&v| !graph.neighbors(NodeId(v)).is_empty()).collect();
            if candidates.len() < subgraphs {
                return Err(Error::invalid(format!(
                    "{subgraphs} seed nodes requested but only {} nodes have edges",
                    candidates.len()
                )));
            }
            candidates.shuffle(&mut rng::seeded(rng::substream(seed, "bfs-seeds")));
            candidates[..subgraphs]
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let s = rng::substream(seed, &format!("bfs/{i}"));
                    Ok(bfs_sample(graph, NodeId(v), nodes, s)?.graph)
                })
                .collect::<Result<_>>()?
        }
        FoldScheme::Random { folds } => random_edge_partition(graph, folds, rng::substream(seed, "edge-folds"))?
            .iter()
            .map(|f| graph.edge_subgraph(f))
            .collect(),
    };
    let k = samples.len();
    Ok((0..k)
        .map(|i| {
            let train = samples[i].clone();
            let next = &samples[(i + 1) % k];
            let test = match scheme {
                FoldScheme::Bfs { .. } => remove_overlap(next, &train),
                FoldScheme::Random { .. } => next.clone(),
            };
            FoldPair { index: i, train, test }
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct SweepConfig<T> {
    pub scheme: FoldScheme,
    pub models: Vec<ModelKind>,
    /// One fold set is drawn per seed.
    pub seeds: Vec<u64>,
    pub learn: LearnConfig<T>,
    pub loo: LooConfig,
}

impl<T: Scalar> Default for SweepConfig<T> {
    fn default() -> Self {
        SweepConfig {
            scheme: FoldScheme::Bfs { subgraphs: 10, nodes: 350 },
            models: vec![ModelKind::Sentiment, ModelKind::Network, ModelKind::Combined],
            seeds: vec![0],
            learn: LearnConfig::default(),
            loo: LooConfig::default(),
        }
    }
}

/// AUCs of one model on one fold at one sweep point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub model: ModelKind,
    /// Evidence ratio or number of dropped features.
    pub sweep_param: f64,
    pub fold: usize,
    pub auc_roc: f64,
    pub auc_neg_pr: f64,
}

/// Fold statistics of one model at one sweep point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub model: ModelKind,
    pub sweep_param: f64,
    pub folds: usize,
    pub auc_roc_mean: f64,
    pub auc_roc_se: f64,
    pub auc_neg_pr_mean: f64,
    pub auc_neg_pr_se: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub summary: Vec<SweepReport>,
}

impl SweepOutput {
    fn from_rows(rows: Vec<SweepRow>, params: &[f64], models: &[ModelKind]) -> Self {
        let mut summary = Vec::new();
        for &param in params {
            for &model in models {
                let sel: Vec<&SweepRow> =
                    rows.iter().filter(|r| r.model == model && r.sweep_param == param).collect();
                if sel.is_empty() {
                    continue;
                }
                let roc: Vec<f64> = sel.iter().map(|r| r.auc_roc).collect();
                let pr: Vec<f64> = sel.iter().map(|r| r.auc_neg_pr).collect();
                let (auc_roc_mean, auc_roc_se) = mean_and_standard_error(&roc);
                let (auc_neg_pr_mean, auc_neg_pr_se) = mean_and_standard_error(&pr);
                summary.push(SweepReport {
                    model,
                    sweep_param: param,
                    folds: sel.len(),
                    auc_roc_mean,
                    auc_roc_se,
                    auc_neg_pr_mean,
                    auc_neg_pr_se,
                });
            }
        }
        SweepOutput { rows, summary }
    }

    pub fn report(&self, model: ModelKind, sweep_param: f64) -> Option<&SweepReport> {
        self.summary.iter().find(|r| r.model == model && r.sweep_param == sweep_param)
    }

    /// `model,sweep_param,fold,auc_roc,auc_neg_pr`
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "model,sweep_param,fold,auc_roc,auc_neg_pr")?;
        for r in &self.rows {
            writeln!(out, "{},{},{},{},{}", r.model, r.sweep_param, r.fold, r.auc_roc, r.auc_neg_pr)?;
        }
        Ok(())
    }

    pub fn summary_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.summary)?)
    }
}

fn row<T: Scalar>(model: ModelKind, param: f64, fold: usize, scored: &[ScoredEdge<T>]) -> Option<SweepRow> {
    match (auc_roc(scored), auc_neg_pr(scored)) {
        (Ok(auc_roc), Ok(auc_neg_pr)) => Some(SweepRow { model, sweep_param: param, fold, auc_roc, auc_neg_pr }),
        _ => {
            log::warn!("skipping {model} on fold {fold} at {param}: test targets hold a single class");
            None
        }
    }
}

fn mask_seed(seed: u64, role: &str, fold: usize, ratio: f64) -> u64 {
    rng::substream(seed, &format!("{role}-mask/{fold}/{ratio}"))
}

/// Rows of one fold pair for every `(param, ratio)` point. `p_train` and
/// `p_test` are read from the graphs' edge probabilities.
fn fold_rows<T: Scalar>(
    pair: &FoldPair<T>,
    fold: usize,
    seed: u64,
    points: &[(f64, f64)],
    models: &[ModelKind],
    config: &SweepConfig<T>,
) -> Result<Vec<SweepRow>> {
    let (train, test) = (&pair.train, &pair.test);
    let p_train = train.probabilities();
    let p_test = test.probabilities();
    let no_p = vec![None; train.edge_count()];
    let opts = ModelOptions { squared: config.learn.squared, solver: config.learn.solver.clone() };
    let all_train: Vec<usize> = (0..train.edge_count()).collect();
    let all_test: Vec<usize> = (0..test.edge_count()).collect();
    let mut rows = Vec::new();

    let loo_rows = |include: bool, kind: ModelKind| -> Result<Vec<SweepRow>> {
        let cfg = LooConfig { include_sentiment: include, seed: rng::substream(seed, &format!("loo/{fold}")), ..config.loo.clone() };
        let model = match train_loo(train, &cfg) {
            Ok(m) => m,
            Err(Error::SingleClass(_)) => {
                log::warn!("skipping {kind} on fold {fold}: training signs hold a single class");
                return Ok(Vec::new());
            }
            Err(e) => return Err(e),
        };
        let scored = score_loo(&model, test, include)?;
        Ok(points.iter().filter_map(|&(param, _)| row(kind, param, fold, &scored)).collect())
    };

    for &model in models {
        match model {
            ModelKind::Sentiment => {
                // Scored on the whole test pool so the rows do not depend on the ratio.
                let scored = predict_sentiment_only(test, &EvidencePartition::all_targets(test.edge_count()), &p_test)?;
                rows.extend(points.iter().filter_map(|&(param, _)| row(model, param, fold, &scored)));
            }
            ModelKind::Loo => rows.extend(loo_rows(false, model)?),
            ModelKind::LooSent => rows.extend(loo_rows(true, model)?),
            ModelKind::Network | ModelKind::Combined => {
                for &(param, ratio) in points {
                    let train_part = apply_evidence_mask(train, &all_train, ratio, mask_seed(seed, "train", fold, ratio))?;
                    let test_part = apply_evidence_mask(test, &all_test, ratio, mask_seed(seed, "test", fold, ratio))?;
                    if train_part.targets().is_empty() || test_part.targets().is_empty() {
                        log::warn!("skipping {model} on fold {fold} at {param}: no target edges");
                        continue;
                    }
                    let scored = if model == ModelKind::Network {
                        let w = learn_weights(train, &train_part, &no_p, &config.learn)?.weights;
                        predict_network_only(test, &test_part, &w, &opts)?
                    } else {
                        let w = learn_weights(train, &train_part, &p_train, &config.learn)?.weights;
                        predict_combined(test, &test_part, &p_test, &w, &opts)?
                    };
                    rows.extend(row(model, param, fold, &scored));
                }
            }
        }
    }
    Ok(rows)
}

fn run_points<T: Scalar>(
    graph: &SignedGraph<T>,
    points: &[(f64, f64)],
    models: &[ModelKind],
    config: &SweepConfig<T>,
) -> Result<Vec<SweepRow>> {
    if config.seeds.is_empty() {
        return Err(Error::invalid("at least one seed is required"));
    }
    let mut units = Vec::new();
    for (si, &seed) in config.seeds.iter().enumerate() {
        let folds = make_folds(graph, config.scheme, seed)?;
        let k = folds.len();
        units.extend(folds.into_iter().map(|pair| (si * k + pair.index, seed, pair)));
    }
    let per_unit: Vec<Vec<SweepRow>> = units
        .par_iter()
        .map(|(fold, seed, pair)| fold_rows(pair, *fold, *seed, points, models, config))
        .collect::<Result<_>>()?;
    let mut rows: Vec<SweepRow> = per_unit.into_iter().flatten().collect();
    let model_pos = |m: ModelKind| models.iter().position(|&x| x == m).unwrap_or(usize::MAX);
    let param_pos = |p: f64| points.iter().position(|x| x.0 == p).unwrap_or(usize::MAX);
    rows.sort_by_key(|r| (param_pos(r.sweep_param), model_pos(r.model), r.fold));
    Ok(rows)
}

/// AUCs of each model at each evidence ratio. Training and test partitions
/// reveal the same fraction of their edges. Edge probabilities are read from
/// the graph.
pub fn run_evidence_sweep<T: Scalar>(
    graph: &SignedGraph<T>,
    ratios: &[f64],
    config: &SweepConfig<T>,
) -> Result<SweepOutput> {
    if let Some(r) = ratios.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(Error::invalid(format!("evidence ratio {r} outside (0,1)")));
    }
    let points: Vec<(f64, f64)> = ratios.iter().map(|&r| (r, r)).collect();
    let rows = run_points(graph, &points, &config.models, config)?;
    Ok(SweepOutput::from_rows(rows, ratios, &config.models))
}

/// Sentiment model retrained without its `m` most informative features,
/// for each `m`. Training documents are the graph's labeled edge texts.
pub fn drop_feature_model<T: Scalar>(
    graph: &SignedGraph<T>,
    m: usize,
    sentiment: &SentimentConfig,
) -> Result<SentimentModel<T>> {
    let all: Vec<usize> = (0..graph.edge_count()).collect();
    let docs = labeled_texts(graph, &all);
    train_sentiment(&docs, &SentimentConfig { drop_top: m, ..sentiment.clone() })
}

/// AUCs at a fixed evidence ratio as the sentiment model loses its top `m`
/// features. The network rows
/// do not depend on the text and are computed once.
pub fn run_feature_drop_sweep<T: Scalar>(
    graph: &SignedGraph<T>,
    m_values: &[usize],
    ratio: f64,
    sentiment: &SentimentConfig,
    config: &SweepConfig<T>,
) -> Result<SweepOutput> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::invalid(format!("evidence ratio {ratio} outside (0,1)")));
    }
    let models = [ModelKind::Sentiment, ModelKind::Network, ModelKind::Combined];
    let params: Vec<f64> = m_values.iter().map(|&m| m as f64).collect();
    let network = run_points(graph, &[(f64::NAN, ratio)], &[ModelKind::Network], config)?;
    let mut rows = Vec::new();
    for &m in m_values {
        let model = drop_feature_model(graph, m, sentiment)?;
        let scored = graph.with_probabilities(&score_edges(&model, graph))?;
        let param = m as f64;
        rows.extend(network.iter().map(|r| SweepRow { sweep_param: param, ..*r }));
        rows.extend(run_points(
            &scored,
            &[(param, ratio)],
            &[ModelKind::Sentiment, ModelKind::Combined],
            config,
        )?);
    }
    let model_pos = |m: ModelKind| models.iter().position(|&x| x == m).unwrap_or(usize::MAX);
    let param_pos = |p: f64| params.iter().position(|&x| x == p).unwrap_or(usize::MAX);
    rows.sort_by_key(|r| (param_pos(r.sweep_param), model_pos(r.model), r.fold));
    Ok(SweepOutput::from_rows(rows, &params, &models))
}
