//! Per-edge sentiment probabilities: bag-of-words logistic regression,
//! score calibration, agreement combination and feature ablation.

mod calibration;
mod convote;
mod logreg;
mod mi;
mod vocab;

pub use calibration::{platt_scale, CalibrationMap};
pub use convote::{build_convote_graph, calibrate_speeches, parse_speech_scores, SpeechScore};
pub use logreg::{fit_logreg, regularized_gradient, train_logreg, CvScore, FitOptions, LogisticModel};
pub use mi::{mutual_information, rank_features_mi};
pub use vocab::{build_vocabulary, featurize, tokenize, SparseRow, Vocabulary};

use crate::error::{Error, Result};
use crate::graph::SignedGraph;
use crate::rng;
use crate::scalar::{sigmoid, Scalar};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

pub const DEFAULT_BANNED_PREFIXES: [&str; 2] = ["support", "oppos"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SentimentModel<T> {
    pub vocab: Vocabulary,
    pub weights: Vec<T>,
    pub bias: T,
    pub l2_strength: T,
    /// Number of documents the model was trained on.
    #[serde(default)]
    pub sample_size: usize,
    #[serde(default)]
    pub cv_scores: Vec<CvScore<T>>,
}

impl<T: Scalar> SentimentModel<T> {
    /// Zero weights and bias: predicts 0.5 everywhere.
    pub fn neutral(vocab: Vocabulary) -> Self {
        let weights = vec![T::zero(); vocab.len()];
        SentimentModel {
            vocab,
            weights,
            bias: T::zero(),
            l2_strength: T::one(),
            sample_size: 0,
            cv_scores: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.len() != self.vocab.len() {
            return Err(Error::invalid("weight vector does not match vocabulary"));
        }
        if self.weights.iter().chain([&self.bias]).any(|w| !w.is_finite()) {
            return Err(Error::invalid("non-finite model weight"));
        }
        if !(self.l2_strength > T::zero()) {
            return Err(Error::invalid("l2 strength must be positive"));
        }
        Ok(())
    }

    pub fn logit(&self, text: &str) -> T {
        let row = featurize::<T>(text, &self.vocab);
        row.iter().fold(self.bias, |acc, &(i, v)| acc + self.weights[i] * v)
    }

    pub fn predict_proba(&self, text: &str) -> T {
        sigmoid(self.logit(text))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: Self = serde_json::from_str(s)?;
        m.validate()?;
        Ok(m)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

pub fn predict_proba<T: Scalar>(model: &SentimentModel<T>, text: &str) -> T {
    model.predict_proba(text)
}

/// Probability that two parties agree given their independent support
/// probabilities.
pub fn agreement_probability<T: Scalar>(q_u: T, q_v: T) -> T {
    q_u * q_v + (T::one() - q_u) * (T::one() - q_v)
}

/// Mean agreement probability over aligned per-bill support estimates.
pub fn edge_agreement<T: Scalar>(q_u: &[T], q_v: &[T]) -> Result<T> {
    if q_u.is_empty() {
        return Err(Error::invalid("no co-voted bills"));
    }
    if q_u.len() != q_v.len() {
        return Err(Error::invalid("per-bill probability lists differ in length"));
    }
    let sum: T = q_u.iter().zip(q_v).map(|(&a, &b)| agreement_probability(a, b)).sum();
    Ok(sum / T::from_count(q_u.len()))
}

/// Drop the `m` highest-ranked features from the vocabulary.
pub fn drop_top_features(vocab: &Vocabulary, ranking: &[usize], m: usize) -> Result<Vocabulary> {
    if m > vocab.len() {
        return Err(Error::invalid(format!("cannot drop {m} of {} features", vocab.len())));
    }
    Ok(vocab.without(&ranking[..m.min(ranking.len())]))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SentimentConfig {
    pub max_features: usize,
    pub banned_prefixes: Vec<String>,
    pub l2_grid: Vec<f64>,
    pub cv_folds: usize,
    /// Train on a random sample of this many documents; `None` uses all.
    pub sample_size: Option<usize>,
    /// Remove this many top mutual-information features before training.
    pub drop_top: usize,
    pub seed: u64,
}

impl Default for SentimentConfig {
    fn default() -> Self {
        SentimentConfig {
            max_features: 10_000,
            banned_prefixes: DEFAULT_BANNED_PREFIXES.iter().map(|s| s.to_string()).collect(),
            l2_grid: vec![1e-4, 1e-3, 1e-2, 1e-1, 1.0],
            cv_folds: 5,
            sample_size: Some(1000),
            drop_top: 0,
            seed: 0,
        }
    }
}

/// Train a bag-of-words model on labeled documents (`true` = positive).
pub fn train_sentiment<T: Scalar, S: AsRef<str>>(
    docs: &[(bool, S)],
    config: &SentimentConfig,
) -> Result<SentimentModel<T>> {
    let mut idx: Vec<usize> = (0..docs.len()).collect();
    if let Some(k) = config.sample_size {
        if k < docs.len() {
            let mut r = rng::seeded(rng::substream(config.seed, "sentiment-sample"));
            idx.shuffle(&mut r);
            idx.truncate(k);
            idx.sort_unstable();
        }
    }
    let texts: Vec<&str> = idx.iter().map(|&i| docs[i].1.as_ref()).collect();
    let labels: Vec<bool> = idx.iter().map(|&i| docs[i].0).collect();
    let banned: Vec<&str> = config.banned_prefixes.iter().map(String::as_str).collect();
    let mut vocab = build_vocabulary(texts.iter().copied(), config.max_features, &banned)?;
    let mut rows: Vec<SparseRow<T>> = texts.iter().map(|t| featurize(t, &vocab)).collect();
    if config.drop_top > 0 {
        let ranking = rank_features_mi(&rows, vocab.len(), &labels);
        vocab = drop_top_features(&vocab, &ranking, config.drop_top.min(vocab.len()))?;
        rows = texts.iter().map(|t| featurize(t, &vocab)).collect();
    }
    let grid: Vec<T> = config.l2_grid.iter().map(|&l| T::lit(l)).collect();
    let (fit, cv_scores) =
        train_logreg(&rows, vocab.len(), &labels, &grid, config.cv_folds, rng::substream(config.seed, "sentiment-cv"))?;
    Ok(SentimentModel {
        vocab,
        weights: fit.weights,
        bias: fit.bias,
        l2_strength: fit.l2_strength,
        sample_size: idx.len(),
        cv_scores,
    })
}

/// `(truth, text)` for each listed edge that has both a known sign and text.
pub fn labeled_texts<'g, T: Scalar>(graph: &'g SignedGraph<T>, edges: &[usize]) -> Vec<(bool, &'g str)> {
    edges
        .iter()
        .filter_map(|&i| {
            let e = graph.edge(i);
            Some((e.sign.as_bool()?, e.text.as_deref()?))
        })
        .collect()
}

/// Sentiment probability for every edge that carries text.
pub fn score_edges<T: Scalar>(model: &SentimentModel<T>, graph: &SignedGraph<T>) -> Vec<Option<T>> {
    graph
        .edges()
        .iter()
        .map(|e| e.text.as_deref().map(|t| model.predict_proba(t)))
        .collect()
}

/// Parse a `label<TAB>text` corpus. Labels are `+1`/`1` or `-1`/`0`.
pub fn parse_comment_corpus<R: Read>(input: R) -> Result<Vec<(bool, String)>> {
    let mut out = Vec::new();
    for (i, line) in BufReader::new(input).lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (label, text) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(i + 1, "expected label<TAB>text"))?;
        let y = match label.trim() {
            "+1" | "1" => true,
            "-1" | "0" => false,
            other => return Err(Error::parse(i + 1, format!("bad label {other:?}"))),
        };
        out.push((y, text.to_string()));
    }
    Ok(out)
}
