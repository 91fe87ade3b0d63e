//! Planted two-camp signed graphs.
//!
//! Nodes join one of two camps; an edge is positive iff its endpoints share a
//! camp, then flipped with probability `camp_flip_noise`. Without flips every
//! triangle is balanced. Each `p_e` is drawn from Beta(5,2) (true positive) or
//! Beta(2,5) (true negative) folded onto the correct side of 0.5, and with
//! probability `sentiment_noise` replaced by a Uniform(0,1) draw. Optional
//! comment text is generated from a planted lexicon of sign cues with graded
//! reliability.

use super::{SignState, SignedEdge, SignedGraph};
use crate::rng;
use crate::scalar::Scalar;
use rand::Rng;
use rand_distr::{Beta, Distribution};

#[derive(Clone, Debug, PartialEq)]
pub struct TextConfig {
    /// Number of cue pairs `pos{k}` / `neg{k}`; cue `k` agrees with the true
    /// sign with probability falling linearly from 0.95 (k = 0) to 0.5.
    pub cue_words: usize,
    pub filler_words: usize,
    pub min_tokens: usize,
    pub max_tokens: usize,
    /// Probability that a token is a cue rather than filler.
    pub cue_rate: f64,
    /// Probability that a comment opens with an explicit `support`/`oppose` word.
    pub leak_rate: f64,
}

impl Default for TextConfig {
    fn default() -> Self {
        TextConfig {
            cue_words: 30,
            filler_words: 200,
            min_tokens: 6,
            max_tokens: 20,
            cue_rate: 0.3,
            leak_rate: 0.3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthConfig {
    pub nodes: usize,
    pub edge_prob: f64,
    pub camp_flip_noise: f64,
    pub sentiment_noise: f64,
    pub directed: bool,
    pub text: Option<TextConfig>,
}

impl SynthConfig {
    pub fn new(nodes: usize, edge_prob: f64, camp_flip_noise: f64, sentiment_noise: f64) -> Self {
        SynthConfig {
            nodes,
            edge_prob,
            camp_flip_noise,
            sentiment_noise,
            directed: false,
            text: None,
        }
    }

    pub fn directed(mut self, directed: bool) -> Self {
        self.directed = directed;
        self
    }

    pub fn with_text(mut self, text: TextConfig) -> Self {
        self.text = Some(text);
        self
    }

    /// Every random component draws from its own sub-stream of `seed`.
    pub fn generate<T: Scalar>(&self, seed: u64) -> SignedGraph<T> {
        let clamp = |x: f64| x.clamp(0.0, 1.0);
        let (edge_prob, flip, noise) = (
            clamp(self.edge_prob),
            clamp(self.camp_flip_noise),
            clamp(self.sentiment_noise),
        );
        let mut structure = rng::seeded(rng::substream(seed, "structure"));
        let mut sentiment = rng::seeded(rng::substream(seed, "sentiment"));
        let mut text_rng = rng::seeded(rng::substream(seed, "text"));
        let pos_beta = Beta::new(5.0, 2.0).expect("valid beta");
        let neg_beta = Beta::new(2.0, 5.0).expect("valid beta");

        let camps: Vec<bool> = (0..self.nodes).map(|_| structure.random_bool(0.5)).collect();
        let mut edges = Vec::new();
        for u in 0..self.nodes {
            for v in u + 1..self.nodes {
                if !structure.random_bool(edge_prob) {
                    continue;
                }
                let mut positive = camps[u] == camps[v];
                if structure.random_bool(flip) {
                    positive = !positive;
                }
                let (s, t) = if self.directed && structure.random_bool(0.5) {
                    (v, u)
                } else {
                    (u, v)
                };
                let p = if sentiment.random_bool(noise) {
                    sentiment.random::<f64>()
                } else if positive {
                    let b: f64 = pos_beta.sample(&mut sentiment);
                    b.max(1.0 - b)
                } else {
                    let b: f64 = neg_beta.sample(&mut sentiment);
                    b.min(1.0 - b)
                };
                let mut edge = SignedEdge::new(s, t, SignState::from_bool(positive)).with_p(T::lit(p));
                if let Some(cfg) = &self.text {
                    edge.text = Some(comment(cfg, positive, &mut text_rng));
                }
                edges.push(edge);
            }
        }
        SignedGraph::new(self.nodes, self.directed, edges).expect("generated graph is valid")
    }
}

/// Convenience wrapper over [`SynthConfig`] for undirected graphs without text.
pub fn generate_synthetic<T: Scalar>(
    nodes: usize,
    edge_prob: f64,
    camp_flip_noise: f64,
    sentiment_noise: f64,
    rng_seed: u64,
) -> SignedGraph<T> {
    SynthConfig::new(nodes, edge_prob, camp_flip_noise, sentiment_noise).generate(rng_seed)
}

fn comment(cfg: &TextConfig, positive: bool, rng: &mut rng::Rng) -> String {
    let len = rng.random_range(cfg.min_tokens..=cfg.max_tokens.max(cfg.min_tokens));
    let mut words = Vec::with_capacity(len + 1);
    if rng.random_bool(cfg.leak_rate.clamp(0.0, 1.0)) {
        let leak = if positive {
            ["support", "supporting", "strong support"]
        } else {
            ["oppose", "opposed", "opposing"]
        };
        words.push(leak[rng.random_range(0..leak.len())].to_string());
    }
    let k_max = cfg.cue_words.max(1);
    for _ in 0..len {
        if cfg.cue_words > 0 && rng.random_bool(cfg.cue_rate.clamp(0.0, 1.0)) {
            // lower k is both more frequent and more reliable
            let u: f64 = rng.random();
            let k = ((u * u) * k_max as f64) as usize;
            let k = k.min(k_max - 1);
            let reliability = if k_max > 1 {
                0.95 - 0.45 * k as f64 / (k_max - 1) as f64
            } else {
                0.95
            };
            let agrees = rng.random_bool(reliability);
            let word = if agrees == positive { "pos" } else { "neg" };
            words.push(format!("{word}{k}"));
        } else if cfg.filler_words > 0 {
            let u: f64 = rng.random();
            let f = ((u * u) * cfg.filler_words as f64) as usize;
            words.push(format!("w{}", f.min(cfg.filler_words - 1)));
        }
    }
    words.join(" ")
}
