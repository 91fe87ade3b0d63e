//! Tunable parameters shared by the subcommands. Every field can come from a
//! flag or from the TOML file given with `--config`; a flag wins over the
//! file, and the file wins over the built-in default.

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use edgesign::evaluation::{FoldScheme, LooConfig, ModelKind, ModelOptions, SweepConfig};
use edgesign::inference::SolverOptions;
use edgesign::learning::LearnConfig;
use edgesign::sentiment::SentimentConfig;
use serde::Deserialize;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sampling {
    Bfs,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hinge {
    Linear,
    Squared,
}

#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Tunables {
    /// Master seed; every random choice derives from it [default: 0]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (0 lets the pool decide) [default: 0]
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// ADMM step parameter [default: 1]
    #[arg(long, global = true)]
    pub rho: Option<f64>,
    /// Absolute residual tolerance [default: 1e-5]
    #[arg(long, global = true)]
    pub eps_abs: Option<f64>,
    /// Relative residual tolerance [default: 1e-4]
    #[arg(long, global = true)]
    pub eps_rel: Option<f64>,
    /// ADMM iteration cap [default: 20000]
    #[arg(long, global = true)]
    pub max_iter: Option<usize>,
    /// Triangle hinge form [default: squared]
    #[arg(long, global = true, value_enum)]
    pub hinge: Option<Hinge>,

    /// Perceptron epochs [default: 50]
    #[arg(long, global = true)]
    pub epochs: Option<usize>,
    /// Perceptron step size [default: 0.1 / number of training targets]
    #[arg(long, global = true)]
    pub step_size: Option<f64>,

    /// Fraction of signs revealed as evidence
    #[arg(long, global = true)]
    pub evidence_ratio: Option<f64>,
    /// Evidence ratios of an evidence sweep [default: 0.125,0.25,0.5,0.75]
    #[arg(long, global = true, value_delimiter = ',')]
    pub ratios: Option<Vec<f64>>,
    /// Train/test sampling [default: bfs]
    #[arg(long, global = true, value_enum)]
    pub sampling: Option<Sampling>,
    /// Number of BFS subgraphs [default: 10]
    #[arg(long, global = true)]
    pub subgraphs: Option<usize>,
    /// Nodes per BFS subgraph [default: 350]
    #[arg(long, global = true)]
    pub subgraph_nodes: Option<usize>,
    /// Number of random edge folds [default: 10]
    #[arg(long, global = true)]
    pub folds: Option<usize>,
    /// Models to evaluate [default: sentiment,network,combined]
    #[arg(long, global = true, value_delimiter = ',')]
    pub models: Option<Vec<String>>,

    /// Vocabulary size [default: 10000]
    #[arg(long, global = true)]
    pub max_features: Option<usize>,
    /// Training sample size, 0 for all documents [default: 1000]
    #[arg(long, global = true)]
    pub sample_size: Option<usize>,
    /// Cross-validation folds for the regularization strength [default: 5]
    #[arg(long, global = true)]
    pub cv_folds: Option<usize>,
    /// Regularization strengths tried by cross-validation [default: 1e-4,1e-3,1e-2,1e-1,1]
    #[arg(long, global = true, value_delimiter = ',')]
    pub l2_grid: Option<Vec<f64>>,
}

macro_rules! overlay {
    ($a:ident, $b:ident; $($f:ident),*) => { $( if $a.$f.is_none() { $a.$f = $b.$f; } )* };
}

impl Tunables {
    /// Fill every unset field from `file`.
    pub fn overlay(mut self, file: Tunables) -> Self {
        overlay!(self, file; seed, threads, rho, eps_abs, eps_rel, max_iter, hinge, epochs,
            step_size, evidence_ratio, ratios, sampling, subgraphs, subgraph_nodes, folds,
            models, max_features, sample_size, cv_folds, l2_grid);
        self
    }

    pub fn load(path: &Path) -> Result<Tunables> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn threads(&self) -> usize {
        self.threads.unwrap_or(0)
    }

    pub fn squared(&self) -> bool {
        self.hinge.unwrap_or(Hinge::Squared) == Hinge::Squared
    }

    pub fn solver(&self) -> Result<SolverOptions<f64>> {
        let d = SolverOptions::default();
        let s = SolverOptions {
            rho: self.rho.unwrap_or(d.rho),
            eps_abs: self.eps_abs.unwrap_or(d.eps_abs),
            eps_rel: self.eps_rel.unwrap_or(d.eps_rel),
            max_iter: self.max_iter.unwrap_or(d.max_iter),
            trace: false,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn model_options(&self) -> Result<ModelOptions<f64>> {
        Ok(ModelOptions { squared: self.squared(), solver: self.solver()? })
    }

    pub fn learn(&self) -> Result<LearnConfig<f64>> {
        let cfg = LearnConfig {
            epochs: self.epochs.unwrap_or(50),
            step_size: self.step_size,
            init: None,
            squared: self.squared(),
            solver: self.solver()?,
        };
        if cfg.epochs == 0 {
            bail!("--epochs must be at least 1");
        }
        if let Some(s) = cfg.step_size {
            if !(s > 0.0 && s.is_finite()) {
                bail!("--step-size must be positive");
            }
        }
        Ok(cfg)
    }

    /// Single evidence ratio, required to lie in `(0,1)`.
    pub fn evidence_ratio(&self, default: f64) -> Result<f64> {
        let r = self.evidence_ratio.unwrap_or(default);
        if !(r > 0.0 && r < 1.0) {
            bail!("--evidence-ratio {r} outside (0,1)");
        }
        Ok(r)
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.ratios.clone().unwrap_or_else(|| vec![0.125, 0.25, 0.5, 0.75])
    }

    pub fn scheme(&self) -> FoldScheme {
        match self.sampling.unwrap_or(Sampling::Bfs) {
            Sampling::Bfs => FoldScheme::Bfs {
                subgraphs: self.subgraphs.unwrap_or(10),
                nodes: self.subgraph_nodes.unwrap_or(350),
            },
            Sampling::Random => FoldScheme::Random { folds: self.folds.unwrap_or(10) },
        }
    }

    pub fn models(&self, default: &[ModelKind]) -> Result<Vec<ModelKind>> {
        match &self.models {
            None => Ok(default.to_vec()),
            Some(names) => names
                .iter()
                .map(|n| n.parse::<ModelKind>().map_err(|e| anyhow::anyhow!("{e}")))
                .collect(),
        }
    }

    fn l2_grid(&self, default: Vec<f64>) -> Result<Vec<f64>> {
        let grid = self.l2_grid.clone().unwrap_or(default);
        if grid.is_empty() || grid.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            bail!("--l2-grid needs at least one positive value");
        }
        Ok(grid)
    }

    pub fn sentiment(&self) -> Result<SentimentConfig> {
        let d = SentimentConfig::default();
        Ok(SentimentConfig {
            max_features: self.max_features.unwrap_or(d.max_features),
            sample_size: match self.sample_size {
                Some(0) => None,
                Some(k) => Some(k),
                None => d.sample_size,
            },
            cv_folds: self.cv_folds.unwrap_or(d.cv_folds),
            l2_grid: self.l2_grid(d.l2_grid)?,
            seed: self.seed(),
            ..d
        })
    }

    pub fn loo(&self, include_sentiment: bool) -> Result<LooConfig> {
        let d = LooConfig::default();
        Ok(LooConfig {
            include_sentiment,
            l2_grid: self.l2_grid(d.l2_grid)?,
            cv_folds: self.cv_folds.unwrap_or(d.cv_folds),
            seed: edgesign::rng::substream(self.seed(), "loo-cv"),
        })
    }

    pub fn sweep(&self, default_models: &[ModelKind]) -> Result<SweepConfig<f64>> {
        let models = self.models(default_models)?;
        let include = models.contains(&ModelKind::LooSent);
        Ok(SweepConfig {
            scheme: self.scheme(),
            models,
            seeds: vec![self.seed()],
            learn: self.learn()?,
            loo: self.loo(include)?,
        })
    }
}
