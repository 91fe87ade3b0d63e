use crate::settings::Tunables;
use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use edgesign::evaluation::{
    auc_neg_pr, auc_roc, infer_unknown, make_folds, mean_and_standard_error, neg_pr_curve,
    roc_curve, run_evidence_sweep, run_feature_drop_sweep, score_loo, train_loo, write_curve_csv,
    ModelKind, ScoredEdge,
};
use edgesign::graph::{
    apply_evidence_mask, read_edge_list, write_edge_list, EdgeRole, EvidencePartition,
    SignedGraph, SynthConfig, TextConfig,
};
use edgesign::inference::write_trace_csv;
use edgesign::learning::{learn_weights, write_learning_log};
use edgesign::reduction::{verify_correspondence, TlsgInstance};
use edgesign::rng::substream;
use edgesign::sentiment::{
    build_convote_graph, calibrate_speeches, labeled_texts, parse_comment_corpus,
    parse_speech_scores, score_edges,
};
use edgesign::{Graph, Sentiment, Weights};
use serde::Serialize;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

const BUNDLED_TLSG: &str = include_str!("../data/tlsg_2x2x2.txt");

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut out = create(path)?;
    out.write_all(text.as_bytes())?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

fn write_graph(graph: &Graph, path: &Path) -> Result<()> {
    let mut out = create(path)?;
    write_edge_list(graph, &mut out)?;
    out.flush()?;
    Ok(())
}

fn read_graph(path: &Path) -> Result<Graph> {
    read_edge_list(path).with_context(|| format!("reading graph {}", path.display()))
}

fn read_weights(path: &Path) -> Result<Weights> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let w: Weights = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    w.validate()?;
    Ok(w)
}

/// The signed edges of `graph`, as a subgraph, or the graph itself when every
/// edge is signed.
fn signed_part(graph: &Graph) -> Graph {
    let signed: Vec<usize> = (0..graph.edge_count()).filter(|&e| graph.truth(e).is_some()).collect();
    if signed.len() == graph.edge_count() {
        return graph.clone();
    }
    log::warn!("ignoring {} unsigned edges", graph.edge_count() - signed.len());
    graph.edge_subgraph(&signed)
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 300)]
    nodes: usize,
    /// Probability that a node pair is linked
    #[arg(long, default_value_t = 0.1)]
    edge_prob: f64,
    /// Probability that a sign disagrees with the planted camps
    #[arg(long, default_value_t = 0.05)]
    flip_noise: f64,
    /// Spread of the sentiment probabilities around the true sign
    #[arg(long, default_value_t = 0.5)]
    sentiment_noise: f64,
    #[arg(long)]
    directed: bool,
    /// Attach a synthetic comment to every edge
    #[arg(long)]
    text: bool,
    #[arg(long, short)]
    out: PathBuf,
}

pub fn synth(a: SynthArgs, t: &Tunables) -> Result<()> {
    if a.nodes < 2 {
        bail!("--nodes must be at least 2");
    }
    for (name, v) in [("edge-prob", a.edge_prob), ("flip-noise", a.flip_noise), ("sentiment-noise", a.sentiment_noise)] {
        if !(0.0..=1.0).contains(&v) {
            bail!("--{name} {v} outside [0,1]");
        }
    }
    let mut cfg = SynthConfig::new(a.nodes, a.edge_prob, a.flip_noise, a.sentiment_noise).directed(a.directed);
    if a.text {
        cfg = cfg.with_text(TextConfig::default());
    }
    let g: Graph = cfg.generate(t.seed());
    write_graph(&g, &a.out)
}

#[derive(Args, Debug)]
pub struct TrainSentimentArgs {
    /// Labeled comments, one `label<TAB>text` per line
    #[arg(long, required_unless_present = "graph", conflicts_with = "graph")]
    corpus: Option<PathBuf>,
    /// Use the texts of the signed edges of this graph instead
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Remove this many top mutual-information features before fitting
    #[arg(long, default_value_t = 0)]
    drop_top: usize,
    #[arg(long, short)]
    out: PathBuf,
}

pub fn train_sentiment(a: TrainSentimentArgs, t: &Tunables) -> Result<()> {
    let cfg = edgesign::sentiment::SentimentConfig { drop_top: a.drop_top, ..t.sentiment()? };
    let model: Sentiment = if let Some(path) = &a.corpus {
        let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        let docs = parse_comment_corpus(f).with_context(|| format!("parsing {}", path.display()))?;
        edgesign::sentiment::train_sentiment(&docs, &cfg)?
    } else {
        let g = read_graph(a.graph.as_deref().expect("clap enforces one input"))?;
        let all: Vec<usize> = (0..g.edge_count()).collect();
        let docs = labeled_texts(&g, &all);
        if docs.is_empty() {
            bail!("graph has no signed edges with text");
        }
        edgesign::sentiment::train_sentiment(&docs, &cfg)?
    };
    log::info!("trained on {} documents, l2 {}", model.sample_size, model.l2_strength);
    write_text(&a.out, &model.to_json()?)
}

#[derive(Args, Debug)]
pub struct PredictSentimentArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, short)]
    out: PathBuf,
}

/// Edges with text get the model's probability; others keep theirs.
pub fn predict_sentiment(a: PredictSentimentArgs) -> Result<()> {
    let model = Sentiment::load(&a.model).with_context(|| format!("loading {}", a.model.display()))?;
    let g = read_graph(&a.graph)?;
    let p: Vec<Option<f64>> = score_edges(&model, &g)
        .into_iter()
        .zip(g.probabilities())
        .map(|(new, old)| new.or(old))
        .collect();
    write_graph(&g.with_probabilities(&p)?, &a.out)
}

#[derive(Args, Debug)]
pub struct LearnArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Learn without the sentiment probabilities
    #[arg(long)]
    network_only: bool,
    /// Per-epoch log CSV
    #[arg(long)]
    log: Option<PathBuf>,
    #[arg(long, short)]
    out: PathBuf,
}

/// Reveals `--evidence-ratio` (default 0.5) of the signed edges and trains on
/// the rest.
pub fn learn(a: LearnArgs, t: &Tunables) -> Result<()> {
    let g = signed_part(&read_graph(&a.graph)?);
    let ratio = t.evidence_ratio(0.5)?;
    let all: Vec<usize> = (0..g.edge_count()).collect();
    let part = apply_evidence_mask(&g, &all, ratio, substream(t.seed(), "learn-mask"))?;
    let p = if a.network_only { vec![None; g.edge_count()] } else { g.probabilities() };
    let outcome = learn_weights(&g, &part, &p, &t.learn()?)?;
    write_text(&a.out, &serde_json::to_string_pretty(&outcome.weights)?)?;
    if let Some(path) = &a.log {
        let mut out = create(path)?;
        write_learning_log(&outcome.log, &mut out)?;
        out.flush()?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InferModel {
    Sentiment,
    Network,
    Combined,
}

#[derive(Args, Debug)]
pub struct InferArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Cost weights JSON; not needed for the sentiment model
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Use balance-consistent weights instead of a weights file
    #[arg(long, conflicts_with = "weights")]
    balance: bool,
    #[arg(long, value_enum, default_value_t = InferModel::Combined)]
    model: InferModel,
    /// Hide signed edges and score them. Without it the targets are the
    /// edges whose sign is `?`.
    #[arg(long)]
    holdout: bool,
    /// Solver diagnostics and, with --holdout, AUCs (JSON)
    #[arg(long)]
    report: Option<PathBuf>,
    /// Directory for ROC and negative-class PR curve points (with --holdout)
    #[arg(long)]
    curves: Option<PathBuf>,
    /// Per-iteration solver trace CSV
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Scored edges CSV
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Serialize)]
struct InferReport {
    model: &'static str,
    targets: usize,
    iterations: usize,
    converged: bool,
    objective: f64,
    primal_residual: f64,
    dual_residual: f64,
    auc_roc: Option<f64>,
    auc_neg_pr: Option<f64>,
}

pub fn infer(a: InferArgs, t: &Tunables) -> Result<()> {
    let g = read_graph(&a.graph)?;
    let part = if a.holdout {
        let signed: Vec<usize> = (0..g.edge_count()).filter(|&e| g.truth(e).is_some()).collect();
        apply_evidence_mask(&g, &signed, t.evidence_ratio(0.5)?, substream(t.seed(), "infer-mask"))?
    } else {
        EvidencePartition::from_roles(
            (0..g.edge_count())
                .map(|e| if g.truth(e).is_some() { EdgeRole::Evidence } else { EdgeRole::Target })
                .collect(),
        )
    };
    let weights = match (&a.weights, a.balance) {
        (Some(path), _) => Some(read_weights(path)?),
        (None, true) => Some(Weights::balance(edgesign::learning::training_prior(&g))),
        (None, false) => None,
    };
    let mut opts = t.model_options()?;
    opts.solver.trace = a.trace.is_some();
    let p = g.probabilities();

    let mut report = InferReport {
        model: match a.model {
            InferModel::Sentiment => "sentiment",
            InferModel::Network => "network",
            InferModel::Combined => "combined",
        },
        targets: part.targets().len(),
        iterations: 0,
        converged: true,
        objective: 0.0,
        primal_residual: 0.0,
        dual_residual: 0.0,
        auc_roc: None,
        auc_neg_pr: None,
    };
    let scores: Vec<(usize, f64)> = if a.model == InferModel::Sentiment {
        part.targets()
            .into_iter()
            .map(|e| Ok((e, p[e].ok_or(edgesign::Error::MissingProbability { edge: e })?)))
            .collect::<Result<_>>()?
    } else {
        let w = weights.context("--weights or --balance is required for this model")?;
        let (w, p) = if a.model == InferModel::Network {
            (w.without_edge_costs(), vec![None; g.edge_count()])
        } else {
            (w, p)
        };
        let (values, result) = infer_unknown(&g, &part, &p, &w, &opts)?;
        report.iterations = result.iterations;
        report.converged = result.converged;
        report.objective = result.objective;
        report.primal_residual = result.primal_residual;
        report.dual_residual = result.dual_residual;
        if let Some(path) = &a.trace {
            let mut out = create(path)?;
            write_trace_csv(&result.trace, &mut out)?;
            out.flush()?;
        }
        values.into_iter().filter(|&(e, _)| part.role(e) == EdgeRole::Target).collect()
    };

    let mut out = create(&a.out)?;
    writeln!(out, "source,target,score,truth")?;
    for &(e, s) in &scores {
        let edge = g.edge(e);
        let truth = match g.truth(e) {
            Some(true) => "+1",
            Some(false) => "-1",
            None => "?",
        };
        writeln!(out, "{},{},{},{}", g.label(edge.source), g.label(edge.target), s, truth)?;
    }
    out.flush()?;

    if a.holdout {
        let scored: Vec<ScoredEdge<f64>> = scores
            .iter()
            .map(|&(e, score)| ScoredEdge { edge: e, score, truth: g.truth(e).unwrap_or(false) })
            .collect();
        report.auc_roc = Some(auc_roc(&scored)?);
        report.auc_neg_pr = Some(auc_neg_pr(&scored)?);
        if let Some(dir) = &a.curves {
            let mut roc = create(&dir.join("roc.csv"))?;
            write_curve_csv(&roc_curve(&scored)?, "fpr", "tpr", &mut roc)?;
            roc.flush()?;
            let mut pr = create(&dir.join("neg_pr.csv"))?;
            write_curve_csv(&neg_pr_curve(&scored)?, "recall", "precision", &mut pr)?;
            pr.flush()?;
        }
    } else if a.curves.is_some() {
        log::warn!("--curves needs --holdout; no curves written");
    }
    if let Some(path) = &a.report {
        write_text(path, &serde_json::to_string_pretty(&report)?)?;
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Sweep over these numbers of dropped sentiment features at a fixed
    /// evidence ratio instead of over evidence ratios. The sentiment model is
    /// retrained on the graph's own edge texts for each value.
    #[arg(long, value_delimiter = ',')]
    drop_features: Option<Vec<usize>>,
    /// Receives `rows.csv` and `summary.json`
    #[arg(long)]
    out_dir: PathBuf,
}

pub fn sweep(a: SweepArgs, t: &Tunables) -> Result<()> {
    let g = signed_part(&read_graph(&a.graph)?);
    let out = match &a.drop_features {
        None => {
            let cfg = t.sweep(&[ModelKind::Sentiment, ModelKind::Network, ModelKind::Combined])?;
            run_evidence_sweep(&g, &t.ratios(), &cfg)?
        }
        Some(ms) => {
            let cfg = t.sweep(&[])?;
            run_feature_drop_sweep(&g, ms, t.evidence_ratio(0.5)?, &t.sentiment()?, &cfg)?
        }
    };
    let mut rows = create(&a.out_dir.join("rows.csv"))?;
    out.write_csv(&mut rows)?;
    rows.flush()?;
    write_text(&a.out_dir.join("summary.json"), &out.summary_json()?)
}

#[derive(Args, Debug)]
pub struct LooArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Also fit the variant with the sentiment probability as a feature
    #[arg(long)]
    with_sentiment: bool,
    /// Receives `rows.csv` and `summary.json`
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Serialize)]
struct LooSummary {
    model: ModelKind,
    folds: usize,
    auc_roc_mean: f64,
    auc_roc_se: f64,
    auc_neg_pr_mean: f64,
    auc_neg_pr_se: f64,
}

/// Trains on each sampled subgraph and scores the next, every edge with all
/// other signs known.
pub fn loo(a: LooArgs, t: &Tunables) -> Result<()> {
    let g = signed_part(&read_graph(&a.graph)?);
    let folds = make_folds(&g, t.scheme(), t.seed())?;
    let mut variants = vec![(ModelKind::Loo, false)];
    if a.with_sentiment {
        variants.push((ModelKind::LooSent, true));
    }
    let mut rows = create(&a.out_dir.join("rows.csv"))?;
    writeln!(rows, "model,fold,auc_roc,auc_neg_pr")?;
    let mut summary = Vec::new();
    for (kind, include) in variants {
        let cfg = t.loo(include)?;
        let (mut roc, mut pr) = (Vec::new(), Vec::new());
        for f in &folds {
            let model = train_loo(&f.train, &cfg)?;
            let scored = score_loo(&model, &f.test, include)?;
            match (auc_roc(&scored), auc_neg_pr(&scored)) {
                (Ok(r), Ok(p)) => {
                    writeln!(rows, "{kind},{},{r},{p}", f.index)?;
                    roc.push(r);
                    pr.push(p);
                }
                _ => log::warn!("skipping fold {}: test edges hold a single class", f.index),
            }
        }
        let (auc_roc_mean, auc_roc_se) = mean_and_standard_error(&roc);
        let (auc_neg_pr_mean, auc_neg_pr_se) = mean_and_standard_error(&pr);
        summary.push(LooSummary { model: kind, folds: roc.len(), auc_roc_mean, auc_roc_se, auc_neg_pr_mean, auc_neg_pr_se });
    }
    rows.flush()?;
    write_text(&a.out_dir.join("summary.json"), &serde_json::to_string_pretty(&summary)?)
}

#[derive(Args, Debug)]
pub struct ReduceVerifyArgs {
    /// Instance file (`w h` header, then `u v c` lines); defaults to the
    /// bundled 2x2x2 sample
    #[arg(long, conflicts_with = "random")]
    instance: Option<PathBuf>,
    /// Draw a random instance of this size, e.g. `2x2`, from --seed
    #[arg(long)]
    random: Option<String>,
    /// Certificate JSON; printed to stdout when absent
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn parse_size(s: &str) -> Result<(usize, usize)> {
    let (w, h) = s.split_once('x').context("size must look like WxH")?;
    Ok((w.trim().parse()?, h.trim().parse()?))
}

/// Exits with an error when the certificate fails.
pub fn reduce_verify(a: ReduceVerifyArgs, t: &Tunables) -> Result<()> {
    let inst = match (&a.instance, &a.random) {
        (Some(path), _) => TlsgInstance::read(path).with_context(|| format!("reading {}", path.display()))?,
        (None, Some(size)) => {
            let (w, h) = parse_size(size)?;
            TlsgInstance::random(w, h, t.seed())?
        }
        (None, None) => TlsgInstance::parse(BUNDLED_TLSG.as_bytes())?,
    };
    let cert = verify_correspondence(&inst)?;
    let json = cert.to_json()?;
    match &a.out {
        Some(path) => write_text(path, &json)?,
        None => println!("{json}"),
    }
    if !cert.passed {
        bail!("certificate failed: {:?}", cert.checks);
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct ConvoteGraphArgs {
    /// Speech scores: `speaker<TAB>bill<TAB>raw_score<TAB>vote` per line
    #[arg(long)]
    speeches: PathBuf,
    #[arg(long, short)]
    out: PathBuf,
}

pub fn convote_graph(a: ConvoteGraphArgs) -> Result<()> {
    let f = File::open(&a.speeches).with_context(|| format!("opening {}", a.speeches.display()))?;
    let speeches = parse_speech_scores::<f64, _>(f).with_context(|| format!("parsing {}", a.speeches.display()))?;
    let cal = calibrate_speeches(&speeches)?;
    let g: Graph = build_convote_graph(&speeches, &cal)?;
    write_graph(&g, &a.out)
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Serialize)]
struct GraphStats {
    directed: bool,
    nodes: usize,
    edges: usize,
    signed_edges: usize,
    positive_fraction: Option<f64>,
    triangles: usize,
}

pub fn stats(a: StatsArgs) -> Result<()> {
    let g: SignedGraph<f64> = read_graph(&a.graph)?;
    let s = GraphStats {
        directed: g.is_directed(),
        nodes: g.node_count(),
        edges: g.edge_count(),
        signed_edges: (0..g.edge_count()).filter(|&e| g.truth(e).is_some()).count(),
        positive_fraction: g.positive_fraction(),
        triangles: g.triangles().len(),
    };
    println!("{}", serde_json::to_string_pretty(&s)?);
    Ok(())
}
