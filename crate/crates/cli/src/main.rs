mod commands;
mod settings;

use anyhow::Result;
use clap::{Parser, Subcommand};
use settings::Tunables;
use std::path::PathBuf;

/// Predict the signs of edges in signed social networks by combining text
/// sentiment with triangle structure.
#[derive(Parser, Debug)]
#[command(name = "edgesign", version)]
struct Cli {
    /// TOML file of default parameters; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    tunables: Tunables,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a planted two-camp signed graph
    Synth(commands::SynthArgs),
    /// Fit the bag-of-words sentiment classifier
    TrainSentiment(commands::TrainSentimentArgs),
    /// Fill the probability column of an edge list from a sentiment model
    PredictSentiment(commands::PredictSentimentArgs),
    /// Learn cost weights with the averaged perceptron
    Learn(commands::LearnArgs),
    /// Infer the signs of the unknown edges of a graph
    Infer(commands::InferArgs),
    /// Evaluate models across evidence ratios or dropped features
    Sweep(commands::SweepArgs),
    /// Evaluate the leave-one-out triangle-feature baseline
    Loo(commands::LooArgs),
    /// Check the spin-glass reduction on a small instance
    ReduceVerify(commands::ReduceVerifyArgs),
    /// Build a speaker agreement graph from scored floor speeches
    ConvoteGraph(commands::ConvoteGraphArgs),
    /// Print summary counts of a graph as JSON
    Stats(commands::StatsArgs),
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    let tunables = match &cli.config {
        Some(path) => cli.tunables.overlay(Tunables::load(path)?),
        None => cli.tunables,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(tunables.threads())
        .build_global()?;
    let t = &tunables;
    match cli.command {
        Command::Synth(a) => commands::synth(a, t),
        Command::TrainSentiment(a) => commands::train_sentiment(a, t),
        Command::PredictSentiment(a) => commands::predict_sentiment(a),
        Command::Learn(a) => commands::learn(a, t),
        Command::Infer(a) => commands::infer(a, t),
        Command::Sweep(a) => commands::sweep(a, t),
        Command::Loo(a) => commands::loo(a, t),
        Command::ReduceVerify(a) => commands::reduce_verify(a, t),
        Command::ConvoteGraph(a) => commands::convote_graph(a),
        Command::Stats(a) => commands::stats(a),
    }
}
