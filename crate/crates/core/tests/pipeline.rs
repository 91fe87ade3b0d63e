//! Text to sentiment to learned weights to inference, end to end.

use edgesign::evaluation::{auc_roc, predict_combined, predict_sentiment_only, ModelOptions};
use edgesign::graph::{apply_evidence_mask, SignedGraph, SynthConfig, TextConfig};
use edgesign::learning::{learn_weights, LearnConfig};
use edgesign::sentiment::{labeled_texts, score_edges, train_sentiment, SentimentConfig, SentimentModel};

fn graph(seed: u64) -> SignedGraph<f64> {
    SynthConfig::new(60, 0.3, 0.05, 0.5).with_text(TextConfig::default()).generate(seed)
}

#[test]
fn sentiment_then_network_on_held_out_graph() {
    let train = graph(1);
    let test = graph(2);
    let all: Vec<usize> = (0..train.edge_count()).collect();
    let cfg = SentimentConfig { seed: 1, ..Default::default() };
    let model: SentimentModel<f64> = train_sentiment(&labeled_texts(&train, &all), &cfg).unwrap();
    assert_eq!(model.sample_size, 1000.min(train.edge_count()));

    let train = train.with_probabilities(&score_edges(&model, &train)).unwrap();
    let test = test.with_probabilities(&score_edges(&model, &test)).unwrap();
    assert!(test.probabilities().iter().all(|p| matches!(p, Some(v) if *v > 0.0 && *v < 1.0)));

    let tr_all: Vec<usize> = (0..train.edge_count()).collect();
    let te_all: Vec<usize> = (0..test.edge_count()).collect();
    let tr_part = apply_evidence_mask(&train, &tr_all, 0.5, 3).unwrap();
    let te_part = apply_evidence_mask(&test, &te_all, 0.5, 4).unwrap();
    let learn = LearnConfig { epochs: 5, step_size: Some(0.01), ..Default::default() };
    let w = learn_weights(&train, &tr_part, &train.probabilities(), &learn).unwrap().weights;

    let sent = auc_roc(&predict_sentiment_only(&test, &te_part, &test.probabilities()).unwrap()).unwrap();
    let comb = auc_roc(&predict_combined(&test, &te_part, &test.probabilities(), &w, &ModelOptions::default()).unwrap()).unwrap();
    assert!(sent > 0.75, "sentiment {sent}");
    assert!(comb > 0.75, "combined {comb}");
}

#[test]
fn sentiment_model_file_round_trip() {
    let g = graph(5);
    let all: Vec<usize> = (0..g.edge_count()).collect();
    let model: SentimentModel<f64> = train_sentiment(&labeled_texts(&g, &all), &SentimentConfig::default()).unwrap();
    let dir = std::env::temp_dir().join(format!("edgesign-pipeline-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("model.json");
    model.save(&path).unwrap();
    let back = SentimentModel::<f64>::load(&path).unwrap();
    assert_eq!(back, model);
    assert_eq!(score_edges(&back, &g), score_edges(&model, &g));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn training_is_reproducible() {
    let g = graph(9);
    let all: Vec<usize> = (0..g.edge_count()).collect();
    let docs = labeled_texts(&g, &all);
    let cfg = SentimentConfig { sample_size: Some(200), seed: 4, ..Default::default() };
    let a: SentimentModel<f64> = train_sentiment(&docs, &cfg).unwrap();
    let b: SentimentModel<f64> = train_sentiment(&docs, &cfg).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(a.sample_size, 200);
}
