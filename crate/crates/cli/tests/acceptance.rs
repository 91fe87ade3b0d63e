//! Acceptance suite. Prints one line per criterion and exits non-zero if any
//! criterion fails. Criterion 8 needs real corpora and is skipped unless
//! `EDGESIGN_CONVOTE` (speech scores TSV) or `EDGESIGN_WIKI` (edge list) is set.

use edgesign::evaluation::{
    auc_neg_pr, auc_roc, mean_and_standard_error, run_evidence_sweep, run_feature_drop_sweep,
    FoldScheme, LooConfig, ModelKind, ScoredEdge, SweepConfig, SweepOutput,
};
use edgesign::graph::{
    apply_evidence_mask, read_edge_list, EdgeRole, EvidencePartition, SignState, SignedEdge,
    SignedGraph, SynthConfig, TextConfig,
};
use edgesign::inference::{admm_solve, brute_force_binary, build_problem, round_solution, SolverOptions};
use edgesign::learning::{learn_weights, LearnConfig};
use edgesign::potentials::{
    edge_cost_binary, edge_cost_relaxed, exact_objective, indicator_surrogate, relaxed_objective,
    CostWeights, BINS, CORNERS, TRIANGLE_CLASSES,
};
use edgesign::reduction::{offset_identity_holds, reduce_to_triangle_balance, verify_correspondence, TlsgInstance};
use edgesign::rng;
use edgesign::sentiment::{build_convote_graph, calibrate_speeches, parse_speech_scores, SentimentConfig};
use rand::seq::SliceRandom;
use rand::Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

use Outcome::{Fail, Pass, Skip};

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Pass(detail)
    } else {
        Fail(detail)
    }
}

fn within(limit: Duration, start: Instant, outcome: Outcome) -> Outcome {
    let took = start.elapsed();
    match outcome {
        Pass(d) if took > limit => Fail(format!("{d}; took {took:.1?}, limit {limit:?}")),
        o => o,
    }
}

// ---------------------------------------------------------------- 1

fn surrogate_agreement() -> Outcome {
    let start = Instant::now();
    let mut bad = 0;
    for squared in [false, true] {
        for x in CORNERS {
            let xf = x.map(|b| if b { 1.0f64 } else { 0.0 });
            for z in CORNERS {
                let want = if x == z { 1.0 } else { 0.0 };
                bad += usize::from(indicator_surrogate(xf, z, squared) != want);
            }
        }
    }
    let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    let mut edge_checks = 0;
    for &p in &grid {
        for &l1 in &[0.0, 0.3, 1.0, 2.5] {
            for &l0 in &[0.0, 0.7, 1.0, 4.0] {
                for x in [false, true] {
                    let xf = if x { 1.0 } else { 0.0 };
                    bad += usize::from(edge_cost_relaxed(xf, p, l1, l0) != edge_cost_binary(x, p, l1, l0));
                    edge_checks += 1;
                }
            }
        }
    }
    within(
        Duration::from_secs(1),
        start,
        verdict(bad == 0, format!("128 surrogate corners + {edge_checks} edge-cost points, {bad} mismatches")),
    )
}

// ---------------------------------------------------------------- 2

fn random_instance(seed: u64) -> (SignedGraph<f64>, EvidencePartition, CostWeights<f64>) {
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
    if edges.len() < 2 {
        edges = vec![
            SignedEdge::new(0, 1, SignState::ObservedPositive).with_p(0.7),
            SignedEdge::new(1, 2, SignState::ObservedNegative).with_p(0.4),
        ];
    }
    let g = SignedGraph::new(n, false, edges).unwrap();
    let m = g.edge_count();
    let k = r.random_range(1..=m.min(12));
    let mut idx: Vec<usize> = (0..m).collect();
    idx.shuffle(&mut r);
    let mut roles = vec![EdgeRole::Evidence; m];
    for &e in &idx[..k] {
        roles[e] = EdgeRole::Target;
    }
    let mut w = CostWeights::zeros(r.random::<f64>());
    for b in 0..BINS {
        w.lambda1[b] = 2.0 * r.random::<f64>();
        w.lambda0[b] = 2.0 * r.random::<f64>();
    }
    for c in 0..TRIANGLE_CLASSES {
        w.triangle_cost[c] = 2.0 * r.random::<f64>();
    }
    w.prior_weight = r.random::<f64>();
    (g, EvidencePartition::from_roles(roles), w)
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let tight = SolverOptions { eps_abs: 1e-8, eps_rel: 1e-8, max_iter: 200_000, ..Default::default() };
    let (mut passed, mut integral, mut failures) = (0, 0, Vec::new());
    for case in 0..200u64 {
        let squared = case % 2 == 0;
        let (g, part, w) = random_instance(case);
        let p = g.probabilities();
        let (_, best) = brute_force_binary(&g, &part, &p, &w).unwrap();
        let prob = build_problem(&g, &part, &p, &w, squared).unwrap();
        let sol = admm_solve(&prob, &tight).unwrap();
        let relaxed = relaxed_objective(&g, &part, &sol.x, &p, &w, squared).unwrap();
        let mut ok = relaxed <= best + 1e-5;
        if sol.x.iter().all(|&v| v.min(1.0 - v) < 1e-3) {
            integral += 1;
            let obj = exact_objective(&g, &part, &round_solution(&sol.x, 0.5), &p, &w).unwrap();
            ok &= (obj - best).abs() <= 1e-3 * (1.0 + best.abs());
        }
        if ok {
            passed += 1;
        } else {
            failures.push(case);
        }
    }
    within(
        Duration::from_secs(120),
        start,
        verdict(
            failures.is_empty(),
            format!("{passed}/200 cases, {integral} integral; failing cases {failures:?}"),
        ),
    )
}

// ---------------------------------------------------------------- 3

/// Balance-consistent weights: unbalanced classes (0 or 2 positives) cost 2,
/// balanced cost 0, no prior, and edge costs that grow with the confidence of
/// the bin's midpoint.
fn desiderata_weights() -> CostWeights<f64> {
    let mut w = CostWeights::zeros(0.5);
    w.triangle_cost = [2.0, 0.0, 2.0, 0.0];
    for b in 0..BINS {
        let mid = (b as f64 + 0.5) / BINS as f64;
        w.lambda1[b] = (2.0 * mid - 1.0).abs();
        w.lambda0[b] = (2.0 * mid - 1.0).abs();
    }
    w
}

fn solve_targets(g: &SignedGraph<f64>, part: &EvidencePartition, squared: bool) -> (Vec<f64>, Vec<bool>) {
    let w = desiderata_weights();
    let p = g.probabilities();
    let tight = SolverOptions { eps_abs: 1e-9, eps_rel: 1e-9, max_iter: 200_000, ..Default::default() };
    let sol = admm_solve(&build_problem(g, part, &p, &w, squared).unwrap(), &tight).unwrap();
    let (best, _) = brute_force_binary(g, part, &p, &w).unwrap();
    (sol.x, best)
}

fn desiderata() -> Outcome {
    let pos = SignState::ObservedPositive;
    // Left: an edge whose text reads negative (p = 0.2) closes two triangles
    // of otherwise positive edges.
    let left = SignedGraph::new(
        4,
        false,
        vec![
            SignedEdge::new(0, 1, pos).with_p(0.2),
            SignedEdge::new(0, 2, pos),
            SignedEdge::new(1, 2, pos),
            SignedEdge::new(0, 3, pos),
            SignedEdge::new(1, 3, pos),
        ],
    )
    .unwrap();
    let left_part = EvidencePartition::from_roles(vec![
        EdgeRole::Target,
        EdgeRole::Evidence,
        EdgeRole::Evidence,
        EdgeRole::Evidence,
        EdgeRole::Evidence,
    ]);
    // Right: one observed positive edge; the upper edge reads clearly
    // positive, the bottom edge is neutral.
    let right = SignedGraph::new(
        3,
        false,
        vec![
            SignedEdge::new(0, 1, pos),
            SignedEdge::new(0, 2, pos).with_p(0.95),
            SignedEdge::new(1, 2, pos).with_p(0.5),
        ],
    )
    .unwrap();
    let right_part = EvidencePartition::from_roles(vec![EdgeRole::Evidence, EdgeRole::Target, EdgeRole::Target]);

    let mut ok = true;
    let mut notes = Vec::new();
    for squared in [false, true] {
        let mode = if squared { "squared" } else { "linear" };
        let (x, best) = solve_targets(&left, &left_part, squared);
        ok &= x[0] >= 0.9 && best == vec![true];
        notes.push(format!("left/{mode} {:.3}", x[0]));
        let (x, best) = solve_targets(&right, &right_part, squared);
        ok &= x.iter().all(|&v| v >= 0.8) && best == vec![true, true];
        notes.push(format!("right/{mode} {:.3},{:.3}", x[0], x[1]));
    }
    verdict(ok, format!("{}; brute force agrees", notes.join(" ")))
}

// ---------------------------------------------------------------- 4

fn reduction_certification() -> Outcome {
    let start = Instant::now();
    let mut certified = 0;
    for seed in 0..100 {
        let inst = TlsgInstance::random(2, 2, seed).unwrap();
        if verify_correspondence(&inst).map(|c| c.passed).unwrap_or(false) {
            certified += 1;
        }
    }
    // Every shape with at most 12 vertices.
    let shapes = [(1, 1), (2, 1), (1, 2), (3, 1), (2, 2), (4, 1), (5, 1), (3, 2), (2, 3), (6, 1)];
    let mut identity_ok = 0;
    let mut identity_total = 0;
    for &(w, h) in &shapes {
        for seed in 0..3 {
            let inst = TlsgInstance::random(w, h, seed).unwrap();
            identity_total += 1;
            if offset_identity_holds(&inst).unwrap() && star_sweep_identity(&inst) {
                identity_ok += 1;
            }
        }
    }
    within(
        Duration::from_secs(60),
        start,
        verdict(
            certified == 100 && identity_ok == identity_total,
            format!("{certified}/100 certificates; offset identity {identity_ok}/{identity_total} instances"),
        ),
    )
}

/// Direct evaluation of `cost = |E| + H` on every star-edge assignment, with
/// the base edges all negative, all positive and random.
fn star_sweep_identity(inst: &TlsgInstance) -> bool {
    let red = reduce_to_triangle_balance::<f64>(inst).unwrap();
    let n = inst.vertex_count();
    let m = red.graph.edge_count();
    let mut r = rng::seeded(n as u64);
    for mask in 0..(1u64 << n) {
        for fill in 0..3 {
            let mut x: Vec<bool> = (0..m)
                .map(|_| match fill {
                    0 => false,
                    1 => true,
                    _ => r.random_bool(0.5),
                })
                .collect();
            for v in 0..n {
                x[red.vertex_to_edge[v]] = mask >> v & 1 == 1;
            }
            let spins = red.spins(&x);
            let energy = edgesign::reduction::tlsg_energy(inst, &spins).unwrap();
            if red.cost(&x) != inst.edges().len() as i64 + energy {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------- 5

fn pairwise_auc(s: &[ScoredEdge<f64>]) -> f64 {
    let (mut num, mut pairs) = (0.0, 0.0);
    for a in s.iter().filter(|x| x.truth) {
        for b in s.iter().filter(|x| !x.truth) {
            pairs += 1.0;
            num += if a.score > b.score {
                1.0
            } else if a.score == b.score {
                0.5
            } else {
                0.0
            };
        }
    }
    num / pairs
}

/// Precision and recall of the negative class at every distinct threshold
/// on `1 - score`, recomputed from scratch for each threshold.
fn pairwise_neg_pr(s: &[ScoredEdge<f64>]) -> f64 {
    let neg = s.iter().filter(|x| !x.truth).count() as f64;
    let mut thresholds: Vec<f64> = s.iter().map(|x| 1.0 - x.score).collect();
    thresholds.sort_by(|a, b| b.total_cmp(a));
    thresholds.dedup();
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for &t in &thresholds {
        let called: Vec<&ScoredEdge<f64>> = s.iter().filter(|x| 1.0 - x.score >= t).collect();
        let tp = called.iter().filter(|x| !x.truth).count() as f64;
        let precision = tp / called.len() as f64;
        if pts.is_empty() {
            pts.push((0.0, precision));
        }
        pts.push((tp / neg, precision));
    }
    pts.windows(2).map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0).sum()
}

fn metric_correctness() -> Outcome {
    let mut r = rng::seeded(5);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    while cases < 1000 {
        let n = r.random_range(2..80);
        // coarse scores force ties
        let levels = r.random_range(2..20);
        let s: Vec<ScoredEdge<f64>> = (0..n)
            .map(|i| ScoredEdge {
                edge: i,
                score: r.random_range(0..levels) as f64 / (levels - 1) as f64,
                truth: r.random_bool(0.6),
            })
            .collect();
        if s.iter().all(|x| x.truth) || s.iter().all(|x| !x.truth) {
            continue;
        }
        cases += 1;
        worst = worst.max((auc_roc(&s).unwrap() - pairwise_auc(&s)).abs());
        worst = worst.max((auc_neg_pr(&s).unwrap() - pairwise_neg_pr(&s)).abs());
    }
    // 24% negatives, every score equal
    let constant: Vec<ScoredEdge<f64>> =
        (0..100).map(|i| ScoredEdge { edge: i, score: 0.7, truth: i >= 24 }).collect();
    let (roc, pr) = (auc_roc(&constant).unwrap(), auc_neg_pr(&constant).unwrap());
    let ok = worst <= 1e-9 && roc == 0.5 && (pr - 0.24).abs() < 1e-12;
    verdict(ok, format!("{cases} random inputs, max deviation {worst:.2e}; constant scores: ROC {roc}, negPR {pr}"))
}

// ---------------------------------------------------------------- 6

const TREND_SEEDS: u64 = 10;
const TREND_RATIOS: [f64; 4] = [0.125, 0.25, 0.5, 0.75];
const DROP_ALL: usize = 100;

fn trend_config(seed: u64) -> SweepConfig<f64> {
    SweepConfig {
        scheme: FoldScheme::Bfs { subgraphs: 4, nodes: 100 },
        models: vec![ModelKind::Sentiment, ModelKind::Network, ModelKind::Combined],
        seeds: vec![seed],
        learn: LearnConfig { epochs: 10, step_size: Some(0.002), ..Default::default() },
        loo: LooConfig::default(),
    }
}

/// Per-seed mean AUC/ROC of `model` at `param`, then mean and standard error
/// across seeds.
fn across_seeds(outs: &[SweepOutput], model: ModelKind, param: f64) -> (f64, f64) {
    let v: Vec<f64> = outs.iter().filter_map(|o| o.report(model, param)).map(|r| r.auc_roc_mean).collect();
    mean_and_standard_error(&v)
}

fn trend_reproduction() -> Outcome {
    let start = Instant::now();
    let mut evidence = Vec::new();
    let mut dropping = Vec::new();
    for seed in 0..TREND_SEEDS {
        let g: SignedGraph<f64> =
            SynthConfig::new(300, 0.1, 0.05, 0.5).with_text(TextConfig::default()).generate(seed);
        let cfg = trend_config(seed);
        evidence.push(run_evidence_sweep(&g, &TREND_RATIOS, &cfg).unwrap());
        let sent = SentimentConfig { seed, ..Default::default() };
        dropping.push(run_feature_drop_sweep(&g, &[0, DROP_ALL], 0.5, &sent, &cfg).unwrap());
    }
    let net: Vec<f64> = TREND_RATIOS.iter().map(|&r| across_seeds(&evidence, ModelKind::Network, r).0).collect();
    let a = net[TREND_RATIOS.len() - 1] > net[0];
    let mut b = true;
    let mut margins = Vec::new();
    for &r in &TREND_RATIOS {
        let s = across_seeds(&evidence, ModelKind::Sentiment, r).0;
        let n = across_seeds(&evidence, ModelKind::Network, r).0;
        let c = across_seeds(&evidence, ModelKind::Combined, r).0;
        b &= c >= s.max(n) - 0.01;
        margins.push(format!("{:+.3}", c - s.max(n)));
    }
    let m = DROP_ALL as f64;
    let (net_drop, net_se) = across_seeds(&dropping, ModelKind::Network, m);
    let (comb_drop, _) = across_seeds(&dropping, ModelKind::Combined, m);
    let (sent_drop, _) = across_seeds(&dropping, ModelKind::Sentiment, m);
    let c = comb_drop >= net_drop - net_se;
    let detail = format!(
        "(a) network {:.3} -> {:.3} {}; (b) combined - max margins [{}] {}; (c) sentiment {:.3} after drop, combined {:.3} vs network {:.3} ± {:.3} {}",
        net[0],
        net[TREND_RATIOS.len() - 1],
        ok_word(a),
        margins.join(", "),
        ok_word(b),
        sent_drop,
        comb_drop,
        net_drop,
        net_se,
        ok_word(c)
    );
    within(Duration::from_secs(15 * 60), start, verdict(a && b && c, detail))
}

fn ok_word(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

// ---------------------------------------------------------------- 7

fn learning_sanity() -> Outcome {
    let mut ordered = 0;
    for seed in 0..10 {
        let g: SignedGraph<f64> = SynthConfig::new(100, 0.2, 0.05, 0.5).generate(seed);
        let all: Vec<usize> = (0..g.edge_count()).collect();
        let part = apply_evidence_mask(&g, &all, 0.5, seed).unwrap();
        let cfg = LearnConfig { epochs: 10, step_size: Some(0.002), ..Default::default() };
        let d = learn_weights(&g, &part, &g.probabilities(), &cfg).unwrap().weights.triangle_cost;
        if (d[0] + d[2]) / 2.0 > (d[1] + d[3]) / 2.0 {
            ordered += 1;
        }
    }
    // Fixed point: the MAP under `init` already equals the truth.
    let pos = SignState::ObservedPositive;
    let g = SignedGraph::new(
        3,
        false,
        vec![
            SignedEdge::new(0, 1, pos).with_p(0.9),
            SignedEdge::new(1, 2, pos).with_p(0.9),
            SignedEdge::new(0, 2, pos).with_p(0.9),
        ],
    )
    .unwrap();
    let part = EvidencePartition::all_targets(3);
    let init = CostWeights::balance(0.5);
    let mut fixed = true;
    for step in [1e-3, 0.1, 10.0] {
        let cfg = LearnConfig { epochs: 5, step_size: Some(step), init: Some(init.clone()), ..Default::default() };
        let out = learn_weights(&g, &part, &g.probabilities(), &cfg).unwrap();
        fixed &= out.weights == init && out.log.iter().all(|l| l.weight_l1_delta == 0.0);
    }
    verdict(
        ordered >= 8 && fixed,
        format!("unbalanced > balanced on {ordered}/10 seeds; fixed point exact: {fixed}"),
    )
}

// ---------------------------------------------------------------- 8

fn corpus_check() -> Outcome {
    let convote = std::env::var_os("EDGESIGN_CONVOTE");
    let wiki = std::env::var_os("EDGESIGN_WIKI");
    if convote.is_none() && wiki.is_none() {
        return Skip("set EDGESIGN_CONVOTE and/or EDGESIGN_WIKI to run".into());
    }
    let mut ok = true;
    let mut notes = Vec::new();
    if let Some(path) = convote {
        let speeches = parse_speech_scores::<f64, _>(std::fs::File::open(&path).unwrap()).unwrap();
        let g: SignedGraph<f64> = build_convote_graph(&speeches, &calibrate_speeches(&speeches).unwrap()).unwrap();
        let pos = g.positive_fraction().unwrap_or(0.0);
        let t = g.triangles().len();
        ok &= g.node_count() == 276 && g.edge_count() == 14_690 && (pos - 0.54).abs() < 0.005 && t == 506_327;
        notes.push(format!("convote {} nodes, {} edges, {:.3} positive, {t} triangles", g.node_count(), g.edge_count(), pos));
    }
    if let Some(path) = wiki {
        let g: SignedGraph<f64> = read_edge_list(Path::new(&path)).unwrap();
        let pos = g.positive_fraction().unwrap_or(0.0);
        ok &= (pos - 0.76).abs() <= 0.01;
        notes.push(format!("wiki {:.3} positive", pos));
    }
    verdict(ok, notes.join("; "))
}

// ---------------------------------------------------------------- 9

fn cli(dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_edgesign"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

const SPEECHES: &str = "speaker\tbill\traw_score\tvote
ann\tb1\t1.5\ty
bob\tb1\t1.2\ty
cat\tb1\t-2.0\tn
ann\tb2\t-1.0\tn
cat\tb2\t0.3\ty
bob\tb2\t-0.5\tn
dan\tb2\t0.8\ty
dan\tb1\t-0.4\tn
";

/// Runs every subcommand in a fresh directory and returns the named outputs.
fn cli_run(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    std::fs::write(dir.join("speeches.tsv"), SPEECHES).map_err(|e| e.to_string())?;
    let small = ["--subgraphs", "3", "--subgraph-nodes", "25", "--epochs", "3"];
    let steps: Vec<Vec<&str>> = vec![
        vec!["synth", "--nodes", "60", "--edge-prob", "0.25", "--text", "--seed", "11", "-o", "g.tsv"],
        vec!["train-sentiment", "--graph", "g.tsv", "--sample-size", "200", "--seed", "11", "-o", "model.json"],
        vec!["predict-sentiment", "--model", "model.json", "--graph", "g.tsv", "-o", "scored.tsv"],
        vec!["learn", "--graph", "scored.tsv", "--epochs", "4", "--seed", "11", "-o", "w.json", "--log", "learn.csv"],
        vec![
            "infer", "--graph", "scored.tsv", "--weights", "w.json", "--holdout", "--seed", "11", "--report",
            "infer.json", "--curves", "curves", "-o", "scores.csv",
        ],
        [&["sweep", "--graph", "scored.tsv", "--ratios", "0.25,0.75", "--seed", "11", "--out-dir", "sweep"][..], &small].concat(),
        [&["sweep", "--graph", "g.tsv", "--drop-features", "0,20", "--seed", "11", "--out-dir", "drop"][..], &small].concat(),
        vec!["loo", "--graph", "scored.tsv", "--sampling", "random", "--folds", "3", "--with-sentiment", "--seed", "11", "--out-dir", "loo"],
        vec!["reduce-verify", "-o", "cert.json"],
        vec!["reduce-verify", "--random", "2x2", "--seed", "11", "-o", "cert_random.json"],
        vec!["convote-graph", "--speeches", "speeches.tsv", "-o", "convote.tsv"],
    ];
    for s in &steps {
        cli(dir, s)?;
    }
    let stats = cli(dir, &["stats", "--graph", "scored.tsv"])?;
    let files = [
        "g.tsv", "model.json", "scored.tsv", "w.json", "learn.csv", "infer.json", "scores.csv",
        "curves/roc.csv", "curves/neg_pr.csv", "sweep/rows.csv", "sweep/summary.json", "drop/rows.csv",
        "drop/summary.json", "loo/rows.csv", "loo/summary.json", "cert.json", "cert_random.json", "convote.tsv",
    ];
    let mut out = vec![("stats (stdout)".to_string(), stats)];
    for f in files {
        out.push((f.to_string(), std::fs::read(dir.join(f)).map_err(|e| format!("{f}: {e}"))?));
    }
    Ok(out)
}

fn determinism() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = match cli_run(a.path()) {
        Ok(x) => x,
        Err(e) => return Fail(e),
    };
    let second = match cli_run(b.path()) {
        Ok(x) => x,
        Err(e) => return Fail(e),
    };
    let differing: Vec<&str> =
        first.iter().zip(&second).filter(|(x, y)| x.1 != y.1).map(|(x, _)| x.0.as_str()).collect();
    verdict(
        differing.is_empty(),
        format!("{} artifacts from 12 commands compared byte for byte; differing: {differing:?}", first.len()),
    )
}

// ----------------------------------------------------------------

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 9] = [
        (1, "surrogate agreement", surrogate_agreement),
        (2, "oracle equivalence", oracle_equivalence),
        (3, "desiderata", desiderata),
        (4, "reduction certification", reduction_certification),
        (5, "metric correctness", metric_correctness),
        (6, "trend reproduction", trend_reproduction),
        (7, "learning sanity", learning_sanity),
        (8, "corpus check", corpus_check),
        (9, "CLI determinism", determinism),
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (n, name, run) in criteria {
        if only.is_some_and(|k| k != n) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Fail(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        let (tag, detail) = match outcome {
            Pass(d) => ("PASS", d),
            Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Skip(d) => ("SKIP", d),
        };
        println!("criterion {n} ({name}): {tag} [{took:.1?}] {detail}");
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
