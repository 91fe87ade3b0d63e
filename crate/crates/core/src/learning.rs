//! Weight learning by the averaged (voted) structured perceptron.

use crate::error::{Error, Result};
use crate::graph::{EvidencePartition, SignedGraph};
use crate::inference::{admm_solve, build_problem, round_solution, SolverOptions};
use crate::potentials::{
    bin_index, check_lengths, indicator_surrogate, triangle_class, Component, CostWeights, BINS,
    CORNERS, TRIANGLE_CLASSES, WEIGHT_COMPONENTS,
};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Unweighted hinge mass per weight component, so that the objective is
/// `weights . counts`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeatureCounts<T>(pub [T; WEIGHT_COMPONENTS]);

impl<T: Scalar> FeatureCounts<T> {
    pub fn zero() -> Self {
        FeatureCounts([T::zero(); WEIGHT_COMPONENTS])
    }

    pub fn get(&self, c: Component) -> T {
        self.0[c.index()]
    }

    pub fn dot(&self, weights: &CostWeights<T>) -> T {
        weights
            .to_components()
            .iter()
            .zip(&self.0)
            .map(|(&w, &f)| w * f)
            .sum()
    }
}

/// Per-component hinge mass of the relaxed objective at `x` (values for the
/// unknown edges, in partition order).
pub fn feature_counts<T: Scalar>(
    graph: &SignedGraph<T>,
    partition: &EvidencePartition,
    p: &[Option<T>],
    x: &[T],
    prior: T,
    squared: bool,
) -> Result<FeatureCounts<T>> {
    let unknown = partition.unknown();
    check_lengths(graph, partition, &unknown, x, p)?;
    let mut phi = FeatureCounts::zero();
    let mut full: Vec<T> = (0..graph.edge_count())
        .map(|e| if graph.truth(e) == Some(true) { T::one() } else { T::zero() })
        .collect();
    for (&e, &xe) in unknown.iter().zip(x) {
        full[e] = xe;
        if let Some(pe) = p[e] {
            let b = bin_index(pe) - 1;
            phi.0[Component::Lambda1(b).index()] += (xe - pe).hinge();
            phi.0[Component::Lambda0(b).index()] += (pe - xe).hinge();
        }
        phi.0[Component::Prior.index()] += (xe - prior).abs();
    }
    // Triangles whose edges are all evidence are included too, so the
    // identity `weights . counts = relaxed objective` holds with no offset.
    for t in graph.triangles() {
        let xt = t.edges.map(|e| full[e]);
        for z in CORNERS {
            phi.0[Component::Triangle(triangle_class(z)).index()] += indicator_surrogate(xt, z, squared);
        }
    }
    Ok(phi)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct LearnConfig<T> {
    pub epochs: usize,
    /// `None` means `0.1 / |target edges|`.
    pub step_size: Option<T>,
    /// `None` means every component 1.0 with the prior set to the training
    /// positive fraction.
    pub init: Option<CostWeights<T>>,
    pub squared: bool,
    #[serde(skip)]
    pub solver: SolverOptions<T>,
}

impl<T: Scalar> Default for LearnConfig<T> {
    fn default() -> Self {
        LearnConfig {
            epochs: 50,
            step_size: None,
            init: None,
            squared: true,
            solver: SolverOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpochLog<T> {
    pub epoch: usize,
    pub objective_map: T,
    pub objective_truth: T,
    pub weight_l1_delta: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LearnOutcome<T> {
    /// Average of the post-epoch snapshots.
    pub weights: CostWeights<T>,
    pub snapshots: Vec<CostWeights<T>>,
    pub log: Vec<EpochLog<T>>,
}

/// Default prior: the positive fraction among signed training edges.
pub fn training_prior<T: Scalar>(graph: &SignedGraph<T>) -> T {
    T::lit(graph.positive_fraction().unwrap_or(0.5))
}

/// Averaged perceptron. Each epoch solves MAP inference under the current
/// weights, rounds it at 0.5 and moves the weights by
/// `step * (counts(MAP) - counts(truth))`, projecting onto `w >= 0`.
/// Components where the prediction accrues more hinge mass than the truth
/// become more expensive, which makes the truth comparatively cheaper.
pub fn learn_weights<T: Scalar>(
    graph: &SignedGraph<T>,
    partition: &EvidencePartition,
    p: &[Option<T>],
    config: &LearnConfig<T>,
) -> Result<LearnOutcome<T>> {
    if config.epochs == 0 {
        return Err(Error::invalid("epochs must be at least 1"));
    }
    partition.validate(graph)?;
    let unknown = partition.unknown();
    let truth: Vec<T> = unknown
        .iter()
        .map(|&e| match graph.truth(e) {
            Some(b) => Ok(if b { T::one() } else { T::zero() }),
            None => Err(Error::invalid(format!("training edge {e} has no ground-truth sign"))),
        })
        .collect::<Result<_>>()?;
    let targets = partition.targets().len().max(1);
    let step = config
        .step_size
        .unwrap_or_else(|| T::lit(0.1) / T::from_count(targets));
    if !(step > T::zero()) || !step.is_finite() {
        return Err(Error::invalid("step size must be positive"));
    }
    let mut w = match &config.init {
        Some(w) => w.clone(),
        None => CostWeights::uniform(T::one(), training_prior(graph)),
    };
    w.validate()?;
    let prior = w.prior;
    let phi_truth = feature_counts(graph, partition, p, &truth, prior, config.squared)?;

    let mut snapshots = Vec::with_capacity(config.epochs);
    let mut log = Vec::with_capacity(config.epochs);
    for epoch in 1..=config.epochs {
        let problem = build_problem(graph, partition, p, &w, config.squared)?;
        let solved = admm_solve(&problem, &config.solver)?;
        let map: Vec<T> = round_solution(&solved.x, T::lit(0.5))
            .into_iter()
            .map(|b| if b { T::one() } else { T::zero() })
            .collect();
        let phi_map = feature_counts(graph, partition, p, &map, prior, config.squared)?;
        let before = w.to_components();
        let mut after = before;
        for k in 0..WEIGHT_COMPONENTS {
            after[k] = (before[k] + step * (phi_map.0[k] - phi_truth.0[k])).hinge();
        }
        log.push(EpochLog {
            epoch,
            objective_map: phi_map.dot(&w),
            objective_truth: phi_truth.dot(&w),
            weight_l1_delta: before.iter().zip(&after).map(|(&a, &b)| (a - b).abs()).sum(),
        });
        w = CostWeights::from_components(&after, prior);
        snapshots.push(w.clone());
    }
    let mut mean = [T::zero(); WEIGHT_COMPONENTS];
    for s in &snapshots {
        for (m, c) in mean.iter_mut().zip(s.to_components()) {
            *m += c;
        }
    }
    let n = T::from_count(snapshots.len());
    mean.iter_mut().for_each(|m| *m /= n);
    Ok(LearnOutcome {
        weights: CostWeights::from_components(&mean, prior),
        snapshots,
        log,
    })
}

pub fn write_learning_log<T: Scalar, W: Write>(log: &[EpochLog<T>], mut out: W) -> Result<()> {
    writeln!(out, "epoch,objective_map,objective_truth,weight_l1_delta")?;
    for r in log {
        writeln!(
            out,
            "{},{},{},{}",
            r.epoch, r.objective_map, r.objective_truth, r.weight_l1_delta
        )?;
    }
    Ok(())
}

/// Share of the total cost mass held by each bin's edge costs, plus the
/// triangle and prior shares. The denominator sums every weight component
/// once, with one entry per triangle class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct EdgeCostReport<T> {
    pub bins: [T; BINS],
    pub triangle_share: T,
    pub prior_share: T,
}

pub fn normalized_edge_cost_report<T: Scalar>(weights: &CostWeights<T>) -> Result<EdgeCostReport<T>> {
    weights.validate()?;
    let tri: T = weights.triangle_cost.iter().copied().sum();
    let edge: T = (0..BINS).map(|i| weights.lambda1[i] + weights.lambda0[i]).sum();
    let total = edge + tri + weights.prior_weight;
    if !(total > T::zero()) {
        return Err(Error::invalid("all weights are zero"));
    }
    let mut bins = [T::zero(); BINS];
    for (i, b) in bins.iter_mut().enumerate() {
        *b = (weights.lambda1[i] + weights.lambda0[i]) / total;
    }
    debug_assert_eq!(TRIANGLE_CLASSES, weights.triangle_cost.len());
    Ok(EdgeCostReport {
        bins,
        triangle_share: tri / total,
        prior_share: weights.prior_weight / total,
    })
}
