//! The binary objective and its hinge-loss relaxation, with edge costs
//! parameterized per probability bin.
//!
//! For a triangle with signs `x_t` the binary cost is `d(class(x_t))`, where
//! the class is the number of positive edges. Its relaxation sums
//! `d(class(z)) * f(x_t, z)` over all eight corners `z`, with
//! `f(x_t, z) = max(0, 1 - |x_t - z|_1)` (optionally squared), which coincides
//! with the indicator of `x_t == z` at binary points.

use crate::error::{Error, Result};
use crate::graph::{EvidencePartition, SignedGraph};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

pub const BINS: usize = 10;
pub const TRIANGLE_CLASSES: usize = 4;
/// 10 `lambda1`, 10 `lambda0`, 4 triangle classes, 1 prior weight.
pub const WEIGHT_COMPONENTS: usize = 2 * BINS + TRIANGLE_CLASSES + 1;

/// The eight sign configurations of a triangle.
pub const CORNERS: [[bool; 3]; 8] = [
    [false, false, false],
    [false, false, true],
    [false, true, false],
    [false, true, true],
    [true, false, false],
    [true, false, true],
    [true, true, false],
    [true, true, true],
];

/// Indices into the flat 25-component weight vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    /// Cost of pushing `x_e` above `p_e`, per bin (0-based).
    Lambda1(usize),
    /// Cost of pushing `x_e` below `p_e`, per bin (0-based).
    Lambda0(usize),
    Triangle(usize),
    Prior,
}

impl Component {
    pub fn index(self) -> usize {
        match self {
            Component::Lambda1(b) => b,
            Component::Lambda0(b) => BINS + b,
            Component::Triangle(c) => 2 * BINS + c,
            Component::Prior => 2 * BINS + TRIANGLE_CLASSES,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CostWeights<T> {
    pub lambda1: [T; BINS],
    pub lambda0: [T; BINS],
    /// Indexed by triangle class (number of positive edges).
    #[serde(rename = "d")]
    pub triangle_cost: [T; TRIANGLE_CLASSES],
    pub prior_weight: T,
    /// Prior probability of a positive edge.
    pub prior: T,
}

impl<T: Scalar> CostWeights<T> {
    /// Every weight component set to `value`.
    pub fn uniform(value: T, prior: T) -> Self {
        CostWeights {
            lambda1: [value; BINS],
            lambda0: [value; BINS],
            triangle_cost: [value; TRIANGLE_CLASSES],
            prior_weight: value,
            prior,
        }
    }

    pub fn zeros(prior: T) -> Self {
        Self::uniform(T::zero(), prior)
    }

    /// Unit edge costs, zero cost for balanced classes {3, 1} and unit cost for
    /// unbalanced classes {2, 0}; no prior term.
    pub fn balance(prior: T) -> Self {
        let mut w = Self::uniform(T::one(), prior);
        w.triangle_cost = [T::one(), T::zero(), T::one(), T::zero()];
        w.prior_weight = T::zero();
        w
    }

    pub fn validate(&self) -> Result<()> {
        let comps = self.to_components();
        if comps.iter().any(|w| !w.is_finite() || *w < T::zero()) {
            return Err(Error::invalid("cost weights must be finite and non-negative"));
        }
        if !(self.prior >= T::zero() && self.prior <= T::one()) {
            return Err(Error::invalid("prior must lie in [0,1]"));
        }
        Ok(())
    }

    pub fn component(&self, c: Component) -> T {
        match c {
            Component::Lambda1(b) => self.lambda1[b],
            Component::Lambda0(b) => self.lambda0[b],
            Component::Triangle(k) => self.triangle_cost[k],
            Component::Prior => self.prior_weight,
        }
    }

    pub fn to_components(&self) -> [T; WEIGHT_COMPONENTS] {
        let mut out = [T::zero(); WEIGHT_COMPONENTS];
        out[..BINS].copy_from_slice(&self.lambda1);
        out[BINS..2 * BINS].copy_from_slice(&self.lambda0);
        out[2 * BINS..2 * BINS + TRIANGLE_CLASSES].copy_from_slice(&self.triangle_cost);
        out[WEIGHT_COMPONENTS - 1] = self.prior_weight;
        out
    }

    pub fn from_components(c: &[T; WEIGHT_COMPONENTS], prior: T) -> Self {
        let mut w = Self::zeros(prior);
        w.lambda1.copy_from_slice(&c[..BINS]);
        w.lambda0.copy_from_slice(&c[BINS..2 * BINS]);
        w.triangle_cost
            .copy_from_slice(&c[2 * BINS..2 * BINS + TRIANGLE_CLASSES]);
        w.prior_weight = c[WEIGHT_COMPONENTS - 1];
        w
    }

    /// Same weights with every binned edge cost zeroed (network-only model).
    pub fn without_edge_costs(&self) -> Self {
        CostWeights {
            lambda1: [T::zero(); BINS],
            lambda0: [T::zero(); BINS],
            ..self.clone()
        }
    }

    /// `(lambda1, lambda0)` for the bin of `p`.
    pub fn edge_lambdas(&self, p: T) -> (T, T) {
        let b = bin_index(p) - 1;
        (self.lambda1[b], self.lambda0[b])
    }
}

/// Bin of a probability, `1..=10`: `[0,0.1), [0.1,0.2), ..., [0.9,1.0]`.
pub fn bin_index<T: Scalar>(p: T) -> usize {
    let scaled = (p * T::from_count(BINS)).floor().to_isize().unwrap_or(0);
    (scaled.clamp(0, BINS as isize - 1) as usize) + 1
}

/// `lambda1 (1 - p) x + lambda0 p (1 - x)` for binary `x`.
pub fn edge_cost_binary<T: Scalar>(x: bool, p: T, lambda1: T, lambda0: T) -> T {
    if x {
        lambda1 * (T::one() - p)
    } else {
        lambda0 * p
    }
}

/// `lambda1 max(0, x - p) + lambda0 max(0, p - x)`.
pub fn edge_cost_relaxed<T: Scalar>(x: T, p: T, lambda1: T, lambda0: T) -> T {
    lambda1 * (x - p).hinge() + lambda0 * (p - x).hinge()
}

/// Number of positive components.
pub fn triangle_class(z: [bool; 3]) -> usize {
    z.iter().filter(|&&b| b).count()
}

/// `max(0, 1 - |x - z|_1)`, squared when requested.
pub fn indicator_surrogate<T: Scalar>(x: [T; 3], z: [bool; 3], squared: bool) -> T {
    let dist: T = x
        .iter()
        .zip(z)
        .map(|(&xi, zi)| if zi { T::one() - xi } else { xi })
        .sum();
    let h = (T::one() - dist).hinge();
    if squared {
        h * h
    } else {
        h
    }
}

/// Relaxed triangle cost `sum_z d(class(z)) f(x, z)`.
pub fn triangle_cost_relaxed<T: Scalar>(x: [T; 3], weights: &CostWeights<T>, squared: bool) -> T {
    CORNERS
        .iter()
        .map(|&z| weights.triangle_cost[triangle_class(z)] * indicator_surrogate(x, z, squared))
        .sum()
}

/// Binary triangle cost `d(class(z))`.
pub fn triangle_cost_binary<T: Scalar>(z: [bool; 3], weights: &CostWeights<T>) -> T {
    weights.triangle_cost[triangle_class(z)]
}

/// `prior_weight * |x - prior|`, written as two hinges.
pub fn prior_cost<T: Scalar>(x: T, weights: &CostWeights<T>) -> T {
    weights.prior_weight * ((x - weights.prior).hinge() + (weights.prior - x).hinge())
}

pub(crate) fn check_lengths<T, V>(
    graph: &SignedGraph<T>,
    partition: &EvidencePartition,
    unknown: &[usize],
    x: &[V],
    p: &[Option<T>],
) -> Result<()> {
    partition.validate(graph)?;
    if x.len() != unknown.len() {
        return Err(Error::invalid(format!(
            "assignment has {} values for {} unknown edges",
            x.len(),
            unknown.len()
        )));
    }
    if p.len() != graph.edge_count() {
        return Err(Error::invalid("probability vector length differs from edge count"));
    }
    Ok(())
}

/// Binary objective: edge and prior costs over the unknown edges plus the cost
/// of every triangle. `x` lists the unknown edges in index order
/// (`partition.unknown()`); evidence edges take their observed signs. Edges
/// without a probability carry no edge cost.
pub fn exact_objective<T: Scalar>(
    graph: &SignedGraph<T>,
    partition: &EvidencePartition,
    x: &[bool],
    p: &[Option<T>],
    weights: &CostWeights<T>,
) -> Result<T> {
    let unknown = partition.unknown();
    check_lengths(graph, partition, &unknown, x, p)?;
    let mut full: Vec<bool> = (0..graph.edge_count())
        .map(|e| graph.truth(e).unwrap_or(false))
        .collect();
    let mut total = T::zero();
    for (&e, &xe) in unknown.iter().zip(x) {
        full[e] = xe;
        if let Some(pe) = p[e] {
            let (l1, l0) = weights.edge_lambdas(pe);
            total += edge_cost_binary(xe, pe, l1, l0);
        }
        total += prior_cost(if xe { T::one() } else { T::zero() }, weights);
    }
    for t in graph.triangles() {
        let z = t.edges.map(|e| full[e]);
        total += triangle_cost_binary(z, weights);
    }
    Ok(total)
}

/// Relaxed objective over `x` in `[0,1]^|unknown|`; equals
/// [`exact_objective`] at binary points.
pub fn relaxed_objective<T: Scalar>(
    graph: &SignedGraph<T>,
    partition: &EvidencePartition,
    x: &[T],
    p: &[Option<T>],
    weights: &CostWeights<T>,
    squared: bool,
) -> Result<T> {
    let unknown = partition.unknown();
    check_lengths(graph, partition, &unknown, x, p)?;
    let mut full: Vec<T> = (0..graph.edge_count())
        .map(|e| match graph.truth(e) {
            Some(true) => T::one(),
            _ => T::zero(),
        })
        .collect();
    let mut total = T::zero();
    for (&e, &xe) in unknown.iter().zip(x) {
        full[e] = xe;
        if let Some(pe) = p[e] {
            let (l1, l0) = weights.edge_lambdas(pe);
            total += edge_cost_relaxed(xe, pe, l1, l0);
        }
        total += prior_cost(xe, weights);
    }
    for t in graph.triangles() {
        let xt = t.edges.map(|e| full[e]);
        total += triangle_cost_relaxed(xt, weights, squared);
    }
    Ok(total)
}
