use crate::error::{Error, Result};
use crate::graph::{EvidencePartition, SignedGraph};
use crate::potentials::{edge_cost_binary, prior_cost, triangle_cost_binary, CostWeights};
use crate::scalar::Scalar;

pub const MAX_BRUTE_FORCE_UNKNOWNS: usize = 22;

/// Exhaustive minimization of the binary objective over the unknown edges.
///
/// Returns the assignment (unknown edges in index order) and its objective.
/// Ties go to the lexicographically smallest assignment, reading
/// `false < true`.
pub fn brute_force_binary<T: Scalar>(
    graph: &SignedGraph<T>,
    partition: &EvidencePartition,
    p: &[Option<T>],
    weights: &CostWeights<T>,
) -> Result<(Vec<bool>, T)> {
    partition.validate(graph)?;
    if p.len() != graph.edge_count() {
        return Err(Error::invalid("probability vector length differs from edge count"));
    }
    let unknown = partition.unknown();
    let n = unknown.len();
    if n > MAX_BRUTE_FORCE_UNKNOWNS {
        return Err(Error::TooLarge {
            size: n,
            limit: MAX_BRUTE_FORCE_UNKNOWNS,
        });
    }
    let mut var_of_edge = vec![None; graph.edge_count()];
    for (v, &e) in unknown.iter().enumerate() {
        var_of_edge[e] = Some(v);
    }

    // per-variable cost of choosing negative / positive
    let unary: Vec<[T; 2]> = unknown
        .iter()
        .map(|&e| {
            let mut c = [T::zero(); 2];
            for (k, &x) in [false, true].iter().enumerate() {
                if let Some(pe) = p[e] {
                    let (l1, l0) = weights.edge_lambdas(pe);
                    c[k] += edge_cost_binary(x, pe, l1, l0);
                }
                c[k] += prior_cost(if x { T::one() } else { T::zero() }, weights);
            }
            c
        })
        .collect();

    let mut constant = T::zero();
    let mut coupled = Vec::new();
    for t in graph.triangles() {
        let slots = t.edges.map(|e| match var_of_edge[e] {
            Some(v) => Err(v),
            None => Ok(graph.truth(e).unwrap_or(false)),
        });
        if slots.iter().all(|s| s.is_ok()) {
            constant += triangle_cost_binary(slots.map(|s| s.unwrap_or(false)), weights);
        } else {
            coupled.push(slots);
        }
    }

    let bit = |mask: u64, v: usize| (mask >> (n - 1 - v)) & 1 == 1;
    let mut best: Option<(u64, T)> = None;
    for mask in 0..(1u64 << n) {
        let mut total = constant;
        for (v, c) in unary.iter().enumerate() {
            total += c[usize::from(bit(mask, v))];
        }
        for slots in &coupled {
            let z = slots.map(|s| match s {
                Ok(fixed) => fixed,
                Err(v) => bit(mask, v),
            });
            total += triangle_cost_binary(z, weights);
        }
        let improves = match best {
            None => true,
            Some((_, b)) => total < b - T::lit(1e-12) * (T::one() + b.abs()),
        };
        if improves {
            best = Some((mask, total));
        }
    }
    let (mask, objective) = best.expect("at least one assignment");
    Ok(((0..n).map(|v| bit(mask, v)).collect(), objective))
}
