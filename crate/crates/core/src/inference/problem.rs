use crate::error::{Error, Result};
use crate::graph::{EvidencePartition, SignedGraph};
use crate::potentials::{bin_index, triangle_class, Component, CostWeights, CORNERS};
use crate::scalar::Scalar;

/// `weight * max(0, offset + sum coeff_i x_{var_i})`, squared when flagged.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HingePotential<T> {
    pub weight: T,
    pub offset: T,
    pub squared: bool,
    /// Weight component this potential's weight was taken from.
    pub component: Component,
    vars: [usize; 3],
    coeffs: [T; 3],
    arity: usize,
}

impl<T: Scalar> HingePotential<T> {
    pub fn new(
        weight: T,
        terms: &[(usize, T)],
        offset: T,
        squared: bool,
        component: Component,
    ) -> Self {
        assert!(terms.len() <= 3, "potentials have at most three variables");
        let mut vars = [0; 3];
        let mut coeffs = [T::zero(); 3];
        for (i, &(v, c)) in terms.iter().enumerate() {
            vars[i] = v;
            coeffs[i] = c;
        }
        HingePotential {
            weight,
            offset,
            squared,
            component,
            vars,
            coeffs,
            arity: terms.len(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars[..self.arity]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs[..self.arity]
    }

    /// Affine argument `offset + coeffs . local` at local variable values.
    pub fn linear(&self, local: &[T]) -> T {
        self.coeffs()
            .iter()
            .zip(local)
            .fold(self.offset, |acc, (&c, &x)| acc + c * x)
    }

    /// Unweighted hinge value at local variable values.
    pub fn hinge(&self, local: &[T]) -> T {
        let h = self.linear(local).hinge();
        if self.squared {
            h * h
        } else {
            h
        }
    }

    pub fn value(&self, local: &[T]) -> T {
        self.weight * self.hinge(local)
    }

    /// Value with variables read from the global vector `x`.
    pub fn value_at(&self, x: &[T]) -> T {
        let mut local = [T::zero(); 3];
        for (l, &v) in local.iter_mut().zip(self.vars()) {
            *l = x[v];
        }
        self.value(&local[..self.arity])
    }

    /// Largest value of the affine argument over the unit box.
    fn box_max(&self) -> T {
        self.coeffs()
            .iter()
            .fold(self.offset, |acc, &c| acc + c.max(T::zero()))
    }
}

/// Hinge-loss MRF over the unknown edges of a graph.
#[derive(Clone, Debug)]
pub struct HlMrfProblem<T> {
    /// Edge index of each variable.
    pub unknown_edges: Vec<usize>,
    pub potentials: Vec<HingePotential<T>>,
    /// Cost of triangles whose edges are all evidence.
    pub offset: T,
    /// Starting point: `p_e` where its edge cost is active, else the prior.
    pub init: Vec<T>,
    /// Observed values of evidence edges, by edge index.
    pub fixed_values: Vec<(usize, bool)>,
}

impl<T: Scalar> HlMrfProblem<T> {
    pub fn num_vars(&self) -> usize {
        self.unknown_edges.len()
    }

    pub fn objective(&self, x: &[T]) -> T {
        self.potentials
            .iter()
            .fold(self.offset, |acc, pot| acc + pot.value_at(x))
    }
}

/// Emits, per unknown edge, the two binned edge hinges and the two prior
/// hinges, and for every triangle touching an unknown edge one hinge per
/// corner `z` weighted by `d(class(z))`. Evidence values are folded into the
/// hinge offsets; all-evidence triangles go into the constant offset.
/// Zero-weight potentials and potentials that vanish on the whole unit box are
/// dropped.
pub fn build_problem<T: Scalar>(
    graph: &SignedGraph<T>,
    partition: &EvidencePartition,
    p: &[Option<T>],
    weights: &CostWeights<T>,
    squared: bool,
) -> Result<HlMrfProblem<T>> {
    partition.validate(graph)?;
    weights.validate()?;
    if p.len() != graph.edge_count() {
        return Err(Error::invalid("probability vector length differs from edge count"));
    }
    let unknown_edges = partition.unknown();
    let mut var_of_edge = vec![None; graph.edge_count()];
    for (v, &e) in unknown_edges.iter().enumerate() {
        var_of_edge[e] = Some(v);
    }
    let one = T::one();
    let mut potentials = Vec::new();
    let mut push = |pot: HingePotential<T>| {
        if pot.weight > T::zero() && pot.box_max() > T::zero() {
            potentials.push(pot);
        }
    };

    for (v, &e) in unknown_edges.iter().enumerate() {
        if let Some(pe) = p[e] {
            let b = bin_index(pe) - 1;
            push(HingePotential::new(
                weights.lambda1[b],
                &[(v, one)],
                -pe,
                false,
                Component::Lambda1(b),
            ));
            push(HingePotential::new(
                weights.lambda0[b],
                &[(v, -one)],
                pe,
                false,
                Component::Lambda0(b),
            ));
        }
        let prior = weights.prior;
        push(HingePotential::new(
            weights.prior_weight,
            &[(v, one)],
            -prior,
            false,
            Component::Prior,
        ));
        push(HingePotential::new(
            weights.prior_weight,
            &[(v, -one)],
            prior,
            false,
            Component::Prior,
        ));
    }

    let mut offset = T::zero();
    for t in graph.triangles() {
        let vars = t.edges.map(|e| var_of_edge[e]);
        if vars.iter().all(Option::is_none) {
            let z = t.edges.map(|e| graph.truth(e).unwrap_or(false));
            offset += weights.triangle_cost[triangle_class(z)];
            continue;
        }
        for z in CORNERS {
            let class = triangle_class(z);
            // 1 - |x - z|_1 = 1 - #ones(z) + sum_{z_i=1} x_i - sum_{z_i=0} x_i
            let mut constant = one - T::from_count(class);
            let mut terms = Vec::with_capacity(3);
            for i in 0..3 {
                let c = if z[i] { one } else { -one };
                match vars[i] {
                    Some(v) => terms.push((v, c)),
                    None => {
                        if graph.truth(t.edges[i]) == Some(true) {
                            constant += c;
                        }
                    }
                }
            }
            push(HingePotential::new(
                weights.triangle_cost[class],
                &terms,
                constant,
                squared,
                Component::Triangle(class),
            ));
        }
    }

    // Warm start at p_e where the edge cost is active, else at the prior, so
    // a model with zero edge costs starts where the network-only model does.
    let init = unknown_edges
        .iter()
        .map(|&e| match p[e] {
            Some(pe) => {
                let (l1, l0) = weights.edge_lambdas(pe);
                if l1 > T::zero() || l0 > T::zero() { pe } else { weights.prior }
            }
            None => weights.prior,
        }.clamp_unit())
        .collect();
    let fixed_values = partition
        .evidence()
        .into_iter()
        .map(|e| (e, graph.truth(e).expect("validated")))
        .collect();
    Ok(HlMrfProblem {
        unknown_edges,
        potentials,
        offset,
        init,
        fixed_values,
    })
}
