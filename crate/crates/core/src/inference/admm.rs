use super::problem::{HingePotential, HlMrfProblem};
use super::prox::prox_step;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use rayon::prelude::*;
use std::io::Write;

/// Potentials per problem above which the local updates run on the rayon pool.
/// Each local update is independent, so the result does not depend on it.
const PARALLEL_THRESHOLD: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions<T> {
    pub rho: T,
    pub eps_abs: T,
    pub eps_rel: T,
    pub max_iter: usize,
    /// Record objective and residuals at every iteration.
    pub trace: bool,
}

impl<T: Scalar> Default for SolverOptions<T> {
    fn default() -> Self {
        SolverOptions {
            rho: T::one(),
            eps_abs: T::lit(1e-5),
            eps_rel: T::lit(1e-4),
            max_iter: 20_000,
            trace: false,
        }
    }
}

impl<T: Scalar> SolverOptions<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho > T::zero()) || !self.rho.is_finite() {
            return Err(Error::invalid("rho must be positive"));
        }
        if self.eps_abs < T::zero() || self.eps_rel < T::zero() {
            return Err(Error::invalid("tolerances must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow<T> {
    pub iter: usize,
    pub objective: T,
    pub primal_residual: T,
    pub dual_residual: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverResult<T> {
    /// One value in `[0,1]` per unknown edge, in `problem.unknown_edges` order.
    pub x: Vec<T>,
    pub objective: T,
    pub iterations: usize,
    pub primal_residual: T,
    pub dual_residual: T,
    pub converged: bool,
    pub trace: Vec<TraceRow<T>>,
}

/// Consensus ADMM. Each potential keeps local copies of its variables; an
/// iteration (1) moves every local copy to the prox point of its potential
/// around `consensus - dual`, (2) sets each consensus variable to the mean of
/// `local + dual` over its copies, clipped to `[0,1]`, and (3) adds
/// `local - consensus` to the scaled duals. Stops once the primal and dual
/// residual norms fall below `eps_abs * sqrt(copies) + eps_rel * scale`.
///
/// Hitting `max_iter` is reported through `converged = false`.
pub fn admm_solve<T: Scalar>(
    problem: &HlMrfProblem<T>,
    options: &SolverOptions<T>,
) -> Result<SolverResult<T>> {
    options.validate()?;
    let n = problem.num_vars();
    let rho = options.rho;
    let mut z: Vec<T> = problem.init.iter().map(|v| v.clamp_unit()).collect();
    if z.len() != n {
        return Err(Error::invalid("initial point has the wrong length"));
    }
    for pot in &problem.potentials {
        if pot.vars().iter().any(|&v| v >= n) {
            return Err(Error::invalid("potential references a missing variable"));
        }
    }
    // Variables touched only by single-variable potentials decouple from the
    // rest; they are minimized exactly and kept out of the consensus loop.
    let mut coupled = vec![false; n];
    for pot in &problem.potentials {
        if pot.arity() > 1 {
            pot.vars().iter().for_each(|&v| coupled[v] = true);
        }
    }
    let mut separable: Vec<Vec<&HingePotential<T>>> = vec![Vec::new(); n];
    let mut joint = Vec::new();
    for pot in &problem.potentials {
        match pot.vars() {
            [v] if !coupled[*v] => separable[*v].push(pot),
            _ => joint.push(*pot),
        }
    }
    for (v, list) in separable.iter().enumerate() {
        if !list.is_empty() {
            z[v] = minimize_univariate(list, z[v]);
        }
    }
    let pots = &joint;
    let mut copies = vec![0usize; n];
    for pot in pots {
        for &v in pot.vars() {
            copies[v] += 1;
        }
    }
    let total_copies: usize = copies.iter().sum();
    let sqrt_copies = T::from_count(total_copies.max(1)).sqrt();

    let mut local: Vec<[T; 3]> = pots
        .iter()
        .map(|pot| {
            let mut l = [T::zero(); 3];
            for (slot, &v) in l.iter_mut().zip(pot.vars()) {
                *slot = z[v];
            }
            l
        })
        .collect();
    let mut dual: Vec<[T; 3]> = vec![[T::zero(); 3]; pots.len()];
    let mut sums = vec![T::zero(); n];
    let mut trace = Vec::new();
    let (mut r_norm, mut s_norm) = (T::zero(), T::zero());
    let mut converged = total_copies == 0;
    let mut iterations = 0;

    let local_update = |(pot, (l, u)): (&super::HingePotential<T>, (&mut [T; 3], &[T; 3])), z: &[T]| {
        let mut center = [T::zero(); 3];
        for (i, &v) in pot.vars().iter().enumerate() {
            center[i] = z[v] - u[i];
        }
        prox_step(pot, &center[..pot.arity()], rho, &mut l[..]);
    };

    while !converged && iterations < options.max_iter {
        iterations += 1;

        if pots.len() >= PARALLEL_THRESHOLD {
            let zr = &z;
            pots.par_iter()
                .zip(local.par_iter_mut().zip(dual.par_iter()))
                .for_each(|item| local_update(item, zr));
        } else {
            for item in pots.iter().zip(local.iter_mut().zip(dual.iter())) {
                local_update(item, &z);
            }
        }

        sums.iter_mut().for_each(|s| *s = T::zero());
        for (pot, (l, u)) in pots.iter().zip(local.iter().zip(&dual)) {
            for (i, &v) in pot.vars().iter().enumerate() {
                sums[v] += l[i] + u[i];
            }
        }
        let mut s2 = T::zero();
        let mut z_change = vec![T::zero(); n];
        for v in 0..n {
            if copies[v] > 0 {
                let next = (sums[v] / T::from_count(copies[v])).clamp_unit();
                z_change[v] = next - z[v];
                z[v] = next;
            }
        }
        let (mut r2, mut x2, mut zc2, mut u2) = (T::zero(), T::zero(), T::zero(), T::zero());
        for (pot, (l, u)) in pots.iter().zip(local.iter().zip(dual.iter_mut())) {
            for (i, &v) in pot.vars().iter().enumerate() {
                let r = l[i] - z[v];
                u[i] += r;
                r2 += r * r;
                x2 += l[i] * l[i];
                zc2 += z[v] * z[v];
                u2 += u[i] * u[i];
                s2 += z_change[v] * z_change[v];
            }
        }
        r_norm = r2.sqrt();
        s_norm = rho * s2.sqrt();
        let eps_pri = options.eps_abs * sqrt_copies + options.eps_rel * x2.sqrt().max(zc2.sqrt());
        let eps_dual = options.eps_abs * sqrt_copies + options.eps_rel * rho * u2.sqrt();
        converged = r_norm <= eps_pri && s_norm <= eps_dual;

        if options.trace {
            trace.push(TraceRow {
                iter: iterations,
                objective: problem.objective(&z),
                primal_residual: r_norm,
                dual_residual: s_norm,
            });
        }
    }

    Ok(SolverResult {
        objective: problem.objective(&z),
        x: z,
        iterations,
        primal_residual: r_norm,
        dual_residual: s_norm,
        converged,
        trace,
    })
}

/// Exact minimizer over `[0,1]` of a sum of one-variable hinges. The sum is
/// convex and piecewise linear or quadratic, so the optimum is at a
/// breakpoint, an interval end or a stationary point of one piece. Among
/// equally good candidates the one nearest `start` wins, which keeps `start`
/// itself when it lies on a flat optimum.
fn minimize_univariate<T: Scalar>(pots: &[&HingePotential<T>], start: T) -> T {
    let f = |x: T| pots.iter().fold(T::zero(), |acc, p| acc + p.value(&[x]));
    let mut knots = vec![T::zero(), T::one()];
    for p in pots {
        let c = p.coeffs()[0];
        if c != T::zero() {
            let b = -p.offset / c;
            if b > T::zero() && b < T::one() {
                knots.push(b);
            }
        }
    }
    knots.sort_by(|a, b| a.partial_cmp(b).expect("finite knots"));
    knots.dedup();
    let mut candidates = knots.clone();
    candidates.push(start.clamp_unit());
    let two = T::lit(2.0);
    for w in knots.windows(2) {
        let mid = (w[0] + w[1]) / two;
        let (mut a, mut b) = (T::zero(), T::zero());
        for p in pots {
            let c = p.coeffs()[0];
            if p.linear(&[mid]) > T::zero() {
                if p.squared {
                    a += p.weight * c * c;
                    b += two * p.weight * c * p.offset;
                } else {
                    b += p.weight * c;
                }
            }
        }
        if a > T::zero() {
            candidates.push((-b / (two * a)).max(w[0]).min(w[1]));
        }
    }
    let values: Vec<T> = candidates.iter().map(|&x| f(x)).collect();
    let best = values.iter().copied().fold(T::infinity(), T::min);
    let slack = T::lit(1e-12).max(T::epsilon() * T::lit(4.0)) * (T::one() + best.abs());
    let mut pick = candidates[0];
    let mut pick_dist = T::infinity();
    for (&x, &v) in candidates.iter().zip(&values) {
        if v <= best + slack && (x - start).abs() < pick_dist {
            pick = x;
            pick_dist = (x - start).abs();
        }
    }
    pick
}

/// `iter,objective,primal_residual,dual_residual`
pub fn write_trace_csv<T: Scalar, W: Write>(rows: &[TraceRow<T>], mut out: W) -> Result<()> {
    writeln!(out, "iter,objective,primal_residual,dual_residual")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.iter, r.objective, r.primal_residual, r.dual_residual
        )?;
    }
    Ok(())
}
