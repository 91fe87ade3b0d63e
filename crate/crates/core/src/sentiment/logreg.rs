//! L2-regularized logistic regression fitted by truncated Newton (Newton-CG).
//!
//! The objective is the mean log-loss plus `l2/2 * |w|^2`; the bias is not
//! penalized. Using the mean makes the fit invariant to duplicating the data.

use super::vocab::SparseRow;
use crate::error::{Error, Result};
use crate::rng;
use crate::scalar::{sigmoid, softplus, Scalar};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct LogisticModel<T> {
    pub weights: Vec<T>,
    pub bias: T,
    pub l2_strength: T,
}

impl<T: Scalar> LogisticModel<T> {
    pub fn logit(&self, row: &[(usize, T)]) -> T {
        self.bias + dot(&self.weights, row)
    }

    pub fn predict_proba(&self, row: &[(usize, T)]) -> T {
        sigmoid(self.logit(row))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitOptions<T> {
    pub grad_tol: T,
    pub max_newton_iter: usize,
}

impl<T: Scalar> Default for FitOptions<T> {
    fn default() -> Self {
        // f32 cannot reach 1e-10; scale the target to its precision.
        let tol = T::lit(1e-10).max(T::epsilon() * T::lit(100.0));
        FitOptions { grad_tol: tol, max_newton_iter: 200 }
    }
}

fn dot<T: Scalar>(w: &[T], row: &[(usize, T)]) -> T {
    row.iter().fold(T::zero(), |acc, &(i, v)| acc + w[i] * v)
}

fn check_data<T: Scalar>(rows: &[SparseRow<T>], dim: usize, labels: &[bool]) -> Result<()> {
    if rows.len() != labels.len() {
        return Err(Error::invalid(format!(
            "{} feature rows but {} labels",
            rows.len(),
            labels.len()
        )));
    }
    for row in rows {
        for &(i, v) in row {
            if i >= dim {
                return Err(Error::invalid(format!("feature index {i} out of range {dim}")));
            }
            if !v.is_finite() {
                return Err(Error::invalid("non-finite feature value"));
            }
        }
    }
    if !labels.iter().any(|&y| y) || labels.iter().all(|&y| y) {
        return Err(Error::SingleClass("logistic regression labels"));
    }
    Ok(())
}

struct Problem<'a, T> {
    rows: Vec<&'a [(usize, T)]>,
    labels: Vec<bool>,
    dim: usize,
    l2: T,
}

impl<T: Scalar> Problem<'_, T> {
    fn n(&self) -> T {
        T::from_count(self.rows.len())
    }

    // Parameter layout: weights then bias.
    fn margins(&self, theta: &[T]) -> Vec<T> {
        let b = theta[self.dim];
        self.rows.iter().map(|r| b + dot(&theta[..self.dim], r)).collect()
    }

    fn loss(&self, theta: &[T]) -> T {
        let data: T = self
            .margins(theta)
            .into_iter()
            .zip(&self.labels)
            .map(|(z, &y)| if y { softplus(-z) } else { softplus(z) })
            .sum();
        let reg: T = theta[..self.dim].iter().map(|&w| w * w).sum();
        data / self.n() + self.l2 * reg * T::lit(0.5)
    }

    fn gradient(&self, theta: &[T], margins: &[T]) -> Vec<T> {
        let mut g = vec![T::zero(); self.dim + 1];
        for ((row, &z), &y) in self.rows.iter().zip(margins).zip(&self.labels) {
            let r = sigmoid(z) - if y { T::one() } else { T::zero() };
            for &(i, v) in row.iter() {
                g[i] += r * v;
            }
            g[self.dim] += r;
        }
        let n = self.n();
        for (i, gi) in g.iter_mut().enumerate() {
            *gi /= n;
            if i < self.dim {
                *gi += self.l2 * theta[i];
            }
        }
        g
    }

    fn hess_vec(&self, curv: &[T], v: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim + 1];
        for (row, &c) in self.rows.iter().zip(curv) {
            let xv = v[self.dim] + dot(&v[..self.dim], row);
            let s = c * xv;
            for &(i, x) in row.iter() {
                out[i] += s * x;
            }
            out[self.dim] += s;
        }
        let n = self.n();
        for (i, o) in out.iter_mut().enumerate() {
            *o /= n;
            if i < self.dim {
                *o += self.l2 * v[i];
            }
        }
        out
    }
}

fn norm<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum::<T>().sqrt()
}

fn minimize<T: Scalar>(p: &Problem<'_, T>, opts: &FitOptions<T>) -> Vec<T> {
    let n = p.dim + 1;
    let mut theta = vec![T::zero(); n];
    let mut f = p.loss(&theta);
    for _ in 0..opts.max_newton_iter {
        let margins = p.margins(&theta);
        let g = p.gradient(&theta, &margins);
        let gnorm = norm(&g);
        if gnorm <= opts.grad_tol {
            break;
        }
        let curv: Vec<T> = margins
            .iter()
            .map(|&z| {
                let s = sigmoid(z);
                s * (T::one() - s)
            })
            .collect();
        // Conjugate gradient on H d = -g, truncated at a relative tolerance.
        let cg_tol = gnorm * gnorm.sqrt().min(T::lit(0.5));
        let mut d = vec![T::zero(); n];
        let mut r: Vec<T> = g.iter().map(|&x| -x).collect();
        let mut q = r.clone();
        let mut rr: T = r.iter().map(|&x| x * x).sum();
        for _ in 0..(2 * n).max(10) {
            if rr.sqrt() <= cg_tol {
                break;
            }
            let hq = p.hess_vec(&curv, &q);
            let qhq: T = q.iter().zip(&hq).map(|(&a, &b)| a * b).sum();
            if qhq <= T::zero() {
                break;
            }
            let alpha = rr / qhq;
            for i in 0..n {
                d[i] += alpha * q[i];
                r[i] -= alpha * hq[i];
            }
            let rr_new: T = r.iter().map(|&x| x * x).sum();
            let beta = rr_new / rr;
            rr = rr_new;
            for i in 0..n {
                q[i] = r[i] + beta * q[i];
            }
        }
        if d.iter().all(|&x| x == T::zero()) {
            d = g.iter().map(|&x| -x).collect();
        }
        // Armijo backtracking.
        let slope: T = g.iter().zip(&d).map(|(&a, &b)| a * b).sum();
        let mut step = T::one();
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<T> = theta.iter().zip(&d).map(|(&t, &s)| t + step * s).collect();
            let fc = p.loss(&cand);
            if fc <= f + T::lit(1e-4) * step * slope {
                theta = cand;
                f = fc;
                accepted = true;
                break;
            }
            step *= T::lit(0.5);
        }
        if !accepted {
            break;
        }
    }
    theta
}

fn fit_indices<T: Scalar>(
    rows: &[SparseRow<T>],
    dim: usize,
    labels: &[bool],
    idx: &[usize],
    l2: T,
    opts: &FitOptions<T>,
) -> LogisticModel<T> {
    let problem = Problem {
        rows: idx.iter().map(|&i| rows[i].as_slice()).collect(),
        labels: idx.iter().map(|&i| labels[i]).collect(),
        dim,
        l2,
    };
    let theta = minimize(&problem, opts);
    LogisticModel {
        bias: theta[dim],
        weights: theta[..dim].to_vec(),
        l2_strength: l2,
    }
}

/// Fit with a fixed penalty.
pub fn fit_logreg<T: Scalar>(
    rows: &[SparseRow<T>],
    dim: usize,
    labels: &[bool],
    l2: T,
    opts: &FitOptions<T>,
) -> Result<LogisticModel<T>> {
    check_data(rows, dim, labels)?;
    if !(l2 > T::zero()) {
        return Err(Error::invalid("l2 strength must be positive"));
    }
    let idx: Vec<usize> = (0..rows.len()).collect();
    Ok(fit_indices(rows, dim, labels, &idx, l2, opts))
}

/// Gradient of the regularized mean loss; exposed for optimality checks.
pub fn regularized_gradient<T: Scalar>(
    model: &LogisticModel<T>,
    rows: &[SparseRow<T>],
    labels: &[bool],
) -> Vec<T> {
    let dim = model.weights.len();
    let problem = Problem {
        rows: rows.iter().map(Vec::as_slice).collect(),
        labels: labels.to_vec(),
        dim,
        l2: model.l2_strength,
    };
    let mut theta = model.weights.clone();
    theta.push(model.bias);
    let margins = problem.margins(&theta);
    problem.gradient(&theta, &margins)
}

/// Cross-validation folds. Identical (row, label) pairs always share a fold so
/// that duplicating the data set leaves every fold's distribution unchanged;
/// groups are dealt per class so each training split keeps both classes.
fn cv_folds<T: Scalar>(
    rows: &[SparseRow<T>],
    labels: &[bool],
    folds: usize,
    seed: u64,
) -> Option<Vec<Vec<usize>>> {
    let mut group_of: HashMap<(Vec<(usize, u64)>, bool), usize> = HashMap::new();
    let mut groups: Vec<(bool, Vec<usize>)> = Vec::new();
    for (i, (row, &y)) in rows.iter().zip(labels).enumerate() {
        let key = (row.iter().map(|&(j, v)| (j, v.as_f64().to_bits())).collect(), y);
        let g = *group_of.entry(key).or_insert_with(|| {
            groups.push((y, Vec::new()));
            groups.len() - 1
        });
        groups[g].1.push(i);
    }
    let mut rng = rng::seeded(rng::substream(seed, "cv"));
    let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (g, (y, _)) in groups.iter().enumerate() {
        by_class[*y as usize].push(g);
    }
    let k = folds.min(by_class[0].len()).min(by_class[1].len());
    if k < 2 {
        return None;
    }
    let mut out = vec![Vec::new(); k];
    for class in by_class.iter_mut() {
        class.shuffle(&mut rng);
        for (j, &g) in class.iter().enumerate() {
            out[j % k].extend_from_slice(&groups[g].1);
        }
    }
    Some(out)
}

/// Per-penalty mean held-out log-likelihood.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CvScore<T> {
    pub l2: T,
    pub mean_log_likelihood: T,
}

/// Select the penalty by k-fold cross-validation, then refit on all data.
/// Ties go to the earlier grid entry.
pub fn train_logreg<T: Scalar>(
    rows: &[SparseRow<T>],
    dim: usize,
    labels: &[bool],
    l2_grid: &[T],
    folds: usize,
    seed: u64,
) -> Result<(LogisticModel<T>, Vec<CvScore<T>>)> {
    check_data(rows, dim, labels)?;
    if l2_grid.is_empty() || l2_grid.iter().any(|&l| !(l > T::zero()) || !l.is_finite()) {
        return Err(Error::invalid("l2 grid must be non-empty and positive"));
    }
    let opts = FitOptions::default();
    let mut scores = Vec::new();
    let mut best = l2_grid[0];
    let split = if l2_grid.len() > 1 { cv_folds(rows, labels, folds, seed) } else { None };
    if let Some(split) = split {
        let mut best_ll = T::neg_infinity();
        for &l2 in l2_grid {
            let mut total = T::zero();
            for (f, held) in split.iter().enumerate() {
                let train: Vec<usize> = split
                    .iter()
                    .enumerate()
                    .filter(|&(g, _)| g != f)
                    .flat_map(|(_, v)| v.iter().copied())
                    .collect();
                let m = fit_indices(rows, dim, labels, &train, l2, &opts);
                for &i in held {
                    let z = m.logit(&rows[i]);
                    total -= if labels[i] { softplus(-z) } else { softplus(z) };
                }
            }
            let ll = total / T::from_count(rows.len());
            scores.push(CvScore { l2, mean_log_likelihood: ll });
            if ll > best_ll {
                best_ll = ll;
                best = l2;
            }
        }
    }
    let idx: Vec<usize> = (0..rows.len()).collect();
    Ok((fit_indices(rows, dim, labels, &idx, best, &opts), scores))
}
