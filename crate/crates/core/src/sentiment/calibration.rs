use crate::error::{Error, Result};
use crate::scalar::{sigmoid, softplus, Scalar};
use serde::{Deserialize, Serialize};

/// Logistic map `score -> sigmoid(slope * score + intercept)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CalibrationMap<T> {
    pub slope: T,
    pub intercept: T,
}

impl<T: Scalar> CalibrationMap<T> {
    pub fn apply(&self, score: T) -> T {
        sigmoid(self.slope * score + self.intercept)
    }
}

// Keeps the slope bounded on separable data.
const SLOPE_RIDGE: f64 = 1e-4;

/// Platt scaling: one-dimensional logistic regression from raw score to label.
///
/// Scores are standardized before fitting. The fitted slope is forced to be
/// strictly positive; a fit that comes out non-positive (anti-correlated or
/// constant scores) falls back to a tiny positive slope so the map stays
/// strictly monotone and the ranking is preserved.
pub fn platt_scale<T: Scalar>(scores: &[T], labels: &[bool]) -> Result<CalibrationMap<T>> {
    if scores.len() != labels.len() {
        return Err(Error::invalid("scores and labels differ in length"));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::invalid("non-finite score"));
    }
    let pos = labels.iter().filter(|&&y| y).count();
    if pos == 0 || pos == labels.len() {
        return Err(Error::SingleClass("calibration labels"));
    }
    let n = T::from_count(scores.len());
    let mean = scores.iter().copied().sum::<T>() / n;
    let var = scores.iter().map(|&s| (s - mean) * (s - mean)).sum::<T>() / n;
    let std = var.sqrt();
    let prior = T::from_count(pos) / n;
    let prior_logit = (prior / (T::one() - prior)).ln();
    if !(std > T::zero()) {
        let slope = T::epsilon();
        return Ok(CalibrationMap { slope, intercept: prior_logit - slope * mean });
    }
    let u: Vec<T> = scores.iter().map(|&s| (s - mean) / std).collect();
    let ridge = T::lit(SLOPE_RIDGE);
    let half = T::lit(0.5);
    let loss = |a: T, b: T| {
        let d: T = u
            .iter()
            .zip(labels)
            .map(|(&x, &y)| {
                let z = a * x + b;
                if y { softplus(-z) } else { softplus(z) }
            })
            .sum();
        d / n + half * ridge * a * a
    };
    let (mut a, mut b) = (T::zero(), prior_logit);
    let mut f = loss(a, b);
    for _ in 0..100 {
        let (mut ga, mut gb, mut haa, mut hab, mut hbb) =
            (T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
        for (&x, &y) in u.iter().zip(labels) {
            let p = sigmoid(a * x + b);
            let r = p - if y { T::one() } else { T::zero() };
            let c = p * (T::one() - p);
            ga += r * x;
            gb += r;
            haa += c * x * x;
            hab += c * x;
            hbb += c;
        }
        ga = ga / n + ridge * a;
        gb /= n;
        haa = haa / n + ridge;
        hab /= n;
        hbb = hbb / n + T::lit(1e-12);
        if (ga * ga + gb * gb).sqrt() <= T::lit(1e-10).max(T::epsilon() * T::lit(10.0)) {
            break;
        }
        let det = haa * hbb - hab * hab;
        let (da, db) = (-(hbb * ga - hab * gb) / det, -(haa * gb - hab * ga) / det);
        let mut step = T::one();
        let mut moved = false;
        for _ in 0..50 {
            let (na, nb) = (a + step * da, b + step * db);
            let fc = loss(na, nb);
            if fc <= f {
                moved = fc < f || (na == a && nb == b);
                a = na;
                b = nb;
                f = fc;
                break;
            }
            step *= half;
        }
        if !moved {
            break;
        }
    }
    let a = if a > T::zero() { a } else { T::epsilon() };
    let slope = a / std;
    Ok(CalibrationMap { slope, intercept: b - slope * mean })
}
