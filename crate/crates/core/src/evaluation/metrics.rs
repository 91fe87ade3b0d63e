use crate::error::{Error, Result};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// A prediction for one edge: probability of the positive sign and the truth.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ScoredEdge<T> {
    pub edge: usize,
    pub score: T,
    pub truth: bool,
}

fn check_scores<T: Scalar>(scored: &[ScoredEdge<T>]) -> Result<()> {
    if let Some(s) = scored.iter().find(|s| !s.score.is_finite()) {
        return Err(Error::invalid(format!("non-finite score for edge {}", s.edge)));
    }
    Ok(())
}

fn class_counts<T>(scored: &[ScoredEdge<T>]) -> (usize, usize) {
    let pos = scored.iter().filter(|s| s.truth).count();
    (pos, scored.len() - pos)
}

/// Area under the ROC curve as the Mann-Whitney statistic; ties count 1/2.
pub fn auc_roc<T: Scalar>(scored: &[ScoredEdge<T>]) -> Result<f64> {
    check_scores(scored)?;
    let (pos, neg) = class_counts(scored);
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClass("ROC AUC needs both classes"));
    }
    let mut order: Vec<(f64, bool)> = scored.iter().map(|s| (s.score.as_f64(), s.truth)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Sum of midranks of the positives.
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && order[j].0 == order[i].0 {
            j += 1;
        }
        let mid = (i + 1 + j) as f64 / 2.0;
        rank_sum += mid * order[i..j].iter().filter(|x| x.1).count() as f64;
        i = j;
    }
    let (p, n) = (pos as f64, neg as f64);
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * n))
}

/// `(recall, precision)` points of the negative-class PR curve, one per
/// distinct threshold on `1 - score` in decreasing order. The curve starts at
/// recall 0 with the precision of the first threshold.
pub fn neg_pr_curve<T: Scalar>(scored: &[ScoredEdge<T>]) -> Result<Vec<(f64, f64)>> {
    check_scores(scored)?;
    let (_, neg) = class_counts(scored);
    if neg == 0 {
        return Err(Error::SingleClass("negative PR curve needs a negative example"));
    }
    let mut order: Vec<(f64, bool)> = scored
        .iter()
        .map(|s| (1.0 - s.score.as_f64(), !s.truth))
        .collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut points = Vec::new();
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && order[j].0 == order[i].0 {
            if order[j].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            j += 1;
        }
        let precision = tp as f64 / (tp + fp) as f64;
        if points.is_empty() {
            points.push((0.0, precision));
        }
        points.push((tp as f64 / neg as f64, precision));
        i = j;
    }
    Ok(points)
}

/// Trapezoidal area under a curve given as `(x, y)` points in x order.
pub fn trapezoid(points: &[(f64, f64)]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
        .sum()
}

/// Area under the precision-recall curve of the negative class.
pub fn auc_neg_pr<T: Scalar>(scored: &[ScoredEdge<T>]) -> Result<f64> {
    Ok(trapezoid(&neg_pr_curve(scored)?))
}

/// `(false positive rate, true positive rate)` points, one per distinct
/// threshold in decreasing score order, starting at the origin.
pub fn roc_curve<T: Scalar>(scored: &[ScoredEdge<T>]) -> Result<Vec<(f64, f64)>> {
    check_scores(scored)?;
    let (pos, neg) = class_counts(scored);
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClass("ROC curve needs both classes"));
    }
    let mut order: Vec<(f64, bool)> = scored.iter().map(|s| (s.score.as_f64(), s.truth)).collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && order[j].0 == order[i].0 {
            if order[j].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            j += 1;
        }
        points.push((fp as f64 / neg as f64, tp as f64 / pos as f64));
        i = j;
    }
    Ok(points)
}

/// Curve points as CSV with the given column names.
pub fn write_curve_csv<W: Write>(points: &[(f64, f64)], x: &str, y: &str, mut out: W) -> Result<()> {
    writeln!(out, "{x},{y}")?;
    for (a, b) in points {
        writeln!(out, "{a},{b}")?;
    }
    Ok(())
}

/// Mean and standard error (sample standard deviation over sqrt(n)).
/// A single value has standard error 0.
pub fn mean_and_standard_error(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}


#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn scored(scores: &[f64], truths: &[bool]) -> Vec<ScoredEdge<f64>> {
        scores
            .iter()
            .zip(truths)
            .enumerate()
            .map(|(edge, (&score, &truth))| ScoredEdge { edge, score, truth })
            .collect()
    }

    /// Pairwise reference.
    fn roc_reference(s: &[ScoredEdge<f64>]) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for a in s.iter().filter(|x| x.truth) {
            for b in s.iter().filter(|x| !x.truth) {
                den += 1.0;
                num += if a.score > b.score { 1.0 } else if a.score == b.score { 0.5 } else { 0.0 };
            }
        }
        num / den
    }

    /// Direct reference: precision and recall recomputed from scratch at every
    /// distinct threshold.
    fn neg_pr_reference(s: &[ScoredEdge<f64>]) -> f64 {
        let mut thresholds: Vec<f64> = s.iter().map(|x| 1.0 - x.score).collect();
        thresholds.sort_by(|a, b| b.total_cmp(a));
        thresholds.dedup();
        let neg = s.iter().filter(|x| !x.truth).count() as f64;
        let mut pts = Vec::new();
        for &t in &thresholds {
            let sel: Vec<_> = s.iter().filter(|x| 1.0 - x.score >= t).collect();
            let tp = sel.iter().filter(|x| !x.truth).count() as f64;
            let prec = tp / sel.len() as f64;
            if pts.is_empty() {
                pts.push((0.0, prec));
            }
            pts.push((tp / neg, prec));
        }
        let mut area = 0.0;
        for w in pts.windows(2) {
            area += (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0;
        }
        area
    }

    #[test]
    fn roc_examples() {
        assert_eq!(auc_roc(&scored(&[0.9, 0.8, 0.1], &[true, true, false])).unwrap(), 1.0);
        assert_eq!(auc_roc(&scored(&[0.4; 5], &[true, false, true, true, false])).unwrap(), 0.5);
        assert_eq!(auc_roc(&scored(&[0.2, 0.7], &[true, false])).unwrap(), 0.0);
        assert!(auc_roc(&scored(&[0.2, 0.7], &[true, true])).is_err());
        assert!(auc_roc(&scored(&[f64::NAN, 0.7], &[true, false])).is_err());
    }

    #[test]
    fn neg_pr_examples() {
        assert_eq!(auc_neg_pr(&scored(&[0.9, 0.8, 0.1, 0.2], &[true, true, false, false])).unwrap(), 1.0);
        // 24 negatives in 100, constant score.
        let truths: Vec<bool> = (0..100).map(|i| i >= 24).collect();
        let a = auc_neg_pr(&scored(&[0.5; 100], &truths)).unwrap();
        assert!((a - 0.24).abs() < 1e-12);
        assert!(auc_neg_pr(&scored(&[0.5], &[true])).is_err());
        // Positives only is an error, negatives only is fine.
        assert_eq!(auc_neg_pr(&scored(&[0.1, 0.3], &[false, false])).unwrap(), 1.0);
    }

    #[test]
    fn curves_and_summary() {
        let s = scored(&[0.9, 0.5, 0.5, 0.1], &[true, false, true, false]);
        let roc = roc_curve(&s).unwrap();
        assert_eq!(roc.first(), Some(&(0.0, 0.0)));
        assert_eq!(roc.last(), Some(&(1.0, 1.0)));
        assert!((trapezoid(&roc) - auc_roc(&s).unwrap()).abs() < 1e-12);
        let mut buf = Vec::new();
        write_curve_csv(&roc, "fpr", "tpr", &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("fpr,tpr\n0,0\n"));
        let (m, se) = mean_and_standard_error(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((se - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(mean_and_standard_error(&[4.0]), (4.0, 0.0));
    }

    fn inputs() -> impl Strategy<Value = Vec<ScoredEdge<f64>>> {
        // Coarse scores make ties common.
        prop::collection::vec((0u8..20, any::<bool>()), 2..60).prop_map(|v| {
            v.into_iter()
                .enumerate()
                .map(|(edge, (s, truth))| ScoredEdge { edge, score: s as f64 / 19.0, truth })
                .collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn matches_references(mut s in inputs()) {
            s[0].truth = true;
            s[1].truth = false;
            prop_assert!((auc_roc(&s).unwrap() - roc_reference(&s)).abs() <= 1e-9);
            prop_assert!((auc_neg_pr(&s).unwrap() - neg_pr_reference(&s)).abs() <= 1e-9);
            let a = auc_neg_pr(&s).unwrap();
            prop_assert!((0.0..=1.0).contains(&a));
        }

        #[test]
        fn roc_invariant_under_monotone_transform(mut s in inputs()) {
            s[0].truth = true;
            s[1].truth = false;
            let t: Vec<ScoredEdge<f64>> = s.iter().map(|x| ScoredEdge { score: (3.0 * x.score).exp() / 30.0, ..*x }).collect();
            prop_assert_eq!(auc_roc(&s).unwrap(), auc_roc(&t).unwrap());
        }

        #[test]
        fn roc_flip_complement(perm in Just((0..30).collect::<Vec<usize>>()).prop_shuffle(), truths in prop::collection::vec(any::<bool>(), 30)) {
            let mut truths = truths;
            truths[0] = true;
            truths[1] = false;
            let s: Vec<ScoredEdge<f64>> = perm.iter().zip(&truths).enumerate()
                .map(|(edge, (&r, &truth))| ScoredEdge { edge, score: r as f64 / 29.0, truth })
                .collect();
            let flipped: Vec<ScoredEdge<f64>> = s.iter().map(|x| ScoredEdge { truth: !x.truth, score: 1.0 - x.score, ..*x }).collect();
            // Flipping the truths and reversing the ranking: the statistic is preserved.
            prop_assert!((auc_roc(&s).unwrap() - auc_roc(&flipped).unwrap()).abs() < 1e-12);
            let only_flip: Vec<ScoredEdge<f64>> = s.iter().map(|x| ScoredEdge { truth: !x.truth, ..*x }).collect();
            prop_assert!((auc_roc(&s).unwrap() + auc_roc(&only_flip).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
