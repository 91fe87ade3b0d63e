use super::vocab::SparseRow;
use crate::scalar::Scalar;

/// Mutual information, in bits, between the presence (count > 0) of each
/// feature and the binary label.
pub fn mutual_information<T: Scalar>(rows: &[SparseRow<T>], dim: usize, labels: &[bool]) -> Vec<T> {
    let n = rows.len().min(labels.len());
    if n == 0 {
        return vec![T::zero(); dim];
    }
    // joint[j] = [[absent & neg, absent & pos], [present & neg, present & pos]]
    let mut present = vec![[0usize; 2]; dim];
    let mut class = [0usize; 2];
    for (row, &y) in rows.iter().zip(labels) {
        class[y as usize] += 1;
        for &(j, v) in row {
            if v > T::zero() && j < dim {
                present[j][y as usize] += 1;
            }
        }
    }
    let nf = n as f64;
    present
        .iter()
        .map(|p| {
            let cells = [
                [class[0] - p[0], class[1] - p[1]],
                [p[0], p[1]],
            ];
            let mut mi = 0.0;
            for row in cells.iter() {
                let px = (row[0] + row[1]) as f64 / nf;
                for (y, &c) in row.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let pxy = c as f64 / nf;
                    let py = class[y] as f64 / nf;
                    mi += pxy * (pxy / (px * py)).log2();
                }
            }
            T::lit(mi.max(0.0))
        })
        .collect()
}

/// Feature indices by decreasing mutual information; ties keep index order.
pub fn rank_features_mi<T: Scalar>(rows: &[SparseRow<T>], dim: usize, labels: &[bool]) -> Vec<usize> {
    let mi = mutual_information(rows, dim, labels);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| mi[b].partial_cmp(&mi[a]).unwrap_or(std::cmp::Ordering::Equal));
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identical_feature_has_one_bit() {
        let labels = [true, false, true, false];
        let rows: Vec<SparseRow<f64>> = labels
            .iter()
            .map(|&y| if y { vec![(1, 3.0)] } else { vec![(0, 1.0)] })
            .collect();
        let mut rows = rows;
        rows[0].push((2, 1.0));
        rows[1].push((2, 1.0));
        let mi = mutual_information(&rows, 3, &labels);
        assert!((mi[1] - 1.0).abs() < 1e-12);
        assert!((mi[0] - 1.0).abs() < 1e-12);
        assert!(mi[2].abs() < 1e-12);
        assert_eq!(rank_features_mi(&rows, 3, &labels), vec![0, 1, 2]);
    }

    proptest! {
        #[test]
        fn bounded_and_equivariant(
            data in prop::collection::vec((prop::collection::vec(any::<bool>(), 4), any::<bool>()), 1..40),
            perm in Just(vec![2usize, 0, 3, 1]).prop_shuffle(),
        ) {
            let labels: Vec<bool> = data.iter().map(|d| d.1).collect();
            let rows: Vec<SparseRow<f64>> = data
                .iter()
                .map(|(f, _)| f.iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| (j, 1.0)).collect())
                .collect();
            let mi = mutual_information(&rows, 4, &labels);
            let pos = labels.iter().filter(|&&y| y).count() as f64 / labels.len() as f64;
            let h = if pos == 0.0 || pos == 1.0 { 0.0 } else { -(pos * pos.log2() + (1.0 - pos) * (1.0 - pos).log2()) };
            for &m in &mi {
                prop_assert!(m >= 0.0);
                prop_assert!(m <= h.min(1.0) + 1e-9);
            }
            // Column j of the permuted matrix is column perm[j] of the original.
            let mut inv = vec![0; 4];
            for (j, &p) in perm.iter().enumerate() {
                inv[p] = j;
            }
            let permuted: Vec<SparseRow<f64>> = rows
                .iter()
                .map(|r| {
                    let mut r: Vec<(usize, f64)> = r.iter().map(|&(j, v)| (inv[j], v)).collect();
                    r.sort_by_key(|x| x.0);
                    r
                })
                .collect();
            let mi2 = mutual_information(&permuted, 4, &labels);
            for j in 0..4 {
                prop_assert!((mi2[j] - mi[perm[j]]).abs() < 1e-12);
            }
        }
    }
}
