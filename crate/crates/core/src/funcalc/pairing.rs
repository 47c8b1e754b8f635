use num_complex::Complex64;

use super::CalcError;
use crate::numkit::{eigenvalues, MatrixC, NumError, ToleranceConfig};

/// Bijection between the eigenvalues of one sequence member and those of the limit.
#[derive(Debug, Clone, PartialEq)]
pub struct Pairing {
    pub values: Vec<Complex64>,
    pub limit_values: Vec<Complex64>,
    /// `assignment[i]` is the index in `limit_values` paired with `values[i]`.
    pub assignment: Vec<usize>,
    /// Bottleneck: largest paired distance.
    pub max_distance: f64,
}

/// For each member of `seq`, an eigenvalue bijection with `limit` minimizing
/// the largest paired distance.
pub fn pair_spectra(seq: &[MatrixC], limit: &MatrixC, tol: &ToleranceConfig) -> Result<Vec<Pairing>, CalcError> {
    tol.validate()?;
    let limit_values = eigenvalues(limit)?;
    seq.iter()
        .map(|a| {
            if a.dim() != limit.dim() {
                return Err(NumError::DimensionMismatch {
                    left: a.dim(),
                    right: limit.dim(),
                }
                .into());
            }
            let values = eigenvalues(a)?;
            let (assignment, max_distance) = bottleneck_assignment(&values, &limit_values);
            Ok(Pairing {
                values,
                limit_values: limit_values.clone(),
                assignment,
                max_distance,
            })
        })
        .collect()
}

/// Bottleneck assignment by binary search over candidate thresholds with an
/// augmenting-path matching at each step. Ties prefer the same index.
pub fn bottleneck_assignment(a: &[Complex64], b: &[Complex64]) -> (Vec<usize>, f64) {
    let n = a.len();
    let dist: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| (x - y).norm()).collect()).collect();
    let mut candidates: Vec<f64> = dist.iter().flatten().copied().collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let (mut lo, mut hi) = (0, candidates.len() - 1);
    let mut best = matching(&dist, candidates[hi]).expect("complete bipartite graph has a perfect matching");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match matching(&dist, candidates[mid]) {
            Some(m) => {
                best = m;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    if best.len() != n {
        unreachable!("matching covers every row");
    }
    let max = (0..n).map(|i| dist[i][best[i]]).fold(0.0, f64::max);
    (best, max)
}

fn matching(dist: &[Vec<f64>], threshold: f64) -> Option<Vec<usize>> {
    let n = dist.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, dist, threshold, &mut owner, &mut seen) {
            return None;
        }
    }
    let mut row_to_col = vec![0; n];
    for (j, o) in owner.iter().enumerate() {
        row_to_col[o.expect("perfect matching")] = j;
    }
    Some(row_to_col)
}

fn augment(i: usize, dist: &[Vec<f64>], threshold: f64, owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    let n = dist.len();
    let order = std::iter::once(i).chain((0..n).filter(move |&j| j != i));
    for j in order {
        if dist[i][j] > threshold || seen[j] {
            continue;
        }
        seen[j] = true;
        let free = match owner[j] {
            None => true,
            Some(other) => augment(other, dist, threshold, owner, seen),
        };
        if free {
            owner[j] = Some(i);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_sequence_is_identity() {
        let a = MatrixC::from_real_rows(3, &[1.0, 2.0, 0.0, -1.0, 0.5, 0.3, 0.0, 0.2, 2.0]).unwrap();
        let p = pair_spectra(&[a.clone(), a.clone()], &a, &ToleranceConfig::default()).unwrap();
        for q in p {
            assert_eq!(q.assignment, vec![0, 1, 2]);
            assert_eq!(q.max_distance, 0.0);
        }
    }

    #[test]
    fn shrinking_offset() {
        let limit = MatrixC::diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]);
        let seq: Vec<MatrixC> = (2..=5)
            .map(|n| MatrixC::diagonal(&[c(2.0, 0.0), c(1.0 + 1.0 / n as f64, 0.0)]))
            .collect();
        let p = pair_spectra(&seq, &limit, &ToleranceConfig::default()).unwrap();
        for (n, q) in (2..=5).zip(&p) {
            assert_eq!(q.assignment, vec![1, 0]);
            assert!((q.max_distance - 1.0 / n as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn rotating_pair() {
        let limit = MatrixC::zeros(2);
        let seq: Vec<MatrixC> = (1..=5)
            .map(|n| {
                let t = 1.0 / n as f64;
                MatrixC::diagonal(&[c(0.0, t), c(0.0, -t)])
            })
            .collect();
        let p = pair_spectra(&seq, &limit, &ToleranceConfig::default()).unwrap();
        for (n, q) in (1..=5).zip(&p) {
            assert!((q.max_distance - 1.0 / n as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn bottleneck_beats_greedy() {
        // greedy nearest pairs 1 <-> 0.9 and leaves 0 <-> 5
        let a = [c(1.0, 0.0), c(0.0, 0.0)];
        let b = [c(0.9, 0.0), c(5.0, 0.0)];
        let (assign, max) = bottleneck_assignment(&a, &b);
        assert_eq!(assign, vec![1, 0]);
        assert!((max - 4.0).abs() < 1e-15);
    }
}
