use num_complex::Complex64;

use super::CalcError;
use crate::numkit::{eigenvalues, op_norm, rank, MatrixC, ToleranceConfig};

/// One eigenvalue cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    /// Mean of the clustered computed eigenvalues.
    pub lambda: Complex64,
    pub alg_mult: usize,
    /// Multiplicity of `lambda` as a root of the minimal polynomial.
    pub min_poly_exp: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumData {
    pub dim: usize,
    /// Sorted by real part, then imaginary part.
    pub clusters: Vec<Cluster>,
    /// Single eigenvalue with one Jordan block of full size.
    pub in_z_k: bool,
    pub diagonalizable: bool,
    /// Raw eigenvalues, one per algebraic multiplicity.
    pub values: Vec<Complex64>,
    /// `cluster_of[i]` is the cluster index of `values[i]`.
    pub cluster_of: Vec<usize>,
    pub warnings: Vec<String>,
}

impl SpectrumData {
    pub fn is_simple(&self) -> bool {
        self.clusters.iter().all(|c| c.min_poly_exp == 1)
    }

    /// Degree of the minimal polynomial.
    pub fn min_poly_degree(&self) -> usize {
        self.clusters.iter().map(|c| c.min_poly_exp).sum()
    }
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut j = i;
    while parent[j] != r {
        let next = parent[j];
        parent[j] = r;
        j = next;
    }
    r
}

/// Single-linkage clustering of eigenvalues plus minimal-polynomial exponents
/// from rank tests on powers of `X - lambda I`.
pub fn analyze_spectrum(x: &MatrixC, tol: &ToleranceConfig) -> Result<SpectrumData, CalcError> {
    tol.validate()?;
    let k = x.dim();
    let values = eigenvalues(x)?;

    let mut parent: Vec<usize> = (0..k).collect();
    for i in 0..k {
        for j in i + 1..k {
            if (values[i] - values[j]).norm() <= tol.cluster_tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut root_index: Vec<Option<usize>> = vec![None; k];
    for i in 0..k {
        let r = find(&mut parent, i);
        match root_index[r] {
            Some(c) => members[c].push(i),
            None => {
                root_index[r] = Some(members.len());
                members.push(vec![i]);
            }
        }
    }
    let mut groups: Vec<(Complex64, Vec<usize>)> = members
        .into_iter()
        .map(|m| {
            let sum: Complex64 = m.iter().map(|&i| values[i]).sum();
            (sum / m.len() as f64, m)
        })
        .collect();
    groups.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));

    for a in 0..groups.len() {
        for b in a + 1..groups.len() {
            let d = (groups[a].0 - groups[b].0).norm();
            if d <= 3.0 * tol.cluster_tol {
                return Err(CalcError::AmbiguousClustering {
                    a: groups[a].0,
                    b: groups[b].0,
                    distance: d,
                });
            }
        }
    }

    let mut warnings = Vec::new();
    let mut cluster_of = vec![0; k];
    let mut clusters = Vec::with_capacity(groups.len());
    for (c, (lambda, m)) in groups.iter().enumerate() {
        for &i in m {
            cluster_of[i] = c;
        }
        let alg_mult = m.len();
        let min_poly_exp = if alg_mult == 1 {
            1
        } else {
            let spread = m.iter().map(|&i| (values[i] - lambda).norm()).fold(0.0, f64::max);
            match min_poly_exponent(x, *lambda, alg_mult, spread, tol) {
                Some(p) => p,
                None => {
                    warnings.push(format!(
                        "rank test did not stabilize for cluster at {lambda}; assuming a single Jordan block"
                    ));
                    alg_mult
                }
            }
        };
        clusters.push(Cluster {
            lambda: *lambda,
            alg_mult,
            min_poly_exp,
        });
    }

    let in_z_k = clusters.len() == 1 && clusters[0].min_poly_exp == k;
    let diagonalizable = clusters.iter().all(|c| c.min_poly_exp == 1);
    Ok(SpectrumData {
        dim: k,
        clusters,
        in_z_k,
        diagonalizable,
        values,
        cluster_of,
        warnings,
    })
}

/// Smallest `p <= alg_mult` with `rank((X - lambda I)^p) <= k - alg_mult`.
///
/// Singular values count as zero below `zero_tol * b^p + 4 p spread b^(p-1)`
/// with `b = max(1, ||X - lambda I||)`: the second term absorbs the error of
/// using the cluster mean, which for a defective eigenvalue sits about
/// `sqrt(eps)` away from each computed member.
fn min_poly_exponent(
    x: &MatrixC,
    lambda: Complex64,
    alg_mult: usize,
    spread: f64,
    tol: &ToleranceConfig,
) -> Option<usize> {
    let k = x.dim();
    let shifted = x.shifted(-lambda);
    let base = op_norm(&shifted).max(1.0);
    let mut power = MatrixC::identity(k);
    let mut scale = 1.0;
    for p in 1..=alg_mult {
        power = power.matmul(&shifted);
        let threshold = tol.zero_tol * scale * base + 4.0 * p as f64 * spread * scale;
        scale *= base;
        if rank(&power, threshold) <= k - alg_mult {
            return Some(p);
        }
    }
    None
}
