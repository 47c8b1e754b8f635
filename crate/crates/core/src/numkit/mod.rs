//! Dense complex matrix kernels: storage, norms, rank tests and the eigensolver.
//!
//! Everything above this module works with [`MatrixC`], a square matrix of
//! finite [`Complex64`] entries. Storage is delegated to `nalgebra`; the
//! eigensolver in [`eigen`] is our own Hessenberg + shifted QR.

mod eigen;
mod matrix;

pub use eigen::{eig, eigenvalues, EigenDecomposition};
pub use matrix::MatrixC;

use nalgebra::DMatrix;
pub use num_complex::Complex64;

/// Complex scalar used throughout the crate.
pub type Scalar = Complex64;

/// Shorthand constructor for a [`Complex64`].
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumError {
    #[error("NotSquare: expected {expected} entries for a {dim}x{dim} matrix, got {got}")]
    NotSquare { dim: usize, expected: usize, got: usize },
    #[error("EmptyMatrix: matrix dimension must be at least 1")]
    EmptyMatrix,
    #[error("NonFinite: entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("NoConvergence: QR iteration did not converge within {iterations} sweeps")]
    NoConvergence { iterations: usize },
    #[error("InvalidTolerance: {0}")]
    InvalidTolerance(String),
    #[error("DimensionMismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// Numerical thresholds shared by every routine that has to decide whether a
/// computed quantity "is" zero, equal, or well conditioned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Radius used to merge computed eigenvalues into clusters.
    pub cluster_tol: f64,
    /// Threshold for treating a (scaled) matrix norm as zero.
    pub zero_tol: f64,
    /// Largest eigenvector-matrix condition number accepted by the diagonal route.
    pub cond_max: f64,
    /// Generic relative comparison tolerance.
    pub rel_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            cluster_tol: 1e-8,
            zero_tol: 1e-10,
            cond_max: 1e8,
            rel_tol: 1e-9,
        }
    }
}

impl ToleranceConfig {
    pub fn new(cluster_tol: f64, zero_tol: f64, cond_max: f64, rel_tol: f64) -> Result<Self, NumError> {
        let tol = Self {
            cluster_tol,
            zero_tol,
            cond_max,
            rel_tol,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<(), NumError> {
        let named = [
            ("cluster_tol", self.cluster_tol),
            ("zero_tol", self.zero_tol),
            ("cond_max", self.cond_max),
            ("rel_tol", self.rel_tol),
        ];
        for (name, value) in named {
            if !(value.is_finite() && value > 0.0) {
                return Err(NumError::InvalidTolerance(format!("{name} must be finite and > 0, got {value}")));
            }
        }
        if self.cluster_tol < self.zero_tol {
            return Err(NumError::InvalidTolerance(format!(
                "cluster_tol ({}) must be >= zero_tol ({})",
                self.cluster_tol, self.zero_tol
            )));
        }
        Ok(())
    }

    /// Copy of `self` with clustering and zero thresholds shrunk so that nodes
    /// separated by `min_separation` stay distinct clusters.
    pub fn resolving(&self, min_separation: f64) -> Self {
        let mut tol = *self;
        if min_separation > 0.0 && min_separation.is_finite() {
            let cap = (min_separation / 10.0).max(f64::MIN_POSITIVE);
            if tol.cluster_tol > cap {
                tol.cluster_tol = cap;
            }
            if tol.zero_tol > tol.cluster_tol {
                tol.zero_tol = tol.cluster_tol;
            }
        }
        tol
    }
}

/// Spectral norm (largest singular value).
pub fn op_norm(a: &MatrixC) -> f64 {
    let m = a.as_dmatrix();
    if a.dim() == 1 {
        return m[(0, 0)].norm();
    }
    if m.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return 0.0;
    }
    match nalgebra::SVD::try_new(m.clone(), false, false, f64::EPSILON, 10_000) {
        Some(svd) => svd.singular_values.max(),
        None => power_norm(m),
    }
}

fn power_norm(m: &DMatrix<Complex64>) -> f64 {
    let gram = m.adjoint() * m;
    let mut v = nalgebra::DVector::from_element(m.ncols(), Complex64::new(1.0, 0.0));
    let mut lambda = 0.0;
    for _ in 0..500 {
        let w = &gram * &v;
        let n = w.norm();
        if n == 0.0 {
            return 0.0;
        }
        v = w / Complex64::new(n, 0.0);
        if (n - lambda).abs() <= 1e-15 * n {
            lambda = n;
            break;
        }
        lambda = n;
    }
    lambda.sqrt()
}

/// Singular values in decreasing order.
pub fn singular_values(a: &MatrixC) -> Vec<f64> {
    let m = a.as_dmatrix().clone();
    let mut sv: Vec<f64> = match nalgebra::SVD::try_new(m, false, false, f64::EPSILON, 10_000) {
        Some(svd) => svd.singular_values.iter().copied().collect(),
        None => vec![op_norm(a); a.dim()],
    };
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Numerical rank: number of singular values strictly above `threshold`.
pub fn rank(a: &MatrixC, threshold: f64) -> usize {
    singular_values(a).into_iter().filter(|s| *s > threshold).count()
}

/// Horner evaluation of `coeffs[0] + coeffs[1] A + ... ` at a matrix.
///
/// An empty coefficient list is treated as the zero polynomial.
pub fn mat_poly_eval(coeffs: &[Complex64], a: &MatrixC) -> MatrixC {
    let k = a.dim();
    let m = a.as_dmatrix();
    let mut acc = DMatrix::<Complex64>::zeros(k, k);
    for c in coeffs.iter().rev() {
        acc = &acc * m;
        for i in 0..k {
            acc[(i, i)] += *c;
        }
    }
    MatrixC::from_dmatrix_unchecked(acc)
}

/// Smallest `p <= k` with `(A - lambda I)^p` negligible, or `None`.
///
/// "Negligible" means `||(A - lambda I)^p|| <= zero_tol * max(1, ||A - lambda I||)^p`.
pub fn nilpotency_order(a: &MatrixC, lambda: Complex64, tol: &ToleranceConfig) -> Option<usize> {
    let k = a.dim();
    let shifted = a.shifted(-lambda);
    let base = op_norm(&shifted).max(1.0);
    let mut power = MatrixC::identity(k);
    let mut scale = 1.0;
    for p in 1..=k {
        power = power.matmul(&shifted);
        scale *= base;
        if op_norm(&power) <= tol.zero_tol * scale {
            return Some(p);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(k: usize, rows: &[f64]) -> MatrixC {
        MatrixC::from_real_rows(k, rows).unwrap()
    }

    #[test]
    fn norm_examples() {
        assert!((op_norm(&real(2, &[1.0, 0.0, 0.0, 2.0])) - 2.0).abs() < 1e-12);
        assert_eq!(op_norm(&MatrixC::zeros(3)), 0.0);
        assert!((op_norm(&real(2, &[0.0, 1.0, 1.0, 0.0])) - 1.0).abs() < 1e-12);
        let c = c64(3.0, -4.0);
        assert!((op_norm(&MatrixC::identity(4).scale(c)) - 5.0).abs() < 1e-12);
        assert_eq!(op_norm(&MatrixC::from_row_major(1, vec![c64(0.0, -2.5)]).unwrap()), 2.5);
    }

    #[test]
    fn poly_eval_examples() {
        let a = real(2, &[0.0, 1.0, 1.0, 0.0]);
        let id = mat_poly_eval(&[c64(0.0, 0.0), c64(1.0, 0.0)], &a);
        assert_eq!(id, a);
        let five = mat_poly_eval(&[c64(5.0, 0.0)], &a);
        assert_eq!(five, MatrixC::identity(2).scale(c64(5.0, 0.0)));
        let two = mat_poly_eval(&[c64(1.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)], &a);
        assert_eq!(two, MatrixC::identity(2).scale(c64(2.0, 0.0)));
    }

    #[test]
    fn nilpotency_examples() {
        let tol = ToleranceConfig::default();
        let j3 = real(3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(nilpotency_order(&j3, c64(0.0, 0.0), &tol), Some(3));
        let lam = c64(2.0, 1.0);
        let d = MatrixC::diagonal(&[lam, lam]);
        assert_eq!(nilpotency_order(&d, lam, &tol), Some(1));
        let d12 = real(2, &[1.0, 0.0, 0.0, 2.0]);
        assert_eq!(nilpotency_order(&d12, c64(1.0, 0.0), &tol), None);
    }

    #[test]
    fn tolerance_validation() {
        assert!(ToleranceConfig::default().validate().is_ok());
        assert!(ToleranceConfig::new(1e-12, 1e-10, 1e8, 1e-9).is_err());
        assert!(ToleranceConfig::new(1e-8, 0.0, 1e8, 1e-9).is_err());
        let r = ToleranceConfig::default().resolving(1e-12);
        assert!(r.cluster_tol <= 1e-13 && r.zero_tol <= r.cluster_tol);
    }

    #[test]
    fn rank_of_jordan_powers() {
        let j = real(3, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(rank(&j, 1e-10), 1);
        assert_eq!(rank(&j.matmul(&j), 1e-10), 0);
    }
}
