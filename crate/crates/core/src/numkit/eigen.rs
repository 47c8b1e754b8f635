//! Complex eigensolver: Householder reduction to Hessenberg form followed by
//! single-shift QR iteration (Wilkinson shifts, exceptional shifts every ten
//! stalled sweeps). Eigenvectors come from back-substitution on the Schur form.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{op_norm, MatrixC, NumError, ToleranceConfig};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// All eigenvalues, repeated according to algebraic multiplicity.
    pub values: Vec<Complex64>,
    /// Unit-column eigenvector matrix `P`, present only when a full,
    /// sufficiently well-conditioned eigenbasis was found.
    pub vectors: Option<MatrixC>,
    /// `||P|| * ||P^-1||` for the candidate eigenbasis (infinite if singular).
    pub cond_estimate: f64,
    /// `||A P - P Diag(values)||` for the candidate eigenbasis.
    pub residual: f64,
}

/// Eigenvalues only.
pub fn eigenvalues(a: &MatrixC) -> Result<Vec<Complex64>, NumError> {
    let (t, _) = schur(a)?;
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Full eigendecomposition with eigenbasis acceptance test.
pub fn eig(a: &MatrixC, tol: &ToleranceConfig) -> Result<EigenDecomposition, NumError> {
    let k = a.dim();
    let (t, z) = schur(a)?;
    let values: Vec<Complex64> = (0..k).map(|i| t[(i, i)]).collect();

    let v = triangular_eigenvectors(&t, tol.cluster_tol);
    let mut p = z * v;
    for j in 0..k {
        let n = p.column(j).norm();
        if n > 0.0 {
            p.column_mut(j).unscale_mut(n);
        }
    }
    let p = MatrixC::from_dmatrix_unchecked(p);

    let cond_estimate = match p.inverse() {
        Some(pinv) => (op_norm(&p) * op_norm(&pinv)).max(1.0),
        None => f64::INFINITY,
    };
    let ap = a.matmul(&p);
    let pd = p.matmul(&MatrixC::diagonal(&values));
    let residual = op_norm(&(&ap - &pd));
    let scale = op_norm(a);

    let accepted = cond_estimate.is_finite()
        && cond_estimate <= tol.cond_max
        && residual <= tol.rel_tol * scale * cond_estimate;

    Ok(EigenDecomposition {
        values,
        vectors: accepted.then_some(p),
        cond_estimate,
        residual,
    })
}

/// Schur form `A = Z T Z*` with `T` upper triangular.
///
/// Triangular inputs are returned without iteration so that their diagonal
/// survives bit for bit.
fn schur(a: &MatrixC) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>), NumError> {
    let k = a.dim();
    if a.is_upper_triangular() {
        return Ok((a.as_dmatrix().clone(), DMatrix::identity(k, k)));
    }
    if a.is_lower_triangular() {
        // J A J is upper triangular for the index-reversal permutation J.
        let src = a.as_dmatrix();
        let t = DMatrix::from_fn(k, k, |i, j| src[(k - 1 - i, k - 1 - j)]);
        let j = DMatrix::from_fn(k, k, |r, c| if r + c == k - 1 { ONE } else { ZERO });
        return Ok((t, j));
    }
    let (mut h, mut z) = hessenberg(a.as_dmatrix());
    qr_iterate(&mut h, &mut z)?;
    Ok((h, z))
}

fn hessenberg(a: &DMatrix<Complex64>) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let n = a.nrows();
    let mut h = a.clone();
    let mut z = DMatrix::<Complex64>::identity(n, n);
    if n < 3 {
        return (h, z);
    }
    for col in 0..n - 2 {
        let mut v: Vec<Complex64> = (col + 1..n).map(|r| h[(r, col)]).collect();
        let xnorm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if v[0].norm() == 0.0 { ONE } else { v[0] / v[0].norm() };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vnorm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for c in v.iter_mut() {
            *c /= vnorm;
        }
        // H <- (I - 2 v v*) H
        for j in 0..n {
            let w: Complex64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * h[(col + 1 + i, j)]).sum();
            for (i, vi) in v.iter().enumerate() {
                h[(col + 1 + i, j)] -= 2.0 * vi * w;
            }
        }
        // H <- H (I - 2 v v*), Z <- Z (I - 2 v v*)
        for m in [&mut h, &mut z] {
            for i in 0..n {
                let w: Complex64 = v.iter().enumerate().map(|(j, vj)| m[(i, col + 1 + j)] * vj).sum();
                for (j, vj) in v.iter().enumerate() {
                    m[(i, col + 1 + j)] -= 2.0 * w * vj.conj();
                }
            }
        }
        for r in col + 2..n {
            h[(r, col)] = ZERO;
        }
    }
    (h, z)
}

/// Givens pair `(c, s)` with `[[c, s], [-conj(s), c]] * [a; b] = [r; 0]`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let mu1 = mean + disc;
    let mu2 = mean - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

fn qr_iterate(h: &mut DMatrix<Complex64>, z: &mut DMatrix<Complex64>) -> Result<(), NumError> {
    let n = h.nrows();
    let hnorm = h.norm().max(f64::MIN_POSITIVE);
    let budget = MAX_SWEEPS_PER_EIGENVALUE * n;
    let mut hi = n - 1;
    let mut stalled = 0usize;
    let mut total = 0usize;

    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if s == 0.0 {
                s = hnorm;
            }
            if h[(l, l - 1)].norm() <= f64::EPSILON * s {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            stalled = 0;
            continue;
        }

        stalled += 1;
        total += 1;
        if total > budget {
            return Err(NumError::NoConvergence { iterations: total });
        }

        let mu = if stalled.is_multiple_of(10) {
            let sub = h[(hi, hi - 1)].norm() + if hi >= 2 { h[(hi - 1, hi - 2)].norm() } else { 0.0 };
            h[(hi, hi)] + Complex64::new(0.75 * sub, 0.25 * sub)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        for i in l..=hi {
            h[(i, i)] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = c * a + s * b;
                h[(k + 1, j)] = -s.conj() * a + c * b;
            }
            h[(k + 1, k)] = ZERO;
            rotations.push((k, c, s));
        }
        for &(k, c, s) in &rotations {
            for i in 0..=k + 1 {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = a * c + b * s.conj();
                h[(i, k + 1)] = -a * s + b * c;
            }
            for i in 0..n {
                let a = z[(i, k)];
                let b = z[(i, k + 1)];
                z[(i, k)] = a * c + b * s.conj();
                z[(i, k + 1)] = -a * s + b * c;
            }
        }
        for i in l..=hi {
            h[(i, i)] += mu;
        }
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok(())
}

/// Eigenvectors of an upper triangular matrix, one per column.
///
/// Diagonal entries within `cluster_tol` of each other are treated as one
/// eigenvalue: the coupling between them is dropped rather than divided by a
/// near-zero gap. For a defective block this produces a vector with a large
/// residual, which the caller's acceptance test rejects.
fn triangular_eigenvectors(t: &DMatrix<Complex64>, cluster_tol: f64) -> DMatrix<Complex64> {
    let n = t.nrows();
    let smin = (f64::EPSILON * t.norm()).max(f64::MIN_POSITIVE);
    let mut v = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        let lambda = t[(i, i)];
        v[(i, i)] = ONE;
        for j in (0..i).rev() {
            if (t[(j, j)] - lambda).norm() <= cluster_tol {
                v[(j, i)] = ZERO;
                continue;
            }
            let s: Complex64 = (j + 1..=i).map(|m| t[(j, m)] * v[(m, i)]).sum();
            let mut d = t[(j, j)] - lambda;
            if d.norm() < smin {
                d = Complex64::new(smin, 0.0);
            }
            v[(j, i)] = -s / d;
        }
    }
    v
}
