use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::NumError;

/// Square complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct MatrixC(DMatrix<Complex64>);

impl MatrixC {
    /// Builds a `k x k` matrix from row-major entries.
    pub fn from_row_major(k: usize, entries: Vec<Complex64>) -> Result<Self, NumError> {
        if k == 0 {
            return Err(NumError::EmptyMatrix);
        }
        if entries.len() != k * k {
            return Err(NumError::NotSquare {
                dim: k,
                expected: k * k,
                got: entries.len(),
            });
        }
        for (idx, z) in entries.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(NumError::NonFinite { row: idx / k, col: idx % k });
            }
        }
        Ok(Self(DMatrix::from_row_slice(k, k, &entries)))
    }

    pub fn from_real_rows(k: usize, entries: &[f64]) -> Result<Self, NumError> {
        Self::from_row_major(k, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self, NumError> {
        if m.nrows() == 0 {
            return Err(NumError::EmptyMatrix);
        }
        if m.nrows() != m.ncols() {
            return Err(NumError::NotSquare {
                dim: m.nrows(),
                expected: m.nrows() * m.nrows(),
                got: m.nrows() * m.ncols(),
            });
        }
        let k = m.nrows();
        for i in 0..k {
            for j in 0..k {
                let z = m[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(NumError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self(m))
    }

    /// Wraps a matrix produced by arithmetic on already validated inputs.
    pub(crate) fn from_dmatrix_unchecked(m: DMatrix<Complex64>) -> Self {
        debug_assert!(m.nrows() == m.ncols() && m.nrows() > 0);
        Self(m)
    }

    pub fn zeros(k: usize) -> Self {
        Self(DMatrix::zeros(k, k))
    }

    pub fn identity(k: usize) -> Self {
        Self(DMatrix::identity(k, k))
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let k = values.len();
        let mut m = DMatrix::zeros(k, k);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.0[(row, col)] = value;
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn matmul(&self, other: &MatrixC) -> MatrixC {
        Self(&self.0 * &other.0)
    }

    pub fn scale(&self, c: Complex64) -> MatrixC {
        Self(&self.0 * c)
    }

    /// `A + c I`.
    pub fn shifted(&self, c: Complex64) -> MatrixC {
        let mut m = self.0.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += c;
        }
        Self(m)
    }

    pub fn adjoint(&self) -> MatrixC {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// LU-based inverse; `None` when the matrix is numerically singular.
    pub fn inverse(&self) -> Option<MatrixC> {
        let inv = self.0.clone().try_inverse()?;
        inv.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(Self(inv))
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.0.norm()
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let k = self.dim();
        let mut out = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn is_upper_triangular(&self) -> bool {
        let k = self.dim();
        (0..k).all(|i| (0..i).all(|j| self.0[(i, j)] == Complex64::new(0.0, 0.0)))
    }

    pub fn is_lower_triangular(&self) -> bool {
        let k = self.dim();
        (0..k).all(|i| (i + 1..k).all(|j| self.0[(i, j)] == Complex64::new(0.0, 0.0)))
    }
}

impl Index<(usize, usize)> for MatrixC {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl Add for &MatrixC {
    type Output = MatrixC;

    fn add(self, rhs: &MatrixC) -> MatrixC {
        MatrixC(&self.0 + &rhs.0)
    }
}

impl Sub for &MatrixC {
    type Output = MatrixC;

    fn sub(self, rhs: &MatrixC) -> MatrixC {
        MatrixC(&self.0 - &rhs.0)
    }
}

impl Mul for &MatrixC {
    type Output = MatrixC;

    fn mul(self, rhs: &MatrixC) -> MatrixC {
        self.matmul(rhs)
    }
}

impl fmt::Debug for MatrixC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.dim();
        write!(f, "MatrixC[{k}x{k}](")?;
        for i in 0..k {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..k {
                if j > 0 {
                    write!(f, ", ")?;
                }
                let z = self.0[(i, j)];
                write!(f, "{}{:+}i", z.re, z.im)?;
            }
        }
        write!(f, ")")
    }
}
