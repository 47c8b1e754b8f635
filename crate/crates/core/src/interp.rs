//! Newton and Hermite interpolating polynomials.

use num_complex::Complex64;

use crate::divdiff::{DDTable, DivDiffError};
use crate::numkit::{mat_poly_eval, MatrixC};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Monomial expansion is only trusted up to this degree.
pub const MAX_DEGREE: usize = 31;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InterpError {
    #[error("EmptyData: interpolation data must contain at least one node")]
    EmptyData,
    #[error("DuplicateNode: node {0} appears twice")]
    DuplicateNode(Complex64),
    #[error("EmptyValues: node {0} has no prescribed values")]
    EmptyValues(Complex64),
    #[error("DegreeCap: {conditions} conditions exceed the degree cap {MAX_DEGREE}")]
    DegreeCap { conditions: usize },
    #[error(transparent)]
    DivDiff(#[from] DivDiffError),
}

/// Polynomial in the monomial basis, constant term first.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialC {
    coeffs: Vec<Complex64>,
}

impl PolynomialC {
    /// Trailing exact zeros are dropped; the zero polynomial keeps one coefficient.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == ZERO {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [ZERO]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    pub fn eval_matrix(&self, x: &MatrixC) -> MatrixC {
        mat_poly_eval(&self.coeffs, x)
    }

    pub fn derivative(&self) -> PolynomialC {
        PolynomialC::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * j as f64)
                .collect(),
        )
    }
}

/// `V(z) = c_0 + c_1 (z - x_0) + ... + c_{n-1} (z - x_0)...(z - x_{n-2})`.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonForm {
    nodes: Vec<Complex64>,
    coeffs: Vec<Complex64>,
}

impl NewtonForm {
    /// `coeffs.len()` must equal `nodes.len()`; the last node is unused.
    pub fn new(nodes: Vec<Complex64>, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(nodes.len(), coeffs.len(), "one Newton coefficient per node");
        assert!(!coeffs.is_empty(), "Newton form needs a coefficient");
        Self { nodes, coeffs }
    }

    pub fn from_table(table: &DDTable) -> Self {
        Self {
            nodes: table.nodes().to_vec(),
            coeffs: table.newton_coefficients(),
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    /// Nested evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let n = self.coeffs.len();
        let mut acc = self.coeffs[n - 1];
        for q in (0..n - 1).rev() {
            acc = acc * (z - self.nodes[q]) + self.coeffs[q];
        }
        acc
    }

    /// Nested evaluation on a matrix; no monomial expansion and no inversion.
    pub fn eval_matrix(&self, x: &MatrixC) -> MatrixC {
        let n = self.coeffs.len();
        let k = x.dim();
        let mut acc = MatrixC::identity(k).scale(self.coeffs[n - 1]);
        for q in (0..n - 1).rev() {
            acc = x.shifted(-self.nodes[q]).matmul(&acc).shifted(self.coeffs[q]);
        }
        acc
    }

    /// Per-term magnitudes `|c_q| * ||prod_{j<q} (X - x_j I)||`, used to
    /// gauge cancellation in the matrix sum.
    pub fn term_norms(&self, x: &MatrixC) -> Vec<f64> {
        let k = x.dim();
        let mut basis = MatrixC::identity(k);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (q, c) in self.coeffs.iter().enumerate() {
            if q > 0 {
                basis = basis.matmul(&x.shifted(-self.nodes[q - 1]));
            }
            out.push(c.norm() * crate::numkit::op_norm(&basis));
        }
        out
    }

    /// Expansion into monomials by repeated synthetic multiplication.
    pub fn to_monomial(&self) -> PolynomialC {
        let n = self.coeffs.len();
        let mut acc = vec![self.coeffs[n - 1]];
        for q in (0..n - 1).rev() {
            // acc <- acc * (z - x_q) + c_q
            let mut next = vec![ZERO; acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * self.nodes[q];
            }
            next[0] += self.coeffs[q];
            acc = next;
        }
        PolynomialC::new(acc)
    }
}

/// Newton interpolant of a divided-difference table, in monomial form.
pub fn newton_poly(table: &DDTable) -> PolynomialC {
    NewtonForm::from_table(table).to_monomial()
}

/// Per node, the prescribed `[f(x), f'(x), ..., f^(p-1)(x)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteData {
    points: Vec<(Complex64, Vec<Complex64>)>,
}

impl HermiteData {
    pub fn new(points: Vec<(Complex64, Vec<Complex64>)>) -> Result<Self, InterpError> {
        if points.is_empty() {
            return Err(InterpError::EmptyData);
        }
        for (i, (z, values)) in points.iter().enumerate() {
            if values.is_empty() {
                return Err(InterpError::EmptyValues(*z));
            }
            if points[..i].iter().any(|(w, _)| w == z) {
                return Err(InterpError::DuplicateNode(*z));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(Complex64, Vec<Complex64>)] {
        &self.points
    }

    /// Total number of interpolation conditions.
    pub fn conditions(&self) -> usize {
        self.points.iter().map(|(_, v)| v.len()).sum()
    }

    /// Nodes repeated by multiplicity, the confluent Newton node list.
    pub fn confluent_nodes(&self) -> Vec<Complex64> {
        self.points
            .iter()
            .flat_map(|(z, v)| std::iter::repeat_n(*z, v.len()))
            .collect()
    }
}

/// Hermite interpolant via a confluent divided-difference table.
pub fn hermite_poly(data: &HermiteData) -> Result<PolynomialC, InterpError> {
    Ok(hermite_newton(data)?.to_monomial())
}

/// Hermite interpolant kept in Newton form.
pub fn hermite_newton(data: &HermiteData) -> Result<NewtonForm, InterpError> {
    let conditions = data.conditions();
    if conditions > MAX_DEGREE + 1 {
        return Err(InterpError::DegreeCap { conditions });
    }
    let nodes = data.confluent_nodes();
    let table = DDTable::build(
        &nodes,
        |z, m| {
            let (_, values) = data.points.iter().find(|(w, _)| *w == z).expect("node from data");
            let mut factorial = 1.0;
            Ok((0..=m)
                .map(|s| {
                    if s > 0 {
                        factorial *= s as f64;
                    }
                    values[s] / factorial
                })
                .collect())
        },
        0.0,
    )?;
    Ok(NewtonForm::from_table(&table))
}

/// Largest `|P^(s)(x_j) - prescribed_s|` over all conditions.
pub fn poly_derivative_check(p: &PolynomialC, data: &HermiteData) -> f64 {
    let mut worst: f64 = 0.0;
    for (z, values) in &data.points {
        let mut d = p.clone();
        for (s, v) in values.iter().enumerate() {
            if s > 0 {
                d = d.derivative();
            }
            worst = worst.max((d.eval(*z) - v).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divdiff::dd_table;
    use crate::funcspec::{DomainSpec, FunctionSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn r(x: f64) -> Complex64 {
        c(x, 0.0)
    }

    fn expr(text: &str) -> FunctionSpec {
        FunctionSpec::expression(text, DomainSpec::WholePlane).unwrap()
    }

    #[test]
    fn newton_examples() {
        let p = newton_poly(&dd_table(&expr("z^2"), &[r(0.0), r(1.0), r(2.0)]).unwrap());
        assert_eq!(p.coeffs(), &[r(0.0), r(0.0), r(1.0)]);
        let p = newton_poly(&dd_table(&expr("5"), &[r(1.0), r(9.0)]).unwrap());
        assert_eq!(p.coeffs(), &[r(5.0)]);
        let p = newton_poly(&dd_table(&expr("exp(z)"), &[r(0.0)]).unwrap());
        assert_eq!(p.coeffs(), &[r(1.0)]);
    }

    #[test]
    fn hermite_examples() {
        let exp_data = HermiteData::new(vec![(r(0.0), vec![r(1.0), r(1.0)])]).unwrap();
        assert_eq!(hermite_poly(&exp_data).unwrap().coeffs(), &[r(1.0), r(1.0)]);
        let a = c(2.0, -1.0);
        let constant = HermiteData::new(vec![(a, vec![c(0.5, 0.5)])]).unwrap();
        assert_eq!(hermite_poly(&constant).unwrap().coeffs(), &[c(0.5, 0.5)]);
        let id = HermiteData::new(vec![(r(0.0), vec![r(0.0)]), (r(1.0), vec![r(1.0)])]).unwrap();
        assert_eq!(hermite_poly(&id).unwrap().coeffs(), &[r(0.0), r(1.0)]);
    }

    #[test]
    fn derivative_check_examples() {
        let data = HermiteData::new(vec![(r(0.0), vec![r(5.0)])]).unwrap();
        assert_eq!(poly_derivative_check(&PolynomialC::new(vec![r(0.0), r(1.0)]), &data), 5.0);
        let data = HermiteData::new(vec![(r(0.0), vec![r(1.0), r(1.0)])]).unwrap();
        assert_eq!(poly_derivative_check(&PolynomialC::new(vec![r(1.0), r(1.0)]), &data), 0.0);
    }

    #[test]
    fn hermite_mixed_multiplicities() {
        // f = exp with values at 0 (order 3) and 1 (order 2)
        let e = std::f64::consts::E;
        let data = HermiteData::new(vec![
            (r(0.0), vec![r(1.0), r(1.0), r(1.0)]),
            (r(1.0), vec![r(e), r(e)]),
        ])
        .unwrap();
        let p = hermite_poly(&data).unwrap();
        assert!(p.degree() <= 4);
        assert!(poly_derivative_check(&p, &data) < 1e-12);
    }

    #[test]
    fn data_validation() {
        assert!(matches!(HermiteData::new(vec![]), Err(InterpError::EmptyData)));
        assert!(matches!(
            HermiteData::new(vec![(r(1.0), vec![r(1.0)]), (r(1.0), vec![r(2.0)])]),
            Err(InterpError::DuplicateNode(_))
        ));
        let big = HermiteData::new(vec![(r(0.0), vec![r(1.0); 33])]).unwrap();
        assert!(matches!(hermite_poly(&big), Err(InterpError::DegreeCap { conditions: 33 })));
    }

    #[test]
    fn newton_matrix_matches_monomial() {
        let t = dd_table(&expr("exp(z)"), &[r(0.0), r(0.5), c(0.2, 0.3)]).unwrap();
        let nf = NewtonForm::from_table(&t);
        let x = MatrixC::from_real_rows(2, &[0.1, 0.4, -0.3, 0.2]).unwrap();
        let a = nf.eval_matrix(&x);
        let b = nf.to_monomial().eval_matrix(&x);
        assert!((&a - &b).frobenius() < 1e-14);
        assert!((nf.eval(r(0.5)) - r(0.5f64.exp())).norm() < 1e-14);
    }
}
