//! Divided-difference tables (plain and confluent) and the bidiagonal
//! matrices whose corner entry reproduces a divided difference.

use num_complex::Complex64;

use crate::funcspec::{FuncError, FunctionSpec};
use crate::numkit::{MatrixC, ToleranceConfig};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DivDiffError {
    #[error("EmptyNodes: node list must be nonempty")]
    EmptyNodes,
    #[error("DegenerateNodes: nodes {i} and {j} coincide")]
    DegenerateNodes { i: usize, j: usize },
    #[error("TooFewNodes: need at least {needed} nodes, got {got}")]
    TooFewNodes { needed: usize, got: usize },
    #[error("InvalidEpsilon: epsilon must be finite and > 0, got {0}")]
    InvalidEpsilon(f64),
    #[error(transparent)]
    Func(#[from] FuncError),
}

fn same(a: Complex64, b: Complex64) -> bool {
    // bit-exact up to the sign of zero
    a == b
}

/// Triangular table `entry(i, j) = Delta(z_i, ..., z_{i+j}) f` over the
/// grouped node order.
#[derive(Debug, Clone)]
pub struct DDTable {
    nodes: Vec<Complex64>,
    permutation: Vec<usize>,
    entries: Vec<Vec<Complex64>>,
    min_separation: f64,
    warnings: Vec<String>,
}

impl DDTable {
    /// Builds the table from a Taylor oracle: `taylor(z, m)` must return
    /// `[f(z), f'(z), ..., f^(m)(z)/m!]`.
    ///
    /// Equal nodes are moved next to each other (stable in first appearance);
    /// distinct nodes keep their given order.
    pub fn build<F>(nodes: &[Complex64], mut taylor: F, zero_tol: f64) -> Result<Self, DivDiffError>
    where
        F: FnMut(Complex64, usize) -> Result<Vec<Complex64>, FuncError>,
    {
        let n = nodes.len();
        if n == 0 {
            return Err(DivDiffError::EmptyNodes);
        }

        let mut groups: Vec<(Complex64, Vec<usize>)> = Vec::new();
        for (i, z) in nodes.iter().enumerate() {
            match groups.iter_mut().find(|(g, _)| same(*g, *z)) {
                Some((_, members)) => members.push(i),
                None => groups.push((*z, vec![i])),
            }
        }
        let permutation: Vec<usize> = groups.iter().flat_map(|(_, m)| m.iter().copied()).collect();
        let sorted: Vec<Complex64> = permutation.iter().map(|&i| nodes[i]).collect();

        // Taylor data per group, expanded per position.
        let mut jets: Vec<std::rc::Rc<Vec<Complex64>>> = Vec::with_capacity(n);
        for (z, members) in &groups {
            let jet = std::rc::Rc::new(taylor(*z, members.len() - 1)?);
            for _ in members {
                jets.push(jet.clone());
            }
        }

        let mut entries: Vec<Vec<Complex64>> = (0..n).map(|i| vec![jets[i][0]]).collect();
        for j in 1..n {
            for i in 0..n - j {
                let (zi, zl) = (sorted[i], sorted[i + j]);
                let v = if same(zi, zl) {
                    jets[i][j]
                } else {
                    cdiv(entries[i + 1][j - 1] - entries[i][j - 1], zl - zi)
                };
                entries[i].push(v);
            }
        }

        let mut min_separation = f64::INFINITY;
        for (a, _) in &groups {
            for (b, _) in &groups {
                if !same(*a, *b) {
                    min_separation = min_separation.min((a - b).norm());
                }
            }
        }
        let mut warnings = Vec::new();
        if min_separation < zero_tol {
            warnings.push(format!(
                "near-duplicate nodes: minimum separation {min_separation:e} is below {zero_tol:e}"
            ));
        }

        Ok(Self {
            nodes: sorted,
            permutation,
            entries,
            min_separation,
            warnings,
        })
    }

    /// Nodes in table order.
    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    /// `permutation()[p]` is the caller's index of the node at table position `p`.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Delta(z_i, ..., z_{i+j}) f`.
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i][j]
    }

    /// Top row: coefficients of the Newton form on the table's node order.
    pub fn newton_coefficients(&self) -> Vec<Complex64> {
        self.entries[0].clone()
    }

    /// Divided difference over all nodes.
    pub fn value(&self) -> Complex64 {
        self.entries[0][self.len() - 1]
    }

    pub fn is_confluent(&self) -> bool {
        self.nodes.windows(2).any(|w| same(w[0], w[1]))
    }

    /// Smallest distance between distinct nodes (infinite if there is only one).
    pub fn min_separation(&self) -> f64 {
        self.min_separation
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

pub fn dd_table(f: &FunctionSpec, nodes: &[Complex64]) -> Result<DDTable, DivDiffError> {
    DDTable::build(nodes, |z, m| f.taylor(z, m), ToleranceConfig::default().zero_tol)
}

pub fn dd_value(f: &FunctionSpec, nodes: &[Complex64]) -> Result<Complex64, DivDiffError> {
    Ok(dd_table(f, nodes)?.value())
}

/// Complex quotient that divides componentwise when the denominator is
/// real, keeping real data correctly rounded.
pub(crate) fn cdiv(num: Complex64, den: Complex64) -> Complex64 {
    if den.im == 0.0 {
        Complex64::new(num.re / den.re + 0.0, num.im / den.re + 0.0)
    } else {
        num / den
    }
}

/// Lower bidiagonal matrix with `nodes` on the diagonal and `eps` below it.
pub fn opitz_matrix(nodes: &[Complex64], eps: f64) -> Result<MatrixC, DivDiffError> {
    let k = nodes.len();
    if k < 2 {
        return Err(DivDiffError::TooFewNodes { needed: 2, got: k });
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(DivDiffError::InvalidEpsilon(eps));
    }
    for i in 0..k {
        for j in i + 1..k {
            if same(nodes[i], nodes[j]) {
                return Err(DivDiffError::DegenerateNodes { i, j });
            }
        }
    }
    let mut m = MatrixC::diagonal(nodes);
    for j in 0..k - 1 {
        m.set(j + 1, j, Complex64::new(eps, 0.0));
    }
    if !m.is_finite() {
        return Err(FuncError::DomainError("non-finite node".into()).into());
    }
    Ok(m)
}

/// Bottom-left entry.
pub fn corner_of(m: &MatrixC) -> Complex64 {
    m.get(m.dim() - 1, 0)
}
