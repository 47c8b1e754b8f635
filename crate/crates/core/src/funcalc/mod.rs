//! The calculus `f[X]`: eigenbasis route for well-conditioned diagonalizable
//! matrices, Newton form on the distinct eigenvalues, and the confluent
//! (Hermite) extension to matrices whose multiple minimal-polynomial roots sit
//! at cluster points of the domain.

mod pairing;
mod spectrum;

use std::fmt;

use num_complex::Complex64;

pub use pairing::{bottleneck_assignment, pair_spectra, Pairing};
pub use spectrum::{analyze_spectrum, Cluster, SpectrumData};

use crate::divdiff::{DDTable, DivDiffError};
use crate::funcspec::{Differentiability, FuncError, FunctionSpec};
use crate::interp::{InterpError, NewtonForm, MAX_DEGREE};
use crate::numkit::{eig, op_norm, MatrixC, NumError, ToleranceConfig};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CalcError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error(transparent)]
    DivDiff(#[from] DivDiffError),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error("AmbiguousClustering: cluster representatives {a} and {b} are only {distance:e} apart")]
    AmbiguousClustering { a: Complex64, b: Complex64, distance: f64 },
    #[error("NotDiagonalizable: {0}")]
    NotDiagonalizable(String),
    #[error("SpectrumOutsideDomain: eigenvalue {eigenvalue} is {distance:e} away from the domain")]
    SpectrumOutsideDomain { eigenvalue: Complex64, distance: f64 },
    #[error("IllConditioned: eigenvector condition number {cond:e} exceeds {cond_max:e}")]
    IllConditioned { cond: f64, cond_max: f64 },
    #[error("DefectiveSpectrum: eigenvalue {eigenvalue} has minimal-polynomial exponent {exponent}")]
    DefectiveSpectrum { eigenvalue: Complex64, exponent: usize },
    #[error("InZk: single eigenvalue {eigenvalue} with a full {dim}x{dim} Jordan block needs {needed} derivative orders, {available} available")]
    InZk {
        eigenvalue: Complex64,
        dim: usize,
        needed: usize,
        available: usize,
    },
    #[error("NotDifferentiable: {0}")]
    NotDifferentiable(String),
    #[error("MultipleRootOutsideClusterSet: multiple eigenvalue {eigenvalue} maps to isolated domain point {key}")]
    MultipleRootOutsideClusterSet { eigenvalue: Complex64, key: Complex64 },
    #[error("NonFiniteResult: computed f[X] has non-finite entries")]
    NonFiniteResult,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalcPath {
    Diag,
    Newton,
    Hermite,
}

impl fmt::Display for CalcPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CalcPath::Diag => "diag",
            CalcPath::Newton => "newton",
            CalcPath::Hermite => "hermite",
        })
    }
}

/// Route selection for [`compute`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalcMode {
    Auto,
    Diag,
    Newton,
    Hermite,
}

#[derive(Debug, Clone)]
pub struct CalcResult {
    pub value: MatrixC,
    pub path: CalcPath,
    /// Eigenbasis condition number on the diag path; on the polynomial paths,
    /// the ratio of summed Newton term norms to the norm of the result.
    pub cond_used: f64,
    pub warnings: Vec<String>,
}

/// Interpolation node for each cluster: the representative itself if it lies
/// in the domain, otherwise its projection when within `cluster_tol`.
fn resolve_nodes(
    f: &FunctionSpec,
    spec: &SpectrumData,
    tol: &ToleranceConfig,
    warnings: &mut Vec<String>,
) -> Result<Vec<Complex64>, CalcError> {
    let domain = f.domain();
    let mut nodes: Vec<Complex64> = Vec::with_capacity(spec.clusters.len());
    for c in &spec.clusters {
        let node = if domain.contains(c.lambda) {
            c.lambda
        } else {
            let distance = domain.distance(c.lambda);
            let p = domain.project(c.lambda);
            if (p - c.lambda).norm() > tol.cluster_tol {
                return Err(CalcError::SpectrumOutsideDomain {
                    eigenvalue: c.lambda,
                    distance,
                });
            }
            warnings.push(format!("eigenvalue {} snapped to domain point {}", c.lambda, p));
            p
        };
        if let Some(prev) = nodes.iter().position(|n| *n == node) {
            return Err(CalcError::AmbiguousClustering {
                a: spec.clusters[prev].lambda,
                b: c.lambda,
                distance: (spec.clusters[prev].lambda - c.lambda).norm(),
            });
        }
        nodes.push(node);
    }
    Ok(nodes)
}

fn finish(value: MatrixC, path: CalcPath, cond_used: f64, warnings: Vec<String>) -> Result<CalcResult, CalcError> {
    if !value.is_finite() {
        return Err(CalcError::NonFiniteResult);
    }
    Ok(CalcResult {
        value,
        path,
        cond_used,
        warnings,
    })
}

/// `P Diag(f(lambda)) P^-1`.
pub fn calc_diag(f: &FunctionSpec, x: &MatrixC, tol: &ToleranceConfig) -> Result<CalcResult, CalcError> {
    let spec = analyze_spectrum(x, tol)?;
    if let Some(c) = spec.clusters.iter().find(|c| c.min_poly_exp > 1) {
        return Err(CalcError::NotDiagonalizable(format!(
            "eigenvalue {} has minimal-polynomial exponent {}",
            c.lambda, c.min_poly_exp
        )));
    }
    let mut warnings = spec.warnings.clone();
    let nodes = resolve_nodes(f, &spec, tol, &mut warnings)?;
    let e = eig(x, tol)?;
    let p = match e.vectors {
        Some(p) => p,
        None if e.cond_estimate > tol.cond_max => {
            return Err(CalcError::IllConditioned {
                cond: e.cond_estimate,
                cond_max: tol.cond_max,
            })
        }
        None => {
            return Err(CalcError::NotDiagonalizable(format!(
                "eigenbasis residual {:e} too large",
                e.residual
            )))
        }
    };
    let pinv = p.inverse().ok_or(CalcError::IllConditioned {
        cond: f64::INFINITY,
        cond_max: tol.cond_max,
    })?;
    let mut fvals = Vec::with_capacity(nodes.len());
    for node in &nodes {
        fvals.push(f.eval(*node)?);
    }
    // eig and analyze_spectrum share the eigenvalue routine, so values line up.
    let diag: Vec<Complex64> = spec.cluster_of.iter().map(|&c| fvals[c]).collect();
    let value = p.matmul(&MatrixC::diagonal(&diag)).matmul(&pinv);
    finish(value, CalcPath::Diag, e.cond_estimate, warnings)
}

/// Newton interpolant on the distinct eigenvalues, evaluated at `X` in nested form.
pub fn calc_newton(f: &FunctionSpec, x: &MatrixC, tol: &ToleranceConfig) -> Result<CalcResult, CalcError> {
    let spec = analyze_spectrum(x, tol)?;
    if let Some(c) = spec.clusters.iter().find(|c| c.min_poly_exp > 1) {
        return Err(CalcError::DefectiveSpectrum {
            eigenvalue: c.lambda,
            exponent: c.min_poly_exp,
        });
    }
    let mut warnings = spec.warnings.clone();
    let nodes = resolve_nodes(f, &spec, tol, &mut warnings)?;
    let table = DDTable::build(&nodes, |z, m| f.taylor(z, m), tol.zero_tol)?;
    polynomial_result(&table, x, CalcPath::Newton, warnings)
}

/// Extended calculus: Hermite interpolation on the minimal-polynomial roots
/// with multiplicities, evaluated at `X` in nested Newton form.
pub fn calc_extended(f: &FunctionSpec, x: &MatrixC, tol: &ToleranceConfig) -> Result<CalcResult, CalcError> {
    let spec = analyze_spectrum(x, tol)?;
    let mut warnings = spec.warnings.clone();
    let nodes = resolve_nodes(f, &spec, tol, &mut warnings)?;
    let domain = f.domain();

    for (c, node) in spec.clusters.iter().zip(&nodes) {
        if c.min_poly_exp > 1 && !domain.is_cluster_point(*node) {
            return Err(CalcError::MultipleRootOutsideClusterSet {
                eigenvalue: c.lambda,
                key: *node,
            });
        }
    }

    let needed = spec.clusters.iter().map(|c| c.min_poly_exp - 1).max().unwrap_or(0);
    if let Some(available) = f.max_derivative_order() {
        if needed > available {
            let k = spec.dim;
            let budgeted = f.differentiability() == Differentiability::HolomorphicExpr;
            if budgeted && spec.in_z_k && k == available + 2 {
                return Err(CalcError::InZk {
                    eigenvalue: spec.clusters[0].lambda,
                    dim: k,
                    needed,
                    available,
                });
            }
            return Err(CalcError::NotDifferentiable(format!(
                "minimal polynomial needs derivatives up to order {needed}; {} provides {available} ({:?})",
                f.describe(),
                f.differentiability()
            )));
        }
    }

    let degree = spec.min_poly_degree();
    if degree > MAX_DEGREE + 1 {
        return Err(InterpError::DegreeCap { conditions: degree }.into());
    }
    let confluent: Vec<Complex64> = spec
        .clusters
        .iter()
        .zip(&nodes)
        .flat_map(|(c, n)| std::iter::repeat_n(*n, c.min_poly_exp))
        .collect();
    let table = DDTable::build(&confluent, |z, m| f.taylor(z, m), tol.zero_tol)?;
    polynomial_result(&table, x, CalcPath::Hermite, warnings)
}

fn polynomial_result(
    table: &DDTable,
    x: &MatrixC,
    path: CalcPath,
    mut warnings: Vec<String>,
) -> Result<CalcResult, CalcError> {
    warnings.extend(table.warnings().iter().cloned());
    let newton = NewtonForm::from_table(table);
    let value = newton.eval_matrix(x);
    let terms: f64 = newton.term_norms(x).iter().sum();
    let norm = op_norm(&value);
    let cond_used = if terms == 0.0 {
        1.0
    } else if norm == 0.0 {
        f64::INFINITY
    } else {
        (terms / norm).max(1.0)
    };
    finish(value, path, cond_used, warnings)
}

/// Route dispatch: eigenbasis when diagonalizable and well conditioned,
/// Newton form when diagonalizable but the eigenbasis is ill conditioned,
/// Hermite extension otherwise.
pub fn calc_auto(f: &FunctionSpec, x: &MatrixC, tol: &ToleranceConfig) -> Result<CalcResult, CalcError> {
    let spec = analyze_spectrum(x, tol)?;
    if !spec.diagonalizable {
        let mut r = calc_extended(f, x, tol)?;
        r.warnings.push("route: hermite (multiple minimal-polynomial root)".into());
        return Ok(r);
    }
    let e = eig(x, tol)?;
    if e.vectors.is_some() {
        let mut r = calc_diag(f, x, tol)?;
        r.warnings.push("route: diag".into());
        return Ok(r);
    }
    let mut r = calc_newton(f, x, tol)?;
    r.warnings.push(format!(
        "route: newton (eigenbasis condition {:e} exceeds cond_max {:e})",
        e.cond_estimate, tol.cond_max
    ));
    Ok(r)
}

pub fn compute(f: &FunctionSpec, x: &MatrixC, mode: CalcMode, tol: &ToleranceConfig) -> Result<CalcResult, CalcError> {
    match mode {
        CalcMode::Auto => calc_auto(f, x, tol),
        CalcMode::Diag => calc_diag(f, x, tol),
        CalcMode::Newton => calc_newton(f, x, tol),
        CalcMode::Hermite => calc_extended(f, x, tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divdiff::{corner_of, opitz_matrix};
    use crate::funcspec::{tcdis_domain, DomainSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn r(x: f64) -> Complex64 {
        c(x, 0.0)
    }

    fn expr(text: &str) -> FunctionSpec {
        FunctionSpec::expression(text, DomainSpec::WholePlane).unwrap()
    }

    fn close(a: &MatrixC, b: &MatrixC, tol: f64) -> bool {
        (a - b).frobenius() <= tol
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn diag_examples() {
        let x = MatrixC::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let id = calc_diag(&expr("z"), &x, &tol()).unwrap();
        assert!(close(&id.value, &x, 1e-14));
        let e = calc_diag(&expr("exp(z)"), &x, &tol()).unwrap();
        let (ch, sh) = (1f64.cosh(), 1f64.sinh());
        let want = MatrixC::from_real_rows(2, &[ch, sh, sh, ch]).unwrap();
        assert!(close(&e.value, &want, 1e-14));
        assert_eq!(e.path, CalcPath::Diag);
        let lam = c(0.3, -1.2);
        let s = calc_diag(&expr("exp(z)"), &MatrixC::identity(3).scale(lam), &tol()).unwrap();
        assert!(close(&s.value, &MatrixC::identity(3).scale(lam.exp()), 1e-14));
    }

    #[test]
    fn newton_examples() {
        let x = MatrixC::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let sq = calc_newton(&expr("z^2"), &x, &tol()).unwrap();
        assert!(close(&sq.value, &MatrixC::identity(2), 1e-14));
        let k = calc_newton(&expr("2 - i"), &x, &tol()).unwrap();
        assert!(close(&k.value, &MatrixC::identity(2).scale(c(2.0, -1.0)), 0.0));
        let ln2 = 2f64.ln();
        let a = opitz_matrix(&[r(0.0), r(ln2)], 1.0).unwrap();
        let v = calc_newton(&expr("exp(z)"), &a, &tol()).unwrap().value;
        assert!((v.get(0, 0) - r(1.0)).norm() < 1e-15);
        assert!((v.get(1, 1) - r(2.0)).norm() < 1e-15);
        assert!((corner_of(&v) - r(1.0 / ln2)).norm() < 1e-15);
        assert_eq!(v.get(0, 1), r(0.0));
    }

    #[test]
    fn extended_examples() {
        let x = MatrixC::from_real_rows(3, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let e = calc_extended(&expr("exp(z)"), &x, &tol()).unwrap();
        assert_eq!(e.path, CalcPath::Hermite);
        assert!(close(&e.value, &(&MatrixC::identity(3) + &x), 1e-12));
        let j3 = MatrixC::from_real_rows(3, &[1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0]).unwrap();
        let id = calc_extended(&expr("z"), &j3, &tol()).unwrap();
        assert!(close(&id.value, &j3, 1e-14));
        let t = tcdis_domain(3).unwrap();
        let j = MatrixC::from_real_rows(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(calc_extended(&t, &j, &tol()), Err(CalcError::NotDifferentiable(_))));
    }

    #[test]
    fn extended_error_cases() {
        let j3 = MatrixC::from_real_rows(3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        let budget1 = expr("exp(z)").with_derivative_budget(1);
        assert!(matches!(calc_extended(&budget1, &j3, &tol()), Err(CalcError::InZk { dim: 3, .. })));
        // J_2(0) + (0) only needs one derivative order
        let x = MatrixC::from_real_rows(3, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(calc_extended(&budget1, &x, &tol()).is_ok());
        // table with a multiple root at an isolated key
        let t = tcdis_domain(3).unwrap();
        let half = MatrixC::from_real_rows(2, &[0.5, 1.0, 0.0, 0.5]).unwrap();
        assert!(matches!(
            calc_extended(&t, &half, &tol()),
            Err(CalcError::MultipleRootOutsideClusterSet { .. })
        ));
        let disk = FunctionSpec::expression("z", DomainSpec::open_disk(r(0.0), 1.0).unwrap()).unwrap();
        assert!(matches!(
            calc_extended(&disk, &MatrixC::identity(2).scale(r(3.0)), &tol()),
            Err(CalcError::SpectrumOutsideDomain { .. })
        ));
    }

    #[test]
    fn table_calculus_on_diagonalizable() {
        let t = tcdis_domain(4).unwrap();
        let (a, b) = crate::funcspec::tcdis_nodes(3);
        let x = opitz_matrix(&[r(b), r(a)], 1.0).unwrap();
        let v = calc_newton(&t, &x, &tol().resolving(b - a)).unwrap().value;
        assert!((corner_of(&v) - r(3.375)).norm() < 1e-12);
        // zero matrix: only f(0) is needed
        let z = calc_extended(&t, &MatrixC::zeros(2), &tol()).unwrap();
        assert!(close(&z.value, &MatrixC::zeros(2), 0.0));
    }

    #[test]
    fn snapping_is_reported() {
        let t = tcdis_domain(3).unwrap();
        let x = MatrixC::diagonal(&[r(0.5 + 1e-12), r(0.0)]);
        let res = calc_newton(&t, &x, &tol()).unwrap();
        assert!(res.warnings.iter().any(|w| w.contains("snapped")));
    }

    #[test]
    fn auto_dispatch() {
        let d = MatrixC::diagonal(&[r(1.0), r(2.0)]);
        assert_eq!(calc_auto(&expr("exp(z)"), &d, &tol()).unwrap().path, CalcPath::Diag);
        let near = opitz_matrix(&[r(0.0), r(1e-9)], 1.0).unwrap();
        let res = calc_auto(&expr("exp(z)"), &near, &tol().resolving(1e-9)).unwrap();
        assert_eq!(res.path, CalcPath::Newton);
        assert!(res.warnings.iter().any(|w| w.contains("condition")));
        let j3 = MatrixC::from_real_rows(3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(calc_auto(&expr("exp(z)"), &j3, &tol()).unwrap().path, CalcPath::Hermite);
    }

    #[test]
    fn forced_paths_reject() {
        let j2 = MatrixC::from_real_rows(2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(calc_newton(&expr("z"), &j2, &tol()), Err(CalcError::DefectiveSpectrum { .. })));
        assert!(matches!(calc_diag(&expr("z"), &j2, &tol()), Err(CalcError::NotDiagonalizable(_))));
        let near = opitz_matrix(&[r(0.0), r(1e-9)], 1.0).unwrap();
        assert!(matches!(
            calc_diag(&expr("z"), &near, &tol().resolving(1e-9)),
            Err(CalcError::IllConditioned { .. })
        ));
    }
}
