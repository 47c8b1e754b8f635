//! Parameter sweeps around the divided-difference constructions: the Opitz
//! corner family, the two-point blow-up on the `tcdis` table, the order-3
//! corner growth, continuity along paths and sequences, and norm growth with
//! dimension.
//!
//! Matrices built here have distinct eigenvalues but deliberately poor
//! eigenbases, so `f[X]` is always taken on the Newton path with clustering
//! tolerances shrunk to the node separation.

mod report;

use num_complex::Complex64;

pub use report::{fmt_num, Cell, ColumnKind, ProbeReport};

use crate::divdiff::{corner_of, dd_value, opitz_matrix, DivDiffError};
use crate::funcalc::{calc_auto, calc_newton, CalcError};
use crate::funcspec::{tcdis_domain, tcdis_nodes, FuncError, FunctionSpec};
use crate::numkit::{op_norm, MatrixC, ToleranceConfig};
use crate::regclass::{continuous_tuples, finite_tuples, RegError, SamplerConfig};

type C = Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProbeError {
    #[error("InvalidInput: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Reg(#[from] RegError),
    #[error(transparent)]
    DivDiff(#[from] DivDiffError),
    #[error(transparent)]
    Func(#[from] FuncError),
}

/// Default `eps` sweep for [`probe_opitz`].
pub const DEFAULT_EPS: [f64; 4] = [0.01, 0.1, 1.0, 10.0];

/// Default step sweep for [`probe_continuity`]: `1e-1` down to `1e-8`.
pub fn default_h_list() -> Vec<f64> {
    (1..=8).map(|m| 10f64.powi(-m)).collect()
}

fn min_separation(nodes: &[C]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            m = m.min((nodes[i] - nodes[j]).norm());
        }
    }
    m
}

fn newton_value(f: &FunctionSpec, x: &MatrixC, nodes: &[C], tol: &ToleranceConfig) -> Result<MatrixC, CalcError> {
    Ok(calc_newton(f, x, &tol.resolving(min_separation(nodes)))?.value)
}

/// Corner of `f[A]` for the bidiagonal `A` with `nodes` on the diagonal and
/// `eps` below it, against `Delta(nodes) f * eps^(k-1)`.
pub fn probe_opitz(f: &FunctionSpec, nodes: &[C], eps_list: &[f64], tol: &ToleranceConfig) -> Result<ProbeReport, ProbeError> {
    let k = nodes.len();
    let delta = dd_value(f, nodes)?;
    let mut r = ProbeReport::new(
        "opitz",
        &[
            ("eps", ColumnKind::Real),
            ("corner", ColumnKind::Complex),
            ("predicted", ColumnKind::Complex),
            ("abs_err", ColumnKind::Real),
            ("rel_err", ColumnKind::Real),
        ],
    );
    r.param("k", k);
    r.param("delta", format!("{}", delta));
    for &eps in eps_list {
        let a = opitz_matrix(nodes, eps)?;
        let corner = corner_of(&newton_value(f, &a, nodes, tol)?);
        let predicted = delta * eps.powi(k as i32 - 1);
        let abs_err = (corner - predicted).norm();
        let rel_err = if predicted.norm() > 0.0 { abs_err / predicted.norm() } else { abs_err };
        r.push_row(vec![
            Cell::Real(eps),
            Cell::Complex(corner),
            Cell::Complex(predicted),
            Cell::Real(abs_err),
            Cell::Real(rel_err),
        ]);
    }
    Ok(r)
}

/// [`probe_tcdis_with`] on `tcdis_domain(n_max)`.
pub fn probe_tcdis(n_max: usize, eps: f64, tol: &ToleranceConfig) -> Result<ProbeReport, ProbeError> {
    let f = tcdis_domain(n_max)?;
    probe_tcdis_with(&f, n_max, eps, tol)
}

/// For `n = 2..=n_max`, the 2x2 bidiagonal `A_n` on `(1/n + 3^-n, 1/n)`.
///
/// Columns: `corner` of `f[A_n]`, `predicted = 1.5^n eps`, `ratio` of
/// consecutive corners, `gap = ||A_n - (1/n) I - eps E21|| = 3^-n` (the
/// diagonal spread), and `dist = ||A_n - eps E21||`, the distance to the
/// limit `eps E21` in which both eigenvalues have merged at 0.
pub fn probe_tcdis_with(f: &FunctionSpec, n_max: usize, eps: f64, tol: &ToleranceConfig) -> Result<ProbeReport, ProbeError> {
    if !(2..=crate::funcspec::TCDIS_MAX_N).contains(&n_max) {
        return Err(FuncError::RangeError(format!("N must lie in 2..={}, got {n_max}", crate::funcspec::TCDIS_MAX_N)).into());
    }
    let mut r = ProbeReport::new(
        "tcdis",
        &[
            ("n", ColumnKind::Real),
            ("corner", ColumnKind::Real),
            ("predicted", ColumnKind::Real),
            ("ratio", ColumnKind::Real),
            ("gap", ColumnKind::Real),
            ("dist", ColumnKind::Real),
        ],
    );
    r.param("N", n_max);
    r.param("eps", fmt_num(eps));
    let mut limit = MatrixC::zeros(2);
    limit.set(1, 0, C::new(eps, 0.0));
    let mut prev: Option<f64> = None;
    let mut corners = Vec::new();
    let mut dists = Vec::new();
    for n in 2..=n_max {
        let (a, b) = tcdis_nodes(n);
        let nodes = [C::new(b, 0.0), C::new(a, 0.0)];
        let m = opitz_matrix(&nodes, eps)?;
        let corner = corner_of(&newton_value(f, &m, &nodes, tol)?).re;
        let gap = op_norm(&(&m.shifted(C::new(-a, 0.0)) - &limit));
        let dist = op_norm(&(&m - &limit));
        let ratio = prev.map_or(f64::NAN, |p| corner / p);
        prev = Some(corner);
        corners.push(corner);
        dists.push(dist);
        r.push_row(vec![
            Cell::Real(n as f64),
            Cell::Real(corner),
            Cell::Real(1.5f64.powi(n as i32) * eps),
            Cell::Real(ratio),
            Cell::Real(gap),
            Cell::Real(dist),
        ]);
    }
    let (c0, c1) = (corners[0].abs(), corners[corners.len() - 1].abs());
    let converging = dists[dists.len() - 1] < dists[0];
    r.verdict = Some(if c1 >= 2.0 * c0 && c1 > 0.0 && converging {
        "discontinuity witnessed".into()
    } else {
        "no growth".into()
    });
    Ok(r)
}

/// `k x k` matrix with diagonal `(x, y, z, z, ...)` and `w` at (2,1), (3,2).
pub fn uniform3_matrix(x: C, y: C, z: C, w: f64, k: usize) -> MatrixC {
    let mut diag = vec![x, y];
    diag.extend(std::iter::repeat_n(z, k - 2));
    let mut m = MatrixC::diagonal(&diag);
    m.set(1, 0, C::new(w, 0.0));
    m.set(2, 1, C::new(w, 0.0));
    m
}

/// Entry (3,1) of `f[A(w)]` equals `Delta(x,y,z) f * w^2`; per `w` the shift
/// `|b(w + delta) - b(w)|` against `|Delta| |2 w delta + delta^2|`.
pub fn probe_uniform3(
    f: &FunctionSpec,
    (x, y, z): (C, C, C),
    w_list: &[f64],
    delta: f64,
    k: usize,
    tol: &ToleranceConfig,
) -> Result<ProbeReport, ProbeError> {
    if k < 3 {
        return Err(ProbeError::InvalidInput(format!("dimension must be at least 3, got {k}")));
    }
    let nodes = [x, y, z];
    if min_separation(&nodes) == 0.0 {
        return Err(ProbeError::InvalidInput("x, y, z must be distinct".into()));
    }
    let dd = dd_value(f, &nodes)?;
    let mut r = ProbeReport::new(
        "uniform3",
        &[
            ("w", ColumnKind::Real),
            ("b", ColumnKind::Complex),
            ("b_shift", ColumnKind::Complex),
            ("diff", ColumnKind::Real),
            ("predicted", ColumnKind::Real),
        ],
    );
    r.param("k", k);
    r.param("delta", fmt_num(delta));
    r.param("dd", format!("{dd}"));
    let corner = |w: f64| -> Result<C, ProbeError> {
        Ok(newton_value(f, &uniform3_matrix(x, y, z, w, k), &nodes, tol)?.get(2, 0))
    };
    let mut diffs = Vec::new();
    for &w in w_list {
        let (b0, b1) = (corner(w)?, corner(w + delta)?);
        let diff = (b1 - b0).norm();
        diffs.push(diff);
        r.push_row(vec![
            Cell::Real(w),
            Cell::Complex(b0),
            Cell::Complex(b1),
            Cell::Real(diff),
            Cell::Real(dd.norm() * (2.0 * w * delta + delta * delta).abs()),
        ]);
    }
    let grows = diffs.len() >= 2 && diffs[diffs.len() - 1] >= 10.0 * diffs[0];
    r.verdict = Some(if dd.norm() <= 1e-9 {
        "affine-consistent".into()
    } else if grows {
        "uniform continuity violated".into()
    } else {
        "bounded differences".into()
    });
    Ok(r)
}

fn continuity_verdict(diffs: &[f64], scale: f64, tol: &ToleranceConfig) -> String {
    match (diffs.first(), diffs.last()) {
        (Some(&first), Some(&last)) if last <= (tol.rel_tol * scale).max(1e-3 * first) => "convergent".into(),
        (Some(_), Some(_)) => "non-convergent".into(),
        _ => "no data".into(),
    }
}

/// `||f[X0 + h D] - f[X0]||` per step `h`. Steps where the perturbed matrix
/// cannot be handled (spectrum leaving the domain, say) are skipped with a
/// warning.
pub fn probe_continuity(
    f: &FunctionSpec,
    x0: &MatrixC,
    direction: &MatrixC,
    h_list: &[f64],
    tol: &ToleranceConfig,
) -> Result<ProbeReport, ProbeError> {
    if x0.dim() != direction.dim() {
        return Err(ProbeError::InvalidInput(format!(
            "X0 is {}x{} but the direction is {}x{}",
            x0.dim(),
            x0.dim(),
            direction.dim(),
            direction.dim()
        )));
    }
    let base = calc_auto(f, x0, tol)?.value;
    let mut r = ProbeReport::new(
        "continuity",
        &[("h", ColumnKind::Real), ("diff", ColumnKind::Real), ("ratio", ColumnKind::Real)],
    );
    r.param("k", x0.dim());
    let mut diffs = Vec::new();
    for &h in h_list {
        let x = x0 + &direction.scale(C::new(h, 0.0));
        match calc_auto(f, &x, tol) {
            Ok(v) => {
                let d = op_norm(&(&v.value - &base));
                diffs.push(d);
                r.push_row(vec![Cell::Real(h), Cell::Real(d), Cell::Real(d / h)]);
            }
            Err(e) => r.warnings.push(format!("h = {}: skipped: {e}", fmt_num(h))),
        }
    }
    let scale = op_norm(&base).max(1.0);
    r.verdict = Some(continuity_verdict(&diffs, scale, tol));
    Ok(r)
}

/// `||f[X_n] - f[X0]||` along a given sequence, with `||X_n - X0||`.
pub fn probe_continuity_sequence(
    f: &FunctionSpec,
    x0: &MatrixC,
    seq: &[MatrixC],
    tol: &ToleranceConfig,
) -> Result<ProbeReport, ProbeError> {
    let base = calc_auto(f, x0, tol)?.value;
    let mut r = ProbeReport::new(
        "continuity_sequence",
        &[("index", ColumnKind::Real), ("dist", ColumnKind::Real), ("diff", ColumnKind::Real)],
    );
    r.param("k", x0.dim());
    let mut diffs = Vec::new();
    for (i, x) in seq.iter().enumerate() {
        if x.dim() != x0.dim() {
            return Err(ProbeError::InvalidInput(format!("sequence member {i} has the wrong dimension")));
        }
        let nodes: Vec<C> = (0..x.dim()).map(|j| x.get(j, j)).collect();
        let sep = min_separation(&nodes);
        let local = if sep > 0.0 { tol.resolving(sep) } else { *tol };
        match calc_newton(f, x, &local).or_else(|_| calc_auto(f, x, &local)) {
            Ok(v) => {
                let d = op_norm(&(&v.value - &base));
                diffs.push(d);
                r.push_row(vec![
                    Cell::Real(i as f64),
                    Cell::Real(op_norm(&(x - x0))),
                    Cell::Real(d),
                ]);
            }
            Err(e) => r.warnings.push(format!("member {i}: skipped: {e}")),
        }
    }
    let scale = op_norm(&base).max(1.0);
    r.verdict = Some(continuity_verdict(&diffs, scale, tol));
    Ok(r)
}

/// The sequence `X_n = A_n` of [`probe_tcdis_with`] with `eps_n = 0.75^n`,
/// converging to the zero matrix while the corner of `f[X_n]` is `1.125^n`.
pub fn tcdis_sequence(n_max: usize) -> Result<Vec<MatrixC>, ProbeError> {
    (2..=n_max)
        .map(|n| {
            let (a, b) = tcdis_nodes(n);
            Ok(opitz_matrix(&[C::new(b, 0.0), C::new(a, 0.0)], 0.75f64.powi(n as i32))?)
        })
        .collect()
}

/// Per dimension `k`, the largest `||f[X]||` over a deterministic family of
/// `X = eps A + Diag(nodes)` with `A` the unit subdiagonal and nodes within
/// `eps` of `lambda`.
pub fn probe_dimension_sweep(
    f: &FunctionSpec,
    lambda: C,
    eps: f64,
    k_list: &[usize],
    family: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<ProbeReport, ProbeError> {
    if k_list.is_empty() || k_list.iter().any(|&k| k == 0 || k > 32) {
        return Err(ProbeError::InvalidInput("dimensions must lie in 1..=32".into()));
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(ProbeError::InvalidInput(format!("eps must be positive, got {eps}")));
    }
    let domain = f.domain();
    if !domain.is_cluster_point(lambda) {
        return Err(RegError::NotAClusterPoint(lambda).into());
    }
    let cfg = SamplerConfig {
        seed,
        tuples_per_scale: family,
        max_tuples: family,
        ..SamplerConfig::default()
    };
    let mut r = ProbeReport::new(
        "dimension",
        &[("k", ColumnKind::Real), ("max_norm", ColumnKind::Real), ("members", ColumnKind::Real)],
    );
    r.param("lambda", format!("{lambda}"));
    r.param("eps", fmt_num(eps));
    r.param("seed", seed);
    let mut stats = Vec::new();
    for &k in k_list {
        let tuples = if domain.is_finite_set() {
            finite_tuples(domain, lambda, eps, 0.0, k, &cfg)
        } else {
            continuous_tuples(domain, lambda, eps, k, &cfg)
        };
        if tuples.is_empty() {
            return Err(RegError::DomainTooSparse {
                needed: k,
                found: domain.points_within(lambda, eps).len(),
                h: eps,
            }
            .into());
        }
        let mut best: f64 = 0.0;
        for nodes in &tuples {
            let x = if k == 1 { MatrixC::diagonal(nodes) } else { opitz_matrix(nodes, eps)? };
            best = best.max(op_norm(&newton_value(f, &x, nodes, tol)?));
        }
        stats.push((k, best));
        r.push_row(vec![Cell::Real(k as f64), Cell::Real(best), Cell::Real(tuples.len() as f64)]);
    }
    let reference = stats.iter().find(|(k, _)| *k == 2).unwrap_or(&stats[0]).1;
    let top = stats.iter().map(|s| s.1).fold(0.0, f64::max);
    r.verdict = Some(if top <= 10.0 * reference {
        "bounded (holomorphic-consistent)".into()
    } else {
        "growth (no holomorphic extension indicated)".into()
    });
    Ok(r)
}
