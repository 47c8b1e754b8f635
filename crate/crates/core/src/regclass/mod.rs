//! Sampled estimators for bounded (DDB) and convergent (DDC) divided
//! differences near a cluster point, and for Taylor remainders (TC).
//!
//! Every statistic carries a rounding bound. Scales whose divided differences
//! are dominated by rounding are kept in the sweep but marked unresolved and
//! do not enter the verdict.

mod sampling;

use std::fmt;

use num_complex::Complex64;

use crate::divdiff::{dd_value, DivDiffError};
use crate::funcspec::{Body, DomainSpec, FuncError, FunctionSpec};
use crate::interp::NewtonForm;

pub use sampling::{continuous_tuples, finite_tuples, SamplerConfig};

type C = Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RegError {
    #[error("DomainTooSparse: {found} domain points within {h} of the center, {needed} needed")]
    DomainTooSparse { needed: usize, found: usize, h: f64 },
    #[error("NotAClusterPoint: {0} is not a cluster point of the domain")]
    NotAClusterPoint(C),
    #[error("InvalidScales: {0}")]
    InvalidScales(String),
    #[error("InvalidProbes: {0}")]
    InvalidProbes(String),
    #[error("NotDifferentiable: {0}")]
    NotDifferentiable(String),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error(transparent)]
    DivDiff(#[from] DivDiffError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegClass {
    Ddb(usize),
    Ddc(usize),
    Tc(usize),
}

impl fmt::Display for RegClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegClass::Ddb(k) => write!(f, "DDB({k})"),
            RegClass::Ddc(k) => write!(f, "DDC({k})"),
            RegClass::Tc(k) => write!(f, "TC({k})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Node tuple exhibiting the verdict. For DDC failures `partner` holds the
/// second tuple of the widest pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub nodes: Vec<C>,
    pub value: C,
    pub magnitude: f64,
    pub partner: Option<(Vec<C>, C)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub h: f64,
    pub statistic: f64,
    /// Tuples (or probes) behind the statistic.
    pub samples: usize,
    /// Bound on the rounding error of the largest sampled value.
    pub roundoff: f64,
    pub resolved: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityVerdict {
    pub class_tested: RegClass,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Sorted by decreasing `h`.
    pub sweep: Vec<SweepPoint>,
    /// DDC limit estimate, present on pass.
    pub limit: Option<C>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegConfig {
    pub sampler: SamplerConfig,
    /// DDB passes when last/first stays at or below this.
    pub bounded_ratio: f64,
    /// DDB fails when last/first reaches this.
    pub blowup_ratio: f64,
    /// DDC and TC pass when last/first spread drops to this.
    pub shrink_ratio: f64,
    /// DDC and TC fail when last/first stays at or above this.
    pub stall_ratio: f64,
    /// A scale is resolved when its rounding bound is at most this fraction
    /// of the largest sampled magnitude.
    pub resolution: f64,
}

impl Default for RegConfig {
    fn default() -> Self {
        Self {
            sampler: SamplerConfig::default(),
            bounded_ratio: 10.0,
            blowup_ratio: 1e3,
            shrink_ratio: 0.1,
            stall_ratio: 0.5,
            resolution: 1e-3,
        }
    }
}

impl RegConfig {
    pub fn with_seed(seed: u64) -> Self {
        let mut c = Self::default();
        c.sampler.seed = seed;
        c
    }
}

/// Default sweep for [`estimate_ddb`] and [`estimate_ddc`].
pub const DEFAULT_SCALES: [f64; 9] = [0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 1e-3, 1e-4, 1e-5];

/// Sweep fitted to the domain: [`DEFAULT_SCALES`] for continuous domains;
/// for finite sets the distinct distances from `center` to domain points,
/// decreasing, thinned to at most 64 (the smallest is always kept).
pub fn default_scales(domain: &DomainSpec, center: C) -> Vec<f64> {
    if !domain.is_finite_set() {
        return DEFAULT_SCALES.to_vec();
    }
    let mut d: Vec<f64> = domain
        .points_within(center, f64::INFINITY)
        .iter()
        .map(|z| (z - center).norm())
        .filter(|r| *r > 0.0)
        .collect();
    d.sort_by(|a, b| b.total_cmp(a));
    d.dedup();
    const CAP: usize = 64;
    if d.len() > CAP {
        let n = d.len();
        d = (0..CAP).map(|i| d[i * (n - 1) / (CAP - 1)]).collect();
    }
    d
}

/// Rounding bound for a divided difference from its Lagrange form:
/// `4 m eps sum |f(z_i)| / prod_{j != i} |z_i - z_j|`.
pub fn dd_roundoff(nodes: &[C], values: &[C]) -> f64 {
    let m = nodes.len();
    let mut s = 0.0;
    for i in 0..m {
        let mut p = 1.0;
        for j in 0..m {
            if j != i {
                p *= (nodes[i] - nodes[j]).norm();
            }
        }
        s += values[i].norm() / p;
    }
    4.0 * m as f64 * f64::EPSILON * s
}

struct ScaleData {
    h: f64,
    tuples: Vec<Vec<C>>,
    values: Vec<C>,
    max_abs: f64,
    argmax: usize,
    roundoff: f64,
}

impl ScaleData {
    fn resolved(&self, cfg: &RegConfig) -> bool {
        !self.values.is_empty() && self.roundoff <= cfg.resolution * self.max_abs
    }

    fn negligible(&self) -> bool {
        self.max_abs <= 10.0 * self.roundoff
    }

    /// Widest pair of sampled values.
    fn spread(&self) -> (f64, usize, usize) {
        let mut best = (0.0, 0, 0);
        for i in 0..self.values.len() {
            for j in i + 1..self.values.len() {
                let d = (self.values[i] - self.values[j]).norm();
                if d > best.0 {
                    best = (d, i, j);
                }
            }
        }
        best
    }
}

fn check_scales(scales: &[f64]) -> Result<(), RegError> {
    if scales.is_empty() {
        return Err(RegError::InvalidScales("no scales given".into()));
    }
    if scales.iter().any(|h| !h.is_finite() || *h <= 0.0) {
        return Err(RegError::InvalidScales("scales must be positive and finite".into()));
    }
    if scales.windows(2).any(|w| w[1] >= w[0]) {
        return Err(RegError::InvalidScales("scales must be strictly decreasing".into()));
    }
    Ok(())
}

fn sample_scales(
    f: &FunctionSpec,
    k: usize,
    center: C,
    scales: &[f64],
    cfg: &RegConfig,
) -> Result<Vec<ScaleData>, RegError> {
    check_scales(scales)?;
    let domain = f.domain();
    if !domain.is_cluster_point(center) {
        return Err(RegError::NotAClusterPoint(center));
    }
    let m = k + 1;
    if domain.is_finite_set() {
        let found = domain.points_within(center, scales[0]).len();
        if found < m {
            return Err(RegError::DomainTooSparse { needed: m, found, h: scales[0] });
        }
    }
    let mut out = Vec::with_capacity(scales.len());
    for (s, &h) in scales.iter().enumerate() {
        let tuples = if domain.is_finite_set() {
            let inner = scales.get(s + 1).copied().unwrap_or(0.0);
            finite_tuples(domain, center, h, inner, m, &cfg.sampler)
        } else {
            continuous_tuples(domain, center, h, m, &cfg.sampler)
        };
        if s == 0 && tuples.is_empty() {
            return Err(RegError::DomainTooSparse { needed: m, found: 0, h });
        }
        let mut values = Vec::with_capacity(tuples.len());
        let (mut max_abs, mut argmax, mut roundoff) = (0.0, 0, 0.0f64);
        for (t, nodes) in tuples.iter().enumerate() {
            let fv: Vec<C> = nodes.iter().map(|z| f.eval(*z)).collect::<Result<_, _>>()?;
            let v = dd_value(f, nodes)?;
            roundoff = roundoff.max(dd_roundoff(nodes, &fv));
            if v.norm() > max_abs || t == 0 {
                max_abs = v.norm();
                argmax = t;
            }
            values.push(v);
        }
        out.push(ScaleData { h, tuples, values, max_abs, argmax, roundoff });
    }
    Ok(out)
}

/// Bounded divided differences of order `k + 1` near `center`.
///
/// Per scale `h` the statistic is the largest `|Delta|` over sampled
/// `(k+1)`-tuples within `h` of `center`. For finite sets, scale `h` only
/// counts tuples whose farthest node lies beyond the next scale, so the
/// sweep tracks how differences behave as tuples close in on the center.
/// The verdict compares the first resolved scale with the largest
/// statistic among the later ones; the witness comes from that scale.
pub fn estimate_ddb(
    f: &FunctionSpec,
    k: usize,
    center: C,
    scales: &[f64],
    cfg: &RegConfig,
) -> Result<RegularityVerdict, RegError> {
    let data = sample_scales(f, k, center, scales, cfg)?;
    let sweep: Vec<SweepPoint> = data
        .iter()
        .map(|d| SweepPoint {
            h: d.h,
            statistic: d.max_abs,
            samples: d.values.len(),
            roundoff: d.roundoff,
            resolved: d.resolved(cfg),
        })
        .collect();
    let usable: Vec<&ScaleData> = data.iter().filter(|d| d.resolved(cfg)).collect();
    let mut notes = Vec::new();
    let mut witness = None;
    let verdict = if usable.len() >= 2 {
        // largest later statistic: finite-set annuli need not grow monotonically
        let first = usable[0];
        let last = usable[1..]
            .iter()
            .copied()
            .reduce(|a, b| if b.max_abs > a.max_abs { b } else { a })
            .unwrap();
        if last.max_abs <= cfg.bounded_ratio * first.max_abs {
            Verdict::Pass
        } else if last.max_abs >= cfg.blowup_ratio * first.max_abs {
            witness = Some(Witness {
                nodes: last.tuples[last.argmax].clone(),
                value: last.values[last.argmax],
                magnitude: last.max_abs,
                partner: None,
            });
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    } else if data.iter().all(|d| d.values.is_empty() || d.negligible()) && data[0].roundoff <= 1e-6 {
        notes.push("divided differences vanish to working precision".into());
        Verdict::Pass
    } else {
        notes.push(format!("{} resolved scale(s); at least 2 needed", usable.len()));
        Verdict::Inconclusive
    };
    Ok(RegularityVerdict {
        class_tested: RegClass::Ddb(k),
        verdict,
        witness,
        sweep,
        limit: None,
        notes,
    })
}

/// Convergent divided differences of order `k + 1` at `(center, ..., center)`.
///
/// Per scale the statistic is the spread (largest pairwise distance) of the
/// sampled values; scales with fewer than two values are unresolved. The
/// first resolved spread is compared with the widest one over the finest
/// third of the resolved scales. On pass, `limit` is a Richardson-extrapolated
/// value on a fixed stencil around `center`.
pub fn estimate_ddc(
    f: &FunctionSpec,
    k: usize,
    center: C,
    scales: &[f64],
    cfg: &RegConfig,
) -> Result<RegularityVerdict, RegError> {
    let data = sample_scales(f, k, center, scales, cfg)?;
    let spreads: Vec<(f64, usize, usize)> = data.iter().map(ScaleData::spread).collect();
    let sweep: Vec<SweepPoint> = data
        .iter()
        .zip(&spreads)
        .map(|(d, s)| SweepPoint {
            h: d.h,
            statistic: s.0,
            samples: d.values.len(),
            roundoff: d.roundoff,
            resolved: d.resolved(cfg) && d.values.len() >= 2,
        })
        .collect();
    let usable: Vec<usize> = (0..data.len()).filter(|&i| sweep[i].resolved).collect();
    let mut notes = Vec::new();
    let mut witness = None;
    let verdict = if usable.len() >= 2 {
        // widest spread over the finest third of the sweep
        let i0 = usable[0];
        let tail = &usable[usable.len() - (usable.len() / 3).max(1)..];
        let i1 = tail.iter().copied().reduce(|a, b| if spreads[b].0 > spreads[a].0 { b } else { a }).unwrap();
        let (first, last) = (spreads[i0].0, spreads[i1].0);
        if last <= cfg.shrink_ratio * first || last <= 2.0 * data[i1].roundoff {
            Verdict::Pass
        } else if last >= cfg.stall_ratio * first {
            let d = &data[i1];
            let (_, a, b) = spreads[i1];
            witness = Some(Witness {
                nodes: d.tuples[a].clone(),
                value: d.values[a],
                magnitude: last,
                partner: Some((d.tuples[b].clone(), d.values[b])),
            });
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    } else if data.iter().all(|d| d.values.is_empty() || d.negligible()) && data[0].roundoff <= 1e-6 {
        notes.push("divided differences vanish to working precision".into());
        Verdict::Pass
    } else {
        notes.push(format!("{} resolved scale(s); at least 2 needed", usable.len()));
        Verdict::Inconclusive
    };

    let limit = if verdict == Verdict::Pass {
        let mut radii: Vec<f64> = usable.iter().map(|&i| data[i].h).collect();
        if radii.is_empty() {
            radii.push(data[0].h);
        }
        let est = limit_estimate(f, k, center, &radii)?;
        if est.is_none() {
            notes.push("no stencil around the center fits in the domain".into());
        }
        est
    } else {
        None
    };
    Ok(RegularityVerdict {
        class_tested: RegClass::Ddc(k),
        verdict,
        witness,
        sweep,
        limit,
        notes,
    })
}

/// Stencil of `k + 1` nodes of radius `rho` around `center` plus the order of
/// its leading error term in `rho`.
fn stencil(domain: &DomainSpec, k: usize, center: C, rho: f64) -> Option<(Vec<C>, i32)> {
    let m = k + 1;
    let fits = |v: &Vec<C>| v.iter().all(|z| domain.contains(*z));
    match domain {
        DomainSpec::RealInterval { .. } => {
            if m == 1 {
                let v = vec![center];
                if fits(&v) {
                    return Some((v, 0));
                }
            }
            let sym: Vec<C> = (0..m)
                .map(|j| center + C::new(rho * (-1.0 + 2.0 * j as f64 / k.max(1) as f64), 0.0))
                .collect();
            if m > 1 && fits(&sym) {
                return Some((sym, 2));
            }
            for dir in [1.0, -1.0] {
                let one: Vec<C> = (0..m)
                    .map(|j| center + C::new(dir * rho * (j + 1) as f64 / m as f64, 0.0))
                    .collect();
                if fits(&one) {
                    return Some((one, 1));
                }
            }
            None
        }
        DomainSpec::OpenDisk { .. } | DomainSpec::WholePlane => {
            let ring: Vec<C> = (0..m)
                .map(|j| center + C::from_polar(rho, std::f64::consts::TAU * j as f64 / m as f64))
                .collect();
            fits(&ring).then_some((ring, m as i32))
        }
        DomainSpec::FiniteSet { .. } => None,
    }
}

/// Richardson-extrapolated limit of `Delta` at `(center, ..., center)`.
/// Tries radii from smallest up and keeps the first whose rounding bound is
/// below `1e-8` of the estimate; otherwise the one with the smallest bound.
fn limit_estimate(f: &FunctionSpec, k: usize, center: C, radii: &[f64]) -> Result<Option<C>, RegError> {
    let domain = f.domain();
    if domain.is_finite_set() {
        let pts = domain.points_within(center, f64::INFINITY);
        if pts.len() < k + 1 {
            return Ok(None);
        }
        return Ok(Some(dd_value(f, &pts[..k + 1])?));
    }
    let mut best: Option<(C, f64)> = None;
    for &rho0 in radii.iter().rev() {
        let mut rho = rho0;
        let mut found = None;
        for _ in 0..40 {
            if let (Some(a), Some(b)) = (stencil(domain, k, center, rho), stencil(domain, k, center, rho / 2.0)) {
                found = Some((a, b));
                break;
            }
            rho /= 2.0;
        }
        let Some(((n1, order), (n2, _))) = found else {
            continue;
        };
        let d1 = dd_value(f, &n1)?;
        let d2 = dd_value(f, &n2)?;
        let fv1: Vec<C> = n1.iter().map(|z| f.eval(*z)).collect::<Result<_, _>>()?;
        let fv2: Vec<C> = n2.iter().map(|z| f.eval(*z)).collect::<Result<_, _>>()?;
        let (est, bound) = if order == 0 {
            (d1, dd_roundoff(&n1, &fv1))
        } else {
            let w = 2f64.powi(order);
            let est = (d2 * w - d1) / (w - 1.0);
            let bound = (w * dd_roundoff(&n2, &fv2) + dd_roundoff(&n1, &fv1)) / (w - 1.0);
            (est, bound)
        };
        let est = if est.norm() <= 10.0 * bound { C::new(0.0, 0.0) } else { est };
        if bound <= 1e-8 * est.norm() {
            return Ok(Some(est));
        }
        if best.is_none_or(|(_, b)| bound < b) {
            best = Some((est, bound));
        }
    }
    Ok(best.map(|(e, _)| e))
}

/// Coefficients `[c_0, ..., c_k]` of the order-`k` Taylor polynomial at `a`,
/// with `c_j = f^(j)(a) / j!`.
///
/// Expressions differentiate symbolically. Tables interpolate on a ladder of
/// nearby samples: `a` itself when stored, then points nearest-first keeping
/// only those at least half their own distance to `a` away from every point
/// already taken.
pub fn taylor_coefficients(f: &FunctionSpec, k: usize, a: C) -> Result<Vec<C>, RegError> {
    match f.body() {
        Body::Expression(_) => f.taylor(a, k).map_err(|e| match e {
            FuncError::NotDifferentiable(msg) => RegError::NotDifferentiable(msg),
            other => RegError::Func(other),
        }),
        Body::SampleTable(_) => {
            let domain = f.domain();
            let pts = domain.points_within(a, f64::INFINITY);
            let mut ladder: Vec<C> = Vec::with_capacity(k + 1);
            for p in pts {
                let d = (p - a).norm();
                if ladder.iter().all(|q| (p - q).norm() >= 0.5 * d && p != *q) {
                    ladder.push(p);
                    if ladder.len() == k + 1 {
                        break;
                    }
                }
            }
            if ladder.len() < k + 1 {
                return Err(RegError::DomainTooSparse {
                    needed: k + 1,
                    found: ladder.len(),
                    h: f64::INFINITY,
                });
            }
            let coeffs = crate::divdiff::dd_table(f, &ladder)?.newton_coefficients();
            let shifted: Vec<C> = ladder.iter().map(|z| z - a).collect();
            let mut c = NewtonForm::new(shifted, coeffs).to_monomial().coeffs().to_vec();
            c.resize(k + 1, C::new(0.0, 0.0));
            Ok(c)
        }
    }
}

/// `|tau_a(z)| = |f(z) - T_k(z)| / |z - a|^k` at each probe.
///
/// Probes are sorted by decreasing distance to `a`. Verdict compares the
/// largest remainder among the nearest third of resolved probes with the
/// largest among the farthest third.
pub fn taylor_remainder(
    f: &FunctionSpec,
    k: usize,
    a: C,
    probes: &[C],
    cfg: &RegConfig,
) -> Result<RegularityVerdict, RegError> {
    if probes.is_empty() {
        return Err(RegError::InvalidProbes("no probes given".into()));
    }
    if probes.contains(&a) {
        return Err(RegError::InvalidProbes(format!("probe coincides with the expansion point {a}")));
    }
    let coeffs = taylor_coefficients(f, k, a)?;
    let mut order: Vec<usize> = (0..probes.len()).collect();
    order.sort_by(|&i, &j| (probes[j] - a).norm().total_cmp(&(probes[i] - a).norm()));

    let mut sweep = Vec::with_capacity(probes.len());
    let mut points = Vec::with_capacity(probes.len());
    for &i in &order {
        let z = probes[i];
        let w = z - a;
        let r = w.norm();
        let fz = f.eval(z)?;
        let mut t = C::new(0.0, 0.0);
        let mut mag = 0.0;
        for c in coeffs.iter().rev() {
            t = t * w + c;
        }
        for (j, c) in coeffs.iter().enumerate() {
            mag += c.norm() * r.powi(j as i32);
        }
        let denom = r.powi(k as i32);
        let tau = (fz - t).norm() / denom;
        let roundoff = 4.0 * (k + 1) as f64 * f64::EPSILON * (fz.norm() + mag) / denom;
        let resolved = tau > 4.0 * roundoff || roundoff == 0.0;
        sweep.push(SweepPoint { h: r, statistic: tau, samples: 1, roundoff, resolved });
        points.push((z, fz - t));
    }

    let resolved: Vec<usize> = (0..sweep.len()).filter(|&i| sweep[i].resolved).collect();
    let mut notes = Vec::new();
    let mut witness = None;
    let verdict = if resolved.is_empty() {
        notes.push("remainder vanishes to working precision".into());
        Verdict::Pass
    } else if resolved.len() < 2 {
        notes.push("fewer than 2 resolved probes".into());
        Verdict::Inconclusive
    } else {
        let g = (resolved.len() / 3).max(1);
        let max_of = |idx: &[usize]| {
            idx.iter()
                .copied()
                .max_by(|&x, &y| sweep[x].statistic.total_cmp(&sweep[y].statistic))
                .expect("nonempty group")
        };
        let i_first = max_of(&resolved[..g]);
        let i_last = max_of(&resolved[resolved.len() - g..]);
        let (first, last) = (sweep[i_first].statistic, sweep[i_last].statistic);
        if last <= cfg.shrink_ratio * first {
            Verdict::Pass
        } else if last >= cfg.stall_ratio * first {
            witness = Some(Witness {
                nodes: vec![points[i_last].0],
                value: points[i_last].1,
                magnitude: last,
                partner: None,
            });
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    };
    Ok(RegularityVerdict {
        class_tested: RegClass::Tc(k),
        verdict,
        witness,
        sweep,
        limit: None,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspec::tcdis_domain;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn plane(text: &str) -> FunctionSpec {
        FunctionSpec::expression(text, DomainSpec::WholePlane).unwrap()
    }

    fn factorial(k: usize) -> f64 {
        (1..=k).map(|i| i as f64).product()
    }

    #[test]
    fn tcdis_fails_ddb1_with_exact_witness() {
        let f = tcdis_domain(20).unwrap();
        let v = estimate_ddb(&f, 1, c(0.0, 0.0), &[0.7, 0.4, 0.2, 0.1, 0.06], &RegConfig::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Fail);
        let w = v.witness.unwrap();
        let target = 1.5f64.powi(20);
        assert!((w.magnitude - target).abs() <= 4.0 * f64::EPSILON * target);
        let (a, b) = crate::funcspec::tcdis_nodes(20);
        let mut nodes: Vec<f64> = w.nodes.iter().map(|z| z.re).collect();
        nodes.sort_by(f64::total_cmp);
        assert_eq!(nodes, vec![a, b]);
    }

    #[test]
    fn abs_fails_ddb2_like_inverse_h() {
        let f = FunctionSpec::expression("abs(z)", DomainSpec::parse("[-1,1]").unwrap()).unwrap();
        let scales = [0.5, 1e-1, 1e-2, 1e-3, 1e-4];
        let v = estimate_ddb(&f, 2, c(0.0, 0.0), &scales, &RegConfig::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Fail);
        for p in &v.sweep {
            assert!((p.statistic * p.h - 1.0).abs() <= 0.1, "h={} stat={}", p.h, p.statistic);
        }
    }

    #[test]
    fn exp_passes_ddb_and_ddc() {
        let f = FunctionSpec::expression("exp(z)", DomainSpec::parse("disk:0,0,1").unwrap()).unwrap();
        for k in 0..=4 {
            let b = estimate_ddb(&f, k, c(0.0, 0.0), &DEFAULT_SCALES, &RegConfig::default()).unwrap();
            assert_eq!(b.verdict, Verdict::Pass, "ddb k={k}");
            let d = estimate_ddc(&f, k, c(0.0, 0.0), &DEFAULT_SCALES, &RegConfig::default()).unwrap();
            assert_eq!(d.verdict, Verdict::Pass, "ddc k={k}");
            let l = d.limit.unwrap();
            assert!((l - 1.0 / factorial(k)).norm() <= 1e-5 / factorial(k), "k={k} limit={l}");
        }
    }

    #[test]
    fn ddc_limit_off_center() {
        let f = plane("exp(z)");
        for a in [c(1.0, 0.0), c(0.0, 1.0)] {
            for k in 1..=4 {
                let d = estimate_ddc(&f, k, a, &DEFAULT_SCALES, &RegConfig::default()).unwrap();
                let want = a.exp() / factorial(k);
                assert!((d.limit.unwrap() - want).norm() <= 1e-5 * want.norm(), "a={a} k={k}");
            }
        }
    }

    #[test]
    fn abs_fails_ddc1() {
        let f = FunctionSpec::expression("abs(z)", DomainSpec::parse("[-1,1]").unwrap()).unwrap();
        let v = estimate_ddc(&f, 1, c(0.0, 0.0), &DEFAULT_SCALES, &RegConfig::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Fail);
        let w = v.witness.unwrap();
        assert!(w.partner.is_some() && w.magnitude > 1.5);
    }

    #[test]
    fn affine_passes_ddc_with_zero_limit() {
        let f = plane("2*z + 3");
        for k in 1..=4 {
            let v = estimate_ddc(&f, k, c(0.0, 0.0), &DEFAULT_SCALES, &RegConfig::default()).unwrap();
            assert_eq!(v.verdict, Verdict::Pass, "k={k}");
            let want = if k == 1 { 2.0 } else { 0.0 };
            assert!((v.limit.unwrap() - want).norm() <= 1e-9, "k={k}");
        }
    }

    #[test]
    fn sin_on_unit_interval_is_lipschitz() {
        let f = FunctionSpec::expression("sin(z)", DomainSpec::parse("[0,1]").unwrap()).unwrap();
        for k in 1..=4 {
            let v = estimate_ddb(&f, k, c(0.5, 0.0), &[0.5, 0.25, 0.1], &RegConfig::default()).unwrap();
            assert_eq!(v.verdict, Verdict::Pass);
            assert!(v.sweep.iter().all(|p| p.statistic <= 1.0 + 1e-6));
        }
    }

    #[test]
    fn taylor_remainder_examples() {
        let f = plane("exp(z)");
        let probes: Vec<C> = (1..=8).map(|m| c(10f64.powi(-m), 0.0)).collect();
        let v = taylor_remainder(&f, 2, c(0.0, 0.0), &probes, &RegConfig::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Pass);
        for p in v.sweep.iter().filter(|p| p.resolved) {
            assert!((p.statistic / (p.h / 6.0) - 1.0).abs() < 0.1, "h={}", p.h);
        }

        let poly = plane("z^2 - 3*z + 1");
        let v = taylor_remainder(&poly, 2, c(0.5, 0.0), &probes, &RegConfig::default()).unwrap();
        assert_eq!(v.verdict, Verdict::Pass);
        assert!(v.sweep.iter().all(|p| p.statistic <= 1e-6));

        let t = tcdis_domain(37).unwrap();
        let probes: Vec<C> = t.domain().points_within(c(0.0, 0.0), 1.0).into_iter().skip(1).collect();
        for k in 1..=3 {
            let v = taylor_remainder(&t, k, c(0.0, 0.0), &probes, &RegConfig::default()).unwrap();
            assert_eq!(v.verdict, Verdict::Pass, "k={k}");
        }
    }

    #[test]
    fn abs_is_not_differentiable() {
        let f = FunctionSpec::expression("abs(z)", DomainSpec::parse("[-1,1]").unwrap()).unwrap();
        let r = taylor_remainder(&f, 1, c(0.0, 0.0), &[c(0.1, 0.0)], &RegConfig::default());
        assert!(matches!(r, Err(RegError::NotDifferentiable(_))));
    }

    #[test]
    fn input_validation() {
        let f = plane("z");
        let cfg = RegConfig::default();
        assert!(matches!(estimate_ddb(&f, 1, c(0.0, 0.0), &[0.1, 0.2], &cfg), Err(RegError::InvalidScales(_))));
        assert!(matches!(estimate_ddb(&f, 1, c(0.0, 0.0), &[], &cfg), Err(RegError::InvalidScales(_))));
        let t = tcdis_domain(5).unwrap();
        assert!(matches!(
            estimate_ddb(&t, 1, c(0.5, 0.0), &[0.1], &cfg),
            Err(RegError::NotAClusterPoint(_))
        ));
        assert!(matches!(
            estimate_ddb(&t, 3, c(0.0, 0.0), &[0.15], &cfg),
            Err(RegError::DomainTooSparse { needed: 4, found: 1, .. })
        ));
    }

    #[test]
    fn deterministic() {
        let f = FunctionSpec::expression("abs(z)", DomainSpec::parse("[-1,1]").unwrap()).unwrap();
        let cfg = RegConfig::with_seed(42);
        let a = estimate_ddc(&f, 2, c(0.0, 0.0), &DEFAULT_SCALES, &cfg).unwrap();
        let b = estimate_ddc(&f, 2, c(0.0, 0.0), &DEFAULT_SCALES, &cfg).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }
}
