use std::fmt;

use num_complex::Complex64;

use super::FuncError;

/// Subset of the complex plane on which a function is defined.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    OpenDisk {
        center: Complex64,
        radius: f64,
    },
    RealInterval {
        a: f64,
        b: f64,
        closed_a: bool,
        closed_b: bool,
    },
    /// Finite point set. `cluster_points` are the points designated as
    /// accumulation points of the (conceptually infinite) set the table samples.
    FiniteSet {
        points: Vec<Complex64>,
        cluster_points: Vec<Complex64>,
    },
    WholePlane,
}

/// Bit-exact key with `-0.0` folded into `+0.0`.
pub(crate) fn key(z: Complex64) -> (u64, u64) {
    let norm = |x: f64| if x == 0.0 { 0.0f64.to_bits() } else { x.to_bits() };
    (norm(z.re), norm(z.im))
}

impl DomainSpec {
    pub fn open_disk(center: Complex64, radius: f64) -> Result<Self, FuncError> {
        if !(radius.is_finite() && radius > 0.0 && center.re.is_finite() && center.im.is_finite()) {
            return Err(FuncError::InvalidDomain(format!("disk radius must be finite and > 0, got {radius}")));
        }
        Ok(DomainSpec::OpenDisk { center, radius })
    }

    pub fn real_interval(a: f64, b: f64, closed_a: bool, closed_b: bool) -> Result<Self, FuncError> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(FuncError::InvalidDomain(format!("interval needs finite a < b, got [{a}, {b}]")));
        }
        Ok(DomainSpec::RealInterval { a, b, closed_a, closed_b })
    }

    pub fn finite_set(points: Vec<Complex64>, cluster_points: Vec<Complex64>) -> Result<Self, FuncError> {
        if points.is_empty() {
            return Err(FuncError::InvalidDomain("finite set must be nonempty".into()));
        }
        let mut keys: Vec<_> = points.iter().map(|z| key(*z)).collect();
        keys.sort_unstable();
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return Err(FuncError::InvalidDomain("finite set points must be pairwise distinct".into()));
        }
        if points.iter().chain(&cluster_points).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(FuncError::InvalidDomain("finite set points must be finite".into()));
        }
        Ok(DomainSpec::FiniteSet { points, cluster_points })
    }

    /// Parses `plane`, `disk:<re>,<im>,<r>`, or an interval such as `[-1,1]`,
    /// `(0,1]`.
    pub fn parse(text: &str) -> Result<Self, FuncError> {
        let t = text.trim();
        let bad = || FuncError::InvalidDomain(format!("cannot parse domain '{text}'"));
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
        if t == "plane" {
            return Ok(DomainSpec::WholePlane);
        }
        if let Some(rest) = t.strip_prefix("disk:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            return Self::open_disk(Complex64::new(num(parts[0])?, num(parts[1])?), num(parts[2])?);
        }
        let closed_a = match t.chars().next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(bad()),
        };
        let closed_b = match t.chars().last() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(bad()),
        };
        let inner = &t[1..t.len() - 1];
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        Self::real_interval(num(a)?, num(b)?, closed_a, closed_b)
    }

    /// Exact membership.
    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            DomainSpec::OpenDisk { center, radius } => (z - center).norm() < *radius,
            DomainSpec::RealInterval { a, b, closed_a, closed_b } => {
                z.im == 0.0
                    && (if *closed_a { z.re >= *a } else { z.re > *a })
                    && (if *closed_b { z.re <= *b } else { z.re < *b })
            }
            DomainSpec::FiniteSet { points, .. } => {
                let k = key(z);
                points.iter().any(|p| key(*p) == k)
            }
            DomainSpec::WholePlane => z.re.is_finite() && z.im.is_finite(),
        }
    }

    /// Distance from `z` to the domain (0 on the closure).
    pub fn distance(&self, z: Complex64) -> f64 {
        match self {
            DomainSpec::OpenDisk { center, radius } => ((z - center).norm() - radius).max(0.0),
            DomainSpec::RealInterval { a, b, .. } => {
                let dx = if z.re < *a {
                    a - z.re
                } else if z.re > *b {
                    z.re - b
                } else {
                    0.0
                };
                dx.hypot(z.im)
            }
            DomainSpec::FiniteSet { points, .. } => {
                points.iter().map(|p| (z - p).norm()).fold(f64::INFINITY, f64::min)
            }
            DomainSpec::WholePlane => 0.0,
        }
    }

    /// Nearest point that actually belongs to the domain.
    pub fn project(&self, z: Complex64) -> Complex64 {
        if self.contains(z) {
            return z;
        }
        match self {
            DomainSpec::OpenDisk { center, radius } => {
                let d = z - center;
                let r = d.norm();
                let inner = radius * (1.0 - 4.0 * f64::EPSILON);
                if r == 0.0 {
                    *center
                } else {
                    center + d * (inner / r)
                }
            }
            DomainSpec::RealInterval { a, b, closed_a, closed_b } => {
                let mut x = z.re.clamp(*a, *b);
                if x == *a && !closed_a {
                    x = next_up(*a).min(*b);
                }
                if x == *b && !closed_b {
                    x = next_down(*b).max(*a);
                }
                Complex64::new(x, 0.0)
            }
            DomainSpec::FiniteSet { points, .. } => *points
                .iter()
                .min_by(|p, q| (z - *p).norm().total_cmp(&(z - *q).norm()))
                .expect("finite set is nonempty"),
            DomainSpec::WholePlane => z,
        }
    }

    /// Membership in the set of cluster points.
    pub fn is_cluster_point(&self, z: Complex64) -> bool {
        match self {
            DomainSpec::OpenDisk { center, radius } => (z - center).norm() <= *radius,
            DomainSpec::RealInterval { a, b, .. } => z.im == 0.0 && z.re >= *a && z.re <= *b,
            DomainSpec::FiniteSet { cluster_points, .. } => {
                let k = key(z);
                cluster_points.iter().any(|p| key(*p) == k)
            }
            DomainSpec::WholePlane => true,
        }
    }

    pub fn is_finite_set(&self) -> bool {
        matches!(self, DomainSpec::FiniteSet { .. })
    }

    /// Domain points within distance `h` of `center`, nearest first.
    /// Only meaningful for finite sets; continuous domains return an empty list.
    pub fn points_within(&self, center: Complex64, h: f64) -> Vec<Complex64> {
        match self {
            DomainSpec::FiniteSet { points, .. } => {
                let mut v: Vec<Complex64> = points.iter().copied().filter(|p| (p - center).norm() <= h).collect();
                v.sort_by(|p, q| {
                    (p - center)
                        .norm()
                        .total_cmp(&(q - center).norm())
                        .then(p.re.total_cmp(&q.re))
                        .then(p.im.total_cmp(&q.im))
                });
                v
            }
            _ => Vec::new(),
        }
    }

    /// Deterministic sample of up to `n` interior points.
    pub fn sample(&self, n: usize) -> Vec<Complex64> {
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        let spiral = |c: Complex64, r: f64| -> Vec<Complex64> {
            (0..n)
                .map(|i| {
                    let rho = r * ((i as f64 + 0.5) / n as f64).sqrt();
                    c + Complex64::from_polar(rho, golden * i as f64)
                })
                .collect()
        };
        match self {
            DomainSpec::OpenDisk { center, radius } => spiral(*center, 0.99 * radius),
            DomainSpec::RealInterval { a, b, .. } => (0..n)
                .map(|i| Complex64::new(a + (b - a) * (i as f64 + 0.5) / n as f64, 0.0))
                .collect(),
            DomainSpec::FiniteSet { points, .. } => points.iter().take(n).copied().collect(),
            DomainSpec::WholePlane => spiral(Complex64::new(0.0, 0.0), 2.0),
        }
    }
}

fn next_up(x: f64) -> f64 {
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let bits = x.to_bits();
    f64::from_bits(if x > 0.0 { bits + 1 } else { bits - 1 })
}

fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainSpec::OpenDisk { center, radius } => write!(f, "disk:{},{},{}", center.re, center.im, radius),
            DomainSpec::RealInterval { a, b, closed_a, closed_b } => write!(
                f,
                "{}{},{}{}",
                if *closed_a { '[' } else { '(' },
                a,
                b,
                if *closed_b { ']' } else { ')' }
            ),
            DomainSpec::FiniteSet { points, .. } => write!(f, "finite({} points)", points.len()),
            DomainSpec::WholePlane => write!(f, "plane"),
        }
    }
}
