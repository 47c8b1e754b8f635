//! Scalar functions `f: Omega -> C`, either parsed expressions (with symbolic
//! and Taylor-mode derivatives) or finite sample tables, plus their domains.

mod domain;
mod expr;
mod jet;
mod parse;

use std::collections::HashMap;

use num_complex::Complex64;

pub use domain::DomainSpec;
pub use expr::{Expr, Func};
pub use jet::taylor;
pub use parse::parse;

use domain::key;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FuncError {
    #[error("SyntaxError at offset {offset}: {message}")]
    SyntaxError { offset: usize, message: String },
    #[error("DomainError: {0}")]
    DomainError(String),
    #[error("UndefinedValue: {func} is undefined at z = {at}")]
    UndefinedValue { func: &'static str, at: Complex64 },
    #[error("NotDifferentiable: {0}")]
    NotDifferentiable(String),
    #[error("RangeError: {0}")]
    RangeError(String),
    #[error("InvalidDomain: {0}")]
    InvalidDomain(String),
    #[error("TableFormat at line {line}: {message}")]
    TableFormat { line: usize, message: String },
}

/// Structural smoothness class of a function, fixed at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Differentiability {
    HolomorphicExpr,
    /// Uses `conj`, `re` or `im` but not `abs`.
    RealSmoothExpr,
    NonSmooth,
    Table,
}

/// Finite map from exact keys to values, kept in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleTable {
    entries: Vec<(Complex64, Complex64)>,
    index: HashMap<(u64, u64), usize>,
}

impl SampleTable {
    pub fn new(entries: Vec<(Complex64, Complex64)>) -> Result<Self, FuncError> {
        let mut index = HashMap::with_capacity(entries.len());
        for (i, (z, v)) in entries.iter().enumerate() {
            for x in [z.re, z.im, v.re, v.im] {
                if !x.is_finite() {
                    return Err(FuncError::InvalidDomain(format!("non-finite table entry {i}")));
                }
            }
            if index.insert(key(*z), i).is_some() {
                return Err(FuncError::InvalidDomain(format!("duplicate table key {z}")));
            }
        }
        Ok(Self { entries, index })
    }

    pub fn get(&self, z: Complex64) -> Option<Complex64> {
        self.index.get(&key(z)).map(|&i| self.entries[i].1)
    }

    pub fn entries(&self) -> &[(Complex64, Complex64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.entries.iter().map(|(z, _)| *z)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Expression(Expr),
    SampleTable(SampleTable),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    body: Body,
    domain: DomainSpec,
    differentiability: Differentiability,
    derivative_budget: Option<usize>,
}

const VALIDATION_SAMPLE: usize = 100;

impl FunctionSpec {
    /// Parses `text` and checks that it evaluates on a 100-point sample of `domain`.
    pub fn expression(text: &str, domain: DomainSpec) -> Result<Self, FuncError> {
        Self::from_expr(parse(text)?, domain)
    }

    pub fn from_expr(expr: Expr, domain: DomainSpec) -> Result<Self, FuncError> {
        for z in domain.sample(VALIDATION_SAMPLE) {
            expr.eval(z)?;
        }
        let differentiability = if expr.contains_func(Func::Abs) {
            Differentiability::NonSmooth
        } else if expr.is_holomorphic() {
            Differentiability::HolomorphicExpr
        } else {
            Differentiability::RealSmoothExpr
        };
        Ok(Self {
            body: Body::Expression(expr),
            domain,
            differentiability,
            derivative_budget: None,
        })
    }

    /// Table function on the finite set of its keys.
    pub fn table(entries: Vec<(Complex64, Complex64)>, cluster_points: Vec<Complex64>) -> Result<Self, FuncError> {
        let table = SampleTable::new(entries)?;
        let domain = DomainSpec::finite_set(table.keys().collect(), cluster_points)?;
        Ok(Self {
            body: Body::SampleTable(table),
            domain,
            differentiability: Differentiability::Table,
            derivative_budget: Some(0),
        })
    }

    /// Reads `re im f_re f_im` lines; `#` starts a comment line.
    pub fn parse_table(text: &str, cluster_points: Vec<Complex64>) -> Result<Self, FuncError> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(FuncError::TableFormat {
                    line: idx + 1,
                    message: format!("expected 4 fields, got {}", fields.len()),
                });
            }
            let mut v = [0.0; 4];
            for (slot, field) in v.iter_mut().zip(&fields) {
                *slot = field.parse().map_err(|_| FuncError::TableFormat {
                    line: idx + 1,
                    message: format!("invalid number '{field}'"),
                })?;
            }
            entries.push((Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3])));
        }
        if entries.is_empty() {
            return Err(FuncError::TableFormat {
                line: 0,
                message: "table has no entries".into(),
            });
        }
        Self::table(entries, cluster_points)
    }

    /// Caps the number of derivative orders the calculus may request.
    pub fn with_derivative_budget(mut self, budget: usize) -> Self {
        self.derivative_budget = Some(match self.derivative_budget {
            Some(existing) => existing.min(budget),
            None => budget,
        });
        self
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn expr(&self) -> Option<&Expr> {
        match &self.body {
            Body::Expression(e) => Some(e),
            Body::SampleTable(_) => None,
        }
    }

    pub fn sample_table(&self) -> Option<&SampleTable> {
        match &self.body {
            Body::SampleTable(t) => Some(t),
            Body::Expression(_) => None,
        }
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn differentiability(&self) -> Differentiability {
        self.differentiability
    }

    /// Highest derivative order available, `None` meaning unbounded.
    pub fn max_derivative_order(&self) -> Option<usize> {
        match self.differentiability {
            Differentiability::HolomorphicExpr => self.derivative_budget,
            _ => Some(0),
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64, FuncError> {
        if !self.domain.contains(z) {
            return Err(FuncError::DomainError(format!("z = {z} is outside the domain {}", self.domain)));
        }
        match &self.body {
            Body::Expression(e) => e.eval(z),
            Body::SampleTable(t) => t
                .get(z)
                .ok_or_else(|| FuncError::DomainError(format!("no table entry for z = {z}"))),
        }
    }

    /// `[f(z), f'(z), ..., f^(order)(z)/order!]`.
    pub fn taylor(&self, z: Complex64, order: usize) -> Result<Vec<Complex64>, FuncError> {
        if order == 0 {
            return Ok(vec![self.eval(z)?]);
        }
        if let Some(max) = self.max_derivative_order() {
            if order > max {
                return Err(FuncError::NotDifferentiable(format!(
                    "derivative of order {order} requested, {} available ({:?})",
                    max, self.differentiability
                )));
            }
        }
        if !self.domain.contains(z) {
            return Err(FuncError::DomainError(format!("z = {z} is outside the domain {}", self.domain)));
        }
        taylor(self.expr().expect("holomorphic functions are expressions"), z, order)
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match &self.body {
            Body::Expression(e) => format!("{e} on {}", self.domain),
            Body::SampleTable(t) => format!("table with {} points", t.len()),
        }
    }
}

/// Largest `N` accepted by [`tcdis_domain`].
pub const TCDIS_MAX_N: usize = 40;

/// The stored pair `(a_n, b_n)` standing for `1/n` and `1/n + 3^-n`.
///
/// `b_n` is `a_n + 3^-n` rounded once, so `b_n - a_n` is computed exactly.
pub fn tcdis_nodes(n: usize) -> (f64, f64) {
    let a = 1.0 / n as f64;
    let b = a + 3f64.powi(-(n as i32));
    (a, b)
}

/// Double `v` near `1.5^n d` with `v / d == 1.5^n` exactly when one exists
/// within two ulps.
fn offset_value(n: usize, d: f64) -> f64 {
    let p = 1.5f64.powi(n as i32);
    let v = p * d;
    let step = |x: f64, up: bool| {
        let bits = x.to_bits();
        f64::from_bits(if up { bits + 1 } else { bits - 1 })
    };
    let candidates = [v, step(v, true), step(v, false), step(step(v, true), true), step(step(v, false), false)];
    candidates.into_iter().find(|c| c / d == p).unwrap_or(v)
}

/// Sample table on `{0} U {1/n} U {1/n + 3^-n}`, `2 <= n <= n_max`, with
/// `f(0) = f(1/n) = 0` and `f(1/n + 3^-n) = 2^-n`. The point 0 is the
/// designated cluster point.
///
/// The offset value is stored as the double nearest `1.5^n * (b_n - a_n)` for
/// which `Delta(b_n, a_n) f` evaluates to `1.5^n` exactly. It equals `2^-n` up
/// to the rounding of `b_n`.
pub fn tcdis_domain(n_max: usize) -> Result<FunctionSpec, FuncError> {
    if n_max < 2 {
        return Err(FuncError::RangeError(format!("N must be >= 2, got {n_max}")));
    }
    if n_max > TCDIS_MAX_N {
        return Err(FuncError::RangeError(format!("N must be <= {TCDIS_MAX_N}, got {n_max}")));
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut entries = vec![(zero, zero)];
    for n in 2..=n_max {
        let (a, b) = tcdis_nodes(n);
        if a == b {
            return Err(FuncError::RangeError(format!(
                "1/{n} + 3^-{n} is not representable apart from 1/{n} in double precision"
            )));
        }
        entries.push((Complex64::new(a, 0.0), zero));
        entries.push((Complex64::new(b, 0.0), Complex64::new(offset_value(n, b - a), 0.0)));
    }
    FunctionSpec::table(entries, vec![zero])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let t = tcdis_domain(3).unwrap();
        let v = t.eval(c(1.0 / 3.0 + 1.0 / 27.0, 0.0)).unwrap();
        assert!((v.re - 0.125).abs() <= 1e-16 && v.im == 0.0);
        let id = FunctionSpec::expression("z", DomainSpec::WholePlane).unwrap();
        assert_eq!(id.eval(c(7.0, -2.0)).unwrap(), c(7.0, -2.0));
        assert!(matches!(t.eval(c(0.25, 0.0)), Err(FuncError::DomainError(_))));
    }

    #[test]
    fn tcdis_tables() {
        let t2 = tcdis_domain(2).unwrap();
        let table = t2.sample_table().unwrap();
        assert_eq!(table.len(), 3);
        assert_eq!(table.get(c(0.0, 0.0)), Some(c(0.0, 0.0)));
        assert_eq!(table.get(c(0.5, 0.0)), Some(c(0.0, 0.0)));
        let v = table.get(c(0.5 + 1.0 / 9.0, 0.0)).unwrap();
        assert!((v.re - 0.25).abs() <= 1e-15);
        assert!(matches!(tcdis_domain(1), Err(FuncError::RangeError(_))));
        assert!(matches!(tcdis_domain(41), Err(FuncError::RangeError(_))));
        assert!(t2.domain().is_cluster_point(c(0.0, 0.0)));
    }

    #[test]
    fn tcdis_keys_distinct_and_bounded() {
        let t = tcdis_domain(37).unwrap();
        let keys: Vec<_> = t.sample_table().unwrap().keys().collect();
        assert_eq!(keys.len(), 1 + 2 * 36);
        assert!(keys.iter().all(|z| z.re >= 0.0 && z.re <= 0.5 + 1.0 / 9.0 && z.im == 0.0));
    }

    #[test]
    fn differentiability_classes() {
        let p = DomainSpec::WholePlane;
        let class = |s: &str| FunctionSpec::expression(s, p.clone()).unwrap().differentiability();
        assert_eq!(class("exp(z)"), Differentiability::HolomorphicExpr);
        assert_eq!(class("re(z)^2"), Differentiability::RealSmoothExpr);
        assert_eq!(class("abs(z)"), Differentiability::NonSmooth);
        assert_eq!(tcdis_domain(2).unwrap().differentiability(), Differentiability::Table);
    }

    #[test]
    fn derivative_budget_limits_taylor() {
        let f = FunctionSpec::expression("exp(z)", DomainSpec::WholePlane)
            .unwrap()
            .with_derivative_budget(1);
        assert!(f.taylor(c(0.0, 0.0), 1).is_ok());
        assert!(matches!(f.taylor(c(0.0, 0.0), 2), Err(FuncError::NotDifferentiable(_))));
    }

    #[test]
    fn table_file_format() {
        let text = "# header\n0 0 1 0\n\n0.5 0 2 -1\n";
        let f = FunctionSpec::parse_table(text, vec![]).unwrap();
        assert_eq!(f.eval(c(0.5, 0.0)).unwrap(), c(2.0, -1.0));
        let err = FunctionSpec::parse_table("0 0 1\n", vec![]).unwrap_err();
        assert!(matches!(err, FuncError::TableFormat { line: 1, .. }));
        assert!(FunctionSpec::parse_table("0 0 1 0\n0 0 2 0\n", vec![]).is_err());
    }

    #[test]
    fn validation_sample_rejects_poles_in_domain() {
        let d = DomainSpec::finite_set(vec![c(1.0, 0.0), c(0.0, 0.0)], vec![]).unwrap();
        assert!(matches!(FunctionSpec::expression("1/z", d), Err(FuncError::DomainError(_))));
    }
}
