//! Truncated Taylor arithmetic: `taylor(e, a, m)` returns
//! `[e(a), e'(a), e''(a)/2!, ..., e^(m)(a)/m!]` without building derivative trees.

use num_complex::Complex64;

use super::expr::{Expr, Func};
use super::FuncError;

type Jet = Vec<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn taylor(e: &Expr, a: Complex64, order: usize) -> Result<Jet, FuncError> {
    if order == 0 {
        return Ok(vec![e.eval(a)?]);
    }
    let j = jet(e, a, order + 1)?;
    if j.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        Ok(j)
    } else {
        Err(FuncError::DomainError(format!("non-finite Taylor coefficient at z = {a}")))
    }
}

fn constant(c: Complex64, len: usize) -> Jet {
    let mut v = vec![ZERO; len];
    v[0] = c;
    v
}

fn mul(a: &[Complex64], b: &[Complex64]) -> Jet {
    let n = a.len();
    (0..n).map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum()).collect()
}

fn powu(a: &[Complex64], mut n: u32) -> Jet {
    let mut acc = constant(Complex64::new(1.0, 0.0), a.len());
    let mut base = a.to_vec();
    while n > 0 {
        if n & 1 == 1 {
            acc = mul(&acc, &base);
        }
        n >>= 1;
        if n > 0 {
            base = mul(&base, &base);
        }
    }
    acc
}

fn jet(e: &Expr, a: Complex64, len: usize) -> Result<Jet, FuncError> {
    Ok(match e {
        Expr::Const(c) => constant(Complex64::new(*c, 0.0), len),
        Expr::ImagUnit => constant(Complex64::new(0.0, 1.0), len),
        Expr::Var => {
            let mut v = constant(a, len);
            if len > 1 {
                v[1] = Complex64::new(1.0, 0.0);
            }
            v
        }
        Expr::Neg(x) => jet(x, a, len)?.into_iter().map(|c| -c).collect(),
        Expr::Add(x, y) => {
            let (x, y) = (jet(x, a, len)?, jet(y, a, len)?);
            x.iter().zip(&y).map(|(p, q)| p + q).collect()
        }
        Expr::Sub(x, y) => {
            let (x, y) = (jet(x, a, len)?, jet(y, a, len)?);
            x.iter().zip(&y).map(|(p, q)| p - q).collect()
        }
        Expr::Mul(x, y) => mul(&jet(x, a, len)?, &jet(y, a, len)?),
        Expr::Div(x, y) => {
            let (x, y) = (jet(x, a, len)?, jet(y, a, len)?);
            if y[0] == ZERO {
                return Err(FuncError::DomainError(format!("pole: division by zero at z = {a}")));
            }
            let mut q = vec![ZERO; len];
            for k in 0..len {
                let s: Complex64 = (1..=k).map(|j| y[j] * q[k - j]).sum();
                q[k] = (x[k] - s) / y[0];
            }
            q
        }
        Expr::Pow(x, n) => powu(&jet(x, a, len)?, *n),
        Expr::Call(f, x) => {
            let u = jet(x, a, len)?;
            let u0 = u[0];
            match f {
                Func::Exp => {
                    let mut r = vec![ZERO; len];
                    r[0] = u0.exp();
                    for k in 1..len {
                        let s: Complex64 = (1..=k).map(|j| u[j] * r[k - j] * j as f64).sum();
                        r[k] = s / k as f64;
                    }
                    r
                }
                Func::Sin | Func::Cos => {
                    let mut s = vec![ZERO; len];
                    let mut c = vec![ZERO; len];
                    s[0] = u0.sin();
                    c[0] = u0.cos();
                    for k in 1..len {
                        let ds: Complex64 = (1..=k).map(|j| u[j] * c[k - j] * j as f64).sum();
                        let dc: Complex64 = (1..=k).map(|j| u[j] * s[k - j] * j as f64).sum();
                        s[k] = ds / k as f64;
                        c[k] = -dc / k as f64;
                    }
                    if *f == Func::Sin {
                        s
                    } else {
                        c
                    }
                }
                Func::Log => {
                    let mut l = vec![ZERO; len];
                    l[0] = f.apply(u0)?;
                    for k in 1..len {
                        let s: Complex64 = (1..k).map(|j| l[j] * u[k - j] * j as f64).sum();
                        l[k] = (u[k] - s / k as f64) / u0;
                    }
                    l
                }
                Func::Sqrt => {
                    let mut r = vec![ZERO; len];
                    r[0] = f.apply(u0)?;
                    for k in 1..len {
                        let s: Complex64 = (1..k).map(|j| r[j] * r[k - j]).sum();
                        r[k] = (u[k] - s) / (r[0] * 2.0);
                    }
                    r
                }
                other => {
                    if len > 1 {
                        return Err(FuncError::NotDifferentiable(format!(
                            "'{}' is not complex-differentiable",
                            other.name()
                        )));
                    }
                    vec![other.apply(u0)?]
                }
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspec::parse;

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|x| x as f64).product()
    }

    #[test]
    fn exp_coefficients() {
        let e = parse("exp(z)").unwrap();
        let a = Complex64::new(1.0, 0.0);
        let t = taylor(&e, a, 4).unwrap();
        for (j, c) in t.iter().enumerate() {
            assert!((c - a.exp() / factorial(j)).norm() < 1e-14);
        }
    }

    #[test]
    fn agrees_with_symbolic_derivatives() {
        let corpus = ["sin(z)*exp(2*z)", "1/(z-10)", "log(z+3)", "sqrt(z+2)^3", "cos(z^2)/(z+4)", "z^5 - 3*z"];
        let a = Complex64::new(0.3, -0.2);
        for text in corpus {
            let e = parse(text).unwrap();
            let t = taylor(&e, a, 4).unwrap();
            for (j, c) in t.iter().enumerate() {
                let d = e.derivative(j).unwrap().eval(a).unwrap() / factorial(j);
                assert!((c - d).norm() <= 1e-12 * (1.0 + d.norm()), "{text} order {j}: {c} vs {d}");
            }
        }
    }

    #[test]
    fn non_holomorphic_only_at_order_zero() {
        let e = parse("abs(z)").unwrap();
        assert_eq!(taylor(&e, Complex64::new(-2.0, 0.0), 0).unwrap()[0], Complex64::new(2.0, 0.0));
        assert!(matches!(
            taylor(&e, Complex64::new(-2.0, 0.0), 1),
            Err(FuncError::NotDifferentiable(_))
        ));
    }
}
