use std::fmt;

use num_complex::Complex64;

use super::FuncError;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Built-in unary functions of the expression language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Log,
    Sqrt,
    Conj,
    Re,
    Im,
    Abs,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::Exp,
        Func::Sin,
        Func::Cos,
        Func::Log,
        Func::Sqrt,
        Func::Conj,
        Func::Re,
        Func::Im,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Conj => "conj",
            Func::Re => "re",
            Func::Im => "im",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Complex-differentiable wherever defined.
    pub fn is_holomorphic(self) -> bool {
        !matches!(self, Func::Conj | Func::Re | Func::Im | Func::Abs)
    }

    pub fn apply(self, w: Complex64) -> Result<Complex64, FuncError> {
        let v = match self {
            Func::Exp => w.exp(),
            Func::Sin => w.sin(),
            Func::Cos => w.cos(),
            Func::Log => {
                if w == ZERO {
                    return Err(FuncError::UndefinedValue { func: "log", at: w });
                }
                on_cut_from_above(w).ln()
            }
            Func::Sqrt => {
                if w == ZERO {
                    return Err(FuncError::UndefinedValue { func: "sqrt", at: w });
                }
                on_cut_from_above(w).sqrt()
            }
            Func::Conj => w.conj(),
            Func::Re => Complex64::new(w.re, 0.0),
            Func::Im => Complex64::new(w.im, 0.0),
            Func::Abs => Complex64::new(w.norm(), 0.0),
        };
        Ok(v)
    }
}

/// Points on the negative real axis with a `-0.0` imaginary part are moved to
/// `+0.0`, so the principal branch takes its limit from above.
fn on_cut_from_above(w: Complex64) -> Complex64 {
    if w.im == 0.0 {
        Complex64::new(w.re, 0.0)
    } else {
        w
    }
}

/// Expression tree over the single variable `z`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    ImagUnit,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, z: Complex64) -> Result<Complex64, FuncError> {
        let v = match self {
            Expr::Const(c) => Complex64::new(*c, 0.0),
            Expr::Var => z,
            Expr::ImagUnit => Complex64::new(0.0, 1.0),
            Expr::Neg(a) => -a.eval(z)?,
            Expr::Add(a, b) => a.eval(z)? + b.eval(z)?,
            Expr::Sub(a, b) => a.eval(z)? - b.eval(z)?,
            Expr::Mul(a, b) => a.eval(z)? * b.eval(z)?,
            Expr::Div(a, b) => {
                let den = b.eval(z)?;
                if den == ZERO {
                    return Err(FuncError::DomainError(format!("pole: division by zero at z = {z}")));
                }
                a.eval(z)? / den
            }
            Expr::Pow(a, n) => a.eval(z)?.powu(*n),
            Expr::Call(f, a) => f.apply(a.eval(z)?)?,
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(FuncError::DomainError(format!("non-finite value at z = {z}")))
        }
    }

    /// True when no `conj`, `re`, `im` or `abs` node occurs.
    pub fn is_holomorphic(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var | Expr::ImagUnit => true,
            Expr::Neg(a) | Expr::Pow(a, _) => a.is_holomorphic(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_holomorphic() && b.is_holomorphic()
            }
            Expr::Call(f, a) => f.is_holomorphic() && a.is_holomorphic(),
        }
    }

    pub fn contains_func(&self, target: Func) -> bool {
        match self {
            Expr::Const(_) | Expr::Var | Expr::ImagUnit => false,
            Expr::Neg(a) | Expr::Pow(a, _) => a.contains_func(target),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.contains_func(target) || b.contains_func(target)
            }
            Expr::Call(f, a) => *f == target || a.contains_func(target),
        }
    }

    /// Symbolic derivative of the given order.
    pub fn derivative(&self, order: usize) -> Result<Expr, FuncError> {
        let mut e = self.clone();
        for _ in 0..order {
            e = e.d()?;
        }
        Ok(e)
    }

    fn d(&self) -> Result<Expr, FuncError> {
        Ok(match self {
            Expr::Const(_) | Expr::ImagUnit => Expr::Const(0.0),
            Expr::Var => Expr::Const(1.0),
            Expr::Neg(a) => neg(a.d()?),
            Expr::Add(a, b) => add(a.d()?, b.d()?),
            Expr::Sub(a, b) => sub(a.d()?, b.d()?),
            Expr::Mul(a, b) => add(mul(a.d()?, (**b).clone()), mul((**a).clone(), b.d()?)),
            Expr::Div(a, b) => div(
                sub(mul(a.d()?, (**b).clone()), mul((**a).clone(), b.d()?)),
                pow((**b).clone(), 2),
            ),
            Expr::Pow(a, n) => match *n {
                0 => Expr::Const(0.0),
                n => mul(mul(Expr::Const(n as f64), pow((**a).clone(), n - 1)), a.d()?),
            },
            Expr::Call(f, a) => {
                let inner = (**a).clone();
                let outer = match f {
                    Func::Exp => call(Func::Exp, inner),
                    Func::Sin => call(Func::Cos, inner),
                    Func::Cos => neg(call(Func::Sin, inner)),
                    Func::Log => div(Expr::Const(1.0), inner),
                    Func::Sqrt => div(Expr::Const(1.0), mul(Expr::Const(2.0), call(Func::Sqrt, inner))),
                    other => {
                        return Err(FuncError::NotDifferentiable(format!(
                            "'{}' is not complex-differentiable",
                            other.name()
                        )))
                    }
                };
                mul(outer, a.d()?)
            }
        })
    }
}

fn is_const(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Const(c) if *c == v)
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        a => Expr::Neg(Box::new(a)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
        (a, b) if is_const(&a, 0.0) => b,
        (a, b) if is_const(&b, 0.0) => a,
        (a, b) => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
        (a, b) if is_const(&b, 0.0) => a,
        (a, b) if is_const(&a, 0.0) => neg(b),
        (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
        (a, b) if is_const(&a, 0.0) || is_const(&b, 0.0) => Expr::Const(0.0),
        (a, b) if is_const(&a, 1.0) => b,
        (a, b) if is_const(&b, 1.0) => a,
        (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (a, _) if is_const(&a, 0.0) => Expr::Const(0.0),
        (a, b) if is_const(&b, 1.0) => a,
        (a, b) => Expr::Div(Box::new(a), Box::new(b)),
    }
}

fn pow(a: Expr, n: u32) -> Expr {
    match n {
        0 => Expr::Const(1.0),
        1 => a,
        n => match a {
            Expr::Const(c) if c.powi(n as i32).is_finite() => Expr::Const(c.powi(n as i32)),
            a => Expr::Pow(Box::new(a), n),
        },
    }
}

fn call(f: Func, a: Expr) -> Expr {
    Expr::Call(f, Box::new(a))
}

/// Fully parenthesized rendering; every composite node is wrapped so the
/// output reparses to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => write!(f, "(-{})", -c),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var => write!(f, "z"),
            Expr::ImagUnit => write!(f, "i"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, n) => write!(f, "({a}^{n})"),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspec::parse;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn derivative_examples() {
        let e = parse("exp(z)").unwrap();
        assert_eq!(e.derivative(1).unwrap(), e);
        let cube = parse("z^3").unwrap();
        assert_eq!(cube.derivative(2).unwrap().eval(c(2.0, 0.0)).unwrap(), c(12.0, 0.0));
        assert!(matches!(
            parse("abs(z)").unwrap().derivative(1),
            Err(FuncError::NotDifferentiable(_))
        ));
    }

    #[test]
    fn log_on_cut_uses_upper_limit() {
        let e = parse("log(z)").unwrap();
        let v = e.eval(c(-1.0, -0.0)).unwrap();
        assert!((v.im - std::f64::consts::PI).abs() < 1e-15);
        assert!(matches!(e.eval(c(0.0, 0.0)), Err(FuncError::UndefinedValue { .. })));
    }

    #[test]
    fn pole_is_domain_error() {
        let e = parse("1/(z-10)").unwrap();
        assert!(matches!(e.eval(c(10.0, 0.0)), Err(FuncError::DomainError(_))));
    }

    #[test]
    fn holomorphic_flag() {
        assert!(parse("exp(z)/(z-10) + sqrt(z)").unwrap().is_holomorphic());
        assert!(!parse("z*conj(z)").unwrap().is_holomorphic());
        assert!(parse("abs(z) + 1").unwrap().contains_func(Func::Abs));
    }
}
