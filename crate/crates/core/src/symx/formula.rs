use std::collections::BTreeSet;
use std::fmt;

use super::eval::{Env, Scalar};
use super::{Expr, Param};

/// Closed-form value that may leave the expression class: logarithms,
/// arctangents and square roots produced by the solver. Formulas are only
/// ever evaluated numerically.
#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    Expr(Expr),
    Add(Box<Formula>, Box<Formula>),
    Sub(Box<Formula>, Box<Formula>),
    Mul(Box<Formula>, Box<Formula>),
    Div(Box<Formula>, Box<Formula>),
    Neg(Box<Formula>),
    Exp(Box<Formula>),
    Ln(Box<Formula>),
    Sin(Box<Formula>),
    Cos(Box<Formula>),
    Sqrt(Box<Formula>),
    Atan(Box<Formula>),
    Acos(Box<Formula>),
    Abs(Box<Formula>),
    /// Angle of the point `(x, y)`, stored as `(y, x)`.
    Atan2(Box<Formula>, Box<Formula>),
    /// `body` evaluated with `param` bound to `value`.
    Let {
        param: Param,
        value: Box<Formula>,
        body: Box<Formula>,
    },
}

struct Bound<'a, T> {
    parent: &'a dyn Env<T>,
    param: &'a Param,
    value: T,
}

impl<T: Scalar> Env<T> for Bound<'_, T> {
    fn value(&self, p: &Param) -> T {
        if p == self.param {
            self.value.clone()
        } else {
            self.parent.value(p)
        }
    }
}

impl From<Expr> for Formula {
    fn from(e: Expr) -> Formula {
        Formula::Expr(e)
    }
}

impl Formula {
    pub fn as_expr(&self) -> Option<&Expr> {
        match self {
            Formula::Expr(e) => Some(e),
            _ => None,
        }
    }

    pub fn bind(param: &Param, value: Formula, body: Formula) -> Formula {
        Formula::Let {
            param: param.clone(),
            value: Box::new(value),
            body: Box::new(body),
        }
    }

    pub fn eval<T: Scalar>(&self, env: &dyn Env<T>) -> T {
        use Formula::*;
        match self {
            Expr(e) => e.eval(env),
            Add(a, b) => a.eval(env) + b.eval(env),
            Sub(a, b) => a.eval(env) - b.eval(env),
            Mul(a, b) => a.eval(env) * b.eval(env),
            Div(a, b) => a.eval(env) / b.eval(env),
            Neg(a) => -a.eval(env),
            Exp(a) => a.eval(env).exp(),
            Ln(a) => a.eval(env).ln(),
            Sin(a) => a.eval(env).sin(),
            Cos(a) => a.eval(env).cos(),
            Sqrt(a) => a.eval(env).sqrt(),
            Atan(a) => a.eval(env).atan(),
            Acos(a) => a.eval(env).acos(),
            Abs(a) => a.eval(env).abs(),
            Atan2(y, x) => y.eval(env).atan2(&x.eval(env)),
            Let { param, value, body } => {
                let v = value.eval(env);
                let inner = Bound {
                    parent: env,
                    param,
                    value: v,
                };
                body.eval(&inner)
            }
        }
    }

    pub fn params(&self) -> BTreeSet<Param> {
        use Formula::*;
        match self {
            Expr(e) => e.params(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Atan2(a, b) => {
                let mut s = a.params();
                s.extend(b.params());
                s
            }
            Neg(a) | Exp(a) | Ln(a) | Sin(a) | Cos(a) | Sqrt(a) | Atan(a) | Acos(a) | Abs(a) => {
                a.params()
            }
            Let { param, value, body } => {
                let mut s = body.params();
                s.remove(param);
                s.extend(value.params());
                s
            }
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $v:ident) => {
        impl std::ops::$tr for Formula {
            type Output = Formula;
            fn $m(self, o: Formula) -> Formula {
                Formula::$v(Box::new(self), Box::new(o))
            }
        }
    };
}
binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl std::ops::Neg for Formula {
    type Output = Formula;
    fn neg(self) -> Formula {
        Formula::Neg(Box::new(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            Expr(e) => write!(f, "{e}"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "({a})*({b})"),
            Div(a, b) => write!(f, "({a})/({b})"),
            Neg(a) => write!(f, "-({a})"),
            Exp(a) => write!(f, "exp({a})"),
            Ln(a) => write!(f, "log({a})"),
            Sin(a) => write!(f, "sin({a})"),
            Cos(a) => write!(f, "cos({a})"),
            Sqrt(a) => write!(f, "sqrt({a})"),
            Atan(a) => write!(f, "atan({a})"),
            Acos(a) => write!(f, "acos({a})"),
            Abs(a) => write!(f, "abs({a})"),
            Atan2(y, x) => write!(f, "atan2({y}, {x})"),
            Let { param, value, body } => write!(f, "{body} where {param} = {value}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
            Cmp::Eq => "==",
            Cmp::Ne => "!=",
        }
    }
}

/// A comparison between two formulas, used for parameter constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct Predicate {
    pub lhs: Formula,
    pub op: Cmp,
    pub rhs: Formula,
}

impl Predicate {
    pub fn new(lhs: Formula, op: Cmp, rhs: Formula) -> Predicate {
        Predicate { lhs, op, rhs }
    }

    pub fn params(&self) -> BTreeSet<Param> {
        let mut s = self.lhs.params();
        s.extend(self.rhs.params());
        s
    }

    /// Strict comparisons keep a small margin so sampled points stay away
    /// from excluded boundaries.
    pub fn holds(&self, env: &dyn Env<f64>) -> bool {
        let d = self.lhs.eval(env) - self.rhs.eval(env);
        let eps = 1e-3;
        match self.op {
            Cmp::Lt => d < -eps,
            Cmp::Le => d <= 0.0,
            Cmp::Gt => d > eps,
            Cmp::Ge => d >= 0.0,
            Cmp::Eq => d.abs() < 1e-12,
            Cmp::Ne => d.abs() > eps,
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op.symbol(), self.rhs)
    }
}
