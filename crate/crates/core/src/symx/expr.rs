use std::collections::BTreeSet;
use std::fmt;
use std::ops;

use num_traits::{One, Signed, Zero};

use super::eval::{Env, Sampler, Scalar};
use super::poly::{Poly, Q};
use super::{Param, SymxError};

/// Quotient of two canonical polynomials.
///
/// Construction always normalizes: common monomial factors are cancelled,
/// exponentials shared by every denominator term move to the numerator, the
/// denominator's leading coefficient is one, and exact polynomial quotients
/// are carried out.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr {
    num: Poly,
    den: Poly,
}

const ZERO_SAMPLES: usize = 8;

impl Expr {
    pub fn zero() -> Expr {
        Expr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn int(n: i64) -> Expr {
        Expr::from_poly(Poly::int(n))
    }

    pub fn rational(c: Q) -> Expr {
        Expr::from_poly(Poly::constant(c))
    }

    pub fn ratio(n: i64, d: i64) -> Expr {
        Expr::rational(super::poly::q_ratio(n, d))
    }

    pub fn param(p: &Param) -> Expr {
        Expr::from_poly(Poly::param(p))
    }

    pub fn pi() -> Expr {
        Expr::param(&Param::pi())
    }

    pub fn from_poly(num: Poly) -> Expr {
        Expr {
            num,
            den: Poly::one(),
        }
    }

    pub fn new(num: Poly, den: Poly) -> Result<Expr, SymxError> {
        if den.is_zero() {
            return Err(SymxError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Expr::zero());
        }
        let (mut num, mut den) = (num, den);
        let dc = den.monomial_content();
        let nc = num.monomial_content();
        let shared = nc.with_exp(None).gcd(&dc.with_exp(None));
        let shift = shared.with_exp(dc.exponent());
        if !shift.is_one() {
            num = num
                .div_monomial(&shift)
                .expect("exponentials always divide");
            den = den.div_monomial(&shift).expect("content divides");
        }
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap();
        if !lc.is_one() {
            let inv = Q::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        if den.len() > 1 {
            if let Some(qt) = num.div_exact(&den) {
                return Ok(Expr::from_poly(qt));
            }
            if num.len() > 1 {
                if let Some(qt) = den.div_exact(&num) {
                    return Expr::new(Poly::one(), qt);
                }
            }
        }
        Ok(Expr { num, den })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den == Poly::one()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.is_polynomial() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_literal_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn has_atoms(&self) -> bool {
        self.num.has_atoms() || self.den.has_atoms()
    }

    /// Re-runs canonicalization; the identity on values built by this type.
    pub fn normalize(&self) -> Expr {
        Expr::new(self.num.clone(), self.den.clone()).expect("canonical denominators are nonzero")
    }

    pub fn add(&self, o: &Expr) -> Expr {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        let r = if self.den == o.den {
            Expr::new(self.num.add(&o.num), self.den.clone())
        } else {
            Expr::new(
                self.num.mul(&o.den).add(&o.num.mul(&self.den)),
                self.den.mul(&o.den),
            )
        };
        r.expect("product of nonzero denominators")
    }

    pub fn sub(&self, o: &Expr) -> Expr {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Expr {
        Expr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Expr) -> Expr {
        if self.num.is_zero() || o.num.is_zero() {
            return Expr::zero();
        }
        if self.is_polynomial() && o.is_polynomial() {
            return Expr::from_poly(self.num.mul(&o.num));
        }
        Expr::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn try_div(&self, o: &Expr) -> Result<Expr, SymxError> {
        if o.num.is_zero() {
            return Err(SymxError::ZeroDenominator);
        }
        Expr::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn pow(&self, k: u32) -> Expr {
        Expr {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
        .normalize()
    }

    pub fn scale(&self, c: &Q) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    fn atom_argument(&self, what: &str) -> Result<&Poly, SymxError> {
        if self.is_polynomial() && !self.num.has_atoms() {
            Ok(&self.num)
        } else {
            Err(SymxError::OutsideClass(format!("{what}({self})")))
        }
    }

    pub fn exp(&self) -> Result<Expr, SymxError> {
        Ok(Expr::from_poly(Poly::exp(self.atom_argument("exp")?)?))
    }

    pub fn sin(&self) -> Result<Expr, SymxError> {
        Ok(Expr::from_poly(Poly::sin(self.atom_argument("sin")?)?))
    }

    pub fn cos(&self) -> Result<Expr, SymxError> {
        Ok(Expr::from_poly(Poly::cos(self.atom_argument("cos")?)?))
    }

    pub fn contains(&self, p: &Param) -> bool {
        self.num.contains(p) || self.den.contains(p)
    }

    pub fn contains_in_atoms(&self, p: &Param) -> bool {
        self.num.contains_in_atoms(p) || self.den.contains_in_atoms(p)
    }

    /// Free parameters, excluding the constant π.
    pub fn params(&self) -> BTreeSet<Param> {
        let mut s = BTreeSet::new();
        self.num.collect_params(&mut s);
        self.den.collect_params(&mut s);
        s
    }

    /// Symbolic zero test backed by numeric evaluation of the numerator at
    /// pseudo-random points.
    pub fn zero_test(&self) -> Result<bool, SymxError> {
        if self.num.is_zero() {
            return Ok(true);
        }
        let params = self.num.params();
        let sampler = Sampler::global();
        for i in 0..ZERO_SAMPLES {
            let env = sampler.point(&params, i);
            let (v, scale) = self.num.eval_with_scale(&env);
            if v.abs().is_nan() || v.abs() > 1e-10 * scale {
                return Ok(false);
            }
        }
        Err(SymxError::ZeroTestDisagreement(self.to_string()))
    }

    /// Panics on a zero-test disagreement, which signals a missed identity in
    /// the normal form rather than a recoverable condition.
    pub fn is_zero(&self) -> bool {
        match self.zero_test() {
            Ok(z) => z,
            Err(e) => panic!("internal error: {e}"),
        }
    }

    pub fn differentiate(&self, p: &Param) -> Expr {
        let dn = self.num.derivative(p);
        if self.is_polynomial() {
            return Expr::from_poly(dn);
        }
        let dd = self.den.derivative(p);
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Expr::new(num, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    /// Replaces `p` by `v`. Returns `None` when the result would leave the
    /// expression class (a non-polynomial value inside an atom argument) or
    /// when the denominator vanishes identically.
    pub fn substitute(&self, p: &Param, v: &Expr) -> Option<Expr> {
        if !self.contains(p) {
            return Some(self.clone());
        }
        let num = subst_poly(&self.num, p, v)?;
        let den = subst_poly(&self.den, p, v)?;
        num.try_div(&den).ok()
    }

    /// Replaces `p` by `ln(x)/slope`, which keeps the expression class when
    /// `p` only occurs in exponentials `exp(c·p + ρ)` with `c/slope` an
    /// integer: each becomes `exp(ρ)·x^(c/slope)`.
    pub fn substitute_log(&self, p: &Param, x: &Expr, slope: &Q) -> Option<Expr> {
        if !self.contains(p) {
            return Some(self.clone());
        }
        if slope.is_zero() || x.is_literal_zero() {
            return None;
        }
        let num = log_subst_poly(&self.num, p, x, slope)?;
        let den = log_subst_poly(&self.den, p, x, slope)?;
        num.try_div(&den).ok()
    }

    pub fn eval<T: Scalar>(&self, env: &dyn Env<T>) -> T {
        let n = self.num.eval(env);
        if self.is_polynomial() {
            n
        } else {
            n / self.den.eval(env)
        }
    }
}

fn log_subst_poly(poly: &Poly, p: &Param, x: &Expr, slope: &Q) -> Option<Expr> {
    let mut acc = Expr::zero();
    for (exp, cof) in poly.split_by_exp() {
        if cof.contains(p) {
            return None;
        }
        let mut term = Expr::from_poly(cof);
        if let Some(e) = exp {
            if e.has_atoms() {
                return None;
            }
            let k = e.coefficients_in(p);
            if k.len() > 2 {
                return None;
            }
            let rest = k.first().cloned().unwrap_or_else(Poly::zero);
            term = term.mul(&Expr::from_poly(Poly::exp(&rest).ok()?));
            if let Some(c) = k.get(1) {
                let n = c.as_constant()? / slope;
                if !n.is_integer() {
                    return None;
                }
                let n = n.to_integer();
                let power = x.pow(u32::try_from(n.magnitude()).ok()?);
                term = if n.is_negative() {
                    term.try_div(&power).ok()?
                } else {
                    term.mul(&power)
                };
            }
        }
        acc = acc.add(&term);
    }
    Some(acc)
}

fn subst_poly(poly: &Poly, p: &Param, v: &Expr) -> Option<Expr> {
    if !poly.contains(p) {
        return Some(Expr::from_poly(poly.clone()));
    }
    if v.is_polynomial() {
        return poly.subst_poly(p, &v.num).ok().map(Expr::from_poly);
    }
    if poly.contains_in_atoms(p) {
        return None;
    }
    let coeffs = poly.coefficients_in(p);
    let mut acc = Expr::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(v).add(&Expr::from_poly(c.clone()));
    }
    Some(acc)
}

impl From<Poly> for Expr {
    fn from(p: Poly) -> Expr {
        Expr::from_poly(p)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<&Param> for Expr {
    fn from(p: &Param) -> Expr {
        Expr::param(p)
    }
}

macro_rules! expr_op {
    ($tr:ident, $m:ident, $body:expr) => {
        impl ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, o: &Expr) -> Expr {
                $body(self, o)
            }
        }
        impl ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                $body(&self, &o)
            }
        }
        impl ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, o: &Expr) -> Expr {
                $body(&self, o)
            }
        }
        impl ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                $body(self, &o)
            }
        }
    };
}

expr_op!(Add, add, |a: &Expr, b: &Expr| a.add(b));
expr_op!(Sub, sub, |a: &Expr, b: &Expr| a.sub(b));
expr_op!(Mul, mul, |a: &Expr, b: &Expr| a.mul(b));
expr_op!(Div, div, |a: &Expr, b: &Expr| a
    .try_div(b)
    .expect("division by zero expression"));

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            let wrap = |p: &Poly| {
                if p.len() > 1 {
                    format!("({p})")
                } else {
                    p.to_string()
                }
            };
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}
