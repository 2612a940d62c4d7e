use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::eval::{Env, Scalar};
use super::{Param, SymxError};

pub type Q = BigRational;

pub(crate) fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub(crate) fn q_ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// A polynomial variable: a parameter or a trigonometric atom. Exponentials
/// are not atoms here; every monomial carries at most one merged `exp`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Sym(Param),
    Sin(Arc<Poly>),
    Cos(Arc<Poly>),
}

impl Atom {
    pub fn argument(&self) -> Option<&Poly> {
        match self {
            Atom::Sym(_) => None,
            Atom::Sin(a) | Atom::Cos(a) => Some(a),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    factors: Vec<(Atom, u32)>,
    exp: Option<Arc<Poly>>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    /// Same atom powers with the exponential part replaced.
    pub fn with_exp(&self, exp: Option<&Poly>) -> Monomial {
        Monomial {
            factors: self.factors.clone(),
            exp: exp.filter(|e| !e.is_zero()).map(|e| Arc::new(e.clone())),
        }
    }

    pub fn atom(a: Atom) -> Monomial {
        Monomial {
            factors: vec![(a, 1)],
            exp: None,
        }
    }

    fn exponential(arg: Poly) -> Monomial {
        Monomial {
            factors: Vec::new(),
            exp: if arg.is_zero() {
                None
            } else {
                Some(Arc::new(arg))
            },
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.exp.is_none()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.factors
    }

    pub fn exponent(&self) -> Option<&Poly> {
        self.exp.as_deref()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, k)| k).sum()
    }

    pub fn power_of(&self, a: &Atom) -> u32 {
        self.factors
            .iter()
            .find(|(b, _)| b == a)
            .map_or(0, |(_, k)| *k)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, ka) = &self.factors[i];
            let (b, kb) = &other.factors[j];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    factors.push((a.clone(), *ka));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    factors.push((b.clone(), *kb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    factors.push((a.clone(), ka + kb));
                    i += 1;
                    j += 1;
                }
            }
        }
        factors.extend_from_slice(&self.factors[i..]);
        factors.extend_from_slice(&other.factors[j..]);
        let exp = match (&self.exp, &other.exp) {
            (None, None) => None,
            (Some(e), None) | (None, Some(e)) => Some(e.clone()),
            (Some(a), Some(b)) => {
                let s = a.add(b);
                if s.is_zero() {
                    None
                } else {
                    Some(Arc::new(s))
                }
            }
        };
        Monomial { factors, exp }
    }

    /// Exact quotient when every atom power of `other` is available; the
    /// exponential part always divides.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut factors = self.factors.clone();
        for (a, k) in &other.factors {
            let pos = factors.iter().position(|(b, _)| b == a)?;
            if factors[pos].1 < *k {
                return None;
            }
            factors[pos].1 -= k;
            if factors[pos].1 == 0 {
                factors.remove(pos);
            }
        }
        let exp = match (&self.exp, &other.exp) {
            (e, None) => e.clone(),
            (None, Some(b)) => Some(Arc::new(b.neg())),
            (Some(a), Some(b)) => {
                let s = a.sub(b);
                if s.is_zero() {
                    None
                } else {
                    Some(Arc::new(s))
                }
            }
        };
        Some(Monomial { factors, exp })
    }

    /// Common atom powers; the exponential parts are kept only when equal.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let factors = self
            .factors
            .iter()
            .filter_map(|(a, k)| {
                let m = (*k).min(other.power_of(a));
                (m > 0).then(|| (a.clone(), m))
            })
            .collect();
        let exp = if self.exp == other.exp {
            self.exp.clone()
        } else {
            None
        };
        Monomial { factors, exp }
    }

    /// Graded lexicographic order on atom powers, which is compatible with
    /// multiplication; exponentials only break ties.
    pub fn grlex(&self, other: &Monomial) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        let by_degree = self.degree().cmp(&other.degree());
        if by_degree != Equal {
            return by_degree;
        }
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, ka) = &self.factors[i];
            let (b, kb) = &other.factors[j];
            match a.cmp(b) {
                Less => return Greater,
                Greater => return Less,
                Equal => {
                    if ka != kb {
                        return ka.cmp(kb);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        match (i < self.factors.len(), j < other.factors.len()) {
            (true, false) => Greater,
            (false, true) => Less,
            _ => self.exp.cmp(&other.exp),
        }
    }

    fn without_exp(&self) -> Monomial {
        Monomial {
            factors: self.factors.clone(),
            exp: None,
        }
    }

    pub fn contains(&self, p: &Param) -> bool {
        self.factors.iter().any(|(a, _)| match a {
            Atom::Sym(s) => s == p,
            Atom::Sin(arg) | Atom::Cos(arg) => arg.contains(p),
        }) || self.exp.as_ref().is_some_and(|e| e.contains(p))
    }

    fn eval<T: Scalar>(&self, env: &dyn Env<T>) -> T {
        let mut acc: Option<T> = None;
        let mut push = |v: T| {
            acc = Some(match acc.take() {
                None => v,
                Some(a) => a * v,
            })
        };
        for (a, k) in &self.factors {
            let base = match a {
                Atom::Sym(p) => param_value(p, env),
                Atom::Sin(arg) => arg.eval(env).sin(),
                Atom::Cos(arg) => arg.eval(env).cos(),
            };
            push(base.powi(*k));
        }
        if let Some(e) = &self.exp {
            push(e.eval(env).exp());
        }
        acc.unwrap_or_else(|| T::cst(1.0))
    }
}

pub(crate) fn param_value<T: Scalar>(p: &Param, env: &dyn Env<T>) -> T {
    if p.is_pi() {
        T::cst(std::f64::consts::PI)
    } else {
        env.value(p)
    }
}

/// Sparse multivariate polynomial with rational coefficients, kept in
/// canonical form: no zero coefficients and no `sin` power above one.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Poly {
        Poly::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Poly {
        Poly::constant(q(n))
    }

    pub fn param(p: &Param) -> Poly {
        Poly::term(Monomial::atom(Atom::Sym(p.clone())), Q::one())
    }

    pub fn term(m: Monomial, c: Q) -> Poly {
        let mut p = Poly::zero();
        p.insert(m, c);
        p
    }

    fn insert(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_term(&self) -> Option<(&Monomial, &Q)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Greatest term in the canonical order; used for sign and scale choices.
    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Q) -> Poly {
        let mut out = Poly::zero();
        for (n, d) in &self.terms {
            out.insert(n.mul(m), d * c);
        }
        out.reduce_trig()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                out.insert(m.mul(n), c * d);
            }
        }
        out.reduce_trig()
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Rewrites every `sin(L)^k`, k ≥ 2, as `sin(L)^(k-2) (1 - cos(L)^2)`.
    fn reduce_trig(self) -> Poly {
        let needs = |m: &Monomial| {
            m.factors
                .iter()
                .any(|(a, k)| matches!(a, Atom::Sin(_)) && *k >= 2)
        };
        if !self.terms.keys().any(needs) {
            return self;
        }
        let mut out = Poly::zero();
        let mut work: Vec<(Monomial, Q)> = self.terms.into_iter().collect();
        while let Some((m, c)) = work.pop() {
            let hit = m
                .factors
                .iter()
                .position(|(a, k)| matches!(a, Atom::Sin(_)) && *k >= 2);
            let Some(i) = hit else {
                out.insert(m, c);
                continue;
            };
            let mut lowered = m.clone();
            lowered.factors[i].1 -= 2;
            let Atom::Sin(arg) = &m.factors[i].0 else {
                unreachable!()
            };
            if lowered.factors[i].1 == 0 {
                lowered.factors.remove(i);
            }
            let cos2 = Monomial {
                factors: vec![(Atom::Cos(arg.clone()), 2)],
                exp: None,
            };
            work.push((lowered.mul(&cos2), -c.clone()));
            work.push((lowered, c));
        }
        out
    }

    pub fn is_atom_free(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.exp.is_none() && m.factors.iter().all(|(a, _)| matches!(a, Atom::Sym(_))))
    }

    pub fn exp(arg: &Poly) -> Result<Poly, SymxError> {
        if !arg.is_atom_free() {
            return Err(SymxError::OutsideClass(format!("exp({arg})")));
        }
        Ok(Poly::term(Monomial::exponential(arg.clone()), Q::one()))
    }

    pub fn sin(arg: &Poly) -> Result<Poly, SymxError> {
        trig(false, arg)
    }

    pub fn cos(arg: &Poly) -> Result<Poly, SymxError> {
        trig(true, arg)
    }

    pub fn contains(&self, p: &Param) -> bool {
        self.terms.keys().any(|m| m.contains(p))
    }

    /// True when `p` occurs inside an exp/sin/cos argument.
    pub fn contains_in_atoms(&self, p: &Param) -> bool {
        self.terms.keys().any(|m| {
            m.exp.as_ref().is_some_and(|e| e.contains(p))
                || m.factors
                    .iter()
                    .any(|(a, _)| a.argument().is_some_and(|x| x.contains(p)))
        })
    }

    pub fn has_atoms(&self) -> bool {
        !self.is_atom_free()
    }

    pub fn collect_params(&self, out: &mut BTreeSet<Param>) {
        for m in self.terms.keys() {
            for (a, _) in &m.factors {
                match a {
                    Atom::Sym(p) => {
                        if !p.is_pi() {
                            out.insert(p.clone());
                        }
                    }
                    Atom::Sin(x) | Atom::Cos(x) => x.collect_params(out),
                }
            }
            if let Some(e) = &m.exp {
                e.collect_params(out);
            }
        }
    }

    pub fn params(&self) -> BTreeSet<Param> {
        let mut s = BTreeSet::new();
        self.collect_params(&mut s);
        s
    }

    pub fn derivative(&self, p: &Param) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if !m.contains(p) {
                continue;
            }
            for (i, (a, k)) in m.factors.iter().enumerate() {
                let inner = match a {
                    Atom::Sym(s) if s == p => Poly::one(),
                    Atom::Sym(_) => continue,
                    Atom::Sin(arg) => {
                        let d = arg.derivative(p);
                        if d.is_zero() {
                            continue;
                        }
                        Poly::term(Monomial::atom(Atom::Cos(arg.clone())), Q::one()).mul(&d)
                    }
                    Atom::Cos(arg) => {
                        let d = arg.derivative(p);
                        if d.is_zero() {
                            continue;
                        }
                        Poly::term(Monomial::atom(Atom::Sin(arg.clone())), -Q::one()).mul(&d)
                    }
                };
                let mut rest = m.clone();
                rest.factors[i].1 -= 1;
                if rest.factors[i].1 == 0 {
                    rest.factors.remove(i);
                }
                let coef = c * q(*k as i64);
                out = out.add(&inner.mul_term(&rest, &coef));
            }
            if let Some(e) = &m.exp {
                let d = e.derivative(p);
                if !d.is_zero() {
                    out = out.add(&d.mul_term(m, c));
                }
            }
        }
        out
    }

    /// Substitutes a polynomial for `p`. Arguments of atoms are rewritten and
    /// re-canonicalized.
    pub fn subst_poly(&self, p: &Param, v: &Poly) -> Result<Poly, SymxError> {
        if !self.contains(p) {
            return Ok(self.clone());
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            for (a, k) in &m.factors {
                let f = match a {
                    Atom::Sym(s) if s == p => v.clone(),
                    Atom::Sym(_) => Poly::term(Monomial::atom(a.clone()), Q::one()),
                    Atom::Sin(x) => Poly::sin(&x.subst_poly(p, v)?)?,
                    Atom::Cos(x) => Poly::cos(&x.subst_poly(p, v)?)?,
                };
                acc = acc.mul(&f.pow(*k));
            }
            if let Some(e) = &m.exp {
                acc = acc.mul(&Poly::exp(&e.subst_poly(p, v)?)?);
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    pub fn eval<T: Scalar>(&self, env: &dyn Env<T>) -> T {
        let mut acc: Option<T> = None;
        for (m, c) in &self.terms {
            let term = m.eval(env) * T::cst(q_to_f64(c));
            acc = Some(match acc {
                None => term,
                Some(a) => a + term,
            });
        }
        acc.unwrap_or_else(|| T::cst(0.0))
    }

    /// Value together with the sum of absolute term values, the natural
    /// scale for relative zero tests.
    pub fn eval_with_scale(&self, env: &dyn Env<f64>) -> (f64, f64) {
        let mut v = 0.0;
        let mut s = 0.0;
        for (m, c) in &self.terms {
            let t = m.eval(env) * q_to_f64(c);
            v += t;
            s += t.abs();
        }
        (v, s)
    }

    /// Polynomial coefficients in `p`, lowest degree first. Only meaningful
    /// when `p` does not occur inside atoms.
    pub fn coefficients_in(&self, p: &Param) -> Vec<Poly> {
        let atom = Atom::Sym(p.clone());
        let mut out: Vec<Poly> = Vec::new();
        for (m, c) in &self.terms {
            let k = m.power_of(&atom) as usize;
            let mut rest = m.clone();
            rest.factors.retain(|(a, _)| *a != atom);
            if out.len() <= k {
                out.resize(k + 1, Poly::zero());
            }
            out[k].insert(rest, c.clone());
        }
        out
    }

    /// Splits the terms by their exponential factor: returns pairs of
    /// (exponent, exp-free cofactor polynomial).
    pub fn split_by_exp(&self) -> Vec<(Option<Poly>, Poly)> {
        let mut groups: BTreeMap<Option<Poly>, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key = m.exp.as_deref().cloned();
            groups
                .entry(key)
                .or_default()
                .insert(m.without_exp(), c.clone());
        }
        groups.into_iter().collect()
    }

    /// Greatest common monomial of all terms (exponential only when shared).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |g, m| g.gcd(m))
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Poly> {
        let mut out = Poly::zero();
        for (n, c) in &self.terms {
            out.insert(n.div(m)?, c.clone());
        }
        Some(out)
    }

    fn grlex_leading(&self) -> Option<(Monomial, Q)> {
        self.terms
            .iter()
            .max_by(|a, b| a.0.grlex(b.0))
            .map(|(m, c)| (m.clone(), c.clone()))
    }

    /// Exact quotient by `d` if one exists, found by leading-term division
    /// and confirmed by multiplying back.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some((m, c)) = d.as_term() {
            let q = self.div_monomial(m)?;
            return Some(q.scale(&(Q::one() / c)));
        }
        let lead = |p: &Poly| p.grlex_leading();
        let (dm, dc) = lead(d)?;
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        let limit = 4 * (self.len() + 4) * (d.len() + 1);
        for _ in 0..limit {
            if rem.is_zero() {
                return (quot.mul(d) == *self).then_some(quot);
            }
            let (rm, rc) = lead(&rem)?;
            let tm = rm.div(&dm)?;
            let tc = rc / &dc;
            rem = rem.sub(&d.mul_term(&tm, &tc));
            quot.insert(tm, tc);
            if rem.len() > 8 * (self.len() + d.len()) + 64 {
                return None;
            }
        }
        None
    }

    /// Exact square root for polynomials that are perfect squares.
    pub fn sqrt_exact(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = self.as_constant() {
            return rational_sqrt(&c).map(Poly::constant);
        }
        let (lm, lc) = self.grlex_leading()?;
        let root_m = monomial_sqrt(&lm)?;
        let root_c = rational_sqrt(&lc)?;
        let mut root = Poly::term(root_m.clone(), root_c.clone());
        let two_lead = Poly::term(root_m, root_c * q(2));
        for _ in 0..(self.len() + 4) {
            let rem = self.sub(&root.mul(&root));
            if rem.is_zero() {
                return Some(root);
            }
            let (rm, rc) = rem.grlex_leading()?;
            let (tm, tc) = two_lead.as_term().unwrap();
            let m = rm.div(tm)?;
            root.insert(m, rc / tc);
        }
        None
    }
}

fn monomial_sqrt(m: &Monomial) -> Option<Monomial> {
    let mut factors = Vec::new();
    for (a, k) in &m.factors {
        if k % 2 != 0 {
            return None;
        }
        factors.push((a.clone(), k / 2));
    }
    let exp = m.exp.as_ref().map(|e| Arc::new(e.scale(&q_ratio(1, 2))));
    Some(Monomial { factors, exp })
}

fn rational_sqrt(c: &Q) -> Option<Q> {
    if c.is_negative() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    (&n * &n == *c.numer() && &d * &d == *c.denom()).then(|| Q::new(n, d))
}

pub(crate) fn q_to_f64(c: &Q) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

/// sin or cos of an atom-free argument, with exact evaluation at rational
/// multiples of π/2 and the parity rules applied to the argument sign.
fn trig(is_cos: bool, arg: &Poly) -> Result<Poly, SymxError> {
    if !arg.is_atom_free() {
        let name = if is_cos { "cos" } else { "sin" };
        return Err(SymxError::OutsideClass(format!("{name}({arg})")));
    }
    let pi_m = Monomial::atom(Atom::Sym(Param::pi()));
    // Arguments are split term by term so sums never sit inside one atom.
    let mut split = arg.terms.iter().filter(|(m, _)| **m != pi_m);
    if let (Some((m, c)), Some(_)) = (split.next(), split.next()) {
        let x = Poly::term(m.clone(), c.clone());
        let y = arg.sub(&x);
        let (sx, cx, sy, cy) = (
            trig(false, &x)?,
            trig(true, &x)?,
            trig(false, &y)?,
            trig(true, &y)?,
        );
        return Ok(if is_cos {
            cx.mul(&cy).sub(&sx.mul(&sy))
        } else {
            sx.mul(&cy).add(&cx.mul(&sy))
        });
    }
    let pi_c = arg.terms.get(&pi_m).cloned().unwrap_or_else(Q::zero);
    let two = q(2);
    let reduced = &pi_c - (&pi_c / &two).floor() * &two;
    let half_steps = &reduced * &two;
    if !half_steps.is_integer() {
        let mut rest = arg.clone();
        rest.terms.remove(&pi_m);
        rest.insert(pi_m, reduced);
        let a = if is_cos {
            Atom::Cos(Arc::new(rest))
        } else {
            Atom::Sin(Arc::new(rest))
        };
        return Ok(Poly::term(Monomial::atom(a), Q::one()));
    }
    let mut base = arg.clone();
    base.terms.remove(&pi_m);
    let h = half_steps.to_integer().mod_floor(&BigInt::from(4));
    let h = h.to_i64().unwrap_or(0);
    // Shift by hπ/2: sin → (sin, cos, -sin, -cos), cos → (cos, -sin, -cos, sin).
    let (use_cos, negate) = if is_cos {
        [(true, false), (false, true), (true, true), (false, false)][h as usize]
    } else {
        [(false, false), (true, false), (false, true), (true, true)][h as usize]
    };
    let mut sign = if negate { -Q::one() } else { Q::one() };
    if base.is_zero() {
        return Ok(if use_cos {
            Poly::constant(sign)
        } else {
            Poly::zero()
        });
    }
    if base.leading().is_some_and(|(_, c)| c.is_negative()) {
        base = base.neg();
        if !use_cos {
            sign = -sign;
        }
    }
    let base = Arc::new(base);
    let a = if use_cos {
        Atom::Cos(base)
    } else {
        Atom::Sin(base)
    };
    Ok(Poly::term(Monomial::atom(a), sign))
}

fn fmt_q(c: &Q, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Sym(p) => write!(f, "{p}"),
            Atom::Sin(a) => write!(f, "sin({a})"),
            Atom::Cos(a) => write!(f, "cos({a})"),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, k) in &self.factors {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if *k == 1 {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}^{k}")?;
            }
        }
        if let Some(e) = &self.exp {
            if !first {
                f.write_str("*")?;
            }
            write!(f, "exp({e})")?;
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                fmt_q(&mag, f)?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                fmt_q(&mag, f)?;
                write!(f, "*{m}")?;
            }
        }
        Ok(())
    }
}
