use std::collections::BTreeMap;

use num_traits::Signed;

use super::poly::{Atom, Monomial, Poly};
use super::{Expr, Formula, Param, ParamKind};

/// Side condition attached to a root.
#[derive(Debug, Clone, PartialEq)]
pub enum Condition {
    /// A denominator or leading coefficient that must not vanish.
    NonZero(Expr),
    /// `value > 0`; `proven` records whether the sign is settled symbolically.
    Positive { value: Expr, proven: bool },
    /// `value ≥ 0`.
    NonNegative { value: Expr, proven: bool },
}

impl Condition {
    /// Sign conditions that were not settled restrict the root to part of
    /// the parameter space.
    pub fn is_settled(&self) -> bool {
        match self {
            Condition::NonZero(_) => true,
            Condition::Positive { proven, .. } | Condition::NonNegative { proven, .. } => *proven,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub param: Param,
    pub value: Formula,
    pub validity: Vec<Condition>,
}

impl Solution {
    fn exact(param: &Param, value: Expr, validity: Vec<Condition>) -> Solution {
        Solution {
            param: param.clone(),
            value: Formula::Expr(value),
            validity,
        }
    }

    /// The value when it lies in the expression class.
    pub fn exact_value(&self) -> Option<&Expr> {
        self.value.as_expr()
    }

    pub fn is_conditional(&self) -> bool {
        self.validity.iter().any(|c| !c.is_settled())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    Roots(Vec<Solution>),
    /// The equation is not of a recognized shape; no root is claimed.
    Unsupported,
}

impl SolveOutcome {
    pub fn roots(&self) -> &[Solution] {
        match self {
            SolveOutcome::Roots(r) => r,
            SolveOutcome::Unsupported => &[],
        }
    }
}

/// Real closed-form roots of `e = 0` in `p`.
///
/// Recognized shapes, after removing factors that never vanish: polynomials
/// of degree at most two, `A·exp(γ₁p) + B·exp(γ₂p)`, and
/// `α·cos(θ) + β·sin(θ) + δ` with `θ` linear in `p`. Trigonometric equations
/// yield a principal root and its shift by half a period.
pub fn solve_for(e: &Expr, p: &Param) -> SolveOutcome {
    let num = e.num();
    if !num.contains(p) {
        return SolveOutcome::Roots(Vec::new());
    }
    let mut base = Vec::new();
    if !e.is_polynomial() {
        base.push(Condition::NonZero(Expr::from_poly(e.den().clone())));
    }
    let content = num.monomial_content();
    let mut sols = Vec::new();
    for (a, _) in content.factors() {
        match a {
            Atom::Sym(s) if s == p => sols.push(Solution::exact(p, Expr::zero(), base.clone())),
            Atom::Sin(arg) | Atom::Cos(arg) if arg.contains(p) => {
                let Some((g, r)) = linear(arg, p) else {
                    return SolveOutcome::Unsupported;
                };
                let thetas = if matches!(a, Atom::Sin(_)) {
                    [Expr::zero(), Expr::pi()]
                } else {
                    [
                        Expr::pi() * Expr::ratio(1, 2),
                        Expr::pi() * Expr::ratio(-1, 2),
                    ]
                };
                for th in thetas {
                    sols.push(Solution::exact(p, (th - &r) / &g, base.clone()));
                }
            }
            _ => {}
        }
    }
    let rest = num.div_monomial(&content).expect("content divides");
    match cofactor_roots(&rest, p, &base) {
        Some(more) => sols.extend(more),
        None => return SolveOutcome::Unsupported,
    }
    let mut unique: Vec<Solution> = Vec::new();
    for s in sols {
        if !unique.iter().any(|u| u.value == s.value) {
            unique.push(s);
        }
    }
    SolveOutcome::Roots(unique)
}

/// Splits an atom-free argument as `γ·p + ρ`.
fn linear(arg: &Poly, p: &Param) -> Option<(Expr, Expr)> {
    if arg.has_atoms() {
        return None;
    }
    let c = arg.coefficients_in(p);
    match c.len() {
        0 | 1 => None,
        2 => Some((Expr::from_poly(c[1].clone()), Expr::from_poly(c[0].clone()))),
        _ => None,
    }
}

fn cofactor_roots(r: &Poly, p: &Param, base: &[Condition]) -> Option<Vec<Solution>> {
    if !r.contains(p) {
        return Some(Vec::new());
    }
    if !r.contains_in_atoms(p) {
        return polynomial_roots(r, p, base);
    }
    let has_trig = r.terms().any(|(m, _)| {
        m.factors()
            .iter()
            .any(|(a, _)| a.argument().is_some_and(|x| x.contains(p)))
    });
    // Group terms by the slope of their exponential in p.
    let mut buckets: BTreeMap<Poly, Poly> = BTreeMap::new();
    for (m, c) in r.terms() {
        let (slope, offset) = match m.exponent() {
            None => (Poly::zero(), Poly::zero()),
            Some(e) => {
                let k = e.coefficients_in(p);
                if k.len() > 2 || e.has_atoms() {
                    return None;
                }
                let slope = k.get(1).cloned().unwrap_or_default();
                (slope, k[0].clone())
            }
        };
        let unit = Poly::term(m.with_exp(None), c.clone());
        let term = unit.mul(&Poly::exp(&offset).ok()?);
        let b = buckets.entry(slope).or_default();
        *b = b.add(&term);
    }
    if has_trig {
        if buckets.len() != 1 {
            return None;
        }
        let (_, rest) = buckets.into_iter().next().unwrap();
        return trig_roots(&rest, p, base);
    }
    if buckets.values().any(|b| b.contains(p)) {
        return None;
    }
    match buckets.len() {
        1 => Some(Vec::new()),
        2 => {
            let mut it = buckets.into_iter();
            let (g1, a) = it.next().unwrap();
            let (g2, b) = it.next().unwrap();
            let (a, b) = (Expr::from_poly(a), Expr::from_poly(b));
            let ratio = -(&a / &b);
            if provably_positive(&-ratio.clone()) {
                return Some(Vec::new());
            }
            let proven = provably_positive(&ratio);
            let slope = Expr::from_poly(g2.sub(&g1));
            let mut validity = base.to_vec();
            validity.push(Condition::NonZero(b));
            validity.push(Condition::Positive {
                value: ratio.clone(),
                proven,
            });
            Some(vec![Solution {
                param: p.clone(),
                value: Formula::Ln(Box::new(Formula::Expr(ratio))) / Formula::Expr(slope),
                validity,
            }])
        }
        _ => None,
    }
}

fn polynomial_roots(r: &Poly, p: &Param, base: &[Condition]) -> Option<Vec<Solution>> {
    let c: Vec<Expr> = r
        .coefficients_in(p)
        .into_iter()
        .map(Expr::from_poly)
        .collect();
    let with = |extra: Vec<Condition>| {
        let mut v = base.to_vec();
        v.extend(extra);
        v
    };
    let nonzero = |e: &Expr| {
        if e.as_constant().is_some() {
            Vec::new()
        } else {
            vec![Condition::NonZero(e.clone())]
        }
    };
    match c.len() {
        0 | 1 => Some(Vec::new()),
        2 => Some(vec![Solution::exact(
            p,
            -(&c[0] / &c[1]),
            with(nonzero(&c[1])),
        )]),
        3 => {
            let (c0, c1, c2) = (&c[0], &c[1], &c[2]);
            let disc = c1 * c1 - Expr::int(4) * c2 * c0;
            let two_a = Expr::int(2) * c2;
            let cond = with(nonzero(c2));
            if disc.is_polynomial() {
                if let Some(s) = disc.num().sqrt_exact() {
                    let s = Expr::from_poly(s);
                    let mut out = vec![Solution::exact(p, (-c1 + &s) / &two_a, cond.clone())];
                    if !s.is_literal_zero() {
                        out.push(Solution::exact(p, (-c1 - &s) / &two_a, cond));
                    }
                    return Some(out);
                }
            }
            if provably_positive(&-disc.clone()) {
                return Some(Vec::new());
            }
            let proven = provably_nonnegative(&disc);
            let mut cond = cond;
            cond.push(Condition::NonNegative {
                value: disc.clone(),
                proven,
            });
            let root = Formula::Sqrt(Box::new(Formula::Expr(disc)));
            let make = |sign: Formula| Solution {
                param: p.clone(),
                value: (Formula::Expr(-c1) + sign) / Formula::Expr(two_a.clone()),
                validity: cond.clone(),
            };
            Some(vec![make(root.clone()), make(-root)])
        }
        _ => None,
    }
}

/// Roots of `α cos θ + β sin θ + δ` where θ is the unique trigonometric
/// argument involving `p`.
fn trig_roots(r: &Poly, p: &Param, base: &[Condition]) -> Option<Vec<Solution>> {
    let mut theta: Option<Poly> = None;
    let (mut alpha, mut beta, mut delta) = (Poly::zero(), Poly::zero(), Poly::zero());
    for (m, c) in r.terms() {
        let mut slot = 0;
        let mut rest: Vec<(Atom, u32)> = Vec::new();
        for (a, k) in m.factors() {
            match a {
                Atom::Sym(s) if s == p => return None,
                Atom::Sin(x) | Atom::Cos(x) if x.contains(p) => {
                    if *k != 1 || slot != 0 {
                        return None;
                    }
                    match &theta {
                        None => theta = Some((**x).clone()),
                        Some(t) if t == &**x => {}
                        Some(_) => return None,
                    }
                    slot = if matches!(a, Atom::Cos(_)) { 1 } else { 2 };
                }
                _ => rest.push((a.clone(), *k)),
            }
        }
        let mut unit = Poly::term(m.with_exp(None), c.clone());
        for (a, _) in m.factors() {
            if let Atom::Sin(x) | Atom::Cos(x) = a {
                if x.contains(p) {
                    unit = unit
                        .div_monomial(&Monomial::atom(a.clone()))
                        .expect("factor present");
                }
            }
        }
        let unit = match m.exponent() {
            Some(e) => unit.mul(&Poly::exp(e).ok()?),
            None => unit,
        };
        match slot {
            1 => alpha = alpha.add(&unit),
            2 => beta = beta.add(&unit),
            _ => delta = delta.add(&unit),
        }
    }
    let theta = theta?;
    let (g, rho) = linear(&theta, p)?;
    let (alpha, beta, delta) = (
        Expr::from_poly(alpha),
        Expr::from_poly(beta),
        Expr::from_poly(delta),
    );
    let to_p = |th: Formula| (th - Formula::Expr(rho.clone())) / Formula::Expr(g.clone());
    let exact = |th: Expr, validity: Vec<Condition>| Solution::exact(p, (th - &rho) / &g, validity);
    let half_pi = Expr::pi() * Expr::ratio(1, 2);
    let mut validity = base.to_vec();
    if delta.is_literal_zero() {
        if beta.is_literal_zero() {
            return Some(vec![
                exact(half_pi.clone(), validity.clone()),
                exact(-half_pi, validity),
            ]);
        }
        if alpha.is_literal_zero() {
            return Some(vec![
                exact(Expr::zero(), validity.clone()),
                exact(Expr::pi(), validity),
            ]);
        }
        validity.push(Condition::NonZero(beta.clone()));
        let th = Formula::Atan(Box::new(Formula::Expr(-(&alpha / &beta))));
        return Some(vec![
            Solution {
                param: p.clone(),
                value: to_p(th.clone()),
                validity: validity.clone(),
            },
            Solution {
                param: p.clone(),
                value: to_p(th + Formula::Expr(Expr::pi())),
                validity,
            },
        ]);
    }
    let room = &alpha * &alpha + &beta * &beta - &delta * &delta;
    if provably_positive(&-room.clone()) {
        return Some(Vec::new());
    }
    if !provably_nonnegative(&room) {
        return None;
    }
    validity.push(Condition::NonNegative {
        value: room,
        proven: true,
    });
    let radius = Formula::Sqrt(Box::new(Formula::Expr(&alpha * &alpha + &beta * &beta)));
    let phase = Formula::Atan2(
        Box::new(Formula::Expr(beta.clone())),
        Box::new(Formula::Expr(alpha.clone())),
    );
    let spread = Formula::Acos(Box::new(Formula::Expr(-delta) / radius));
    Some(vec![
        Solution {
            param: p.clone(),
            value: to_p(phase.clone() + spread.clone()),
            validity: validity.clone(),
        },
        Solution {
            param: p.clone(),
            value: to_p(phase - spread),
            validity,
        },
    ])
}

/// Every term nonnegative: positive coefficient, even powers of parameters
/// and trigonometric atoms, any exponential. `strict` additionally asks for
/// a term that cannot vanish.
fn poly_sign_ok(p: &Poly, strict: bool) -> bool {
    if p.is_zero() {
        return !strict;
    }
    let mut has_positive = false;
    for (m, c) in p.terms() {
        if !c.is_positive() {
            return false;
        }
        let mut nonvanishing = true;
        for (a, k) in m.factors() {
            if k % 2 != 0 {
                return false;
            }
            match a {
                Atom::Sym(s) if s.kind() == ParamKind::Coefficient => {}
                _ => nonvanishing = false,
            }
        }
        has_positive |= nonvanishing;
    }
    !strict || has_positive
}

pub(crate) fn provably_positive(e: &Expr) -> bool {
    let (n, d) = (e.num(), e.den());
    (poly_sign_ok(n, true) && poly_sign_ok(d, true))
        || (poly_sign_ok(&n.neg(), true) && poly_sign_ok(&d.neg(), true))
}

pub(crate) fn provably_nonnegative(e: &Expr) -> bool {
    let (n, d) = (e.num(), e.den());
    (poly_sign_ok(n, false) && poly_sign_ok(d, true))
        || (poly_sign_ok(&n.neg(), false) && poly_sign_ok(&d.neg(), true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symx::MapEnv;

    fn coef(n: &str) -> (Param, Expr) {
        let p = Param::coefficient(n);
        (p.clone(), Expr::param(&p))
    }

    #[test]
    fn linear_elimination() {
        let tp = Param::time("t4");
        let (_, f2) = coef("f2");
        let (_, f3) = coef("f3");
        let e = &f2 + &f3 * Expr::param(&tp);
        let roots = solve_for(&e, &tp);
        let r = roots.roots();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].exact_value().unwrap(), &-(&f2 / &f3));
        assert_eq!(r[0].validity.len(), 1);
    }

    #[test]
    fn exponential_root_is_log_two() {
        let tp = Param::time("t1");
        let t = Expr::param(&tp);
        let e = Expr::one() - Expr::int(2) * (-t).exp().unwrap();
        let r = solve_for(&e, &tp);
        let r = r.roots();
        assert_eq!(r.len(), 1);
        assert!(!r[0].is_conditional());
        let v: f64 = r[0].value.eval(&MapEnv::default());
        assert!((v - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn cosine_factor_gives_half_pi() {
        let tp = Param::time("t3");
        let (_, f1) = coef("f1");
        let e = Expr::param(&tp).cos().unwrap() * f1;
        let r = solve_for(&e, &tp);
        let vals: Vec<Expr> = r
            .roots()
            .iter()
            .map(|s| s.exact_value().unwrap().clone())
            .collect();
        assert_eq!(vals.len(), 2);
        assert_eq!(vals[0], Expr::pi() * Expr::ratio(1, 2));
    }

    #[test]
    fn unsupported_shapes_are_reported() {
        let tp = Param::time("t");
        let t = Expr::param(&tp);
        let e = &t * t.exp().unwrap() + Expr::one();
        assert_eq!(solve_for(&e, &tp), SolveOutcome::Unsupported);
        let e = t.pow(3) + &t + Expr::one();
        assert_eq!(solve_for(&e, &tp), SolveOutcome::Unsupported);
    }

    #[test]
    fn quadratic_with_square_discriminant() {
        let tp = Param::time("t");
        let t = Expr::param(&tp);
        let (_, f1) = coef("f1");
        // (t - f1)(t + 2 f1)
        let e = (&t - &f1) * (&t + Expr::int(2) * &f1);
        let r = solve_for(&e, &tp);
        assert_eq!(r.roots().len(), 2);
        for s in r.roots() {
            let v = s.exact_value().unwrap();
            assert!(e.substitute(&tp, v).unwrap().is_zero());
        }
    }

    #[test]
    fn rotation_combination_uses_arctangent() {
        let tp = Param::time("t");
        let t = Expr::param(&tp);
        let (p2, f2) = coef("f2");
        let (p3, f3) = coef("f3");
        let e = &f2 * t.cos().unwrap() + &f3 * t.sin().unwrap();
        let r = solve_for(&e, &tp);
        assert_eq!(r.roots().len(), 2);
        for s in r.roots() {
            let mut env = MapEnv::default();
            env.0.insert(p2.clone(), 0.7);
            env.0.insert(p3.clone(), -1.3);
            let v: f64 = s.value.eval(&env);
            env.0.insert(tp.clone(), v);
            let res: f64 = e.eval(&env);
            assert!(res.abs() < 1e-12);
        }
    }
}
