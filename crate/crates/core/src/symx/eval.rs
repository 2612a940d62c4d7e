use std::collections::BTreeMap;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Param, ParamKind};
use crate::symx::Predicate;

/// Numeric field used for evaluation: plain floats or forward-mode duals.
pub trait Scalar:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn cst(x: f64) -> Self;
    fn value(&self) -> f64;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn atan(&self) -> Self;
    fn acos(&self) -> Self;
    fn abs(&self) -> Self;
    /// Angle of the point `(x, self)`.
    fn atan2(&self, x: &Self) -> Self;

    fn powi(&self, k: u32) -> Self {
        let mut out = Self::cst(1.0);
        for _ in 0..k {
            out = out * self.clone();
        }
        out
    }
}

impl Scalar for f64 {
    fn cst(x: f64) -> f64 {
        x
    }
    fn value(&self) -> f64 {
        *self
    }
    fn exp(&self) -> f64 {
        f64::exp(*self)
    }
    fn ln(&self) -> f64 {
        f64::ln(*self)
    }
    fn sin(&self) -> f64 {
        f64::sin(*self)
    }
    fn cos(&self) -> f64 {
        f64::cos(*self)
    }
    fn sqrt(&self) -> f64 {
        f64::sqrt(*self)
    }
    fn atan(&self) -> f64 {
        f64::atan(*self)
    }
    fn acos(&self) -> f64 {
        f64::acos(*self)
    }
    fn abs(&self) -> f64 {
        f64::abs(*self)
    }
    fn atan2(&self, x: &f64) -> f64 {
        f64::atan2(*self, *x)
    }
    fn powi(&self, k: u32) -> f64 {
        f64::powi(*self, k as i32)
    }
}

/// Value plus gradient. An empty gradient stands for a constant.
#[derive(Debug, Clone, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: Vec<f64>,
}

impl Dual {
    pub fn variable(v: f64, index: usize, n: usize) -> Dual {
        let mut d = vec![0.0; n];
        d[index] = 1.0;
        Dual { v, d }
    }

    fn chain(&self, v: f64, slope: f64) -> Dual {
        Dual {
            v,
            d: self.d.iter().map(|x| x * slope).collect(),
        }
    }

    pub fn grad(&self, n: usize) -> Vec<f64> {
        if self.d.is_empty() {
            vec![0.0; n]
        } else {
            self.d.clone()
        }
    }
}

fn zip_with(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => Vec::new(),
        (true, false) => b.iter().map(|&y| f(0.0, y)).collect(),
        (false, true) => a.iter().map(|&x| f(x, 0.0)).collect(),
        (false, false) => a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect(),
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual {
            v: self.v + o.v,
            d: zip_with(&self.d, &o.d, |x, y| x + y),
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual {
            v: self.v - o.v,
            d: zip_with(&self.d, &o.d, |x, y| x - y),
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: Dual) -> Dual {
        let (a, b) = (self.v, o.v);
        Dual {
            v: a * b,
            d: zip_with(&self.d, &o.d, |x, y| x * b + a * y),
        }
    }
}

impl Div for Dual {
    type Output = Dual;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Dual) -> Dual {
        let (a, b) = (self.v, o.v);
        Dual {
            v: a / b,
            d: zip_with(&self.d, &o.d, |x, y| (x * b - a * y) / (b * b)),
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual {
            v: -self.v,
            d: self.d.iter().map(|x| -x).collect(),
        }
    }
}

impl Scalar for Dual {
    fn cst(x: f64) -> Dual {
        Dual {
            v: x,
            d: Vec::new(),
        }
    }
    fn value(&self) -> f64 {
        self.v
    }
    fn exp(&self) -> Dual {
        let e = self.v.exp();
        self.chain(e, e)
    }
    fn ln(&self) -> Dual {
        self.chain(self.v.ln(), 1.0 / self.v)
    }
    fn sin(&self) -> Dual {
        self.chain(self.v.sin(), self.v.cos())
    }
    fn cos(&self) -> Dual {
        self.chain(self.v.cos(), -self.v.sin())
    }
    fn sqrt(&self) -> Dual {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s)
    }
    fn atan(&self) -> Dual {
        self.chain(self.v.atan(), 1.0 / (1.0 + self.v * self.v))
    }
    fn acos(&self) -> Dual {
        self.chain(self.v.acos(), -1.0 / (1.0 - self.v * self.v).sqrt())
    }
    fn abs(&self) -> Dual {
        let s = if self.v < 0.0 { -1.0 } else { 1.0 };
        self.chain(self.v.abs(), s)
    }
    fn atan2(&self, x: &Dual) -> Dual {
        let (y0, x0) = (self.v, x.v);
        let r2 = x0 * x0 + y0 * y0;
        Dual {
            v: y0.atan2(x0),
            d: zip_with(&self.d, &x.d, |dy, dx| (x0 * dy - y0 * dx) / r2),
        }
    }
}

/// Parameter values for evaluation.
pub trait Env<T> {
    fn value(&self, p: &Param) -> T;
}

#[derive(Debug, Clone, Default)]
pub struct MapEnv<T>(pub BTreeMap<Param, T>);

impl<T: Scalar> Env<T> for MapEnv<T> {
    fn value(&self, p: &Param) -> T {
        match self.0.get(p) {
            Some(v) => v.clone(),
            None => panic!("no value bound for parameter {p}"),
        }
    }
}

/// Deterministic generator of admissible sample points.
///
/// Each point is a pure function of the seed, the point index and the
/// parameter names, so repeated queries agree across threads and runs.
#[derive(Debug, Clone)]
pub struct Sampler {
    seed: u64,
    constraints: Vec<Predicate>,
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler {
            seed,
            constraints: Vec::new(),
        }
    }

    pub fn global() -> Sampler {
        Sampler::new(super::seed())
    }

    /// Adds predicates that every point must satisfy.
    pub fn with_constraints(mut self, constraints: &[Predicate]) -> Sampler {
        self.constraints.extend_from_slice(constraints);
        self
    }

    fn draw(&self, p: &Param, index: usize, attempt: usize) -> f64 {
        let mix = fnv1a(p.name().as_bytes())
            ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
            ^ (attempt as u64).wrapping_mul(0xc2b2_ae3d_27d4_eb4f);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ mix);
        match p.kind() {
            ParamKind::Constant => std::f64::consts::PI,
            ParamKind::Time => rng.random_range(-1.3..1.3),
            ParamKind::Coefficient => {
                let m: f64 = rng.random_range(0.5..1.6);
                if rng.random_bool(0.5) {
                    m
                } else {
                    -m
                }
            }
            ParamKind::Algebra => {
                let m: f64 = rng.random_range(0.12..0.93);
                if rng.random_bool(0.5) {
                    m
                } else {
                    -m
                }
            }
        }
    }

    /// The `index`-th admissible point for the given parameters.
    pub fn point<'a>(
        &self,
        params: impl IntoIterator<Item = &'a Param>,
        index: usize,
    ) -> MapEnv<f64> {
        let params: Vec<&Param> = params.into_iter().collect();
        for attempt in 0..1000 {
            let env = MapEnv(
                params
                    .iter()
                    .map(|p| ((*p).clone(), self.draw(p, index, attempt)))
                    .collect(),
            );
            if self.admissible(&env) {
                return env;
            }
        }
        MapEnv(
            params
                .iter()
                .map(|p| ((*p).clone(), self.draw(p, index, 0)))
                .collect(),
        )
    }

    fn admissible(&self, env: &MapEnv<f64>) -> bool {
        self.constraints.iter().all(|c| {
            let used = c.params();
            if used.iter().any(|p| !env.0.contains_key(p)) {
                return true;
            }
            c.holds(env)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_product_rule() {
        let x = Dual::variable(2.0, 0, 2);
        let y = Dual::variable(3.0, 1, 2);
        let z = x.clone() * y.clone() + x.sin();
        assert_eq!(z.v, 6.0 + 2f64.sin());
        assert!((z.d[0] - (3.0 + 2f64.cos())).abs() < 1e-15);
        assert_eq!(z.d[1], 2.0);
    }

    #[test]
    fn sampler_is_deterministic_and_respects_kinds() {
        let s = Sampler::new(7);
        let f = Param::coefficient("f1");
        let t = Param::time("t1");
        let a = s.point([&f, &t], 3);
        let b = s.point([&f, &t], 3);
        assert_eq!(a.0, b.0);
        assert!(a.0[&f].abs() >= 0.5);
        assert!(a.0[&t].abs() < 1.3);
    }
}
