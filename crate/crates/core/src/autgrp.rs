//! Closed forms of the one-parameter inner automorphism groups.
//!
//! Generator `k` acts on coordinate columns by `A_k(t) = exp(t·G_k)` where
//! `G_k y = [y, e_k]`. This is the orientation of the mappings the worked
//! examples display (for `[e1,e2] = e2`, `A_1` scales the `e2` coordinate by
//! `exp(-t1)`).

use std::fmt;

use crate::algebra::LieAlgebra;
use crate::symx::{Expr, Param, SymxError};

pub type Matrix = Vec<Vec<Expr>>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AutError {
    #[error("no closed form for exp(t ad e{0}): eigenvalues are not visible from the matrix")]
    ExponentialUnavailable(usize),
    #[error(
        "exponential of generator {index} fails verification at entry ({row},{col}): {reason}"
    )]
    VerificationFailed {
        index: usize,
        row: usize,
        col: usize,
        reason: String,
    },
    #[error(transparent)]
    Symx(#[from] SymxError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Trivial,
    Diagonal,
    Nilpotent,
    Putzer,
    Override,
}

#[derive(Debug, Clone)]
pub struct GeneratorAutomorphism {
    /// Zero-based basis index.
    pub index: usize,
    pub time: Param,
    pub matrix: Matrix,
    /// `G` with `d/dt matrix = G·matrix`.
    pub infinitesimal: Matrix,
    /// Eigenvalues as `(re, im)` pairs.
    pub eigenvalues: Vec<(Expr, Expr)>,
    pub trivial: bool,
    pub method: Method,
}

impl GeneratorAutomorphism {
    pub fn is_diagonal(&self) -> bool {
        is_diagonal(&self.matrix)
    }

    /// The matrix with its time replaced by `t`.
    pub fn at(&self, t: &Param) -> Matrix {
        let v = Expr::param(t);
        self.matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.substitute(&self.time, &v).expect("times substitute"))
                    .collect()
            })
            .collect()
    }
}

/// Outcome of checking a closed form against its defining ODE.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Passed,
    NotIdentityAtZero { row: usize, col: usize },
    OdeMismatch { row: usize, col: usize },
}

impl Verification {
    pub fn passed(&self) -> bool {
        matches!(self, Verification::Passed)
    }
}

impl fmt::Display for Verification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verification::Passed => write!(f, "passed"),
            Verification::NotIdentityAtZero { row, col } => {
                write!(
                    f,
                    "not the identity at t=0, entry ({},{})",
                    row + 1,
                    col + 1
                )
            }
            Verification::OdeMismatch { row, col } => {
                write!(f, "derivative mismatch at entry ({},{})", row + 1, col + 1)
            }
        }
    }
}

pub fn time_param(k: usize) -> Param {
    Param::time(format!("t{}", k + 1))
}

/// `G_k` with `G_k y = [y, e_k]`.
pub fn infinitesimal(alg: &LieAlgebra, k: usize) -> Matrix {
    let r = alg.dim();
    (0..r)
        .map(|g| (0..r).map(|j| alg.constant(j, k, g).clone()).collect())
        .collect()
}

pub fn identity(r: usize) -> Matrix {
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| if i == j { Expr::one() } else { Expr::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, m, p) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    (0..n)
        .map(|i| {
            (0..p)
                .map(|j| {
                    let mut s = Expr::zero();
                    for k in 0..m {
                        if !a[i][k].is_literal_zero() && !b[k][j].is_literal_zero() {
                            s = s + &a[i][k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn is_zero_matrix(m: &Matrix) -> bool {
    m.iter().flatten().all(Expr::is_zero)
}

fn is_diagonal(m: &Matrix) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, e)| i == j || e.is_zero()))
}

/// Closed form of `exp(t_k·G_k)`.
pub fn exponentiate(alg: &LieAlgebra, k: usize) -> Result<GeneratorAutomorphism, AutError> {
    exponentiate_with(alg, k, None)
}

/// As [`exponentiate`], but a supplied closed form (in the time `t{k+1}`)
/// is used after it passes verification.
pub fn exponentiate_with(
    alg: &LieAlgebra,
    k: usize,
    closed_form: Option<Matrix>,
) -> Result<GeneratorAutomorphism, AutError> {
    let r = alg.dim();
    let g = infinitesimal(alg, k);
    let t = time_param(k);
    let te = Expr::param(&t);
    let trivial = is_zero_matrix(&g);
    let mut gen = GeneratorAutomorphism {
        index: k,
        time: t,
        matrix: identity(r),
        infinitesimal: g.clone(),
        eigenvalues: vec![(Expr::zero(), Expr::zero()); r],
        trivial,
        method: Method::Trivial,
    };
    if let Some(m) = closed_form {
        gen.matrix = m;
        gen.method = Method::Override;
        gen.eigenvalues = eigenvalues(&g).unwrap_or_default();
    } else if trivial {
        return Ok(gen);
    } else if is_diagonal(&g) {
        gen.matrix = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        if i == j {
                            (&g[i][i] * &te).exp()
                        } else {
                            Ok(Expr::zero())
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        gen.eigenvalues = (0..r).map(|i| (g[i][i].clone(), Expr::zero())).collect();
        gen.method = Method::Diagonal;
    } else if let Some(series) = nilpotent_series(&g, &te) {
        gen.matrix = series;
        gen.method = Method::Nilpotent;
    } else {
        let eig = eigenvalues(&g).ok_or(AutError::ExponentialUnavailable(k + 1))?;
        gen.matrix = putzer(&g, &eig, &te)?;
        gen.eigenvalues = eig;
        gen.method = Method::Putzer;
    }
    match verify(&gen) {
        Verification::Passed => Ok(gen),
        Verification::NotIdentityAtZero { row, col } => Err(AutError::VerificationFailed {
            index: k + 1,
            row: row + 1,
            col: col + 1,
            reason: "not the identity at t=0".into(),
        }),
        Verification::OdeMismatch { row, col } => Err(AutError::VerificationFailed {
            index: k + 1,
            row: row + 1,
            col: col + 1,
            reason: "derivative mismatch".into(),
        }),
    }
}

fn nilpotent_series(g: &Matrix, t: &Expr) -> Option<Matrix> {
    let r = g.len();
    let mut out = identity(r);
    let mut power = identity(r);
    let mut factor = Expr::one();
    for i in 1..=r {
        power = mat_mul(&power, g);
        if is_zero_matrix(&power) {
            return Some(out);
        }
        factor = &factor * t * Expr::ratio(1, i as i64);
        for (orow, prow) in out.iter_mut().zip(&power) {
            for (o, p) in orow.iter_mut().zip(prow) {
                if !p.is_literal_zero() {
                    *o = &*o + &(&factor * p);
                }
            }
        }
    }
    None
}

/// Checks `A(0) = I` and `A' = G·A` symbolically.
pub fn verify(gen: &GeneratorAutomorphism) -> Verification {
    let r = gen.matrix.len();
    for i in 0..r {
        for j in 0..r {
            let at0 = gen.matrix[i][j]
                .substitute(&gen.time, &Expr::zero())
                .unwrap_or_else(|| Expr::int(i64::from(i != j) + 7));
            let want = if i == j { Expr::one() } else { Expr::zero() };
            if !(at0 - want).is_zero() {
                return Verification::NotIdentityAtZero { row: i, col: j };
            }
        }
    }
    let ga = mat_mul(&gen.infinitesimal, &gen.matrix);
    for i in 0..r {
        for j in 0..r {
            let d = gen.matrix[i][j].differentiate(&gen.time);
            if !(d - &ga[i][j]).is_zero() {
                return Verification::OdeMismatch { row: i, col: j };
            }
        }
    }
    Verification::Passed
}

/// `verify` for a generator of `alg`, recomputing the infinitesimal
/// generator from the algebra rather than trusting the stored one.
pub fn verify_exponential(alg: &LieAlgebra, gen: &GeneratorAutomorphism) -> Verification {
    let mut g = gen.clone();
    g.infinitesimal = infinitesimal(alg, gen.index);
    verify(&g)
}

/// Nontrivial generators, ordered by index.
pub fn generators(alg: &LieAlgebra) -> Result<Vec<GeneratorAutomorphism>, AutError> {
    Ok(all_generators(alg)?
        .into_iter()
        .filter(|g| !g.trivial)
        .collect())
}

/// Every generator including trivial ones.
pub fn all_generators(alg: &LieAlgebra) -> Result<Vec<GeneratorAutomorphism>, AutError> {
    all_generators_with(alg, &[])
}

/// As [`all_generators`] with closed forms supplied for some indices.
pub fn all_generators_with(
    alg: &LieAlgebra,
    overrides: &[(usize, Matrix)],
) -> Result<Vec<GeneratorAutomorphism>, AutError> {
    let build = |k: usize| {
        let o = overrides
            .iter()
            .find(|(i, _)| *i == k)
            .map(|(_, m)| m.clone());
        exponentiate_with(alg, k, o)
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..alg.dim()).into_par_iter().map(build).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..alg.dim()).map(build).collect()
    }
}

// ---------------------------------------------------------------------------
// Complex arithmetic over expressions, for rotation blocks.

#[derive(Debug, Clone, PartialEq)]
struct Cx {
    re: Expr,
    im: Expr,
}

impl Cx {
    fn real(re: Expr) -> Cx {
        Cx {
            re,
            im: Expr::zero(),
        }
    }

    fn zero() -> Cx {
        Cx::real(Expr::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_literal_zero(&self) -> bool {
        self.re.is_literal_zero() && self.im.is_literal_zero()
    }

    fn add(&self, o: &Cx) -> Cx {
        Cx {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn sub(&self, o: &Cx) -> Cx {
        Cx {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    fn mul(&self, o: &Cx) -> Cx {
        Cx {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn scale(&self, e: &Expr) -> Cx {
        Cx {
            re: &self.re * e,
            im: &self.im * e,
        }
    }

    fn inv(&self) -> Cx {
        let n = &self.re * &self.re + &self.im * &self.im;
        Cx {
            re: &self.re / &n,
            im: -(&self.im / &n),
        }
    }
}

type CMatrix = Vec<Vec<Cx>>;

fn cmat_mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = Cx::zero();
                    for k in 0..n {
                        if !a[i][k].is_literal_zero() && !b[k][j].is_literal_zero() {
                            s = s.add(&a[i][k].mul(&b[k][j]));
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Characteristic polynomial coefficients, constant term first, by the
/// Faddeev–LeVerrier recursion.
fn char_poly(g: &Matrix) -> Vec<Expr> {
    let n = g.len();
    let mut c = vec![Expr::zero(); n + 1];
    c[n] = Expr::one();
    let mut m = vec![vec![Expr::zero(); n]; n];
    for k in 1..=n {
        let mut next = mat_mul(g, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = &row[i] + &c[n + 1 - k];
        }
        m = next;
        let gm = mat_mul(g, &m);
        let tr = (0..n).fold(Expr::zero(), |s, i| s + &gm[i][i]);
        c[n - k] = -(tr * Expr::ratio(1, k as i64));
    }
    c
}

/// Divides `p` by the monic `d`; `None` unless the remainder vanishes.
fn divide_monic(p: &[Expr], d: &[Expr]) -> Option<Vec<Expr>> {
    let (n, m) = (p.len() - 1, d.len() - 1);
    if n < m {
        return None;
    }
    let mut rem = p.to_vec();
    let mut q = vec![Expr::zero(); n - m + 1];
    for i in (0..=n - m).rev() {
        let lead = rem[i + m].clone();
        q[i] = lead.clone();
        if lead.is_literal_zero() {
            continue;
        }
        for j in 0..=m {
            rem[i + j] = &rem[i + j] - &(&lead * &d[j]);
        }
    }
    rem[..m].iter().all(Expr::is_zero).then_some(q)
}

/// Eigenvalues read off diagonal entries and rotation blocks
/// `[[p, q], [-q, p]]`, confirmed against the characteristic polynomial.
fn eigenvalues(g: &Matrix) -> Option<Vec<(Expr, Expr)>> {
    let n = g.len();
    let mut pairs: Vec<(Expr, Expr)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if (&g[i][i] - &g[j][j]).is_zero()
                && (&g[i][j] + &g[j][i]).is_zero()
                && !g[i][j].is_zero()
            {
                pairs.push((g[i][i].clone(), g[i][j].clone()));
            }
        }
    }
    let reals: Vec<Expr> = (0..n).map(|i| g[i][i].clone()).collect();
    let mut p = char_poly(g);
    let mut out = Vec::new();
    'outer: while p.len() > 1 {
        for (re, im) in &pairs {
            let quad = [re * re + im * im, -(Expr::int(2) * re), Expr::one()];
            if let Some(q) = divide_monic(&p, &quad) {
                out.push((re.clone(), im.clone()));
                out.push((re.clone(), -im.clone()));
                p = q;
                continue 'outer;
            }
        }
        for l in &reals {
            if let Some(q) = divide_monic(&p, &[-l.clone(), Expr::one()]) {
                out.push((l.clone(), Expr::zero()));
                p = q;
                continue 'outer;
            }
        }
        return None;
    }
    Some(out)
}

/// Sum of `c·t^j·exp(μt)` terms.
#[derive(Debug, Clone)]
struct ExpPoly {
    terms: Vec<(u32, Cx, Cx)>,
}

impl ExpPoly {
    fn push(&mut self, j: u32, mu: Cx, c: Cx) {
        if c.is_zero() {
            return;
        }
        for (k, m, w) in &mut self.terms {
            if *k == j && m.sub(&mu).is_zero() {
                *w = w.add(&c);
                return;
            }
        }
        self.terms.push((j, mu, c));
    }

    /// `∫₀ᵗ exp(λ(t−s))·self(s) ds`.
    fn integrate(&self, lambda: &Cx) -> ExpPoly {
        let mut out = ExpPoly { terms: Vec::new() };
        for (j, mu, c) in &self.terms {
            let nu = mu.sub(lambda);
            if nu.is_zero() {
                let w = c.scale(&Expr::ratio(1, i64::from(*j) + 1));
                out.push(j + 1, lambda.clone(), w);
                continue;
            }
            // ∫₀ᵗ s^j e^{νs} ds = e^{νt} Σ_i (−1)^{j−i} j!/i! t^i/ν^{j−i+1} − (−1)^j j!/ν^{j+1}
            let inv = nu.inv();
            let fact = |n: u32| (1..=n).fold(1i64, |a, b| a * i64::from(b));
            let mut invpow = vec![Cx::real(Expr::one())];
            for _ in 0..=*j {
                let last = invpow.last().unwrap().mul(&inv);
                invpow.push(last);
            }
            for i in 0..=*j {
                let sign = if (j - i) % 2 == 0 { 1 } else { -1 };
                let k = Expr::ratio(sign * fact(*j), fact(i));
                let w = c.mul(&invpow[(j - i + 1) as usize]).scale(&k);
                out.push(i, mu.clone(), w);
            }
            let sign = if j % 2 == 0 { -1 } else { 1 };
            let w = c
                .mul(&invpow[(*j + 1) as usize])
                .scale(&Expr::int(sign * fact(*j)));
            out.push(0, lambda.clone(), w);
        }
        out
    }
}

/// Real and imaginary parts of `t^j·exp((p+iq)t)`.
fn exp_term(j: u32, mu: &Cx, t: &Expr) -> Result<(Expr, Expr), SymxError> {
    let base = t.pow(j) * (&mu.re * t).exp()?;
    if mu.im.is_zero() {
        return Ok((base, Expr::zero()));
    }
    let arg = &mu.im * t;
    Ok((&base * &arg.cos()?, &base * &arg.sin()?))
}

fn putzer(g: &Matrix, eig: &[(Expr, Expr)], t: &Expr) -> Result<Matrix, AutError> {
    let n = g.len();
    let lambdas: Vec<Cx> = eig
        .iter()
        .map(|(re, im)| Cx {
            re: re.clone(),
            im: im.clone(),
        })
        .collect();
    let gc: CMatrix = g
        .iter()
        .map(|row| row.iter().map(|e| Cx::real(e.clone())).collect())
        .collect();
    let mut p: CMatrix = identity(n)
        .into_iter()
        .map(|row| row.into_iter().map(Cx::real).collect())
        .collect();
    let mut r = ExpPoly { terms: Vec::new() };
    r.push(0, lambdas[0].clone(), Cx::real(Expr::one()));
    let mut acc: Vec<Vec<Vec<(u32, Cx, Cx)>>> = vec![vec![Vec::new(); n]; n];
    for k in 0..n {
        if k > 0 {
            let mut shifted = gc.clone();
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] = row[i].sub(&lambdas[k - 1]);
            }
            p = cmat_mul(&p, &shifted);
            r = r.integrate(&lambdas[k]);
        }
        for i in 0..n {
            for jx in 0..n {
                if p[i][jx].is_zero() {
                    continue;
                }
                for (j, mu, c) in &r.terms {
                    acc[i][jx].push((*j, mu.clone(), c.mul(&p[i][jx])));
                }
            }
        }
    }
    let mut out = vec![vec![Expr::zero(); n]; n];
    for i in 0..n {
        for jx in 0..n {
            let mut grouped = ExpPoly { terms: Vec::new() };
            for (j, mu, c) in &acc[i][jx] {
                grouped.push(*j, mu.clone(), c.clone());
            }
            let (mut re, mut im) = (Expr::zero(), Expr::zero());
            for (j, mu, c) in &grouped.terms {
                let (er, ei) = exp_term(*j, mu, t)?;
                re = re + &c.re * &er - &c.im * &ei;
                im = im + &c.re * &ei + &c.im * &er;
            }
            if !im.is_zero() {
                return Err(AutError::VerificationFailed {
                    index: 0,
                    row: i + 1,
                    col: jx + 1,
                    reason: "imaginary part does not cancel".into(),
                });
            }
            out[i][jx] = re;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieAlgebra;

    fn alg(basis: &[&str], br: &[crate::algebra::NamedBracket], params: Vec<Param>) -> LieAlgebra {
        LieAlgebra::from_brackets(basis, br, params, vec![]).unwrap()
    }

    fn e(n: i64) -> Expr {
        Expr::int(n)
    }

    #[test]
    fn sl2_cartan_generator_is_diagonal() {
        let g = alg(
            &["e1", "e2", "e3"],
            &[
                (("e1", "e2"), vec![(e(1), "e1")]),
                (("e1", "e3"), vec![(e(-2), "e2")]),
                (("e2", "e3"), vec![(e(1), "e3")]),
            ],
            vec![],
        );
        let a2 = exponentiate(&g, 1).unwrap();
        let t = Expr::param(&a2.time);
        assert_eq!(a2.matrix[0][0], t.exp().unwrap());
        assert_eq!(a2.matrix[1][1], Expr::one());
        assert_eq!(a2.matrix[2][2], (-t).exp().unwrap());
    }

    #[test]
    fn nilpotent_example_has_quadratic_entry() {
        let g = alg(
            &["e1", "e2", "e3", "e4"],
            &[
                (("e2", "e4"), vec![(e(1), "e1")]),
                (("e3", "e4"), vec![(e(1), "e2")]),
            ],
            vec![],
        );
        let a4 = exponentiate(&g, 3).unwrap();
        assert_eq!(a4.method, Method::Nilpotent);
        let t = Expr::param(&a4.time);
        assert_eq!(a4.matrix[0][1], t);
        assert_eq!(a4.matrix[0][2], t.pow(2) * Expr::ratio(1, 2));
        assert_eq!(a4.matrix[1][2], t);
        assert!(a4.matrix[2][0].is_zero());
    }

    #[test]
    fn printed_matrix_with_stray_entry_fails() {
        let g = alg(
            &["e1", "e2", "e3", "e4"],
            &[
                (("e2", "e4"), vec![(e(1), "e1")]),
                (("e3", "e4"), vec![(e(1), "e2")]),
            ],
            vec![],
        );
        let mut m = exponentiate(&g, 3).unwrap().matrix;
        m[2][0] = Expr::one();
        let err = exponentiate_with(&g, 3, Some(m)).unwrap_err();
        assert!(matches!(
            err,
            AutError::VerificationFailed { row: 3, col: 1, .. }
        ));
    }

    #[test]
    fn rotation_block_with_parameter() {
        let a = Param::algebra("a");
        let b = Param::algebra("b");
        let (ae, be) = (Expr::param(&a), Expr::param(&b));
        let g = alg(
            &["e1", "e2", "e3", "e4"],
            &[
                (("e1", "e4"), vec![(ae.clone(), "e1")]),
                (("e2", "e4"), vec![(be.clone(), "e2"), (e(-1), "e3")]),
                (("e3", "e4"), vec![(e(1), "e2"), (be.clone(), "e3")]),
            ],
            vec![a, b],
        );
        let a4 = exponentiate(&g, 3).unwrap();
        assert_eq!(a4.method, Method::Putzer);
        let t = Expr::param(&a4.time);
        let ebt = (&be * &t).exp().unwrap();
        assert_eq!(a4.matrix[0][0], (&ae * &t).exp().unwrap());
        assert!((&a4.matrix[1][1] - &ebt * t.cos().unwrap()).is_zero());
        assert!((&a4.matrix[1][2] - &ebt * t.sin().unwrap()).is_zero());
        assert!((&a4.matrix[2][1] + &ebt * t.sin().unwrap()).is_zero());
    }

    #[test]
    fn jordan_block_gets_polynomial_factor() {
        let g = alg(
            &["e1", "e2", "e3"],
            &[
                (("e1", "e3"), vec![(e(1), "e1")]),
                (("e2", "e3"), vec![(e(1), "e1"), (e(1), "e2")]),
            ],
            vec![],
        );
        let a3 = exponentiate(&g, 2).unwrap();
        let t = Expr::param(&a3.time);
        assert!((&a3.matrix[0][1] - &t * t.exp().unwrap()).is_zero());
    }

    #[test]
    fn abelian_has_no_generators() {
        let g = alg(&["e1", "e2", "e3"], &[], vec![]);
        assert!(generators(&g).unwrap().is_empty());
        assert_eq!(all_generators(&g).unwrap().len(), 3);
    }
}
