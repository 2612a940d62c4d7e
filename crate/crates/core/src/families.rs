//! Support patterns and p-families of subalgebras.

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;

use crate::algebra::LieAlgebra;
use crate::symx::{generic_rank, Expr, Param};

/// Nonzero 0/1 tuple over the basis, coded as `Σ s_k 2^(k-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportPattern {
    r: usize,
    code: u32,
}

impl SupportPattern {
    pub fn new(r: usize, code: u32) -> Option<SupportPattern> {
        (code >= 1 && u64::from(code) < (1u64 << r)).then_some(SupportPattern { r, code })
    }

    pub fn from_bits(bits: &[bool]) -> Option<SupportPattern> {
        let code = bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .fold(0u32, |c, (i, _)| c | (1 << i));
        SupportPattern::new(bits.len(), code)
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn dim(&self) -> usize {
        self.r
    }

    pub fn popcount(&self) -> u32 {
        self.code.count_ones()
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.r).map(|i| self.code >> i & 1 == 1).collect()
    }

    pub fn columns(&self) -> Vec<usize> {
        (0..self.r).filter(|i| self.code >> i & 1 == 1).collect()
    }

    /// Lowest set position, zero-based.
    pub fn leading(&self) -> usize {
        self.code.trailing_zeros() as usize
    }
}

/// Whether a representative's coefficient can be scaled to ±1.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum CoefKind {
    Greek,
    Latin,
}

/// A free entry of a family matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient {
    pub row: usize,
    pub col: usize,
    pub param: Param,
}

/// Closure constants: `lambda[i][j][k]` is the coefficient of row `k` in
/// the bracket of rows `i < j`.
pub type Lambda = Vec<Vec<Vec<Expr>>>;

/// A d×r matrix in reduced row echelon form whose pivots are 1 and whose
/// other support entries are independent nonzero coefficients.
#[derive(Debug, Clone)]
pub struct PFamily {
    r: usize,
    rows: Vec<u32>,
    pivots: Vec<usize>,
    matrix: Vec<Vec<Expr>>,
    coeffs: Vec<Coefficient>,
    lambda: Option<Lambda>,
}

pub fn coefficient_param(row: usize, col: usize) -> Param {
    Param::coefficient(format!("f{}_{}", row + 1, col + 1))
}

impl PFamily {
    /// The family with the given row codes, or `None` if the codes are not
    /// an RREF support shape (strictly increasing pivots, no support in
    /// other rows' pivot columns).
    pub fn from_codes(r: usize, rows: &[u32]) -> Option<PFamily> {
        let pats: Vec<SupportPattern> = rows
            .iter()
            .map(|&c| SupportPattern::new(r, c))
            .collect::<Option<_>>()?;
        let pivots: Vec<usize> = pats.iter().map(SupportPattern::leading).collect();
        if pivots.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        let mut matrix = vec![vec![Expr::zero(); r]; rows.len()];
        let mut coeffs = Vec::new();
        for (i, p) in pats.iter().enumerate() {
            for j in p.columns() {
                if j == pivots[i] {
                    matrix[i][j] = Expr::one();
                } else if pivots.contains(&j) {
                    return None;
                } else {
                    let param = coefficient_param(i, j);
                    matrix[i][j] = Expr::param(&param);
                    coeffs.push(Coefficient {
                        row: i,
                        col: j,
                        param,
                    });
                }
            }
        }
        Some(PFamily {
            r,
            rows: rows.to_vec(),
            pivots,
            matrix,
            coeffs,
            lambda: None,
        })
    }

    pub fn algebra_dim(&self) -> usize {
        self.r
    }

    /// Subalgebra dimension d.
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn patterns(&self) -> Vec<SupportPattern> {
        self.rows
            .iter()
            .map(|&c| SupportPattern { r: self.r, code: c })
            .collect()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn matrix(&self) -> &[Vec<Expr>] {
        &self.matrix
    }

    pub fn coefficients(&self) -> &[Coefficient] {
        &self.coeffs
    }

    pub fn coefficient_params(&self) -> Vec<Param> {
        self.coeffs.iter().map(|c| c.param.clone()).collect()
    }

    /// Number of free coefficients; pivots are normalized to 1 and do not
    /// count.
    pub fn p(&self) -> usize {
        self.coeffs.len()
    }

    /// Total support size Σ popcount, the first slex key.
    pub fn slots(&self) -> u32 {
        self.rows.iter().map(|c| c.count_ones()).sum()
    }

    pub fn lambda(&self) -> Option<&Lambda> {
        self.lambda.as_ref()
    }

    /// Rendering with Latin coefficients `a1, a2, …` numbered across rows,
    /// e.g. `Xi1+a1 Xi2+a2 Xi3`.
    pub fn legend(&self) -> String {
        self.render(None)
    }

    /// Rendering with per-coefficient annotations: Greek ones print as
    /// `alpha1, alpha2, …`, Latin ones as `a1, a2, …`.
    pub fn render(&self, kinds: Option<&[CoefKind]>) -> String {
        let (mut greek, mut latin) = (0, 0);
        let mut k = 0;
        let rows: Vec<String> = (0..self.dim())
            .map(|i| {
                let mut parts = Vec::new();
                for j in 0..self.r {
                    if self.rows[i] >> j & 1 == 0 {
                        continue;
                    }
                    if j == self.pivots[i] {
                        parts.push(format!("Xi{}", j + 1));
                        continue;
                    }
                    let kind = kinds
                        .and_then(|ks| ks.get(k).copied())
                        .unwrap_or(CoefKind::Latin);
                    k += 1;
                    let name = match kind {
                        CoefKind::Greek => {
                            greek += 1;
                            format!("alpha{greek}")
                        }
                        CoefKind::Latin => {
                            latin += 1;
                            format!("a{latin}")
                        }
                    };
                    parts.push(format!("{name} Xi{}", j + 1));
                }
                parts.join("+")
            })
            .collect();
        rows.join(", ")
    }
}

impl PartialEq for PFamily {
    fn eq(&self, o: &PFamily) -> bool {
        self.r == o.r && self.rows == o.rows
    }
}

impl Eq for PFamily {}

impl fmt::Display for PFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.legend())
    }
}

/// Short-lex order: total support size, then row codes lexicographically.
pub fn slex_compare(x: &PFamily, y: &PFamily) -> Ordering {
    slex_key(x.rows()).cmp(&slex_key(y.rows()))
}

pub fn slex_key(rows: &[u32]) -> (u32, Vec<u32>) {
    (rows.iter().map(|c| c.count_ones()).sum(), rows.to_vec())
}

/// All one-dimensional families, slex ascending.
pub fn enumerate_1d(alg: &LieAlgebra) -> Vec<PFamily> {
    enumerate_patterns(alg.dim())
        .into_iter()
        .map(|p| PFamily::from_codes(p.r, &[p.code]).expect("single rows are RREF"))
        .collect()
}

pub fn enumerate_patterns(r: usize) -> Vec<SupportPattern> {
    let mut v: Vec<SupportPattern> = (1..(1u32 << r))
        .map(|code| SupportPattern { r, code })
        .collect();
    v.sort_by_key(|p| (p.popcount(), p.code));
    v
}

/// Every RREF support shape of `d` rows in dimension `r`.
pub fn rref_shapes(r: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for piv in (0..r).combinations(d) {
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|i| {
                let piv = &piv;
                ((piv[i] + 1)..r)
                    .filter(move |j| !piv.contains(j))
                    .map(move |j| (i, j))
            })
            .collect();
        for subset in free.iter().powerset() {
            let mut rows: Vec<u32> = piv.iter().map(|&p| 1u32 << p).collect();
            for &&(i, j) in &subset {
                rows[i] |= 1 << j;
            }
            out.push(rows);
        }
    }
    out
}

/// Why a shape fails the closure condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureFailure {
    /// Zero-based rows whose bracket does not close.
    pub rows: (usize, usize),
    /// Zero-based basis component where the failure shows.
    pub component: usize,
    pub witness: String,
}

impl fmt::Display for ClosureFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "bracket of rows {} and {} does not close in component Xi{}: {}",
            self.rows.0 + 1,
            self.rows.1 + 1,
            self.component + 1,
            self.witness
        )
    }
}

/// Checks that every bracket of rows is a combination of rows, identically
/// in the family coefficients.
///
/// In RREF the multiplier of row `k` is forced to be the bracket's entry in
/// row `k`'s pivot column, so the check reduces to verifying that the
/// residual vanishes identically. Multipliers may depend on coefficients.
pub fn closure_check(alg: &LieAlgebra, fam: &PFamily) -> Result<Lambda, ClosureFailure> {
    let d = fam.dim();
    let r = fam.r;
    let mut lambda = vec![vec![vec![Expr::zero(); d]; d]; d];
    for i in 0..d {
        for j in (i + 1)..d {
            let br = alg.bracket(&fam.matrix[i], &fam.matrix[j]);
            let lam: Vec<Expr> = fam.pivots.iter().map(|&p| br[p].clone()).collect();
            for g in 0..r {
                let mut res = br[g].clone();
                for (k, l) in lam.iter().enumerate() {
                    if !l.is_literal_zero() {
                        res = res - l * &fam.matrix[k][g];
                    }
                }
                if !res.is_zero() {
                    let witness = res
                        .num()
                        .leading()
                        .map(|(m, c)| match m.is_one() {
                            true => format!("unmatched term {c}"),
                            false => format!("unmatched term {c}*{m}"),
                        })
                        .unwrap_or_else(|| res.to_string());
                    return Err(ClosureFailure {
                        rows: (i, j),
                        component: g,
                        witness,
                    });
                }
            }
            lambda[i][j] = lam.clone();
            lambda[j][i] = lam.iter().map(|l| -l.clone()).collect();
        }
    }
    Ok(lambda)
}

/// Candidate families of dimension `d`, slex ascending, together with the
/// shapes rejected by the closure check.
pub fn candidates_with_rejections(
    alg: &LieAlgebra,
    d: usize,
) -> (Vec<PFamily>, Vec<(PFamily, ClosureFailure)>) {
    let r = alg.dim();
    assert!(d >= 1 && d < r, "dimension must lie in 1..{r}");
    if d == 1 {
        return (enumerate_1d(alg), Vec::new());
    }
    let check = |rows: Vec<u32>| {
        let mut fam = PFamily::from_codes(r, &rows).expect("shapes are RREF");
        match closure_check(alg, &fam) {
            Ok(l) => {
                let free: Vec<Expr> = fam.coeffs.iter().map(|c| Expr::param(&c.param)).collect();
                let params = fam.coefficient_params();
                if generic_rank(&free, &params) != free.len() {
                    return Err((
                        fam,
                        ClosureFailure {
                            rows: (0, 0),
                            component: 0,
                            witness: "coefficients are dependent".into(),
                        },
                    ));
                }
                fam.lambda = Some(l);
                Ok(fam)
            }
            Err(e) => Err((fam, e)),
        }
    };
    let shapes = rref_shapes(r, d);
    #[cfg(feature = "parallel")]
    let results: Vec<_> = {
        use rayon::prelude::*;
        shapes.into_par_iter().map(check).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = shapes.into_iter().map(check).collect();
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for res in results {
        match res {
            Ok(f) => ok.push(f),
            Err(e) => bad.push(e),
        }
    }
    ok.sort_by(slex_compare);
    bad.sort_by(|a, b| slex_compare(&a.0, &b.0));
    (ok, bad)
}

pub fn candidates_nd(alg: &LieAlgebra, d: usize) -> Vec<PFamily> {
    candidates_with_rejections(alg, d).0
}

/// Result of symbolic row reduction.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: Vec<Vec<Expr>>,
    pub pivots: Vec<usize>,
    /// Pivot values assumed nonzero, in elimination order.
    pub conditions: Vec<Expr>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Support code of each nonzero row.
    pub fn row_codes(&self) -> Vec<u32> {
        self.matrix[..self.rank()]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, e)| !e.is_literal_zero())
                    .fold(0u32, |c, (j, _)| c | (1 << j))
            })
            .collect()
    }

    /// Nonzero entries outside pivot columns, row-major.
    pub fn free_entries(&self) -> Vec<Expr> {
        let mut out = Vec::new();
        for row in &self.matrix[..self.rank()] {
            for (j, e) in row.iter().enumerate() {
                if !self.pivots.contains(&j) && !e.is_literal_zero() {
                    out.push(e.clone());
                }
            }
        }
        out
    }
}

/// Row reduction assuming every pivot found nonzero by the zero test is
/// nonzero; the assumed pivots are returned so callers can branch on them.
pub fn rref_symbolic(m: &[Vec<Expr>]) -> Rref {
    let mut a: Vec<Vec<Expr>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    for row in a.iter_mut() {
        for e in row.iter_mut() {
            if !e.is_literal_zero() && e.is_zero() {
                *e = Expr::zero();
            }
        }
    }
    let mut pivots = Vec::new();
    let mut conditions = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_literal_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pv = a[r][c].clone();
        if pv.as_constant().is_none() {
            conditions.push(pv.clone());
        }
        for e in a[r].iter_mut() {
            if !e.is_literal_zero() {
                *e = e.try_div(&pv).expect("pivot is nonzero");
            }
        }
        a[r][c] = Expr::one();
        for i in 0..rows {
            if i == r || a[i][c].is_literal_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..cols {
                if a[r][j].is_literal_zero() {
                    continue;
                }
                let v = &a[i][j] - &(&f * &a[r][j]);
                a[i][j] = if v.is_literal_zero() || !v.is_zero() {
                    v
                } else {
                    Expr::zero()
                };
            }
            a[i][c] = Expr::zero();
        }
        pivots.push(c);
        r += 1;
    }
    Rref {
        matrix: a,
        pivots,
        conditions,
    }
}
