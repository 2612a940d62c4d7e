//! Real Lie algebras given by structure constants.

use std::collections::BTreeSet;
use std::fmt;

use crate::symx::{Expr, Param, ParamKind, Predicate, SymxError};

/// Coordinates of an element in the fixed basis.
/// A bracket `[x, y] = Σ c·z` written with basis names.
pub type NamedBracket<'a> = ((&'a str, &'a str), Vec<(Expr, &'a str)>);

/// A bracket `[e_i, e_j] = Σ c·e_k` written with zero-based indices.
pub type IndexedBracket = (usize, usize, Vec<(Expr, usize)>);

pub type Vector = Vec<Expr>;

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("dimension {0} outside the supported range {MIN_DIM}..={MAX_DIM}")]
    DimensionOutOfRange(usize),
    #[error("structure constants must have shape {0}x{0}x{0}")]
    Shape(usize),
    #[error("antisymmetry violated at [e{0},e{1}] component e{2}")]
    AntisymmetryViolation(usize, usize, usize),
    #[error("Jacobi identity fails for (e{0},e{1},e{2}) in component e{3}")]
    JacobiViolation(usize, usize, usize, usize),
    #[error("unknown basis element {0:?}")]
    UnknownBasisName(String),
    #[error("structure constant {0} is not linear in the algebra parameters")]
    NonlinearParameter(String),
    #[error(transparent)]
    Symx(#[from] SymxError),
}

/// A validated Lie algebra. `c[a][b][g]` is the coefficient of `e_g` in
/// `[e_a, e_b]` (zero-based indices).
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    dim: usize,
    names: Vec<String>,
    c: Vec<Vec<Vec<Expr>>>,
    params: Vec<Param>,
    constraints: Vec<Predicate>,
    label: Option<String>,
}

fn default_names(r: usize) -> Vec<String> {
    (1..=r).map(|i| format!("e{i}")).collect()
}

impl LieAlgebra {
    /// Validates structure constants. Entries given for only one ordering
    /// of a pair are completed by antisymmetry.
    pub fn from_structure_constants(
        r: usize,
        c: Vec<Vec<Vec<Expr>>>,
        params: Vec<Param>,
        constraints: Vec<Predicate>,
    ) -> Result<LieAlgebra, AlgebraError> {
        if !(MIN_DIM..=MAX_DIM).contains(&r) {
            return Err(AlgebraError::DimensionOutOfRange(r));
        }
        if c.len() != r
            || c.iter()
                .any(|m| m.len() != r || m.iter().any(|v| v.len() != r))
        {
            return Err(AlgebraError::Shape(r));
        }
        let mut c = c;
        for a in 0..r {
            for g in 0..r {
                if !c[a][a][g].is_zero() {
                    return Err(AlgebraError::AntisymmetryViolation(a + 1, a + 1, g + 1));
                }
            }
            for b in (a + 1)..r {
                for g in 0..r {
                    let (x, y) = (c[a][b][g].clone(), c[b][a][g].clone());
                    match (x.is_literal_zero(), y.is_literal_zero()) {
                        (true, true) => {}
                        (false, true) => c[b][a][g] = -x,
                        (true, false) => c[a][b][g] = -y,
                        (false, false) => {
                            if !(&x + &y).is_zero() {
                                return Err(AlgebraError::AntisymmetryViolation(
                                    a + 1,
                                    b + 1,
                                    g + 1,
                                ));
                            }
                        }
                    }
                }
            }
        }
        for plane in &c {
            for row in plane {
                for e in row {
                    check_linear(e)?;
                }
            }
        }
        let alg = LieAlgebra {
            dim: r,
            names: default_names(r),
            c,
            params,
            constraints,
            label: None,
        };
        if let Some((a, b, g, e)) = alg.jacobi_failure() {
            return Err(AlgebraError::JacobiViolation(a + 1, b + 1, g + 1, e + 1));
        }
        Ok(alg)
    }

    /// Builds an algebra from its nonzero brackets `[x, y] = Σ c·z`, written
    /// with basis names.
    pub fn from_brackets(
        basis: &[&str],
        brackets: &[NamedBracket],
        params: Vec<Param>,
        constraints: Vec<Predicate>,
    ) -> Result<LieAlgebra, AlgebraError> {
        let r = basis.len();
        let index = |n: &str| {
            basis
                .iter()
                .position(|b| *b == n)
                .ok_or_else(|| AlgebraError::UnknownBasisName(n.to_string()))
        };
        let mut c = vec![vec![vec![Expr::zero(); r]; r]; r];
        for ((x, y), rhs) in brackets {
            let (a, b) = (index(x)?, index(y)?);
            for (coef, z) in rhs {
                let g = index(z)?;
                c[a][b][g] = &c[a][b][g] + coef;
            }
        }
        let mut alg = LieAlgebra::from_structure_constants(r, c, params, constraints)?;
        alg.names = basis.iter().map(|s| s.to_string()).collect();
        Ok(alg)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> LieAlgebra {
        self.label = Some(label.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn params(&self) -> &[Param] {
        &self.params
    }

    pub fn constraints(&self) -> &[Predicate] {
        &self.constraints
    }

    /// Coefficient of `e_g` in `[e_a, e_b]`, zero-based.
    pub fn constant(&self, a: usize, b: usize, g: usize) -> &Expr {
        &self.c[a][b][g]
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().flatten().flatten().all(Expr::is_literal_zero)
    }

    fn jacobi_failure(&self) -> Option<(usize, usize, usize, usize)> {
        let r = self.dim;
        let c = &self.c;
        for a in 0..r {
            for b in (a + 1)..r {
                for g in (b + 1)..r {
                    for e in 0..r {
                        let mut s = Expr::zero();
                        for d in 0..r {
                            s = s
                                + &c[a][b][d] * &c[d][g][e]
                                + &c[b][g][d] * &c[d][a][e]
                                + &c[g][a][d] * &c[d][b][e];
                        }
                        if !s.is_zero() {
                            return Some((a, b, g, e));
                        }
                    }
                }
            }
        }
        None
    }

    /// `[x, y]` in coordinates.
    pub fn bracket(&self, x: &[Expr], y: &[Expr]) -> Vector {
        let r = self.dim;
        assert!(x.len() == r && y.len() == r, "vectors must have length {r}");
        let mut out = vec![Expr::zero(); r];
        for a in 0..r {
            if x[a].is_literal_zero() {
                continue;
            }
            for b in 0..r {
                if y[b].is_literal_zero() || a == b {
                    continue;
                }
                let xy = &x[a] * &y[b];
                for (g, o) in out.iter_mut().enumerate() {
                    let k = &self.c[a][b][g];
                    if !k.is_literal_zero() {
                        *o = &*o + &(&xy * k);
                    }
                }
            }
        }
        out
    }

    /// Matrix `M` with `M·y = [e_k, y]`, zero-based `k`.
    pub fn adjoint_matrix(&self, k: usize) -> Vec<Vec<Expr>> {
        let r = self.dim;
        (0..r)
            .map(|g| (0..r).map(|j| self.c[k][j][g].clone()).collect())
            .collect()
    }

    pub fn basis_vector(&self, k: usize) -> Vector {
        (0..self.dim)
            .map(|i| if i == k { Expr::one() } else { Expr::zero() })
            .collect()
    }

    /// Replaces algebra parameters by values, keeping the constraints that
    /// still mention free parameters.
    pub fn instantiate(&self, values: &[(Param, Expr)]) -> Result<LieAlgebra, AlgebraError> {
        let sub = |e: &Expr| {
            values.iter().fold(e.clone(), |acc, (p, v)| {
                acc.substitute(p, v).expect("constants substitute")
            })
        };
        let c = self
            .c
            .iter()
            .map(|m| m.iter().map(|v| v.iter().map(sub).collect()).collect())
            .collect();
        let fixed: BTreeSet<&Param> = values.iter().map(|(p, _)| p).collect();
        let params = self
            .params
            .iter()
            .filter(|p| !fixed.contains(p))
            .cloned()
            .collect();
        let constraints = self
            .constraints
            .iter()
            .filter(|c| c.params().iter().all(|p| !fixed.contains(p)))
            .cloned()
            .collect();
        let mut alg = LieAlgebra::from_structure_constants(self.dim, c, params, constraints)?;
        alg.names = self.names.clone();
        alg.label = self.label.clone();
        Ok(alg)
    }
}

fn check_linear(e: &Expr) -> Result<(), AlgebraError> {
    let bad = || AlgebraError::NonlinearParameter(e.to_string());
    if !e.is_polynomial() || e.has_atoms() {
        return Err(bad());
    }
    for (m, _) in e.num().terms() {
        let deg: u32 = m
            .factors()
            .iter()
            .filter(
                |(a, _)| matches!(a, crate::symx::Atom::Sym(p) if p.kind() == ParamKind::Algebra),
            )
            .map(|(_, k)| *k)
            .sum();
        if deg > 1 || m.degree() != deg {
            return Err(bad());
        }
    }
    Ok(())
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.label {
            write!(f, "{l}: ")?;
        }
        let mut first = true;
        for a in 0..self.dim {
            for b in (a + 1)..self.dim {
                let terms: Vec<String> = (0..self.dim)
                    .filter(|&g| !self.c[a][b][g].is_literal_zero())
                    .map(|g| format!("({})*{}", self.c[a][b][g], self.names[g]))
                    .collect();
                if terms.is_empty() {
                    continue;
                }
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(
                    f,
                    "[{},{}] = {}",
                    self.names[a],
                    self.names[b],
                    terms.join(" + ")
                )?;
            }
        }
        if first {
            write!(f, "abelian of dimension {}", self.dim)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a38() -> LieAlgebra {
        LieAlgebra::from_brackets(
            &["e1", "e2", "e3"],
            &[
                (("e1", "e2"), vec![(Expr::one(), "e1")]),
                (("e1", "e3"), vec![(Expr::int(-2), "e2")]),
                (("e2", "e3"), vec![(Expr::one(), "e3")]),
            ],
            vec![],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn sl2_is_valid_and_brackets_match() {
        let g = a38();
        let br = g.bracket(&g.basis_vector(0), &g.basis_vector(1));
        assert_eq!(br, g.basis_vector(0));
        let x = vec![Expr::int(2), Expr::int(-1), Expr::int(3)];
        assert!(g.bracket(&x, &x).iter().all(Expr::is_zero));
    }

    #[test]
    fn jacobi_violation_reports_indices() {
        // [e1,e2]=e3, [e1,e3]=e2 is a genuine Lie algebra; adding [e2,e3]=e2
        // breaks the identity.
        let mut c = vec![vec![vec![Expr::zero(); 3]; 3]; 3];
        c[0][1][2] = Expr::one();
        c[0][2][1] = Expr::one();
        assert!(LieAlgebra::from_structure_constants(3, c.clone(), vec![], vec![]).is_ok());
        let mut c = vec![vec![vec![Expr::zero(); 3]; 3]; 3];
        c[0][1][2] = Expr::one();
        c[1][2][1] = Expr::one();
        let err = LieAlgebra::from_structure_constants(3, c, vec![], vec![]).unwrap_err();
        assert!(matches!(err, AlgebraError::JacobiViolation(1, 2, 3, _)));
    }

    #[test]
    fn antisymmetry_conflict_is_rejected() {
        let mut c = vec![vec![vec![Expr::zero(); 2]; 2]; 2];
        c[0][1][1] = Expr::one();
        c[1][0][1] = Expr::one();
        assert!(matches!(
            LieAlgebra::from_structure_constants(2, c, vec![], vec![]),
            Err(AlgebraError::AntisymmetryViolation(1, 2, 2))
        ));
    }

    #[test]
    fn adjoint_columns_are_brackets() {
        let g = a38();
        for k in 0..3 {
            let m = g.adjoint_matrix(k);
            for j in 0..3 {
                let col: Vec<Expr> = (0..3).map(|i| m[i][j].clone()).collect();
                assert_eq!(col, g.bracket(&g.basis_vector(k), &g.basis_vector(j)));
            }
        }
    }

    #[test]
    fn nonlinear_parameters_are_rejected() {
        let a = Param::algebra("a");
        let r = LieAlgebra::from_brackets(
            &["e1", "e2"],
            &[(("e1", "e2"), vec![(Expr::param(&a).pow(2), "e2")])],
            vec![a],
            vec![],
        );
        assert!(matches!(r, Err(AlgebraError::NonlinearParameter(_))));
    }

    #[test]
    fn unknown_names_are_reported() {
        let r = LieAlgebra::from_brackets(&["e1", "e2"], &[(("e1", "x"), vec![])], vec![], vec![]);
        assert_eq!(r.unwrap_err(), AlgebraError::UnknownBasisName("x".into()));
    }
}
