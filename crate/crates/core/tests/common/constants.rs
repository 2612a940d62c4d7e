use proptest::prelude::*;
use subopt_core::symx::Expr;

/// Integer structure constants `c[a][b][g]`.
pub type Constants = Vec<Vec<Vec<i64>>>;

pub fn jacobi_holds(c: &Constants) -> bool {
    let r = c.len();
    for a in 0..r {
        for b in 0..r {
            for d in 0..r {
                for g in 0..r {
                    let s: i64 = (0..r)
                        .map(|k| {
                            c[a][b][k] * c[k][d][g]
                                + c[b][d][k] * c[k][a][g]
                                + c[d][a][k] * c[k][b][g]
                        })
                        .sum();
                    if s != 0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn antisymmetric(c: &Constants) -> bool {
    let r = c.len();
    (0..r).all(|a| (0..r).all(|b| (0..r).all(|g| c[a][b][g] == -c[b][a][g])))
}

pub fn to_exprs(c: &Constants) -> Vec<Vec<Vec<Expr>>> {
    c.iter()
        .map(|m| {
            m.iter()
                .map(|v| v.iter().map(|&x| Expr::int(x)).collect())
                .collect()
        })
        .collect()
}

/// An almost abelian algebra: an abelian ideal on the first `r-1` basis
/// vectors, acted on by the last through `m`.
pub fn almost_abelian(m: &[Vec<i64>]) -> Constants {
    let r = m.len() + 1;
    let mut c = vec![vec![vec![0; r]; r]; r];
    for i in 0..r - 1 {
        for j in 0..r - 1 {
            c[i][r - 1][j] = m[j][i];
            c[r - 1][i][j] = -m[j][i];
        }
    }
    c
}

/// Structure constants in the basis `f_i = Σ p[i][k] e_k`, where `p` is
/// unitriangular so its inverse stays integral.
pub fn change_basis(c: &Constants, p: &[Vec<i64>]) -> Constants {
    let r = c.len();
    let mut inv = vec![vec![0i64; r]; r];
    for i in 0..r {
        inv[i][i] = 1;
        for j in (0..i).rev() {
            inv[i][j] = -(j + 1..=i).map(|k| inv[i][k] * p[k][j]).sum::<i64>();
        }
    }
    let mut out = vec![vec![vec![0; r]; r]; r];
    for a in 0..r {
        for b in 0..r {
            for k in 0..r {
                let mut v = 0;
                for i in 0..r {
                    for j in 0..r {
                        v += p[a][i] * p[b][j] * c[i][j][k];
                    }
                }
                for g in 0..r {
                    out[a][b][g] += v * inv[k][g];
                }
            }
        }
    }
    out
}

pub fn valid_constants() -> impl Strategy<Value = Constants> {
    (2usize..=5).prop_flat_map(|r| {
        let m = prop::collection::vec(prop::collection::vec(-3i64..=3, r - 1), r - 1);
        let p = prop::collection::vec(prop::collection::vec(-2i64..=2, r), r);
        (m, p).prop_map(move |(m, p)| {
            let p: Vec<Vec<i64>> = (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| {
                            if i == j {
                                1
                            } else if j < i {
                                p[i][j]
                            } else {
                                0
                            }
                        })
                        .collect()
                })
                .collect();
            change_basis(&almost_abelian(&m), &p)
        })
    })
}

#[derive(Debug, Clone)]
pub enum Breakage {
    Jacobi {
        a: usize,
        b: usize,
        g: usize,
        delta: i64,
    },
    Antisymmetry {
        a: usize,
        b: usize,
        g: usize,
        x: i64,
        y: i64,
    },
}

pub fn broken_constants() -> impl Strategy<Value = (Constants, Breakage)> {
    valid_constants().prop_flat_map(|c| {
        let r = c.len();
        let idx = (0..r, 0..r, 0..r);
        let jac = (idx.clone(), prop_oneof![-3i64..=-1, 1i64..=3])
            .prop_map(|((a, b, g), delta)| Breakage::Jacobi { a, b, g, delta });
        let anti = (idx, 1i64..=3, 1i64..=3).prop_map(|((a, b, g), x, y)| Breakage::Antisymmetry {
            a,
            b,
            g,
            x,
            y,
        });
        (Just(c), prop_oneof![jac, anti])
    })
}

pub fn apply_breakage(c: &Constants, br: &Breakage) -> Constants {
    let mut c = c.clone();
    match *br {
        Breakage::Jacobi { a, b, g, delta } => {
            c[a][b][g] += delta;
            if a != b {
                c[b][a][g] -= delta;
            }
        }
        Breakage::Antisymmetry { a, b, g, x, y } => {
            c[a][b][g] = x;
            c[b][a][g] = y;
        }
    }
    c
}
