use std::collections::BTreeSet;

use nalgebra::DMatrix;

use super::eval::{Dual, Env, MapEnv, Sampler, Scalar};
use super::{Expr, Param, Predicate};

const RANK_SAMPLES: usize = 8;
const RANK_TOL: f64 = 1e-9;

/// Rank of the Jacobian of `exprs` with respect to `params` at a generic
/// point: the maximum numeric rank over sample points. When that falls short
/// of full rank and no parameter of interest sits inside a transcendental
/// atom, exact elimination decides.
pub fn generic_rank(exprs: &[Expr], params: &[Param]) -> usize {
    if exprs.is_empty() || params.is_empty() {
        return 0;
    }
    let rational = exprs
        .iter()
        .all(|e| params.iter().all(|p| !e.contains_in_atoms(p)));
    let mut all: BTreeSet<Param> = params.iter().cloned().collect();
    for e in exprs {
        all.extend(e.params());
    }
    let sampled = numeric_rank(&all, params, &[], |env| {
        exprs.iter().map(|e| e.eval(env)).collect()
    });
    // Full rank at one point already holds generically.
    if !rational || sampled == exprs.len().min(params.len()) {
        return sampled;
    }
    let jac: Vec<Vec<Expr>> = exprs
        .iter()
        .map(|e| params.iter().map(|p| e.differentiate(p)).collect())
        .collect();
    symbolic_rank(jac)
}

/// Gaussian elimination with exact zero tests.
pub fn symbolic_rank(mut m: Vec<Vec<Expr>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in (rank + 1)..rows {
            if m[r][c].is_literal_zero() {
                continue;
            }
            let factor = m[r][c].try_div(&pivot).expect("pivot is nonzero");
            for k in c..cols {
                let v = &m[r][k] - &(&factor * &m[rank][k]);
                m[r][k] = v;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Maximum numeric Jacobian rank of `f` with respect to `wrt` over
/// admissible sample points. `all` lists every parameter `f` reads.
pub fn numeric_rank<F>(
    all: &BTreeSet<Param>,
    wrt: &[Param],
    constraints: &[Predicate],
    f: F,
) -> usize
where
    F: Fn(&dyn Env<Dual>) -> Vec<Dual>,
{
    let sampler = Sampler::global().with_constraints(constraints);
    let n = wrt.len();
    let mut best = 0;
    for i in 0..RANK_SAMPLES {
        let point = sampler.point(all, i);
        let env = MapEnv(
            point
                .0
                .iter()
                .map(|(p, v)| {
                    let d = match wrt.iter().position(|w| w == p) {
                        Some(k) => Dual::variable(*v, k, n),
                        None => Dual::cst(*v),
                    };
                    (p.clone(), d)
                })
                .collect(),
        );
        let out = f(&env);
        let rows: Vec<Vec<f64>> = out.iter().map(|d| d.grad(n)).collect();
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            continue;
        }
        best = best.max(matrix_rank(&rows, n));
        if best == n.min(rows.len()) {
            break;
        }
    }
    best
}

pub(crate) fn matrix_rank(rows: &[Vec<f64>], cols: usize) -> usize {
    if rows.is_empty() || cols == 0 {
        return 0;
    }
    let data: Vec<f64> = rows.iter().flatten().copied().collect();
    let m = DMatrix::from_row_slice(rows.len(), cols, &data);
    let sv = m.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > RANK_TOL * top).count()
}
