//! Images of families under automorphism words and their special branches.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use super::numeric;
use crate::autgrp::{identity, mat_mul, GeneratorAutomorphism, Matrix};
use crate::families::{rref_symbolic, PFamily};
use crate::symx::{
    generic_rank, matrix_rank, solve_for, Dual, Expr, Formula, MapEnv, Param, Predicate, Sampler,
    Scalar, SolveOutcome,
};

const LEAF_SAMPLES: usize = 8;

/// A product of generator exponentials. The first generator acts first, so
/// the matrix is `A_last(t)…A_first(t)`.
#[derive(Debug, Clone)]
pub struct Word {
    /// Zero-based basis indices in order of application.
    pub gens: Vec<usize>,
    /// One time per position.
    pub times: Vec<Param>,
    pub matrix: Matrix,
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .gens
            .iter()
            .zip(&self.times)
            .rev()
            .map(|(k, t)| format!("A{}({t})", k + 1))
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// Every word of length at most `max_len` over the given generators with no
/// generator repeated back to back. A generator used twice in one word gets
/// a separate time per position.
pub fn words(gens: &[GeneratorAutomorphism], max_len: usize) -> Vec<Word> {
    let r = gens.first().map_or(0, |g| g.matrix.len());
    let mut out = Vec::new();
    for len in 1..=max_len {
        for w in (0..len).map(|_| 0..gens.len()).multi_cartesian_product() {
            if w.windows(2).any(|p| p[0] == p[1]) {
                continue;
            }
            let times: Vec<Param> = w
                .iter()
                .enumerate()
                .map(|(pos, &g)| {
                    if w.iter().filter(|&&x| x == g).count() == 1 {
                        gens[g].time.clone()
                    } else {
                        Param::time(format!("{}_{}", gens[g].time.name(), pos + 1))
                    }
                })
                .collect();
            let mut matrix = identity(r);
            for (pos, &g) in w.iter().enumerate() {
                let m = if times[pos] == gens[g].time {
                    gens[g].matrix.clone()
                } else {
                    gens[g].at(&times[pos])
                };
                matrix = mat_mul(&m, &matrix);
            }
            out.push(Word {
                gens: w.iter().map(|&g| gens[g].index).collect(),
                times,
                matrix,
            });
        }
    }
    out
}

/// Row-wise image: each row of `m` is a coordinate vector mapped by `a`.
pub fn apply(a: &Matrix, m: &[Vec<Expr>]) -> Matrix {
    m.iter()
        .map(|row| {
            (0..a.len())
                .map(|g| {
                    row.iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_literal_zero())
                        .fold(Expr::zero(), |acc, (j, x)| {
                            if a[g][j].is_literal_zero() {
                                acc
                            } else {
                                acc.add(&a[g][j].mul(x))
                            }
                        })
                })
                .collect()
        })
        .collect()
}

/// A time fixed to a closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct Binding {
    pub param: Param,
    pub value: Formula,
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.param, self.value)
    }
}

/// One outcome of acting on a family: the row codes reached, whether the
/// reached coefficients are independent, and the time choices that lead
/// there (none for the generic image).
#[derive(Debug, Clone)]
pub struct Branch {
    pub rows: Vec<u32>,
    pub valid: bool,
    pub bindings: Vec<Binding>,
    /// False when a time left the expression class and the branch was
    /// classified by sampling.
    pub exact: bool,
}

/// All branches of the image of `fam` under `word`, deduplicated by row
/// codes with exact branches preferred.
pub fn image_patterns(word: &Word, fam: &PFamily, constraints: &[Predicate]) -> Vec<Branch> {
    let img = apply(&word.matrix, fam.matrix());
    let fs = fam.coefficient_params();
    let ts: Vec<Param> = word
        .times
        .iter()
        .filter(|t| img.iter().flatten().any(|e| e.contains(t)))
        .cloned()
        .collect();
    let mut out = Vec::new();
    explore(&img, &fs, &ts, Vec::new(), constraints, &mut out);
    let mut unique: Vec<Branch> = Vec::new();
    for b in out {
        match unique.iter_mut().find(|u| u.rows == b.rows) {
            None => unique.push(b),
            Some(u) => {
                let better = (b.valid && !u.valid) || (b.valid == u.valid && b.exact && !u.exact);
                if better {
                    *u = b;
                }
            }
        }
    }
    unique
}

fn explore(
    img: &Matrix,
    fs: &[Param],
    ts: &[Param],
    bindings: Vec<Binding>,
    constraints: &[Predicate],
    out: &mut Vec<Branch>,
) {
    let d = img.len();
    let rr = rref_symbolic(img);
    if rr.rank() == d {
        let free = rr.free_entries();
        let wrt: Vec<Param> = fs.iter().chain(ts).cloned().collect();
        let valid = free.is_empty() || generic_rank(&free, &wrt) == free.len();
        out.push(Branch {
            rows: rr.row_codes(),
            valid,
            bindings: bindings.clone(),
            exact: true,
        });
    }
    if ts.is_empty() {
        return;
    }
    let mut eqs: Vec<Expr> = Vec::new();
    for e in rr
        .matrix
        .iter()
        .flatten()
        .chain(&rr.conditions)
        .chain(img.iter().flatten())
    {
        if e.is_literal_zero() || e.as_constant().is_some() {
            continue;
        }
        let n = Expr::from_poly(e.num().clone());
        if !eqs.contains(&n) {
            eqs.push(n);
        }
    }
    let mut seen: Vec<(Param, Formula)> = Vec::new();
    for e in &eqs {
        for t in ts {
            if !e.contains(t) {
                continue;
            }
            let SolveOutcome::Roots(roots) = solve_for(e, t) else {
                continue;
            };
            for s in roots {
                if s.is_conditional() || seen.iter().any(|(p, v)| p == t && *v == s.value) {
                    continue;
                }
                seen.push((t.clone(), s.value.clone()));
                let rest: Vec<Param> = ts.iter().filter(|u| *u != t).cloned().collect();
                let Some(mut next_bindings) = compose(&bindings, t, &s.value) else {
                    continue;
                };
                next_bindings.push(Binding {
                    param: t.clone(),
                    value: s.value.clone(),
                });
                match substitute_root(img, t, &s.value) {
                    Some(next) => explore(&next, fs, &rest, next_bindings, constraints, out),
                    None => {
                        if let Some(b) =
                            numeric_leaf(img, fs, &rest, t, &s.value, next_bindings, constraints)
                        {
                            out.push(b);
                        }
                    }
                }
            }
        }
    }
}

/// Pushes a new root into the earlier exact bindings. A root that makes an
/// earlier binding undefined (say `t4 = 1/t3` followed by `t3 = 0`) yields
/// `None`; roots outside the expression class leave them untouched.
fn compose(bindings: &[Binding], t: &Param, value: &Formula) -> Option<Vec<Binding>> {
    bindings
        .iter()
        .map(|b| {
            let Formula::Expr(e) = &b.value else {
                return Some(b.clone());
            };
            if !e.contains(t) {
                return Some(b.clone());
            }
            let v = match value {
                Formula::Expr(v) => e.substitute(t, v)?,
                _ => match substitute_root(&vec![vec![e.clone()]], t, value) {
                    Some(m) => m[0][0].clone(),
                    None => return Some(b.clone()),
                },
            };
            Some(Binding {
                param: b.param.clone(),
                value: Formula::Expr(v),
            })
        })
        .collect()
}

type Substitution<'a> = Box<dyn Fn(&Expr) -> Option<Expr> + 'a>;

/// Substitutes a root symbolically when the result stays in the expression
/// class: exact roots directly, logarithmic roots through their exponentials.
pub fn substitute_root(img: &Matrix, t: &Param, value: &Formula) -> Option<Matrix> {
    let sub: Substitution = match value {
        Formula::Expr(v) => Box::new(move |e: &Expr| e.substitute(t, v)),
        Formula::Div(n, s) => {
            let (Formula::Ln(x), Formula::Expr(slope)) = (n.as_ref(), s.as_ref()) else {
                return None;
            };
            let (Formula::Expr(x), Some(slope)) = (x.as_ref(), slope.as_constant()) else {
                return None;
            };
            let x = x.clone();
            Box::new(move |e: &Expr| e.substitute_log(t, &x, &slope))
        }
        _ => return None,
    };
    img.iter()
        .map(|row| row.iter().map(&sub).collect())
        .collect()
}

/// Classifies the image with `t` bound to a closed form outside the
/// expression class by row reducing at sample points. Samples must agree on
/// the reached codes; otherwise no branch is claimed.
fn numeric_leaf(
    img: &Matrix,
    fs: &[Param],
    rest: &[Param],
    t: &Param,
    value: &Formula,
    bindings: Vec<Binding>,
    constraints: &[Predicate],
) -> Option<Branch> {
    let d = img.len();
    let wrt: Vec<Param> = fs.iter().chain(rest).cloned().collect();
    let mut all: BTreeSet<Param> = img.iter().flatten().flat_map(Expr::params).collect();
    all.extend(value.params());
    all.extend(wrt.iter().cloned());
    all.remove(t);
    let sampler = Sampler::global().with_constraints(constraints);
    let n = wrt.len();
    let mut codes: Option<Vec<u32>> = None;
    let mut best = 0;
    let mut used = 0;
    for i in 0..LEAF_SAMPLES {
        let point = sampler.point(&all, i);
        let mut env = MapEnv(
            point
                .0
                .iter()
                .map(|(p, v)| {
                    let x = match wrt.iter().position(|w| w == p) {
                        Some(k) => Dual::variable(*v, k, n),
                        None => Dual::cst(*v),
                    };
                    (p.clone(), x)
                })
                .collect(),
        );
        let tv = value.eval(&env);
        if !tv.v.is_finite() {
            continue;
        }
        env.0.insert(t.clone(), tv);
        let m: Vec<Vec<Dual>> = img
            .iter()
            .map(|row| row.iter().map(|e| e.eval(&env)).collect())
            .collect();
        if m.iter().flatten().any(|x| !x.v.is_finite()) {
            continue;
        }
        let rr = numeric::rref(m);
        if rr.rank() < d {
            continue;
        }
        let c = rr.row_codes();
        match &codes {
            None => codes = Some(c),
            Some(prev) if *prev != c => return None,
            Some(_) => {}
        }
        let grads: Vec<Vec<f64>> = rr.free_entries().iter().map(|x| x.grad(n)).collect();
        if grads.iter().flatten().all(|x| x.is_finite()) {
            best = best.max(matrix_rank(&grads, n));
        }
        used += 1;
    }
    if used < LEAF_SAMPLES / 2 {
        return None;
    }
    let rows = codes?;
    let free: usize = rows.iter().map(|c| c.count_ones() as usize).sum::<usize>() - d;
    Some(Branch {
        rows,
        valid: free == 0 || best == free,
        bindings,
        exact: false,
    })
}
