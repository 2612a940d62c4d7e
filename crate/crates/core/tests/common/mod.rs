#![allow(dead_code)]

pub mod constants;

use std::collections::BTreeSet;

use subopt_core::algebra::LieAlgebra;
use subopt_core::autgrp::{all_generators_with, mat_mul, GeneratorAutomorphism};
use subopt_core::catalog::{entries, CatalogEntry, ExpectedFamily};
use subopt_core::relation::{
    optimal_system_with, orbit_oracle, DimensionSystem, OptimalSystem, Options, RelationGraph,
};
use subopt_core::symx::{Expr, MapEnv, Param};

pub fn system(e: &CatalogEntry) -> OptimalSystem {
    system_with(e, Options::default())
}

pub fn system_with(e: &CatalogEntry, opts: Options) -> OptimalSystem {
    optimal_system_with(&e.algebra, &e.exponentials, &opts)
        .unwrap_or_else(|err| panic!("{}: {err}", e.label))
}

pub fn computed(sys: &OptimalSystem, d: usize) -> Vec<ExpectedFamily> {
    sys.dim(d)
        .map(|s| {
            s.representatives
                .iter()
                .map(|r| ExpectedFamily {
                    rows: r.family.rows().to_vec(),
                    kinds: r.kinds.clone(),
                })
                .collect()
        })
        .unwrap_or_default()
}

/// Differences between a computed system and the entry's fixtures. Complete
/// fixtures must match as sets; partial ones must be contained.
pub fn fixture_mismatches(e: &CatalogEntry, sys: &OptimalSystem) -> Vec<String> {
    let mut out = Vec::new();
    for exp in &e.expected {
        let got: BTreeSet<_> = computed(sys, exp.dim)
            .into_iter()
            .map(|f| (f.rows, f.kinds))
            .collect();
        let want: BTreeSet<_> = exp
            .families
            .iter()
            .map(|f| (f.rows.clone(), f.kinds.clone()))
            .collect();
        let missing: Vec<_> = want.difference(&got).collect();
        let extra: Vec<_> = got.difference(&want).collect();
        if !missing.is_empty() || (exp.complete && !extra.is_empty()) {
            out.push(format!(
                "{} d={}: missing {missing:?}, extra {extra:?}",
                e.label, exp.dim
            ));
        }
    }
    out
}

pub fn row_sets(sys: &OptimalSystem, d: usize) -> BTreeSet<Vec<u32>> {
    computed(sys, d).into_iter().map(|f| f.rows).collect()
}

/// Slex positions (1-based) against the reference vertex ordering.
pub fn legend_mismatches(e: &CatalogEntry, sys: &OptimalSystem) -> Vec<String> {
    let mut out = Vec::new();
    for (d, legend) in &e.legends {
        let Some(s) = sys.dim(*d) else {
            out.push(format!("{} d={d}: not computed", e.label));
            continue;
        };
        let got: Vec<Vec<u32>> = s.graph.vertices.iter().map(|v| v.rows().to_vec()).collect();
        if &got != legend {
            out.push(format!("{} d={d}: legend {got:?} != {legend:?}", e.label));
        }
    }
    out
}

/// Some edge `from -> to` (1-based positions) fixes `time` to `value`.
pub fn witnessed_at(g: &RelationGraph, from: usize, to: usize, time: &str, value: f64) -> bool {
    g.edges_between(from - 1, to - 1).iter().any(|e| {
        e.bindings.iter().any(|b| {
            if b.param.name() != time {
                return false;
            }
            let env = MapEnv(
                b.value
                    .params()
                    .into_iter()
                    .map(|p| {
                        let v = if p.is_pi() {
                            std::f64::consts::PI
                        } else {
                            f64::NAN
                        };
                        (p, v)
                    })
                    .collect(),
            );
            (b.value.eval(&env) - value).abs() < 1e-12
        })
    })
}

pub fn position(g: &RelationGraph, rows: &[u32]) -> usize {
    g.index_of(rows).expect("vertex present") + 1
}

/// Every entry followed by its concrete instantiations.
pub fn with_instances() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for e in entries() {
        let inst: Vec<CatalogEntry> = e
            .instantiations
            .iter()
            .map(|v| e.instantiate(v).unwrap())
            .collect();
        out.push(e);
        out.extend(inst);
    }
    out
}

pub fn catalog_generators() -> Vec<(String, LieAlgebra, Vec<GeneratorAutomorphism>)> {
    with_instances()
        .into_iter()
        .map(|e| {
            let g = all_generators_with(&e.algebra, &e.exponentials).unwrap();
            (e.label.to_string(), e.algebra, g)
        })
        .collect()
}

/// First entry where `A(s)·A(u) != A(s+u)` does not reduce to zero.
pub fn group_law_failure(g: &GeneratorAutomorphism) -> Option<(usize, usize)> {
    let s = Param::time("s");
    let u = Param::time("u");
    let at = |v: &Expr| -> Vec<Vec<Expr>> {
        g.matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.substitute(&g.time, v).unwrap())
                    .collect()
            })
            .collect()
    };
    let prod = mat_mul(&at(&Expr::param(&s)), &at(&Expr::param(&u)));
    let joint = at(&Expr::param(&s).add(&Expr::param(&u)));
    for (i, (a, b)) in prod.iter().zip(&joint).enumerate() {
        for (j, (x, y)) in a.iter().zip(b).enumerate() {
            if !x.sub(y).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Checks reflexivity and transitivity of reachability, and that strong
/// components are exactly its equivalence classes.
pub fn preorder_violation(d: &DimensionSystem) -> Option<String> {
    let g = &d.graph;
    let n = g.len();
    let reach: Vec<Vec<bool>> = (0..n)
        .map(|a| (0..n).map(|b| g.reachable(a, b)).collect())
        .collect();
    for a in 0..n {
        if !reach[a][a] {
            return Some(format!("{} not reflexive", a + 1));
        }
        for b in 0..n {
            if g.has_edge(a, b) && !reach[a][b] {
                return Some(format!("edge {} -> {} unreachable", a + 1, b + 1));
            }
            if !reach[a][b] {
                continue;
            }
            if let Some(c) = (0..n).find(|&c| reach[b][c] && !reach[a][c]) {
                return Some(format!("{} -> {} -> {} not closed", a + 1, b + 1, c + 1));
            }
        }
    }
    for comp in &d.components {
        if comp.iter().any(|&a| comp.iter().any(|&b| !reach[a][b])) {
            return Some(format!("component {comp:?} not mutually reachable"));
        }
    }
    for (i, x) in d.components.iter().enumerate() {
        for y in &d.components[i + 1..] {
            if reach[x[0]][y[0]] && reach[y[0]][x[0]] {
                return Some(format!("components {x:?} and {y:?} should merge"));
            }
        }
    }
    None
}

/// Replays every edge; returns (edges, failures).
pub fn oracle_failures(
    e: &CatalogEntry,
    sys: &OptimalSystem,
    trials: usize,
) -> (usize, Vec<String>) {
    let mut total = 0;
    let mut bad = Vec::new();
    for d in &sys.dims {
        for edge in &d.graph.edges {
            total += 1;
            let rep = orbit_oracle(&d.graph, edge, e.algebra.constraints(), trials);
            if !rep.ok() {
                bad.push(format!(
                    "{} d={}: {} -> {} via {}: {:?}",
                    e.label,
                    d.dim,
                    edge.source + 1,
                    edge.target + 1,
                    d.graph.words[edge.word],
                    rep
                ));
            }
        }
    }
    (total, bad)
}

/// The directed edge between the two nilpotent line families exists one
/// way only.
pub fn nilpotent_asymmetry() -> bool {
    let e = subopt_core::catalog::lookup("A_{4,1}").unwrap();
    let sys = system_with(
        &e,
        Options {
            dims: vec![1],
            ..Options::default()
        },
    );
    let g = &sys.dims[0].graph;
    let (u, v) = (g.index_of(&[6]).unwrap(), g.index_of(&[7]).unwrap());
    g.has_edge(u, v) && !g.has_edge(v, u) && !g.reachable(v, u)
}
