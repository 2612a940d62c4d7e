mod common;

use common::constants::{
    antisymmetric, apply_breakage, broken_constants, jacobi_holds, to_exprs, valid_constants,
};
use common::{
    catalog_generators, group_law_failure, nilpotent_asymmetry, oracle_failures,
    preorder_violation, system, with_instances,
};
use proptest::prelude::*;
use subopt_core::algebra::{AlgebraError, LieAlgebra};
use subopt_core::autgrp::verify_exponential;
use subopt_core::relation::DEFAULT_TRIALS;
use subopt_core::symx::{Expr, MapEnv, Param, Sampler};

#[test]
fn every_exponential_solves_its_ode() {
    for (label, alg, gens) in catalog_generators() {
        for g in &gens {
            let v = verify_exponential(&alg, g);
            assert!(v.passed(), "{label} generator {}: {v}", g.index + 1);
        }
    }
}

#[test]
fn group_law_holds_symbolically() {
    for (label, _, gens) in catalog_generators() {
        for g in &gens {
            assert_eq!(group_law_failure(g), None, "{label} A{}", g.index + 1);
        }
    }
}

fn eval_matrix(m: &[Vec<Expr>], env: &MapEnv<f64>) -> Vec<Vec<f64>> {
    m.iter()
        .map(|row| row.iter().map(|e| e.eval(env)).collect())
        .collect()
}

fn mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_law_holds_numerically(s in -2.0f64..2.0, t in -2.0f64..2.0, point in 0usize..1000) {
        for (label, alg, gens) in catalog_generators() {
            for g in gens.iter().filter(|g| !g.trivial) {
                let base = Sampler::global().with_constraints(alg.constraints()).point(alg.params(), point);
                let at = |v: f64| {
                    let mut env = base.clone();
                    env.0.insert(g.time.clone(), v);
                    env.0.insert(Param::pi(), std::f64::consts::PI);
                    eval_matrix(&g.matrix, &env)
                };
                let lhs = mul(&at(s), &at(t));
                let rhs = at(s + t);
                for (a, b) in lhs.iter().flatten().zip(rhs.iter().flatten()) {
                    prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()), "{} A{}: {} vs {}", label, g.index + 1, a, b);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn valid_structure_constants_are_accepted(c in valid_constants()) {
        prop_assert!(antisymmetric(&c) && jacobi_holds(&c));
        let r = c.len();
        let alg = LieAlgebra::from_structure_constants(r, to_exprs(&c), vec![], vec![]);
        prop_assert!(alg.is_ok(), "{:?}", alg.err());
        let alg = alg.unwrap();
        for a in 0..r {
            for b in 0..r {
                let x = alg.basis_vector(a);
                let y = alg.basis_vector(b);
                let xy = alg.bracket(&x, &y);
                let yx = alg.bracket(&y, &x);
                for g in 0..r {
                    prop_assert!(xy[g].add(&yx[g]).is_zero());
                    prop_assert_eq!(xy[g].as_constant(), Expr::int(c[a][b][g]).as_constant());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 50,
        max_global_rejects: 10_000,
        ..ProptestConfig::default()
    })]

    #[test]
    fn invalid_structure_constants_are_rejected((c, br) in broken_constants()) {
        let bad = apply_breakage(&c, &br);
        let anti_ok = antisymmetric(&bad);
        let jac_ok = jacobi_holds(&bad);
        prop_assume!(!(anti_ok && jac_ok));
        let res = LieAlgebra::from_structure_constants(bad.len(), to_exprs(&bad), vec![], vec![]);
        match res {
            Err(AlgebraError::AntisymmetryViolation(..)) => prop_assert!(!anti_ok),
            Err(AlgebraError::JacobiViolation(..)) => prop_assert!(anti_ok && !jac_ok),
            other => prop_assert!(false, "{:?} accepted as {:?}", bad, other.map(|_| ())),
        }
    }
}

#[test]
fn relation_is_a_preorder_on_every_graph() {
    for e in with_instances() {
        for d in &system(&e).dims {
            assert_eq!(preorder_violation(d), None, "{} d={}", e.label, d.dim);
        }
    }
}

#[test]
fn every_emitted_edge_passes_the_orbit_oracle() {
    let mut total = 0;
    for e in with_instances() {
        let (n, bad) = oracle_failures(&e, &system(&e), DEFAULT_TRIALS);
        assert!(bad.is_empty(), "{bad:#?}");
        total += n;
    }
    assert!(total > 1000);
}

#[test]
fn nilpotent_relation_is_asymmetric() {
    assert!(nilpotent_asymmetry());
}
