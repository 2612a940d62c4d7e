//! Replays edges numerically at random points.

use std::collections::BTreeSet;

use super::graph::{Edge, RelationGraph};
use super::image::{Binding, Word};
use super::numeric;
use crate::families::PFamily;
use crate::symx::{seed, Expr, MapEnv, Param, Predicate, Sampler};

pub const DEFAULT_TRIALS: usize = 32;

/// Outcome of replaying one edge.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub trials: usize,
    pub passed: usize,
    /// The first sample whose image had a different support.
    pub failure: Option<String>,
}

impl OracleReport {
    pub fn ok(&self) -> bool {
        self.trials > 0 && self.passed == self.trials
    }
}

/// Samples the family coefficients, algebra parameters and free times,
/// fixes the bound times from their formulas, and checks that the image
/// under the word row reduces to the target's support every time.
pub fn replay(
    word: &Word,
    source: &PFamily,
    target: &[u32],
    bindings: &[Binding],
    constraints: &[Predicate],
    trials: usize,
) -> OracleReport {
    let mut all: BTreeSet<Param> = source.coefficient_params().into_iter().collect();
    all.extend(word.times.iter().cloned());
    all.extend(word.matrix.iter().flatten().flat_map(Expr::params));
    for b in bindings {
        all.extend(b.value.params());
    }
    for b in bindings {
        all.remove(&b.param);
    }
    all.retain(|p| !p.is_pi());
    let sampler = Sampler::new(seed() ^ 0x6f72_6163_6c65).with_constraints(constraints);
    let mut report = OracleReport {
        trials: 0,
        passed: 0,
        failure: None,
    };
    let mut index = 0;
    while report.trials < trials && index < trials * 4 {
        let mut env: MapEnv<f64> = sampler.point(&all, index);
        index += 1;
        let mut finite = true;
        for b in bindings.iter().rev() {
            let v = b.value.eval(&env);
            finite &= v.is_finite();
            env.0.insert(b.param.clone(), v);
        }
        if !finite {
            continue;
        }
        let a: Vec<Vec<f64>> = word
            .matrix
            .iter()
            .map(|row| row.iter().map(|e| e.eval(&env)).collect())
            .collect();
        let m: Vec<Vec<f64>> = source
            .matrix()
            .iter()
            .map(|row| row.iter().map(|e| e.eval(&env)).collect())
            .collect();
        let img: Vec<Vec<f64>> = m
            .iter()
            .map(|row| {
                (0..a.len())
                    .map(|g| (0..row.len()).map(|j| a[g][j] * row[j]).sum())
                    .collect()
            })
            .collect();
        if img.iter().flatten().any(|x| !x.is_finite()) {
            continue;
        }
        report.trials += 1;
        let got = numeric::rref(img).row_codes();
        if got == target {
            report.passed += 1;
        } else if report.failure.is_none() {
            let at: Vec<String> = env.0.iter().map(|(p, v)| format!("{p}={v:.6}")).collect();
            report.failure = Some(format!("reached {got:?} at {}", at.join(", ")));
        }
    }
    report
}

/// Replays one edge of `graph`.
pub fn orbit_oracle(
    graph: &RelationGraph,
    edge: &Edge,
    constraints: &[Predicate],
    trials: usize,
) -> OracleReport {
    replay(
        &graph.words[edge.word],
        &graph.vertices[edge.source],
        graph.vertices[edge.target].rows(),
        &edge.bindings,
        constraints,
        trials,
    )
}
