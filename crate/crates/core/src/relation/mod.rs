//! Optimal systems from the relation graph.
//!
//! Candidate families of one dimension become vertices. Every automorphism
//! word acts on every vertex, and each image shape that is again a vertex
//! yields an edge. One representative is kept per strongly connected
//! component.

pub mod graph;
pub mod image;
pub mod numeric;
pub mod oracle;
pub mod rescale;

pub use graph::{
    build_graph, representative, strong_components, weak_components, Edge, GraphOptions,
    RelationGraph, Unmatched,
};
pub use image::{apply, image_patterns, words, Binding, Branch, Word};
pub use oracle::{orbit_oracle, replay, OracleReport, DEFAULT_TRIALS};
pub use rescale::{classify, scaling_rates};

use crate::algebra::LieAlgebra;
use crate::autgrp::{all_generators_with, AutError, GeneratorAutomorphism, Matrix};
use crate::families::{
    candidates_with_rejections, enumerate_1d, ClosureFailure, CoefKind, PFamily,
};

pub const DEFAULT_WORD_LENGTH: usize = 2;

#[derive(Debug, Clone)]
pub struct Options {
    /// Dimensions to compute; all of `1..r` when empty.
    pub dims: Vec<usize>,
    pub word_length: usize,
    /// Spread vertex/word pairs over the rayon pool when the `parallel`
    /// feature is on.
    pub parallel: bool,
}

impl Default for Options {
    fn default() -> Options {
        Options {
            dims: Vec::new(),
            word_length: DEFAULT_WORD_LENGTH,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Representative {
    pub vertex: usize,
    pub component: usize,
    pub family: PFamily,
    pub kinds: Vec<CoefKind>,
    pub raw_indegree: usize,
    pub reach_indegree: usize,
}

impl Representative {
    pub fn render(&self) -> String {
        self.family.render(Some(&self.kinds))
    }
}

#[derive(Debug, Clone)]
pub struct DimensionSystem {
    pub dim: usize,
    pub graph: RelationGraph,
    /// Strongly connected components, ordered by smallest member.
    pub components: Vec<Vec<usize>>,
    pub weak_components: Vec<Vec<usize>>,
    pub representatives: Vec<Representative>,
    pub rejected: Vec<(PFamily, ClosureFailure)>,
}

impl DimensionSystem {
    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.representatives
            .iter()
            .map(|r| r.family.rows().to_vec())
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct OptimalSystem {
    pub generators: Vec<GeneratorAutomorphism>,
    pub word_length: usize,
    pub dims: Vec<DimensionSystem>,
}

impl OptimalSystem {
    pub fn dim(&self, d: usize) -> Option<&DimensionSystem> {
        self.dims.iter().find(|s| s.dim == d)
    }
}

pub fn optimal_system(alg: &LieAlgebra, opts: &Options) -> Result<OptimalSystem, AutError> {
    optimal_system_with(alg, &[], opts)
}

/// As [`optimal_system`] with closed-form exponentials supplied for some
/// generators.
pub fn optimal_system_with(
    alg: &LieAlgebra,
    overrides: &[(usize, Matrix)],
    opts: &Options,
) -> Result<OptimalSystem, AutError> {
    let generators = all_generators_with(alg, overrides)?;
    let nontrivial: Vec<GeneratorAutomorphism> =
        generators.iter().filter(|g| !g.trivial).cloned().collect();
    let r = alg.dim();
    let dims: Vec<usize> = if opts.dims.is_empty() {
        (1..r).collect()
    } else {
        opts.dims
            .iter()
            .copied()
            .filter(|&d| d >= 1 && d < r)
            .collect()
    };
    let graph_opts = GraphOptions {
        word_length: opts.word_length,
        parallel: opts.parallel,
    };
    let systems = dims
        .into_iter()
        .map(|d| dimension_system(alg, &nontrivial, d, graph_opts))
        .collect();
    Ok(OptimalSystem {
        generators,
        word_length: opts.word_length,
        dims: systems,
    })
}

/// The optimal system in one dimension.
pub fn dimension_system(
    alg: &LieAlgebra,
    gens: &[GeneratorAutomorphism],
    d: usize,
    opts: GraphOptions,
) -> DimensionSystem {
    let (vertices, rejected) = if d == 1 {
        (enumerate_1d(alg), Vec::new())
    } else {
        candidates_with_rejections(alg, d)
    };
    let graph = build_graph(gens, vertices, alg.constraints(), opts);
    let components = strong_components(&graph);
    let weak = weak_components(&graph);
    let representatives = components
        .iter()
        .enumerate()
        .map(|(c, comp)| {
            let v = representative(&graph, comp);
            let family = graph.vertices[v].clone();
            Representative {
                vertex: v,
                component: c,
                kinds: classify(gens, &family),
                family,
                raw_indegree: graph.raw_indegree(v),
                reach_indegree: graph.reach_indegree(v),
            }
        })
        .collect();
    DimensionSystem {
        dim: d,
        graph,
        components,
        weak_components: weak,
        representatives,
        rejected,
    }
}
