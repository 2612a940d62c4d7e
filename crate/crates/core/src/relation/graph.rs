//! The relation graph over candidate families and its components.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use petgraph::unionfind::UnionFind;

use super::image::{image_patterns, words, Binding, Word};
use crate::autgrp::GeneratorAutomorphism;
use crate::families::{slex_key, PFamily};
use crate::symx::Predicate;

/// A directed edge `source → target` realised by one word.
#[derive(Debug, Clone)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    /// Index into [`RelationGraph::words`].
    pub word: usize,
    /// Empty when the generic image already has the target's shape.
    pub bindings: Vec<Binding>,
    pub exact: bool,
}

impl Edge {
    pub fn is_generic(&self) -> bool {
        self.bindings.is_empty()
    }
}

/// A valid image shape that is not among the vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Unmatched {
    pub source: usize,
    pub word: usize,
    pub rows: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct RelationGraph {
    pub dim: usize,
    pub vertices: Vec<PFamily>,
    pub words: Vec<Word>,
    pub edges: Vec<Edge>,
    pub unmatched: Vec<Unmatched>,
}

#[derive(Debug, Clone, Copy)]
pub struct GraphOptions {
    pub word_length: usize,
    pub parallel: bool,
}

fn act(
    v: usize,
    w: usize,
    fam: &PFamily,
    word: &Word,
    vertices: &[PFamily],
    constraints: &[Predicate],
) -> (Vec<Edge>, Vec<Unmatched>) {
    let mut edges: Vec<Edge> = Vec::new();
    let mut unmatched = Vec::new();
    for b in image_patterns(word, fam, constraints) {
        if !b.valid {
            continue;
        }
        let Some(target) = vertices.iter().position(|x| x.rows() == b.rows.as_slice()) else {
            if !unmatched.iter().any(|u: &Unmatched| u.rows == b.rows) {
                unmatched.push(Unmatched {
                    source: v,
                    word: w,
                    rows: b.rows,
                });
            }
            continue;
        };
        if target == v {
            continue;
        }
        let e = Edge {
            source: v,
            target,
            word: w,
            bindings: b.bindings,
            exact: b.exact,
        };
        match edges.iter_mut().find(|x| x.target == target) {
            Some(x) if e.exact && !x.exact => *x = e,
            Some(_) => {}
            None => edges.push(e),
        }
    }
    (edges, unmatched)
}

/// Acts with every word on every vertex and records the edges found.
pub fn build_graph(
    gens: &[GeneratorAutomorphism],
    vertices: Vec<PFamily>,
    constraints: &[Predicate],
    opts: GraphOptions,
) -> RelationGraph {
    let dim = vertices.first().map_or(0, PFamily::dim);
    let ws = words(gens, opts.word_length);
    let jobs: Vec<(usize, usize)> = (0..vertices.len())
        .flat_map(|v| (0..ws.len()).map(move |w| (v, w)))
        .collect();
    let run = |&(v, w): &(usize, usize)| act(v, w, &vertices[v], &ws[w], &vertices, constraints);
    let results: Vec<(Vec<Edge>, Vec<Unmatched>)> = if opts.parallel {
        par_map(&jobs, run)
    } else {
        jobs.iter().map(run).collect()
    };
    let mut edges = Vec::new();
    let mut unmatched = Vec::new();
    for (e, u) in results {
        edges.extend(e);
        unmatched.extend(u);
    }
    RelationGraph {
        dim,
        vertices,
        words: ws,
        edges,
        unmatched,
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, R, F: Fn(&T) -> R>(items: &[T], f: F) -> Vec<R> {
    items.iter().map(f).collect()
}

impl RelationGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, rows: &[u32]) -> Option<usize> {
        self.vertices.iter().position(|v| v.rows() == rows)
    }

    pub fn adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut a = vec![vec![false; n]; n];
        for e in &self.edges {
            a[e.source][e.target] = true;
        }
        a
    }

    pub fn has_edge(&self, s: usize, t: usize) -> bool {
        self.edges.iter().any(|e| e.source == s && e.target == t)
    }

    /// Edges from `s` to `t`, exact and generic ones first.
    pub fn edges_between(&self, s: usize, t: usize) -> Vec<&Edge> {
        let mut v: Vec<&Edge> = self
            .edges
            .iter()
            .filter(|e| e.source == s && e.target == t)
            .collect();
        v.sort_by_key(|e| (!e.exact, !e.is_generic()));
        v
    }

    /// Number of distinct vertices with an edge into `v`.
    pub fn raw_indegree(&self, v: usize) -> usize {
        let a = self.adjacency();
        (0..self.len()).filter(|&u| a[u][v]).count()
    }

    /// Number of other vertices from which `v` can be reached.
    pub fn reach_indegree(&self, v: usize) -> usize {
        let a = self.adjacency();
        let mut seen = vec![false; self.len()];
        let mut stack = vec![v];
        seen[v] = true;
        while let Some(x) = stack.pop() {
            for u in 0..self.len() {
                if a[u][x] && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.iter().filter(|&&s| s).count() - 1
    }

    pub fn reachable(&self, from: usize, to: usize) -> bool {
        let a = self.adjacency();
        let mut seen = vec![false; self.len()];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(x) = stack.pop() {
            if x == to {
                return true;
            }
            for y in 0..self.len() {
                if a[x][y] && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    }

    fn digraph(&self) -> DiGraph<(), ()> {
        let mut g = DiGraph::new();
        let nodes: Vec<_> = (0..self.len()).map(|_| g.add_node(())).collect();
        for e in &self.edges {
            g.update_edge(nodes[e.source], nodes[e.target], ());
        }
        g
    }
}

fn sorted(mut comps: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for c in &mut comps {
        c.sort_unstable();
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Components of the graph with edge directions ignored.
pub fn weak_components(g: &RelationGraph) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(g.len());
    for e in &g.edges {
        uf.union(e.source, e.target);
    }
    let labels = uf.into_labeling();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for (v, l) in labels.iter().enumerate() {
        match seen.iter().position(|x| x == l) {
            Some(i) => comps[i].push(v),
            None => {
                seen.push(*l);
                comps.push(vec![v]);
            }
        }
    }
    sorted(comps)
}

/// Sets of mutually reachable vertices.
pub fn strong_components(g: &RelationGraph) -> Vec<Vec<usize>> {
    let comps = tarjan_scc(&g.digraph())
        .into_iter()
        .map(|c| c.into_iter().map(|n| n.index()).collect())
        .collect();
    sorted(comps)
}

/// The member of a component with maximal reachability indegree, ties
/// broken by the slex order.
pub fn representative(g: &RelationGraph, component: &[usize]) -> usize {
    *component
        .iter()
        .min_by_key(|&&v| {
            (
                std::cmp::Reverse(g.reach_indegree(v)),
                slex_key(g.vertices[v].rows()),
            )
        })
        .expect("components are nonempty")
}
