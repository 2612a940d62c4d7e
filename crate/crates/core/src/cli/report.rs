//! Human-readable and JSON reports of an optimal-system run.

use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::document::serialize_algebra;
use crate::algebra::LieAlgebra;
use crate::catalog::CatalogEntry;
use crate::families::{slex_compare, CoefKind};
use crate::relation::{orbit_oracle, DimensionSystem, OptimalSystem};

/// Version tag of the JSON layout. Bump when fields change meaning.
pub const SCHEMA: &str = "subopt-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub algebra: AlgebraInfo,
    pub seed: u64,
    pub word_length: usize,
    pub oracle_trials: usize,
    pub generators: Vec<GeneratorInfo>,
    pub dimensions: Vec<DimensionReport>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraInfo {
    pub label: Option<String>,
    pub dim: usize,
    pub document: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorInfo {
    /// One-based basis index.
    pub index: usize,
    pub trivial: bool,
    pub method: String,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientInfo {
    /// One-based, row-major over the free entries.
    pub index: usize,
    pub kind: CoefKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentativeInfo {
    pub code_tuple: Vec<u32>,
    pub coefficients: Vec<CoefficientInfo>,
    pub component_id: usize,
    /// One-based slex position among the vertices.
    pub position: usize,
    pub rendering: String,
    pub raw_indegree: usize,
    pub reach_indegree: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleInfo {
    pub trials: usize,
    pub passed: usize,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeInfo {
    pub source: usize,
    pub target: usize,
    pub word: String,
    /// Empty for the generic image.
    pub witness: Vec<String>,
    pub exact: bool,
    pub oracle: Option<OracleInfo>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExclusionInfo {
    pub code_tuple: Vec<u32>,
    pub reason: String,
    /// Set when the reference lists a subalgebra arising from this shape.
    pub reference_note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub dim: usize,
    pub vertices: Vec<Vec<u32>>,
    pub representatives: Vec<RepresentativeInfo>,
    /// Strongly connected components as one-based positions.
    pub components: Vec<Vec<usize>>,
    pub weak_components: Vec<Vec<usize>>,
    pub edges: Vec<EdgeInfo>,
    pub exclusions: Vec<ExclusionInfo>,
    /// Valid image shapes that are not candidates.
    pub unmatched_images: Vec<Vec<u32>>,
}

pub fn pretty(ascii: &str) -> String {
    ascii
        .replace(" Xi", "Xi")
        .replace(",", ", ")
        .replace("alpha", "α")
        .replace("Xi", "Ξ")
}

fn positions(comps: &[Vec<usize>]) -> Vec<Vec<usize>> {
    comps
        .iter()
        .map(|c| c.iter().map(|v| v + 1).collect())
        .collect()
}

fn dimension_report(
    ds: &DimensionSystem,
    alg: &LieAlgebra,
    entry: Option<&CatalogEntry>,
    trials: usize,
    warnings: &mut Vec<String>,
) -> DimensionReport {
    let g = &ds.graph;
    let mut reps: Vec<&crate::relation::Representative> = ds.representatives.iter().collect();
    reps.sort_by(|a, b| slex_compare(&a.family, &b.family));
    let representatives = reps
        .iter()
        .map(|r| RepresentativeInfo {
            code_tuple: r.family.rows().to_vec(),
            coefficients: r
                .kinds
                .iter()
                .enumerate()
                .map(|(i, k)| CoefficientInfo {
                    index: i + 1,
                    kind: *k,
                })
                .collect(),
            component_id: r.component,
            position: r.vertex + 1,
            rendering: r.render(),
            raw_indegree: r.raw_indegree,
            reach_indegree: r.reach_indegree,
        })
        .collect();
    let edges = g
        .edges
        .iter()
        .map(|e| {
            let oracle = (trials > 0).then(|| {
                let o = orbit_oracle(g, e, alg.constraints(), trials);
                if !o.ok() {
                    warnings.push(format!(
                        "d={}: oracle rejected edge {} -> {} via {}: {}",
                        ds.dim,
                        e.source + 1,
                        e.target + 1,
                        g.words[e.word],
                        o.failure.clone().unwrap_or_default()
                    ));
                }
                OracleInfo {
                    trials: o.trials,
                    passed: o.passed,
                    failure: o.failure,
                }
            });
            EdgeInfo {
                source: e.source + 1,
                target: e.target + 1,
                word: g.words[e.word].to_string(),
                witness: e.bindings.iter().map(|b| b.to_string()).collect(),
                exact: e.exact,
                oracle,
            }
        })
        .collect();
    let notes: Vec<_> = entry
        .map(|e| e.exclusions.iter().filter(|x| x.dim == ds.dim).collect())
        .unwrap_or_default();
    let exclusions = ds
        .rejected
        .iter()
        .map(|(f, why)| ExclusionInfo {
            code_tuple: f.rows().to_vec(),
            reason: why.to_string(),
            reference_note: notes
                .iter()
                .find(|x| x.rows == f.rows())
                .map(|x| x.note.to_string()),
        })
        .collect();
    for n in &notes {
        if !ds
            .rejected
            .iter()
            .any(|(f, _)| f.rows() == n.rows.as_slice())
        {
            warnings.push(format!(
                "d={}: expected exclusion {:?} is a candidate here",
                ds.dim, n.rows
            ));
        } else {
            warnings.push(format!(
                "d={}: excluded {:?}, not a p-family: {}",
                ds.dim, n.rows, n.note
            ));
        }
    }
    if let Some(e) = entry {
        for dv in e.divergences.iter().filter(|d| d.dim == ds.dim) {
            if let Some(r) = reps.iter().find(|r| r.family.rows() == dv.rows.as_slice()) {
                if r.kinds != dv.printed {
                    warnings.push(format!(
                        "d={}: {} annotated {:?} here, reference prints {:?} ({})",
                        ds.dim,
                        pretty(&r.render()),
                        r.kinds,
                        dv.printed,
                        dv.note
                    ));
                }
            }
        }
        if let Some(exp) = e.expected(ds.dim) {
            let mut got: Vec<Vec<u32>> = ds.rows();
            got.sort();
            let mut want: Vec<Vec<u32>> = exp.families.iter().map(|f| f.rows.clone()).collect();
            want.sort();
            let ok = if exp.complete {
                got == want
            } else {
                want.iter().all(|w| got.contains(w))
            };
            if !ok {
                warnings.push(format!(
                    "d={}: representatives differ from the reference listing",
                    ds.dim
                ));
            }
        }
    }
    let mut unmatched: Vec<Vec<u32>> = g.unmatched.iter().map(|u| u.rows.clone()).collect();
    unmatched.sort();
    unmatched.dedup();
    DimensionReport {
        dim: ds.dim,
        vertices: g.vertices.iter().map(|v| v.rows().to_vec()).collect(),
        representatives,
        components: positions(&ds.components),
        weak_components: positions(&ds.weak_components),
        edges,
        exclusions,
        unmatched_images: unmatched,
    }
}

/// Assembles the report, replaying every edge with `trials` oracle samples
/// (none when zero).
pub fn build_report(
    alg: &LieAlgebra,
    sys: &OptimalSystem,
    entry: Option<&CatalogEntry>,
    overrides: &[(usize, crate::autgrp::Matrix)],
    trials: usize,
    seed: u64,
) -> Report {
    let mut warnings = Vec::new();
    let generators = sys
        .generators
        .iter()
        .map(|g| GeneratorInfo {
            index: g.index + 1,
            trivial: g.trivial,
            method: format!("{:?}", g.method).to_lowercase(),
            matrix: g
                .matrix
                .iter()
                .map(|r| r.iter().map(|e| e.to_string()).collect())
                .collect(),
        })
        .collect();
    let dimensions = sys
        .dims
        .iter()
        .map(|d| dimension_report(d, alg, entry, trials, &mut warnings))
        .collect();
    Report {
        schema: SCHEMA.to_string(),
        algebra: AlgebraInfo {
            label: alg.label().map(String::from),
            dim: alg.dim(),
            document: serialize_algebra(alg, overrides),
        },
        seed,
        word_length: sys.word_length,
        oracle_trials: trials,
        generators,
        dimensions,
        warnings,
    }
}

pub fn to_json(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
    s.push('\n');
    s
}

pub fn from_json(s: &str) -> Result<Report, serde_json::Error> {
    serde_json::from_str(s)
}

fn superscript(d: usize) -> String {
    const S: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    d.to_string()
        .chars()
        .map(|c| S[c.to_digit(10).unwrap() as usize])
        .collect()
}

/// Text form: Ψ listings, component tables and edge witnesses.
pub fn render_text(r: &Report, elapsed: Option<Duration>) -> String {
    let mut o = String::new();
    let name = r.algebra.label.clone().unwrap_or_else(|| "algebra".into());
    let _ = writeln!(o, "{name} (dimension {})", r.algebra.dim);
    let _ = writeln!(
        o,
        "word length {}, seed {}, oracle trials {}",
        r.word_length, r.seed, r.oracle_trials
    );
    let _ = writeln!(o);
    let _ = writeln!(o, "Generators");
    for g in &r.generators {
        let tag = if g.trivial {
            "identity"
        } else {
            g.method.as_str()
        };
        let rows: Vec<String> = g
            .matrix
            .iter()
            .map(|row| format!("[{}]", row.join(", ")))
            .collect();
        let _ = writeln!(o, "  A{} ({tag}): {}", g.index, rows.join(" "));
    }
    for d in &r.dimensions {
        let _ = writeln!(o);
        let listing: Vec<String> = d
            .representatives
            .iter()
            .map(|x| format!("{{{}}}", pretty(&x.rendering)))
            .collect();
        let _ = writeln!(o, "Ψ{} = {}", superscript(d.dim), listing.join(", "));
        let _ = writeln!(
            o,
            "  {} candidates, {} edges, {} strong / {} weak components",
            d.vertices.len(),
            d.edges.len(),
            d.components.len(),
            d.weak_components.len()
        );
        let _ = writeln!(
            o,
            "  {:>4}  {:<14} {:>5} {:>5} {:>5}  family",
            "pos", "codes", "comp", "indeg", "reach"
        );
        for x in &d.representatives {
            let _ = writeln!(
                o,
                "  {:>4}  {:<14} {:>5} {:>5} {:>5}  {}",
                x.position,
                format!("{:?}", x.code_tuple),
                x.component_id,
                x.raw_indegree,
                x.reach_indegree,
                pretty(&x.rendering)
            );
        }
        for (i, c) in d.components.iter().enumerate() {
            let _ = writeln!(o, "  component {i}: {c:?}");
        }
        let mut shown: Vec<(usize, usize)> = Vec::new();
        for e in &d.edges {
            if shown.contains(&(e.source, e.target)) {
                continue;
            }
            shown.push((e.source, e.target));
            let witness = if e.witness.is_empty() {
                "generic".to_string()
            } else {
                e.witness.join(", ")
            };
            let oracle = e
                .oracle
                .as_ref()
                .map(|x| format!(" oracle {}/{}", x.passed, x.trials))
                .unwrap_or_default();
            let exact = if e.exact { "" } else { " (sampled)" };
            let _ = writeln!(
                o,
                "  {} -> {} via {} [{witness}]{exact}{oracle}",
                e.source, e.target, e.word
            );
        }
        for x in d.exclusions.iter().filter(|x| x.reference_note.is_some()) {
            let _ = writeln!(
                o,
                "  excluded {:?}: {} ({})",
                x.code_tuple,
                x.reason,
                x.reference_note.as_deref().unwrap_or("")
            );
        }
        let others = d
            .exclusions
            .iter()
            .filter(|x| x.reference_note.is_none())
            .count();
        if others > 0 {
            let _ = writeln!(o, "  {others} shapes fail the closure condition");
        }
    }
    if !r.warnings.is_empty() {
        let _ = writeln!(o);
        for w in &r.warnings {
            let _ = writeln!(o, "warning: {w}");
        }
    }
    if let Some(t) = elapsed {
        let _ = writeln!(o);
        let _ = writeln!(o, "elapsed {:.3} s", t.as_secs_f64());
    }
    o
}
