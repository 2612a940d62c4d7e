use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use subopt_core::autgrp::generators;
use subopt_core::catalog::lookup;
use subopt_core::families::{candidates_nd, enumerate_1d};
use subopt_core::relation::{build_graph, optimal_system_with, GraphOptions, Options};

const ALGEBRAS: [&str; 3] = ["A_2+2A_1", "A_{4,6}^{a,b}", "A_{4,1}"];

fn edge_discovery(c: &mut Criterion) {
    let mut group = c.benchmark_group("edge_discovery");
    group.sample_size(10);
    for label in ALGEBRAS {
        let e = lookup(label).unwrap();
        let gens = generators(&e.algebra).unwrap();
        for d in 1..e.dim() {
            let vertices = if d == 1 {
                enumerate_1d(&e.algebra)
            } else {
                candidates_nd(&e.algebra, d)
            };
            for parallel in [false, true] {
                let mode = if parallel { "parallel" } else { "sequential" };
                let id = BenchmarkId::new(mode, format!("{label} d={d}"));
                group.bench_with_input(id, &vertices, |b, v| {
                    b.iter(|| {
                        build_graph(
                            &gens,
                            v.clone(),
                            e.algebra.constraints(),
                            GraphOptions {
                                word_length: 2,
                                parallel,
                            },
                        )
                    })
                });
            }
        }
    }
    group.finish();
}

fn whole_system(c: &mut Criterion) {
    let mut group = c.benchmark_group("optimal_system");
    group.sample_size(10);
    for label in ALGEBRAS {
        let e = lookup(label).unwrap();
        for parallel in [false, true] {
            let mode = if parallel { "parallel" } else { "sequential" };
            group.bench_function(BenchmarkId::new(mode, label), |b| {
                b.iter(|| {
                    let opts = Options {
                        parallel,
                        ..Options::default()
                    };
                    optimal_system_with(&e.algebra, &e.exponentials, &opts).unwrap()
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, edge_discovery, whole_system);
criterion_main!(benches);
