use super::dot::{parse_edges, parse_legend};
use super::*;
use crate::autgrp::generators;
use crate::catalog::{entries, lookup};
use crate::families::enumerate_1d;
use crate::relation::{build_graph, optimal_system, GraphOptions, Options};

fn same_constants(a: &crate::algebra::LieAlgebra, b: &crate::algebra::LieAlgebra) -> bool {
    let r = a.dim();
    r == b.dim()
        && (0..r).all(|i| {
            (0..r).all(|j| (0..r).all(|k| (a.constant(i, j, k) - b.constant(i, j, k)).is_zero()))
        })
}

#[test]
fn parses_the_documented_examples() {
    let a = parse_algebra("dim 3; [e1,e2]=e1; [e1,e3]=-2 e2; [e2,e3]=e3").unwrap();
    assert!(same_constants(&a, &lookup("A_{3,8}").unwrap().algebra));

    let text =
        "dim 4; param a (a!=0); param b (b>=0); [e1,e4]=a e1; [e2,e4]=b e2 - e3; [e3,e4]=e2 + b e3";
    let a = parse_algebra(text).unwrap();
    assert_eq!(a.params().len(), 2);
    assert_eq!(a.constraints().len(), 2);
    assert!(same_constants(
        &a,
        &lookup("A_{4,6}^{a,b}").unwrap().algebra
    ));

    let a = parse_algebra("dim 2").unwrap();
    assert!(a.is_abelian());
}

#[test]
fn errors_carry_positions() {
    match parse_algebra("dim 3\n[e1,e2] = e1 + $") {
        Err(DocumentError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 16)),
        other => panic!("{other:?}"),
    }
    match parse_algebra("dim 3; [e1,e9] = e1") {
        Err(DocumentError::Syntax {
            line,
            column,
            message,
        }) => {
            assert_eq!((line, column), (1, 12));
            assert!(message.contains("e9"));
        }
        other => panic!("{other:?}"),
    }
    match parse_algebra("dim 3; [e1,e2]=e3; [e2,e3]=e2") {
        Err(DocumentError::Algebra(crate::algebra::AlgebraError::JacobiViolation(..))) => {}
        other => panic!("{other:?}"),
    }
    assert!(parse_algebra("[e1,e2]=e1").is_err());
    assert!(parse_algebra("dim 3; [e1,e2]=a e1").is_err());
}

#[test]
fn catalog_round_trips() {
    for e in entries() {
        let text = serialize_algebra(&e.algebra, &e.exponentials);
        let doc = parse_document(&text).unwrap_or_else(|err| panic!("{}: {err}\n{text}", e.label));
        let back = doc.algebra().unwrap();
        assert!(same_constants(&e.algebra, &back), "{}", e.label);
        assert_eq!(
            back.constraints().len(),
            e.algebra.constraints().len(),
            "{}",
            e.label
        );
        assert_eq!(back.label(), e.algebra.label());
        assert_eq!(serialize_algebra(&back, &doc.exponentials), text);
    }
}

#[test]
fn exponential_overrides_parse() {
    let text = "dim 3; [e1,e3]=e1; exp e3 = [[exp(-t3), 0, 0], [0, 1, 0], [0, 0, 1]]";
    let doc = parse_document(text).unwrap();
    assert_eq!(doc.exponentials.len(), 1);
    assert_eq!(doc.exponentials[0].0, 2);
    assert!(parse_document("dim 2; exp e1 = [[1, 0]]").is_err());
}

#[test]
fn edgeless_dot() {
    let e = lookup("3A_1").unwrap();
    let g = build_graph(
        &generators(&e.algebra).unwrap(),
        enumerate_1d(&e.algebra),
        &[],
        GraphOptions {
            word_length: 2,
            parallel: false,
        },
    );
    let dot = export_dot(&g, "3A_1 d=1");
    let nodes = dot
        .lines()
        .filter(|l| l.trim().trim_end_matches(';').parse::<usize>().is_ok())
        .count();
    assert_eq!(nodes, 7);
    assert!(parse_edges(&dot).is_empty());
}

#[test]
fn legend_lines() {
    let e = lookup("2A_2").unwrap();
    let g = build_graph(
        &generators(&e.algebra).unwrap(),
        enumerate_1d(&e.algebra),
        &[],
        GraphOptions {
            word_length: 1,
            parallel: false,
        },
    );
    let legend = parse_legend(&export_dot(&g, "2A_2"));
    assert_eq!(legend.len(), 15);
    assert_eq!(legend[14], (15, "Xi1+a1 Xi2+a2 Xi3+a3 Xi4".to_string()));
}

#[test]
fn mutual_edges_render_once() {
    let e = lookup("A_{4,6}^{a,b}").unwrap();
    let opts = Options {
        dims: vec![1],
        ..Options::default()
    };
    let sys = optimal_system(&e.algebra, &opts).unwrap();
    let g = &sys.dims[0].graph;
    let edges = parse_edges(&export_dot(g, "A46"));
    assert!(edges.contains(&(2, 3, true)));
    for (s, t, both) in &edges {
        assert!(!edges.contains(&(*t, *s, *both)) || s == t);
    }
}

#[test]
fn report_json_round_trip() {
    let e = lookup("A_{3,8}").unwrap();
    let sys = optimal_system(&e.algebra, &Options::default()).unwrap();
    let r = build_report(&e.algebra, &sys, Some(&e), &[], 4, 7);
    let json = to_json(&r);
    let back = from_json(&json).unwrap();
    assert_eq!(back, r);
    assert_eq!(to_json(&back), json);
    assert_eq!(r.schema, SCHEMA);
    let codes: Vec<Vec<u32>> = back.dimensions[0]
        .representatives
        .iter()
        .map(|x| x.code_tuple.clone())
        .collect();
    assert_eq!(codes, vec![vec![1], vec![2], vec![5]]);
    let text = render_text(&r, None);
    assert!(text.contains("Ψ¹ = {Ξ1}, {Ξ2}, {Ξ1+α1Ξ3}"), "{text}");
    assert!(text.contains("Ψ² = {Ξ1, Ξ2}"), "{text}");
}
