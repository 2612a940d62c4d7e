//! Built-in algebras of dimension three and four with their expected
//! optimal systems.

use crate::algebra::{AlgebraError, IndexedBracket, LieAlgebra, NamedBracket};
use crate::autgrp::Matrix;
use crate::families::CoefKind;
use crate::symx::{Cmp, Expr, Formula, Param, Predicate};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog label {0:?}")]
    UnknownLabel(String),
}

/// A family as stored in fixtures: row codes plus the kind of each free
/// coefficient in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExpectedFamily {
    pub rows: Vec<u32>,
    pub kinds: Vec<CoefKind>,
}

#[derive(Debug, Clone)]
pub struct ExpectedSystem {
    pub dim: usize,
    pub families: Vec<ExpectedFamily>,
    /// When false the listed families are only known to be contained in
    /// the system.
    pub complete: bool,
}

/// A subalgebra the reference lists that is not a p-family and so cannot
/// appear in a computed system.
#[derive(Debug, Clone)]
pub struct Exclusion {
    pub dim: usize,
    /// Support of the family it would come from.
    pub rows: Vec<u32>,
    pub note: &'static str,
}

/// A representative whose printed annotation differs from the computed one.
#[derive(Debug, Clone)]
pub struct Divergence {
    pub dim: usize,
    pub rows: Vec<u32>,
    pub printed: Vec<CoefKind>,
    pub note: &'static str,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub label: &'static str,
    pub aliases: &'static [&'static str],
    pub algebra: LieAlgebra,
    pub exponentials: Vec<(usize, Matrix)>,
    pub expected: Vec<ExpectedSystem>,
    /// Vertex orderings of the reference graphs, by dimension.
    pub legends: Vec<(usize, Vec<Vec<u32>>)>,
    pub exclusions: Vec<Exclusion>,
    pub divergences: Vec<Divergence>,
    /// Admissible concrete values for the algebra parameters.
    pub instantiations: Vec<Vec<(Param, Expr)>>,
}

impl CatalogEntry {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn expected(&self, d: usize) -> Option<&ExpectedSystem> {
        self.expected.iter().find(|e| e.dim == d)
    }

    pub fn legend(&self, d: usize) -> Option<&[Vec<u32>]> {
        self.legends
            .iter()
            .find(|(k, _)| *k == d)
            .map(|(_, v)| v.as_slice())
    }

    /// The entry with its algebra parameters fixed to the given values.
    pub fn instantiate(&self, values: &[(Param, Expr)]) -> Result<CatalogEntry, AlgebraError> {
        let mut e = self.clone();
        e.algebra = self.algebra.instantiate(values)?;
        e.instantiations.clear();
        Ok(e)
    }
}

fn norm(label: &str) -> String {
    label
        .chars()
        .filter(|c| !"_{}^, ".contains(*c))
        .map(|c| if c == '⊕' { '+' } else { c })
        .flat_map(char::to_lowercase)
        .collect()
}

/// Finds an entry by label or alias; underscores, braces, carets and commas
/// are ignored, so `A_{3,8}`, `A38` and `a_3,8` all match.
pub fn lookup(label: &str) -> Result<CatalogEntry, CatalogError> {
    let key = norm(label);
    entries()
        .into_iter()
        .find(|e| norm(e.label) == key || e.aliases.iter().any(|a| norm(a) == key))
        .ok_or_else(|| CatalogError::UnknownLabel(label.to_string()))
}

pub fn labels() -> Vec<&'static str> {
    entries().into_iter().map(|e| e.label).collect()
}

fn a() -> Param {
    Param::algebra("a")
}

fn b() -> Param {
    Param::algebra("b")
}

fn q(n: i64) -> Expr {
    Expr::int(n)
}

fn pa() -> Expr {
    Expr::param(&a())
}

fn pb() -> Expr {
    Expr::param(&b())
}

fn pred(lhs: Expr, op: Cmp, rhs: Expr) -> Predicate {
    Predicate::new(Formula::Expr(lhs), op, Formula::Expr(rhs))
}

type Bracket = IndexedBracket;

fn build(
    label: &'static str,
    r: usize,
    brackets: Vec<Bracket>,
    params: Vec<Param>,
    constraints: Vec<Predicate>,
) -> LieAlgebra {
    let names: Vec<String> = (1..=r).map(|i| format!("e{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let br: Vec<NamedBracket> = brackets
        .into_iter()
        .map(|(x, y, rhs)| {
            (
                (refs[x - 1], refs[y - 1]),
                rhs.into_iter().map(|(c, z)| (c, refs[z - 1])).collect(),
            )
        })
        .collect();
    LieAlgebra::from_brackets(&refs, &br, params, constraints)
        .unwrap_or_else(|e| panic!("catalog entry {label} is invalid: {e}"))
        .with_label(label)
}

fn kinds(s: &str) -> Vec<CoefKind> {
    s.chars()
        .map(|c| match c {
            'G' => CoefKind::Greek,
            'L' => CoefKind::Latin,
            _ => unreachable!("kind letters are G or L"),
        })
        .collect()
}

fn system(dim: usize, complete: bool, fams: &[(&[u32], &str)]) -> ExpectedSystem {
    ExpectedSystem {
        dim,
        complete,
        families: fams
            .iter()
            .map(|(rows, k)| ExpectedFamily {
                rows: rows.to_vec(),
                kinds: kinds(k),
            })
            .collect(),
    }
}

fn legend(rows: &[&[u32]]) -> Vec<Vec<u32>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

/// The fifteen one-row shapes of a four-dimensional algebra in slex order.
fn legend_1d_4() -> Vec<Vec<u32>> {
    [1, 2, 4, 8, 3, 5, 6, 9, 10, 12, 7, 11, 13, 14, 15]
        .iter()
        .map(|&c| vec![c])
        .collect()
}

fn entry(
    label: &'static str,
    aliases: &'static [&'static str],
    algebra: LieAlgebra,
) -> CatalogEntry {
    CatalogEntry {
        label,
        aliases,
        algebra,
        exponentials: Vec::new(),
        expected: Vec::new(),
        legends: Vec::new(),
        exclusions: Vec::new(),
        divergences: Vec::new(),
        instantiations: Vec::new(),
    }
}

/// All entries: the eleven three-dimensional algebras followed by the seven
/// four-dimensional ones.
pub fn entries() -> Vec<CatalogEntry> {
    let mut out = Vec::new();

    let mut e = entry("3A_1", &["3A1"], build("3A_1", 3, vec![], vec![], vec![]));
    e.expected = vec![
        system(
            1,
            true,
            &[
                (&[1], ""),
                (&[2], ""),
                (&[4], ""),
                (&[3], "L"),
                (&[5], "L"),
                (&[6], "L"),
                (&[7], "LL"),
            ],
        ),
        system(
            2,
            true,
            &[
                (&[1, 2], ""),
                (&[1, 4], ""),
                (&[2, 4], ""),
                (&[1, 6], "L"),
                (&[3, 4], "L"),
                (&[5, 2], "L"),
                (&[5, 6], "LL"),
            ],
        ),
    ];
    e.divergences.push(Divergence {
        dim: 1,
        rows: vec![6],
        printed: kinds("G"),
        note: "printed with a sign-only coefficient, but an abelian algebra has no scaling automorphism",
    });
    out.push(e);

    let mut e = entry(
        "A_1+A_2",
        &["A1+A2", "A1A2", "A_2+A_1"],
        build("A_1+A_2", 3, vec![(1, 2, vec![(q(1), 2)])], vec![], vec![]),
    );
    e.expected = vec![
        system(
            1,
            true,
            &[(&[1], ""), (&[2], ""), (&[4], ""), (&[5], "L"), (&[6], "G")],
        ),
        system(
            2,
            true,
            &[(&[1, 2], ""), (&[1, 4], ""), (&[2, 4], ""), (&[5, 2], "L")],
        ),
    ];
    out.push(e);

    let mut e = entry(
        "A_{3,1}",
        &["A31"],
        build("A_{3,1}", 3, vec![(2, 3, vec![(q(1), 1)])], vec![], vec![]),
    );
    e.expected = vec![
        system(1, true, &[(&[1], ""), (&[2], ""), (&[4], ""), (&[6], "L")]),
        system(2, true, &[(&[1, 2], ""), (&[1, 4], ""), (&[1, 6], "L")]),
    ];
    out.push(e);

    let mut e = entry(
        "A_{3,2}",
        &["A32"],
        build(
            "A_{3,2}",
            3,
            vec![(1, 3, vec![(q(1), 1)]), (2, 3, vec![(q(1), 1), (q(1), 2)])],
            vec![],
            vec![],
        ),
    );
    e.expected = vec![
        system(1, true, &[(&[1], ""), (&[2], ""), (&[4], "")]),
        system(2, true, &[(&[1, 2], ""), (&[1, 4], "")]),
    ];
    out.push(e);

    let mut e = entry(
        "A_{3,3}",
        &["A33"],
        build(
            "A_{3,3}",
            3,
            vec![(1, 3, vec![(q(1), 1)]), (2, 3, vec![(q(1), 2)])],
            vec![],
            vec![],
        ),
    );
    e.expected = vec![
        system(1, true, &[(&[1], ""), (&[2], ""), (&[4], ""), (&[3], "L")]),
        system(
            2,
            true,
            &[(&[1, 2], ""), (&[1, 4], ""), (&[2, 4], ""), (&[3, 4], "L")],
        ),
    ];
    out.push(e);

    let mut e = entry(
        "A_{3,4}",
        &["A34"],
        build(
            "A_{3,4}",
            3,
            vec![(1, 3, vec![(q(1), 1)]), (2, 3, vec![(q(-1), 2)])],
            vec![],
            vec![],
        ),
    );
    e.expected = vec![
        system(1, true, &[(&[1], ""), (&[2], ""), (&[4], ""), (&[3], "G")]),
        system(2, true, &[(&[1, 2], ""), (&[1, 4], ""), (&[2, 4], "")]),
    ];
    out.push(e);

    let abs_a = || Formula::Abs(Box::new(Formula::Expr(pa())));
    let mut e = entry(
        "A_{3,5}^a",
        &["A35", "A35a"],
        build(
            "A_{3,5}^a",
            3,
            vec![(1, 3, vec![(q(1), 1)]), (2, 3, vec![(pa(), 2)])],
            vec![a()],
            vec![
                Predicate::new(abs_a(), Cmp::Gt, Formula::Expr(q(0))),
                Predicate::new(abs_a(), Cmp::Lt, Formula::Expr(q(1))),
            ],
        ),
    );
    e.expected = vec![
        system(1, true, &[(&[1], ""), (&[2], ""), (&[4], ""), (&[3], "G")]),
        system(2, true, &[(&[1, 2], ""), (&[1, 4], ""), (&[2, 4], "")]),
    ];
    e.instantiations = vec![
        vec![(a(), Expr::ratio(1, 2))],
        vec![(a(), Expr::ratio(-1, 3))],
    ];
    out.push(e);

    let mut e = entry(
        "A_{3,6}",
        &["A36"],
        build(
            "A_{3,6}",
            3,
            vec![(1, 3, vec![(q(-1), 2)]), (2, 3, vec![(q(1), 1)])],
            vec![],
            vec![],
        ),
    );
    e.expected = vec![
        system(1, true, &[(&[1], ""), (&[4], "")]),
        system(2, true, &[(&[1, 2], "")]),
    ];
    out.push(e);

    let mut e = entry(
        "A_{3,7}^a",
        &["A37", "A37a"],
        build(
            "A_{3,7}^a",
            3,
            vec![
                (1, 3, vec![(pa(), 1), (q(-1), 2)]),
                (2, 3, vec![(q(1), 1), (pa(), 2)]),
            ],
            vec![a()],
            vec![pred(pa(), Cmp::Gt, q(0))],
        ),
    );
    e.expected = vec![
        system(1, true, &[(&[1], ""), (&[4], "")]),
        system(2, true, &[(&[1, 2], "")]),
    ];
    e.instantiations = vec![vec![(a(), Expr::ratio(1, 2))], vec![(a(), Expr::int(2))]];
    out.push(e);

    let mut e = entry(
        "A_{3,8}",
        &["A38", "sl2"],
        build(
            "A_{3,8}",
            3,
            vec![
                (1, 2, vec![(q(1), 1)]),
                (1, 3, vec![(q(-2), 2)]),
                (2, 3, vec![(q(1), 3)]),
            ],
            vec![],
            vec![],
        ),
    );
    e.expected = vec![
        system(1, true, &[(&[1], ""), (&[2], ""), (&[5], "G")]),
        system(2, true, &[(&[1, 2], "")]),
    ];
    e.legends = vec![(1, legend(&[&[1], &[2], &[4], &[3], &[5], &[6], &[7]]))];
    out.push(e);

    let mut e = entry(
        "A_{3,9}",
        &["A39", "so3"],
        build(
            "A_{3,9}",
            3,
            vec![
                (1, 2, vec![(q(1), 3)]),
                (1, 3, vec![(q(-1), 2)]),
                (2, 3, vec![(q(1), 1)]),
            ],
            vec![],
            vec![],
        ),
    );
    e.expected = vec![system(1, true, &[(&[1], "")]), system(2, true, &[])];
    out.push(e);

    let mut e = entry(
        "A_2+2A_1",
        &["A2+2A1", "A22A1"],
        build("A_2+2A_1", 4, vec![(1, 2, vec![(q(1), 2)])], vec![], vec![]),
    );
    e.expected = vec![
        system(
            1,
            true,
            &[
                (&[1], ""),
                (&[2], ""),
                (&[4], ""),
                (&[8], ""),
                (&[12], "L"),
                (&[5], "L"),
                (&[9], "L"),
                (&[13], "LL"),
                (&[6], "G"),
                (&[10], "G"),
                (&[14], "GL"),
            ],
        ),
        system(
            2,
            true,
            &[
                (&[1, 2], ""),
                (&[5, 2], "L"),
                (&[9, 2], "L"),
                (&[13, 2], "LL"),
                (&[1, 4], ""),
                (&[1, 8], ""),
                (&[1, 12], "L"),
                (&[5, 8], "L"),
                (&[9, 4], "L"),
                (&[6, 8], "G"),
                (&[10, 4], "G"),
                (&[4, 8], ""),
                (&[2, 4], ""),
                (&[2, 8], ""),
                (&[2, 12], "L"),
                (&[9, 12], "LL"),
                (&[10, 12], "GL"),
            ],
        ),
        system(
            3,
            true,
            &[
                (&[1, 4, 8], ""),
                (&[2, 4, 8], ""),
                (&[1, 2, 4], ""),
                (&[1, 2, 8], ""),
                (&[1, 2, 12], "L"),
                (&[5, 2, 8], "L"),
                (&[9, 2, 4], "L"),
                (&[9, 2, 12], "LL"),
            ],
        ),
    ];
    out.push(e);

    let mut e = entry(
        "2A_2",
        &["2A2"],
        build(
            "2A_2",
            4,
            vec![(1, 2, vec![(q(1), 2)]), (3, 4, vec![(q(1), 4)])],
            vec![],
            vec![],
        ),
    );
    e.expected = vec![system(
        3,
        true,
        &[
            (&[1, 2, 4], ""),
            (&[1, 2, 8], ""),
            (&[1, 4, 8], ""),
            (&[2, 4, 8], ""),
            (&[5, 2, 8], "L"),
        ],
    )];
    e.legends = vec![(1, legend_1d_4())];
    e.exclusions.push(Exclusion {
        dim: 2,
        rows: vec![5, 10],
        note: "the reference lists Xi1+Xi3, Xi2+eps Xi4, whose family fails the closure condition for generic coefficients",
    });
    out.push(e);

    let e = entry(
        "A_{4,1}",
        &["A41", "nil4"],
        build(
            "A_{4,1}",
            4,
            vec![(2, 4, vec![(q(1), 1)]), (3, 4, vec![(q(1), 2)])],
            vec![],
            vec![],
        ),
    );
    out.push(e);

    let legend_36 = legend(&[
        &[1, 2],
        &[1, 8],
        &[2, 8],
        &[4, 8],
        &[1, 10],
        &[3, 8],
        &[5, 8],
        &[6, 8],
        &[9, 2],
        &[7, 8],
        &[9, 10],
    ]);
    let psi2_36 = system(
        2,
        true,
        &[(&[1, 2], ""), (&[1, 8], ""), (&[1, 10], "L"), (&[4, 8], "")],
    );

    let mut e = entry(
        "A_{3,6}+A_1",
        &["A36+A1", "A36A1"],
        build(
            "A_{3,6}+A_1",
            4,
            vec![(1, 3, vec![(q(-1), 2)]), (2, 3, vec![(q(1), 1)])],
            vec![],
            vec![],
        ),
    );
    e.expected = vec![psi2_36.clone()];
    e.legends = vec![(2, legend_36.clone())];
    out.push(e);

    let mut e = entry(
        "A_{3,7}^a+A_1",
        &["A37+A1", "A37A1", "A37a+A1"],
        build(
            "A_{3,7}^a+A_1",
            4,
            vec![
                (1, 3, vec![(pa(), 1), (q(-1), 2)]),
                (2, 3, vec![(q(1), 1), (pa(), 2)]),
            ],
            vec![a()],
            vec![pred(pa(), Cmp::Gt, q(0))],
        ),
    );
    e.expected = vec![psi2_36];
    e.legends = vec![(2, legend_36)];
    e.instantiations = vec![vec![(a(), Expr::ratio(1, 2))], vec![(a(), Expr::int(2))]];
    out.push(e);

    let mut e = entry(
        "A_{4,5}^{a,b}",
        &["A45", "A45ab"],
        build(
            "A_{4,5}^{a,b}",
            4,
            vec![
                (1, 4, vec![(q(1), 1)]),
                (2, 4, vec![(pa(), 2)]),
                (3, 4, vec![(pb(), 3)]),
            ],
            vec![a(), b()],
            vec![
                pred(q(-1), Cmp::Le, pa()),
                pred(pa(), Cmp::Lt, pb()),
                pred(pb(), Cmp::Lt, q(1)),
                pred(&pa() * &pb(), Cmp::Ne, q(0)),
            ],
        ),
    );
    e.expected = vec![system(1, false, &[(&[3], "G")])];
    e.legends = vec![(1, legend_1d_4())];
    e.instantiations = vec![
        vec![(a(), Expr::ratio(-1, 2)), (b(), Expr::ratio(1, 3))],
        vec![(a(), Expr::ratio(1, 4)), (b(), Expr::ratio(1, 2))],
    ];
    out.push(e);

    let mut e = entry(
        "A_{4,6}^{a,b}",
        &["A46", "A46ab"],
        build(
            "A_{4,6}^{a,b}",
            4,
            vec![
                (1, 4, vec![(pa(), 1)]),
                (2, 4, vec![(pb(), 2), (q(-1), 3)]),
                (3, 4, vec![(q(1), 2), (pb(), 3)]),
            ],
            vec![a(), b()],
            vec![pred(pa(), Cmp::Ne, q(0)), pred(pb(), Cmp::Ge, q(0))],
        ),
    );
    e.expected = vec![
        system(1, true, &[(&[1], ""), (&[2], ""), (&[3], "L"), (&[8], "")]),
        system(
            2,
            true,
            &[(&[1, 2], ""), (&[2, 4], ""), (&[1, 8], ""), (&[3, 4], "L")],
        ),
    ];
    e.legends = vec![
        (1, legend_1d_4()),
        (
            2,
            legend(&[
                &[1, 2],
                &[1, 4],
                &[1, 8],
                &[2, 4],
                &[1, 6],
                &[1, 10],
                &[1, 12],
                &[3, 4],
                &[5, 2],
                &[1, 14],
                &[5, 6],
            ]),
        ),
    ];
    e.instantiations = vec![
        vec![(a(), Expr::ratio(-1, 2)), (b(), Expr::ratio(1, 3))],
        vec![(a(), Expr::int(2)), (b(), Expr::int(1))],
    ];
    out.push(e);

    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::PFamily;

    #[test]
    fn counts_and_labels() {
        let all = entries();
        assert_eq!(all.iter().filter(|e| e.dim() == 3).count(), 11);
        assert_eq!(all.iter().filter(|e| e.dim() == 4).count(), 7);
        assert_eq!(lookup("A38").unwrap().label, "A_{3,8}");
        assert_eq!(lookup("a_{3,5}^a").unwrap().label, "A_{3,5}^a");
        assert_eq!(lookup("A_2⊕2A_1").unwrap().label, "A_2+2A_1");
        assert!(matches!(
            lookup("A_{9,9}"),
            Err(CatalogError::UnknownLabel(_))
        ));
    }

    #[test]
    fn lookup_examples() {
        let e = lookup("A_{3,5}^a").unwrap();
        assert_eq!(e.algebra.constant(1, 2, 1), &Expr::param(&a()));
        assert_eq!(e.algebra.constraints().len(), 2);
        let e = lookup("3A_1").unwrap();
        assert!(e.algebra.is_abelian());
        assert_eq!(e.expected(1).unwrap().families.len(), 7);
        assert_eq!(e.expected(2).unwrap().families.len(), 7);
    }

    #[test]
    fn fixtures_are_valid_shapes() {
        for e in entries() {
            for s in &e.expected {
                for f in &s.families {
                    let fam = PFamily::from_codes(e.dim(), &f.rows)
                        .unwrap_or_else(|| panic!("{} {:?} is not an RREF shape", e.label, f.rows));
                    assert_eq!(fam.p(), f.kinds.len(), "{} {:?}", e.label, f.rows);
                }
            }
            for (_, l) in &e.legends {
                for rows in l {
                    assert!(PFamily::from_codes(e.dim(), rows).is_some());
                }
            }
        }
    }

    #[test]
    fn instantiations_satisfy_constraints() {
        for e in entries() {
            for inst in &e.instantiations {
                let mut env = crate::symx::MapEnv::default();
                for (p, v) in inst {
                    env.0
                        .insert(p.clone(), v.eval(&crate::symx::MapEnv::<f64>::default()));
                }
                for c in e.algebra.constraints() {
                    assert!(c.holds(&env), "{}: {c}", e.label);
                }
                e.instantiate(inst).unwrap();
            }
        }
    }
}
