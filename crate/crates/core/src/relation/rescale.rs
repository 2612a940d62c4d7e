//! Which free coefficients a diagonal scaling can normalise to ±1.

use crate::autgrp::GeneratorAutomorphism;
use crate::families::{CoefKind, PFamily};
use crate::symx::{symbolic_rank, Expr};

/// Growth rates `c_j` of each diagonal generator, where entry `j` of the
/// matrix is `exp(c_j t)`.
pub fn scaling_rates(gens: &[GeneratorAutomorphism]) -> Vec<Vec<Expr>> {
    gens.iter()
        .filter(|g| !g.trivial && g.is_diagonal())
        .map(|g| {
            (0..g.infinitesimal.len())
                .map(|j| g.infinitesimal[j][j].clone())
                .collect()
        })
        .collect()
}

/// Classifies each coefficient in row-major order. A coefficient is Greek
/// when its scaling exponents are independent of those already claimed.
pub fn classify(gens: &[GeneratorAutomorphism], fam: &PFamily) -> Vec<CoefKind> {
    let rates = scaling_rates(gens);
    let pivots = fam.pivots();
    let mut chosen: Vec<Vec<Expr>> = Vec::new();
    let mut rank = 0;
    fam.coefficients()
        .iter()
        .map(|c| {
            if rates.is_empty() {
                return CoefKind::Latin;
            }
            let col: Vec<Expr> = rates
                .iter()
                .map(|r| r[c.col].sub(&r[pivots[c.row]]))
                .collect();
            if col.iter().all(Expr::is_literal_zero) {
                return CoefKind::Latin;
            }
            let mut trial = chosen.clone();
            trial.push(col);
            let k = symbolic_rank(trial.clone());
            if k > rank {
                rank = k;
                chosen = trial;
                CoefKind::Greek
            } else {
                CoefKind::Latin
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgrp::generators;
    use crate::catalog::lookup;
    use CoefKind::*;

    fn kinds(label: &str, rows: &[u32]) -> Vec<CoefKind> {
        let e = lookup(label).unwrap();
        let gens = generators(&e.algebra).unwrap();
        classify(&gens, &PFamily::from_codes(e.dim(), rows).unwrap())
    }

    #[test]
    fn abelian_has_no_scalings() {
        assert_eq!(kinds("3A_1", &[7]), vec![Latin, Latin]);
    }

    #[test]
    fn split_scalings() {
        assert_eq!(kinds("A_{3,8}", &[5]), vec![Greek]);
        assert_eq!(kinds("A_2+2A_1", &[6, 8]), vec![Greek]);
        assert_eq!(kinds("A_{4,6}^{a,b}", &[3]), vec![Latin]);
    }
}
