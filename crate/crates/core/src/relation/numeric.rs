//! Floating-point row reduction used by numeric branches and the oracle.

use crate::symx::Scalar;

/// Entries below this fraction of the largest magnitude count as zero.
pub const TOL: f64 = 1e-9;

pub struct NumericRref<T> {
    pub matrix: Vec<Vec<T>>,
    pub pivots: Vec<usize>,
}

impl<T: Scalar> NumericRref<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn row_codes(&self) -> Vec<u32> {
        self.matrix[..self.rank()]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, e)| e.value() != 0.0)
                    .fold(0u32, |c, (j, _)| c | (1 << j))
            })
            .collect()
    }

    /// Nonzero entries outside pivot columns, row-major.
    pub fn free_entries(&self) -> Vec<T> {
        let mut out = Vec::new();
        for row in &self.matrix[..self.rank()] {
            for (j, e) in row.iter().enumerate() {
                if !self.pivots.contains(&j) && e.value() != 0.0 {
                    out.push(e.clone());
                }
            }
        }
        out
    }
}

fn zero<T: Scalar>() -> T {
    T::cst(0.0)
}

/// Gauss–Jordan elimination with partial pivoting. Entries judged zero are
/// replaced by exact zeros so supports can be read off the result.
pub fn rref<T: Scalar>(mut a: Vec<Vec<T>>) -> NumericRref<T> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let scale = a
        .iter()
        .flatten()
        .map(|e| e.value().abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows)
            .max_by(|&i, &j| a[i][c].value().abs().total_cmp(&a[j][c].value().abs()))
            .unwrap();
        if a[best][c].value().abs() <= TOL * scale {
            for row in a.iter_mut().skip(r) {
                row[c] = zero();
            }
            continue;
        }
        a.swap(r, best);
        let pv = a[r][c].clone();
        for e in a[r].iter_mut() {
            *e = e.clone() / pv.clone();
        }
        a[r][c] = T::cst(1.0);
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = a[i][c].clone();
            if f.value() == 0.0 {
                continue;
            }
            for j in 0..cols {
                let v = a[i][j].clone() - f.clone() * a[r][j].clone();
                a[i][j] = v;
            }
            a[i][c] = zero();
        }
        pivots.push(c);
        r += 1;
    }
    for (i, row) in a.iter_mut().enumerate() {
        let big = row.iter().map(|e| e.value().abs()).fold(1.0, f64::max);
        let thresh = if i < r {
            TOL * big
        } else {
            TOL * scale.max(1.0)
        };
        for (j, e) in row.iter_mut().enumerate() {
            if pivots.get(i) != Some(&j) && e.value().abs() <= thresh {
                *e = zero();
            }
        }
    }
    NumericRref { matrix: a, pivots }
}
