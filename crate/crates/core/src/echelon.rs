//! Incremental integer row echelon form (Hermite style) over dense `i64` rows.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("integer overflow during echelon reduction")]
pub struct Overflow;

/// Row lattice in echelon form. Each stored row has its leading entry at
/// the key column, that entry is positive and no other stored row leads
/// at the same column.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    width: usize,
    rows: BTreeMap<usize, Vec<i64>>,
}

fn axpy(dst: &mut [i64], factor: i64, src: &[i64], from: usize) -> Result<(), Overflow> {
    for (d, &s) in dst[from..].iter_mut().zip(&src[from..]) {
        if s != 0 {
            *d = factor
                .checked_mul(s)
                .and_then(|p| d.checked_sub(p))
                .ok_or(Overflow)?;
        }
    }
    Ok(())
}

fn combine(a: i64, x: &[i64], b: i64, y: &[i64], from: usize) -> Result<Vec<i64>, Overflow> {
    let mut out = vec![0; x.len()];
    for k in from..x.len() {
        let v = a
            .checked_mul(x[k])
            .zip(b.checked_mul(y[k]))
            .and_then(|(p, q)| p.checked_add(q))
            .ok_or(Overflow)?;
        out[k] = v;
    }
    Ok(out)
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: BTreeMap::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// `(column, leading entry)` for every stored row.
    pub fn pivots(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.rows.iter().map(|(&c, r)| (c, r[c]))
    }

    pub fn is_pivot(&self, column: usize) -> bool {
        self.rows.contains_key(&column)
    }

    /// Adds a row to the lattice.
    pub fn insert(&mut self, mut row: Vec<i64>) -> Result<(), Overflow> {
        assert_eq!(row.len(), self.width);
        let mut start = 0;
        loop {
            let Some(col) = (start..self.width).find(|&k| row[k] != 0) else {
                return Ok(());
            };
            let Some(pivot) = self.rows.get_mut(&col) else {
                if row[col] < 0 {
                    for v in row.iter_mut() {
                        *v = v.checked_neg().ok_or(Overflow)?;
                    }
                }
                self.rows.insert(col, row);
                return Ok(());
            };
            let a = pivot[col];
            let b = row[col];
            if b % a == 0 {
                axpy(&mut row, b / a, pivot, col)?;
            } else {
                // g = x a + y b; the new pivot row leads with g and the
                // remainder row has a zero in this column.
                let e = a.extended_gcd(&b);
                let (g, x, y) = (e.gcd, e.x, e.y);
                let new_pivot = combine(x, pivot, y, &row, col)?;
                let rest = combine(b / g, pivot, -(a / g), &row, col)?;
                *pivot = new_pivot;
                row = rest;
            }
            start = col + 1;
        }
    }

    /// Reduces `v` modulo the row lattice, clearing every pivot column.
    /// Exact only when all pivots are 1, which callers check first.
    pub fn reduce(&self, v: &mut [BigInt]) {
        for (&col, row) in &self.rows {
            if v[col].is_zero() {
                continue;
            }
            let (q, _) = v[col].div_rem(&BigInt::from(row[col]));
            for k in col..self.width {
                if row[k] != 0 {
                    v[k] -= &q * row[k];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn unimodular_lattice() {
        let mut e = Echelon::new(3);
        e.insert(vec![2, 1, 0]).unwrap();
        e.insert(vec![3, 1, 1]).unwrap();
        // lattice spanned by (2,1,0),(3,1,1) contains (1,0,1)
        let pivots: Vec<_> = e.pivots().collect();
        assert_eq!(pivots, vec![(0, 1), (1, 1)]);
        let mut v = big(&[1, 0, 1]);
        e.reduce(&mut v);
        assert_eq!(v, big(&[0, 0, 0]));
        let mut w = big(&[0, 0, 1]);
        e.reduce(&mut w);
        assert_eq!(w, big(&[0, 0, 1]));
    }

    #[test]
    fn non_unit_pivot_visible() {
        let mut e = Echelon::new(2);
        e.insert(vec![2, 0]).unwrap();
        e.insert(vec![4, 0]).unwrap();
        assert_eq!(e.pivots().collect::<Vec<_>>(), vec![(0, 2)]);
        assert_eq!(e.rank(), 1);
    }

    #[test]
    fn dependent_rows_vanish() {
        let mut e = Echelon::new(3);
        e.insert(vec![0, -1, 1]).unwrap();
        e.insert(vec![0, 2, -2]).unwrap();
        e.insert(vec![0, 0, 0]).unwrap();
        assert_eq!(e.rank(), 1);
        assert_eq!(e.pivots().collect::<Vec<_>>(), vec![(1, 1)]);
    }
}
