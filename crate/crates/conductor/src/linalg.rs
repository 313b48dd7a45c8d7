//! Dense exact linear algebra over the active coefficient field.
//!
//! Used by bounded-degree searches: presentation of pushforward modules,
//! unit-generator refutations, and the brute-force membership oracle that
//! cross-checks normal forms in tests.

use crate::scalar::{FieldTag, Scalar};

/// A dense matrix over `QQ` or `F_p`, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub field: FieldTag,
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Scalar>,
}

impl Mat {
    pub fn zero(field: FieldTag, rows: usize, cols: usize) -> Mat {
        Mat {
            field,
            rows,
            cols,
            a: vec![field.zero(); rows * cols],
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.a[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.a[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.a.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    /// Row echelon reduction in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let pivot = (row..self.rows).find(|&r| !self.at(r, col).is_zero());
            let Some(p) = pivot else { continue };
            self.swap_rows(row, p);
            let inv = self.at(row, col).inv().unwrap();
            for k in 0..self.cols {
                let v = self.at(row, k).mul(&inv);
                self.set(row, k, v);
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let f = self.at(r, col).clone();
                    for k in 0..self.cols {
                        let v = self.at(r, k).sub(&f.mul(self.at(row, k)));
                        self.set(r, k, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Solves `self * x = b`; returns one solution if consistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zero(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.at(r, self.cols).clone();
        }
        Some(x)
    }

    /// A basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![self.field.zero(); self.cols];
            v[f] = self.field.one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = m.at(r, f).neg();
            }
            basis.push(v);
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(field: FieldTag, rows: usize, cols: usize, vals: &[i64]) -> Mat {
        let mut out = Mat::zero(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, field.from_i64(vals[i * cols + j]));
            }
        }
        out
    }

    #[test]
    fn solve_simple_system() {
        let f = FieldTag::Rational;
        let a = m(f, 2, 2, &[1, 1, 1, -1]);
        let x = a.solve(&[f.from_i64(3), f.from_i64(1)]).unwrap();
        assert_eq!(x, vec![f.from_i64(2), f.from_i64(1)]);
        assert!(a.solve(&[f.from_i64(0), f.from_i64(0)]).is_some());
    }

    #[test]
    fn inconsistent_detected() {
        let f = FieldTag::Rational;
        let a = m(f, 2, 1, &[1, 1]);
        assert!(a.solve(&[f.from_i64(1), f.from_i64(2)]).is_none());
    }

    #[test]
    fn nullspace_of_rank_one() {
        let f = FieldTag::Rational;
        let a = m(f, 1, 3, &[1, 2, 3]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            let s = v[0]
                .add(&v[1].mul(&f.from_i64(2)))
                .add(&v[2].mul(&f.from_i64(3)));
            assert!(s.is_zero());
        }
    }

    #[test]
    fn prime_field_rank() {
        let f = FieldTag::Prime(5);
        // rows are dependent mod 5: (1,2), (6,12) == (1,2)
        let a = m(f, 2, 2, &[1, 2, 6, 12]);
        assert_eq!(a.rank(), 1);
    }
}
