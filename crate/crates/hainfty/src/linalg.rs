//! Exact linear algebra over the rationals.
//!
//! Rank, nullspace and linear solves are computed by fraction-free
//! (Bareiss-style) Gaussian elimination on denominator-cleared integer rows,
//! followed by rational back-substitution. Pivots are chosen as the first
//! nonzero entry in scan order, so all outputs are deterministic; nullspace
//! basis vectors are normalized to leading coordinate 1.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// Dense matrix of exact rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        for row in &rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch { expected: c, got: row.len() });
            }
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mat_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect())
    }

    pub fn mat_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: Rat = (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum();
                out.set(i, j, s);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Kronecker product: (a ⊗ b)[(i·p + k), (j·q + l)] = a[i,j]·b[k,l] for
    /// b of shape p × q.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zero(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn scaled(&self, c: &Rat) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn add_scaled(&mut self, other: &Matrix, c: &Rat) {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += b * c;
        }
    }

    /// Exact row rank.
    pub fn rank(&self) -> usize {
        self.echelon(None).pivots.len()
    }

    /// Basis of the right kernel `{v : m v = 0}`, each vector normalized to
    /// leading coordinate 1. Size is always `cols - rank`.
    pub fn nullspace_basis(&self) -> Vec<Vec<Rat>> {
        let ech = self.echelon(None);
        let pivot_cols: Vec<usize> = ech.pivots.iter().map(|p| p.col).collect();
        let free_cols: Vec<usize> =
            (0..self.cols).filter(|c| !pivot_cols.contains(c)).collect();
        let mut basis = Vec::with_capacity(free_cols.len());
        for &f in &free_cols {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            back_substitute(&ech, &mut v, self.cols);
            normalize_leading(&mut v);
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `m x = b` when the system is consistent.
    pub fn solve_linear(&self, b: &[Rat]) -> Result<Option<Vec<Rat>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, got: b.len() });
        }
        let ech = self.echelon(Some(b));
        // A row with zero structural part but nonzero augmented entry is
        // inconsistent.
        for r in ech.pivots.len()..ech.entries.len() {
            if !ech.entries[r][self.cols].is_zero() {
                return Ok(None);
            }
        }
        let mut x = vec![Rat::zero(); self.cols];
        for p in ech.pivots.iter().rev() {
            let row = &ech.entries[p.row];
            let mut s = rat_of(&row[self.cols]);
            for j in p.col + 1..self.cols {
                s -= rat_of(&row[j]) * &x[j];
            }
            x[p.col] = s / rat_of(&row[p.col]);
        }
        Ok(Some(x))
    }

    fn echelon(&self, aug: Option<&[Rat]>) -> Echelon {
        let total = self.cols + usize::from(aug.is_some());
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let mut row: Vec<Rat> =
                    (0..self.cols).map(|j| self.get(i, j).clone()).collect();
                if let Some(b) = aug {
                    row.push(b[i].clone());
                }
                clear_denominators(&row)
            })
            .collect();
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut row = 0usize;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, pr);
            for i in row + 1..self.rows {
                for j in col + 1..total {
                    let num = &m[row][col] * &m[i][j] - &m[i][col] * &m[row][j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "bareiss exact division");
                    m[i][j] = q;
                }
                m[i][col] = BigInt::zero();
            }
            prev = m[row][col].clone();
            pivots.push(Pivot { row, col });
            row += 1;
        }
        Echelon { entries: m, pivots }
    }
}

struct Pivot {
    row: usize,
    col: usize,
}

struct Echelon {
    entries: Vec<Vec<BigInt>>,
    pivots: Vec<Pivot>,
}

fn rat_of(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

fn clear_denominators(row: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for r in row {
        lcm = lcm.lcm(r.denom());
    }
    row.iter().map(|r| r.numer() * (&lcm / r.denom())).collect()
}

/// Solve the pivot coordinates of `v` so that every echelon row annihilates
/// it, given the free coordinates already set.
fn back_substitute(ech: &Echelon, v: &mut [Rat], cols: usize) {
    for p in ech.pivots.iter().rev() {
        let row = &ech.entries[p.row];
        let mut s = Rat::zero();
        for j in p.col + 1..cols {
            s += rat_of(&row[j]) * &v[j];
        }
        v[p.col] = -s / rat_of(&row[p.col]);
    }
}

fn normalize_leading(v: &mut [Rat]) {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
        for x in v.iter_mut() {
            *x = x.clone() / lead.clone();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn rank_basics() {
        assert_eq!(Matrix::zero(0, 0).rank(), 0);
        assert_eq!(Matrix::identity(3).rank(), 3);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn nullspace_basics() {
        assert!(Matrix::identity(2).nullspace_basis().is_empty());
        assert_eq!(Matrix::zero(2, 3).nullspace_basis().len(), 3);
        let ns = m(&[&[1, 2], &[2, 4]]).nullspace_basis();
        assert_eq!(ns.len(), 1);
        // Proportional to (2, -1), normalized to leading coordinate 1.
        assert_eq!(ns[0], vec![rat(1), crate::rational::ratio(-1, 2)]);
        let a = m(&[&[1, 2], &[2, 4]]);
        assert!(a.mat_vec(&ns[0]).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn solve_basics() {
        let id = Matrix::identity(2);
        let b = vec![rat(3), rat(1)];
        assert_eq!(id.solve_linear(&b).unwrap().unwrap(), b);

        let z = Matrix::zero(2, 2);
        assert_eq!(z.solve_linear(&b).unwrap(), None);

        let a = m(&[&[1, 1], &[0, 1]]);
        assert_eq!(a.solve_linear(&b).unwrap().unwrap(), vec![rat(2), rat(1)]);

        assert!(a.solve_linear(&[rat(1)]).is_err());
    }

    #[test]
    fn rank_nullity_and_transpose() {
        let cases = [
            m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]),
            m(&[&[0, 0], &[0, 0], &[1, 7]]),
            m(&[&[2, 4, 6, 8]]),
        ];
        for a in cases {
            assert_eq!(a.rank() + a.nullspace_basis().len(), a.cols());
            assert_eq!(a.rank(), a.transpose().rank());
            for v in a.nullspace_basis() {
                assert!(a.mat_vec(&v).unwrap().iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn solve_consistent_exact() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let b = vec![rat(6), rat(12)];
        let x = a.solve_linear(&b).unwrap().unwrap();
        assert_eq!(a.mat_vec(&x).unwrap(), b);
    }
}
