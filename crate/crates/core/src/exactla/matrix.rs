use rayon::prelude::*;

use super::field::PrimeField;
use crate::error::{Error, Result};

/// Below this many entries elimination stays on the calling thread.
const PARALLEL_THRESHOLD: usize = 1 << 20;

/// Dense row-major matrix over a prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, k: usize) -> Self {
        let mut m = Self::zeros(field, k, k);
        for i in 0..k {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from row-major entries, reducing each one mod p.
    pub fn from_entries(field: PrimeField, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{} entries do not fill a {}x{} matrix",
                entries.len(),
                rows,
                cols
            )));
        }
        let entries = entries.into_iter().map(|x| field.reduce(x)).collect();
        Ok(FpMatrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            entries.extend(r.iter().map(|&x| field.reduce(x)));
        }
        Ok(FpMatrix {
            field,
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.cols + c] = self.field.reduce(v);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        let f = self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.echelonize().len()
    }

    /// Basis of the right kernel `{v : Mv = 0}`.
    ///
    /// Vectors are the reduced-row-echelon basis: one per free column `f`,
    /// with a 1 in position `f` and zeros in every other free position.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let mut work = self.clone();
        let pivots = work.echelonize();
        let f = self.field;
        let cols = self.cols;
        let mut is_pivot = vec![false; cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::with_capacity(cols - pivots.len());
        for free in (0..cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![0u64; cols];
            x[free] = 1;
            for (i, &pc) in pivots.iter().enumerate().rev() {
                let row = work.row(i);
                let mut acc = 0u64;
                for k in pc + 1..cols {
                    if x[k] != 0 && row[k] != 0 {
                        acc = f.add(acc, f.mul(row[k], x[k]));
                    }
                }
                x[pc] = f.neg(acc);
            }
            basis.push(x);
        }
        basis
    }

    /// Forward Gaussian elimination in place, first-nonzero pivot rule.
    ///
    /// On return rows `0..rank` hold a row echelon form with unit pivots
    /// (fully reduced mod p); the returned vector lists pivot columns.
    /// Rows below the pivot are updated with unreduced multiply-adds and
    /// only brought back into range every `lazy_budget` steps.
    fn echelonize(&mut self) -> Vec<usize> {
        let f = self.field;
        let p = f.modulus();
        let cols = self.cols;
        let rows = self.rows;
        let max_term = (p - 1) * (p - 1);
        let lazy_budget = ((u64::MAX - p) / max_term.max(1)).max(1);
        let mut since_reduce = 0u64;
        let mut pivots = Vec::new();
        let mut rank = 0usize;
        let parallel = rows * cols >= PARALLEL_THRESHOLD;

        for col in 0..cols {
            if rank == rows {
                break;
            }
            if since_reduce >= lazy_budget {
                for x in &mut self.entries[rank * cols..] {
                    *x %= p;
                }
                since_reduce = 0;
            }
            let found = (rank..rows).find(|&r| self.entries[r * cols + col] % p != 0);
            let Some(pr) = found else { continue };
            if pr != rank {
                let (a, b) = self.entries.split_at_mut(pr * cols);
                a[rank * cols..(rank + 1) * cols].swap_with_slice(&mut b[..cols]);
            }
            let (head, tail) = self.entries.split_at_mut((rank + 1) * cols);
            let pivot_row = &mut head[rank * cols..];
            for x in pivot_row[col..].iter_mut() {
                *x %= p;
            }
            let inv = f.inv(pivot_row[col]);
            for x in pivot_row[col..].iter_mut() {
                *x = f.mul(*x, inv);
            }
            let pivot: &[u64] = &pivot_row[col..];
            let update = |row: &mut [u64]| {
                let factor = row[col] % p;
                if factor == 0 {
                    row[col] = 0;
                    return;
                }
                let neg = p - factor;
                for (x, &y) in row[col..].iter_mut().zip(pivot) {
                    *x += neg * y;
                }
                row[col] = 0;
            };
            if parallel {
                tail.par_chunks_mut(cols).for_each(update);
            } else {
                tail.chunks_mut(cols).for_each(update);
            }
            since_reduce += 1;
            pivots.push(col);
            rank += 1;
        }
        for x in &mut self.entries {
            *x %= p;
        }
        pivots
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f31991() -> PrimeField {
        PrimeField::default()
    }

    #[test]
    fn empty_matrix_has_full_nullspace() {
        let m = FpMatrix::zeros(f31991(), 0, 4);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 4);
        for (i, v) in ns.iter().enumerate() {
            let mut e = vec![0; 4];
            e[i] = 1;
            assert_eq!(v, &e);
        }
    }

    #[test]
    fn identity_has_trivial_nullspace() {
        let m = FpMatrix::identity(f31991(), 5);
        assert!(m.nullspace().is_empty());
        assert_eq!(m.rank(), 5);
    }

    /// Conics through (0:0:1) with a double point there: the value and both
    /// first partials at the point vanish.
    #[test]
    fn double_point_conic_conditions() {
        let f = f31991();
        // monomials x^2, xy, xz, y^2, yz, z^2; evaluate at (0,0,1).
        let value = vec![0, 0, 0, 0, 0, 1];
        let dx = vec![0, 0, 1, 0, 0, 0];
        let dy = vec![0, 0, 0, 0, 1, 0];
        let m = FpMatrix::from_rows(f, 6, &[value, dx, dy]).unwrap();
        let ns = m.nullspace();
        assert_eq!(ns.len(), 3);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn rank_plus_nullity_on_random_matrices() {
        let f = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows = rng.gen_range(0..9);
            let cols = rng.gen_range(1..9);
            // low-rank products make the test exercise dependent rows
            let inner = rng.gen_range(1..5);
            let a: Vec<u64> = (0..rows * inner).map(|_| rng.gen_range(0..101)).collect();
            let b: Vec<u64> = (0..inner * cols).map(|_| rng.gen_range(0..101)).collect();
            let mut e = vec![0u64; rows * cols];
            for i in 0..rows {
                for j in 0..cols {
                    let mut acc = 0;
                    for k in 0..inner {
                        acc = f.add(acc, f.mul(a[i * inner + k], b[k * cols + j]));
                    }
                    e[i * cols + j] = acc;
                }
            }
            let m = FpMatrix::from_entries(f, rows, cols, e).unwrap();
            let ns = m.nullspace();
            assert_eq!(m.rank() + ns.len(), cols);
            assert!(m.rank() <= inner);
            for v in &ns {
                assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn large_prime_uses_frequent_reduction() {
        let f = PrimeField::new(2147483647).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 12;
        let e: Vec<u64> = (0..n * n).map(|_| f.random(&mut rng)).collect();
        let m = FpMatrix::from_entries(f, n, n, e).unwrap();
        let ns = m.nullspace();
        assert_eq!(m.rank() + ns.len(), n);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn nullspace_is_deterministic() {
        let f = f31991();
        let m = FpMatrix::from_rows(f, 3, &[vec![1, 2, 3], vec![2, 4, 6]]).unwrap();
        assert_eq!(m.nullspace(), m.nullspace());
        assert_eq!(m.nullspace()[0], vec![f.from_i64(-2), 1, 0]);
    }
}
