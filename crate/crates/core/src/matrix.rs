//! Dense matrices over a prime field and exact Gaussian elimination.

use std::fmt;

use crate::field::PrimeField;

/// A dense row-major matrix over 𝔽_p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for KMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "KMatrix {}x{} over F_{}", self.rows, self.cols, self.field.p())?;
        for r in 0..self.rows.min(16) {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: KMatrix,
    pub pivots: Vec<usize>,
}

impl KMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(field: PrimeField, n: usize, c: u32) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = c % field.p();
        }
        m
    }

    pub fn from_rows(field: PrimeField, rows: &[Vec<u32>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row.iter().map(|&v| v % field.p()));
        }
        Self { field, rows: r, cols: c, data }
    }

    pub fn from_fn(field: PrimeField, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = f(r, c) % field.p();
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, &v) in col.iter().enumerate() {
                m.data[r * m.cols + c] = v;
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }
    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == u32::from(r == c)))
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let p = self.field.p() as u64;
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = Self::zeros(self.field, n, m);
        if n == 0 || m == 0 || k == 0 {
            return out;
        }
        let mut acc = vec![0u64; m];
        // p < 2^16 so each product is < 2^32; flush every 2^31 terms is far
        // beyond any realistic inner dimension, but reduce periodically anyway.
        for i in 0..n {
            acc.iter_mut().for_each(|a| *a = 0);
            let lhs = self.row(i);
            for (t, &a) in lhs.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let a = a as u64;
                let rhs = other.row(t);
                for (slot, &b) in acc.iter_mut().zip(rhs) {
                    *slot += a * b as u64;
                }
                if t % 4096 == 4095 {
                    acc.iter_mut().for_each(|s| *s %= p);
                }
            }
            let row = &mut out.data[i * m..(i + 1) * m];
            for (dst, &s) in row.iter_mut().zip(&acc) {
                *dst = (s % p) as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let p = self.field.p() as u64;
        (0..self.rows)
            .map(|r| {
                let s: u64 = self.row(r).iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.same_shape(other), "matrix sum shape mismatch");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Self { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.same_shape(other), "matrix difference shape mismatch");
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Self { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Self { field: f, rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.neg(a)).collect() }
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        Self { field: f, rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn put(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(r));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(self.field, rows, cols, |r, c| self.get(r0 + r, c0 + c))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.field, idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            out.data[i * self.cols..(i + 1) * self.cols].copy_from_slice(self.row(r));
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.field, self.rows, idx.len(), |r, c| self.get(r, idx[c]))
    }

    pub fn hstack(parts: &[&Self], field: PrimeField, rows: usize) -> Self {
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut c0 = 0;
        for m in parts {
            assert_eq!(m.rows, rows);
            out.put(0, c0, m);
            c0 += m.cols;
        }
        out
    }

    pub fn vstack(parts: &[&Self], field: PrimeField, cols: usize) -> Self {
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut r0 = 0;
        for m in parts {
            assert_eq!(m.cols, cols);
            out.put(r0, 0, m);
            r0 += m.rows;
        }
        out
    }

    pub fn block_diag(parts: &[&Self], field: PrimeField) -> Self {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in parts {
            out.put(r0, c0, m);
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let f = self.field;
        let mut out = Self::zeros(f, self.rows * other.rows, self.cols * other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.get(r, c);
                if a == 0 {
                    continue;
                }
                out.put(r * other.rows, c * other.cols, &other.scale(a));
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    /// In-place reduction to reduced row echelon form. Only the first
    /// `pivot_limit` columns are eligible as pivots.
    fn reduce_in_place(&mut self, pivot_limit: usize) -> Vec<usize> {
        let f = self.field;
        let p = f.p() as u64;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..pivot_limit.min(cols) {
            if row == self.rows {
                break;
            }
            let Some(src) = (row..self.rows).find(|&r| self.data[r * cols + col] != 0) else {
                continue;
            };
            self.swap_rows(row, src);
            let inv = f.inv(self.data[row * cols + col]);
            for v in &mut self.data[row * cols..(row + 1) * cols] {
                *v = f.mul(*v, inv);
            }
            let pivot_row: Vec<u32> = self.data[row * cols..(row + 1) * cols].to_vec();
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.data[r * cols + col];
                if factor == 0 {
                    continue;
                }
                let neg = (p - factor as u64) % p;
                let target = &mut self.data[r * cols..(r + 1) * cols];
                for (t, &s) in target.iter_mut().zip(&pivot_row).skip(col) {
                    if s != 0 {
                        *t = ((*t as u64 + neg * s as u64) % p) as u32;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn echelon(&self) -> Echelon {
        let mut reduced = self.clone();
        let pivots = reduced.reduce_in_place(self.cols);
        Echelon { reduced, pivots }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut m = self.clone();
        m.reduce_in_place(self.cols).len()
    }

    /// Basis of the null space, as the columns of the returned matrix.
    pub fn kernel(&self) -> Self {
        let ech = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        let mut out = Self::zeros(self.field, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, 1);
            for (i, &pc) in ech.pivots.iter().enumerate() {
                let v = ech.reduced.get(i, fc);
                out.set(pc, k, self.field.neg(v));
            }
        }
        out
    }

    /// Basis of the column space, chosen among the original columns.
    pub fn column_basis(&self) -> Self {
        let ech = self.echelon();
        self.select_cols(&ech.pivots)
    }

    /// Solves `self · X = rhs`; returns the solution with all free variables
    /// set to zero, or `None` when inconsistent.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows, "solve: row mismatch");
        let f = self.field;
        let mut aug = Self::hstack(&[self, rhs], f, self.rows);
        let pivots = aug.reduce_in_place(self.cols);
        // inconsistent if a zero row on the left has a nonzero on the right
        for r in pivots.len()..self.rows {
            if aug.row(r)[self.cols..].iter().any(|&v| v != 0) {
                return None;
            }
        }
        let mut x = Self::zeros(f, self.cols, rhs.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(pc, c, aug.get(i, self.cols + c));
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Self::identity(self.field, self.rows))?;
        if self.mul(&x).is_identity() {
            Some(x)
        } else {
            None
        }
    }

    /// Indices of standard basis vectors extending the column span of
    /// `self` to all of `k^rows`.
    pub fn complement_indices(&self) -> Vec<usize> {
        let n = self.rows;
        let aug = Self::hstack(&[self, &Self::identity(self.field, n)], self.field, n);
        let ech = aug.echelon();
        ech.pivots.iter().filter(|&&c| c >= self.cols).map(|&c| c - self.cols).collect()
    }

    /// Standard basis columns extending the column span of `self` to all of
    /// `k^rows`.
    pub fn complement_basis(&self) -> Self {
        Self::identity(self.field, self.rows).select_cols(&self.complement_indices())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn random(field: PrimeField, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> KMatrix {
        KMatrix::from_fn(field, rows, cols, |_, _| rng.gen_range(0..field.p()))
    }

    #[test]
    fn kernel_and_image_dimensions_add_up() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [2, 3, 7] {
            for _ in 0..40 {
                let (r, c) = (rng.gen_range(0..7), rng.gen_range(0..7));
                let m = random(f(p), r, c, &mut rng);
                let ker = m.kernel();
                assert_eq!(ker.cols() + m.rank(), c);
                assert!(m.mul(&ker).is_zero());
            }
        }
    }

    #[test]
    fn solve_recovers_consistent_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let field = f(5);
        for _ in 0..30 {
            let a = random(field, 5, 4, &mut rng);
            let x = random(field, 4, 2, &mut rng);
            let b = a.mul(&x);
            let sol = a.solve(&b).expect("consistent");
            assert_eq!(a.mul(&sol), b);
        }
        let a = KMatrix::from_rows(field, &[vec![1, 0], vec![1, 0]]);
        let b = KMatrix::from_rows(field, &[vec![1], vec![2]]);
        assert!(a.solve(&b).is_none());
    }

    #[test]
    fn inverse_and_complement() {
        let field = f(3);
        let a = KMatrix::from_rows(field, &[vec![1, 2], vec![0, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let singular = KMatrix::from_rows(field, &[vec![1, 2], vec![2, 1]]);
        assert!(singular.inverse().is_none());
        let span = KMatrix::from_rows(field, &[vec![1], vec![1], vec![0]]);
        let comp = span.complement_basis();
        assert_eq!(comp.cols(), 2);
        assert_eq!(KMatrix::hstack(&[&span, &comp], field, 3).rank(), 3);
    }

    #[test]
    fn empty_shapes() {
        let field = f(2);
        let z = KMatrix::zeros(field, 0, 3);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel().cols(), 3);
        let y = KMatrix::zeros(field, 3, 0);
        assert_eq!(y.mul(&KMatrix::zeros(field, 0, 2)), KMatrix::zeros(field, 3, 2));
    }
}
