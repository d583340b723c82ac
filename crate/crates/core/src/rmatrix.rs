//! Matrices over `R`, describing R-linear maps between free modules.

use crate::algebra::{Algebra, AlgebraPresentation};
use crate::matrix::KMatrix;

/// A dense `rows × cols` matrix with entries in `R`, each stored as its
/// coefficient vector over the standard basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix {
    alg: Algebra,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl RMatrix {
    pub fn zeros(alg: &Algebra, rows: usize, cols: usize) -> Self {
        Self { alg: alg.clone(), rows, cols, data: vec![0; rows * cols * alg.dim()] }
    }

    pub fn identity(alg: &Algebra, n: usize) -> Self {
        let mut m = Self::zeros(alg, n, n);
        for i in 0..n {
            m.entry_mut(i, i)[0] = 1;
        }
        m
    }

    /// Diagonal matrix with a single ring element repeated.
    pub fn scalar(alg: &Algebra, n: usize, r: &[u32]) -> Self {
        let mut m = Self::zeros(alg, n, n);
        for i in 0..n {
            m.entry_mut(i, i).copy_from_slice(r);
        }
        m
    }

    /// Reads off the R-matrix of an R-linear map `R^cols → R^rows` given in
    /// the generator-major k-basis.
    pub fn from_kmatrix(alg: &Algebra, k: &KMatrix) -> Self {
        let d = alg.dim();
        assert!(k.rows().is_multiple_of(d) && k.cols().is_multiple_of(d), "k-matrix is not between free modules");
        let (rows, cols) = (k.rows() / d, k.cols() / d);
        let mut m = Self::zeros(alg, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                for t in 0..d {
                    m.data[(i * cols + j) * d + t] = k.get(i * d + t, j * d);
                }
            }
        }
        m
    }

    pub fn to_kmatrix(&self) -> KMatrix {
        let d = self.alg.dim();
        let f = self.alg.field();
        let mut k = KMatrix::zeros(f, self.rows * d, self.cols * d);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.entry(i, j);
                if e.iter().all(|&c| c == 0) {
                    continue;
                }
                for &(a, b, c) in self.alg.products() {
                    if e[a] != 0 {
                        let (r, col) = (i * d + c, j * d + b);
                        k.set(r, col, f.add(k.get(r, col), e[a]));
                    }
                }
            }
        }
        k
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> &[u32] {
        let d = self.alg.dim();
        &self.data[(i * self.cols + j) * d..(i * self.cols + j + 1) * d]
    }

    #[inline]
    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut [u32] {
        let d = self.alg.dim();
        &mut self.data[(i * self.cols + j) * d..(i * self.cols + j + 1) * d]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&c| c == 0)
    }

    /// Matrix of constant terms, i.e. the reduction modulo the maximal ideal.
    pub fn residue(&self) -> KMatrix {
        KMatrix::from_fn(self.alg.field(), self.rows, self.cols, |i, j| self.entry(i, j)[0])
    }

    /// Whether every entry lies in the maximal ideal.
    pub fn is_radical(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| self.entry(i, j)[0] == 0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "R-matrix product shape mismatch");
        let alg: &AlgebraPresentation = &self.alg;
        let d = alg.dim();
        let mut out = Self::zeros(&self.alg, self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.entry(i, t);
                if a.iter().all(|&c| c == 0) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.entry(t, j);
                    let dst = &mut out.data[(i * other.cols + j) * d..(i * other.cols + j + 1) * d];
                    alg.mul_acc(a, b, dst);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.rows == other.rows && self.cols == other.cols, "R-matrix sum shape mismatch");
        let f = self.alg.field();
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Self { alg: self.alg.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let f = self.alg.field();
        Self { alg: self.alg.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.neg(a)).collect() }
    }

    /// Multiplies every entry by the ring element `r`.
    pub fn scale(&self, r: &[u32]) -> Self {
        let mut out = Self::zeros(&self.alg, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.entry(i, j).to_vec();
                self.alg.mul_acc(&e, r, out.entry_mut(i, j));
            }
        }
        out
    }

    pub fn scale_k(&self, c: u32) -> Self {
        let f = self.alg.field();
        Self { alg: self.alg.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    /// Kronecker product over `R`, matching the generator order
    /// `(i, j) ↦ i·other + j` of tensor products of free modules.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(&self.alg, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.entry(i, j);
                if a.iter().all(|&c| c == 0) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.entry(k, l);
                        let (r, c) = (i * other.rows + k, j * other.cols + l);
                        let a = a.to_vec();
                        self.alg.mul_acc(&a, b, out.entry_mut(r, c));
                    }
                }
            }
        }
        out
    }

    pub fn put(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.entry_mut(r0 + i, c0 + j).copy_from_slice(block.entry(i, j));
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(&self.alg, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.entry_mut(i, j).copy_from_slice(self.entry(r0 + i, c0 + j));
            }
        }
        out
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(&self.alg, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.entry_mut(a, b).copy_from_slice(self.entry(i, j));
            }
        }
        out
    }

    pub fn block_diag(alg: &Algebra, parts: &[&Self]) -> Self {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Self::zeros(alg, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in parts {
            out.put(r0, c0, m);
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    /// Inverse over `R`; exists iff the residue matrix is invertible.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let inv = self.to_kmatrix().inverse()?;
        Some(Self::from_kmatrix(&self.alg, &inv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraPresentation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(alg: &Algebra, r: usize, c: usize, rng: &mut ChaCha8Rng) -> RMatrix {
        let mut m = RMatrix::zeros(alg, r, c);
        let p = alg.field().p();
        for v in m.data.iter_mut() {
            *v = rng.gen_range(0..p);
        }
        m
    }

    #[test]
    fn products_agree_with_k_level() {
        let alg = AlgebraPresentation::parse("F3[x,y]/(x2,y2)").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = random(&alg, 3, 2, &mut rng);
            let b = random(&alg, 2, 4, &mut rng);
            assert_eq!(a.mul(&b).to_kmatrix(), a.to_kmatrix().mul(&b.to_kmatrix()));
            assert_eq!(RMatrix::from_kmatrix(&alg, &a.to_kmatrix()), a);
            let c = random(&alg, 2, 2, &mut rng);
            let lhs = a.kron(&c).mul(&b.kron(&RMatrix::identity(&alg, 2)));
            let rhs = a.mul(&b).kron(&c);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn unit_residue_inverts() {
        let alg = AlgebraPresentation::parse("F2[x]/(x2)").unwrap();
        let mut m = RMatrix::identity(&alg, 2);
        m.entry_mut(0, 1).copy_from_slice(&[0, 1]);
        m.entry_mut(1, 1).copy_from_slice(&[1, 1]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RMatrix::identity(&alg, 2));
        assert!(RMatrix::scalar(&alg, 1, &[0, 1]).inverse().is_none());
    }
}
