//! Finite-dimensional modules as k-vector spaces with commuting nilpotent
//! variable actions.

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraPresentation};
use crate::error::{Error, Result};
use crate::matrix::KMatrix;

#[derive(Clone, Debug)]
pub struct FinModule {
    algebra: Algebra,
    dim: usize,
    actions: Vec<KMatrix>,
    /// `Some(r)` when the module is `R^r` in the generator-major basis
    /// `e_g · b_m ↦ g·dim(R) + m`.
    free_rank: Option<usize>,
}

impl PartialEq for FinModule {
    fn eq(&self, other: &Self) -> bool {
        *self.algebra == *other.algebra && self.dim == other.dim && self.actions == other.actions
    }
}
impl Eq for FinModule {}

fn monomial_action(actions: &[KMatrix], m: &[u32], dim: usize, alg: &AlgebraPresentation) -> KMatrix {
    let mut acc = KMatrix::identity(alg.field(), dim);
    for (v, &e) in m.iter().enumerate() {
        for _ in 0..e {
            acc = actions[v].mul(&acc);
        }
    }
    acc
}

impl FinModule {
    /// Validates that the actions commute and kill every relation.
    pub fn new(algebra: Algebra, dim: usize, actions: Vec<KMatrix>) -> Result<Self> {
        if actions.len() != algebra.num_vars() {
            return Err(Error::DimensionMismatch("one action per variable required".into()));
        }
        if actions.iter().any(|a| a.rows() != dim || a.cols() != dim) {
            return Err(Error::DimensionMismatch("action matrices must be dim × dim".into()));
        }
        for i in 0..actions.len() {
            for j in i + 1..actions.len() {
                if actions[i].mul(&actions[j]) != actions[j].mul(&actions[i]) {
                    return Err(Error::DimensionMismatch("variable actions do not commute".into()));
                }
            }
        }
        for r in algebra.relations() {
            if !monomial_action(&actions, r, dim, &algebra).is_zero() {
                return Err(Error::DimensionMismatch("a relation does not act by zero".into()));
            }
        }
        Ok(Self { algebra, dim, actions, free_rank: None })
    }

    pub fn free(algebra: &Algebra, rank: usize) -> Self {
        let f = algebra.field();
        let actions = algebra
            .variable_actions()
            .iter()
            .map(|reg| KMatrix::identity(f, rank).kron(reg))
            .collect();
        Self { algebra: algebra.clone(), dim: rank * algebra.dim(), actions, free_rank: Some(rank) }
    }

    pub fn zero(algebra: &Algebra) -> Self {
        Self::free(algebra, 0)
    }

    /// The residue field `k = R/𝔪`.
    pub fn residue_field(algebra: &Algebra) -> Self {
        let f = algebra.field();
        let actions = (0..algebra.num_vars()).map(|_| KMatrix::zeros(f, 1, 1)).collect();
        Self { algebra: algebra.clone(), dim: 1, actions, free_rank: if algebra.dim() == 1 { Some(1) } else { None } }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn actions(&self) -> &[KMatrix] {
        &self.actions
    }
    pub fn free_rank(&self) -> Option<usize> {
        self.free_rank
    }
    pub fn is_free(&self) -> bool {
        self.free_rank.is_some()
    }
    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn direct_sum(parts: &[&FinModule]) -> Self {
        let algebra = parts.first().map(|m| m.algebra.clone()).expect("direct sum of no modules");
        let f = algebra.field();
        let dim = parts.iter().map(|m| m.dim).sum();
        let actions = (0..algebra.num_vars())
            .map(|v| KMatrix::block_diag(&parts.iter().map(|m| &m.actions[v]).collect::<Vec<_>>(), f))
            .collect();
        let free_rank = parts.iter().map(|m| m.free_rank).sum::<Option<usize>>();
        Self { algebra, dim, actions, free_rank }
    }

    /// Action of a ring element given by its coefficient vector.
    pub fn element_action(&self, r: &[u32]) -> KMatrix {
        let f = self.algebra.field();
        let mut acc = KMatrix::zeros(f, self.dim, self.dim);
        for (i, m) in self.algebra.standard_basis().iter().enumerate() {
            if r[i] != 0 {
                acc = acc.add(&monomial_action(&self.actions, m, self.dim, &self.algebra).scale(r[i]));
            }
        }
        acc
    }

    /// Whether `matrix: self → target` commutes with all variable actions.
    pub fn is_linear_map_to(&self, target: &FinModule, matrix: &KMatrix) -> bool {
        matrix.rows() == target.dim
            && matrix.cols() == self.dim
            && self.actions.iter().zip(&target.actions).all(|(a, b)| b.mul(matrix) == matrix.mul(a))
    }

    /// Submodule spanned by the columns of `basis` (assumed invariant and
    /// linearly independent), with its induced action.
    pub fn submodule(&self, basis: &KMatrix) -> Result<FinModule> {
        let mut actions = Vec::with_capacity(self.actions.len());
        for a in &self.actions {
            let img = a.mul(basis);
            actions.push(basis.solve(&img).ok_or_else(|| Error::DimensionMismatch("subspace is not invariant".into()))?);
        }
        Ok(Self { algebra: self.algebra.clone(), dim: basis.cols(), actions, free_rank: None })
    }

    /// Quotient by the invariant subspace spanned by `basis`; returns the
    /// quotient and the projection matrix.
    pub fn quotient(&self, basis: &KMatrix) -> Result<(FinModule, KMatrix)> {
        let f = self.algebra.field();
        let comp = basis.complement_basis();
        let full = KMatrix::hstack(&[basis, &comp], f, self.dim);
        let inv = full.inverse().ok_or_else(|| Error::DimensionMismatch("subspace basis is dependent".into()))?;
        let s = basis.cols();
        let q = comp.cols();
        let proj = inv.block(s, 0, q, self.dim);
        let actions = self.actions.iter().map(|a| proj.mul(a).mul(&comp)).collect::<Vec<_>>();
        let quot = Self { algebra: self.algebra.clone(), dim: q, actions, free_rank: None };
        for (v, a) in self.actions.iter().enumerate() {
            if proj.mul(a) != quot.actions[v].mul(&proj) {
                return Err(Error::DimensionMismatch("subspace is not invariant".into()));
            }
        }
        Ok((quot, proj))
    }

    /// Basis of `𝔪·S` for a subspace `S` given by its basis columns.
    pub fn radical_of(&self, subspace: &KMatrix) -> KMatrix {
        let f = self.algebra.field();
        let imgs: Vec<KMatrix> = self.actions.iter().map(|a| a.mul(subspace)).collect();
        let refs: Vec<&KMatrix> = imgs.iter().collect();
        KMatrix::hstack(&refs, f, self.dim).column_basis()
    }

    /// Bases of `M ⊇ 𝔪M ⊇ 𝔪²M ⊇ … ⊇ 0`; the last entry has no columns.
    pub fn radical_filtration(&self) -> Vec<KMatrix> {
        let f = self.algebra.field();
        let mut out = vec![KMatrix::identity(f, self.dim)];
        while out.last().unwrap().cols() > 0 {
            let next = self.radical_of(out.last().unwrap());
            out.push(next);
        }
        out
    }

    pub fn loewy_length(&self) -> usize {
        self.radical_filtration().len() - 1
    }

    pub fn to_json(&self) -> ModuleJson {
        ModuleJson { dim: self.dim, actions: self.actions.iter().map(KMatrix::to_rows).collect() }
    }

    pub fn from_json(algebra: &Algebra, json: &ModuleJson) -> Result<Self> {
        let f = algebra.field();
        let actions = json
            .actions
            .iter()
            .map(|rows| {
                if json.dim == 0 {
                    KMatrix::zeros(f, 0, 0)
                } else {
                    KMatrix::from_rows(f, rows)
                }
            })
            .collect();
        Self::new(algebra.clone(), json.dim, actions)
    }

    pub fn with_free_rank(mut self, rank: Option<usize>) -> Self {
        self.free_rank = rank;
        self
    }
}

/// An R-linear map between finite modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub source: FinModule,
    pub target: FinModule,
    pub matrix: KMatrix,
}

impl ModuleMap {
    pub fn new(source: FinModule, target: FinModule, matrix: KMatrix) -> Result<Self> {
        if !source.is_linear_map_to(&target, &matrix) {
            return Err(Error::DimensionMismatch("matrix is not an R-linear map between the given modules".into()));
        }
        Ok(Self { source, target, matrix })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleJson {
    pub dim: usize,
    pub actions: Vec<Vec<Vec<u32>>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraPresentation;

    fn dims(m: &FinModule) -> Vec<usize> {
        m.radical_filtration().iter().map(KMatrix::cols).collect()
    }

    #[test]
    fn free_modules() {
        let a = AlgebraPresentation::parse("F2[x]/(x2)").unwrap();
        let r = FinModule::free(&a, 1);
        assert_eq!(r.dim(), 2);
        assert_eq!(r.actions()[0].to_rows(), vec![vec![0, 0], vec![1, 0]]);
        assert!(FinModule::free(&a, 0).is_zero());
        let b = AlgebraPresentation::parse("F2[x,y]/(x2,y2)").unwrap();
        assert_eq!(FinModule::free(&b, 2).dim(), 8);
    }

    #[test]
    fn radical_filtrations() {
        let a = AlgebraPresentation::parse("F2[x]/(x2)").unwrap();
        assert_eq!(dims(&FinModule::free(&a, 1)), vec![2, 1, 0]);
        assert_eq!(dims(&FinModule::residue_field(&a)), vec![1, 0]);
        let b = AlgebraPresentation::parse("F2[x,y]/(x2,y2)").unwrap();
        let rb = FinModule::free(&b, 1);
        assert_eq!(dims(&rb), vec![4, 3, 1, 0]);
        assert_eq!(rb.loewy_length(), 3);
        assert_eq!(FinModule::zero(&b).loewy_length(), 0);
        let sum = FinModule::direct_sum(&[&rb, &FinModule::residue_field(&b)]);
        assert_eq!(sum.loewy_length(), 3);
    }

    #[test]
    fn subquotients() {
        let b = AlgebraPresentation::parse("F3[x,y]/(x2,y2)").unwrap();
        let r = FinModule::free(&b, 1);
        let filt = r.radical_filtration();
        let rad = r.submodule(&filt[1]).unwrap();
        assert_eq!(rad.dim(), 3);
        let (q, proj) = r.quotient(&filt[1]).unwrap();
        assert_eq!(q.dim(), 1);
        assert!(r.is_linear_map_to(&q, &proj));
        let bad = FinModule::new(b.clone(), 1, vec![KMatrix::identity(b.field(), 1), KMatrix::zeros(b.field(), 1, 1)]);
        assert!(bad.is_err());
    }
}
