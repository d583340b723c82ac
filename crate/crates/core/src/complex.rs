//! Bounded chain complexes of finite modules, homologically graded.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::matrix::KMatrix;
use crate::minimize::Reduction;
use crate::module::FinModule;
use crate::rmatrix::RMatrix;

/// A bounded complex `… → X_n --d_n--> X_{n-1} → …`.
///
/// Only nonzero terms are stored; `d_n` is stored only when both `X_n` and
/// `X_{n-1}` are nonzero.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    algebra: Algebra,
    zero: FinModule,
    terms: BTreeMap<i64, FinModule>,
    diffs: BTreeMap<i64, KMatrix>,
    reduction: OnceLock<Arc<Reduction>>,
}

impl PartialEq for ChainComplex {
    fn eq(&self, other: &Self) -> bool {
        // a stored zero differential equals an omitted one
        *self.algebra == *other.algebra
            && self.terms == other.terms
            && self.diffs.keys().chain(other.diffs.keys()).all(|&n| self.diff(n) == other.diff(n))
    }
}
impl Eq for ChainComplex {}

impl ChainComplex {
    /// Validates shapes, R-linearity of every differential and `d² = 0`.
    pub fn new(algebra: &Algebra, terms: BTreeMap<i64, FinModule>, diffs: BTreeMap<i64, KMatrix>) -> Result<Self> {
        let c = Self::assemble(algebra, terms, diffs)?;
        c.validate()?;
        Ok(c)
    }

    fn assemble(algebra: &Algebra, terms: BTreeMap<i64, FinModule>, mut diffs: BTreeMap<i64, KMatrix>) -> Result<Self> {
        let terms: BTreeMap<i64, FinModule> = terms.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        if terms.values().any(|m| **m.algebra() != **algebra) {
            return Err(Error::AlgebraMismatch);
        }
        for (&n, d) in &diffs {
            let src = terms.get(&n).map_or(0, FinModule::dim);
            let tgt = terms.get(&(n - 1)).map_or(0, FinModule::dim);
            if d.rows() != tgt || d.cols() != src {
                return Err(Error::DimensionMismatch(format!("differential d_{n} has shape {}x{}, expected {tgt}x{src}", d.rows(), d.cols())));
            }
        }
        diffs.retain(|&n, d| terms.contains_key(&n) && terms.contains_key(&(n - 1)) && d.rows() > 0 && d.cols() > 0);
        Ok(Self { algebra: algebra.clone(), zero: FinModule::zero(algebra), terms, diffs, reduction: OnceLock::new() })
    }

    pub fn validate(&self) -> Result<()> {
        for (&n, d) in &self.diffs {
            if !self.terms[&n].is_linear_map_to(&self.terms[&(n - 1)], d) {
                return Err(Error::NotChainMap(format!("differential d_{n} is not R-linear")));
            }
            if let Some(next) = self.diffs.get(&(n - 1)) {
                if !next.mul(d).is_zero() {
                    return Err(Error::NotChainMap(format!("d_{} d_{n} ≠ 0", n - 1)));
                }
            }
        }
        Ok(())
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn new_unchecked(algebra: &Algebra, terms: BTreeMap<i64, FinModule>, diffs: BTreeMap<i64, KMatrix>) -> Self {
        let c = Self::assemble(algebra, terms, diffs).expect("well-formed complex");
        debug_assert!(c.validate().is_ok(), "{:?}", c.validate());
        c
    }

    /// A complex of free modules `R^{ranks[n]}` with differentials given
    /// over `R`.
    pub fn from_free(algebra: &Algebra, ranks: &BTreeMap<i64, usize>, diffs: &BTreeMap<i64, RMatrix>) -> Result<Self> {
        let terms = ranks.iter().map(|(&n, &r)| (n, FinModule::free(algebra, r))).collect();
        let kd = diffs.iter().map(|(&n, d)| (n, d.to_kmatrix())).collect();
        Self::new(algebra, terms, kd)
    }

    pub(crate) fn from_free_unchecked(algebra: &Algebra, ranks: &BTreeMap<i64, usize>, diffs: &BTreeMap<i64, RMatrix>) -> Self {
        let terms = ranks.iter().map(|(&n, &r)| (n, FinModule::free(algebra, r))).collect();
        let kd = diffs.iter().map(|(&n, d)| (n, d.to_kmatrix())).collect();
        Self::new_unchecked(algebra, terms, kd)
    }

    pub fn zero(algebra: &Algebra) -> Self {
        Self::new_unchecked(algebra, BTreeMap::new(), BTreeMap::new())
    }

    /// A single module concentrated in degree `n`.
    pub fn concentrated(module: FinModule, n: i64) -> Self {
        let alg = module.algebra().clone();
        Self::new_unchecked(&alg, BTreeMap::from([(n, module)]), BTreeMap::new())
    }

    /// `R` concentrated in degree `n`.
    pub fn ring(algebra: &Algebra, n: i64) -> Self {
        Self::concentrated(FinModule::free(algebra, 1), n)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn term(&self, n: i64) -> &FinModule {
        self.terms.get(&n).unwrap_or(&self.zero)
    }

    pub fn terms(&self) -> &BTreeMap<i64, FinModule> {
        &self.terms
    }

    pub fn dim(&self, n: i64) -> usize {
        self.terms.get(&n).map_or(0, FinModule::dim)
    }

    pub fn total_dim(&self) -> usize {
        self.terms.values().map(FinModule::dim).sum()
    }

    /// `d_n : X_n → X_{n-1}`, zero-filled where not stored.
    pub fn diff(&self, n: i64) -> Cow<'_, KMatrix> {
        match self.diffs.get(&n) {
            Some(d) => Cow::Borrowed(d),
            None => Cow::Owned(KMatrix::zeros(self.algebra.field(), self.dim(n - 1), self.dim(n))),
        }
    }

    pub fn diffs(&self) -> &BTreeMap<i64, KMatrix> {
        &self.diffs
    }

    /// Degrees with nonzero terms.
    pub fn degrees(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    /// `(lowest, highest)` nonzero degree.
    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_perfect(&self) -> bool {
        self.terms.values().all(FinModule::is_free)
    }

    pub fn rank(&self, n: i64) -> usize {
        self.term(n).free_rank().expect("rank of a non-free term")
    }

    pub fn ranks(&self) -> BTreeMap<i64, usize> {
        self.terms.iter().map(|(&n, m)| (n, m.free_rank().expect("rank of a non-free term"))).collect()
    }

    pub fn require_perfect(&self) -> Result<()> {
        match self.terms.iter().find(|(_, m)| !m.is_free()) {
            Some((n, _)) => Err(Error::NotPerfect(format!("term in degree {n} is not free"))),
            None => Ok(()),
        }
    }

    /// `d_n` as a matrix over `R`; the complex must be perfect.
    pub fn rdiff(&self, n: i64) -> RMatrix {
        match self.diffs.get(&n) {
            Some(d) => RMatrix::from_kmatrix(&self.algebra, d),
            None => RMatrix::zeros(&self.algebra, self.rank(n - 1), self.rank(n)),
        }
    }

    /// Whether every differential has entries in the maximal ideal.
    pub fn is_minimal(&self) -> bool {
        self.is_perfect() && self.diffs.keys().all(|&n| self.rdiff(n).is_radical())
    }

    /// `(Σ^k X)_n = X_{n-k}` with differential `(-1)^k d`.
    pub fn suspend(&self, k: i64) -> Self {
        let f = self.algebra.field();
        let sign = f.sign(k);
        let terms = self.terms.iter().map(|(&n, m)| (n + k, m.clone())).collect();
        let diffs = self.diffs.iter().map(|(&n, d)| (n + k, d.scale(sign))).collect();
        Self::new_unchecked(&self.algebra, terms, diffs)
    }

    pub fn direct_sum(parts: &[&ChainComplex]) -> Self {
        let algebra = parts.first().expect("direct sum of no complexes").algebra.clone();
        let f = algebra.field();
        let mut degrees: Vec<i64> = parts.iter().flat_map(|c| c.terms.keys().copied()).collect();
        degrees.sort_unstable();
        degrees.dedup();
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for &n in &degrees {
            terms.insert(n, FinModule::direct_sum(&parts.iter().map(|c| c.term(n)).collect::<Vec<_>>()));
            let ds: Vec<Cow<KMatrix>> = parts.iter().map(|c| c.diff(n)).collect();
            diffs.insert(n, KMatrix::block_diag(&ds.iter().map(|d| d.as_ref()).collect::<Vec<_>>(), f));
        }
        Self::new_unchecked(&algebra, terms, diffs)
    }

    /// Homology module `H_n = ker d_n / im d_{n+1}`.
    pub fn homology(&self, n: i64) -> FinModule {
        let m = self.term(n);
        if m.is_zero() {
            return self.zero.clone();
        }
        let ker = self.diff(n).kernel();
        if ker.cols() == 0 {
            return self.zero.clone();
        }
        let sub = m.submodule(&ker).expect("kernel of an R-linear map is a submodule");
        let img = self.diff(n + 1).into_owned();
        let coords = ker.solve(&img).expect("boundaries are cycles").column_basis();
        sub.quotient(&coords).expect("boundaries form a submodule").0
    }

    pub fn homology_dims(&self) -> BTreeMap<i64, usize> {
        self.terms.keys().map(|&n| (n, self.homology_dim(n))).filter(|&(_, d)| d > 0).collect()
    }

    pub fn homology_dim(&self, n: i64) -> usize {
        self.dim(n) - self.diff(n).rank() - self.diff(n + 1).rank()
    }

    pub fn is_acyclic(&self) -> bool {
        self.terms.keys().all(|&n| self.homology_dim(n) == 0)
    }

    /// `Σ (-1)^n dim_k H_n`.
    pub fn homology_euler_characteristic(&self) -> i64 {
        self.terms.keys().map(|&n| if n.rem_euclid(2) == 0 { 1 } else { -1 } * self.homology_dim(n) as i64).sum()
    }

    pub(crate) fn cached_reduction(&self) -> &OnceLock<Arc<Reduction>> {
        &self.reduction
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraPresentation;

    fn string(alg: &Algebra, m: i64, n: i64) -> ChainComplex {
        let x = RMatrix::scalar(alg, 1, &alg.variable(0));
        let ranks = (m..=n).map(|d| (d, 1)).collect();
        let diffs = (m + 1..=n).map(|d| (d, x.clone())).collect();
        ChainComplex::from_free(alg, &ranks, &diffs).unwrap()
    }

    #[test]
    fn suspension_shifts_strings() {
        let alg = AlgebraPresentation::parse("F3[x]/(x2)").unwrap();
        let s = string(&alg, 0, 2);
        let t = s.suspend(1);
        assert_eq!(t.support(), Some((1, 3)));
        assert_eq!(t.rdiff(2), RMatrix::scalar(&alg, 1, &alg.variable(0)).neg());
        assert_eq!(t.suspend(-1), s);
        assert_eq!(s.suspend(0), s);
        let single = string(&alg, 4, 4);
        assert_eq!(single.suspend(1), string(&alg, 5, 5));
    }

    #[test]
    fn homology_of_strings() {
        let alg = AlgebraPresentation::parse("F2[x]/(x2)").unwrap();
        let s = string(&alg, 0, 3);
        assert_eq!(s.homology_dims(), BTreeMap::from([(0, 1), (3, 1)]));
        assert_eq!(s.homology(0).dim(), 1);
        assert_eq!(string(&alg, 2, 2).homology(2).dim(), 2);
        assert!(!s.is_acyclic());
        assert!(s.is_minimal());
    }

    #[test]
    fn rejects_non_complexes() {
        let alg = AlgebraPresentation::parse("F2[x]/(x2)").unwrap();
        let one = RMatrix::identity(&alg, 1);
        let ranks = BTreeMap::from([(0, 1), (1, 1), (2, 1)]);
        let diffs = BTreeMap::from([(1, one.clone()), (2, one)]);
        assert!(ChainComplex::from_free(&alg, &ranks, &diffs).is_err());
    }
}
