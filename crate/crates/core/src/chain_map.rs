//! Chain maps and chain homotopies.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::complex::ChainComplex;
use crate::matrix::KMatrix;
use crate::rmatrix::RMatrix;

fn same_complex(a: &Arc<ChainComplex>, b: &Arc<ChainComplex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A map `f_n : X_n → Y_{n+degree}` with `d f = (-1)^degree f d`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: Arc<ChainComplex>,
    target: Arc<ChainComplex>,
    degree: i64,
    comps: BTreeMap<i64, KMatrix>,
}

impl PartialEq for ChainMap {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && same_complex(&self.source, &other.source)
            && same_complex(&self.target, &other.target)
            && self.source.degrees().iter().all(|&n| self.comp(n) == other.comp(n))
    }
}

impl ChainMap {
    pub fn new(source: Arc<ChainComplex>, target: Arc<ChainComplex>, degree: i64, comps: BTreeMap<i64, KMatrix>) -> Result<Self> {
        let f = Self::assemble(source, target, degree, comps)?;
        f.validate()?;
        Ok(f)
    }

    fn assemble(source: Arc<ChainComplex>, target: Arc<ChainComplex>, degree: i64, mut comps: BTreeMap<i64, KMatrix>) -> Result<Self> {
        if **source.algebra() != **target.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        for (&n, m) in &comps {
            if m.rows() != target.dim(n + degree) || m.cols() != source.dim(n) {
                return Err(Error::DimensionMismatch(format!(
                    "component {n} has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.dim(n + degree),
                    source.dim(n)
                )));
            }
        }
        comps.retain(|_, m| m.rows() > 0 && m.cols() > 0);
        Ok(Self { source, target, degree, comps })
    }

    pub fn validate(&self) -> Result<()> {
        let f = self.source.algebra().field();
        let sign = f.sign(self.degree);
        for (&n, m) in &self.comps {
            if !self.source.term(n).is_linear_map_to(self.target.term(n + self.degree), m) {
                return Err(Error::NotChainMap(format!("component {n} is not R-linear")));
            }
        }
        for n in self.source.degrees().into_iter().chain(self.source.degrees().into_iter().map(|n| n + 1)) {
            let lhs = self.target.diff(n + self.degree).mul(&self.comp(n));
            let rhs = self.comp(n - 1).mul(&self.source.diff(n)).scale(sign);
            if lhs != rhs {
                return Err(Error::NotChainMap(format!("fails to commute with differentials at degree {n}")));
            }
        }
        Ok(())
    }

    pub(crate) fn new_unchecked(source: Arc<ChainComplex>, target: Arc<ChainComplex>, degree: i64, comps: BTreeMap<i64, KMatrix>) -> Self {
        let f = Self::assemble(source, target, degree, comps).expect("well-shaped chain map");
        debug_assert!(f.validate().is_ok(), "{:?}", f.validate());
        f
    }

    /// Builds a map between perfect complexes from matrices over `R`.
    pub fn from_rmatrices(source: Arc<ChainComplex>, target: Arc<ChainComplex>, degree: i64, comps: &BTreeMap<i64, RMatrix>) -> Result<Self> {
        let k = comps.iter().map(|(&n, m)| (n, m.to_kmatrix())).collect();
        Self::new(source, target, degree, k)
    }

    pub(crate) fn from_rmatrices_unchecked(source: Arc<ChainComplex>, target: Arc<ChainComplex>, comps: &BTreeMap<i64, RMatrix>) -> Self {
        let k = comps.iter().map(|(&n, m)| (n, m.to_kmatrix())).collect();
        Self::new_unchecked(source, target, 0, k)
    }

    pub fn identity(x: &Arc<ChainComplex>) -> Self {
        let f = x.algebra().field();
        let comps = x.terms().iter().map(|(&n, m)| (n, KMatrix::identity(f, m.dim()))).collect();
        Self::new_unchecked(x.clone(), x.clone(), 0, comps)
    }

    pub fn zero(source: &Arc<ChainComplex>, target: &Arc<ChainComplex>, degree: i64) -> Self {
        Self::new_unchecked(source.clone(), target.clone(), degree, BTreeMap::new())
    }

    /// Multiplication by a ring element on every term.
    pub fn multiplication(x: &Arc<ChainComplex>, r: &[u32]) -> Self {
        let comps = x.terms().iter().map(|(&n, m)| (n, m.element_action(r))).collect();
        Self::new_unchecked(x.clone(), x.clone(), 0, comps)
    }

    pub fn source(&self) -> &Arc<ChainComplex> {
        &self.source
    }
    pub fn target(&self) -> &Arc<ChainComplex> {
        &self.target
    }
    pub fn degree(&self) -> i64 {
        self.degree
    }
    pub fn comps(&self) -> &BTreeMap<i64, KMatrix> {
        &self.comps
    }

    pub fn comp(&self, n: i64) -> Cow<'_, KMatrix> {
        match self.comps.get(&n) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(KMatrix::zeros(self.source.algebra().field(), self.target.dim(n + self.degree), self.source.dim(n))),
        }
    }

    /// Component `n` over `R`; both complexes must be perfect.
    pub fn rcomp(&self, n: i64) -> RMatrix {
        match self.comps.get(&n) {
            Some(m) => RMatrix::from_kmatrix(self.source.algebra(), m),
            None => RMatrix::zeros(self.source.algebra(), self.target.rank(n + self.degree), self.source.rank(n)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(KMatrix::is_zero)
    }

    fn check_parallel(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree || !same_complex(&self.source, &other.source) || !same_complex(&self.target, &other.target) {
            return Err(Error::NotComposable("maps are not parallel".into()));
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if !same_complex(&other.target, &self.source) {
            return Err(Error::NotComposable("target of the first map differs from source of the second".into()));
        }
        let mut comps = BTreeMap::new();
        for (&n, g) in &other.comps {
            if let Some(f) = self.comps.get(&(n + other.degree)) {
                comps.insert(n, f.mul(g));
            }
        }
        Ok(Self::new_unchecked(other.source.clone(), self.target.clone(), self.degree + other.degree, comps))
    }

    /// `self ∘ other`, panicking when the maps do not compose.
    pub fn after(&self, other: &Self) -> Self {
        self.compose(other).expect("composable chain maps")
    }

    fn combine(&self, other: &Self, op: impl Fn(&KMatrix, &KMatrix) -> KMatrix) -> Result<Self> {
        self.check_parallel(other)?;
        let mut keys: Vec<i64> = self.comps.keys().chain(other.comps.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        let comps = keys.into_iter().map(|n| (n, op(&self.comp(n), &other.comp(n)))).collect();
        Ok(Self::new_unchecked(self.source.clone(), self.target.clone(), self.degree, comps))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, KMatrix::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, KMatrix::sub)
    }

    pub fn neg(&self) -> Self {
        let comps = self.comps.iter().map(|(&n, m)| (n, m.neg())).collect();
        Self::new_unchecked(self.source.clone(), self.target.clone(), self.degree, comps)
    }

    pub fn scale(&self, c: u32) -> Self {
        let comps = self.comps.iter().map(|(&n, m)| (n, m.scale(c))).collect();
        Self::new_unchecked(self.source.clone(), self.target.clone(), self.degree, comps)
    }

    /// Strict equality of components (maps must be parallel).
    pub fn equals(&self, other: &Self) -> bool {
        self.check_parallel(other).is_ok() && self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// `Σ^k f` with `(Σ^k f)_n = f_{n-k}`; no sign for degree-0 maps.
    pub fn suspend(&self, k: i64) -> Self {
        assert_eq!(self.degree, 0, "suspension of maps is defined for degree 0");
        let comps = self.comps.iter().map(|(&n, m)| (n + k, m.clone())).collect();
        Self::new_unchecked(Arc::new(self.source.suspend(k)), Arc::new(self.target.suspend(k)), 0, comps)
    }

    /// Same components viewed between structurally equal complexes.
    pub fn retarget(&self, source: &Arc<ChainComplex>, target: &Arc<ChainComplex>) -> Result<Self> {
        if !same_complex(&self.source, source) || !same_complex(&self.target, target) {
            return Err(Error::NotComposable("retargeting to different complexes".into()));
        }
        Ok(Self { source: source.clone(), target: target.clone(), degree: self.degree, comps: self.comps.clone() })
    }
}

/// Degree `+1` maps `h_n : X_n → Y_{n+1}` witnessing `f - g = d h + h d`.
#[derive(Clone, Debug)]
pub struct Homotopy {
    source: Arc<ChainComplex>,
    target: Arc<ChainComplex>,
    comps: BTreeMap<i64, KMatrix>,
}

impl Homotopy {
    pub fn new(source: Arc<ChainComplex>, target: Arc<ChainComplex>, mut comps: BTreeMap<i64, KMatrix>) -> Result<Self> {
        for (&n, m) in &comps {
            if m.rows() != target.dim(n + 1) || m.cols() != source.dim(n) {
                return Err(Error::DimensionMismatch(format!("homotopy component {n} has the wrong shape")));
            }
            if !source.term(n).is_linear_map_to(target.term(n + 1), m) {
                return Err(Error::NotChainMap(format!("homotopy component {n} is not R-linear")));
            }
        }
        comps.retain(|_, m| m.rows() > 0 && m.cols() > 0);
        Ok(Self { source, target, comps })
    }

    pub(crate) fn new_unchecked(source: Arc<ChainComplex>, target: Arc<ChainComplex>, mut comps: BTreeMap<i64, KMatrix>) -> Self {
        comps.retain(|_, m| m.rows() > 0 && m.cols() > 0);
        Self { source, target, comps }
    }

    pub fn zero(source: &Arc<ChainComplex>, target: &Arc<ChainComplex>) -> Self {
        Self::new_unchecked(source.clone(), target.clone(), BTreeMap::new())
    }

    pub fn source(&self) -> &Arc<ChainComplex> {
        &self.source
    }
    pub fn target(&self) -> &Arc<ChainComplex> {
        &self.target
    }
    pub fn comps(&self) -> &BTreeMap<i64, KMatrix> {
        &self.comps
    }

    pub fn comp(&self, n: i64) -> Cow<'_, KMatrix> {
        match self.comps.get(&n) {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(KMatrix::zeros(self.source.algebra().field(), self.target.dim(n + 1), self.source.dim(n))),
        }
    }

    /// The nullhomotopic chain map `d h + h d`.
    pub fn boundary(&self) -> ChainMap {
        let comps = self
            .source
            .degrees()
            .into_iter()
            .map(|n| {
                let a = self.target.diff(n + 1).mul(&self.comp(n));
                let b = self.comp(n - 1).mul(&self.source.diff(n));
                (n, a.add(&b))
            })
            .collect();
        ChainMap::new_unchecked(self.source.clone(), self.target.clone(), 0, comps)
    }

    /// Whether `f - g = d h + h d` holds exactly.
    pub fn witnesses(&self, f: &ChainMap, g: &ChainMap) -> bool {
        if f.degree() != 0 || g.degree() != 0 || f.check_parallel(g).is_err() {
            return false;
        }
        if !same_complex(f.source(), &self.source) || !same_complex(f.target(), &self.target) {
            return false;
        }
        let b = self.boundary();
        self.source.degrees().into_iter().all(|n| f.comp(n).sub(&g.comp(n)) == *b.comp(n))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut keys: Vec<i64> = self.comps.keys().chain(other.comps.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        let comps = keys.into_iter().map(|n| (n, self.comp(n).add(&other.comp(n)))).collect();
        Self::new_unchecked(self.source.clone(), self.target.clone(), comps)
    }

    pub fn neg(&self) -> Self {
        let comps = self.comps.iter().map(|(&n, m)| (n, m.neg())).collect();
        Self::new_unchecked(self.source.clone(), self.target.clone(), comps)
    }

    /// `g ∘ h` for a degree-0 map `g` out of the target.
    pub fn post(&self, g: &ChainMap) -> Self {
        let comps = self.comps.iter().map(|(&n, h)| (n, g.comp(n + 1).mul(h))).collect();
        Self::new_unchecked(self.source.clone(), g.target().clone(), comps)
    }

    /// `h ∘ f` for a degree-0 map `f` into the source.
    pub fn pre(&self, f: &ChainMap) -> Self {
        let comps = f.source().degrees().into_iter().map(|n| (n, self.comp(n).mul(&f.comp(n)))).collect();
        Self::new_unchecked(f.source().clone(), self.target.clone(), comps)
    }

    /// `Σ^k h` with `(Σ^k h)_n = (-1)^k h_{n-k}`, a homotopy between the
    /// suspended maps.
    pub fn suspend(&self, k: i64) -> Self {
        let s = self.source.algebra().field().sign(k);
        let comps = self.comps.iter().map(|(&n, m)| (n + k, m.scale(s))).collect();
        Self::new_unchecked(Arc::new(self.source.suspend(k)), Arc::new(self.target.suspend(k)), comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraPresentation;

    #[test]
    fn composition_and_homotopy_boundaries() {
        let alg = AlgebraPresentation::parse("F3[x]/(x2)").unwrap();
        let x = RMatrix::scalar(&alg, 1, &alg.variable(0));
        let ranks = BTreeMap::from([(0, 1), (1, 1)]);
        let a = Arc::new(ChainComplex::from_free(&alg, &ranks, &BTreeMap::from([(1, x.clone())])).unwrap());
        let xm = ChainMap::multiplication(&a, &alg.variable(0));
        assert!(xm.validate().is_ok());
        assert!(xm.after(&xm).is_zero());
        // h_0 = 1 : A_0 → A_1 gives d h + h d = x on both terms
        let h = Homotopy::new(a.clone(), a.clone(), BTreeMap::from([(0, RMatrix::identity(&alg, 1).to_kmatrix())])).unwrap();
        assert!(h.witnesses(&xm, &ChainMap::zero(&a, &a, 0)));
        let s = xm.suspend(1);
        assert!(h.suspend(1).witnesses(&s, &ChainMap::zero(s.source(), s.target(), 0)));
    }

    #[test]
    fn rejects_non_chain_maps() {
        let alg = AlgebraPresentation::parse("F2[x]/(x2)").unwrap();
        let x = RMatrix::scalar(&alg, 1, &alg.variable(0));
        let ranks = BTreeMap::from([(0, 1), (1, 1)]);
        let a = Arc::new(ChainComplex::from_free(&alg, &ranks, &BTreeMap::from([(1, x)])).unwrap());
        let comps = BTreeMap::from([(0, RMatrix::identity(&alg, 1))]);
        assert!(ChainMap::from_rmatrices(a.clone(), a, 0, &comps).is_err());
    }
}
