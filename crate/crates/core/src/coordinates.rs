//! Complexes cut out of a tensor product `P ⊗ Q` of free complexes by sets of
//! basis tensors, and the coordinate maps between them.
//!
//! A basis tensor is labelled `(i, a, j, b)`: generator `a` of `P_i` tensored
//! with generator `b` of `Q_j`. A labelled complex whose differential is the
//! restriction of the ambient one is a subquotient; a 0/1 matrix matching
//! labels is a chain map whenever source and target are nested accordingly,
//! which every constructor here verifies.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::chain_map::{ChainMap, Homotopy};
use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::rmatrix::RMatrix;
use crate::tensor::{layout, tensor};

pub type Label = (i64, usize, i64, usize);

/// A free complex whose generator `a` in degree `n` sits at position
/// `gens[n][a]` of an ambient factor.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub complex: Arc<ChainComplex>,
    gens: BTreeMap<i64, Vec<usize>>,
}

impl Embedding {
    pub fn new(complex: &Arc<ChainComplex>, position: impl Fn(i64, usize) -> usize) -> Self {
        let gens = complex.degrees().into_iter().map(|n| (n, (0..complex.rank(n)).map(|a| position(n, a)).collect())).collect();
        Self { complex: complex.clone(), gens }
    }

    pub fn identity(complex: &Arc<ChainComplex>) -> Self {
        Self::new(complex, |_, a| a)
    }

    fn position(&self, n: i64, a: usize) -> usize {
        self.gens[&n][a]
    }
}

#[derive(Clone, Debug)]
pub struct Piece {
    pub complex: Arc<ChainComplex>,
    labels: BTreeMap<i64, Vec<Label>>,
    index: BTreeMap<i64, HashMap<Label, usize>>,
}

impl Piece {
    fn from_labels(complex: Arc<ChainComplex>, labels: BTreeMap<i64, Vec<Label>>) -> Self {
        let index = labels.iter().map(|(&n, ls)| (n, ls.iter().enumerate().map(|(k, &l)| (l, k)).collect())).collect();
        Self { complex, labels, index }
    }

    /// `P' ⊗ Q'` for embedded factors, labelled by ambient positions; the
    /// complex is literally `tensor(P', Q')`.
    pub fn product(p: &Embedding, q: &Embedding) -> Result<Self> {
        let complex = Arc::new(tensor(&p.complex, &q.complex)?);
        let mut labels = BTreeMap::new();
        for n in complex.degrees() {
            let mut ls = Vec::with_capacity(complex.rank(n));
            for blk in layout(&p.complex, &q.complex, n) {
                for a in 0..blk.left_rank {
                    for b in 0..blk.right_rank {
                        ls.push((blk.left, p.position(blk.left, a), blk.right, q.position(blk.right, b)));
                    }
                }
            }
            labels.insert(n, ls);
        }
        Ok(Self::from_labels(complex, labels))
    }

    /// The labels kept by `keep`, with the restricted differential. Fails
    /// unless the kept set is a subquotient.
    pub fn restrict(&self, keep: impl Fn(&Label) -> bool) -> Result<Self> {
        let alg = self.complex.algebra();
        let mut kept: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (&n, ls) in &self.labels {
            let ks: Vec<usize> = (0..ls.len()).filter(|&k| keep(&ls[k])).collect();
            if !ks.is_empty() {
                kept.insert(n, ks);
            }
        }
        let ranks = kept.iter().map(|(&n, ks)| (n, ks.len())).collect();
        let mut diffs = BTreeMap::new();
        for (&n, cols) in &kept {
            if let Some(rows) = kept.get(&(n - 1)) {
                diffs.insert(n, self.complex.rdiff(n).select(rows, cols));
            }
        }
        let complex = Arc::new(ChainComplex::from_free(alg, &ranks, &diffs)?);
        let labels = kept.iter().map(|(&n, ks)| (n, ks.iter().map(|&k| self.labels[&n][k]).collect())).collect();
        Ok(Self::from_labels(complex, labels))
    }

    pub fn labels(&self, n: i64) -> &[Label] {
        self.labels.get(&n).map_or(&[], Vec::as_slice)
    }

    pub fn contains(&self, n: i64, l: &Label) -> bool {
        self.index.get(&n).is_some_and(|ix| ix.contains_key(l))
    }

    fn positions(&self, n: i64, of: &Piece) -> Vec<usize> {
        of.labels(n).iter().map(|l| self.index[&n][l]).collect()
    }

    /// Whether every label of `other` is a label of `self`.
    pub fn includes(&self, other: &Piece) -> bool {
        other.labels.iter().all(|(&n, ls)| ls.iter().all(|l| self.contains(n, l)))
    }
}

fn shape_error(what: &str) -> Error {
    Error::DimensionMismatch(format!("{what}: labels do not nest"))
}

fn matching(src: &Piece, tgt: &Piece, n: i64) -> RMatrix {
    let mut m = RMatrix::zeros(src.complex.algebra(), tgt.complex.rank(n), src.complex.rank(n));
    for (c, l) in src.labels(n).iter().enumerate() {
        if let Some(&r) = tgt.index.get(&n).and_then(|ix| ix.get(l)) {
            m.entry_mut(r, c)[0] = 1;
        }
    }
    m
}

/// The 0/1 map sending each basis tensor of `src` to the equal label of
/// `tgt`, or to zero when `tgt` lacks it.
pub fn coordinate_map(src: &Piece, tgt: &Piece) -> Result<ChainMap> {
    let comps = src.complex.degrees().into_iter().map(|n| (n, matching(src, tgt, n))).collect();
    ChainMap::from_rmatrices(src.complex.clone(), tgt.complex.clone(), 0, &comps)
}

/// The same 0/1 matrices, scaled by `sign`, read as a homotopy
/// `src → Σ tgt`.
pub fn coordinate_homotopy(src: &Piece, tgt: &Piece, sign: u32) -> Homotopy {
    let comps = src.complex.degrees().into_iter().map(|n| (n, matching(src, tgt, n).scale_k(sign).to_kmatrix())).collect();
    Homotopy::new(src.complex.clone(), Arc::new(tgt.complex.suspend(1)), comps).expect("coordinate matrices over free modules")
}

/// For a subcomplex `sub` and the quotient `quot` of a common piece
/// `ambient`, the connecting morphism `quot → Σ sub`: minus the block of the
/// ambient differential from `quot` to `sub`.
pub fn connecting(ambient: &Piece, sub: &Piece, quot: &Piece) -> Result<ChainMap> {
    if !ambient.includes(sub) || !ambient.includes(quot) {
        return Err(shape_error("connecting morphism"));
    }
    let mut comps = BTreeMap::new();
    for n in quot.complex.degrees() {
        let rows = ambient.positions(n - 1, sub);
        let cols = ambient.positions(n, quot);
        comps.insert(n, ambient.complex.rdiff(n).select(&rows, &cols).neg());
    }
    ChainMap::from_rmatrices(quot.complex.clone(), Arc::new(sub.complex.suspend(1)), 0, &comps)
}

/// Restricts `m : ambient(src) → ambient(tgt)` to the pieces, provided
/// `m` carries `src` into `tgt`.
pub fn restrict_map(m: &ChainMap, src_ambient: &Piece, src: &Piece, tgt_ambient: &Piece, tgt: &Piece) -> Result<ChainMap> {
    if !src_ambient.includes(src) || !tgt_ambient.includes(tgt) {
        return Err(shape_error("restriction"));
    }
    let mut comps = BTreeMap::new();
    for n in src.complex.degrees() {
        let full = m.rcomp(n);
        let cols = src_ambient.positions(n, src);
        let rows = tgt_ambient.positions(n, tgt);
        let outside: Vec<usize> = (0..full.rows()).filter(|r| !rows.contains(r)).collect();
        if !full.select(&outside, &cols).is_zero() {
            return Err(Error::NotComposable("map leaves the target piece".into()));
        }
        comps.insert(n, full.select(&rows, &cols));
    }
    ChainMap::from_rmatrices(src.complex.clone(), tgt.complex.clone(), 0, &comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraPresentation;

    #[test]
    fn restricted_product_matches_tensor_of_subcomplexes() {
        let alg = AlgebraPresentation::parse("F3[x]/(x2)").unwrap();
        let x = RMatrix::scalar(&alg, 1, &alg.variable(0));
        // Y: R --x--> R ⊕ R with the first summand of degree 0 a subcomplex
        let d = {
            let mut m = RMatrix::zeros(&alg, 2, 1);
            m.put(1, 0, &x);
            m
        };
        let y = Arc::new(ChainComplex::from_free(&alg, &BTreeMap::from([(0, 2), (1, 1)]), &BTreeMap::from([(1, d)])).unwrap());
        let sub = Arc::new(ChainComplex::from_free(&alg, &BTreeMap::from([(0, 1)]), &BTreeMap::new()).unwrap());
        let ambient = Piece::product(&Embedding::identity(&y), &Embedding::identity(&y)).unwrap();
        let sub_piece = Piece::product(&Embedding::identity(&sub), &Embedding::identity(&y)).unwrap();
        let cut = ambient.restrict(|l| l.0 == 0 && l.1 == 0).unwrap();
        assert_eq!(*cut.complex, *sub_piece.complex);
        let inc = coordinate_map(&sub_piece, &ambient).unwrap();
        assert!(!inc.is_zero());
        // the quotient has no differential into the subcomplex left over
        let quot = ambient.restrict(|l| !(l.0 == 0 && l.1 == 0)).unwrap();
        assert!(connecting(&ambient, &cut, &quot).is_ok());
        assert!(restrict_map(&ChainMap::identity(&ambient.complex), &ambient, &cut, &ambient, &cut).is_ok());
        assert!(restrict_map(&ChainMap::identity(&ambient.complex), &ambient, &quot, &ambient, &cut).is_err());
    }
}
