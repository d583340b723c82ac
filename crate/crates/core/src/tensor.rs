//! Tensor products of perfect complexes and the structure isomorphisms
//! relating them to suspension, the unit and reassociation.
//!
//! `(X ⊗ Y)_n = ⊕_{i+j=n} X_i ⊗_R Y_j`, summands ordered by increasing `i`,
//! generators of `X_i ⊗ Y_j` ordered `(a, b) ↦ a·rank(Y_j) + b`, and
//! `d(x ⊗ y) = d x ⊗ y + (-1)^{|x|} x ⊗ d y`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::chain_map::{ChainMap, Homotopy};
use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::matrix::KMatrix;
use crate::rmatrix::RMatrix;

/// The summand `X_left ⊗ Y_right` of `(X ⊗ Y)_{left+right}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorBlock {
    pub left: i64,
    pub right: i64,
    /// Generator offset inside the total degree.
    pub offset: usize,
    pub left_rank: usize,
    pub right_rank: usize,
}

impl TensorBlock {
    pub fn rank(&self) -> usize {
        self.left_rank * self.right_rank
    }
}

/// Summands of `(X ⊗ Y)_n` in storage order.
pub fn layout(x: &ChainComplex, y: &ChainComplex, n: i64) -> Vec<TensorBlock> {
    let mut out = Vec::new();
    let mut offset = 0;
    for (&i, m) in x.terms() {
        let j = n - i;
        let (a, b) = (m.free_rank().unwrap_or(0), y.term(j).free_rank().unwrap_or(0));
        if a > 0 && b > 0 {
            out.push(TensorBlock { left: i, right: j, offset, left_rank: a, right_rank: b });
            offset += a * b;
        }
    }
    out
}

fn find(blocks: &[TensorBlock], i: i64) -> Option<&TensorBlock> {
    blocks.iter().find(|b| b.left == i)
}

fn degrees(x: &ChainComplex, y: &ChainComplex) -> Vec<i64> {
    let mut ds: Vec<i64> = x.degrees().iter().flat_map(|&i| y.degrees().into_iter().map(move |j| i + j)).collect();
    ds.sort_unstable();
    ds.dedup();
    ds
}

/// `X ⊗_R Y` for perfect complexes.
pub fn tensor(x: &ChainComplex, y: &ChainComplex) -> Result<ChainComplex> {
    x.require_perfect()?;
    y.require_perfect()?;
    if **x.algebra() != **y.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let alg = x.algebra().clone();
    let field = alg.field();
    let mut ranks = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for n in degrees(x, y) {
        let src = layout(x, y, n);
        let total: usize = src.iter().map(TensorBlock::rank).sum();
        if total == 0 {
            continue;
        }
        ranks.insert(n, total);
        let tgt = layout(x, y, n - 1);
        let tt: usize = tgt.iter().map(TensorBlock::rank).sum();
        let mut d = RMatrix::zeros(&alg, tt, total);
        for b in &src {
            if let Some(t) = find(&tgt, b.left - 1) {
                let blk = x.rdiff(b.left).kron(&RMatrix::identity(&alg, b.right_rank));
                d.put(t.offset, b.offset, &blk);
            }
            if let Some(t) = find(&tgt, b.left) {
                let blk = RMatrix::identity(&alg, b.left_rank).kron(&y.rdiff(b.right)).scale_k(field.sign(b.left));
                d.put(t.offset, b.offset, &blk);
            }
        }
        diffs.insert(n, d);
    }
    diffs.retain(|n, _| ranks.contains_key(&(n - 1)));
    Ok(ChainComplex::from_free_unchecked(&alg, &ranks, &diffs))
}

/// Assembles components `(X ⊗ Y)_n → (X' ⊗ Y')_{n+shift}` from a rule
/// sending the summand `(i, j)` to a list of target summands with blocks.
fn blockwise(
    sx: &ChainComplex,
    sy: &ChainComplex,
    tx: &ChainComplex,
    ty: &ChainComplex,
    shift: i64,
    rule: impl Fn(i64, i64) -> Vec<(i64, i64, RMatrix)>,
) -> BTreeMap<i64, KMatrix> {
    let alg = sx.algebra().clone();
    let mut comps = BTreeMap::new();
    for n in degrees(sx, sy) {
        let src = layout(sx, sy, n);
        let tgt = layout(tx, ty, n + shift);
        let (rs, rt): (usize, usize) = (src.iter().map(TensorBlock::rank).sum(), tgt.iter().map(TensorBlock::rank).sum());
        if rs == 0 || rt == 0 {
            continue;
        }
        let mut m = RMatrix::zeros(&alg, rt, rs);
        for b in &src {
            for (i2, j2, blk) in rule(b.left, b.right) {
                if let Some(t) = tgt.iter().find(|t| t.left == i2 && t.right == j2) {
                    m.put(t.offset, b.offset, &blk);
                }
            }
        }
        comps.insert(n, m.to_kmatrix());
    }
    comps
}

/// `f ⊗ g : X ⊗ Y → X' ⊗ Y'` for degree-0 maps.
pub fn tensor_maps(f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
    let (sx, sy, tx, ty) = (f.source(), g.source(), f.target(), g.target());
    let src = Arc::new(tensor(sx, sy)?);
    let tgt = Arc::new(tensor(tx, ty)?);
    tensor_maps_between(f, g, &src, &tgt)
}

/// `f ⊗ g` between given (structurally matching) tensor complexes.
pub fn tensor_maps_between(f: &ChainMap, g: &ChainMap, src: &Arc<ChainComplex>, tgt: &Arc<ChainComplex>) -> Result<ChainMap> {
    if f.degree() != 0 || g.degree() != 0 {
        return Err(Error::DimensionMismatch("tensor of maps of nonzero degree".into()));
    }
    let comps = blockwise(f.source(), g.source(), f.target(), g.target(), 0, |i, j| vec![(i, j, f.rcomp(i).kron(&g.rcomp(j)))]);
    ChainMap::new(src.clone(), tgt.clone(), 0, comps)
}

/// `h ⊗ g`, a homotopy between `f ⊗ g` and `f' ⊗ g` when `h` witnesses
/// `f ≃ f'`.
pub fn tensor_homotopy_left(h: &Homotopy, g: &ChainMap) -> Result<Homotopy> {
    let (sx, sy, tx, ty) = (h.source(), g.source(), h.target(), g.target());
    let alg = sx.algebra().clone();
    let comps = blockwise(sx, sy, tx, ty, 1, |i, j| {
        vec![(i + 1, j, RMatrix::from_kmatrix(&alg, &h.comp(i)).kron(&g.rcomp(j)))]
    });
    Homotopy::new(Arc::new(tensor(sx, sy)?), Arc::new(tensor(tx, ty)?), comps)
}

/// `f ⊗ h` with the Koszul sign `(-1)^{|x|}`.
pub fn tensor_homotopy_right(f: &ChainMap, h: &Homotopy) -> Result<Homotopy> {
    let (sx, sy, tx, ty) = (f.source(), h.source(), f.target(), h.target());
    let alg = sx.algebra().clone();
    let field = alg.field();
    let comps = blockwise(sx, sy, tx, ty, 1, |i, j| {
        vec![(i, j + 1, f.rcomp(i).kron(&RMatrix::from_kmatrix(&alg, &h.comp(j))).scale_k(field.sign(i)))]
    });
    Homotopy::new(Arc::new(tensor(sx, sy)?), Arc::new(tensor(tx, ty)?), comps)
}

/// `Σ^a X ⊗ Σ^b Y → Σ^{a+b}(X ⊗ Y)`, acting on `x ⊗ y` with `x ∈ X_i` by
/// the sign `(-1)^{b·i}`.
pub fn shift_tensor_iso(x: &Arc<ChainComplex>, y: &Arc<ChainComplex>, a: i64, b: i64) -> Result<ChainMap> {
    let sx = Arc::new(x.suspend(a));
    let sy = Arc::new(y.suspend(b));
    let src = Arc::new(tensor(&sx, &sy)?);
    let tgt = Arc::new(tensor(x, y)?.suspend(a + b));
    let alg = x.algebra().clone();
    let field = alg.field();
    let comps = blockwise(&sx, &sy, x, y, -(a + b), |i, j| {
        let n = sx.rank(i) * sy.rank(j);
        vec![(i - a, j - b, RMatrix::identity(&alg, n).scale_k(field.sign(b * (i - a))))]
    });
    ChainMap::new(src, tgt, 0, comps)
}

/// `θ : (ΣX) ⊗ Y → Σ(X ⊗ Y)`.
pub fn theta(x: &Arc<ChainComplex>, y: &Arc<ChainComplex>) -> Result<ChainMap> {
    shift_tensor_iso(x, y, 1, 0)
}

/// `ζ : X ⊗ (ΣY) → Σ(X ⊗ Y)`.
pub fn zeta(x: &Arc<ChainComplex>, y: &Arc<ChainComplex>) -> Result<ChainMap> {
    shift_tensor_iso(x, y, 0, 1)
}

/// Compares `(Σζ)∘θ` with `(Σθ)∘ζ` on `(ΣX) ⊗ (ΣY)`; returns `-1` when they
/// differ by a sign, `1` when equal, and `0` otherwise.
pub fn anticommute_sign(x: &Arc<ChainComplex>, y: &Arc<ChainComplex>) -> Result<i32> {
    let sx = Arc::new(x.suspend(1));
    let sy = Arc::new(y.suspend(1));
    // θ_{X,ΣY} : ΣX ⊗ ΣY → Σ(X ⊗ ΣY), then Σζ_{X,Y}
    let path1 = zeta(x, y)?.suspend(1).after(&theta(x, &sy)?);
    // ζ_{ΣX,Y} : ΣX ⊗ ΣY → Σ(ΣX ⊗ Y), then Σθ_{X,Y}
    let path2 = theta(x, y)?.suspend(1).after(&zeta(&sx, y)?);
    if path1.is_zero() && path2.is_zero() {
        return Ok(0);
    }
    // in characteristic 2 both answers hold; report the anticommuting one
    if path1.equals(&path2.neg()) {
        Ok(-1)
    } else if path1.equals(&path2) {
        Ok(1)
    } else {
        Ok(0)
    }
}

/// `λ : R ⊗ Y → Y` with `R` in degree 0.
pub fn left_unitor(y: &Arc<ChainComplex>) -> Result<ChainMap> {
    let r = ChainComplex::ring(y.algebra(), 0);
    let src = Arc::new(tensor(&r, y)?);
    let comps = y.terms().iter().map(|(&n, m)| (n, KMatrix::identity(y.algebra().field(), m.dim()))).collect();
    ChainMap::new(src, y.clone(), 0, comps)
}

/// `ρ : X ⊗ R → X` with `R` in degree 0.
pub fn right_unitor(x: &Arc<ChainComplex>) -> Result<ChainMap> {
    let r = ChainComplex::ring(x.algebra(), 0);
    let src = Arc::new(tensor(x, &r)?);
    let comps = x.terms().iter().map(|(&n, m)| (n, KMatrix::identity(x.algebra().field(), m.dim()))).collect();
    ChainMap::new(src, x.clone(), 0, comps)
}

/// `(X ⊗ Y) ⊗ Z → X ⊗ (Y ⊗ Z)`, a permutation of generators.
pub fn associator(x: &Arc<ChainComplex>, y: &Arc<ChainComplex>, z: &Arc<ChainComplex>) -> Result<ChainMap> {
    let xy = tensor(x, y)?;
    let yz = tensor(y, z)?;
    let src = Arc::new(tensor(&xy, z)?);
    let tgt = Arc::new(tensor(x, &yz)?);
    let field = x.algebra().field();
    let d = x.algebra().dim();
    let mut comps = BTreeMap::new();
    for n in src.degrees() {
        let mut perm = KMatrix::zeros(field, tgt.dim(n), src.dim(n));
        for outer in layout(&xy, z, n) {
            for inner in layout(x, y, outer.left) {
                let tb = find(&layout(x, &yz, n), inner.left).copied().expect("matching summand");
                let yz_blocks = layout(y, z, tb.right);
                let ib = find(&yz_blocks, inner.right).copied().expect("matching inner summand");
                for a in 0..inner.left_rank {
                    for b in 0..inner.right_rank {
                        for c in 0..outer.right_rank {
                            let s = outer.offset + (inner.offset + a * inner.right_rank + b) * outer.right_rank + c;
                            let t = tb.offset + a * tb.right_rank + ib.offset + b * ib.right_rank + c;
                            for m in 0..d {
                                perm.set(t * d + m, s * d + m, 1);
                            }
                        }
                    }
                }
            }
        }
        comps.insert(n, perm);
    }
    ChainMap::new(src, tgt, 0, comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, AlgebraPresentation};
    use crate::homotopy::strict_inverse;

    fn string(alg: &Algebra, m: i64, n: i64) -> Arc<ChainComplex> {
        let x = RMatrix::scalar(alg, 1, &alg.variable(0));
        let ranks = (m..=n).map(|d| (d, 1)).collect();
        let diffs = (m + 1..=n).map(|d| (d, x.clone())).collect();
        Arc::new(ChainComplex::from_free(alg, &ranks, &diffs).unwrap())
    }

    fn koszul(alg: &Algebra, r: &[u32]) -> Arc<ChainComplex> {
        let ranks = BTreeMap::from([(0, 1), (1, 1)]);
        Arc::new(ChainComplex::from_free(alg, &ranks, &BTreeMap::from([(1, RMatrix::scalar(alg, 1, r))])).unwrap())
    }

    #[test]
    fn small_tensor_products() {
        let alg = AlgebraPresentation::parse("F2[x]/(x2)").unwrap();
        let t = tensor(&string(&alg, 0, 0), &string(&alg, 0, 1)).unwrap();
        assert_eq!(t.ranks(), BTreeMap::from([(0, 1), (1, 1)]));
        assert_eq!(t.rdiff(1), RMatrix::scalar(&alg, 1, &alg.variable(0)));
    }

    #[test]
    fn koszul_tensor_matches_two_variable_koszul_complex() {
        let alg = AlgebraPresentation::parse("F2[x,y]/(x2,y2)").unwrap();
        let t = tensor(&koszul(&alg, &alg.variable(0)), &koszul(&alg, &alg.variable(1))).unwrap();
        assert_eq!(t.ranks(), BTreeMap::from([(0, 1), (1, 2), (2, 1)]));
        // basis of degree 1 is (1⊗e_y, e_x⊗1): d_1 = (y x), d_2 = (x, -y)ᵀ
        let mut d1 = RMatrix::zeros(&alg, 1, 2);
        d1.entry_mut(0, 0).copy_from_slice(&alg.variable(1));
        d1.entry_mut(0, 1).copy_from_slice(&alg.variable(0));
        let mut d2 = RMatrix::zeros(&alg, 2, 1);
        d2.entry_mut(0, 0).copy_from_slice(&alg.variable(0));
        d2.entry_mut(1, 0).copy_from_slice(&alg.variable(1));
        assert_eq!(t.rdiff(1), d1);
        assert_eq!(t.rdiff(2), d2);
    }

    #[test]
    fn structure_maps_are_isomorphisms() {
        let alg = AlgebraPresentation::parse("F3[x]/(x2)").unwrap();
        let a = string(&alg, 0, 1);
        let b = string(&alg, -1, 1);
        let c = koszul(&alg, &alg.variable(0));
        assert!(strict_inverse(&associator(&a, &b, &c).unwrap()).is_some());
        assert!(strict_inverse(&left_unitor(&a).unwrap()).is_some());
        assert!(strict_inverse(&right_unitor(&b).unwrap()).is_some());
        assert!(strict_inverse(&shift_tensor_iso(&a, &b, 2, -1).unwrap()).is_some());
    }

    #[test]
    fn interchange_anticommutes() {
        let alg = AlgebraPresentation::parse("F3[x]/(x2)").unwrap();
        let r = string(&alg, 0, 0);
        assert!(theta(&r, &r).unwrap().rcomp(1).to_kmatrix().is_identity());
        assert_eq!(anticommute_sign(&r, &r).unwrap(), -1);
        assert_eq!(anticommute_sign(&string(&alg, 0, 2), &string(&alg, 1, 2)).unwrap(), -1);
    }
}
