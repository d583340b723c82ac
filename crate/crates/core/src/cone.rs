//! Direct sums of maps, cones, cylinders and double mapping cylinders.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::chain_map::ChainMap;
use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::matrix::KMatrix;
use crate::module::FinModule;

fn offsets(parts: &[&ChainComplex], n: i64) -> Vec<usize> {
    let mut acc = 0;
    let mut out = Vec::with_capacity(parts.len() + 1);
    for p in parts {
        out.push(acc);
        acc += p.dim(n);
    }
    out.push(acc);
    out
}

/// A degree-0 map between direct sums given blockwise: `blocks[r][c]` maps
/// summand `c` of the source to summand `r` of the target. `source` and
/// `target` must be the direct sums of the given parts.
pub fn block_map(
    source: &Arc<ChainComplex>,
    source_parts: &[&ChainComplex],
    target: &Arc<ChainComplex>,
    target_parts: &[&ChainComplex],
    blocks: &[Vec<Option<&ChainMap>>],
) -> Result<ChainMap> {
    let f = source.algebra().field();
    let mut comps = BTreeMap::new();
    for n in source.degrees() {
        let so = offsets(source_parts, n);
        let to = offsets(target_parts, n);
        if so[source_parts.len()] != source.dim(n) || to[target_parts.len()] != target.dim(n) {
            return Err(Error::DimensionMismatch("direct sum parts do not match the complexes".into()));
        }
        let mut m = KMatrix::zeros(f, target.dim(n), source.dim(n));
        for (r, row) in blocks.iter().enumerate() {
            for (c, b) in row.iter().enumerate() {
                if let Some(map) = b {
                    if map.degree() != 0 {
                        return Err(Error::DimensionMismatch("block maps must have degree 0".into()));
                    }
                    m.put(to[r], so[c], &map.comp(n));
                }
            }
        }
        comps.insert(n, m);
    }
    ChainMap::new(source.clone(), target.clone(), 0, comps)
}

/// `f ⊕ g ⊕ …` between the direct sums of sources and targets.
pub fn direct_sum_map(maps: &[&ChainMap]) -> ChainMap {
    let sources: Vec<&ChainComplex> = maps.iter().map(|m| m.source().as_ref()).collect();
    let targets: Vec<&ChainComplex> = maps.iter().map(|m| m.target().as_ref()).collect();
    let s = Arc::new(ChainComplex::direct_sum(&sources));
    let t = Arc::new(ChainComplex::direct_sum(&targets));
    let blocks: Vec<Vec<Option<&ChainMap>>> =
        (0..maps.len()).map(|r| (0..maps.len()).map(|c| (r == c).then_some(maps[r])).collect()).collect();
    block_map(&s, &sources, &t, &targets, &blocks).expect("block diagonal map")
}

/// Inclusion of summand `i` into the direct sum of `parts`.
pub fn sum_inclusion(sum: &Arc<ChainComplex>, parts: &[&Arc<ChainComplex>], i: usize) -> ChainMap {
    let refs: Vec<&ChainComplex> = parts.iter().map(|p| p.as_ref()).collect();
    let id = ChainMap::identity(parts[i]);
    let blocks: Vec<Vec<Option<&ChainMap>>> = (0..parts.len()).map(|r| vec![(r == i).then_some(&id)]).collect();
    block_map(parts[i], &[parts[i].as_ref()], sum, &refs, &blocks).expect("summand inclusion")
}

/// Projection of the direct sum of `parts` onto summand `i`.
pub fn sum_projection(sum: &Arc<ChainComplex>, parts: &[&Arc<ChainComplex>], i: usize) -> ChainMap {
    let refs: Vec<&ChainComplex> = parts.iter().map(|p| p.as_ref()).collect();
    let id = ChainMap::identity(parts[i]);
    let blocks = vec![(0..parts.len()).map(|c| (c == i).then_some(&id)).collect::<Vec<_>>()];
    block_map(sum, &refs, parts[i], &[parts[i].as_ref()], &blocks).expect("summand projection")
}

/// Mapping cone with its structure maps.
#[derive(Clone, Debug)]
pub struct Cone {
    pub complex: Arc<ChainComplex>,
    /// `Y → cone(f)`, `y ↦ (y, 0)`
    pub inclusion: ChainMap,
    /// `cone(f) → ΣX`, `(y, x) ↦ x`
    pub projection: ChainMap,
}

/// `cone(f)_n = Y_n ⊕ X_{n-1}` with `d(y, x) = (d y + f x, -d x)`.
pub fn cone(f: &ChainMap) -> Result<Cone> {
    if f.degree() != 0 {
        return Err(Error::DimensionMismatch("cone of a map of nonzero degree".into()));
    }
    let (x, y) = (f.source(), f.target());
    let alg = x.algebra().clone();
    let field = alg.field();
    let sx = Arc::new(x.suspend(1));
    let mut degrees: Vec<i64> = y.degrees().into_iter().chain(sx.degrees()).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for &n in &degrees {
        terms.insert(n, FinModule::direct_sum(&[y.term(n), x.term(n - 1)]));
        let (yn, yn1, xn1, xn2) = (y.dim(n), y.dim(n - 1), x.dim(n - 1), x.dim(n - 2));
        let mut d = KMatrix::zeros(field, yn1 + xn2, yn + xn1);
        d.put(0, 0, &y.diff(n));
        d.put(0, yn, &f.comp(n - 1));
        d.put(yn1, yn, &x.diff(n - 1).neg());
        diffs.insert(n, d);
    }
    let c = Arc::new(ChainComplex::new_unchecked(&alg, terms, diffs));
    let mut inc = BTreeMap::new();
    let mut proj = BTreeMap::new();
    for &n in &degrees {
        let (yn, xn1) = (y.dim(n), x.dim(n - 1));
        let mut i = KMatrix::zeros(field, yn + xn1, yn);
        i.put(0, 0, &KMatrix::identity(field, yn));
        inc.insert(n, i);
        let mut p = KMatrix::zeros(field, xn1, yn + xn1);
        p.put(0, yn, &KMatrix::identity(field, xn1));
        proj.insert(n, p);
    }
    let inclusion = ChainMap::new_unchecked(y.clone(), c.clone(), 0, inc);
    let projection = ChainMap::new_unchecked(c.clone(), sx, 0, proj);
    Ok(Cone { complex: c, inclusion, projection })
}

/// Cylinder `cyl(X)_n = X_n ⊕ X_n ⊕ X_{n-1}` with
/// `d(a, b, c) = (d a + c, d b - c, -d c)`.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub complex: Arc<ChainComplex>,
    pub i0: ChainMap,
    pub i1: ChainMap,
    pub q: ChainMap,
}

pub fn cylinder(x: &Arc<ChainComplex>) -> Cylinder {
    let id = ChainMap::identity(x);
    let m = double_mapping_cylinder(&id, &id).expect("identity maps share a source");
    let q = block_map(
        &m.complex,
        &[x.as_ref(), x.as_ref(), &x.suspend(1)],
        x,
        &[x.as_ref()],
        &[vec![Some(&id), Some(&id), None]],
    )
    .expect("cylinder collapse");
    Cylinder { complex: m.complex, i0: m.from_first, i1: m.from_second, q }
}

/// Double mapping cylinder of a span `Y ← X → Z`.
#[derive(Clone, Debug)]
pub struct DoubleMappingCylinder {
    pub complex: Arc<ChainComplex>,
    pub from_first: ChainMap,
    pub from_second: ChainMap,
    pub to_suspension: ChainMap,
}

/// `M(f, g)_n = Y_n ⊕ Z_n ⊕ X_{n-1}` with
/// `d(y, z, x) = (d y + f x, d z - g x, -d x)`.
pub fn double_mapping_cylinder(f: &ChainMap, g: &ChainMap) -> Result<DoubleMappingCylinder> {
    if f.source() != g.source() && **f.source() != **g.source() {
        return Err(Error::NotComposable("span legs have different sources".into()));
    }
    let x = f.source();
    let (y, z) = (f.target(), g.target());
    let yz = Arc::new(ChainComplex::direct_sum(&[y, z]));
    let stacked = block_map(x, &[x.as_ref()], &yz, &[y.as_ref(), z.as_ref()], &[vec![Some(f)], vec![Some(&g.neg())]])?;
    let c = cone(&stacked)?;
    let from_first = c.inclusion.after(&sum_inclusion(&yz, &[y, z], 0));
    let from_second = c.inclusion.after(&sum_inclusion(&yz, &[y, z], 1));
    Ok(DoubleMappingCylinder { complex: c.complex, from_first, from_second, to_suspension: c.projection })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, AlgebraPresentation};
    use crate::rmatrix::RMatrix;

    fn string(alg: &Algebra, m: i64, n: i64) -> Arc<ChainComplex> {
        let x = RMatrix::scalar(alg, 1, &alg.variable(0));
        let ranks = (m..=n).map(|d| (d, 1)).collect();
        let diffs = (m + 1..=n).map(|d| (d, x.clone())).collect();
        Arc::new(ChainComplex::from_free(alg, &ranks, &diffs).unwrap())
    }

    #[test]
    fn cone_of_multiplication_is_a_string() {
        let alg = AlgebraPresentation::parse("F2[x]/(x2)").unwrap();
        for n in [0, 3] {
            let a = string(&alg, n, n);
            let c = cone(&ChainMap::multiplication(&a, &alg.variable(0))).unwrap();
            assert_eq!(*c.complex, *string(&alg, n, n + 1));
            c.inclusion.validate().unwrap();
            c.projection.validate().unwrap();
        }
    }

    #[test]
    fn cone_of_identity_is_acyclic_and_of_zero_splits() {
        let alg = AlgebraPresentation::parse("F3[x]/(x2)").unwrap();
        let a = string(&alg, 0, 2);
        assert!(cone(&ChainMap::identity(&a)).unwrap().complex.is_acyclic());
        let z = cone(&ChainMap::zero(&a, &a, 0)).unwrap();
        assert_eq!(*z.complex, ChainComplex::direct_sum(&[&a, &a.suspend(1)]));
    }

    #[test]
    fn cylinder_maps() {
        let alg = AlgebraPresentation::parse("F3[x]/(x2)").unwrap();
        let a = string(&alg, 0, 1);
        let cyl = cylinder(&a);
        let id = ChainMap::identity(&a);
        assert!(cyl.q.after(&cyl.i0).equals(&id));
        assert!(cyl.q.after(&cyl.i1).equals(&id));
        cyl.i1.validate().unwrap();
        assert_eq!(cyl.complex.homology_dims(), a.homology_dims());
    }

    #[test]
    fn mapping_cylinder_with_zero_leg_is_the_cone() {
        let alg = AlgebraPresentation::parse("F2[x]/(x2)").unwrap();
        let a = string(&alg, 0, 1);
        let f = ChainMap::multiplication(&a, &alg.variable(0));
        let zero = Arc::new(ChainComplex::zero(&alg));
        let m = double_mapping_cylinder(&f, &ChainMap::zero(&a, &zero, 0)).unwrap();
        assert_eq!(*m.complex, *cone(&f).unwrap().complex);
    }
}
