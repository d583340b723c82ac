//! Refactoring a witness so that every stage is a coordinate subcomplex of
//! the last one.
//!
//! Triangles whose first map is already a coordinate inclusion, with second
//! map an isomorphism on the complementary coordinates, are kept as they are.
//! Any other triangle replaces the stage by the mapping cylinder of
//! `Y'_{i-1} → Y_{i-1} → Y_i`, which contains `Y'_{i-1}` as its first
//! coordinates and has quotient `cone(Y'_{i-1} → Y_i) ≃ L_i`.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::LevelWitness;
use crate::chain_map::{ChainMap, Homotopy};
use crate::complex::ChainComplex;
use crate::cone::{block_map, double_mapping_cylinder};
use crate::error::{Error, Result};
use crate::homotopy::{is_quasi_iso, strict_inverse};
use crate::rmatrix::RMatrix;
use crate::triangle::{cone_comparison, is_exact_triangle};

pub(crate) type Coordinates = BTreeMap<i64, Vec<usize>>;

/// A filtration of `total` by coordinate subcomplexes, one per layer.
#[derive(Clone, Debug)]
pub(crate) struct SplitForm {
    pub total: Arc<ChainComplex>,
    /// Layer (1-based) of every generator of `total`.
    pub layer_of: Coordinates,
    /// `Z_i`: the coordinates of layer `i`, with the restricted differential.
    pub quotients: Vec<Arc<ChainComplex>>,
    pub positions: Vec<Coordinates>,
    /// `φ_i : Z_i → L_i`, a quasi-isomorphism.
    pub to_layer: Vec<ChainMap>,
    pub section: ChainMap,
    pub retraction: ChainMap,
    pub homotopy: Homotopy,
}

/// The complex on the given generators of `c` with the restricted
/// differential; fails unless that is a subquotient.
pub(crate) fn restrict_coordinates(c: &ChainComplex, keep: &Coordinates) -> Result<Arc<ChainComplex>> {
    let ranks = keep.iter().filter(|(_, v)| !v.is_empty()).map(|(&n, v)| (n, v.len())).collect();
    let mut diffs = BTreeMap::new();
    for (&n, cols) in keep {
        if let Some(rows) = keep.get(&(n - 1)) {
            if !cols.is_empty() && !rows.is_empty() {
                diffs.insert(n, c.rdiff(n).select(rows, cols));
            }
        }
    }
    Ok(Arc::new(ChainComplex::from_free(c.algebra(), &ranks, &diffs)?))
}

/// Rows hit by a map whose every column is a distinct unit vector.
fn coordinate_rows(f: &ChainMap) -> Option<Coordinates> {
    let one = f.source().algebra().one();
    let mut out = BTreeMap::new();
    for n in f.source().degrees() {
        let m = f.rcomp(n);
        let mut rows = Vec::with_capacity(m.cols());
        for c in 0..m.cols() {
            let hits: Vec<usize> = (0..m.rows()).filter(|&r| m.entry(r, c).iter().any(|&v| v != 0)).collect();
            match hits[..] {
                [r] if m.entry(r, c) == one.as_slice() && !rows.contains(&r) => rows.push(r),
                _ => return None,
            }
        }
        out.insert(n, rows);
    }
    Some(out)
}

fn select_columns(m: &RMatrix, cols: &[usize]) -> RMatrix {
    m.select(&(0..m.rows()).collect::<Vec<_>>(), cols)
}

/// `Z` and `φ : Z → L` when `f` is a coordinate inclusion and `g` restricts
/// to an isomorphism on the remaining coordinates.
pub(crate) fn split_directly(f: &ChainMap, g: &ChainMap) -> Option<(Coordinates, Coordinates, Arc<ChainComplex>, ChainMap)> {
    let image = coordinate_rows(f)?;
    let y = f.target();
    let mut complement = BTreeMap::new();
    for n in y.degrees() {
        let hit = image.get(&n).cloned().unwrap_or_default();
        complement.insert(n, (0..y.rank(n)).filter(|r| !hit.contains(r)).collect::<Vec<_>>());
    }
    let mut comps = BTreeMap::new();
    for n in y.degrees() {
        let gn = g.rcomp(n);
        if !select_columns(&gn, image.get(&n).map_or(&[], Vec::as_slice)).is_zero() {
            return None;
        }
        comps.insert(n, select_columns(&gn, &complement[&n]));
    }
    let z = restrict_coordinates(y, &complement).ok()?;
    let phi = ChainMap::from_rmatrices(z.clone(), g.target().clone(), 0, &comps).ok()?;
    strict_inverse(&phi)?;
    Some((image, complement, z, phi))
}

pub(crate) fn split_form(w: &LevelWitness) -> Result<SplitForm> {
    w.generator.require_perfect()?;
    w.target.require_perfect()?;
    let alg = w.generator.algebra().clone();
    let mut total = Arc::new(ChainComplex::zero(&alg));
    let mut layer_of: Coordinates = BTreeMap::new();
    // e : total → Y_i and a strict section σ with e σ = 1
    let mut e = ChainMap::identity(&total);
    let mut sigma = e.clone();
    let mut untouched = true;
    let mut to_layer = Vec::with_capacity(w.triangles.len());
    for (i, t) in w.triangles.iter().enumerate() {
        let layer = i + 1;
        t.second().require_perfect()?;
        let verdict = is_exact_triangle(t).map_err(|_| Error::InvalidTriangle(layer))?;
        if !verdict.exact {
            return Err(Error::InvalidTriangle(layer));
        }
        let direct = if untouched { split_directly(&t.f, &t.g) } else { None };
        if let Some((image, complement, _, phi)) = direct {
            let y = t.second().clone();
            let mut labels = BTreeMap::new();
            for n in y.degrees() {
                let mut v = vec![layer; y.rank(n)];
                if let (Some(rows), Some(old)) = (image.get(&n), layer_of.get(&n)) {
                    for (a, &r) in rows.iter().enumerate() {
                        v[r] = old[a];
                    }
                }
                debug_assert!(complement[&n].iter().all(|&r| v[r] == layer));
                labels.insert(n, v);
            }
            layer_of = labels;
            total = y;
            e = ChainMap::identity(&total);
            sigma = e.clone();
            to_layer.push(phi);
            continue;
        }
        untouched = false;
        let a = t.f.compose(&e)?;
        let cyl = double_mapping_cylinder(&ChainMap::identity(&total), &a.neg())?;
        let y = t.second();
        let sa = total.suspend(1);
        // π(x, y, x') = y - a x, a retraction of the cylinder onto Y_i
        let pi = block_map(&cyl.complex, &[&total, y, &sa], y, &[y], &[vec![Some(&a.neg()), Some(&ChainMap::identity(y)), None]])?;
        let z_cone = crate::cone::cone(&a)?;
        let phi = cone_comparison(&a, &t.g, &verdict.composite_homotopy.pre(&e), &z_cone.complex)?;
        if !is_quasi_iso(&phi) {
            return Err(Error::InvalidTriangle(layer));
        }
        let mut labels = BTreeMap::new();
        for n in cyl.complex.degrees() {
            let mut v = layer_of.get(&n).cloned().unwrap_or_default();
            v.resize(cyl.complex.rank(n), layer);
            labels.insert(n, v);
        }
        layer_of = labels;
        total = cyl.complex.clone();
        e = pi;
        sigma = cyl.from_second.clone();
        to_layer.push(phi);
    }
    let m = w.triangles.len();
    let mut quotients = Vec::with_capacity(m);
    let mut positions = Vec::with_capacity(m);
    for (i, phi) in to_layer.iter_mut().enumerate() {
        let keep: Coordinates = layer_of.iter().map(|(&n, v)| (n, (0..v.len()).filter(|&a| v[a] == i + 1).collect())).collect();
        let z = restrict_coordinates(&total, &keep)?;
        *phi = phi.retarget(&z, phi.target())?;
        quotients.push(z);
        positions.push(keep);
    }
    let section = sigma.compose(&w.retract.section.retarget(&w.target, e.target())?)?;
    let retraction = w.retract.retraction.retarget(e.target(), &w.target)?.compose(&e)?;
    Ok(SplitForm { total, layer_of, quotients, positions, to_layer, section, retraction, homotopy: w.retract.homotopy.clone() })
}
