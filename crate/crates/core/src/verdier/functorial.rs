//! Maps between pushout products: the map induced by a morphism of pairs of
//! split monos, and the comparison between suspending either factor.

use std::collections::BTreeMap;

use super::{Part, VerdierDiagram};
use crate::chain_map::ChainMap;
use crate::cofibration::Cofibration;
use crate::cone::cone;
use crate::coordinates::restrict_map;
use crate::error::{Error, Result};
use crate::homotopy::{is_quasi_iso, strict_inverse};
use crate::matrix::KMatrix;
use crate::square::{is_homotopy_cartesian, Square};
use crate::tensor::{tensor_maps, theta, zeta};
use crate::triangle::Triangle;

/// The map `W₁ → W₂` induced by a morphism of pairs, with the check that
/// its cone is the homotopy pushout of the cones on the span.
#[derive(Clone, Debug)]
pub struct VerdierMorphism {
    pub map: ChainMap,
    /// `W₁ → W₂ → cone → ΣW₁`
    pub triangle: Triangle,
    /// `cone(a⊗a')` → `cone(a⊗b')`, `cone(b⊗a')` → `cone(W₁ → W₂)`
    pub cone_square: Square,
    pub cone_is_pushout: bool,
}

/// Standard-form version of a map of targets: `Y₁std → Y₁ → Y₂ → Y₂std`.
fn standardize(b: &ChainMap, from: &Cofibration, to: &Cofibration) -> Result<ChainMap> {
    to.from_original.compose(&b.compose(&from.to_original)?)
}

/// `cone(m₁) → cone(m₂)`, `(p, s) ↦ (β p, α s)`, for `β m₁ = m₂ α`.
fn cone_map(m1: &ChainMap, m2: &ChainMap, alpha: &ChainMap, beta: &ChainMap) -> Result<ChainMap> {
    let (c1, c2) = (cone(m1)?, cone(m2)?);
    let field = m1.source().algebra().field();
    let mut comps = BTreeMap::new();
    for n in c1.complex.degrees() {
        let mut m = KMatrix::zeros(field, c2.complex.dim(n), c1.complex.dim(n));
        m.put(0, 0, &beta.comp(n));
        m.put(m2.target().dim(n), m1.target().dim(n), &alpha.comp(n - 1));
        comps.insert(n, m);
    }
    ChainMap::new(c1.complex, c2.complex, 0, comps)
}

/// For strictly commuting squares `b f₁ = f₂ a` and `b' f₁' = f₂' a'`
/// between the inputs of `d1` and `d2`, the induced map of pushout products.
pub fn verdier_morphism(
    d1: &VerdierDiagram,
    d2: &VerdierDiagram,
    (a, b): (&ChainMap, &ChainMap),
    (a2, b2): (&ChainMap, &ChainMap),
) -> Result<VerdierMorphism> {
    for (top, left, right, bottom) in [(b, &d1.first.map, &d2.first.map, a), (b2, &d1.second.map, &d2.second.map, a2)] {
        if !top.compose(left)?.sub(&right.compose(bottom)?)?.is_zero() {
            return Err(Error::NotCommuting);
        }
    }
    let bs = standardize(b, &d1.first, &d2.first)?;
    let bs2 = standardize(b2, &d1.second, &d2.second)?;
    let full = tensor_maps(&bs, &bs2)?.retarget(&d1.ambient().complex, &d2.ambient().complex)?;
    let map = restrict_map(&full, d1.ambient(), &d1.w_piece, d2.ambient(), &d2.w_piece)?;
    let triangle = Triangle::elementary(&map)?;

    use Part::{Sub as X, Total as Y};
    let corner = tensor_maps(a, a2)?;
    let left = tensor_maps(a, &bs2)?;
    let right = tensor_maps(&bs, a2)?;
    let legs = [
        cone_map(&corner, &left, &d1.vertical(X, X, Y)?, &d2.vertical(X, X, Y)?)?,
        cone_map(&corner, &right, &d1.horizontal(X, Y, X)?, &d2.horizontal(X, Y, X)?)?,
        cone_map(&left, &map, &d1.j, &d2.j)?,
        cone_map(&right, &map, &d1.j_prime, &d2.j_prime)?,
    ];
    let [f, g, g2, f2] = legs;
    let cone_square = Square::strict(f, g, g2, f2)?;
    let cone_is_pushout = is_homotopy_cartesian(&cone_square).cartesian;
    Ok(VerdierMorphism { map, triangle, cone_square, cone_is_pushout })
}

/// `W(Σf, f') → W(f, Σf')`, the restriction of `ζ⁻¹ θ : ΣY⊗Y' → Y⊗ΣY'`.
#[derive(Clone, Debug)]
pub struct SuspensionCompatibility {
    pub left: VerdierDiagram,
    pub right: VerdierDiagram,
    pub map: ChainMap,
    pub quasi_iso: bool,
}

pub fn suspension_compatibility(f: &ChainMap, f_prime: &ChainMap) -> Result<SuspensionCompatibility> {
    let left = super::build_pushout_product(&f.suspend(1), f_prime)?;
    let right = super::build_pushout_product(f, &f_prime.suspend(1))?;
    let (y, y2) = (f.target(), f_prime.target());
    let zeta_inv = strict_inverse(&zeta(y, y2)?).ok_or_else(|| Error::NoSolution("ζ is not invertible".into()))?;
    let interchange = zeta_inv.compose(&theta(y, y2)?)?;
    let into = tensor_maps(&left.first.to_original, &left.second.to_original)?;
    let out = tensor_maps(&right.first.from_original, &right.second.from_original)?;
    let full = out.compose(&interchange.compose(&into)?)?.retarget(&left.ambient().complex, &right.ambient().complex)?;
    let map = restrict_map(&full, left.ambient(), &left.w_piece, right.ambient(), &right.w_piece)?;
    let quasi_iso = is_quasi_iso(&map);
    Ok(SuspensionCompatibility { left, right, map, quasi_iso })
}
