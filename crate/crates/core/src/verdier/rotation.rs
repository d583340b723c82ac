//! Rotation compatibility: the pushout product of `(f, Y' → cone f')` and
//! that of `(Y → cone f, f')` are identified through a zig-zag of
//! quasi-isomorphisms, compatibly with their exact triangles.
//!
//! Everything is compared inside `cone(f) ⊗ cone(f')` with `f, f'` in
//! standard form, where `CX = cone(1_X)` sits as the coordinates `X ⊕ ΣX`:
//!
//! ```text
//! W₁ = X⊗CX' + Y⊗Y'  →  W = CX⊗CX' + Y⊗Y'  ←  W₂ = CX⊗X' + Y⊗Y'
//! ```

use std::collections::BTreeMap;

use serde::Serialize;

use super::{build_pushout_product, Check};
use crate::chain_map::ChainMap;
use crate::cofibration::Cofibration;
use crate::cone::cone;
use crate::coordinates::{restrict_map, Embedding, Label, Piece};
use crate::error::{Error, Result};
use crate::homotopy::{homotopic, homotopy_inverse, is_quasi_iso, strict_inverse};
use crate::matrix::KMatrix;
use crate::tensor::{tensor_maps, theta, zeta};

#[derive(Clone, Debug, Serialize)]
pub struct RotationReport {
    pub checks: Vec<Check>,
}

impl RotationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Which summand of `cone(f)_n = Y_n ⊕ X_{n-1}` a generator lies in.
struct ConeCoordinates {
    sub: BTreeMap<i64, usize>,
    total: BTreeMap<i64, usize>,
}

impl ConeCoordinates {
    fn new(c: &Cofibration) -> Self {
        Self { sub: c.source().ranks(), total: c.standard.ranks() }
    }
    fn in_sub(&self, n: i64, a: usize) -> bool {
        a < self.sub.get(&n).copied().unwrap_or(0)
    }
    fn in_total(&self, n: i64, a: usize) -> bool {
        a < self.total.get(&n).copied().unwrap_or(0)
    }
    /// `CX = X ⊕ ΣX`
    fn in_cone(&self, n: i64, a: usize) -> bool {
        self.in_sub(n, a) || !self.in_total(n, a)
    }
}

fn check(name: &'static str, outcome: Result<bool>) -> Check {
    match outcome {
        Ok(passed) => Check { name, passed, detail: if passed { String::new() } else { "does not hold".into() } },
        Err(e) => Check { name, passed: false, detail: e.to_string() },
    }
}

fn same(a: &ChainMap, b: &ChainMap) -> Result<bool> {
    Ok(a.sub(b)?.is_zero() || homotopic(a, b).is_some())
}

/// The quasi-isomorphism `cone(f) → Z` of a standard form, `(y, x) ↦ ȳ`.
fn cone_to_quotient(c: &Cofibration, cone_complex: &std::sync::Arc<crate::complex::ChainComplex>) -> Result<ChainMap> {
    let field = c.source().algebra().field();
    let comps = cone_complex
        .degrees()
        .into_iter()
        .map(|n| {
            let (xn, zn) = (c.source().dim(n), c.quotient.dim(n));
            let mut m = KMatrix::zeros(field, zn, cone_complex.dim(n));
            m.put(0, xn, &KMatrix::identity(field, zn));
            (n, m)
        })
        .collect();
    ChainMap::new(cone_complex.clone(), c.quotient.clone(), 0, comps)
}

/// The section `Z → cone(f)`, `z ↦ ((0, z), δ z)`.
fn quotient_to_cone(c: &Cofibration, cone_complex: &std::sync::Arc<crate::complex::ChainComplex>) -> Result<ChainMap> {
    let field = c.source().algebra().field();
    let comps = c
        .quotient
        .degrees()
        .into_iter()
        .map(|n| {
            let (xn, zn, yn) = (c.source().dim(n), c.quotient.dim(n), c.standard.dim(n));
            let mut m = KMatrix::zeros(field, cone_complex.dim(n), zn);
            m.put(xn, 0, &KMatrix::identity(field, zn));
            m.put(yn, 0, &c.connecting.comp(n));
            (n, m)
        })
        .collect();
    ChainMap::new(c.quotient.clone(), cone_complex.clone(), 0, comps)
}

/// Builds both pushout products, the comparison `e : W₁ → W₂` and checks
/// that `e` carries the triangles of the first onto those of the second.
pub fn verdier_rotation_check(f: &ChainMap, f_prime: &ChainMap) -> Result<RotationReport> {
    let (c1, c2) = (Cofibration::new(f)?, Cofibration::new(f_prime)?);
    let (fs, fs2) = (c1.standard_inclusion(), c2.standard_inclusion());
    let (cf, cf2) = (cone(&fs)?, cone(&fs2)?);
    let d1 = build_pushout_product(&fs, &cf2.inclusion)?;
    let d2 = build_pushout_product(&cf.inclusion, &fs2)?;

    let ambient = Piece::product(&Embedding::identity(&cf.complex), &Embedding::identity(&cf2.complex))?;
    let (k1, k2) = (ConeCoordinates::new(&c1), ConeCoordinates::new(&c2));
    let in_yy = |l: &Label| k1.in_total(l.0, l.1) && k2.in_total(l.2, l.3);
    let w = ambient.restrict(|l| (k1.in_cone(l.0, l.1) && k2.in_cone(l.2, l.3)) || in_yy(l))?;
    let into_w = |d: &super::VerdierDiagram, left: ChainMap, right: ChainMap| -> Result<ChainMap> {
        let full = tensor_maps(&left, &right)?.retarget(&d.ambient().complex, &ambient.complex)?;
        restrict_map(&full, d.ambient(), &d.w_piece, &ambient, &w)
    };
    let e1 = into_w(&d1, cf.inclusion.compose(&d1.first.to_original)?, d1.second.to_original.clone())?;
    let e2 = into_w(&d2, d2.first.to_original.clone(), cf2.inclusion.compose(&d2.second.to_original)?)?;
    let inverse = homotopy_inverse(&e2)?.ok_or_else(|| Error::NoSolution("W₂ → W is not a quasi-isomorphism".into()))?;
    let e = inverse.inverse.compose(&e1)?;

    let (x, x2) = (c1.source(), c2.source());
    // θ⁻¹ ζ : X ⊗ ΣX' → ΣX ⊗ X'
    let swap = || -> Result<ChainMap> {
        let t = strict_inverse(&theta(x, x2)?).ok_or_else(|| Error::NoSolution("θ is not invertible".into()))?;
        t.compose(&zeta(x, x2)?)
    };
    // Y' ≃ cone(f') → Z' and Z → cone(f)
    let collapse = cone_to_quotient(&c2, &cf2.complex)?;
    let section = quotient_to_cone(&c1, &cf.complex)?;
    let to_z2 = || collapse.compose(&d1.second.to_original);
    let g = c1.quotient_map.compose(&c1.to_original)?;

    let checks = vec![
        check("W₁ → W is a quasi-isomorphism", Ok(is_quasi_iso(&e1))),
        check("W₂ → W is a quasi-isomorphism", Ok(is_quasi_iso(&e2))),
        check("e j'₁ = j₂", (|| same(&e.compose(&d1.j_prime)?, &d2.j))()),
        check("q₂ e = θ⁻¹ζ q'₁", (|| same(&d2.q.compose(&e)?, &swap()?.compose(&d1.q_prime)?))()),
        check("third maps agree under θ⁻¹ζ", (|| same(&d2.third_j()?.compose(&swap()?)?, &d1.third_j_prime()?))()),
        check("F(g, h') transports F(g, g'₁)", (|| {
            let transported = tensor_maps(&g, &c2.connecting)?.compose(&tensor_maps(&ChainMap::identity(&d1.first.standard), &to_z2()?)?)?;
            same(&transported, &d1.product_quotient()?)
        })()),
        check("q'₂ e = (1 ⊗ collapse) i₁", (|| {
            let top = tensor_maps(&ChainMap::identity(&d1.first.standard), &to_z2()?)?.compose(&d1.i)?;
            same(&d2.q_prime.compose(&e)?, &top)
        })()),
        check("Σe p₁ = -Σ(j'₂ (s ⊗ 1)) ζ", (|| {
            let into_total = d2.first.from_original.compose(&section)?;
            let lifted = d2.j_prime.compose(&tensor_maps(&into_total, &ChainMap::identity(x2))?)?;
            let bottom = lifted.suspend(1).neg().compose(&zeta(&c1.quotient, x2)?)?;
            same(&e.suspend(1).compose(&d1.p)?, &bottom)
        })()),
    ];
    Ok(RotationReport { checks })
}
