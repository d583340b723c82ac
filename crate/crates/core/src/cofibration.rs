//! Degreewise-split monomorphisms: standard forms `X ⊕ C` with twisted
//! differential, quotients, connecting morphisms, extensions and pushouts.
//!
//! A standard form has `d(x, c) = (d x + τ c, d c)`; its connecting
//! morphism is `δ = -τ : C → ΣX`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::chain_map::{ChainMap, Homotopy};
use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::matrix::KMatrix;
use crate::module::FinModule;
use crate::rmatrix::RMatrix;
use crate::triangle::Triangle;

/// A split mono `f : X → Y` together with an isomorphism `X ⊕ C ≅ Y` that
/// puts it in standard form.
#[derive(Clone, Debug)]
pub struct Cofibration {
    pub map: ChainMap,
    /// `X ⊕ C` with `d = [[d_X, τ], [0, d_C]]`
    pub standard: Arc<ChainComplex>,
    /// `X ⊕ C → Y`, restricting to `f` on `X`
    pub to_original: ChainMap,
    pub from_original: ChainMap,
    pub quotient: Arc<ChainComplex>,
    /// `Y → C`
    pub quotient_map: ChainMap,
    /// `δ = -τ : C → ΣX`
    pub connecting: ChainMap,
}

/// `X ⊕ C` with `d(x, c) = (d x - δ c, d c)` for a chain map `δ : C → ΣX`.
pub fn twisted_sum(x: &ChainComplex, c: &ChainComplex, delta: &ChainMap) -> ChainComplex {
    let alg = x.algebra();
    let field = alg.field();
    let mut degrees: Vec<i64> = x.degrees().into_iter().chain(c.degrees()).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for &n in &degrees {
        terms.insert(n, FinModule::direct_sum(&[x.term(n), c.term(n)]));
        let (xn, cn, xm, cm) = (x.dim(n), c.dim(n), x.dim(n - 1), c.dim(n - 1));
        if xm + cm == 0 {
            continue;
        }
        let mut d = KMatrix::zeros(field, xm + cm, xn + cn);
        d.put(0, 0, &x.diff(n));
        d.put(0, xn, &delta.comp(n).neg());
        d.put(xm, xn, &c.diff(n));
        diffs.insert(n, d);
    }
    ChainComplex::new_unchecked(alg, terms, diffs)
}

fn stacked(field: crate::field::PrimeField, top: usize, bottom: usize, upper: bool) -> KMatrix {
    // inclusion of the top (upper = true) or bottom summand of top ⊕ bottom
    let mut m = KMatrix::zeros(field, top + bottom, if upper { top } else { bottom });
    if upper {
        m.put(0, 0, &KMatrix::identity(field, top));
    } else {
        m.put(top, 0, &KMatrix::identity(field, bottom));
    }
    m
}

impl Cofibration {
    /// Normalizes a split mono; fails with `NotSplitMono` if some component
    /// admits no R-linear retraction.
    pub fn new(f: &ChainMap) -> Result<Self> {
        if f.degree() != 0 {
            return Err(Error::NotSplitMono);
        }
        let (x, y) = (f.source(), f.target());
        if x.algebra() != y.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        if x.degrees().iter().any(|&n| y.dim(n) < x.dim(n)) {
            return Err(Error::NotSplitMono);
        }
        let basis = if x.is_perfect() && y.is_perfect() { free_bases(f)? } else { module_bases(f)? };
        Ok(Self::from_bases(f, basis))
    }

    fn from_bases(f: &ChainMap, bases: Bases) -> Self {
        let (x, y) = (f.source(), f.target());
        let Bases { c_terms, b, b_inv } = bases;
        let cdim = |n: i64| c_terms.get(&n).map_or(0, FinModule::dim);
        let mut c_diffs = BTreeMap::new();
        let mut delta = BTreeMap::new();
        for n in y.degrees() {
            let (xn, cn, xm, cm) = (x.dim(n), cdim(n), x.dim(n - 1), cdim(n - 1));
            let Some(bi) = b_inv.get(&(n - 1)) else { continue };
            if cn == 0 {
                continue;
            }
            let d = bi.mul(&y.diff(n)).mul(&b[&n]);
            debug_assert!(d.block(xm, 0, cm, xn).is_zero());
            if cm > 0 {
                c_diffs.insert(n, d.block(xm, xn, cm, cn));
            }
            if xm > 0 {
                delta.insert(n, d.block(0, xn, xm, cn).neg());
            }
        }
        let c_terms: BTreeMap<i64, FinModule> = c_terms.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        let quotient = Arc::new(ChainComplex::new_unchecked(x.algebra(), c_terms, c_diffs));
        let sx = Arc::new(x.suspend(1));
        let connecting = ChainMap::new_unchecked(quotient.clone(), sx, 0, delta);
        let standard = Arc::new(twisted_sum(x, &quotient, &connecting));
        let to_original = ChainMap::new_unchecked(standard.clone(), y.clone(), 0, b);
        let q = b_inv.iter().map(|(&n, m)| (n, m.block(x.dim(n), 0, quotient.dim(n), y.dim(n)))).collect();
        let quotient_map = ChainMap::new_unchecked(y.clone(), quotient.clone(), 0, q);
        let from_original = ChainMap::new_unchecked(y.clone(), standard.clone(), 0, b_inv);
        Self { map: f.clone(), standard, to_original, from_original, quotient, quotient_map, connecting }
    }

    /// The split mono `X → X ⊕ C` with connecting morphism `h : C → ΣX`.
    pub fn extension(x: &Arc<ChainComplex>, h: &ChainMap) -> Result<Self> {
        if h.degree() != 0 || **h.target() != x.suspend(1) {
            return Err(Error::NotComposable("connecting map must land in ΣX".into()));
        }
        let c = h.source().clone();
        let field = x.algebra().field();
        let standard = Arc::new(twisted_sum(x, &c, h));
        let inc = standard.degrees().into_iter().map(|n| (n, stacked(field, x.dim(n), c.dim(n), true))).collect();
        let proj = standard
            .degrees()
            .into_iter()
            .map(|n| (n, stacked(field, x.dim(n), c.dim(n), false).transpose()))
            .collect();
        let map = ChainMap::new(x.clone(), standard.clone(), 0, inc)?;
        let quotient_map = ChainMap::new(standard.clone(), c.clone(), 0, proj)?;
        let id = ChainMap::identity(&standard);
        Ok(Self {
            map,
            standard,
            to_original: id.clone(),
            from_original: id,
            quotient: c,
            quotient_map,
            connecting: h.retarget(h.source(), &Arc::new(x.suspend(1)))?,
        })
    }

    pub fn source(&self) -> &Arc<ChainComplex> {
        self.map.source()
    }

    pub fn target(&self) -> &Arc<ChainComplex> {
        self.map.target()
    }

    /// `X → X ⊕ C`
    pub fn standard_inclusion(&self) -> ChainMap {
        self.from_original.after(&self.map)
    }

    /// `X → Y → Y/X → ΣX`; the composite of the first two maps is strictly 0.
    pub fn triangle(&self) -> Triangle {
        let mut t = Triangle::new(self.map.clone(), self.quotient_map.clone(), self.connecting.clone());
        t.composite_homotopy = Some(Homotopy::zero(self.source(), &self.quotient));
        t
    }

    /// Strict pushout along `g : X → Z`: the split mono `Z → Z ⊕ C` with
    /// connecting morphism `(Σg) δ`, and the induced map `Y → Z ⊕ C`.
    pub fn pushout(&self, g: &ChainMap) -> Result<Pushout> {
        if **g.source() != **self.source() || g.degree() != 0 {
            return Err(Error::NotComposable("pushout leg must start at the source".into()));
        }
        let z = g.target();
        let h = g.suspend(1).compose(&self.connecting)?;
        let along = Cofibration::extension(z, &h)?;
        let (x, c) = (self.source(), &self.quotient);
        let mut comps = BTreeMap::new();
        for n in along.standard.degrees().into_iter().chain(self.standard.degrees()) {
            let mut m = KMatrix::zeros(x.algebra().field(), z.dim(n) + c.dim(n), x.dim(n) + c.dim(n));
            m.put(0, 0, &g.comp(n));
            m.put(z.dim(n), x.dim(n), &KMatrix::identity(x.algebra().field(), c.dim(n)));
            comps.insert(n, m);
        }
        let from_standard = ChainMap::new(self.standard.clone(), along.standard.clone(), 0, comps)?;
        let map = from_standard.after(&self.from_original);
        Ok(Pushout { along, map })
    }
}

/// Pushout of a split mono `f : X → Y` along `g : X → Z`.
#[derive(Clone, Debug)]
pub struct Pushout {
    /// `Z → P`
    pub along: Cofibration,
    /// `Y → P`
    pub map: ChainMap,
}

impl Pushout {
    pub fn complex(&self) -> &Arc<ChainComplex> {
        self.along.target()
    }
}

/// The triangle `X → Y → Y/X → ΣX` of a split mono.
pub fn split_mono_triangle(f: &ChainMap) -> Result<Triangle> {
    Ok(Cofibration::new(f)?.triangle())
}

struct Bases {
    c_terms: BTreeMap<i64, FinModule>,
    /// `B_n : X_n ⊕ C_n → Y_n`
    b: BTreeMap<i64, KMatrix>,
    b_inv: BTreeMap<i64, KMatrix>,
}

/// Free case: `B_n = [f_n | standard vectors completing the residue]`.
fn free_bases(f: &ChainMap) -> Result<Bases> {
    let (x, y) = (f.source(), f.target());
    let alg = x.algebra();
    let mut out = Bases { c_terms: BTreeMap::new(), b: BTreeMap::new(), b_inv: BTreeMap::new() };
    for n in y.degrees() {
        let (a, bn) = (x.rank(n), y.rank(n));
        let fr = f.rcomp(n);
        let res = fr.residue();
        if res.rank() != a {
            return Err(Error::NotSplitMono);
        }
        let extra = res.complement_indices();
        let mut bm = RMatrix::zeros(alg, bn, bn);
        bm.put(0, 0, &fr);
        for (col, &i) in extra.iter().enumerate() {
            bm.entry_mut(i, a + col)[0] = 1;
        }
        let inv = bm.inverse().ok_or(Error::NotSplitMono)?;
        out.c_terms.insert(n, FinModule::free(alg, bn - a));
        out.b.insert(n, bm.to_kmatrix());
        out.b_inv.insert(n, inv.to_kmatrix());
    }
    Ok(out)
}

/// General case: solve for an R-linear retraction `ρ_n` and take `C_n = ker ρ_n`.
fn module_bases(f: &ChainMap) -> Result<Bases> {
    let (x, y) = (f.source(), f.target());
    let field = x.algebra().field();
    let mut out = Bases { c_terms: BTreeMap::new(), b: BTreeMap::new(), b_inv: BTreeMap::new() };
    for n in y.degrees() {
        let fc = f.comp(n);
        let rho = retraction(x.term(n), y.term(n), &fc).ok_or(Error::NotSplitMono)?;
        let k = rho.kernel();
        let c = y.term(n).submodule(&k)?;
        let bm = KMatrix::hstack(&[&fc, &k], field, y.dim(n));
        let inv = bm.inverse().ok_or(Error::NotSplitMono)?;
        out.c_terms.insert(n, c);
        out.b.insert(n, bm);
        out.b_inv.insert(n, inv);
    }
    Ok(out)
}

/// An R-linear `ρ : Y → X` with `ρ f = 1`, if one exists.
fn retraction(xm: &FinModule, ym: &FinModule, f: &KMatrix) -> Option<KMatrix> {
    let field = f.field();
    let (a, b) = (xm.dim(), ym.dim());
    if a == 0 {
        return Some(KMatrix::zeros(field, 0, b));
    }
    // unknowns ρ[i][j] at i * b + j
    let nv = xm.actions().len();
    let neq = a * a + nv * a * b;
    let mut sys = KMatrix::zeros(field, neq, a * b);
    let mut rhs = KMatrix::zeros(field, neq, 1);
    let mut row = 0;
    for i in 0..a {
        for k in 0..a {
            for j in 0..b {
                sys.set(row, i * b + j, f.get(j, k));
            }
            rhs.set(row, 0, u32::from(i == k));
            row += 1;
        }
    }
    for (ax, ay) in xm.actions().iter().zip(ym.actions()) {
        for i in 0..a {
            for j in 0..b {
                for l in 0..b {
                    let v = ay.get(l, j);
                    if v != 0 {
                        sys.set(row, i * b + l, field.add(sys.get(row, i * b + l), v));
                    }
                }
                for l in 0..a {
                    let v = ax.get(i, l);
                    if v != 0 {
                        sys.set(row, l * b + j, field.sub(sys.get(row, l * b + j), v));
                    }
                }
                row += 1;
            }
        }
    }
    let sol = sys.solve(&rhs)?;
    Some(KMatrix::from_fn(field, a, b, |i, j| sol.get(i * b + j, 0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, AlgebraPresentation};
    use crate::cone::cone;
    use crate::triangle::is_exact_triangle;

    fn string(alg: &Algebra, m: i64, n: i64) -> Arc<ChainComplex> {
        let x = RMatrix::scalar(alg, 1, &alg.variable(0));
        let ranks = (m..=n).map(|d| (d, 1)).collect();
        let diffs = (m + 1..=n).map(|d| (d, x.clone())).collect();
        Arc::new(ChainComplex::from_free(alg, &ranks, &diffs).unwrap())
    }

    fn check(c: &Cofibration) {
        let y = c.target();
        c.to_original.validate().unwrap();
        c.from_original.validate().unwrap();
        c.quotient_map.validate().unwrap();
        c.connecting.validate().unwrap();
        assert!(c.to_original.after(&c.from_original).equals(&ChainMap::identity(y)));
        assert!(c.to_original.after(&c.standard_inclusion()).equals(&c.map));
        assert!(c.quotient_map.after(&c.map).is_zero());
        assert!(is_exact_triangle(&c.triangle()).unwrap().exact);
    }

    #[test]
    fn zero_source_gives_identity_quotient() {
        let alg = AlgebraPresentation::parse("F2[x]/(x2)").unwrap();
        let y = string(&alg, 0, 2);
        let zero = Arc::new(ChainComplex::zero(&alg));
        let c = Cofibration::new(&ChainMap::zero(&zero, &y, 0)).unwrap();
        assert_eq!(*c.quotient, *y);
        check(&c);
    }

    #[test]
    fn inclusion_into_cone_of_identity() {
        let alg = AlgebraPresentation::parse("F3[x]/(x2)").unwrap();
        let a = string(&alg, 0, 1);
        let cn = cone(&ChainMap::identity(&a)).unwrap();
        let c = Cofibration::new(&cn.inclusion).unwrap();
        assert_eq!(*c.quotient, a.suspend(1));
        let sa = Arc::new(a.suspend(1));
        let minus = ChainMap::identity(&sa).neg();
        assert!(c.connecting.retarget(&sa, &sa).unwrap().equals(&minus));
        check(&c);
    }

    #[test]
    fn column_inclusion_of_strings() {
        let alg = AlgebraPresentation::parse("F2[x]/(x2)").unwrap();
        let (x, y) = (string(&alg, 0, 0), string(&alg, 0, 1));
        let f = ChainMap::from_rmatrices(x, y, 0, &BTreeMap::from([(0, RMatrix::identity(&alg, 1))])).unwrap();
        let c = Cofibration::new(&f).unwrap();
        assert_eq!(*c.quotient, *string(&alg, 1, 1));
        check(&c);
        let bad = ChainMap::multiplication(&string(&alg, 0, 0), &alg.variable(0));
        assert!(matches!(Cofibration::new(&bad), Err(Error::NotSplitMono)));
    }

    #[test]
    fn non_free_modules() {
        let alg = AlgebraPresentation::parse("F3[x]/(x2)").unwrap();
        let k = FinModule::residue_field(&alg);
        let kk = FinModule::direct_sum(&[&k, &k]);
        let (x, y) = (Arc::new(ChainComplex::concentrated(k.clone(), 0)), Arc::new(ChainComplex::concentrated(kk, 0)));
        let f = ChainMap::new(x.clone(), y, 0, BTreeMap::from([(0, KMatrix::from_rows(alg.field(), &[vec![1], vec![2]]))])).unwrap();
        let c = Cofibration::new(&f).unwrap();
        assert_eq!(c.quotient.dim(0), 1);
        check(&c);
        // the socle inclusion k → R does not split
        let r = Arc::new(ChainComplex::concentrated(FinModule::free(&alg, 1).with_free_rank(None), 0));
        let soc = ChainMap::new(x, r, 0, BTreeMap::from([(0, KMatrix::from_rows(alg.field(), &[vec![0], vec![1]]))])).unwrap();
        assert!(matches!(Cofibration::new(&soc), Err(Error::NotSplitMono)));
    }

    #[test]
    fn pushout_commutes_and_extends() {
        let alg = AlgebraPresentation::parse("F3[x]/(x2)").unwrap();
        let (x, y) = (string(&alg, 0, 0), string(&alg, 0, 1));
        let f = ChainMap::from_rmatrices(x.clone(), y, 0, &BTreeMap::from([(0, RMatrix::identity(&alg, 1))])).unwrap();
        let c = Cofibration::new(&f).unwrap();
        let z = string(&alg, -1, 0);
        let g = ChainMap::from_rmatrices(x, z, 0, &BTreeMap::from([(0, RMatrix::scalar(&alg, 1, &alg.variable(0)))])).unwrap();
        let p = c.pushout(&g).unwrap();
        p.map.validate().unwrap();
        assert!(p.map.after(&c.map).equals(&p.along.map.after(&g)));
        check(&p.along);
    }
}
