//! Deciding nullhomotopy and quasi-isomorphism, and inverting homotopy
//! equivalences, by exact linear solving.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::chain_map::{ChainMap, Homotopy};
use crate::complex::ChainComplex;
use crate::cone::cone;
use crate::error::{Error, Result};
use crate::matrix::KMatrix;
use crate::minimize::reduction;
use crate::rmatrix::RMatrix;

/// Searches for `h` with `f = d h + h d`; `None` is a definitive negative.
pub fn is_nullhomotopic(f: &ChainMap) -> Option<Homotopy> {
    assert_eq!(f.degree(), 0, "nullhomotopy of a map of nonzero degree");
    if f.is_zero() {
        return Some(Homotopy::zero(f.source(), f.target()));
    }
    let h = if f.source().is_perfect() && f.target().is_perfect() { solve_perfect(f) } else { solve_generic(f) }?;
    debug_assert!(h.witnesses(f, &ChainMap::zero(f.source(), f.target(), 0)));
    Some(h)
}

/// Searches for `h` with `f - g = d h + h d`.
pub fn homotopic(f: &ChainMap, g: &ChainMap) -> Option<Homotopy> {
    is_nullhomotopic(&f.sub(g).ok()?)
}

/// Whether `f` and `g` agree in the homotopy category.
pub fn are_homotopic(f: &ChainMap, g: &ChainMap) -> bool {
    homotopic(f, g).is_some()
}

/// `f` is a quasi-isomorphism iff its cone is acyclic.
pub fn is_quasi_iso(f: &ChainMap) -> bool {
    cone(f).map(|c| c.complex.is_acyclic()).unwrap_or(false)
}

/// A homotopy inverse `g` with witnesses `g f ≃ 1` and `f g ≃ 1`.
#[derive(Clone, Debug)]
pub struct HomotopyInverse {
    pub inverse: ChainMap,
    /// `g ∘ f - 1 = d h + h d`
    pub source_homotopy: Homotopy,
    /// `f ∘ g - 1 = d h + h d`
    pub target_homotopy: Homotopy,
}

/// Inverts a quasi-isomorphism of perfect complexes up to homotopy.
pub fn homotopy_inverse(f: &ChainMap) -> Result<Option<HomotopyInverse>> {
    let (x, y) = (f.source(), f.target());
    x.require_perfect()?;
    y.require_perfect()?;
    if f.degree() != 0 {
        return Err(Error::DimensionMismatch("homotopy inverse of a map of nonzero degree".into()));
    }
    if let Some(g) = strict_inverse(f) {
        return Ok(Some(HomotopyInverse { inverse: g, source_homotopy: Homotopy::zero(x, x), target_homotopy: Homotopy::zero(y, y) }));
    }
    if !is_quasi_iso(f) {
        return Ok(None);
    }
    let mx = reduction(x)?.model(x);
    let my = reduction(y)?.model(y);
    let fm = my.down.after(f).after(&mx.up);
    let inv = strict_inverse(&fm).expect("homotopy equivalence of minimal complexes is an isomorphism");
    let g = mx.up.after(&inv).after(&my.down);
    let gf = g.after(f).sub(&ChainMap::identity(x))?;
    let fg = f.after(&g).sub(&ChainMap::identity(y))?;
    let source_homotopy = is_nullhomotopic(&gf).expect("g f is homotopic to the identity");
    let target_homotopy = is_nullhomotopic(&fg).expect("f g is homotopic to the identity");
    Ok(Some(HomotopyInverse { inverse: g, source_homotopy, target_homotopy }))
}

/// Componentwise inverse, when every component is invertible.
pub fn strict_inverse(f: &ChainMap) -> Option<ChainMap> {
    let (x, y) = (f.source(), f.target());
    if x.degrees() != y.degrees() || f.degree() != 0 {
        return None;
    }
    let mut comps = BTreeMap::new();
    for n in x.degrees() {
        comps.insert(n, f.comp(n).inverse()?);
    }
    Some(ChainMap::new_unchecked(y.clone(), x.clone(), 0, comps))
}

/// Perfect case: solve over `R` between minimal models, then lift along the
/// reduction data.
fn solve_perfect(f: &ChainMap) -> Option<Homotopy> {
    let (x, y) = (f.source(), f.target());
    let mx = reduction(x).ok()?.model(x);
    let my = reduction(y).ok()?.model(y);
    let fm = my.down.after(f).after(&mx.up);
    let hm = solve_minimal(&fm)?;
    let h = my.homotopy.pre(f).add(&mx.homotopy.post(&my.up.after(&my.down).after(f))).add(&hm.pre(&mx.down).post(&my.up));
    Some(h)
}

/// R-level linear system for `f = d h + h d` between perfect complexes.
fn solve_minimal(f: &ChainMap) -> Option<Homotopy> {
    if f.is_zero() {
        return Some(Homotopy::zero(f.source(), f.target()));
    }
    let (x, y) = (f.source(), f.target());
    let alg = x.algebra().clone();
    let field = alg.field();
    let d = alg.dim();
    // unknown blocks h_n : X_n → Y_{n+1}
    let mut unknown_offset: BTreeMap<i64, usize> = BTreeMap::new();
    let mut nu = 0;
    for n in x.degrees() {
        let (a, b) = (x.rank(n), y.term(n + 1).free_rank().unwrap_or(0));
        if a > 0 && b > 0 {
            unknown_offset.insert(n, nu);
            nu += a * b * d;
        }
    }
    let eq_degrees: Vec<i64> = x.degrees().into_iter().filter(|&n| y.dim(n) > 0).collect();
    let mut ne = 0;
    let mut eq_offset = BTreeMap::new();
    for &n in &eq_degrees {
        eq_offset.insert(n, ne);
        ne += y.rank(n) * x.rank(n) * d;
    }
    if nu == 0 {
        return None;
    }
    let mut a_mat = KMatrix::zeros(field, ne, nu);
    let mut rhs = KMatrix::zeros(field, ne, 1);
    for &n in &eq_degrees {
        let (an, bn) = (x.rank(n), y.rank(n));
        let e0 = eq_offset[&n];
        let eq = |i: usize, j: usize| e0 + (i * an + j) * d;
        let fr = f.rcomp(n);
        for i in 0..bn {
            for j in 0..an {
                for t in 0..d {
                    rhs.set(eq(i, j) + t, 0, fr.entry(i, j)[t]);
                }
            }
        }
        // d^Y_{n+1} h_n
        if let Some(&u0) = unknown_offset.get(&n) {
            let dy = y.rdiff(n + 1);
            let bn1 = dy.cols();
            for i in 0..bn {
                for tt in 0..bn1 {
                    let mm = alg.mult_matrix(dy.entry(i, tt));
                    if mm.is_zero() {
                        continue;
                    }
                    for j in 0..an {
                        let col0 = u0 + (tt * an + j) * d;
                        add_block(&mut a_mat, eq(i, j), col0, &mm);
                    }
                }
            }
        }
        // h_{n-1} d^X_n
        if let Some(&u0) = unknown_offset.get(&(n - 1)) {
            let dx = x.rdiff(n);
            let am1 = dx.rows();
            for s in 0..am1 {
                for j in 0..an {
                    let mm = alg.mult_matrix(dx.entry(s, j));
                    if mm.is_zero() {
                        continue;
                    }
                    for i in 0..bn {
                        let col0 = u0 + (i * am1 + s) * d;
                        add_block(&mut a_mat, eq(i, j), col0, &mm);
                    }
                }
            }
        }
    }
    let sol = a_mat.solve(&rhs)?;
    let mut comps = BTreeMap::new();
    for (&n, &u0) in &unknown_offset {
        let (a, b) = (x.rank(n), y.rank(n + 1));
        let mut h = RMatrix::zeros(&alg, b, a);
        for i in 0..b {
            for j in 0..a {
                for t in 0..d {
                    h.entry_mut(i, j)[t] = sol.get(u0 + (i * a + j) * d + t, 0);
                }
            }
        }
        comps.insert(n, h.to_kmatrix());
    }
    Some(Homotopy::new_unchecked(x.clone(), y.clone(), comps))
}

fn add_block(a: &mut KMatrix, r0: usize, c0: usize, block: &KMatrix) {
    let f = a.field();
    for r in 0..block.rows() {
        for c in 0..block.cols() {
            let v = block.get(r, c);
            if v != 0 {
                a.set(r0 + r, c0 + c, f.add(a.get(r0 + r, c0 + c), v));
            }
        }
    }
}

/// k-level system with explicit R-linearity constraints, for arbitrary
/// finite modules.
fn solve_generic(f: &ChainMap) -> Option<Homotopy> {
    let (x, y) = (f.source(), f.target());
    let field = x.algebra().field();
    let nv = x.algebra().num_vars();
    let mut unknown_offset: BTreeMap<i64, usize> = BTreeMap::new();
    let mut nu = 0;
    for n in x.degrees() {
        let (a, b) = (x.dim(n), y.dim(n + 1));
        if a > 0 && b > 0 {
            unknown_offset.insert(n, nu);
            nu += a * b;
        }
    }
    if nu == 0 {
        return None;
    }
    let mut rows: Vec<(Vec<(usize, u32)>, u32)> = Vec::new();
    for n in x.degrees() {
        let (an, bn) = (x.dim(n), y.dim(n));
        let fc = f.comp(n);
        let dy = y.diff(n + 1);
        let dx = x.diff(n);
        for i in 0..bn {
            for j in 0..an {
                let mut row = Vec::new();
                if let Some(&u0) = unknown_offset.get(&n) {
                    for t in 0..dy.cols() {
                        let v = dy.get(i, t);
                        if v != 0 {
                            row.push((u0 + t * an + j, v));
                        }
                    }
                }
                if let Some(&u0) = unknown_offset.get(&(n - 1)) {
                    let am1 = dx.rows();
                    for s in 0..am1 {
                        let v = dx.get(s, j);
                        if v != 0 {
                            row.push((u0 + i * am1 + s, v));
                        }
                    }
                }
                rows.push((row, fc.get(i, j)));
            }
        }
    }
    // R-linearity of each h_n
    for (&n, &u0) in &unknown_offset {
        let (a, b) = (x.dim(n), y.dim(n + 1));
        for v in 0..nv {
            let ay = &y.term(n + 1).actions()[v];
            let ax = &x.term(n).actions()[v];
            for i in 0..b {
                for j in 0..a {
                    let mut row = Vec::new();
                    for t in 0..b {
                        let c = ay.get(i, t);
                        if c != 0 {
                            row.push((u0 + t * a + j, c));
                        }
                    }
                    for s in 0..a {
                        let c = ax.get(s, j);
                        if c != 0 {
                            row.push((u0 + i * a + s, field.neg(c)));
                        }
                    }
                    rows.push((row, 0));
                }
            }
        }
    }
    let mut a_mat = KMatrix::zeros(field, rows.len(), nu);
    let mut rhs = KMatrix::zeros(field, rows.len(), 1);
    for (r, (row, b)) in rows.iter().enumerate() {
        for &(c, v) in row {
            a_mat.set(r, c, field.add(a_mat.get(r, c), v));
        }
        rhs.set(r, 0, *b);
    }
    let sol = a_mat.solve(&rhs)?;
    let mut comps = BTreeMap::new();
    for (&n, &u0) in &unknown_offset {
        let (a, b) = (x.dim(n), y.dim(n + 1));
        comps.insert(n, KMatrix::from_fn(field, b, a, |i, j| sol.get(u0 + i * a + j, 0)));
    }
    Some(Homotopy::new_unchecked(x.clone(), y.clone(), comps))
}

/// Whether a complex is contractible, i.e. `1 ≃ 0`.
pub fn is_contractible(x: &Arc<ChainComplex>) -> bool {
    is_nullhomotopic(&ChainMap::identity(x)).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, AlgebraPresentation};
    use crate::cone::{cone, direct_sum_map, sum_inclusion, sum_projection};
    use crate::module::FinModule;

    fn string(alg: &Algebra, m: i64, n: i64) -> Arc<ChainComplex> {
        let x = RMatrix::scalar(alg, 1, &alg.variable(0));
        let ranks = (m..=n).map(|d| (d, 1)).collect();
        let diffs = (m + 1..=n).map(|d| (d, x.clone())).collect();
        Arc::new(ChainComplex::from_free(alg, &ranks, &diffs).unwrap())
    }

    #[test]
    fn bottom_multiplication_on_a_string_is_not_nullhomotopic() {
        let alg = AlgebraPresentation::parse("F2[x]/(x2)").unwrap();
        for n in [0, 3] {
            let a = string(&alg, n, n + 1);
            let x = RMatrix::scalar(&alg, 1, &alg.variable(0));
            let bottom = ChainMap::from_rmatrices(a.clone(), a.clone(), 0, &BTreeMap::from([(n, x)])).unwrap();
            assert!(is_nullhomotopic(&bottom).is_none());
            // multiplication on every term is nullhomotopic via h_n = 1
            assert!(is_nullhomotopic(&ChainMap::multiplication(&a, &alg.variable(0))).is_some());
        }
        let a = string(&alg, 0, 1);
        let z = ChainMap::zero(&a, &a, 0);
        assert!(is_nullhomotopic(&z).unwrap().comps().values().all(KMatrix::is_zero));
    }

    #[test]
    fn contractible_cones() {
        let alg = AlgebraPresentation::parse("F3[x,y]/(x2,y2)").unwrap();
        let r = Arc::new(ChainComplex::ring(&alg, 0));
        let c = cone(&ChainMap::identity(&r)).unwrap().complex;
        let h = is_nullhomotopic(&ChainMap::identity(&c)).unwrap();
        assert!(h.witnesses(&ChainMap::identity(&c), &ChainMap::zero(&c, &c, 0)));
    }

    #[test]
    fn quasi_isomorphisms() {
        let alg = AlgebraPresentation::parse("F2[x]/(x2)").unwrap();
        let r = Arc::new(ChainComplex::ring(&alg, 0));
        let a = string(&alg, 0, 0);
        assert!(is_quasi_iso(&ChainMap::identity(&a)));
        assert!(!is_quasi_iso(&ChainMap::multiplication(&a, &alg.variable(0))));
        let inv = homotopy_inverse(&ChainMap::identity(&a)).unwrap().unwrap();
        assert!(inv.inverse.equals(&ChainMap::identity(&a)));
        // R → cone(1_R) ⊕ R into the second summand
        let c = cone(&ChainMap::identity(&r)).unwrap().complex;
        let sum = Arc::new(ChainComplex::direct_sum(&[&c, &r]));
        let inc = sum_inclusion(&sum, &[&c, &r], 1);
        assert!(is_quasi_iso(&inc));
        let data = homotopy_inverse(&inc).unwrap().unwrap();
        assert!(are_homotopic(&data.inverse, &sum_projection(&sum, &[&c, &r], 1)));
        assert!(data.source_homotopy.witnesses(&data.inverse.after(&inc), &ChainMap::identity(&r)));
        assert!(data.target_homotopy.witnesses(&inc.after(&data.inverse), &ChainMap::identity(&sum)));
        let _ = direct_sum_map(&[&inc, &inc]);
    }

    #[test]
    fn generic_solver_on_non_free_modules() {
        let alg = AlgebraPresentation::parse("F3[x]/(x3)").unwrap();
        let k = FinModule::residue_field(&alg);
        let x = Arc::new(ChainComplex::concentrated(k.clone(), 0));
        assert!(is_nullhomotopic(&ChainMap::identity(&x)).is_none());
        let two = ChainComplex::new(
            &alg,
            BTreeMap::from([(0, k.clone()), (1, k)]),
            BTreeMap::from([(1, KMatrix::identity(alg.field(), 1))]),
        )
        .unwrap();
        let two = Arc::new(two);
        assert!(is_contractible(&two));
    }
}
