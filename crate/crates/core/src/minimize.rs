//! Minimal models of perfect complexes by Gaussian elimination over `R`.
//!
//! Each step splits off a contractible summand `R^k --φ--> R^k` where `φ` is
//! a block of a differential with invertible residue. The accumulated data is
//! a strong deformation retract: `down ∘ up = 1`, `1 - up ∘ down = d H + H d`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::chain_map::{ChainMap, Homotopy};
use crate::complex::ChainComplex;
use crate::error::Result;
use crate::rmatrix::RMatrix;

/// Cached reduction data of a perfect complex, stored over `R`.
#[derive(Debug)]
pub struct Reduction {
    /// `None` when the complex is already minimal.
    minimal: Option<Arc<ChainComplex>>,
    down: BTreeMap<i64, RMatrix>,
    up: BTreeMap<i64, RMatrix>,
    homotopy: BTreeMap<i64, RMatrix>,
}

/// Minimal model of `X` together with the equivalence data.
#[derive(Clone, Debug)]
pub struct MinimalModel {
    pub complex: Arc<ChainComplex>,
    /// `X → M`
    pub down: ChainMap,
    /// `M → X`
    pub up: ChainMap,
    /// `1_X - up ∘ down = d H + H d`
    pub homotopy: Homotopy,
}

fn selection(alg: &crate::algebra::Algebra, n: usize, idx: &[usize]) -> RMatrix {
    // rows indexed by idx, columns by 0..n: picks coordinates
    let mut m = RMatrix::zeros(alg, idx.len(), n);
    for (a, &i) in idx.iter().enumerate() {
        m.entry_mut(a, i)[0] = 1;
    }
    m
}

fn complement(n: usize, idx: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !idx.contains(i)).collect()
}

/// Computes (and caches) the reduction data of a perfect complex.
pub fn reduction(x: &ChainComplex) -> Result<Arc<Reduction>> {
    x.require_perfect()?;
    if let Some(r) = x.cached_reduction().get() {
        return Ok(r.clone());
    }
    let r = Arc::new(compute(x));
    Ok(x.cached_reduction().get_or_init(|| r).clone())
}

fn compute(x: &ChainComplex) -> Reduction {
    let alg = x.algebra().clone();
    let mut ranks = x.ranks();
    let degrees: Vec<i64> = ranks.keys().copied().collect();
    let mut diffs: BTreeMap<i64, RMatrix> = degrees.iter().map(|&n| (n, x.rdiff(n))).collect();
    let rk = |ranks: &BTreeMap<i64, usize>, n: i64| ranks.get(&n).copied().unwrap_or(0);

    let mut down: BTreeMap<i64, RMatrix> = ranks.iter().map(|(&n, &r)| (n, RMatrix::identity(&alg, r))).collect();
    let mut up = down.clone();
    let mut homotopy: BTreeMap<i64, RMatrix> = BTreeMap::new();
    let mut changed = false;

    for &n in degrees.iter().rev() {
        let (rn, rm) = (rk(&ranks, n), rk(&ranks, n - 1));
        if rn == 0 || rm == 0 {
            continue;
        }
        let d = &diffs[&n];
        let residue = d.residue();
        let cols = residue.echelon().pivots;
        if cols.is_empty() {
            continue;
        }
        let rows = residue.select_cols(&cols).transpose().echelon().pivots;
        let (ccols, crows) = (complement(rn, &cols), complement(rm, &rows));
        let phi_inv = d.select(&rows, &cols).inverse().expect("pivot block has invertible residue");
        let delta = d.select(&rows, &ccols);
        let gamma = d.select(&crows, &cols);
        let eps = d.select(&crows, &ccols);
        let g_phi = gamma.mul(&phi_inv);

        // step maps between the old complex and the reduced one
        let p_n = selection(&alg, rn, &ccols);
        let mut q_m = selection(&alg, rm, &crows);
        let neg_g_phi = g_phi.neg();
        for (a, &i) in rows.iter().enumerate() {
            for b in 0..crows.len() {
                q_m.entry_mut(b, i).copy_from_slice(neg_g_phi.entry(b, a));
            }
        }
        let mut u_n = selection(&alg, rn, &ccols).transpose_selection(rn, &ccols);
        let phi_delta = phi_inv.mul(&delta).neg();
        for (a, &j) in cols.iter().enumerate() {
            for b in 0..ccols.len() {
                u_n.entry_mut(j, b).copy_from_slice(phi_delta.entry(a, b));
            }
        }
        let v_m = selection(&alg, rm, &crows).transpose_selection(rm, &crows);
        let mut h = RMatrix::zeros(&alg, rn, rm);
        for (a, &j) in cols.iter().enumerate() {
            for (b, &i) in rows.iter().enumerate() {
                h.entry_mut(j, i).copy_from_slice(phi_inv.entry(a, b));
            }
        }

        // H ← H + up ∘ h ∘ down (old accumulated maps)
        let contrib = up[&n].mul(&h).mul(&down[&(n - 1)]);
        let slot = homotopy.entry(n - 1).or_insert_with(|| RMatrix::zeros(&alg, contrib.rows(), contrib.cols()));
        *slot = slot.add(&contrib);

        let new_down_n = p_n.mul(&down[&n]);
        let new_down_m = q_m.mul(&down[&(n - 1)]);
        down.insert(n, new_down_n);
        down.insert(n - 1, new_down_m);
        let new_up_n = up[&n].mul(&u_n);
        let new_up_m = up[&(n - 1)].mul(&v_m);
        up.insert(n, new_up_n);
        up.insert(n - 1, new_up_m);

        let reduced = eps.sub(&g_phi.mul(&delta));
        diffs.insert(n, reduced);
        if let Some(above) = diffs.get(&(n + 1)) {
            let all: Vec<usize> = (0..above.cols()).collect();
            let restricted = above.select(&ccols, &all);
            diffs.insert(n + 1, restricted);
        }
        if let Some(below) = diffs.get(&(n - 1)) {
            let all: Vec<usize> = (0..below.rows()).collect();
            let restricted = below.select(&all, &crows);
            diffs.insert(n - 1, restricted);
        }
        ranks.insert(n, ccols.len());
        ranks.insert(n - 1, crows.len());
        changed = true;
    }

    if !changed {
        return Reduction { minimal: None, down: BTreeMap::new(), up: BTreeMap::new(), homotopy: BTreeMap::new() };
    }
    ranks.retain(|_, r| *r > 0);
    diffs.retain(|n, _| ranks.contains_key(n) && ranks.contains_key(&(n - 1)));
    let m = ChainComplex::from_free_unchecked(&alg, &ranks, &diffs);
    // the minimal complex is its own minimal model
    let _ = m.cached_reduction().set(Arc::new(Reduction {
        minimal: None,
        down: BTreeMap::new(),
        up: BTreeMap::new(),
        homotopy: BTreeMap::new(),
    }));
    Reduction { minimal: Some(Arc::new(m)), down, up, homotopy }
}

impl RMatrix {
    /// Transpose of a 0/1 selection matrix, i.e. the matching inclusion.
    fn transpose_selection(&self, n: usize, idx: &[usize]) -> RMatrix {
        let mut m = RMatrix::zeros(self.algebra(), n, idx.len());
        for (a, &i) in idx.iter().enumerate() {
            m.entry_mut(i, a)[0] = 1;
        }
        m
    }
}

impl Reduction {
    pub fn is_trivial(&self) -> bool {
        self.minimal.is_none()
    }

    /// Materializes the reduction as chain maps out of `x`, which must be
    /// the complex this data was computed from.
    pub fn model(&self, x: &Arc<ChainComplex>) -> MinimalModel {
        match &self.minimal {
            None => MinimalModel {
                complex: x.clone(),
                down: ChainMap::identity(x),
                up: ChainMap::identity(x),
                homotopy: Homotopy::zero(x, x),
            },
            Some(m) => {
                let down = ChainMap::from_rmatrices_unchecked(x.clone(), m.clone(), &self.down);
                let up = ChainMap::from_rmatrices_unchecked(m.clone(), x.clone(), &self.up);
                let h = self.homotopy.iter().map(|(&n, r)| (n, r.to_kmatrix())).collect();
                MinimalModel { complex: m.clone(), down, up, homotopy: Homotopy::new_unchecked(x.clone(), x.clone(), h) }
            }
        }
    }

    pub fn minimal_complex(&self, x: &Arc<ChainComplex>) -> Arc<ChainComplex> {
        self.minimal.clone().unwrap_or_else(|| x.clone())
    }
}

/// Minimal model of a perfect complex with mutually inverse homotopy
/// equivalences.
pub fn minimize(x: &Arc<ChainComplex>) -> Result<MinimalModel> {
    Ok(reduction(x)?.model(x))
}

/// A perfect complex is acyclic iff its minimal model vanishes.
pub fn is_contractible(x: &ChainComplex) -> Result<bool> {
    let r = reduction(x)?;
    Ok(match &r.minimal {
        None => x.is_zero(),
        Some(m) => m.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, AlgebraPresentation};
    use crate::chain_map::ChainMap;

    fn string(alg: &Algebra, m: i64, n: i64) -> Arc<ChainComplex> {
        let x = RMatrix::scalar(alg, 1, &alg.variable(0));
        let ranks = (m..=n).map(|d| (d, 1)).collect();
        let diffs = (m + 1..=n).map(|d| (d, x.clone())).collect();
        Arc::new(ChainComplex::from_free(alg, &ranks, &diffs).unwrap())
    }

    fn check_model(x: &Arc<ChainComplex>) -> MinimalModel {
        let mm = minimize(x).unwrap();
        assert!(mm.complex.is_minimal());
        mm.down.validate().unwrap();
        mm.up.validate().unwrap();
        assert!(mm.down.after(&mm.up).equals(&ChainMap::identity(&mm.complex)));
        let rest = ChainMap::identity(x).sub(&mm.up.after(&mm.down)).unwrap();
        assert!(mm.homotopy.witnesses(&rest, &ChainMap::zero(x, x, 0)));
        mm
    }

    #[test]
    fn contractible_cone_vanishes() {
        let alg = AlgebraPresentation::parse("F2[x]/(x2)").unwrap();
        let ranks = BTreeMap::from([(0, 1), (1, 1)]);
        let c = Arc::new(ChainComplex::from_free(&alg, &ranks, &BTreeMap::from([(1, RMatrix::identity(&alg, 1))])).unwrap());
        assert!(check_model(&c).complex.is_zero());
        assert!(is_contractible(&c).unwrap());
    }

    #[test]
    fn strings_are_minimal() {
        let alg = AlgebraPresentation::parse("F3[x]/(x2)").unwrap();
        let s = string(&alg, 0, 2);
        assert!(reduction(&s).unwrap().is_trivial());
        assert_eq!(*check_model(&s).complex, *s);
    }

    #[test]
    fn one_pivot_step() {
        let alg = AlgebraPresentation::parse("F3[x]/(x2)").unwrap();
        let ranks = BTreeMap::from([(0, 1), (1, 1)]);
        let c = ChainComplex::from_free(&alg, &ranks, &BTreeMap::from([(1, RMatrix::identity(&alg, 1))])).unwrap();
        let s = string(&alg, 0, 1);
        let sum = Arc::new(ChainComplex::direct_sum(&[&c, &s]));
        let mm = check_model(&sum);
        assert_eq!(mm.complex.ranks(), s.ranks());
    }
}
