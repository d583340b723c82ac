//! The two calibrations of levels for modules over a local algebra: the
//! `R`-level through minimal free resolutions and the `k`-level through the
//! radical filtration.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::{LayerSpec, LevelWitness, Retract};
use crate::chain_map::{ChainMap, Homotopy};
use crate::complex::ChainComplex;
use crate::cone::cone;
use crate::error::{Error, Result};
use crate::matrix::KMatrix;
use crate::module::FinModule;
use crate::triangle::{cone_comparison, Triangle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProjectiveDimension {
    Finite(usize),
    /// The resolution had not stopped after this many steps. Over a local
    /// artinian algebra that is not a field a module of finite projective
    /// dimension is free, so this means infinite unless the cap is 0.
    Unknown(usize),
}

/// `… → P_1 → P_0 → M` with every differential in the radical.
#[derive(Clone, Debug)]
pub struct Resolution {
    /// `P_d` in degree `d`.
    pub complex: Arc<ChainComplex>,
    /// `P_0 → M`
    pub augmentation: KMatrix,
    pub ranks: Vec<usize>,
    pub projective_dimension: ProjectiveDimension,
}

/// The free cover `R^g → N` on a minimal generating set, as a k-matrix in
/// the generator-major basis of `R^g`.
fn free_cover(n: &FinModule) -> KMatrix {
    let alg = n.algebra();
    let f = alg.field();
    let radical = n.radical_of(&KMatrix::identity(f, n.dim()));
    let gens = radical.complement_basis();
    let basis = alg.standard_basis();
    let mut columns = Vec::with_capacity(gens.cols() * basis.len());
    for g in 0..gens.cols() {
        let v = gens.column(g);
        for t in 0..basis.len() {
            let mut e = vec![0; basis.len()];
            e[t] = 1;
            columns.push(n.element_action(&e).mul_vec(&v));
        }
    }
    KMatrix::from_columns(f, n.dim(), &columns)
}

/// Up to `cap + 1` free modules of the minimal resolution; the projective
/// dimension when the resolution stops by then.
pub fn minimal_free_resolution(m: &FinModule, cap: usize) -> Result<Resolution> {
    let alg = m.algebra().clone();
    let f = alg.field();
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    let mut ranks = Vec::new();
    let mut augmentation = KMatrix::zeros(f, m.dim(), 0);
    let mut projective_dimension = ProjectiveDimension::Finite(0);
    // the module being covered, and its embedding into the previous term
    let mut current = m.clone();
    let mut embedding: Option<KMatrix> = None;
    for d in 0..=cap {
        if current.is_zero() {
            break;
        }
        let cover = free_cover(&current);
        let rank = cover.cols() / alg.dim();
        let p = FinModule::free(&alg, rank);
        match &embedding {
            None => augmentation = cover.clone(),
            Some(e) => {
                diffs.insert(d as i64, e.mul(&cover));
            }
        }
        terms.insert(d as i64, p.clone());
        ranks.push(rank);
        let kernel = cover.kernel();
        if kernel.cols() == 0 {
            projective_dimension = ProjectiveDimension::Finite(d);
            current = FinModule::zero(&alg);
            break;
        }
        current = p.submodule(&kernel)?;
        embedding = Some(kernel);
        projective_dimension = ProjectiveDimension::Unknown(d);
    }
    if !current.is_zero() {
        projective_dimension = ProjectiveDimension::Unknown(cap);
    }
    let complex = Arc::new(ChainComplex::new(&alg, terms, diffs)?);
    Ok(Resolution { complex, augmentation, ranks, projective_dimension })
}

fn module_map(source: &Arc<ChainComplex>, target: &Arc<ChainComplex>, m: KMatrix) -> Result<ChainMap> {
    let comps = if m.rows() > 0 && m.cols() > 0 { BTreeMap::from([(0, m)]) } else { BTreeMap::new() };
    ChainMap::new(source.clone(), target.clone(), 0, comps)
}

/// A witness for `M` (in degree 0) from `k`, one layer per radical layer:
/// `𝔪^{i+1}M → 𝔪^iM → 𝔪^iM/𝔪^{i+1}M`, with the connecting morphism as
/// the roof through the cone of the inclusion.
pub fn semisimple_filtration_witness(m: &FinModule) -> Result<LevelWitness> {
    let alg = m.algebra().clone();
    let k = Arc::new(ChainComplex::concentrated(FinModule::residue_field(&alg), 0));
    let filtration = m.radical_filtration();
    let length = filtration.len() - 1;
    let modules = filtration.iter().map(|b| m.submodule(b)).collect::<Result<Vec<_>>>()?;
    let stage = |j: usize| Arc::new(ChainComplex::concentrated(modules[j].clone(), 0));
    let mut layers = Vec::with_capacity(length);
    let mut triangles = Vec::with_capacity(length);
    // stage i of the witness is 𝔪^{length-i} M
    for j in (0..length).rev() {
        let (lower, upper) = (stage(j + 1), stage(j));
        let inclusion = filtration[j].solve(&filtration[j + 1]).ok_or_else(|| Error::NoSolution("radical layers do not nest".into()))?;
        let (quotient, projection) = modules[j].quotient(&inclusion)?;
        if quotient.actions().iter().any(|a| !a.is_zero()) {
            return Err(Error::NoSolution("radical layer is not semisimple".into()));
        }
        let layer = LayerSpec::new(&k, vec![0; quotient.dim()]);
        let f = module_map(&lower, &upper, inclusion)?;
        let g = module_map(&upper, &layer.realization, projection)?;
        let c = cone(&f)?;
        let back = cone_comparison(&f, &g, &Homotopy::zero(&lower, &layer.realization), &c.complex)?;
        let mut t = Triangle::with_roof(f, g, back, c.projection);
        t.composite_homotopy = Some(Homotopy::zero(&lower, &layer.realization));
        triangles.push(t);
        layers.push(layer);
    }
    let target = stage(0);
    let retract = Retract::identity(&target);
    Ok(LevelWitness { generator: k, target, layers, triangles, retract })
}
