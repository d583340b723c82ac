//! The tensor product of two witnesses, filtered along diagonals.
//!
//! With both witnesses in split form `A_1 ⊆ … ⊆ A_m` and `B_1 ⊆ … ⊆ B_n`,
//! the stage `W_k = Σ_{i+j=k+1} A_i ⊗ B_j` is the iterated strict pushout
//! along the diagonal, cut out of `A_m ⊗ B_n` by the coordinates whose layer
//! indices sum to at most `k + 1`. Its quotient by `W_{k-1}` is
//! `⊕_{i+j=k+1} Z_i ⊗ Z'_j`, identified with `⊕ L_i ⊗ L'_j` and then with a
//! sum of shifts of `X ⊗ X'` by a solved homotopy equivalence.

use std::sync::Arc;

use super::split::{split_form, SplitForm};
use super::{strict_triangle, LayerSpec, LevelWitness, Retract};
use crate::chain_map::ChainMap;
use crate::complex::ChainComplex;
use crate::cone::{block_map, sum_projection};
use crate::coordinates::{connecting, coordinate_map, Embedding, Label, Piece};
use crate::error::{Error, Result};
use crate::homotopy::homotopy_inverse;
use crate::tensor::{shift_tensor_iso, tensor, tensor_homotopy_left, tensor_homotopy_right, tensor_maps};

fn quotient_embedding(s: &SplitForm, i: usize) -> Embedding {
    let positions = s.positions[i].clone();
    Embedding::new(&s.quotients[i], move |n, a| positions[&n][a])
}

/// `L ⊗ L' → ⊕_{a,b} Σ^{d_a + e_b}(X ⊗ X')`, one component per pair of
/// summands, in the order of the returned shifts.
fn expand_layers(x: &Arc<ChainComplex>, l: &LayerSpec, x2: &Arc<ChainComplex>, l2: &LayerSpec) -> Result<Vec<(i64, ChainMap)>> {
    let parts: Vec<Arc<ChainComplex>> = l.shifts.iter().map(|&d| Arc::new(x.suspend(d))).collect();
    let parts2: Vec<Arc<ChainComplex>> = l2.shifts.iter().map(|&d| Arc::new(x2.suspend(d))).collect();
    let refs: Vec<&Arc<ChainComplex>> = parts.iter().collect();
    let refs2: Vec<&Arc<ChainComplex>> = parts2.iter().collect();
    let mut out = Vec::with_capacity(parts.len() * parts2.len());
    for (a, &d) in l.shifts.iter().enumerate() {
        for (b, &e) in l2.shifts.iter().enumerate() {
            let p = tensor_maps(&sum_projection(&l.realization, &refs, a), &sum_projection(&l2.realization, &refs2, b))?;
            out.push((d + e, shift_tensor_iso(x, x2, d, e)?.compose(&p)?));
        }
    }
    Ok(out)
}

/// A witness for `Y ⊗ Y'` from `X ⊗ X'` with `m + n - 1` layers, given
/// witnesses with `m` and `n` layers.
pub fn tensor_level_witness(left: &LevelWitness, right: &LevelWitness) -> Result<LevelWitness> {
    if **left.generator.algebra() != **right.generator.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let (a, b) = (split_form(left)?, split_form(right)?);
    let (x, x2) = (&left.generator, &right.generator);
    let generator = Arc::new(tensor(x, x2)?);
    let target = Arc::new(tensor(&left.target, &right.target)?);

    // (r s) ⊗ (r' s') - 1 = ((r s) - 1) ⊗ r' s' + 1 ⊗ ((r' s') - 1)
    let section = tensor_maps(&a.section, &b.section)?;
    let retraction = tensor_maps(&a.retraction, &b.retraction)?;
    let rs_right = b.retraction.compose(&b.section)?;
    let homotopy = tensor_homotopy_left(&a.homotopy, &rs_right)?.add(&tensor_homotopy_right(&ChainMap::identity(&left.target), &b.homotopy)?);

    let (m, n) = (left.triangles.len(), right.triangles.len());
    if m == 0 || n == 0 {
        let zero = Arc::new(ChainComplex::zero(generator.algebra()));
        let retract = Retract { section: section.retarget(&target, &zero)?, retraction: retraction.retarget(&zero, &target)?, homotopy };
        return Ok(LevelWitness { generator, target, layers: Vec::new(), triangles: Vec::new(), retract });
    }

    let ambient = Piece::product(&Embedding::identity(&a.total), &Embedding::identity(&b.total))?;
    let level = |l: &Label| a.layer_of[&l.0][l.1] + b.layer_of[&l.2][l.3];
    let stages = (0..m + n).map(|k| ambient.restrict(|l| level(l) <= k + 1)).collect::<Result<Vec<_>>>()?;
    let mut layers = Vec::with_capacity(m + n - 1);
    let mut triangles = Vec::with_capacity(m + n - 1);
    for k in 1..m + n {
        let quotient = ambient.restrict(|l| level(l) == k + 1)?;
        let mut components = Vec::new();
        for i in 1..=m {
            let Some(j) = (k + 1).checked_sub(i).filter(|&j| (1..=n).contains(&j)) else { continue };
            let cell = Piece::product(&quotient_embedding(&a, i - 1), &quotient_embedding(&b, j - 1))?;
            let onto_cell = coordinate_map(&quotient, &cell)?;
            let to_layers = tensor_maps(&a.to_layer[i - 1], &b.to_layer[j - 1])?.compose(&onto_cell)?;
            for (shift, expand) in expand_layers(x, &left.layers[i - 1], x2, &right.layers[j - 1])? {
                components.push((shift, expand.compose(&to_layers)?));
            }
        }
        let layer = LayerSpec::new(&generator, components.iter().map(|c| c.0).collect());
        let parts: Vec<ChainComplex> = layer.shifts.iter().map(|&d| generator.suspend(d)).collect();
        let part_refs: Vec<&ChainComplex> = parts.iter().collect();
        let blocks: Vec<Vec<Option<&ChainMap>>> = components.iter().map(|c| vec![Some(&c.1)]).collect();
        let psi = block_map(&quotient.complex, &[&quotient.complex], &layer.realization, &part_refs, &blocks)?;
        let inverse = homotopy_inverse(&psi)?.ok_or_else(|| Error::NoSolution(format!("layer {k} is not identified with a sum of shifts")))?;
        let f = coordinate_map(&stages[k - 1], &stages[k])?;
        let g = psi.compose(&coordinate_map(&stages[k], &quotient)?)?;
        let h = connecting(&stages[k], &stages[k - 1], &quotient)?.compose(&inverse.inverse)?;
        triangles.push(strict_triangle(f, g, h));
        layers.push(layer);
    }
    let last = &stages[m + n - 1].complex;
    let retract = Retract { section: section.retarget(&target, last)?, retraction: retraction.retarget(last, &target)?, homotopy };
    Ok(LevelWitness { generator, target, layers, triangles, retract })
}

/// `w ⊗ C`: a witness for `Y ⊗ C` from `X ⊗ C` with the same number of
/// layers, as the diagonal product with the one-layer witness of `C`.
pub fn transport_witness(w: &LevelWitness, c: &Arc<ChainComplex>) -> Result<LevelWitness> {
    c.require_perfect()?;
    tensor_level_witness(w, &LevelWitness::trivial(c))
}
