//! Level certificates: a target built from a generator in finitely many
//! exact triangles whose third terms are sums of shifts of the generator,
//! up to a retract.
//!
//! A witness with `m` nonzero layers certifies `level_X(Y) ≤ m`. Nothing
//! here bounds levels from below.

use std::sync::Arc;

use crate::chain_map::{ChainMap, Homotopy};
use crate::complex::ChainComplex;
use crate::cone::cone;
use crate::error::{Error, Result};
use crate::triangle::{is_exact_triangle, Triangle};

mod builder;
mod calibration;
mod koszul;
mod split;

pub use builder::{tensor_level_witness, transport_witness};
pub use calibration::{minimal_free_resolution, semisimple_filtration_witness, ProjectiveDimension, Resolution};
pub use koszul::{koszul_extend, koszul_level_witness, koszul_object, GradedEndomorphism, KoszulElement};

/// A finite sum `⊕ Σ^d X` over a multiset of shifts, realized literally.
#[derive(Clone, Debug)]
pub struct LayerSpec {
    pub shifts: Vec<i64>,
    pub realization: Arc<ChainComplex>,
}

impl LayerSpec {
    pub fn new(generator: &ChainComplex, shifts: Vec<i64>) -> Self {
        let realization = Arc::new(sum_of_shifts(generator, &shifts));
        Self { shifts, realization }
    }

    pub fn is_zero(&self) -> bool {
        self.realization.is_zero()
    }
}

pub(crate) fn sum_of_shifts(generator: &ChainComplex, shifts: &[i64]) -> ChainComplex {
    let parts: Vec<ChainComplex> = shifts.iter().map(|&d| generator.suspend(d)).collect();
    if parts.is_empty() {
        return ChainComplex::zero(generator.algebra());
    }
    ChainComplex::direct_sum(&parts.iter().collect::<Vec<_>>())
}

/// `r ∘ s ≃ 1_Y` exhibiting the target as a retract of the last stage.
#[derive(Clone, Debug)]
pub struct Retract {
    /// `s : Y → Y_m`
    pub section: ChainMap,
    /// `r : Y_m → Y`
    pub retraction: ChainMap,
    /// `r s - 1 = d h + h d`
    pub homotopy: Homotopy,
}

/// Triangles `Y_{i-1} → Y_i → L_i → ΣY_{i-1}` from `Y_0 = 0`, each `L_i` a
/// sum of shifts of the generator, and `Y` a retract of the last stage.
#[derive(Clone, Debug)]
pub struct LevelWitness {
    pub generator: Arc<ChainComplex>,
    pub target: Arc<ChainComplex>,
    pub layers: Vec<LayerSpec>,
    pub triangles: Vec<Triangle>,
    pub retract: Retract,
}

impl LevelWitness {
    /// Stage `Y_i`; stage 0 is the zero complex.
    pub fn stage(&self, i: usize) -> Arc<ChainComplex> {
        match i {
            0 => self.triangles.first().map_or_else(|| Arc::new(ChainComplex::zero(self.generator.algebra())), |t| t.first().clone()),
            _ => self.triangles[i - 1].second().clone(),
        }
    }

    pub fn last_stage(&self) -> Arc<ChainComplex> {
        self.stage(self.triangles.len())
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    /// The number of nonzero layers, the bound this witness certifies.
    pub fn bound(&self) -> usize {
        self.layers.iter().filter(|l| !l.is_zero()).count()
    }

    /// `X` from itself: `0 → X → X → 0` and the identity retract.
    pub fn trivial(x: &Arc<ChainComplex>) -> Self {
        let zero = Arc::new(ChainComplex::zero(x.algebra()));
        let layer = LayerSpec::new(x, vec![0]);
        let t = strict_triangle(ChainMap::zero(&zero, x, 0), ChainMap::identity(x).retarget(x, &layer.realization).expect("equal complexes"), ChainMap::zero(&layer.realization, &Arc::new(zero.suspend(1)), 0));
        Self { generator: x.clone(), target: x.clone(), layers: vec![layer], triangles: vec![t], retract: Retract::identity(x) }
    }

    /// The zero target from no layers at all.
    pub fn empty(x: &Arc<ChainComplex>) -> Self {
        let zero = Arc::new(ChainComplex::zero(x.algebra()));
        Self { generator: x.clone(), target: zero.clone(), layers: Vec::new(), triangles: Vec::new(), retract: Retract::identity(&zero) }
    }

    /// `Y = cone(u)` for `u : ⊕Σ^a X → ⊕Σ^b X`, in two layers
    /// `0 → B → B` and `B → cone(u) → ΣA → ΣB`.
    pub fn cone_of(x: &Arc<ChainComplex>, source_shifts: Vec<i64>, target_shifts: Vec<i64>, u: &ChainMap) -> Result<Self> {
        let a = LayerSpec::new(x, source_shifts.clone());
        let b = LayerSpec::new(x, target_shifts);
        if **u.source() != *a.realization || **u.target() != *b.realization || u.degree() != 0 {
            return Err(Error::DimensionMismatch("map is not between the given sums of shifts".into()));
        }
        let u = u.retarget(&a.realization, &b.realization)?;
        let zero = Arc::new(ChainComplex::zero(x.algebra()));
        let first = strict_triangle(ChainMap::zero(&zero, &b.realization, 0), ChainMap::identity(&b.realization), ChainMap::zero(&b.realization, &Arc::new(zero.suspend(1)), 0));
        let c = cone(&u)?;
        let sa = LayerSpec::new(x, source_shifts.iter().map(|d| d + 1).collect());
        let second = strict_triangle(c.inclusion.clone(), c.projection.retarget(&c.complex, &sa.realization)?, u.suspend(1).neg().retarget(&sa.realization, &Arc::new(b.realization.suspend(1)))?);
        Ok(Self { generator: x.clone(), target: c.complex.clone(), layers: vec![b, sa], triangles: vec![first, second], retract: Retract::identity(&c.complex) })
    }
}

impl Retract {
    pub fn identity(y: &Arc<ChainComplex>) -> Self {
        Self { section: ChainMap::identity(y), retraction: ChainMap::identity(y), homotopy: Homotopy::zero(y, y) }
    }
}

/// A triangle whose first composite vanishes on the nose.
pub(crate) fn strict_triangle(f: ChainMap, g: ChainMap, h: ChainMap) -> Triangle {
    let mut t = Triangle::new(f, g, h);
    t.composite_homotopy = Some(Homotopy::zero(t.first(), t.third()));
    t
}

/// Replays every triangle and the retract; returns the certified bound.
pub fn verify_witness(w: &LevelWitness) -> Result<usize> {
    if w.layers.len() != w.triangles.len() {
        return Err(Error::DimensionMismatch("one layer per triangle required".into()));
    }
    for (i, (t, layer)) in w.triangles.iter().zip(&w.layers).enumerate() {
        let invalid = || Error::InvalidTriangle(i + 1);
        let previous_ok = if i == 0 { t.first().is_zero() } else { **t.first() == **w.triangles[i - 1].second() };
        let layer_ok = *layer.realization == sum_of_shifts(&w.generator, &layer.shifts) && **t.third() == *layer.realization;
        if !previous_ok || !layer_ok {
            return Err(invalid());
        }
        match is_exact_triangle(t) {
            Ok(v) if v.exact => {}
            _ => return Err(invalid()),
        }
    }
    let last = w.last_stage();
    let r = &w.retract;
    let shapes = **r.section.source() == *w.target
        && **r.section.target() == *last
        && **r.retraction.source() == *last
        && **r.retraction.target() == *w.target;
    if !shapes || !r.homotopy.witnesses(&r.retraction.compose(&r.section)?, &ChainMap::identity(r.section.source())) {
        return Err(Error::InvalidRetract);
    }
    Ok(w.bound())
}
