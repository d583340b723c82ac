//! Koszul objects `X//(α_1, …, α_c)`, iterated cones of graded
//! endomorphisms, and their level witnesses for ring elements.

use std::sync::Arc;

use super::{tensor_level_witness, LevelWitness};
use crate::chain_map::ChainMap;
use crate::complex::ChainComplex;
use crate::cone::cone;
use crate::error::{Error, Result};

/// A map `X → Σ^d X` at a single object; naturality is not recorded.
#[derive(Clone, Debug)]
pub struct GradedEndomorphism {
    pub object: Arc<ChainComplex>,
    pub degree: i64,
    pub map: ChainMap,
}

impl GradedEndomorphism {
    pub fn new(object: &Arc<ChainComplex>, degree: i64, map: ChainMap) -> Result<Self> {
        if map.degree() != 0 || **map.source() != **object || **map.target() != object.suspend(degree) {
            return Err(Error::NotComposable("endomorphism is not X → Σ^d X".into()));
        }
        Ok(Self { object: object.clone(), degree, map })
    }
}

/// An element to cone off: ring elements act on every object by
/// multiplication; a graded endomorphism acts only on its own object.
#[derive(Clone, Debug)]
pub enum KoszulElement {
    Ring(Vec<u32>),
    Endomorphism(GradedEndomorphism),
}

/// `X//(α_1, …, α_c)`: cone off `α_1` on `X`, then `α_2` on the result,
/// and so on. Each endomorphism must act on the object current at its turn.
pub fn koszul_object(x: &Arc<ChainComplex>, alphas: &[KoszulElement]) -> Result<Arc<ChainComplex>> {
    let mut current = x.clone();
    for alpha in alphas {
        let map = match alpha {
            KoszulElement::Ring(r) => ChainMap::multiplication(&current, r),
            KoszulElement::Endomorphism(e) => {
                if *e.object != *current {
                    return Err(Error::EndomorphismObjectMismatch);
                }
                e.map.clone()
            }
        };
        current = cone(&map)?.complex;
    }
    Ok(current)
}

/// `Kos(r) = cone(R --r--> R)` from `R` in two layers.
fn koszul_complex_witness(ring: &Arc<ChainComplex>, r: &[u32]) -> Result<LevelWitness> {
    LevelWitness::cone_of(ring, vec![0], vec![0], &ChainMap::multiplication(ring, r))
}

/// A witness for `X//(r_1, …, r_c)` from `X` with at most `c + 1` layers:
/// the diagonal product of `Kos(r_c) ⊗ … ⊗ Kos(r_1)` with `X`, one factor at
/// a time, so that each target is literally the next iterated cone.
pub fn koszul_level_witness(x: &Arc<ChainComplex>, rs: &[Vec<u32>]) -> Result<LevelWitness> {
    x.require_perfect()?;
    koszul_extend(&LevelWitness::trivial(x), rs)
}

/// A witness for `Y//(r_1, …, r_c)` from the generator of a witness for
/// `Y`, with `c` more layers.
pub fn koszul_extend(w: &LevelWitness, rs: &[Vec<u32>]) -> Result<LevelWitness> {
    let x = w.generator.clone();
    let ring = Arc::new(ChainComplex::ring(x.algebra(), 0));
    let mut w = w.clone();
    for r in rs {
        w = tensor_level_witness(&koszul_complex_witness(&ring, r)?, &w)?;
        // R ⊗ X is X on the nose
        if *w.generator == *x {
            w.generator = x.clone();
        }
    }
    Ok(w)
}
