//! Fixed seeded inputs shared by the benchmarks, so timings compare the
//! same work across runs.

use std::sync::Arc;

use trilevel::algebra::{Algebra, AlgebraPresentation};
use trilevel::chain_map::ChainMap;
use trilevel::complex::ChainComplex;
use trilevel::level::LevelWitness;
use trilevel::random::Generator;

pub const SEED: u64 = 2024;

pub fn algebra(ring: &str) -> Algebra {
    AlgebraPresentation::parse(ring).expect("valid ring")
}

pub fn generator(ring: &str, max_rank: usize, max_amplitude: usize) -> Generator {
    Generator::new(&algebra(ring), SEED, 0, max_rank, max_amplitude)
}

/// Two split monos at the acceptance size bounds.
pub fn split_mono_pair(ring: &str) -> (ChainMap, ChainMap) {
    let mut g = generator(ring, 4, 3);
    (g.split_mono(), g.split_mono())
}

/// Witnesses with `m` and `n` layers.
pub fn witness_pair(ring: &str, m: usize, n: usize) -> (LevelWitness, LevelWitness) {
    let mut g = generator(ring, 2, 1);
    let (x, y) = (g.nonzero_complex(), g.nonzero_complex());
    (g.level_witness(&x, m).expect("witness"), g.level_witness(&y, n).expect("witness"))
}

/// A complex with contractible parts, for minimization.
pub fn wide_complex(ring: &str) -> Arc<ChainComplex> {
    generator(ring, 6, 3).complex()
}

/// A span `V ← T → U` at the acceptance size bounds.
pub fn span(ring: &str) -> (ChainMap, ChainMap) {
    generator(ring, 4, 3).span()
}
