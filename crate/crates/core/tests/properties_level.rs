//! Level witnesses: products, Koszul objects, transport and calibration.

use std::sync::Arc;

use proptest::prelude::*;
use trilevel::algebra::AlgebraPresentation;
use trilevel::complex::ChainComplex;
use trilevel::level::{
    koszul_extend, koszul_level_witness, semisimple_filtration_witness, tensor_level_witness, transport_witness, verify_witness,
};
use trilevel::random::Generator;

const RINGS: [&str; 3] = ["F2[x]/(x2)", "F3[x]/(x2)", "F2[x,y]/(x2,y2)"];

fn generator(i: usize, seed: u64) -> Generator {
    Generator::new(&AlgebraPresentation::parse(RINGS[i]).unwrap(), seed, 0, 2, 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn product_witnesses_stay_within_the_bound(seed in any::<u64>(), i in 0usize..RINGS.len(), m in 1usize..4, n in 1usize..4) {
        let mut g = generator(i, seed);
        let (x, y) = (g.nonzero_complex(), g.nonzero_complex());
        let (a, b) = (g.level_witness(&x, m).unwrap(), g.level_witness(&y, n).unwrap());
        let p = tensor_level_witness(&a, &b).unwrap();
        prop_assert!(p.layer_count() < m + n);
        prop_assert!(verify_witness(&p).unwrap() < m + n);
    }

    #[test]
    fn koszul_witnesses_add_at_most_one_layer_per_element(seed in any::<u64>(), i in 0usize..RINGS.len(), c in 1usize..3, layers in 1usize..4) {
        let mut g = generator(i, seed);
        let y = g.nonzero_complex();
        let rs: Vec<Vec<u32>> = (0..c).map(|_| g.radical_element()).collect();
        prop_assert!(verify_witness(&koszul_level_witness(&y, &rs).unwrap()).unwrap() <= c + 1);
        let ring = Arc::new(ChainComplex::ring(g.algebra(), 0));
        let w = g.level_witness(&ring, layers).unwrap();
        let base = verify_witness(&w).unwrap();
        prop_assert!(verify_witness(&koszul_extend(&w, &rs).unwrap()).unwrap() <= base + c);
    }

    #[test]
    fn transport_preserves_layers(seed in any::<u64>(), i in 0usize..RINGS.len(), layers in 1usize..4) {
        let mut g = generator(i, seed);
        let (x, c) = (g.nonzero_complex(), g.complex());
        let w = g.level_witness(&x, layers).unwrap();
        let t = transport_witness(&w, &c).unwrap();
        prop_assert_eq!(t.layer_count(), w.layer_count());
        verify_witness(&t).unwrap();
    }

    #[test]
    fn filtration_witnesses_have_loewy_length_layers(seed in any::<u64>(), i in 0usize..RINGS.len()) {
        let mut g = generator(i, seed);
        let m = g.module().unwrap();
        prop_assert_eq!(verify_witness(&semisimple_filtration_witness(&m).unwrap()).unwrap(), m.loewy_length());
    }
}
