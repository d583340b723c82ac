//! Laws of complexes, cones, tensor products and minimal models on random
//! instances.

use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use trilevel::algebra::{Algebra, AlgebraPresentation};
use trilevel::chain_map::ChainMap;
use trilevel::complex::ChainComplex;
use trilevel::cone::cone;
use trilevel::homotopy::{homotopic, is_nullhomotopic, strict_inverse};
use trilevel::minimize::minimize;
use trilevel::random::Generator;
use trilevel::tensor::{associator, left_unitor, right_unitor};

const RINGS: [&str; 3] = ["F2[x]/(x2)", "F3[x]/(x2)", "F2[x,y]/(x2,y2)"];

fn generator(i: usize, seed: u64) -> (Algebra, Generator) {
    let alg = AlgebraPresentation::parse(RINGS[i]).unwrap();
    let g = Generator::new(&alg, seed, 0, 2, 2);
    (alg, g)
}

fn euler(x: &ChainComplex) -> i64 {
    x.homology_dims().iter().map(|(&n, &d)| if n.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) }).sum()
}

fn shifted(dims: &BTreeMap<i64, usize>, k: i64) -> BTreeMap<i64, usize> {
    dims.iter().map(|(&n, &d)| (n + k, d)).collect()
}

fn add(a: &BTreeMap<i64, usize>, b: &BTreeMap<i64, usize>) -> BTreeMap<i64, usize> {
    let mut out = a.clone();
    for (&n, &d) in b {
        *out.entry(n).or_default() += d;
    }
    out.retain(|_, d| *d > 0);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn constructed_complexes_square_to_zero(seed in any::<u64>(), i in 0usize..RINGS.len()) {
        let (_, mut g) = generator(i, seed);
        let (x, y) = (g.complex(), g.complex());
        let f = g.chain_map(&x, &y);
        prop_assert!(x.validate().is_ok());
        prop_assert!(cone(&f).unwrap().complex.validate().is_ok());
        prop_assert!(trilevel::tensor::tensor(&x, &y).unwrap().validate().is_ok());
    }

    #[test]
    fn associator_and_unitors_are_strict_isomorphisms(seed in any::<u64>(), i in 0usize..RINGS.len()) {
        let (_, mut g) = generator(i, seed);
        let (x, y, z) = (g.complex(), g.complex(), g.complex());
        prop_assert!(strict_inverse(&associator(&x, &y, &z).unwrap()).is_some());
        prop_assert!(strict_inverse(&left_unitor(&x).unwrap()).is_some());
        prop_assert!(strict_inverse(&right_unitor(&x).unwrap()).is_some());
    }

    #[test]
    fn euler_characteristic_is_additive_on_cone_triangles(seed in any::<u64>(), i in 0usize..RINGS.len()) {
        let (_, mut g) = generator(i, seed);
        let (x, y) = (g.complex(), g.complex());
        let f = g.chain_map(&x, &y);
        let c = cone(&f).unwrap().complex;
        prop_assert_eq!(euler(&y), euler(&x) + euler(&c));
    }

    #[test]
    fn nullhomotopic_maps_vanish_on_homology(seed in any::<u64>(), i in 0usize..RINGS.len()) {
        let (_, mut g) = generator(i, seed);
        let (x, y) = (g.complex(), g.complex());
        let f = g.chain_map(&x, &y);
        // H(f) = 0 exactly when the long exact sequence splits into
        // H(cone f) = H(Y) ⊕ H(ΣX)
        let splits = cone(&f).unwrap().complex.homology_dims() == add(&y.homology_dims(), &shifted(&x.homology_dims(), 1));
        if is_nullhomotopic(&f).is_some() {
            prop_assert!(splits);
        }
        let zero = ChainMap::zero(&x, &y, 0);
        prop_assert!(is_nullhomotopic(&zero).is_some());
    }

    #[test]
    fn minimal_models_are_minimal_and_equivalent(seed in any::<u64>(), i in 0usize..RINGS.len()) {
        let (_, mut g) = generator(i, seed);
        let x = g.complex();
        let m = minimize(&x).unwrap();
        prop_assert!(m.complex.is_minimal());
        let id_x = ChainMap::identity(&x);
        prop_assert!(m.homotopy.witnesses(&id_x, &m.up.compose(&m.down).unwrap()));
        let id_m = ChainMap::identity(&m.complex);
        prop_assert!(homotopic(&m.down.compose(&m.up).unwrap(), &id_m).is_some());
        prop_assert_eq!(m.complex.homology_dims(), x.homology_dims());
    }
}

#[test]
fn suspension_shifts_homology() {
    let alg = AlgebraPresentation::parse("F3[x]/(x2)").unwrap();
    let r = Arc::new(ChainComplex::ring(&alg, 0));
    assert_eq!(r.suspend(2).homology_dims(), shifted(&r.homology_dims(), 2));
}
