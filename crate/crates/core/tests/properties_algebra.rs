//! Laws of the coefficient algebras, their modules and exact linear algebra.

use proptest::prelude::*;
use rand::Rng;
use trilevel::algebra::{Algebra, AlgebraPresentation};
use trilevel::module::FinModule;
use trilevel::random::Generator;
use trilevel::{KMatrix, PrimeField};

const RINGS: [&str; 4] = ["F2[x]/(x2)", "F3[x]/(x3)", "F2[x,y]/(x2,y2)", "F3[x,y]/(x2,xy,y2)"];

fn ring(i: usize) -> Algebra {
    AlgebraPresentation::parse(RINGS[i]).unwrap()
}

fn random_matrix(p: u32, rows: usize, cols: usize, seed: u64) -> KMatrix {
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    KMatrix::from_fn(PrimeField::new(p).unwrap(), rows, cols, |_, _| rng.gen_range(0..p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn free_modules_have_rank_times_basis_dimension(r in 0usize..5, i in 0usize..RINGS.len()) {
        let alg = ring(i);
        prop_assert_eq!(FinModule::free(&alg, r).dim(), r * alg.standard_basis().len());
    }

    #[test]
    fn radical_filtrations_strictly_decrease_to_zero(seed in any::<u64>(), i in 0usize..RINGS.len()) {
        let alg = ring(i);
        let m = Generator::new(&alg, seed, 0, 2, 1).module().unwrap();
        let dims: Vec<usize> = m.radical_filtration().iter().map(KMatrix::cols).collect();
        prop_assert_eq!(*dims.last().unwrap(), 0);
        prop_assert!(dims.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn loewy_length_of_a_sum_is_the_maximum(seed in any::<u64>(), i in 0usize..RINGS.len()) {
        let alg = ring(i);
        let mut g = Generator::new(&alg, seed, 0, 2, 1);
        let (a, b) = (g.module().unwrap(), g.module().unwrap());
        let sum = FinModule::direct_sum(&[&a, &b]);
        prop_assert_eq!(sum.loewy_length(), a.loewy_length().max(b.loewy_length()));
    }

    #[test]
    fn rank_and_nullity_add_up(p in prop::sample::select(vec![2u32, 3, 5]), rows in 0usize..7, cols in 0usize..7, seed in any::<u64>()) {
        let a = random_matrix(p, rows, cols, seed);
        let k = a.kernel();
        prop_assert_eq!(k.cols() + a.rank(), cols);
        prop_assert!(a.mul(&k).is_zero());
    }

    #[test]
    fn consistent_systems_are_solved_exactly(p in prop::sample::select(vec![2u32, 3, 5]), rows in 1usize..6, cols in 1usize..6, seed in any::<u64>()) {
        let a = random_matrix(p, rows, cols, seed);
        let x = random_matrix(p, cols, 2, seed ^ 0x5eed);
        let b = a.mul(&x);
        let y = a.solve(&b).expect("b lies in the image");
        prop_assert_eq!(a.mul(&y), b);
    }
}
