use std::collections::BTreeMap;
use std::sync::Arc;

use super::*;
use crate::algebra::AlgebraPresentation;
use crate::cone::cone;
use crate::random::Generator;

fn dual(p: u32) -> Algebra {
    AlgebraPresentation::parse(&format!("F{p}[x]/(x2)")).unwrap()
}

fn string(alg: &Algebra, m: i64, n: i64) -> Arc<ChainComplex> {
    Arc::new(StringComplex::new(m, n).unwrap().realize(alg).unwrap())
}

fn sum(alg: &Algebra, parts: &[(i64, i64)]) -> Arc<ChainComplex> {
    let cs: Vec<ChainComplex> = parts.iter().map(|&(m, n)| StringComplex::new(m, n).unwrap().realize(alg).unwrap()).collect();
    Arc::new(ChainComplex::direct_sum(&cs.iter().collect::<Vec<_>>()))
}

fn strings(parts: &[(i64, i64)]) -> Vec<StringComplex> {
    let mut v: Vec<StringComplex> = parts.iter().map(|&(m, n)| StringComplex::new(m, n).unwrap()).collect();
    v.sort();
    v
}

/// Multiplicity of the interval `[m, n]` from ranks of composite maps:
/// `r(m,n) - r(m-1,n) - r(m,n+1) + r(m-1,n+1)`, with `r(a,b)` the rank of
/// `V_b → V_a`.
fn interval_multiplicities(c: &ChainComplex) -> BTreeMap<(i64, i64), usize> {
    let alg = c.algebra();
    let f = alg.field();
    let Some((lo, hi)) = c.support() else { return BTreeMap::new() };
    let coefficient = |k: i64| x_coefficients(alg, &c.rdiff(k)).unwrap();
    let rank = |a: i64, b: i64| -> i64 {
        if a < lo || b > hi || a > b {
            return 0;
        }
        let mut m = KMatrix::identity(f, c.rank(b));
        for k in (a + 1..=b).rev() {
            m = coefficient(k).mul(&m);
        }
        m.rank() as i64
    };
    let mut out = BTreeMap::new();
    for m in lo..=hi {
        for n in m..=hi {
            let mult = rank(m, n) - rank(m - 1, n) - rank(m, n + 1) + rank(m - 1, n + 1);
            if mult > 0 {
                out.insert((m, n), mult as usize);
            }
        }
    }
    out
}

#[test]
fn eta_on_string_complexes() {
    let alg = dual(3);
    for n in [0, 3] {
        let a = string(&alg, n, n);
        let e0 = eta(0, &a).unwrap();
        assert!(e0.map.equals(&ChainMap::multiplication(&a, &alg.variable(0))));
        assert!(eta(1, &a).unwrap().map.is_zero());
    }
    let a = string(&alg, 0, 1);
    assert!(eta(0, &a).unwrap().map.is_zero());
    let e1 = eta(1, &a).unwrap().map;
    assert!(e1.equals(&bottom_multiplication(&alg, StringComplex::new(0, 1).unwrap()).unwrap().retarget(&a, &a).unwrap()));
    assert!(is_nullhomotopic(&e1).is_none());
}

#[test]
fn eta_rejects_bad_inputs() {
    let alg = dual(2);
    let id = ChainMap::identity(&string(&alg, 0, 0));
    let contractible = cone(&id).unwrap().complex;
    assert!(matches!(eta(0, &contractible), Err(Error::NotMinimal)));
    let other = AlgebraPresentation::parse("F2[x]/(x3)").unwrap();
    let r = Arc::new(ChainComplex::ring(&other, 0));
    assert!(matches!(eta(0, &r), Err(Error::WrongAlgebra(_))));
    assert!(matches!(decompose(&r), Err(Error::WrongAlgebra(_))));
}

#[test]
fn eta_is_essential_exactly_on_matching_summands() {
    let alg = dual(3);
    let c = sum(&alg, &[(0, 0), (0, 1), (1, 3), (2, 3)]);
    for r in 0..4 {
        let e = eta(r, &c).unwrap().map;
        let matching = [(0i64, 0i64), (0, 1), (1, 3), (2, 3)].iter().any(|&(m, n)| n - m == r);
        assert_eq!(is_nullhomotopic(&e).is_none(), matching, "r = {r}");
    }
}

#[test]
fn decomposition_examples() {
    let alg = dual(2);
    for n in [0, 3] {
        let a = string(&alg, n, n + 1);
        let x = bottom_multiplication(&alg, StringComplex::new(n, n + 1).unwrap()).unwrap().retarget(&a, &a).unwrap();
        let c = cone(&x).unwrap().complex;
        assert_eq!(decompose(&c).unwrap().summands, strings(&[(n, n + 2), (n + 1, n + 1)]));
    }
    assert_eq!(decompose(&sum(&alg, &[(0, 0), (0, 0)])).unwrap().summands, strings(&[(0, 0), (0, 0)]));
    let contractible = cone(&ChainMap::identity(&string(&alg, 1, 1))).unwrap().complex;
    let with_junk = Arc::new(ChainComplex::direct_sum(&[&contractible, &string(&alg, 0, 2)]));
    assert_eq!(decompose(&with_junk).unwrap().summands, strings(&[(0, 2)]));
    assert!(decompose(&contractible).unwrap().summands.is_empty());
}

#[test]
fn decomposition_recovers_conjugated_sums() {
    for p in [2, 3] {
        let alg = dual(p);
        let mut g = Generator::new(&alg, 17 + p as u64, 0, 3, 1);
        let cases: [&[(i64, i64)]; 5] = [&[(0, 2), (1, 1)], &[(0, 1), (1, 2)], &[(0, 3), (1, 2), (1, 3), (2, 2)], &[(0, 0), (0, 2), (2, 2), (1, 2)], &[(-1, 1), (0, 1), (-1, 0)]];
        for parts in cases {
            let c = sum(&alg, parts);
            for _ in 0..5 {
                let beta = g.base_change(&c);
                let conj = beta.target().clone();
                let dec = decompose(&conj).unwrap();
                assert_eq!(dec.summands, strings(parts));
                let expected: BTreeMap<(i64, i64), usize> = parts.iter().fold(BTreeMap::new(), |mut acc, &k| {
                    *acc.entry(k).or_insert(0) += 1;
                    acc
                });
                assert_eq!(interval_multiplicities(&conj), expected);
                // strict iso on minimal inputs
                assert!(dec.to_sum.compose(&dec.from_sum).unwrap().equals(&ChainMap::identity(&dec.realization)));
                assert!(dec.from_sum.compose(&dec.to_sum).unwrap().equals(&ChainMap::identity(&conj)));
            }
        }
    }
}

#[test]
fn decomposition_of_non_minimal_complexes_is_an_equivalence() {
    let alg = dual(3);
    let mut g = Generator::new(&alg, 5, 0, 3, 2);
    for _ in 0..20 {
        let c = Arc::new(g.complex());
        let dec = decompose(&c).unwrap();
        assert!(dec.to_sum.compose(&dec.from_sum).unwrap().equals(&ChainMap::identity(&dec.realization)));
        let id = ChainMap::identity(&c);
        assert!(dec.homotopy.witnesses(&id, &dec.from_sum.compose(&dec.to_sum).unwrap()));
        let minimal = crate::minimize::minimize(&c).unwrap().complex;
        let expected: Vec<StringComplex> = interval_multiplicities(&minimal)
            .into_iter()
            .flat_map(|((m, n), k)| std::iter::repeat_n(StringComplex { m, n }, k))
            .collect();
        assert_eq!(dec.summands, expected);
    }
}

#[test]
fn isomorphism_examples() {
    let alg = dual(2);
    let forward = sum(&alg, &[(0, 2), (1, 1)]);
    let reversed = sum(&alg, &[(0, 1), (1, 2)]);
    assert!(!is_isomorphic(&forward, &reversed).unwrap());
    assert!(is_isomorphic(&forward, &forward).unwrap());
    let contractible = cone(&ChainMap::identity(&string(&alg, 1, 1))).unwrap().complex;
    let padded = Arc::new(ChainComplex::direct_sum(&[&forward, &contractible]));
    assert!(is_isomorphic(&padded, &forward).unwrap());
    let minimal = crate::minimize::minimize(&padded).unwrap().complex;
    assert!(is_isomorphic(&padded, &minimal).unwrap());
    assert!(!is_isomorphic(&string(&alg, 0, 1), &sum(&alg, &[(1, 1), (0, 0)])).unwrap());
}

#[test]
fn homology_ranks_separate_the_two_orders() {
    let alg = dual(3);
    let forward = homology_x_ranks(&sum(&alg, &[(0, 2), (1, 1)])).unwrap();
    let reversed = homology_x_ranks(&sum(&alg, &[(0, 1), (1, 2)])).unwrap();
    assert_eq!(forward.get(&1), Some(&1));
    assert_eq!(reversed.get(&1), Some(&0));
}

#[test]
fn worked_example_holds_and_is_shift_consistent() {
    for p in [2, 3] {
        let reports: Vec<ExampleReport> = [0, 3].iter().map(|&n| run_example(p, n).unwrap()).collect();
        for r in &reports {
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.checks.len(), 6);
        }
        // details differ only by the shift
        let shifted: Vec<bool> = reports[0].checks.iter().zip(&reports[1].checks).map(|(a, b)| a.passed == b.passed).collect();
        assert!(shifted.iter().all(|&s| s));
    }
}
