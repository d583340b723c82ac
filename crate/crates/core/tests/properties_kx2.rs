//! String complexes over the dual numbers, and reproducibility of seeded
//! reports.

use std::sync::Arc;

use proptest::prelude::*;
use trilevel::algebra::{Algebra, AlgebraPresentation};
use trilevel::chain_map::ChainMap;
use trilevel::complex::ChainComplex;
use trilevel::cone::cone;
use trilevel::homotopy::is_nullhomotopic;
use trilevel::kx2::{decompose, eta, is_isomorphic, StringComplex};
use trilevel::random::{Generator, RunConfig};
use trilevel::report::Report;
use trilevel::suites::Suite;

fn dual(p: u32) -> Algebra {
    AlgebraPresentation::parse(&format!("F{p}[x]/(x2)")).unwrap()
}

fn strings() -> impl Strategy<Value = Vec<StringComplex>> {
    prop::collection::vec((-2i64..3, 0i64..3), 0..4).prop_map(|v| {
        let mut s: Vec<StringComplex> = v.into_iter().map(|(m, len)| StringComplex::new(m, m + len).unwrap()).collect();
        s.sort();
        s
    })
}

fn realize(alg: &Algebra, parts: &[StringComplex]) -> Arc<ChainComplex> {
    let cs: Vec<ChainComplex> = parts.iter().map(|s| s.realize(alg).unwrap()).collect();
    if cs.is_empty() {
        return Arc::new(ChainComplex::zero(alg));
    }
    Arc::new(ChainComplex::direct_sum(&cs.iter().collect::<Vec<_>>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn decomposing_a_realization_recovers_its_summands(parts in strings(), p in prop::sample::select(vec![2u32, 3]), seed in any::<u64>()) {
        let alg = dual(p);
        let c = realize(&alg, &parts);
        let conjugated = Generator::new(&alg, seed, 0, 3, 1).base_change(&c).target().clone();
        let d = decompose(&conjugated).unwrap();
        prop_assert_eq!(&d.summands, &parts);
        prop_assert_eq!(&*d.realization, &*c);
        prop_assert!(d.to_sum.compose(&d.from_sum).unwrap().equals(&ChainMap::identity(&d.realization)));
        prop_assert!(d.from_sum.compose(&d.to_sum).unwrap().equals(&ChainMap::identity(&conjugated)));
    }

    #[test]
    fn eta_is_essential_exactly_on_summands_of_its_length(parts in strings(), r in 0i64..3) {
        let alg = dual(3);
        let c = realize(&alg, &parts);
        let e = eta(r, &c).unwrap();
        let essential = is_nullhomotopic(&e.map).is_none();
        prop_assert_eq!(essential, parts.iter().any(|s| s.length() == r));
    }

    #[test]
    fn isomorphism_is_an_equivalence_invariant_under_contractible_summands(a in strings(), b in strings(), p in prop::sample::select(vec![2u32, 3]), m in -1i64..2, len in 0i64..2) {
        let alg = dual(p);
        let (x, y) = (realize(&alg, &a), realize(&alg, &b));
        prop_assert!(is_isomorphic(&x, &x).unwrap());
        prop_assert_eq!(is_isomorphic(&x, &y).unwrap(), is_isomorphic(&y, &x).unwrap());
        prop_assert_eq!(is_isomorphic(&x, &y).unwrap(), a == b);
        let s = Arc::new(StringComplex::new(m, m + len).unwrap().realize(&alg).unwrap());
        let junk = cone(&ChainMap::identity(&s)).unwrap().complex;
        let padded = Arc::new(ChainComplex::direct_sum(&[&x, &junk]));
        prop_assert!(is_isomorphic(&x, &padded).unwrap());
    }
}

fn fingerprints(r: &Report) -> Vec<(String, u64, trilevel::report::Status, String, String)> {
    r.records.iter().map(|r| r.fingerprint()).collect()
}

#[test]
fn seeded_reports_are_reproducible() {
    for suite in [Suite::Verdier, Suite::TensorLevel, Suite::Calibration] {
        let cfg = RunConfig { seed: 11, ring: "F3[x]/(x2)".into(), instances: 5, max_rank: 2, max_amplitude: 1, mode: None };
        let a = Report::new(11, suite.run(&cfg).unwrap());
        let b = Report::new(11, suite.run(&cfg).unwrap());
        assert_eq!(fingerprints(&a), fingerprints(&b));
        let other = RunConfig { seed: 12, ..cfg };
        let c = Report::new(12, suite.run(&other).unwrap());
        assert_eq!(c.records.len(), a.records.len());
    }
}
