//! Seeded verification suites. Each instance is generated from its own
//! stream and checked independently, so instances run in parallel and the
//! sorted report does not depend on scheduling.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::chain_map::ChainMap;
use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::homotopy::homotopic;
use crate::json::maps_bundle;
use crate::kx2::run_example;
use crate::level::{
    koszul_extend, koszul_level_witness, koszul_object, minimal_free_resolution, semisimple_filtration_witness, tensor_level_witness,
    transport_witness, verify_witness, KoszulElement, LevelWitness, ProjectiveDimension,
};
use crate::module::FinModule;
use crate::random::{Generator, RunConfig};
use crate::report::{timed, Outcome, Record, Report};
use crate::square::{
    composition_squares, homotopy_pushout, is_homotopy_cartesian, mayer_vietoris, paste_check, pushout_associativity, pushout_change_base,
    pushout_same_base,
};
use crate::tensor::anticommute_sign;
use crate::verdier::{build_pushout_product, verify_verdier};

pub const THREADS_VAR: &str = "TRILEVEL_THREADS";

/// Runs `f` on a pool capped by `TRILEVEL_THREADS` when it is set.
pub fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let cap = std::env::var(THREADS_VAR).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0);
    match cap.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Suite {
    Kx2,
    Verdier,
    TensorLevel,
    Koszul,
    Calculus,
    Model,
    Calibration,
    Transport,
    Anticommute,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Kx2,
        Suite::Verdier,
        Suite::TensorLevel,
        Suite::Koszul,
        Suite::Calculus,
        Suite::Model,
        Suite::Calibration,
        Suite::Transport,
        Suite::Anticommute,
    ];

    pub fn run(self, cfg: &RunConfig) -> Result<Vec<Record>> {
        match self {
            Suite::Kx2 => Ok(kx2_suite()),
            Suite::Verdier => verdier_suite(cfg),
            Suite::TensorLevel => tensor_level_suite(cfg),
            Suite::Koszul => koszul_suite(cfg),
            Suite::Calculus => calculus_suite(cfg),
            Suite::Model => model_suite(cfg),
            Suite::Calibration => calibration_suite(cfg),
            Suite::Transport => transport_suite(cfg),
            Suite::Anticommute => anticommute_suite(cfg),
        }
    }
}

fn per_instance(cfg: &RunConfig, check: impl Fn(u64) -> Vec<Record> + Sync + Send) -> Vec<Record> {
    (0..cfg.instances as u64).into_par_iter().flat_map_iter(check).collect()
}

fn tagged(name: &str, cfg: &RunConfig) -> String {
    format!("{name} {}", cfg.ring)
}

/// `A_n^n` and its Koszul objects under `η_0`, `η_1`, `η_0 + η_1`.
pub fn kx2_suite() -> Vec<Record> {
    let cases: Vec<(u32, i64)> = [2, 3].iter().flat_map(|&p| [0, 3].map(move |n| (p, n))).collect();
    cases
        .par_iter()
        .enumerate()
        .map(|(i, &(p, n))| {
            timed(&format!("kx2 F{p}"), i as u64, "central elements need not vanish on their Koszul objects", || {
                let r = run_example(p, n)?;
                let failed: Vec<String> = r.checks.iter().filter(|c| !c.passed).map(|c| format!("({}) {}", c.label, c.detail)).collect();
                let summary = if failed.is_empty() { format!("n = {n}: (a)-(f) hold") } else { format!("n = {n}: {}", failed.join("; ")) };
                Ok(Outcome::verdict(r.passed(), summary))
            })
        })
        .collect()
}

/// The 24 checks on random pairs of split monos, and the same checks
/// with `i` negated.
pub fn verdier_suite(cfg: &RunConfig) -> Result<Vec<Record>> {
    let alg = cfg.algebra()?;
    let (name, mutation) = (tagged("verdier", cfg), tagged("verdier-mutation", cfg));
    Ok(per_instance(cfg, |k| {
        let mut g = cfg.generator(&alg, k);
        let (f, f2) = (g.split_mono(), g.split_mono());
        let replay = || maps_bundle(&[("f", &f), ("f_prime", &f2)]);
        let diagram = build_pushout_product(&f, &f2);
        let anchor = "tensor products of cofibrations carry a strong Verdier structure";
        let first = timed(&name, k, anchor, || {
            let d = diagram.as_ref().map_err(|e| Error::NoSolution(e.to_string()))?;
            let r = verify_verdier(d);
            let failed: Vec<&str> = r.failures().map(|c| c.name).collect();
            let summary = if failed.is_empty() { format!("{} checks hold", r.checks.len()) } else { format!("failed: {}", failed.join("; ")) };
            Ok(Outcome::verdict(r.passed(), summary).with_instance(replay))
        });
        let second = timed(&mutation, k, "the checks see the sign of the inclusion", || {
            let d = diagram.as_ref().map_err(|e| Error::NoSolution(e.to_string()))?;
            if !d.negation_is_visible() {
                return Ok(Outcome::skipped("-i is homotopic to i here, so negation changes nothing"));
            }
            let r = verify_verdier(&d.with_negated_inclusion());
            let broken = r.failures().count();
            Ok(Outcome::verdict(broken > 0, format!("{broken} checks fail after negating i")).with_instance(replay))
        });
        vec![first, second]
    }))
}

pub const LAYER_PAIRS: [(usize, usize); 9] = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)];

/// Products of random witnesses with `m, n ≤ 3` layers.
pub fn tensor_level_suite(cfg: &RunConfig) -> Result<Vec<Record>> {
    let alg = cfg.algebra()?;
    let name = tagged("tensor-level", cfg);
    Ok(per_instance(cfg, |k| {
        let (m, n) = LAYER_PAIRS[k as usize % LAYER_PAIRS.len()];
        vec![timed(&name, k, "level of a tensor product is at most m + n - 1", || {
            let mut g = cfg.generator(&alg, k);
            let (x, x2) = (g.nonzero_complex(), g.nonzero_complex());
            let (a, b) = (g.level_witness(&x, m)?, g.level_witness(&x2, n)?);
            let p = tensor_level_witness(&a, &b)?;
            let bound = verify_witness(&p)?;
            let limit = m + n - 1;
            let passed = p.layer_count() <= limit && bound <= limit && (limit != 1 || bound == 1);
            Ok(Outcome::verdict(passed, format!("m = {m}, n = {n}: {} layers, bound {bound}", p.layer_count())))
        })]
    }))
}

/// Koszul witnesses from `Y` and from a witness for `Y`.
pub fn koszul_suite(cfg: &RunConfig) -> Result<Vec<Record>> {
    let alg = cfg.algebra()?;
    let name = tagged("koszul", cfg);
    let ring = Arc::new(ChainComplex::ring(&alg, 0));
    Ok(per_instance(cfg, |k| {
        let c = 1 + (k as usize % 2);
        let mut g = cfg.generator(&alg, k);
        let y = g.nonzero_complex();
        let rs: Vec<Vec<u32>> = (0..c).map(|_| g.radical_element()).collect();
        let elements: Vec<KoszulElement> = rs.iter().map(|r| KoszulElement::Ring(r.clone())).collect();
        let direct = timed(&name, 2 * k, "a Koszul object on c elements is built from X in c + 1 steps", || {
            let w = koszul_level_witness(&y, &rs)?;
            let bound = verify_witness(&w)?;
            let same = *w.target == *koszul_object(&y, &elements)?;
            Ok(Outcome::verdict(bound <= c + 1 && same, format!("c = {c}: bound {bound}, target is the iterated cone: {same}")))
        });
        let layers = 1 + (k as usize % 3);
        let from_witness = timed(&name, 2 * k + 1, "Koszul objects add at most c to the level", || {
            let wy = g.level_witness(&ring, layers)?;
            let base = verify_witness(&wy)?;
            let w = koszul_extend(&wy, &rs)?;
            let bound = verify_witness(&w)?;
            let same = *w.target == *koszul_object(&wy.target, &elements)?;
            Ok(Outcome::verdict(bound <= base + c && same, format!("c = {c}: bound {bound} from {base}")))
        });
        vec![direct, from_witness]
    }))
}

/// Homotopy pushouts, pasting, base change and associativity on random spans.
pub fn calculus_suite(cfg: &RunConfig) -> Result<Vec<Record>> {
    let alg = cfg.algebra()?;
    let name = |check: &str| tagged(&format!("calculus/{check}"), cfg);
    Ok(per_instance(cfg, |k| {
        let mut g = cfg.generator(&alg, k);
        let (f, h) = g.span();
        let replay = || maps_bundle(&[("f", &f), ("g", &h)]);
        let mut out = Vec::new();
        let pushout = homotopy_pushout(&f, &h);
        out.push(timed(&name("pushout"), k, "homotopy pushouts are homotopy cartesian", || {
            let p = pushout.as_ref().map_err(|e| Error::NoSolution(e.to_string()))?;
            let v = is_homotopy_cartesian(&p.square);
            let agrees = v.connecting.as_ref().is_some_and(|d| homotopic(d, &p.connecting).is_some());
            Ok(Outcome::verdict(v.cartesian && agrees, format!("cartesian: {}, connecting agrees: {agrees}", v.cartesian)).with_instance(replay))
        }));
        out.push(timed(&name("reflect"), k, "reflecting a square negates its connecting morphism", || {
            let p = pushout.as_ref().map_err(|e| Error::NoSolution(e.to_string()))?;
            let v = is_homotopy_cartesian(&p.square.reflect());
            let negated = v.connecting.as_ref().is_some_and(|d| homotopic(d, &p.connecting.neg()).is_some());
            Ok(Outcome::verdict(v.cartesian && negated, format!("connecting of the reflection is -d: {negated}")).with_instance(replay))
        }));
        let w = g.complex();
        let next = g.chain_map(h.target(), &w);
        out.push(timed(&name("paste"), k, "pasted homotopy cartesian squares are homotopy cartesian", || {
            let p = pushout.as_ref().map_err(|e| Error::NoSolution(e.to_string()))?;
            let second = homotopy_pushout(&p.square.f2, &next)?.square;
            let v = paste_check(&p.square, &second)?;
            Ok(Outcome::verdict(v.passed(), format!("outer cartesian: {}, connecting compatible: {} and {}", v.outer_verdict.cartesian, v.first_compatible, v.second_compatible)))
        }));
        let (x, y) = (g.complex(), g.complex());
        let (a, b) = (g.chain_map(f.target(), &x), g.chain_map(h.target(), &y));
        out.push(timed(&name("same-base"), k, "pushouts over the same base compare with cone(a) + cone(b)", || {
            let r = pushout_same_base(&a, &f, &h, &b)?;
            Ok(Outcome::verdict(r.certified, format!("cone identity certified: {}", r.certified)))
        }));
        let s = g.complex();
        let sigma = g.chain_map(&s, f.source());
        out.push(timed(&name("change-base"), k, "changing the base of a pushout has cone the suspended cone of the base map", || {
            let r = pushout_change_base(&sigma, &f, &h)?;
            Ok(Outcome::verdict(r.certified, format!("cone identity certified: {}", r.certified)))
        }));
        let (t, e_target) = (g.complex(), g.complex());
        let (c, e) = (g.chain_map(&t, h.target()), g.chain_map(&t, &e_target));
        out.push(timed(&name("associativity"), k, "iterated homotopy pushouts are associative", || {
            let r = pushout_associativity(&f, &h, &c, &e)?;
            Ok(Outcome::verdict(r.verified, format!("bracketings strictly isomorphic: {}", r.verified)))
        }));
        out
    }))
}

/// Squares of the cofibration model on random composable split monos.
pub fn model_suite(cfg: &RunConfig) -> Result<Vec<Record>> {
    let alg = cfg.algebra()?;
    let name = |check: &str| tagged(&format!("model/{check}"), cfg);
    Ok(per_instance(cfg, |k| {
        let mut g = cfg.generator(&alg, k);
        let (a, b) = g.composable_split_monos();
        let z = g.complex();
        let along = g.chain_map(a.source(), &z);
        let replay = || maps_bundle(&[("a", &a), ("b", &b), ("g", &along)]);
        let squares = composition_squares(&a, &b);
        vec![
            timed(&name("mayer-vietoris"), k, "strict pushouts along split monos are homotopy cartesian", || {
                let v = is_homotopy_cartesian(&mayer_vietoris(&a, &along)?);
                Ok(Outcome::verdict(v.cartesian, format!("cartesian: {}", v.cartesian)).with_instance(replay))
            }),
            timed(&name("quotients"), k, "quotients of composable cofibrations form a homotopy cartesian square", || {
                let s = squares.as_ref().map_err(|e| Error::NoSolution(e.to_string()))?;
                let v = is_homotopy_cartesian(&s.quotients);
                Ok(Outcome::verdict(v.cartesian, format!("cartesian: {}", v.cartesian)).with_instance(replay))
            }),
            timed(&name("connecting"), k, "connecting maps of composable cofibrations form a homotopy cartesian square", || {
                let s = squares.as_ref().map_err(|e| Error::NoSolution(e.to_string()))?;
                let v = is_homotopy_cartesian(&s.connecting);
                Ok(Outcome::verdict(v.cartesian, format!("cartesian: {}", v.cartesian)).with_instance(replay))
            }),
        ]
    }))
}

/// Whether `M ≅ R^g` for `g = dim M/𝔪M`.
fn is_free(m: &FinModule) -> bool {
    let tops = m.dim() - m.radical_of(&crate::matrix::KMatrix::identity(m.algebra().field(), m.dim())).cols();
    m.dim() == tops * m.algebra().dim()
}

/// Loewy lengths and projective dimensions of random modules, plus the
/// residue field of the dual numbers.
pub fn calibration_suite(cfg: &RunConfig) -> Result<Vec<Record>> {
    let alg = cfg.algebra()?;
    let name = |check: &str| tagged(&format!("calibration/{check}"), cfg);
    let mut out = per_instance(cfg, |k| {
        let mut g = cfg.generator(&alg, k);
        let m = g.module();
        let module = || m.as_ref().map_err(|e| Error::NoSolution(e.to_string()));
        vec![
            timed(&name("loewy"), k, "the k-level of a module is its Loewy length", || {
                let m = module()?;
                let w = semisimple_filtration_witness(m)?;
                let bound = verify_witness(&w)?;
                let loewy = m.loewy_length();
                Ok(Outcome::verdict(bound == loewy, format!("{bound} layers, Loewy length {loewy}")))
            }),
            timed(&name("resolution"), k, "projective dimension zero exactly for free modules", || {
                let m = module()?;
                let r = minimal_free_resolution(m, 4)?;
                let free = is_free(m);
                let pd0 = r.projective_dimension == ProjectiveDimension::Finite(0);
                Ok(Outcome::verdict(free == pd0, format!("free: {free}, projective dimension {:?}", r.projective_dimension)))
            }),
        ]
    });
    out.push(timed("calibration/residue-field F2[x]/(x2)", 0, "the residue field of the dual numbers has a periodic resolution", || {
        let dual = crate::algebra::AlgebraPresentation::parse("F2[x]/(x2)")?;
        let cap = 5;
        let r = minimal_free_resolution(&FinModule::residue_field(&dual), cap)?;
        let passed = r.projective_dimension == ProjectiveDimension::Unknown(cap) && r.ranks == vec![1; cap + 1];
        Ok(Outcome::verdict(passed, format!("{:?}, ranks {:?}", r.projective_dimension, r.ranks)))
    }));
    Ok(out)
}

/// `w ⊗ Kos(x)` for random witnesses `w`.
pub fn transport_suite(cfg: &RunConfig) -> Result<Vec<Record>> {
    let alg = cfg.algebra()?;
    let name = tagged("transport", cfg);
    let ring = Arc::new(ChainComplex::ring(&alg, 0));
    let kos = crate::cone::cone(&ChainMap::multiplication(&ring, &alg.variable(0)))?.complex;
    Ok(per_instance(cfg, |k| {
        vec![timed(&name, k, "tensoring with a fixed object preserves the number of layers", || {
            let mut g = cfg.generator(&alg, k);
            let x = g.nonzero_complex();
            let w: LevelWitness = g.level_witness(&x, 1 + k as usize % 3)?;
            let before = verify_witness(&w)?;
            let t = transport_witness(&w, &kos)?;
            let after = verify_witness(&t)?;
            let passed = t.layer_count() == w.layer_count() && after == before;
            Ok(Outcome::verdict(passed, format!("{} layers before, {} after; bound {before} -> {after}", w.layer_count(), t.layer_count())))
        })]
    }))
}

/// The suspension interchange square on random pairs.
pub fn anticommute_suite(cfg: &RunConfig) -> Result<Vec<Record>> {
    let alg = cfg.algebra()?;
    let name = tagged("anticommute", cfg);
    let characteristic_two = alg.field().p() == 2;
    Ok(per_instance(cfg, |k| {
        vec![timed(&name, k, "the two suspension interchanges anticommute", || {
            let mut g = cfg.generator(&alg, k);
            let (x, y) = (g.nonzero_complex(), g.nonzero_complex());
            let sign = anticommute_sign(&x, &y)?;
            if characteristic_two {
                return Ok(Outcome::skipped(format!("sign {sign}: -1 = 1 in characteristic 2")));
            }
            Ok(Outcome::verdict(sign == -1, format!("sign {sign}")))
        })]
    }))
}

/// One suite at one configuration.
#[derive(Clone, Debug, Serialize)]
pub struct Run {
    pub suite: Suite,
    pub config: RunConfig,
}

fn config(seed: u64, ring: &str, instances: usize, max_rank: usize, max_amplitude: usize) -> RunConfig {
    RunConfig { seed, ring: ring.into(), instances, max_rank, max_amplitude, mode: None }
}

/// The acceptance matrix: which suites run at which sizes for each
/// numbered criterion.
pub fn acceptance_matrix(seed: u64) -> Vec<(usize, Vec<Run>)> {
    let run = |suite, cfg| Run { suite, config: cfg };
    vec![
        (1, vec![run(Suite::Kx2, config(seed, "F2[x]/(x2)", 4, 1, 0))]),
        (
            2,
            vec![
                run(Suite::Verdier, config(seed, "F2[x]/(x2)", 50, 4, 3)),
                run(Suite::Verdier, config(seed, "F3[x,y]/(x2,y2)", 50, 4, 3)),
            ],
        ),
        (
            3,
            vec![
                run(Suite::TensorLevel, config(seed, "F3[x]/(x2)", 27, 2, 1)),
                run(Suite::TensorLevel, config(seed, "F2[x,y]/(x2,y2)", 27, 1, 1)),
            ],
        ),
        (4, vec![run(Suite::Koszul, config(seed, "F2[x,y]/(x2,y2)", 20, 2, 1))]),
        (
            5,
            vec![
                run(Suite::Calculus, config(seed, "F3[x]/(x2)", 50, 3, 2)),
                run(Suite::Calculus, config(seed, "F2[x,y]/(x2,y2)", 50, 3, 2)),
            ],
        ),
        (
            6,
            vec![
                run(Suite::Model, config(seed, "F2[x]/(x2)", 50, 3, 2)),
                run(Suite::Model, config(seed, "F3[x,y]/(x2,y2)", 50, 3, 2)),
            ],
        ),
        (7, vec![run(Suite::Calibration, config(seed, "F2[x,y]/(x2,y2)", 50, 2, 1))]),
        (8, vec![run(Suite::Transport, config(seed, "F3[x]/(x2)", 25, 2, 1))]),
        (9, vec![run(Suite::Anticommute, config(seed, "F3[x,y]/(x2,y2)", 25, 3, 2))]),
    ]
}

/// Every suite of the acceptance matrix, in one sorted report.
pub fn selftest(seed: u64) -> Result<Report> {
    let mut records = Vec::new();
    for (_, runs) in acceptance_matrix(seed) {
        for r in runs {
            records.extend(r.suite.run(&r.config)?);
        }
    }
    Ok(Report::new(seed, records))
}

/// The generator used by a suite for instance `index`, for replaying.
pub fn instance_generator(cfg: &RunConfig, index: u64) -> Result<Generator> {
    Ok(cfg.generator(&cfg.algebra()?, index))
}
