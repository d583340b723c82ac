//! Subcommand implementations. Each returns its rendered output and whether
//! every check passed.

use std::path::Path;
use std::sync::Arc;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use trilevel::complex::ChainComplex;
use trilevel::json::{certificate, element_from_json, map_to_json, Bundle, LoadedBundle};
use trilevel::kx2::run_example;
use trilevel::level::{
    koszul_level_witness, minimal_free_resolution, semisimple_filtration_witness, tensor_level_witness, verify_witness, LevelWitness,
    ProjectiveDimension,
};
use trilevel::module::FinModule;
use trilevel::random::{Generator, RunConfig};
use trilevel::report::{Report, Status};
use trilevel::square::{is_homotopy_cartesian, Square};
use trilevel::suites::{selftest, with_thread_cap, Suite, LAYER_PAIRS};
use trilevel::triangle::{is_exact_triangle, Triangle};

use crate::inputs::{self, KoszulInput, ModuleInput, TensorInput};
use crate::{Cli, Command, Common, LevelMode};

struct Output {
    text: String,
    passed: bool,
}

pub fn run(cli: &Cli) -> Result<bool> {
    let c = &cli.common;
    let cfg = RunConfig {
        seed: c.seed,
        ring: c.ring.clone(),
        instances: c.instances,
        max_rank: c.max_rank,
        max_amplitude: c.max_amplitude,
        mode: None,
    };
    let out = match &cli.command {
        Command::CheckSquare { input } => check_square(input, c.json)?,
        Command::CheckTriangle { input } => check_triangle(input, c.json)?,
        Command::VerifyVerdier => suite(Suite::Verdier, &cfg, c.json)?,
        Command::Koszul => suite(Suite::Koszul, &cfg, c.json)?,
        Command::LevelWitness { mode, input } => level_witness(*mode, input.as_deref(), &cfg, c)?,
        Command::ExampleKx2 { p, n } => example(*p, *n, c.json)?,
        Command::Selftest => report(&with_thread_cap(|| selftest(c.seed))?, c.json)?,
    };
    match &c.out {
        Some(path) => std::fs::write(path, &out.text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", out.text),
    }
    Ok(out.passed)
}

fn pretty(v: &impl Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn report(r: &Report, json: bool) -> Result<Output> {
    let text = if json {
        pretty(&r.records)?
    } else {
        let mut s = String::new();
        for rec in &r.records {
            let status = match rec.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            s += &format!("{status} {} #{}: {}\n", rec.name, rec.index, rec.summary);
        }
        let n = r.counts();
        s += &format!("{} passed, {} failed, {} skipped\n", n.pass, n.fail, n.skipped);
        s
    };
    Ok(Output { text, passed: r.passed() })
}

fn suite(s: Suite, cfg: &RunConfig, json: bool) -> Result<Output> {
    let records = with_thread_cap(|| s.run(cfg))?;
    report(&Report::new(cfg.seed, records), json)
}

fn verdict(passed: bool, fields: Value, json: bool) -> Result<Output> {
    let mut v = json!({ "status": if passed { "pass" } else { "fail" } });
    if let (Value::Object(m), Value::Object(extra)) = (&mut v, fields) {
        m.extend(extra);
    }
    let text = if json {
        pretty(&v)?
    } else {
        let mut s = String::new();
        for (k, val) in v.as_object().into_iter().flatten().filter(|(_, val)| !val.is_object()) {
            s += &format!("{k}: {val}\n");
        }
        s
    };
    Ok(Output { text, passed })
}

fn load(path: &Path) -> Result<LoadedBundle> {
    let bundle: Bundle = inputs::read(path)?;
    bundle.load().with_context(|| format!("loading {}", path.display()))
}

fn check_square(path: &Path, json: bool) -> Result<Output> {
    let b = load(path)?;
    let (f, g, g2, f2) = (b.map("f")?, b.map("g")?, b.map("g2")?, b.map("f2")?);
    let square = match b.homotopy("K")? {
        Some(k) => Square::with_homotopy(f, g, g2, f2, k),
        None => Square::strict(f, g, g2, f2),
    };
    let square = match square {
        Ok(s) => s,
        Err(e) => return verdict(false, json!({ "cartesian": false, "reason": e.to_string() }), json),
    };
    let v = is_homotopy_cartesian(&square);
    let connecting = v.connecting.as_ref().map(map_to_json);
    verdict(v.cartesian, json!({ "cartesian": v.cartesian, "connecting_morphism": connecting }), json)
}

fn check_triangle(path: &Path, json: bool) -> Result<Output> {
    let b = load(path)?;
    let mut t = Triangle::new(b.map("f")?, b.map("g")?, b.map("h")?);
    t.composite_homotopy = b.homotopy("composite")?;
    match is_exact_triangle(&t) {
        Ok(v) => verdict(v.exact, serde_json::to_value(v.summary())?, json),
        Err(e) => verdict(false, json!({ "exact": false, "reason": e.to_string() }), json),
    }
}

fn example(p: u32, n: i64, json: bool) -> Result<Output> {
    let r = run_example(p, n)?;
    let text = if json {
        pretty(&r)?
    } else {
        let mut s = format!("k[x]/(x^2) over F{p}, n = {n}\n");
        for c in &r.checks {
            s += &format!("({}) {}: {}\n", c.label, if c.passed { "holds" } else { "FAILS" }, c.detail);
        }
        for note in &r.notes {
            s += &format!("note: {note}\n");
        }
        s
    };
    Ok(Output { text, passed: r.passed() })
}

#[derive(Serialize)]
struct ResolutionJson {
    ranks: Vec<usize>,
    projective_dimension: ProjectiveDimension,
}

/// A certificate, or for resolutions the ranks and projective dimension.
enum Built {
    Witness(LevelWitness),
    Resolution(ResolutionJson),
}

fn build_from_input(mode: LevelMode, path: &Path, cfg: &RunConfig) -> Result<Built> {
    Ok(match mode {
        LevelMode::Tensor => {
            let i: TensorInput = inputs::read(path)?;
            let alg = i.algebra.build()?;
            let (x, y) = (Arc::new(i.left.build(Some(&alg))?), Arc::new(i.right.build(Some(&alg))?));
            let mut g = Generator::new(&alg, cfg.seed, 0, cfg.max_rank, cfg.max_amplitude);
            let (a, b) = (g.level_witness(&x, i.left_layers)?, g.level_witness(&y, i.right_layers)?);
            Built::Witness(tensor_level_witness(&a, &b)?)
        }
        LevelMode::Koszul => {
            let i: KoszulInput = inputs::read(path)?;
            let alg = i.algebra.build()?;
            let x = Arc::new(i.object.build(Some(&alg))?);
            let rs = i.elements.iter().map(|e| element_from_json(&alg, e)).collect::<trilevel::Result<Vec<_>>>()?;
            Built::Witness(koszul_level_witness(&x, &rs)?)
        }
        LevelMode::Loewy | LevelMode::Resolution => {
            let i: ModuleInput = inputs::read(path)?;
            let alg = i.algebra.build()?;
            let m = FinModule::from_json(&alg, &i.module)?;
            module_mode(mode, &m, i.cap)?
        }
    })
}

fn module_mode(mode: LevelMode, m: &FinModule, cap: usize) -> Result<Built> {
    Ok(if mode == LevelMode::Loewy {
        Built::Witness(semisimple_filtration_witness(m)?)
    } else {
        let r = minimal_free_resolution(m, cap)?;
        Built::Resolution(ResolutionJson { ranks: r.ranks, projective_dimension: r.projective_dimension })
    })
}

fn build_random(mode: LevelMode, cfg: &RunConfig, k: u64) -> Result<Built> {
    let alg = cfg.algebra()?;
    let mut g = cfg.generator(&alg, k);
    Ok(match mode {
        LevelMode::Tensor => {
            let (m, n) = LAYER_PAIRS[k as usize % LAYER_PAIRS.len()];
            let (x, y) = (g.nonzero_complex(), g.nonzero_complex());
            let (a, b) = (g.level_witness(&x, m)?, g.level_witness(&y, n)?);
            Built::Witness(tensor_level_witness(&a, &b)?)
        }
        LevelMode::Koszul => {
            let y: Arc<ChainComplex> = g.nonzero_complex();
            let rs: Vec<Vec<u32>> = (0..1 + k % 2).map(|_| g.radical_element()).collect();
            Built::Witness(koszul_level_witness(&y, &rs)?)
        }
        LevelMode::Loewy | LevelMode::Resolution => module_mode(mode, &g.module()?, inputs::default_cap())?,
    })
}

fn level_witness(mode: LevelMode, input: Option<&Path>, cfg: &RunConfig, c: &Common) -> Result<Output> {
    let built = match input {
        Some(path) => vec![build_from_input(mode, path, cfg)?],
        None => (0..cfg.instances as u64).map(|k| build_random(mode, cfg, k)).collect::<Result<Vec<_>>>()?,
    };
    let mut values = Vec::new();
    let mut lines = String::new();
    let mut passed = true;
    for (k, b) in built.iter().enumerate() {
        match b {
            Built::Witness(w) => {
                let verified = verify_witness(w).is_ok();
                passed &= verified;
                lines += &format!("instance {k}: {} layers, bound {}, verified: {verified}\n", w.layer_count(), w.bound());
                values.push(serde_json::to_value(certificate(w, verified))?);
            }
            Built::Resolution(r) => {
                lines += &format!("instance {k}: ranks {:?}, projective dimension {:?}\n", r.ranks, r.projective_dimension);
                values.push(serde_json::to_value(r)?);
            }
        }
    }
    let text = if c.json {
        if input.is_some() {
            pretty(&values[0])?
        } else {
            pretty(&values)?
        }
    } else {
        lines
    };
    Ok(Output { text, passed })
}
