//! JSON forms of algebras, ring elements, complexes, maps and certificates.
//!
//! Matrices over `k` are row-major arrays of integers. Matrices over `R` have
//! entries `[[exponents, coefficient], …]`; they are accepted wherever both
//! ends are free. All numbers are exact integers.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraJson, AlgebraPresentation, Monomial};
use crate::chain_map::{ChainMap, Homotopy};
use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::kx2::StringComplex;
use crate::level::LevelWitness;
use crate::matrix::KMatrix;
use crate::module::{FinModule, ModuleJson};
use crate::rmatrix::RMatrix;
use crate::triangle::Connecting;

/// `"F2[x]/(x2)"` or `{"p": .., "vars": .., "relations": ..}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraSpec {
    Presentation(String),
    Explicit(AlgebraJson),
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<Algebra> {
        match self {
            AlgebraSpec::Presentation(s) => AlgebraPresentation::parse(s),
            AlgebraSpec::Explicit(j) => j.build(),
        }
    }

    pub fn of(alg: &Algebra) -> Self {
        AlgebraSpec::Presentation(alg.to_string())
    }
}

/// `[[exponents, coefficient], …]`; monomials outside the standard basis
/// vanish in `R`.
pub type ElementJson = Vec<(Monomial, u32)>;

pub fn element_from_json(alg: &Algebra, e: &ElementJson) -> Result<Vec<u32>> {
    let f = alg.field();
    let mut out = alg.zero();
    for (mono, c) in e {
        if mono.len() != alg.num_vars() {
            return Err(Error::Parse(format!("exponent vector {mono:?} needs {} entries", alg.num_vars())));
        }
        if let Some(i) = alg.monomial_index(mono) {
            out[i] = f.add(out[i], c % f.p());
        }
    }
    Ok(out)
}

pub fn element_to_json(alg: &Algebra, r: &[u32]) -> ElementJson {
    alg.standard_basis().iter().zip(r).filter(|(_, &c)| c != 0).map(|(m, &c)| (m.clone(), c)).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Scalar(u32),
    Element(ElementJson),
}

pub type MatrixJson = Vec<Vec<EntryJson>>;

fn shape(m: &MatrixJson, rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.is_empty() && (rows == 0 || cols == 0) {
        return Ok(());
    }
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch(format!("{what}: expected {rows}x{cols}")));
    }
    Ok(())
}

/// A k-matrix `target.dim × source.dim`, from either entry kind.
fn matrix_from_json(alg: &Algebra, m: &MatrixJson, source: &FinModule, target: &FinModule, what: &str) -> Result<KMatrix> {
    let f = alg.field();
    let is_element = m.iter().flatten().any(|e| matches!(e, EntryJson::Element(_)));
    let is_scalar = m.iter().flatten().any(|e| matches!(e, EntryJson::Scalar(_)));
    if is_element && is_scalar {
        return Err(Error::Parse(format!("{what}: mixes ring elements and scalars")));
    }
    if is_element {
        let (Some(cols), Some(rows)) = (source.free_rank(), target.free_rank()) else {
            return Err(Error::Parse(format!("{what}: ring-element entries need free terms")));
        };
        shape(m, rows, cols, what)?;
        let mut r = RMatrix::zeros(alg, rows, cols);
        for (i, row) in m.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if let EntryJson::Element(e) = e {
                    r.entry_mut(i, j).copy_from_slice(&element_from_json(alg, e)?);
                }
            }
        }
        return Ok(r.to_kmatrix());
    }
    shape(m, target.dim(), source.dim(), what)?;
    Ok(KMatrix::from_fn(f, target.dim(), source.dim(), |i, j| match &m[i][j] {
        EntryJson::Scalar(c) => c % f.p(),
        EntryJson::Element(_) => 0,
    }))
}

fn matrix_to_json(alg: &Algebra, k: &KMatrix, source: &FinModule, target: &FinModule) -> MatrixJson {
    if source.free_rank().is_some() && target.free_rank().is_some() {
        let r = RMatrix::from_kmatrix(alg, k);
        (0..r.rows()).map(|i| (0..r.cols()).map(|j| EntryJson::Element(element_to_json(alg, r.entry(i, j)))).collect()).collect()
    } else {
        k.to_rows().into_iter().map(|row| row.into_iter().map(EntryJson::Scalar).collect()).collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TermJson {
    Free { free: usize },
    Module(ModuleJson),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexJson {
    /// `A_m^n` over a one-variable algebra.
    String {
        string: (i64, i64),
        #[serde(default, skip_serializing_if = "Option::is_none")]
        algebra: Option<AlgebraSpec>,
    },
    Full {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        algebra: Option<AlgebraSpec>,
        terms: BTreeMap<String, TermJson>,
        #[serde(default)]
        differentials: BTreeMap<String, MatrixJson>,
    },
}

fn degree_key(s: &str) -> Result<i64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("`{s}` is not a degree")))
}

/// The algebra a complex declares, checked against the ambient one.
fn resolve(own: &Option<AlgebraSpec>, ambient: Option<&Algebra>) -> Result<Algebra> {
    match (own, ambient) {
        (Some(a), Some(b)) => {
            let a = a.build()?;
            if *a != **b {
                return Err(Error::AlgebraMismatch);
            }
            Ok(b.clone())
        }
        (Some(a), None) => a.build(),
        (None, Some(b)) => Ok(b.clone()),
        (None, None) => Err(Error::Parse("complex needs an algebra".into())),
    }
}

impl ComplexJson {
    pub fn build(&self, ambient: Option<&Algebra>) -> Result<ChainComplex> {
        match self {
            ComplexJson::String { string: (m, n), algebra } => {
                let alg = resolve(algebra, ambient)?;
                if alg.num_vars() != 1 {
                    return Err(Error::WrongAlgebra("string complexes need one variable".into()));
                }
                let x = RMatrix::scalar(&alg, 1, &alg.variable(0));
                let _ = StringComplex::new(*m, *n)?;
                let ranks = (*m..=*n).map(|d| (d, 1)).collect();
                let diffs = (*m + 1..=*n).map(|d| (d, x.clone())).collect();
                ChainComplex::from_free(&alg, &ranks, &diffs)
            }
            ComplexJson::Full { algebra, terms, differentials } => {
                let alg = resolve(algebra, ambient)?;
                let mut modules = BTreeMap::new();
                for (k, t) in terms {
                    let m = match t {
                        TermJson::Free { free } => FinModule::free(&alg, *free),
                        TermJson::Module(j) => FinModule::from_json(&alg, j)?,
                    };
                    modules.insert(degree_key(k)?, m);
                }
                let zero = FinModule::zero(&alg);
                let mut diffs = BTreeMap::new();
                for (k, m) in differentials {
                    let n = degree_key(k)?;
                    let (s, t) = (modules.get(&n).unwrap_or(&zero), modules.get(&(n - 1)).unwrap_or(&zero));
                    diffs.insert(n, matrix_from_json(&alg, m, s, t, &format!("differential {n}"))?);
                }
                ChainComplex::new(&alg, modules, diffs)
            }
        }
    }

    pub fn of(c: &ChainComplex, with_algebra: bool) -> Self {
        let alg = c.algebra();
        let terms = c
            .terms()
            .iter()
            .map(|(n, m)| (n.to_string(), m.free_rank().map_or_else(|| TermJson::Module(m.to_json()), |free| TermJson::Free { free })))
            .collect();
        let differentials = c
            .diffs()
            .iter()
            .filter(|(_, d)| !d.is_zero())
            .map(|(&n, d)| (n.to_string(), matrix_to_json(alg, d, c.term(n), c.term(n - 1))))
            .collect();
        ComplexJson::Full { algebra: with_algebra.then(|| AlgebraSpec::of(alg)), terms, differentials }
    }
}

/// Components keyed by source degree.
pub type ComponentsJson = BTreeMap<String, MatrixJson>;

pub fn components_to_json(alg: &Algebra, comps: &BTreeMap<i64, KMatrix>, source: &ChainComplex, target: &ChainComplex, degree: i64) -> ComponentsJson {
    comps
        .iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(&n, m)| (n.to_string(), matrix_to_json(alg, m, source.term(n), target.term(n + degree))))
        .collect()
}

fn components_from_json(alg: &Algebra, comps: &ComponentsJson, source: &ChainComplex, target: &ChainComplex, degree: i64) -> Result<BTreeMap<i64, KMatrix>> {
    let mut out = BTreeMap::new();
    for (k, m) in comps {
        let n = degree_key(k)?;
        out.insert(n, matrix_from_json(alg, m, source.term(n), target.term(n + degree), &format!("component {n}"))?);
    }
    Ok(out)
}

pub fn map_to_json(f: &ChainMap) -> ComponentsJson {
    components_to_json(f.source().algebra(), f.comps(), f.source(), f.target(), f.degree())
}

pub fn homotopy_to_json(h: &Homotopy) -> ComponentsJson {
    components_to_json(h.source().algebra(), h.comps(), h.source(), h.target(), 1)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapJson {
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub degree: i64,
    #[serde(default)]
    pub components: ComponentsJson,
}

/// Named objects, maps and homotopies over one algebra.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Bundle {
    pub algebra: AlgebraSpec,
    #[serde(default)]
    pub objects: BTreeMap<String, ComplexJson>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapJson>,
    #[serde(default)]
    pub homotopies: BTreeMap<String, MapJson>,
}

/// A bundle with every object built once, so maps share their ends.
pub struct LoadedBundle {
    pub algebra: Algebra,
    pub objects: BTreeMap<String, Arc<ChainComplex>>,
    raw: Bundle,
}

impl Bundle {
    pub fn load(self) -> Result<LoadedBundle> {
        let algebra = self.algebra.build()?;
        let mut objects = BTreeMap::new();
        for (name, c) in &self.objects {
            let built = c.build(Some(&algebra)).map_err(|e| Error::Parse(format!("object `{name}`: {e}")))?;
            objects.insert(name.clone(), Arc::new(built));
        }
        Ok(LoadedBundle { algebra, objects, raw: self })
    }
}

impl LoadedBundle {
    fn object(&self, name: &str, context: &str) -> Result<Arc<ChainComplex>> {
        self.objects.get(name).cloned().ok_or_else(|| Error::Parse(format!("{context}: unknown object `{name}`")))
    }

    pub fn map(&self, name: &str) -> Result<ChainMap> {
        let m = self.raw.maps.get(name).ok_or_else(|| Error::Parse(format!("missing map `{name}`")))?;
        let context = format!("map `{name}`");
        let (s, t) = (self.object(&m.source, &context)?, self.object(&m.target, &context)?);
        let comps = components_from_json(&self.algebra, &m.components, &s, &t, m.degree).map_err(|e| Error::Parse(format!("{context}: {e}")))?;
        ChainMap::new(s, t, m.degree, comps).map_err(|e| Error::Parse(format!("{context}: {e}")))
    }

    pub fn homotopy(&self, name: &str) -> Result<Option<Homotopy>> {
        let Some(m) = self.raw.homotopies.get(name) else { return Ok(None) };
        let context = format!("homotopy `{name}`");
        let (s, t) = (self.object(&m.source, &context)?, self.object(&m.target, &context)?);
        let comps = components_from_json(&self.algebra, &m.components, &s, &t, 1).map_err(|e| Error::Parse(format!("{context}: {e}")))?;
        Homotopy::new(s, t, comps).map(Some).map_err(|e| Error::Parse(format!("{context}: {e}")))
    }
}

/// A bundle holding the given maps and their ends, for replaying a failure.
pub fn maps_bundle(maps: &[(&str, &ChainMap)]) -> serde_json::Value {
    let Some((_, first)) = maps.first() else { return serde_json::Value::Null };
    let mut objects = BTreeMap::new();
    let mut named = BTreeMap::new();
    for (name, f) in maps {
        let (s, t) = (format!("{name}.source"), format!("{name}.target"));
        objects.insert(s.clone(), ComplexJson::of(f.source(), false));
        objects.insert(t.clone(), ComplexJson::of(f.target(), false));
        named.insert(name.to_string(), MapJson { source: s, target: t, degree: f.degree(), components: map_to_json(f) });
    }
    let bundle = Bundle { algebra: AlgebraSpec::of(first.source().algebra()), objects, maps: named, homotopies: BTreeMap::new() };
    serde_json::to_value(bundle).unwrap_or(serde_json::Value::Null)
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum ConnectingJson {
    Map(ComponentsJson),
    Roof { back: ComponentsJson, forth: ComponentsJson, through: ComplexJson },
}

#[derive(Clone, Debug, Serialize)]
pub struct TriangleJson {
    /// `Y_i`
    pub stage: ComplexJson,
    pub f: ComponentsJson,
    pub g: ComponentsJson,
    pub h: ConnectingJson,
}

#[derive(Clone, Debug, Serialize)]
pub struct RetractJson {
    pub section: ComponentsJson,
    pub retraction: ComponentsJson,
    pub homotopy: ComponentsJson,
}

/// Everything needed to replay a witness.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateJson {
    pub algebra: AlgebraSpec,
    pub generator: ComplexJson,
    pub target: ComplexJson,
    pub layers: Vec<Vec<i64>>,
    pub triangles: Vec<TriangleJson>,
    pub retract: RetractJson,
    pub verified: bool,
    pub bound: usize,
}

pub fn certificate(w: &LevelWitness, verified: bool) -> CertificateJson {
    let triangles = w
        .triangles
        .iter()
        .map(|t| TriangleJson {
            stage: ComplexJson::of(t.second(), false),
            f: map_to_json(&t.f),
            g: map_to_json(&t.g),
            h: match &t.h {
                Connecting::Map(h) => ConnectingJson::Map(map_to_json(h)),
                Connecting::Roof { back, forth } => ConnectingJson::Roof {
                    back: map_to_json(back),
                    forth: map_to_json(forth),
                    through: ComplexJson::of(back.target(), false),
                },
            },
        })
        .collect();
    CertificateJson {
        algebra: AlgebraSpec::of(w.generator.algebra()),
        generator: ComplexJson::of(&w.generator, false),
        target: ComplexJson::of(&w.target, false),
        layers: w.layers.iter().map(|l| l.shifts.clone()).collect(),
        triangles,
        retract: RetractJson {
            section: map_to_json(&w.retract.section),
            retraction: map_to_json(&w.retract.retraction),
            homotopy: homotopy_to_json(&w.retract.homotopy),
        },
        verified,
        bound: w.bound(),
    }
}
