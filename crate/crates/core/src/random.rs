//! Seeded generators of perfect complexes, chain maps and split monos within
//! rank and amplitude bounds.
//!
//! Every instance draws from its own ChaCha stream keyed by the run seed and
//! the instance index, so instances are reproducible individually and may be
//! generated in any order or in parallel.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraPresentation};
use crate::chain_map::{ChainMap, Homotopy};
use crate::cofibration::Cofibration;
use crate::complex::ChainComplex;
use crate::cone::cone;
use crate::error::Result;
use crate::homotopy::strict_inverse;
use crate::level::{strict_triangle, sum_of_shifts, LayerSpec, LevelWitness, Retract};
use crate::matrix::KMatrix;
use crate::minimize::minimize;
use crate::module::FinModule;
use crate::rmatrix::RMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub ring: String,
    pub instances: usize,
    /// Bound on the free rank of every term of a generated complex.
    pub max_rank: usize,
    /// Generated complexes live in degrees `lo ..= lo + max_amplitude`.
    pub max_amplitude: usize,
    pub mode: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { seed: 0, ring: "F2[x]/(x2)".into(), instances: 10, max_rank: 4, max_amplitude: 3, mode: None }
    }
}

impl RunConfig {
    pub fn algebra(&self) -> Result<Algebra> {
        AlgebraPresentation::parse(&self.ring)
    }

    /// The generator for instance `index` of this run.
    pub fn generator(&self, alg: &Algebra, index: u64) -> Generator {
        Generator::new(alg, self.seed, index, self.max_rank, self.max_amplitude)
    }
}

pub struct Generator {
    alg: Algebra,
    rng: ChaCha8Rng,
    pub max_rank: usize,
    pub max_amplitude: usize,
}

impl Generator {
    pub fn new(alg: &Algebra, seed: u64, index: u64, max_rank: usize, max_amplitude: usize) -> Self {
        let key = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        Self { alg: alg.clone(), rng: ChaCha8Rng::seed_from_u64(key), max_rank, max_amplitude }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn scalar(&mut self) -> u32 {
        self.rng.gen_range(0..self.alg.field().p())
    }

    pub fn element(&mut self) -> Vec<u32> {
        (0..self.alg.dim()).map(|_| self.scalar()).collect()
    }

    /// A random element of the maximal ideal.
    pub fn radical_element(&mut self) -> Vec<u32> {
        let mut r = self.element();
        r[0] = 0;
        r
    }

    pub fn unit(&mut self) -> Vec<u32> {
        let mut r = self.element();
        r[0] = self.rng.gen_range(1..self.alg.field().p());
        r
    }

    /// Lowest degree of a generated complex.
    pub fn low_degree(&mut self) -> i64 {
        self.rng.gen_range(-1..=1)
    }

    /// Ranks for `parts` complexes on `lo ..= lo + max_amplitude` whose sum
    /// stays within `max_rank` in every degree.
    pub fn split_ranks(&mut self, lo: i64, parts: usize) -> Vec<BTreeMap<i64, usize>> {
        let mut out = vec![BTreeMap::new(); parts];
        for n in lo..=lo + self.max_amplitude as i64 {
            let mut left = self.rng.gen_range(0..=self.max_rank);
            for part in out.iter_mut() {
                let r = self.rng.gen_range(0..=left);
                left -= r;
                if r > 0 {
                    part.insert(n, r);
                }
            }
        }
        out
    }

    /// A free complex with the given ranks: each column of `d_n` is a random
    /// cycle of `R^{r_{n-1}}`, half the time pushed into the radical.
    pub fn complex_with_ranks(&mut self, ranks: &BTreeMap<i64, usize>) -> Arc<ChainComplex> {
        let alg = self.alg.clone();
        let d = alg.dim();
        let mut diffs: BTreeMap<i64, RMatrix> = BTreeMap::new();
        for (&n, &rn) in ranks {
            let Some(&rm) = ranks.get(&(n - 1)) else { continue };
            let cycles = match diffs.get(&(n - 1)) {
                Some(prev) => prev.to_kmatrix().kernel(),
                None => KMatrix::identity(alg.field(), rm * d),
            };
            let mut dn = RMatrix::zeros(&alg, rm, rn);
            for c in 0..rn {
                let v = self.combination(&cycles);
                let push = self.rng.gen_bool(0.5) && alg.num_vars() > 0;
                let factor = if push { alg.variable(self.rng.gen_range(0..alg.num_vars())) } else { unit_vector(d, 0) };
                for g in 0..rm {
                    let coeffs = alg.mul(&factor, &v[g * d..(g + 1) * d]);
                    dn.entry_mut(g, c).copy_from_slice(&coeffs);
                }
            }
            diffs.insert(n, dn);
        }
        Arc::new(ChainComplex::from_free(&alg, ranks, &diffs).expect("cycles square to zero"))
    }

    pub fn complex(&mut self) -> Arc<ChainComplex> {
        let lo = self.low_degree();
        let ranks = self.split_ranks(lo, 1).pop().expect("one part");
        self.complex_with_ranks(&ranks)
    }

    fn combination(&mut self, basis: &KMatrix) -> Vec<u32> {
        let f = basis.field();
        let mut v = vec![0u32; basis.rows()];
        for c in 0..basis.cols() {
            let s = self.scalar();
            if s == 0 {
                continue;
            }
            for (r, x) in v.iter_mut().enumerate() {
                *x = f.add(*x, f.mul(s, basis.get(r, c)));
            }
        }
        v
    }

    /// A uniformly random chain map `a → b`, drawn from a basis of the space
    /// of all R-linear chain maps.
    pub fn chain_map(&mut self, a: &Arc<ChainComplex>, b: &Arc<ChainComplex>) -> ChainMap {
        let basis = chain_map_space(a, b);
        let v = self.combination(&basis.kernel);
        ChainMap::from_rmatrices(a.clone(), b.clone(), 0, &basis.assemble(&self.alg, &v)).expect("kernel vectors are chain maps")
    }

    /// A random automorphism of each free term, as a chain isomorphism
    /// `x → x'` onto the transported complex.
    pub fn base_change(&mut self, x: &Arc<ChainComplex>) -> ChainMap {
        let alg = self.alg.clone();
        let mut p = BTreeMap::new();
        for n in x.degrees() {
            let r = x.rank(n);
            let mut m = RMatrix::identity(&alg, r);
            for g in 0..r {
                m.entry_mut(g, g).copy_from_slice(&self.unit());
            }
            for _ in 0..2 * r {
                let (i, j) = (self.rng.gen_range(0..r), self.rng.gen_range(0..r));
                if i != j {
                    let mut e = RMatrix::identity(&alg, r);
                    e.entry_mut(i, j).copy_from_slice(&self.element());
                    m = e.mul(&m);
                }
            }
            p.insert(n, m);
        }
        let mut diffs = BTreeMap::new();
        for n in x.degrees() {
            if let Some(pm) = p.get(&(n - 1)) {
                let inv = p[&n].inverse().expect("products of elementary and unit matrices are invertible");
                diffs.insert(n, pm.mul(&x.rdiff(n)).mul(&inv));
            }
        }
        let y = Arc::new(ChainComplex::from_free(&alg, &x.ranks(), &diffs).expect("conjugate differential"));
        ChainMap::from_rmatrices(x.clone(), y, 0, &p).expect("conjugation is a chain isomorphism")
    }

    /// A split mono `X → Y` built as `X → X ⊕ C` with a random twisting
    /// chain map `C → ΣX`, followed by a random change of basis of `Y`.
    pub fn split_mono(&mut self) -> ChainMap {
        let lo = self.low_degree();
        let ranks = self.split_ranks(lo, 2);
        let x = self.complex_with_ranks(&ranks[0]);
        self.extend(&x, &ranks[1])
    }

    /// A split mono out of `x` whose cokernel has the given ranks.
    pub fn extend(&mut self, x: &Arc<ChainComplex>, cokernel_ranks: &BTreeMap<i64, usize>) -> ChainMap {
        let c = self.complex_with_ranks(cokernel_ranks);
        let sx = Arc::new(x.suspend(1));
        let delta = self.chain_map(&c, &sx);
        let standard = Cofibration::extension(x, &delta).expect("twisting map lands in ΣX").map;
        self.base_change(standard.target()).after(&standard)
    }

    /// Composable split monos `X → Y → Z` within the rank bound.
    pub fn composable_split_monos(&mut self) -> (ChainMap, ChainMap) {
        let lo = self.low_degree();
        let ranks = self.split_ranks(lo, 3);
        let x = self.complex_with_ranks(&ranks[0]);
        let a = self.extend(&x, &ranks[1]);
        let b = self.extend(a.target(), &ranks[2]);
        (a, b)
    }

    /// A random complex with at least one nonzero term.
    pub fn nonzero_complex(&mut self) -> Arc<ChainComplex> {
        if self.max_rank == 0 {
            return Arc::new(ChainComplex::ring(&self.alg, 0));
        }
        loop {
            let c = self.complex();
            if !c.is_zero() {
                return c;
            }
        }
    }

    /// A witness from `x` with exactly `layers` triangles: each stage is the
    /// cone of a random map from a sum of one or two shifts of `x`. The last
    /// stage is then moved by a random change of basis, and half the time the
    /// target is its minimal model, a retract that is not an isomorphism
    /// on the nose.
    pub fn level_witness(&mut self, x: &Arc<ChainComplex>, layers: usize) -> Result<LevelWitness> {
        let mut w = LevelWitness::empty(x);
        let mut stage = w.target.clone();
        for _ in 0..layers {
            let count = self.rng.gen_range(1..=2);
            let shifts: Vec<i64> = (0..count).map(|_| self.rng.gen_range(-1..=1)).collect();
            let a = Arc::new(sum_of_shifts(x, &shifts));
            let u = if stage.is_zero() { ChainMap::zero(&a, &stage, 0) } else { self.chain_map(&a, &stage) };
            let c = cone(&u)?;
            let layer = LayerSpec::new(x, shifts.iter().map(|d| d + 1).collect());
            let g = c.projection.retarget(&c.complex, &layer.realization)?;
            let h = u.suspend(1).neg().retarget(&layer.realization, &Arc::new(stage.suspend(1)))?;
            w.triangles.push(strict_triangle(c.inclusion.clone(), g, h));
            w.layers.push(layer);
            stage = c.complex;
        }
        if layers == 0 {
            return Ok(w);
        }
        let model = minimize(&stage)?;
        let (target, section, retraction) = if self.rng.gen_bool(0.5) {
            (model.complex.clone(), model.up, model.down)
        } else {
            (stage.clone(), ChainMap::identity(&stage), ChainMap::identity(&stage))
        };
        let beta = self.base_change(&stage);
        let inverse = strict_inverse(&beta).expect("changes of basis are invertible");
        let last = w.triangles.last_mut().expect("at least one layer");
        last.f = beta.compose(&last.f)?;
        last.g = last.g.compose(&inverse)?;
        w.retract = Retract {
            section: beta.compose(&section)?,
            retraction: retraction.compose(&inverse)?,
            homotopy: Homotopy::zero(&target, &target),
        };
        w.target = target;
        Ok(w)
    }

    /// `R^g / N` for `g ≤ 2` and `N` generated by up to two random vectors,
    /// some pushed into the radical so that every Loewy length occurs.
    pub fn module(&mut self) -> Result<FinModule> {
        let alg = self.alg.clone();
        let f = alg.field();
        let g = self.rng.gen_range(0..=2);
        let free = FinModule::free(&alg, g);
        if g == 0 {
            return Ok(free);
        }
        let mut columns = Vec::new();
        for _ in 0..self.rng.gen_range(0..=2) {
            let mut v: Vec<u32> = (0..free.dim()).map(|_| self.scalar()).collect();
            if self.rng.gen_bool(0.5) && alg.num_vars() > 0 {
                let x = alg.variable(self.rng.gen_range(0..alg.num_vars()));
                v = free.element_action(&x).mul_vec(&v);
            }
            for t in 0..alg.dim() {
                columns.push(free.element_action(&unit_vector(alg.dim(), t)).mul_vec(&v));
            }
        }
        let span = KMatrix::from_columns(f, free.dim(), &columns).column_basis();
        Ok(free.quotient(&span)?.0)
    }

    /// A span `U ← T → V` of random chain maps between random complexes.
    pub fn span(&mut self) -> (ChainMap, ChainMap) {
        let t = self.complex();
        let (u, v) = (self.complex(), self.complex());
        (self.chain_map(&t, &u), self.chain_map(&t, &v))
    }
}

fn unit_vector(d: usize, t: usize) -> Vec<u32> {
    let mut e = vec![0u32; d];
    e[t] = 1;
    e
}

/// Coordinates `(n, row, col, basis index)` of the entries of an R-linear
/// degree-0 map, with a basis of the chain maps among them.
struct ChainMapSpace {
    params: Vec<(i64, usize, usize, usize)>,
    shapes: BTreeMap<i64, (usize, usize)>,
    kernel: KMatrix,
}

impl ChainMapSpace {
    fn assemble(&self, alg: &Algebra, v: &[u32]) -> BTreeMap<i64, RMatrix> {
        let mut comps: BTreeMap<i64, RMatrix> =
            self.shapes.iter().map(|(&n, &(r, c))| (n, RMatrix::zeros(alg, r, c))).collect();
        for (k, &(n, r, c, t)) in self.params.iter().enumerate() {
            comps.get_mut(&n).expect("shape per degree").entry_mut(r, c)[t] = v[k];
        }
        comps
    }
}

/// Solves `d φ = φ d` for R-linear `φ : a → b` over the ground field.
fn chain_map_space(a: &ChainComplex, b: &ChainComplex) -> ChainMapSpace {
    let alg = a.algebra().clone();
    let (d, f) = (alg.dim(), alg.field());
    let shapes: BTreeMap<i64, (usize, usize)> =
        a.degrees().into_iter().filter(|&n| b.rank(n) > 0).map(|n| (n, (b.rank(n), a.rank(n)))).collect();
    let mut params = Vec::new();
    for (&n, &(r, c)) in &shapes {
        for i in 0..r {
            for j in 0..c {
                for t in 0..d {
                    params.push((n, i, j, t));
                }
            }
        }
    }
    // equation in degree m: d_b φ_m - φ_{m-1} d_a, an R-matrix rank b_{m-1} × rank a_m
    let mut eq_offset = BTreeMap::new();
    let mut rows = 0;
    for m in a.degrees() {
        let (r, c) = (b.rank(m - 1), a.rank(m));
        if r * c > 0 {
            eq_offset.insert(m, rows);
            rows += r * c * d;
        }
    }
    let mut sys = KMatrix::zeros(f, rows, params.len());
    for (k, &(n, i, j, t)) in params.iter().enumerate() {
        let e = unit_vector(d, t);
        // d_b(n) φ_n: entry (g, j) gains d_b(n)[g][i] · e
        if let Some(&off) = eq_offset.get(&n) {
            let db = b.rdiff(n);
            for g in 0..b.rank(n - 1) {
                let prod = alg.mul(db.entry(g, i), &e);
                for (s, &v) in prod.iter().enumerate() {
                    let row = off + (g * a.rank(n) + j) * d + s;
                    sys.set(row, k, f.add(sys.get(row, k), v));
                }
            }
        }
        // -φ_n d_a(n+1): entry (i, h) loses e · d_a(n+1)[j][h]
        if let Some(&off) = eq_offset.get(&(n + 1)) {
            let da = a.rdiff(n + 1);
            for h in 0..a.rank(n + 1) {
                let prod = alg.mul(&e, da.entry(j, h));
                for (s, &v) in prod.iter().enumerate() {
                    let row = off + (i * a.rank(n + 1) + h) * d + s;
                    sys.set(row, k, f.sub(sys.get(row, k), v));
                }
            }
        }
    }
    ChainMapSpace { params, shapes, kernel: sys.kernel() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generator(seed: u64, ring: &str) -> Generator {
        let alg = AlgebraPresentation::parse(ring).unwrap();
        Generator::new(&alg, seed, 0, 4, 3)
    }

    #[test]
    fn same_seed_same_instance() {
        let a = generator(1, "F3[x,y]/(x2,y2)").split_mono();
        let b = generator(1, "F3[x,y]/(x2,y2)").split_mono();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_rank_bound_gives_zero_complexes() {
        let alg = AlgebraPresentation::parse("F2[x]/(x2)").unwrap();
        let mut g = Generator::new(&alg, 3, 0, 0, 2);
        assert!(g.complex().is_zero());
        assert!(g.split_mono().target().is_zero());
    }

    #[test]
    fn generated_maps_are_chain_maps_within_bounds() {
        let alg = AlgebraPresentation::parse("F2[x]/(x2)").unwrap();
        for index in 0..20 {
            let mut g = Generator::new(&alg, 2, index, 3, 2);
            let f = g.split_mono();
            assert!(f.validate().is_ok());
            let y = f.target();
            assert!(y.degrees().iter().all(|&n| y.rank(n) <= 3));
            if let Some((lo, hi)) = y.support() {
                assert!(hi - lo <= 2);
            }
            assert!(Cofibration::new(&f).is_ok());
            let (s, t) = g.span();
            assert!(s.validate().is_ok() && t.validate().is_ok());
        }
    }

    #[test]
    fn generated_witnesses_have_the_requested_layers() {
        for ring in ["F2[x]/(x2)", "F3[x,y]/(x2,y2)"] {
            let alg = AlgebraPresentation::parse(ring).unwrap();
            for index in 0..6 {
                let mut g = Generator::new(&alg, 11, index, 2, 1);
                let x = g.nonzero_complex();
                for layers in 0..=3 {
                    let w = g.level_witness(&x, layers).unwrap();
                    assert_eq!(crate::level::verify_witness(&w).unwrap(), layers, "{ring} #{index}");
                }
            }
        }
    }

    /// Least `l` with every monomial of degree at least `l` acting as zero.
    fn loewy_by_monomials(m: &FinModule) -> usize {
        let alg = m.algebra();
        let degree = |mono: &[u32]| mono.iter().sum::<u32>() as usize;
        let top = alg.standard_basis().iter().map(|mono| degree(mono)).max().unwrap_or(0);
        (0..=top + 1)
            .find(|&l| {
                alg.standard_basis().iter().enumerate().filter(|(_, mono)| degree(mono) >= l).all(|(t, _)| m.element_action(&unit_vector(alg.dim(), t)).is_zero())
            })
            .expect("the top degree plus one kills everything")
    }

    #[test]
    fn generated_modules_cover_every_loewy_length() {
        let alg = AlgebraPresentation::parse("F2[x,y]/(x2,y2)").unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for index in 0..50 {
            let m = Generator::new(&alg, 4, index, 2, 1).module().unwrap();
            let l = loewy_by_monomials(&m);
            assert_eq!(m.loewy_length(), l);
            seen.insert(l);
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    }
}
