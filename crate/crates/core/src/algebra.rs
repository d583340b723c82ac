//! Finite-dimensional commutative local algebras `k[x_1..x_s]/I` with `I`
//! generated by monomials.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::KMatrix;

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

/// Shared handle to a presentation; all complexes over one algebra share it.
pub type Algebra = Arc<AlgebraPresentation>;

#[derive(Clone)]
pub struct AlgebraPresentation {
    field: PrimeField,
    var_names: Vec<String>,
    relations: Vec<Monomial>,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    /// `(i, j, k)` with `b_i · b_j = b_k`; products landing in `I` are omitted.
    products: Vec<(usize, usize, usize)>,
    /// `mult[i][j] = Some(k)` iff `b_i · b_j = b_k`.
    mult: Vec<Vec<Option<usize>>>,
    var_basis: Vec<usize>,
    regular: Vec<KMatrix>,
}

impl fmt::Debug for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relations.iter().map(|m| self.monomial_name(m)).collect();
        write!(f, "F{}[{}]/({})", self.field.p(), self.var_names.join(","), rels.join(","))
    }
}

impl PartialEq for AlgebraPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.var_names.len() == other.var_names.len() && self.relations == other.relations
    }
}
impl Eq for AlgebraPresentation {}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn default_names(n: usize) -> Vec<String> {
    const LETTERS: [&str; 4] = ["x", "y", "z", "w"];
    if n <= LETTERS.len() {
        LETTERS[..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

impl AlgebraPresentation {
    pub fn new(field: PrimeField, num_vars: usize, relations: Vec<Monomial>) -> Result<Algebra> {
        Self::with_names(field, default_names(num_vars), relations)
    }

    pub fn with_names(field: PrimeField, var_names: Vec<String>, relations: Vec<Monomial>) -> Result<Algebra> {
        let s = var_names.len();
        if relations.iter().any(|r| r.len() != s) {
            return Err(Error::Parse("relation exponent vector has wrong length".into()));
        }
        // keep a minimal generating set in a canonical order
        let mut rels: Vec<Monomial> = Vec::new();
        for r in &relations {
            if r.iter().all(|&e| e == 0) {
                return Err(Error::Parse("the unit monomial cannot be a relation".into()));
            }
            if !relations.iter().any(|o| o != r && divides(o, r)) && !rels.contains(r) {
                rels.push(r.clone());
            }
        }
        rels.sort_by(|a, b| deg(a).cmp(&deg(b)).then_with(|| b.cmp(a)));

        let mut bounds = Vec::with_capacity(s);
        for v in 0..s {
            let pure = rels
                .iter()
                .filter(|r| r.iter().enumerate().all(|(i, &e)| i == v || e == 0))
                .map(|r| r[v])
                .min();
            match pure {
                Some(e) => bounds.push(e),
                None => return Err(Error::InfiniteDimensional),
            }
        }

        let mut basis = Vec::new();
        let mut cur = vec![0u32; s];
        loop {
            if !rels.iter().any(|r| divides(r, &cur)) {
                basis.push(cur.clone());
            }
            let mut v = 0;
            loop {
                if v == s {
                    break;
                }
                cur[v] += 1;
                if cur[v] < bounds[v] {
                    break;
                }
                cur[v] = 0;
                v += 1;
            }
            if v == s {
                break;
            }
        }
        basis.sort_by(|a, b| deg(a).cmp(&deg(b)).then_with(|| b.cmp(a)));
        let index: HashMap<Monomial, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();

        let n = basis.len();
        let mut mult = vec![vec![None; n]; n];
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let m: Monomial = basis[i].iter().zip(&basis[j]).map(|(a, b)| a + b).collect();
                if let Some(&k) = index.get(&m) {
                    mult[i][j] = Some(k);
                    products.push((i, j, k));
                }
            }
        }
        let var_basis: Vec<usize> = (0..s)
            .map(|v| {
                let mut m = vec![0; s];
                m[v] = 1;
                // a variable in I acts by zero; keep an out-of-range marker
                index.get(&m).copied().unwrap_or(usize::MAX)
            })
            .collect();
        let mut alg = Self { field, var_names, relations: rels, basis, index, products, mult, var_basis, regular: vec![] };
        alg.regular = (0..s)
            .map(|v| {
                let mut e = vec![0u32; n];
                if alg.var_basis[v] != usize::MAX {
                    e[alg.var_basis[v]] = 1;
                }
                alg.mult_matrix(&e)
            })
            .collect();
        Ok(Arc::new(alg))
    }

    /// Parses strings such as `F2[x]/(x2)` or `F3[x,y]/(x^2,y^2)`.
    pub fn parse(spec: &str) -> Result<Algebra> {
        let bad = || Error::Parse(format!("cannot parse ring `{spec}`"));
        let spec: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        let rest = spec.strip_prefix('F').ok_or_else(bad)?;
        let open = rest.find('[').ok_or_else(bad)?;
        let p: u32 = rest[..open].parse().map_err(|_| bad())?;
        let close = rest.find(']').ok_or_else(bad)?;
        let names: Vec<String> = rest[open + 1..close].split(',').map(str::to_string).collect();
        if names.iter().any(|n| n.len() != 1 || !n.chars().all(|c| c.is_ascii_alphabetic())) {
            return Err(Error::Parse("variable names must be single letters".into()));
        }
        let tail = rest[close + 1..].strip_prefix("/(").and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
        let mut rels = Vec::new();
        for mono in tail.split(',') {
            rels.push(parse_monomial(mono, &names)?);
        }
        Self::with_names(PrimeField::new(p)?, names, rels)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }
    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }
    pub fn relations(&self) -> &[Monomial] {
        &self.relations
    }
    /// Standard monomials in degree-then-lex order; index 0 is the unit.
    pub fn standard_basis(&self) -> &[Monomial] {
        &self.basis
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn monomial_index(&self, m: &[u32]) -> Option<usize> {
        self.index.get(m).copied()
    }
    pub fn products(&self) -> &[(usize, usize, usize)] {
        &self.products
    }
    pub fn product_index(&self, i: usize, j: usize) -> Option<usize> {
        self.mult[i][j]
    }
    /// Regular representation of each variable on `R` (dim × dim).
    pub fn variable_actions(&self) -> &[KMatrix] {
        &self.regular
    }
    /// Basis index of the variable `v`, if it is nonzero in `R`.
    pub fn variable_index(&self, v: usize) -> Option<usize> {
        let i = self.var_basis[v];
        (i != usize::MAX).then_some(i)
    }

    pub fn monomial_name(&self, m: &[u32]) -> String {
        if m.iter().all(|&e| e == 0) {
            return "1".into();
        }
        let mut s = String::new();
        for (v, &e) in m.iter().enumerate() {
            match e {
                0 => {}
                1 => s.push_str(&self.var_names[v]),
                _ => s.push_str(&format!("{}{}", self.var_names[v], e)),
            }
        }
        s
    }

    /// Matrix of multiplication by `r` on `R` (column `j` is `r · b_j`).
    pub fn mult_matrix(&self, r: &[u32]) -> KMatrix {
        let n = self.dim();
        let mut m = KMatrix::zeros(self.field, n, n);
        for &(i, j, k) in &self.products {
            if r[i] != 0 {
                m.set(k, j, self.field.add(m.get(k, j), r[i]));
            }
        }
        m
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; self.dim()];
        self.mul_acc(a, b, &mut out);
        out
    }

    /// `out += a · b`.
    #[inline]
    pub fn mul_acc(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        let f = self.field;
        for &(i, j, k) in &self.products {
            if a[i] != 0 && b[j] != 0 {
                out[k] = f.add(out[k], f.mul(a[i], b[j]));
            }
        }
    }

    pub fn is_unit(&self, a: &[u32]) -> bool {
        a[0] != 0
    }

    pub fn inverse(&self, a: &[u32]) -> Option<Vec<u32>> {
        if !self.is_unit(a) {
            return None;
        }
        let mut e = KMatrix::zeros(self.field, self.dim(), 1);
        e.set(0, 0, 1);
        self.mult_matrix(a).solve(&e).map(|x| x.column(0))
    }

    pub fn one(&self) -> Vec<u32> {
        let mut v = vec![0; self.dim()];
        v[0] = 1;
        v
    }

    pub fn zero(&self) -> Vec<u32> {
        vec![0; self.dim()]
    }

    pub fn variable(&self, v: usize) -> Vec<u32> {
        let mut e = self.zero();
        if let Some(i) = self.variable_index(v) {
            e[i] = 1;
        }
        e
    }
}

fn deg(m: &[u32]) -> u32 {
    m.iter().sum()
}

fn parse_monomial(s: &str, names: &[String]) -> Result<Monomial> {
    let bad = || Error::Parse(format!("cannot parse monomial `{s}`"));
    let mut exps = vec![0u32; names.len()];
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    if chars.is_empty() {
        return Err(bad());
    }
    while i < chars.len() {
        let v = names.iter().position(|n| n.starts_with(chars[i])).ok_or_else(bad)?;
        i += 1;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
        }
        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let e: u32 = if start == i { 1 } else { chars[start..i].iter().collect::<String>().parse().map_err(|_| bad())? };
        exps[v] += e;
    }
    Ok(exps)
}

/// An element of `R`, stored as a dense coefficient vector over the
/// standard basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    pub coeffs: Vec<u32>,
}

impl RingElement {
    pub fn new(alg: &AlgebraPresentation, terms: &[(Monomial, u32)]) -> Result<Self> {
        let mut coeffs = alg.zero();
        for (m, c) in terms {
            let i = alg.monomial_index(m).ok_or_else(|| Error::Parse(format!("{m:?} is not a standard monomial")))?;
            coeffs[i] = alg.field().add(coeffs[i], c % alg.field().p());
        }
        Ok(Self { coeffs })
    }

    /// Nonzero terms keyed by standard monomial.
    pub fn terms(&self, alg: &AlgebraPresentation) -> BTreeMap<Monomial, u32> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (alg.standard_basis()[i].clone(), c))
            .collect()
    }
}

/// Serialized form `{"p": .., "vars": .., "relations": [[..]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub p: u32,
    pub vars: usize,
    pub relations: Vec<Monomial>,
}

impl AlgebraJson {
    pub fn from_algebra(a: &AlgebraPresentation) -> Self {
        Self { p: a.field().p(), vars: a.num_vars(), relations: a.relations().to_vec() }
    }

    pub fn build(&self) -> Result<Algebra> {
        AlgebraPresentation::new(PrimeField::new(self.p)?, self.vars, self.relations.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_bases() {
        let a = AlgebraPresentation::parse("F2[x]/(x2)").unwrap();
        assert_eq!(a.standard_basis(), &[vec![0], vec![1]]);
        let b = AlgebraPresentation::parse("F2[x,y]/(x2,y2)").unwrap();
        assert_eq!(b.standard_basis(), &[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
        let c = AlgebraPresentation::parse("F3[x]/(x^3)").unwrap();
        assert_eq!(c.standard_basis(), &[vec![0], vec![1], vec![2]]);
        assert_eq!(c.to_string(), "F3[x]/(x3)");
    }

    #[test]
    fn infinite_dimensional_rejected() {
        let f = PrimeField::new(2).unwrap();
        assert!(matches!(AlgebraPresentation::new(f, 2, vec![vec![2, 0], vec![1, 1]]), Err(Error::InfiniteDimensional)));
        assert!(AlgebraPresentation::parse("F4[x]/(x2)").is_err());
    }

    #[test]
    fn arithmetic() {
        let a = AlgebraPresentation::parse("F3[x,y]/(x2,y2)").unwrap();
        let x = a.variable(0);
        let y = a.variable(1);
        let xy = a.mul(&x, &y);
        assert_eq!(xy, vec![0, 0, 0, 1]);
        assert_eq!(a.mul(&xy, &x), a.zero());
        let u = vec![2, 1, 0, 1];
        let inv = a.inverse(&u).unwrap();
        assert_eq!(a.mul(&u, &inv), a.one());
        assert!(a.inverse(&x).is_none());
        assert_eq!(a.variable_actions()[0].get(1, 0), 1);
    }
}
