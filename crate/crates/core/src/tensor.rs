//! Finite formal linear combinations over a labelled basis, tensor powers,
//! linear maps and finite-dimensional algebras given by structure constants.

use std::borrow::Borrow;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::cyclotomic::{CyclotomicField, Scalar, ScalarJson};
use crate::error::{Error, Result};

/// Basis indices of one tensor monomial, one per slot.
pub type Key = SmallVec<[u32; 3]>;

/// Separator used when printing or labelling tensor monomials.
pub const TENSOR_SEP: &str = " (x) ";

/// An ordered basis: canonical labels (used in files) and short display
/// forms (used by the printer). Iteration order is index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    labels: Vec<String>,
    display: Vec<String>,
    index: HashMap<String, u32>,
}

/// Short display form of a canonical monomial label: zero exponents are
/// dropped and `^1` is omitted, so `x^1 y^0 dx^1 dy^0` shows as `x dx` and
/// the all-zero label as `1`.
pub fn display_of_label(label: &str) -> String {
    let mut parts = Vec::new();
    for tok in label.split_whitespace() {
        match tok.split_once('^') {
            Some((_, "0")) => {}
            Some((name, "1")) => parts.push(name.to_string()),
            _ => parts.push(tok.to_string()),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

impl Basis {
    /// Basis whose display forms are derived with [`display_of_label`].
    pub fn from_labels(labels: Vec<String>) -> Result<Self> {
        let display = labels.iter().map(|l| display_of_label(l)).collect();
        Basis::new(labels, display)
    }

    pub fn new(labels: Vec<String>, display: Vec<String>) -> Result<Self> {
        if labels.len() != display.len() {
            return Err(Error::Malformed("label and display lists differ in length".into()));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i as u32).is_some() {
                return Err(Error::Malformed(format!("duplicate basis label `{l}`")));
            }
        }
        Ok(Basis { labels, display, index })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: u32) -> &str {
        &self.labels[i as usize]
    }

    pub fn display(&self, i: u32) -> &str {
        &self.display[i as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Result<u32> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Looks a basis element up by canonical label or by display form.
    pub fn find(&self, name: &str) -> Option<u32> {
        self.index
            .get(name)
            .copied()
            .or_else(|| self.display.iter().position(|d| d == name).map(|i| i as u32))
    }

    pub fn key_label(&self, key: &[u32]) -> String {
        key.iter().map(|i| self.label(*i)).collect::<Vec<_>>().join(TENSOR_SEP)
    }

    pub fn key_display(&self, key: &[u32]) -> String {
        key.iter().map(|i| self.display(*i)).collect::<Vec<_>>().join(TENSOR_SEP)
    }

    pub fn parse_key(&self, label: &str) -> Result<Key> {
        label.split(TENSOR_SEP).map(|l| self.index_of(l.trim())).collect()
    }
}

/// A sparse linear combination of tensor monomials of fixed arity.
///
/// Zero coefficients are never stored; equality is equality of the reduced
/// maps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    arity: usize,
    terms: BTreeMap<Key, Scalar>,
}

impl Element {
    pub fn zero(arity: usize) -> Self {
        Element {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(key: &[u32], coeff: Scalar) -> Self {
        let mut e = Element::zero(key.len());
        e.add_term(Key::from_slice(key), coeff);
        e
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Key, Scalar)>) -> Self {
        let mut e = Element::zero(arity);
        for (k, c) in terms {
            e.add_term(k, c);
        }
        e
    }

    /// Scalar placed on the empty tensor monomial.
    pub fn scalar(c: Scalar) -> Self {
        Element::from_terms(0, [(Key::new(), c)])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &[u32]) -> Option<&Scalar> {
        self.terms.get(key)
    }

    pub fn add_term(&mut self, key: Key, c: Scalar) {
        debug_assert_eq!(key.len(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &Element) {
        assert_eq!(self.arity, other.arity, "adding elements of different arity");
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (k, v) in &other.terms {
            self.add_term(k.clone(), if unit { v.clone() } else { c * v });
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        assert_eq!(self.arity, other.arity, "adding elements of different arity");
        let mut r = self.clone();
        for (k, v) in &other.terms {
            r.add_term(k.clone(), v.clone());
        }
        r
    }

    pub fn sub(&self, other: &Element) -> Element {
        assert_eq!(self.arity, other.arity, "subtracting elements of different arity");
        let mut r = self.clone();
        for (k, v) in &other.terms {
            r.add_term(k.clone(), -v);
        }
        r
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero(self.arity);
        }
        Element {
            arity: self.arity,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), c * v)).collect(),
        }
    }

    pub fn neg(&self) -> Element {
        Element {
            arity: self.arity,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    /// Applies `f` to every coefficient (e.g. complex conjugation).
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Element {
        Element::from_terms(self.arity, self.terms.iter().map(|(k, v)| (k.clone(), f(v))))
    }

    /// Permutes slots: output slot `i` takes input slot `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Element {
        assert_eq!(perm.len(), self.arity);
        Element::from_terms(
            self.arity,
            self.terms
                .iter()
                .map(|(k, v)| (perm.iter().map(|p| k[*p]).collect(), v.clone())),
        )
    }

    /// The flip τ on a degree-2 tensor.
    pub fn flip(&self) -> Element {
        self.permute(&[1, 0])
    }

    /// Groups a tensor by its last slot: `Σ_i u_i ⊗ e_i ↦ [(u_i, i)]`.
    pub fn split_last(&self) -> Vec<(Element, u32)> {
        assert!(self.arity >= 1);
        let mut groups: BTreeMap<u32, Element> = BTreeMap::new();
        for (k, v) in &self.terms {
            let last = k[self.arity - 1];
            groups
                .entry(last)
                .or_insert_with(|| Element::zero(self.arity - 1))
                .add_term(Key::from_slice(&k[..self.arity - 1]), v.clone());
        }
        groups.into_iter().map(|(i, e)| (e, i)).collect()
    }

    /// Sum of coefficients on the empty key (arity 0).
    pub fn scalar_value(&self, f: &'static CyclotomicField) -> Scalar {
        debug_assert_eq!(self.arity, 0);
        self.terms.values().next().cloned().unwrap_or_else(|| f.zero())
    }

    /// Human-readable form: `(1-q^2) x^2`, `q * x (x) y`, `-q^2`.
    pub fn pretty(&self, basis: &Basis) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let many = self.terms.len() > 1;
        let mut out = String::new();
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let unit_key = k.is_empty() || (self.arity == 1 && is_unit_display(basis.display(k[0])));
            let mono = if k.is_empty() { String::new() } else { basis.key_display(k) };
            let nterms = c.display_len();
            let (neg, body) = if nterms == 1 {
                let p = c.pretty();
                match p.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, p),
                }
            } else {
                (false, c.pretty())
            };
            if i > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            if unit_key && self.arity <= 1 {
                if nterms > 1 && many {
                    let _ = write!(out, "({body})");
                } else {
                    out.push_str(&body);
                }
            } else if nterms > 1 {
                let _ = write!(out, "({body}) {mono}");
            } else if body == "1" {
                out.push_str(&mono);
            } else {
                let _ = write!(out, "{body} * {mono}");
            }
        }
        out
    }

    pub fn to_json(&self, basis: &Basis) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(k, c)| TermJson {
                label: basis.key_label(k),
                scalar: c.to_json(),
            })
            .collect()
    }

    pub fn from_json(
        f: &'static CyclotomicField,
        basis: &Basis,
        arity: usize,
        terms: &[TermJson],
    ) -> Result<Element> {
        let mut e = Element::zero(arity);
        for t in terms {
            let key = if arity == 0 { Key::new() } else { basis.parse_key(&t.label)? };
            if key.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: key.len(),
                });
            }
            e.add_term(key, f.from_json(&t.scalar)?);
        }
        Ok(e)
    }
}

fn is_unit_display(s: &str) -> bool {
    s == "1"
}

/// One `{label, scalar}` entry of the shared element encoding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub label: String,
    pub scalar: ScalarJson,
}

/// `u ⊗ v`.
pub fn tensor(u: &Element, v: &Element) -> Element {
    let mut r = Element::zero(u.arity + v.arity);
    for (ku, cu) in &u.terms {
        for (kv, cv) in &v.terms {
            let mut k = ku.clone();
            k.extend_from_slice(kv);
            r.add_term(k, cu * cv);
        }
    }
    r
}

/// A finite-dimensional associative unital algebra given by fully expanded
/// structure constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    field: &'static CyclotomicField,
    basis: Basis,
    unit: u32,
    table: Vec<Element>,
}

impl Algebra {
    /// Builds the algebra and verifies the unit laws and associativity on
    /// every basis pair and triple.
    pub fn new(field: &'static CyclotomicField, basis: Basis, unit: u32, table: Vec<Element>) -> Result<Self> {
        let a = Algebra::new_unchecked(field, basis, unit, table)?;
        a.verify()?;
        Ok(a)
    }

    /// Builds without the associativity sweep (shape checks only).
    pub fn new_unchecked(
        field: &'static CyclotomicField,
        basis: Basis,
        unit: u32,
        table: Vec<Element>,
    ) -> Result<Self> {
        let n = basis.len();
        if table.len() != n * n {
            return Err(Error::Malformed(format!(
                "structure table has {} entries, expected {}",
                table.len(),
                n * n
            )));
        }
        if unit as usize >= n {
            return Err(Error::Malformed("unit index out of range".into()));
        }
        for e in &table {
            if e.arity != 1 || e.terms.keys().any(|k| k[0] as usize >= n) {
                return Err(Error::Malformed("structure constant outside the basis".into()));
            }
        }
        Ok(Algebra {
            field,
            basis,
            unit,
            table,
        })
    }

    /// Re-runs the unit and associativity sweeps.
    pub fn verify(&self) -> Result<()> {
        let n = self.dim() as u32;
        for i in 0..n {
            let e = Element::basis(&[i], self.field.one());
            if self.mul_basis(self.unit, i) != &e || self.mul_basis(i, self.unit) != &e {
                return Err(Error::AxiomViolation(format!(
                    "unit fails on `{}`",
                    self.basis.label(i)
                )));
            }
        }
        let bad = (0..n).into_par_iter().find_map_first(|i| {
            for j in 0..n {
                let ij = self.mul_basis(i, j);
                for k in 0..n {
                    let left = self.mul(ij, &self.basis_element(k));
                    let right = self.mul(&self.basis_element(i), self.mul_basis(j, k));
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
            None
        });
        match bad {
            None => Ok(()),
            Some((i, j, k)) => Err(Error::AxiomViolation(format!(
                "associativity fails on ({}, {}, {})",
                self.basis.label(i),
                self.basis.label(j),
                self.basis.label(k)
            ))),
        }
    }

    pub fn field(&self) -> &'static CyclotomicField {
        self.field
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn unit(&self) -> u32 {
        self.unit
    }

    pub fn basis_element(&self, i: u32) -> Element {
        Element::basis(&[i], self.field.one())
    }

    pub fn one(&self) -> Element {
        self.basis_element(self.unit)
    }

    /// `1 ⊗ … ⊗ 1` with `arity` slots.
    pub fn unit_tensor(&self, arity: usize) -> Element {
        Element::basis(&vec![self.unit; arity], self.field.one())
    }

    pub fn element(&self, label: &str) -> Result<Element> {
        Ok(self.basis_element(self.basis.index_of(label)?))
    }

    pub fn mul_basis(&self, i: u32, j: u32) -> &Element {
        &self.table[i as usize * self.dim() + j as usize]
    }

    /// Product of two degree-1 elements.
    pub fn mul(&self, u: &Element, v: &Element) -> Element {
        assert!(u.arity == 1 && v.arity == 1, "mul takes degree-1 elements");
        let mut r = Element::zero(1);
        for (ku, cu) in &u.terms {
            for (kv, cv) in &v.terms {
                r.add_scaled(&(cu * cv), self.mul_basis(ku[0], kv[0]));
            }
        }
        r
    }

    /// Slot-wise product in the tensor-power algebra `A^{⊗k}`.
    pub fn mul_tensor(&self, u: &Element, v: &Element) -> Element {
        assert_eq!(u.arity, v.arity, "slot-wise product needs equal arity");
        let mut r = Element::zero(u.arity);
        for (ku, cu) in &u.terms {
            for (kv, cv) in &v.terms {
                let c = cu * cv;
                self.accumulate_slotwise(&mut r, ku, kv, &c);
            }
        }
        r
    }

    fn accumulate_slotwise(&self, out: &mut Element, ku: &[u32], kv: &[u32], c: &Scalar) {
        let mut partial: Vec<(Key, Scalar)> = vec![(Key::new(), c.clone())];
        for (a, b) in ku.iter().zip(kv) {
            let prod = self.mul_basis(*a, *b);
            let mut next = Vec::with_capacity(partial.len() * prod.len());
            for (k, s) in &partial {
                for (pk, pc) in prod.terms() {
                    let mut nk = k.clone();
                    nk.push(pk[0]);
                    next.push((nk, s * pc));
                }
            }
            partial = next;
            if partial.is_empty() {
                return;
            }
        }
        for (k, s) in partial {
            out.add_term(k, s);
        }
    }

    /// Multiplies adjacent slots `slot` and `slot + 1`: `1⊗…⊗m⊗…⊗1`.
    pub fn contract(&self, t: &Element, slot: usize) -> Element {
        assert!(slot + 1 < t.arity);
        let mut r = Element::zero(t.arity - 1);
        for (k, c) in &t.terms {
            for (pk, pc) in self.mul_basis(k[slot], k[slot + 1]).terms() {
                let mut nk = Key::from_slice(&k[..slot]);
                nk.push(pk[0]);
                nk.extend_from_slice(&k[slot + 2..]);
                r.add_term(nk, c * pc);
            }
        }
        r
    }

    /// Multiplies all slots together, left to right.
    pub fn multiply_out(&self, t: &Element) -> Element {
        let mut cur = t.clone();
        if cur.arity == 0 {
            return self.one().scale(&cur.scalar_value(self.field));
        }
        while cur.arity > 1 {
            cur = self.contract(&cur, 0);
        }
        cur
    }

    /// Embeds a tensor into a higher tensor power, placing its slots at
    /// `positions` and the unit everywhere else (e.g. `R ↦ R₁₃`).
    pub fn embed(&self, t: &Element, arity: usize, positions: &[usize]) -> Element {
        assert_eq!(positions.len(), t.arity);
        Element::from_terms(
            arity,
            t.terms.iter().map(|(k, c)| {
                let mut nk: Key = SmallVec::from_elem(self.unit, arity);
                for (src, dst) in positions.iter().enumerate() {
                    nk[*dst] = k[src];
                }
                (nk, c.clone())
            }),
        )
    }

    pub fn pretty(&self, e: &Element) -> String {
        e.pretty(&self.basis)
    }

    pub fn to_json(&self) -> AlgebraJson {
        let n = self.dim();
        let mut mul = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                let e = &self.table[i * n + j];
                if !e.is_zero() {
                    mul.insert(format!("{i},{j}"), e.to_json(&self.basis));
                }
            }
        }
        AlgebraJson {
            basis: self.basis.labels.clone(),
            unit: self.basis.label(self.unit).to_string(),
            mul,
        }
    }

    /// Rebuilds an algebra from its JSON form (associativity re-verified).
    pub fn from_json(f: &'static CyclotomicField, j: &AlgebraJson) -> Result<Self> {
        let basis = Basis::from_labels(j.basis.clone())?;
        let n = basis.len();
        let unit = basis.index_of(&j.unit)?;
        let mut table = vec![Element::zero(1); n * n];
        for (ij, terms) in &j.mul {
            let (i, jj) = parse_pair(ij, n)?;
            table[i * n + jj] = Element::from_json(f, &basis, 1, terms)?;
        }
        Algebra::new(f, basis, unit, table)
    }
}

pub(crate) fn parse_pair(s: &str, n: usize) -> Result<(usize, usize)> {
    let idx = parse_indices(s, n)?;
    match idx[..] {
        [a, b] => Ok((a, b)),
        _ => Err(Error::Malformed(format!("expected index pair, got `{s}`"))),
    }
}

pub(crate) fn parse_indices(s: &str, n: usize) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .ok()
                .filter(|v| *v < n)
                .ok_or_else(|| Error::Malformed(format!("bad index `{p}` in `{s}`")))
        })
        .collect()
}

/// JSON form of an [`Algebra`]: `{basis, unit, mul: {"i,j": [terms]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub basis: Vec<String>,
    pub unit: String,
    pub mul: BTreeMap<String, Vec<TermJson>>,
}

/// A linear map between tensor powers of one space, extended linearly from
/// its values on basis monomials.
#[derive(Debug, Clone)]
pub enum LinearMap {
    /// Values on every domain monomial, indexed by the flattened key.
    Table {
        dom: usize,
        cod: usize,
        dim: usize,
        table: Vec<Element>,
    },
    Identity(usize),
    /// `f ⊗ g`, acting on the first `f.dom()` slots and the rest.
    Tensor(Box<LinearMap>, Box<LinearMap>),
    /// `f ∘ g`.
    Compose(Box<LinearMap>, Box<LinearMap>),
}

impl LinearMap {
    /// Table-backed map; `table[flat(key)]` is the image of the monomial.
    pub fn from_table(dom: usize, cod: usize, dim: usize, table: Vec<Element>) -> Result<Self> {
        if table.len() != dim.pow(dom as u32) {
            return Err(Error::Malformed(format!(
                "map table has {} entries, domain needs {}",
                table.len(),
                dim.pow(dom as u32)
            )));
        }
        if let Some(e) = table.iter().find(|e| e.arity != cod) {
            return Err(Error::ArityMismatch {
                expected: cod,
                found: e.arity,
            });
        }
        Ok(LinearMap::Table { dom, cod, dim, table })
    }

    /// Tabulates `f` on every basis monomial of the domain.
    pub fn tabulate(dom: usize, cod: usize, dim: usize, f: impl Fn(&[u32]) -> Element + Sync) -> Self {
        let total = dim.pow(dom as u32);
        let table: Vec<Element> = (0..total)
            .into_par_iter()
            .map(|flat| f(&unflatten(flat, dom, dim)))
            .collect();
        LinearMap::Table { dom, cod, dim, table }
    }

    pub fn identity(arity: usize) -> Self {
        LinearMap::Identity(arity)
    }

    /// The flip τ on `V ⊗ V`.
    pub fn flip(field: &'static CyclotomicField, dim: usize) -> Self {
        LinearMap::permutation(field, dim, &[1, 0])
    }

    /// Slot permutation: output slot `i` takes input slot `perm[i]`.
    pub fn permutation(field: &'static CyclotomicField, dim: usize, perm: &[usize]) -> Self {
        let arity = perm.len();
        let table = all_keys(arity, dim)
            .map(|k| {
                let nk: Key = perm.iter().map(|p| k[*p]).collect();
                Element::from_terms(arity, [(nk, field.one())])
            })
            .collect();
        LinearMap::Table {
            dom: arity,
            cod: arity,
            dim,
            table,
        }
    }

    /// The product `m : A ⊗ A → A` as a map.
    pub fn product(alg: &Algebra) -> Self {
        LinearMap::Table {
            dom: 2,
            cod: 1,
            dim: alg.dim(),
            table: alg.table.clone(),
        }
    }

    pub fn dom(&self) -> usize {
        match self {
            LinearMap::Table { dom, .. } => *dom,
            LinearMap::Identity(a) => *a,
            LinearMap::Tensor(f, g) => f.dom() + g.dom(),
            LinearMap::Compose(_, g) => g.dom(),
        }
    }

    pub fn cod(&self) -> usize {
        match self {
            LinearMap::Table { cod, .. } => *cod,
            LinearMap::Identity(a) => *a,
            LinearMap::Tensor(f, g) => f.cod() + g.cod(),
            LinearMap::Compose(f, _) => f.cod(),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(self, inner: LinearMap) -> Result<Self> {
        if self.dom() != inner.cod() {
            return Err(Error::ArityMismatch {
                expected: self.dom(),
                found: inner.cod(),
            });
        }
        Ok(LinearMap::Compose(Box::new(self), Box::new(inner)))
    }

    /// Image of one basis monomial, with coefficient `c`.
    pub fn apply_basis(&self, key: &[u32], c: &Scalar) -> Element {
        match self {
            LinearMap::Table { dim, table, .. } => table[flatten(key, *dim)].scale(c),
            LinearMap::Identity(_) => Element::basis(key, c.clone()),
            LinearMap::Tensor(f, g) => {
                let (a, b) = key.split_at(f.dom());
                let one = c.field().one();
                tensor(&f.apply_basis(a, c), &g.apply_basis(b, &one))
            }
            LinearMap::Compose(f, g) => f.apply_unchecked(&g.apply_basis(key, c)),
        }
    }

    fn apply_unchecked(&self, u: &Element) -> Element {
        let mut r = Element::zero(self.cod());
        for (k, c) in u.terms() {
            for (ik, ic) in self.apply_basis(k, c).terms {
                r.add_term(ik, ic);
            }
        }
        r
    }

    pub fn apply(&self, u: &Element) -> Result<Element> {
        if u.arity() != self.dom() {
            return Err(Error::ArityMismatch {
                expected: self.dom(),
                found: u.arity(),
            });
        }
        Ok(self.apply_unchecked(u))
    }
}

/// `f ⊗ g` (e.g. `1⊗χ`, `m⊗1`).
pub fn map_tensor(f: LinearMap, g: LinearMap) -> LinearMap {
    LinearMap::Tensor(Box::new(f), Box::new(g))
}

pub fn flatten(key: &[u32], dim: usize) -> usize {
    key.iter().fold(0usize, |acc, k| acc * dim + *k as usize)
}

pub fn unflatten(mut flat: usize, arity: usize, dim: usize) -> Key {
    let mut k: Key = SmallVec::from_elem(0, arity);
    for slot in (0..arity).rev() {
        k[slot] = (flat % dim) as u32;
        flat /= dim;
    }
    k
}

/// Every basis monomial of `V^{⊗arity}` in index order.
pub fn all_keys(arity: usize, dim: usize) -> impl Iterator<Item = Key> {
    (0..dim.pow(arity as u32)).map(move |f| unflatten(f, arity, dim))
}

/// Replaces slots `slot, slot + 1` of every monomial by `image(i, j)`, an
/// element of arity `image_arity` (2 for a braiding, 1 for a product).
pub fn apply_to_pair<E: Borrow<Element>>(
    t: &Element,
    slot: usize,
    image_arity: usize,
    image: impl Fn(u32, u32) -> E,
) -> Element {
    assert!(slot + 1 < t.arity);
    let mut r = Element::zero(t.arity - 2 + image_arity);
    for (k, c) in &t.terms {
        let img = image(k[slot], k[slot + 1]);
        let img = img.borrow();
        debug_assert_eq!(img.arity, image_arity);
        for (ik, ic) in &img.terms {
            let mut nk = Key::from_slice(&k[..slot]);
            nk.extend_from_slice(ik);
            nk.extend_from_slice(&k[slot + 2..]);
            r.add_term(nk, c * ic);
        }
    }
    r
}

/// Replaces slot `slot` of every monomial by `image(index)`, an element of
/// arity `image_arity` (0 for a counit, 2 for a coproduct).
pub fn apply_to_slot<E: Borrow<Element>>(
    t: &Element,
    slot: usize,
    image_arity: usize,
    image: impl Fn(u32) -> E,
) -> Element {
    assert!(slot < t.arity);
    let mut r = Element::zero(t.arity - 1 + image_arity);
    for (k, c) in &t.terms {
        let img = image(k[slot]);
        let img = img.borrow();
        debug_assert_eq!(img.arity, image_arity);
        for (ik, ic) in &img.terms {
            let mut nk = Key::from_slice(&k[..slot]);
            nk.extend_from_slice(ik);
            nk.extend_from_slice(&k[slot + 1..]);
            r.add_term(nk, c * ic);
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::field;

    fn line(n: u32) -> Algebra {
        let f = field(n).unwrap();
        let basis = Basis::from_labels((0..n).map(|a| format!("x^{a}")).collect()).unwrap();
        let table = (0..n * n).map(|ij| Element::basis(&[(ij / n + ij % n) % n], f.one())).collect();
        Algebra::new(f, basis, 0, table).unwrap()
    }

    #[test]
    fn display_labels() {
        assert_eq!(display_of_label("x^1 y^0 dx^1 dy^0"), "x dx");
        assert_eq!(display_of_label("x^0 y^0"), "1");
        assert_eq!(display_of_label("Xm^2 K^1 Xp^0"), "Xm^2 K");
        let b = line(3).basis().clone();
        assert_eq!(b.find("x"), Some(1));
        assert_eq!(b.find("x^2"), Some(2));
        assert!(b.index_of("x^7").is_err());
    }

    #[test]
    fn element_arithmetic_and_printing() {
        let alg = line(3);
        let f = alg.field();
        let x = alg.element("x^1").unwrap();
        let e = alg.one().sub(&x.scale(&f.q_pow(2)));
        assert_eq!(e.pretty(alg.basis()), "1 - q^2 * x");
        assert_eq!(alg.mul(&x, &alg.mul(&x, &x)), alg.one());
        assert!(e.sub(&e).is_zero());
        let t = tensor(&x, &alg.one().scale(&(f.one() - f.q())));
        assert_eq!(t.pretty(alg.basis()), "(1-q) x (x) 1");
        assert_eq!(t.flip().pretty(alg.basis()), "(1-q) 1 (x) x");
        assert_eq!(alg.contract(&t, 0), x.scale(&(f.one() - f.q())));
    }

    #[test]
    fn json_round_trip() {
        let alg = line(5);
        let back = Algebra::from_json(alg.field(), &alg.to_json()).unwrap();
        assert_eq!(back.to_json(), alg.to_json());
        let f = alg.field();
        let e = tensor(&alg.element("x^3").unwrap(), &alg.one()).scale(&f.q());
        let j = e.to_json(alg.basis());
        assert_eq!(Element::from_json(f, alg.basis(), 2, &j).unwrap(), e);
    }

    #[test]
    fn maps_compose_and_check_arity() {
        let alg = line(3);
        let f = alg.field();
        let m = LinearMap::product(&alg);
        let t = LinearMap::flip(f, 3);
        assert!(LinearMap::flip(f, 3).compose(LinearMap::product(&alg)).is_err());
        let mt = m.compose(t).unwrap();
        let u = tensor(&alg.element("x^1").unwrap(), &alg.element("x^2").unwrap());
        assert_eq!(mt.apply(&u).unwrap(), alg.one());
        assert!(mt.apply(&alg.one()).is_err());
        assert!(LinearMap::from_table(1, 1, 3, vec![]).is_err());
    }

    #[test]
    fn non_associative_table_is_rejected() {
        let f = field(3).unwrap();
        let basis = Basis::from_labels(vec!["e".into(), "a".into(), "b".into()]).unwrap();
        let e = |i: u32| Element::basis(&[i], f.one());
        // a·a = b, b·a = a, a·b = b·b = 0: (aa)a = a but a(aa) = 0
        let table = vec![e(0), e(1), e(2), e(1), e(2), Element::zero(1), e(2), e(1), Element::zero(1)];
        assert!(matches!(Algebra::new(f, basis, 0, table), Err(Error::AxiomViolation(_))));
    }
}
