//! Module-algebras over a Hopf algebra, the reduced quantum plane and its
//! extension by q-difference operators.
//!
//! The extended plane is realised as operators on the plane: coordinates act
//! by left multiplication and derivatives as twisted q-difference operators.
//! At N = 3 the N⁴ operator monomials span all of End(A₀), so the algebra is
//! read off by composing matrices and re-expanding in the monomial basis.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::braided::Braiding;
use crate::cyclotomic::{field, CyclotomicField, Rational, Scalar};
use crate::error::{Error, Result};
use crate::fixtures::{self, ChiFixture};
use crate::hopf::HopfData;
use crate::linalg::{Echelon, Matrix, SparseRow};
use crate::report::{mismatch, Report};
use crate::rewrite::RewriteSystem;
use crate::tensor::{parse_pair, tensor, Algebra, AlgebraJson, Basis, Element, Key, TermJson};
use crate::uqsl2::{self, build_uqsl2};

/// An algebra with a left action of a Hopf algebra.
#[derive(Debug, Clone)]
pub struct ModuleAlgebra {
    hopf: Arc<HopfData>,
    algebra: Algebra,
    /// `action[h * dim + a] = h ▷ a`.
    action: Vec<Element>,
    /// H-basis indices whose action is swept by the generator checks.
    generators: Vec<u32>,
}

impl ModuleAlgebra {
    /// Shape checks only; the laws are verified by [`check_module_algebra`].
    pub fn new(hopf: Arc<HopfData>, algebra: Algebra, action: Vec<Element>, generators: Vec<u32>) -> Result<Self> {
        if !std::ptr::eq(hopf.field(), algebra.field()) {
            return Err(Error::FieldMismatch(hopf.order(), algebra.field().order()));
        }
        if action.len() != hopf.dim() * algebra.dim() {
            return Err(Error::Malformed(format!(
                "action table has {} entries, expected {}",
                action.len(),
                hopf.dim() * algebra.dim()
            )));
        }
        if let Some(e) = action.iter().find(|e| e.arity() != 1) {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: e.arity(),
            });
        }
        if generators.iter().any(|g| *g as usize >= hopf.dim()) {
            return Err(Error::Malformed("generator index out of range".into()));
        }
        Ok(ModuleAlgebra {
            hopf,
            algebra,
            action,
            generators,
        })
    }

    /// Extends an action on generating letters to every basis monomial by
    /// `h ▷ (l·w) = (h₁ ▷ l)(h₂ ▷ w)`.
    ///
    /// `words[a]` spells basis element `a` as a product of letters (positions
    /// into `letters`), such that stripping the first letter leaves another
    /// basis element; `letter_action[h * letters.len() + l] = h ▷ letter_l`.
    pub fn from_letters(
        hopf: Arc<HopfData>,
        algebra: Algebra,
        words: &[Vec<usize>],
        letters: &[u32],
        letter_action: &[Element],
        generators: Vec<u32>,
    ) -> Result<Self> {
        let nh = hopf.dim();
        let na = algebra.dim();
        let nl = letters.len();
        if words.len() != na || letter_action.len() != nh * nl {
            return Err(Error::Malformed("letter data does not match the bases".into()));
        }
        let index: HashMap<&[usize], u32> = words.iter().enumerate().map(|(i, w)| (&w[..], i as u32)).collect();
        let mut order: Vec<u32> = (0..na as u32).collect();
        order.sort_by_key(|a| words[*a as usize].len());
        let one = algebra.one();
        let mut action = vec![Element::zero(1); nh * na];
        for a in order {
            let w = &words[a as usize];
            if w.is_empty() {
                if a != algebra.unit() {
                    return Err(Error::Malformed("only the unit may be spelled by the empty word".into()));
                }
                for h in 0..nh {
                    action[h * na + a as usize] = one.scale(hopf.counit_basis(h as u32));
                }
                continue;
            }
            let rest = *index
                .get(&w[1..])
                .ok_or_else(|| Error::Malformed(format!("suffix of `{}` is not a basis word", algebra.basis().label(a))))?;
            let l = w[0];
            let letter = algebra.basis_element(letters[l]);
            if algebra.mul(&letter, &algebra.basis_element(rest)) != algebra.basis_element(a) {
                return Err(Error::Malformed(format!(
                    "word for `{}` does not multiply out to it",
                    algebra.basis().label(a)
                )));
            }
            for h in 0..nh {
                let mut acc = Element::zero(1);
                for (k, c) in hopf.coproduct_basis(h as u32).terms() {
                    let left = &letter_action[k[0] as usize * nl + l];
                    let right = &action[k[1] as usize * na + rest as usize];
                    if !left.is_zero() && !right.is_zero() {
                        acc.add_scaled(c, &algebra.mul(left, right));
                    }
                }
                action[h * na + a as usize] = acc;
            }
        }
        ModuleAlgebra::new(hopf, algebra, action, generators)
    }

    pub fn hopf(&self) -> &Arc<HopfData> {
        &self.hopf
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn field(&self) -> &'static CyclotomicField {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn basis(&self) -> &Basis {
        self.algebra.basis()
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn action_table(&self) -> &[Element] {
        &self.action
    }

    /// A copy with a replaced action table (used for negative controls).
    pub fn with_action(&self, action: Vec<Element>) -> Result<Self> {
        ModuleAlgebra::new(self.hopf.clone(), self.algebra.clone(), action, self.generators.clone())
    }

    pub fn act_basis(&self, h: u32, a: u32) -> &Element {
        &self.action[h as usize * self.dim() + a as usize]
    }

    /// `h ▷ a` for degree-1 elements of H and A.
    pub fn act(&self, h: &Element, a: &Element) -> Element {
        let mut r = Element::zero(1);
        for (kh, ch) in h.terms() {
            for (ka, ca) in a.terms() {
                r.add_scaled(&(ch * ca), self.act_basis(kh[0], ka[0]));
            }
        }
        r
    }

    /// Slot-wise action of a tensor over H on a tensor over A of equal arity.
    pub fn act_tensor(&self, h: &Element, t: &Element) -> Element {
        assert_eq!(h.arity(), t.arity());
        let mut r = Element::zero(t.arity());
        for (kh, ch) in h.terms() {
            for (kt, ct) in t.terms() {
                let mut acc = Element::basis(&[], ch * ct);
                for (hs, ts) in kh.iter().zip(kt.iter()) {
                    let img = self.act_basis(*hs, *ts);
                    if img.is_zero() {
                        acc = Element::zero(0);
                        break;
                    }
                    acc = tensor(&acc, img);
                }
                if !acc.is_zero() {
                    r.add_scaled(&self.field().one(), &acc);
                }
            }
        }
        r
    }

    /// The action of `h` as a matrix on A (column `a` holds `h ▷ e_a`).
    pub fn matrix_of(&self, h: &Element) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(self.field(), n, n);
        for a in 0..n as u32 {
            for (k, c) in self.act(h, &self.algebra.basis_element(a)).terms() {
                m.set(k[0] as usize, a as usize, c.clone());
            }
        }
        m
    }

    pub fn to_json(&self) -> ModuleJson {
        let na = self.dim();
        let mut action = BTreeMap::new();
        for (i, e) in self.action.iter().enumerate() {
            if !e.is_zero() {
                action.insert(format!("{},{}", i / na, i % na), e.to_json(self.basis()));
            }
        }
        ModuleJson {
            order: self.field().order(),
            algebra: self.algebra.to_json(),
            hopf_basis: self.hopf.basis().labels().to_vec(),
            generators: self
                .generators
                .iter()
                .map(|g| self.hopf.basis().label(*g).to_string())
                .collect(),
            action,
        }
    }

    /// Rebuilds a module-algebra over a given Hopf algebra and verifies it.
    pub fn from_json(hopf: Arc<HopfData>, j: &ModuleJson) -> Result<Self> {
        let f = field(j.order)?;
        if hopf.basis().labels() != &j.hopf_basis[..] {
            return Err(Error::Malformed("Hopf basis does not match the supplied Hopf algebra".into()));
        }
        let algebra = Algebra::from_json(f, &j.algebra)?;
        let (nh, na) = (hopf.dim(), algebra.dim());
        let mut action = vec![Element::zero(1); nh * na];
        for (k, terms) in &j.action {
            let (h, a) = parse_pair(k, nh.max(na))?;
            if h >= nh || a >= na {
                return Err(Error::Malformed(format!("action index `{k}` out of range")));
            }
            action[h * na + a] = Element::from_json(f, algebra.basis(), 1, terms)?;
        }
        let generators = j
            .generators
            .iter()
            .map(|g| hopf.basis().index_of(g))
            .collect::<Result<_>>()?;
        let m = ModuleAlgebra::new(hopf, algebra, action, generators)?;
        require_pass(&check_module_algebra(&m))?;
        Ok(m)
    }
}

/// JSON form of a [`ModuleAlgebra`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub order: u32,
    pub algebra: AlgebraJson,
    pub hopf_basis: Vec<String>,
    pub generators: Vec<String>,
    pub action: BTreeMap<String, Vec<TermJson>>,
}

pub(crate) fn require_pass(reports: &[Report]) -> Result<()> {
    match reports.iter().find(|r| !r.passed()) {
        None => Ok(()),
        Some(r) => Err(Error::AxiomViolation(r.to_string())),
    }
}

/// Unit, module and module-algebra laws.
pub fn check_module_algebra(m: &ModuleAlgebra) -> Vec<Report> {
    let h = m.hopf();
    let alg = m.algebra();
    let hb = h.basis();
    let ab = alg.basis();
    let (nh, na) = (h.dim() as u32, alg.dim() as u32);
    let show = |e: &Element| e.pretty(ab);
    let hname = |i: u32| hb.display(i).to_string();
    let aname = |i: u32| ab.display(i).to_string();
    let hunit = h.algebra().unit();
    let mut out = Vec::new();

    let mut cases: Vec<(bool, u32)> = (0..na).map(|a| (true, a)).collect();
    cases.extend((0..nh).map(|g| (false, g)));
    out.push(Report::sweep("action unit laws", cases, |&(by_unit, i)| {
        if by_unit {
            mismatch(|| vec!["1".into(), aname(i)], m.act_basis(hunit, i), &alg.basis_element(i), show)
        } else {
            let rhs = alg.one().scale(h.counit_basis(i));
            mismatch(|| vec![hname(i), "1".into()], m.act_basis(i, alg.unit()), &rhs, show)
        }
    }));

    let triples: Vec<(u32, u32, u32)> = (0..nh)
        .flat_map(|x| (0..nh).flat_map(move |y| (0..na).map(move |a| (x, y, a))))
        .collect();
    out.push(Report::sweep("module law", triples, |&(x, y, a)| {
        let lhs = m.act(h.algebra().mul_basis(x, y), &alg.basis_element(a));
        let rhs = m.act(&h.algebra().basis_element(x), m.act_basis(y, a));
        mismatch(|| vec![hname(x), hname(y), aname(a)], &lhs, &rhs, show)
    }));

    let gen_pairs: Vec<(u32, u32, u32)> = m
        .generators()
        .iter()
        .flat_map(|g| (0..na).flat_map(move |a| (0..na).map(move |b| (*g, a, b))))
        .collect();
    out.push(Report::sweep("module-algebra law", gen_pairs, |&(g, a, b)| {
        let lhs = m.act(&h.algebra().basis_element(g), alg.mul_basis(a, b));
        let t = m.act_tensor(h.coproduct_basis(g), &Element::basis(&[a, b], m.field().one()));
        let rhs = alg.contract(&t, 0);
        mismatch(|| vec![hname(g), aname(a), aname(b)], &lhs, &rhs, show)
    }));
    out
}

/// Matrices of the generators on a span of letters (column = image).
#[derive(Debug, Clone)]
pub struct LetterRep {
    pub k: Matrix,
    pub xp: Matrix,
    pub xm: Matrix,
}

impl LetterRep {
    /// The matrix of the PBW element `Xm^a K^b Xp^c`.
    pub fn pbw(&self, a: u32, b: u32, c: u32) -> Matrix {
        self.xm.pow(a).mul(&self.k.pow(b)).mul(&self.xp.pow(c))
    }

    /// Direct sum with another representation.
    pub fn direct_sum(&self, other: &LetterRep) -> LetterRep {
        let sum = |a: &Matrix, b: &Matrix| {
            let (n, m) = (a.rows(), b.rows());
            let f = a.field();
            Matrix::from_fn(n + m, n + m, |i, j| match (i < n, j < n) {
                (true, true) => a.get(i, j).clone(),
                (false, false) => b.get(i - n, j - n).clone(),
                _ => f.zero(),
            })
        };
        LetterRep {
            k: sum(&self.k, &other.k),
            xp: sum(&self.xp, &other.xp),
            xm: sum(&self.xm, &other.xm),
        }
    }
}

/// `h ▷ letter` for every PBW basis element, as elements of `alg`.
fn letter_action_table(hopf: &HopfData, rep: &LetterRep, alg: &Algebra, letters: &[u32]) -> Vec<Element> {
    let n = hopf.order();
    let f = alg.field();
    let nl = letters.len();
    let mut out = Vec::with_capacity(hopf.dim() * nl);
    for h in 0..hopf.dim() as u32 {
        let (a, b, c) = (h / (n * n), (h / n) % n, h % n);
        let m = rep.pbw(a, b, c);
        for l in 0..nl {
            let mut e = Element::zero(1);
            for (r, letter) in letters.iter().enumerate() {
                let v = m.get(r, l);
                if !v.is_zero() {
                    e.add_term(Key::from_slice(&[*letter]), v.clone());
                }
            }
            debug_assert!(e.terms().all(|(_, c)| std::ptr::eq(c.field(), f)));
            out.push(e);
        }
    }
    out
}

/// The two-dimensional representation on the coordinates `x, y`:
/// `K ▷ x = q x`, `K ▷ y = q⁻¹ y`, `Xp ▷ y = x`, `Xm ▷ x = y`.
pub fn coordinate_rep(f: &'static CyclotomicField) -> LetterRep {
    let z = f.zero();
    let o = f.one();
    LetterRep {
        k: Matrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => f.q(),
            (1, 1) => f.q_pow(-1),
            _ => z.clone(),
        }),
        xp: Matrix::from_fn(2, 2, |i, j| if (i, j) == (0, 1) { o.clone() } else { z.clone() }),
        xm: Matrix::from_fn(2, 2, |i, j| if (i, j) == (1, 0) { o.clone() } else { z.clone() }),
    }
}

pub fn plane_label(a: u32, b: u32) -> String {
    format!("x^{a} y^{b}")
}

pub fn extended_label(a: u32, b: u32, c: u32, d: u32) -> String {
    format!("x^{a} y^{b} dx^{c} dy^{d}")
}

/// The reduced quantum plane `x y = q y x`, `x^N = y^N = 1` as an algebra.
pub fn plane_algebra(order: u32) -> Result<Algebra> {
    let f = field(order)?;
    let mut rs = RewriteSystem::new(f, vec![order, order], vec![vec![(f.one(), vec![])], vec![(f.one(), vec![])]]);
    rs.exchange(1, 0, vec![(f.q_pow(-1), vec![0, 1])]);
    let labels = (0..rs.dim() as u32)
        .map(|i| {
            let e = rs.exponents(i);
            plane_label(e[0], e[1])
        })
        .collect();
    Algebra::new(f, Basis::from_labels(labels)?, 0, rs.product_table())
}

fn plane_words(order: u32) -> Vec<Vec<usize>> {
    (0..order * order)
        .map(|i| {
            let (a, b) = (i / order, i % order);
            std::iter::repeat_n(0, a as usize).chain(std::iter::repeat_n(1, b as usize)).collect()
        })
        .collect()
}

fn scalar_of(f: &'static CyclotomicField, coeffs: &[i64]) -> Scalar {
    let c: Vec<Rational> = coeffs.iter().map(|c| Rational::from_integer(*c as i128)).collect();
    f.from_coeffs(&c)
}

fn named(alg: &Algebra, name: &str) -> Result<Element> {
    alg.basis()
        .find(name)
        .map(|i| alg.basis_element(i))
        .ok_or_else(|| Error::UnknownLabel(name.to_string()))
}

/// The expected braiding of a fixture as an element of `alg ⊗ alg`.
pub fn chi_fixture_element(alg: &Algebra, fx: &ChiFixture) -> Result<Element> {
    let f = alg.field();
    let mut e = Element::zero(2);
    for (c, l, r) in fx.terms {
        e.add_scaled(&scalar_of(f, c), &tensor(&named(alg, l)?, &named(alg, r)?));
    }
    Ok(e)
}

/// Expected value of a commutator fixture.
pub fn commutator_fixture_element(alg: &Algebra, fx: &fixtures::CommutatorFixture) -> Result<Element> {
    let f = alg.field();
    let mut e = Element::zero(1);
    for (c, m) in fx.terms {
        e.add_scaled(&scalar_of(f, c), &named(alg, m)?);
    }
    Ok(e)
}

/// Compares the braiding with fixtures; returns the first mismatch.
fn check_chi_fixtures<'a>(
    b: &Braiding,
    items: impl IntoIterator<Item = &'a ChiFixture>,
) -> Result<Option<(String, String, String)>> {
    let alg = b.module().algebra();
    for fx in items {
        let t = tensor(&named(alg, fx.left)?, &named(alg, fx.right)?);
        let got = b.chi(&t);
        let want = chi_fixture_element(alg, fx)?;
        if got != want {
            return Ok(Some((
                format!("chi({}, {})", fx.left, fx.right),
                got.pretty(alg.basis()),
                want.pretty(alg.basis()),
            )));
        }
    }
    Ok(None)
}

fn uqsl2_hopf(order: u32) -> Result<Arc<HopfData>> {
    Ok(Arc::new(build_uqsl2(order)?))
}

/// The quantum plane over the reduced quantum group, with the coordinate
/// braiding checked against the reference table at N = 3.
pub fn build_qplane(order: u32) -> Result<ModuleAlgebra> {
    build_qplane_over(uqsl2_hopf(order)?)
}

pub fn build_qplane_over(hopf: Arc<HopfData>) -> Result<ModuleAlgebra> {
    let order = hopf.order();
    let f = hopf.field();
    let alg = plane_algebra(order)?;
    let letters = [alg.basis().index_of(&plane_label(1, 0))?, alg.basis().index_of(&plane_label(0, 1))?];
    let la = letter_action_table(&hopf, &coordinate_rep(f), &alg, &letters);
    let gens = uqsl2::generator_indices(hopf.algebra())?;
    let m = ModuleAlgebra::from_letters(hopf.clone(), alg, &plane_words(order), &letters, &la, gens)?;
    require_pass(&check_module_algebra(&m))?;
    if hopf.qt().is_some() && order == 3 {
        let b = Braiding::new(Arc::new(m.clone()))?;
        if let Some((at, got, want)) = check_chi_fixtures(&b, fixtures::COORDINATE_CHI.iter())? {
            return Err(Error::ConventionMismatch(format!(
                "coordinate action gives {at} = {got}, expected {want}"
            )));
        }
    }
    Ok(m)
}

/// Exponents of the q-difference operators
/// `∂x(x^a y^b) = [a]_{q^e} q^{s·b} x^{a-1} y^b`,
/// `∂y(x^a y^b) = [b]_{q^e} q^{t·a} x^a y^{b-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DerivativeModel {
    pub base: i64,
    pub x_twist: i64,
    pub y_twist: i64,
}

impl DerivativeModel {
    /// The candidates searched, in order.
    pub fn candidates() -> Vec<DerivativeModel> {
        let range = [-1i64, 0, 1, 2];
        let mut out = Vec::new();
        for base in [1i64, 2] {
            for s in range {
                for t in range {
                    out.push(DerivativeModel {
                        base,
                        x_twist: s,
                        y_twist: t,
                    });
                }
            }
        }
        out
    }

    /// Exponents reduced modulo N.
    pub fn reduced(&self, order: u32) -> DerivativeModel {
        let n = order as i64;
        DerivativeModel {
            base: self.base.rem_euclid(n),
            x_twist: self.x_twist.rem_euclid(n),
            y_twist: self.y_twist.rem_euclid(n),
        }
    }

    /// `(∂x, ∂y)` as matrices on the plane basis.
    pub fn operators(&self, plane: &Algebra) -> (Matrix, Matrix) {
        let f = plane.field();
        let n = f.order();
        let dim = (n * n) as usize;
        let mut dx = Matrix::zeros(f, dim, dim);
        let mut dy = Matrix::zeros(f, dim, dim);
        for a in 0..n {
            for b in 0..n {
                let src = (a * n + b) as usize;
                if a > 0 {
                    let c = f.q_integer(a, self.base) * f.q_pow(self.x_twist * b as i64);
                    dx.set(((a - 1) * n + b) as usize, src, c);
                }
                if b > 0 {
                    let c = f.q_integer(b, self.base) * f.q_pow(self.y_twist * a as i64);
                    dy.set((a * n + b - 1) as usize, src, c);
                }
            }
        }
        (dx, dy)
    }
}

/// Operator monomials `x^a y^b ∂x^c ∂y^d` on the plane and the coordinate
/// map back from End(A₀).
#[derive(Debug, Clone)]
pub struct OperatorSpace {
    side: usize,
    monomials: Vec<Matrix>,
    /// For each matrix position `r * side + c`, the coordinates of the
    /// elementary matrix `E_rc` in the monomial basis.
    inverse_columns: Vec<Vec<(u32, Scalar)>>,
}

impl OperatorSpace {
    pub fn new(plane: &Algebra, model: DerivativeModel) -> Result<Self> {
        let f = plane.field();
        let n = f.order();
        let side = plane.dim();
        let left = |name: &str| -> Result<Matrix> {
            let e = plane.element(name)?;
            Ok(Matrix::from_fn(side, side, |r, c| {
                plane
                    .mul(&e, &plane.basis_element(c as u32))
                    .coeff(&[r as u32])
                    .cloned()
                    .unwrap_or_else(|| f.zero())
            }))
        };
        let lx = left(&plane_label(1, 0))?;
        let ly = left(&plane_label(0, 1))?;
        let (dx, dy) = model.operators(plane);
        let mut monomials = Vec::with_capacity(side * side);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        monomials.push(lx.pow(a).mul(&ly.pow(b)).mul(&dx.pow(c)).mul(&dy.pow(d)));
                    }
                }
            }
        }
        let total = side * side;
        let basis_matrix = Matrix::from_fn(total, total, |pos, m| monomials[m].get(pos / side, pos % side).clone());
        let inv = basis_matrix
            .inverse()
            .map_err(|_| Error::NotInvertible("operator monomials do not span End(A0)".into()))?;
        let inverse_columns = (0..total)
            .map(|pos| {
                (0..total)
                    .filter(|m| !inv.get(*m, pos).is_zero())
                    .map(|m| (m as u32, inv.get(m, pos).clone()))
                    .collect()
            })
            .collect();
        Ok(OperatorSpace {
            side,
            monomials,
            inverse_columns,
        })
    }

    pub fn monomial(&self, i: u32) -> &Matrix {
        &self.monomials[i as usize]
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    /// Expands an operator in the monomial basis.
    pub fn coordinates(&self, t: &Matrix) -> Element {
        let mut e = Element::zero(1);
        for r in 0..self.side {
            for c in 0..self.side {
                let v = t.get(r, c);
                if v.is_zero() {
                    continue;
                }
                for (m, w) in &self.inverse_columns[r * self.side + c] {
                    e.add_term(Key::from_slice(&[*m]), v * w);
                }
            }
        }
        e
    }

    /// The operator of an element.
    pub fn operator(&self, e: &Element) -> Matrix {
        let f = self.monomials[0].field();
        let mut m = Matrix::zeros(f, self.side, self.side);
        for (k, c) in e.terms() {
            m = m.add(&self.monomials[k[0] as usize].scale(c));
        }
        m
    }

    /// Structure constants of the operator algebra.
    pub fn product_table(&self) -> Vec<Element> {
        use rayon::prelude::*;
        let n = self.dim();
        (0..n * n)
            .into_par_iter()
            .map(|ij| self.coordinates(&self.monomials[ij / n].mul(&self.monomials[ij % n])))
            .collect()
    }
}

fn extended_words(order: u32) -> Vec<Vec<usize>> {
    let n = order as usize;
    (0..n.pow(4))
        .map(|i| {
            let e = [i / n.pow(3), (i / (n * n)) % n, (i / n) % n, i % n];
            e.iter()
                .enumerate()
                .flat_map(|(l, k)| std::iter::repeat_n(l, *k))
                .collect()
        })
        .collect()
}

/// Evaluates the reference commutators as operator identities, taking the
/// braidings they need from the reference table.
fn model_matches_commutators(space: &OperatorSpace, alg: &Algebra) -> Result<bool> {
    for cf in fixtures::COMMUTATORS.iter() {
        let Some(chi) = fixtures::all_chi().find(|c| c.left == cf.left && c.right == cf.right) else {
            return Err(Error::Malformed(format!("no braiding fixture for [{}, {}]", cf.left, cf.right)));
        };
        let op = |name: &str| -> Result<Matrix> { Ok(space.operator(&named(alg, name)?)) };
        let mut lhs = op(cf.left)?.mul(&op(cf.right)?);
        for (c, l, r) in chi.terms {
            let t = op(l)?.mul(&op(r)?).scale(&scalar_of(alg.field(), c));
            lhs = lhs.sub(&t);
        }
        let rhs = space.operator(&commutator_fixture_element(alg, cf)?);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

fn extended_algebra(plane: &Algebra, model: DerivativeModel) -> Result<(Algebra, OperatorSpace)> {
    let f = plane.field();
    let n = f.order();
    let space = OperatorSpace::new(plane, model)?;
    let mut labels = Vec::with_capacity(space.dim());
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    labels.push(extended_label(a, b, c, d));
                }
            }
        }
    }
    let alg = Algebra::new_unchecked(f, Basis::from_labels(labels)?, 0, space.product_table())?;
    Ok((alg, space))
}

/// Picks the derivative model from the candidate list: the operator span
/// must be all of End(A₀) and the reference commutators must hold. All
/// passing candidates must agree as operators.
pub fn select_derivative_model(plane: &Algebra) -> Result<(DerivativeModel, Algebra, OperatorSpace)> {
    let order = plane.field().order();
    let mut chosen: Option<(DerivativeModel, Algebra, OperatorSpace)> = None;
    for cand in DerivativeModel::candidates() {
        let Ok((alg, space)) = extended_algebra(plane, cand) else {
            continue;
        };
        if !model_matches_commutators(&space, &alg)? {
            continue;
        }
        match &chosen {
            None => chosen = Some((cand.reduced(order), alg, space)),
            Some((_, _, s)) => {
                let same = (0..s.dim() as u32).all(|i| s.monomial(i) == space.monomial(i));
                if !same {
                    return Err(Error::ConventionMismatch(
                        "several inequivalent derivative models fit the reference commutators".into(),
                    ));
                }
            }
        }
    }
    chosen.ok_or_else(|| Error::ConventionMismatch("no derivative model fits the reference commutators".into()))
}

/// The adjoint action `h ▷ T = ρ(h₁) T ρ(S h₂)` on operators.
pub fn adjoint_action(plane: &ModuleAlgebra, space: &OperatorSpace) -> Vec<Element> {
    use rayon::prelude::*;
    let h = plane.hopf();
    let halg = h.algebra();
    let rho: Vec<Matrix> = (0..h.dim() as u32)
        .map(|i| plane.matrix_of(&halg.basis_element(i)))
        .collect();
    let rho_s: Vec<Matrix> = (0..h.dim() as u32)
        .map(|i| plane.matrix_of(h.antipode_basis(i)))
        .collect();
    let ne = space.dim();
    (0..h.dim() * ne)
        .into_par_iter()
        .map(|idx| {
            let (hi, ei) = ((idx / ne) as u32, (idx % ne) as u32);
            let t = space.monomial(ei);
            let f = t.field();
            let mut acc = Matrix::zeros(f, t.rows(), t.cols());
            for (k, c) in h.coproduct_basis(hi).terms() {
                let m = rho[k[0] as usize].mul(t).mul(&rho_s[k[1] as usize]).scale(c);
                acc = acc.add(&m);
            }
            space.coordinates(&acc)
        })
        .collect()
}

/// Solution of the derivative action for one choice of K-weights.
#[derive(Debug, Clone)]
struct DerivativeAction {
    weights: [i64; 2],
    rep: LetterRep,
}

/// Linear-form term of `r ▷ ∂_i` for a PBW element `r`: pairs of resulting
/// derivative letter and its coefficient as a form over 8 unknowns (the
/// entries of `Xp` then `Xm` on span{∂x, ∂y}) plus a constant at column 8.
fn linear_derivative_image(
    f: &'static CyclotomicField,
    order: u32,
    r: u32,
    i: usize,
    weights: [i64; 2],
) -> Option<Vec<(usize, SparseRow)>> {
    let (m, k, p) = (r / (order * order), ((r / order) % order) as i64, r % order);
    let kw = |l: usize| f.q_pow(k * weights[l]);
    match (m, p) {
        (0, 0) => Some(vec![(i, SparseRow::from([(8, kw(i))]))]),
        (0, 1) => Some((0..2).map(|l| (l, SparseRow::from([(l * 2 + i, kw(l))]))).collect()),
        (1, 0) => Some((0..2).map(|l| (l, SparseRow::from([(4 + l * 2 + i, kw(i))]))).collect()),
        _ => None,
    }
}

fn add_form(into: &mut SparseRow, form: &SparseRow, c: &Scalar) {
    for (col, v) in form {
        let t = c * v;
        let e = into.entry(*col).or_insert_with(|| c.field().zero());
        *e += &t;
        if e.is_zero() {
            into.remove(col);
        }
    }
}

/// Solves the derivative action from the eight mixed braiding fixtures for
/// the given K-weights; `None` if the system is inconsistent.
fn solve_derivative_action(
    hopf: &HopfData,
    coords: &LetterRep,
    alg: &Algebra,
    weights: [i64; 2],
) -> Result<Option<DerivativeAction>> {
    let f = alg.field();
    let order = f.order();
    let r = hopf.require_qt()?.r();
    let coordinate = [named(alg, "x")?, named(alg, "y")?];
    let derivative = [named(alg, "dx")?, named(alg, "dy")?];
    let ckey = |e: &Element| e.terms().next().unwrap().0[0];
    let dkeys = [ckey(&derivative[0]), ckey(&derivative[1])];
    let coordinate_image = |h: u32, j: usize| -> Element {
        let (a, b, c) = (h / (order * order), (h / order) % order, h % order);
        let m = coords.pbw(a, b, c);
        let mut e = Element::zero(1);
        for (row, x) in coordinate.iter().enumerate() {
            e.add_scaled(m.get(row, j), x);
        }
        e
    };
    let which = |name: &str| -> Option<(bool, usize)> {
        match name {
            "x" => Some((true, 0)),
            "y" => Some((true, 1)),
            "dx" => Some((false, 0)),
            "dy" => Some((false, 1)),
            _ => None,
        }
    };
    let mut ech = Echelon::new(f, 8);
    for fx in fixtures::DERIVATIVE_CHI.iter() {
        let (Some(lw), Some(rw)) = (which(fx.left), which(fx.right)) else {
            return Err(Error::Malformed("unknown fixture letter".into()));
        };
        if lw.0 == rw.0 {
            continue; // both derivatives: checked after solving
        }
        let mut acc: BTreeMap<Key, SparseRow> = BTreeMap::new();
        for (key, c) in r.terms() {
            let (r1, r2) = (key[0], key[1]);
            // χ(a⊗b) = (R₂ ▷ b) ⊗ (R₁ ▷ a)
            let (known, known_first, r_lin, d) = if lw.0 {
                (coordinate_image(r1, lw.1), false, r2, rw.1)
            } else {
                (coordinate_image(r2, rw.1), true, r1, lw.1)
            };
            if known.is_zero() {
                continue;
            }
            let lin = linear_derivative_image(f, order, r_lin, d, weights).ok_or_else(|| {
                Error::Precondition("derivative action enters the braiding non-linearly".into())
            })?;
            for (kk, kc) in known.terms() {
                for (l, form) in &lin {
                    let key = if known_first {
                        Key::from_slice(&[kk[0], dkeys[*l]])
                    } else {
                        Key::from_slice(&[dkeys[*l], kk[0]])
                    };
                    add_form(acc.entry(key).or_default(), form, &(c * kc));
                }
            }
        }
        let want = chi_fixture_element(alg, fx)?;
        let mut keys: Vec<Key> = acc.keys().cloned().collect();
        keys.extend(want.terms().map(|(k, _)| k.clone()));
        keys.sort();
        keys.dedup();
        for k in keys {
            let mut row = acc.remove(&k).unwrap_or_default();
            let constant = row.remove(&8).unwrap_or_else(|| f.zero());
            let target = want.coeff(&k).cloned().unwrap_or_else(|| f.zero());
            let rhs = &target - &constant;
            if !rhs.is_zero() {
                row.insert(8, rhs);
            }
            ech.insert(row);
        }
    }
    if !ech.is_consistent() {
        return Ok(None);
    }
    let x = ech.solve()?;
    let mat = |off: usize| Matrix::from_fn(2, 2, |l, i| x[off + l * 2 + i].clone());
    let k = Matrix::from_fn(2, 2, |i, j| if i == j { f.q_pow(weights[i]) } else { f.zero() });
    Ok(Some(DerivativeAction {
        weights,
        rep: LetterRep {
            k,
            xp: mat(0),
            xm: mat(4),
        },
    }))
}

/// Candidate outcome of the derivative-action solve.
#[derive(Debug, Clone)]
pub struct ActionTrial {
    pub weights: [i64; 2],
    pub solvable: bool,
    pub fixtures_hold: bool,
}

/// The derivative-extended quantum plane.
#[derive(Debug, Clone)]
pub struct ExtendedPlane {
    pub module: ModuleAlgebra,
    pub plane: ModuleAlgebra,
    pub model: DerivativeModel,
    pub space: OperatorSpace,
    /// Generator matrices on span{∂x, ∂y}, when solved from the braiding.
    pub derivative_rep: Option<LetterRep>,
    pub trials: Vec<ActionTrial>,
}

impl ExtendedPlane {
    /// The derivative model is selected from the reference commutators and
    /// the derivative action is solved from the reference braiding; every
    /// braiding fixture must then hold. Only N = 3 is supported: at N = 5
    /// the extension already has dimension 625.
    pub fn build(order: u32) -> Result<Self> {
        if order != 3 {
            return Err(Error::UnsupportedOrder {
                what: "the derivative extension",
                order,
            });
        }
        let plane = build_qplane(order)?;
        Self::build_over(plane)
    }

    pub fn build_over(plane: ModuleAlgebra) -> Result<Self> {
        let order = plane.field().order();
        if order != 3 {
            return Err(Error::UnsupportedOrder {
                what: "the derivative extension",
                order,
            });
        }
        let hopf = plane.hopf().clone();
        let gens = plane.generators().to_vec();
        let (model, alg, space) = select_derivative_model(plane.algebra())?;
        alg.verify()?;
        let f = alg.field();
        let letters: Vec<u32> = ["x", "y", "dx", "dy"]
            .iter()
            .map(|n| alg.basis().find(n).ok_or_else(|| Error::UnknownLabel(n.to_string())))
            .collect::<Result<_>>()?;
        let coords = coordinate_rep(f);
        let words = extended_words(order);
        let mut trials = Vec::new();
        let mut found: Vec<(ModuleAlgebra, LetterRep)> = Vec::new();
        for wx in 0..order as i64 {
            for wy in 0..order as i64 {
                let weights = [wx, wy];
                let Some(sol) = solve_derivative_action(&hopf, &coords, &alg, weights)? else {
                    trials.push(ActionTrial {
                        weights,
                        solvable: false,
                        fixtures_hold: false,
                    });
                    continue;
                };
                let rep = coords.direct_sum(&sol.rep);
                let la = letter_action_table(&hopf, &rep, &alg, &letters);
                let module = ModuleAlgebra::from_letters(hopf.clone(), alg.clone(), &words, &letters, &la, gens.clone())?;
                let braiding = Braiding::new(Arc::new(module.clone()))?;
                let ok = check_chi_fixtures(&braiding, fixtures::all_chi())?.is_none();
                trials.push(ActionTrial {
                    weights: sol.weights,
                    solvable: true,
                    fixtures_hold: ok,
                });
                if ok {
                    found.push((module, sol.rep));
                }
            }
        }
        if found.len() != 1 {
            return Err(Error::ConventionMismatch(format!(
                "{} derivative actions reproduce the braiding table, expected exactly one",
                found.len()
            )));
        }
        let (module, rep) = found.pop().unwrap();
        require_pass(&check_module_algebra(&module))?;
        Ok(ExtendedPlane {
            module,
            plane,
            model,
            space,
            derivative_rep: Some(rep),
            trials,
        })
    }
}

/// The 3×3 (generally N×N) matrices `x = diag(1, q⁻¹, q⁻², …)` and the
/// cyclic shift `y`.
pub fn matrix_rep(order: u32) -> Result<(Matrix, Matrix)> {
    let f = field(order)?;
    let n = order as usize;
    let x = Matrix::from_fn(n, n, |i, j| if i == j { f.q_pow(-(i as i64)) } else { f.zero() });
    let y = Matrix::from_fn(n, n, |i, j| if j == (i + 1) % n { f.one() } else { f.zero() });
    Ok((x, y))
}

/// Checks the matrix relations `xy = q yx` and `[x, x] = 0`.
pub fn check_matrix_rep(order: u32) -> Result<Vec<Report>> {
    let f = field(order)?;
    let (x, y) = matrix_rep(order)?;
    let show = |m: &Matrix| m.pretty().trim_end().replace('\n', "; ");
    let zero = Matrix::zeros(f, order as usize, order as usize);
    let rel = x.mul(&y).sub(&y.mul(&x).scale(&f.q()));
    let comm = x.mul(&x).sub(&x.mul(&x));
    let to_report = |name: &str, lhs: &Matrix| match mismatch(|| vec!["x".into(), "y".into()], lhs, &zero, show) {
        None => Report::pass(name, 1),
        Some(cx) => Report::fail(name, 1, cx),
    };
    Ok(vec![
        to_report("matrix relation xy - q yx = 0", &rel),
        to_report("matrix commutator [x, x] = 0", &comm),
    ])
}

/// Products in the extension at N = 3 from the relations read off the
/// operator model, by rewriting words in `x < y < dx < dy`:
/// `yx = q² xy`, `dx y = q y dx`, `dy x = q x dy`, `dy dx = q dx dy`,
/// `dx x = 1 + q² x dx + (q²−1) y dy`, `dy y = 1 + q² y dy`,
/// `x³ = y³ = 1`, `dx³ = dy³ = 0`.
pub fn relation_product_table(order: u32) -> Result<Vec<Element>> {
    if order != 3 {
        return Err(Error::UnsupportedOrder {
            what: "the relation presentation of the extension",
            order,
        });
    }
    let f = field(order)?;
    let (x, y, dx, dy) = (0u8, 1u8, 2u8, 3u8);
    let one = || vec![(f.one(), vec![])];
    let mut rs = RewriteSystem::new(f, vec![3; 4], vec![one(), one(), vec![], vec![]]);
    let q2 = f.q_pow(2);
    rs.exchange(y, x, vec![(q2.clone(), vec![x, y])]);
    rs.exchange(dx, x, vec![(f.one(), vec![]), (q2.clone(), vec![x, dx]), (&q2 - &f.one(), vec![y, dy])]);
    rs.exchange(dx, y, vec![(f.q(), vec![y, dx])]);
    rs.exchange(dy, x, vec![(f.q(), vec![x, dy])]);
    rs.exchange(dy, y, vec![(f.one(), vec![]), (q2, vec![y, dy])]);
    rs.exchange(dy, dx, vec![(f.q(), vec![dx, dy])]);
    Ok(rs.product_table())
}

/// Compares every product of the operator model with the relation
/// presentation.
pub fn check_dual_path(ext: &ExtendedPlane) -> Result<Report> {
    let alg = ext.module.algebra();
    let table = relation_product_table(alg.field().order())?;
    Ok(check_products_match(alg, &table))
}

/// Compares the structure constants of `alg` with another product table.
pub fn check_products_match(alg: &Algebra, table: &[Element]) -> Report {
    let n = alg.dim() as u32;
    let pairs: Vec<(u32, u32)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let b = alg.basis();
    Report::sweep("operator products match the relations", pairs, |&(i, j)| {
        mismatch(
            || vec![b.display(i).to_string(), b.display(j).to_string()],
            alg.mul_basis(i, j),
            &table[(i * n + j) as usize],
            |e| e.pretty(b),
        )
    })
}

/// Compares the braiding with every reference entry that lives in its
/// algebra.
pub fn check_chi_fixture_table(b: &Braiding) -> Result<Report> {
    let alg = b.module().algebra();
    let basis = alg.basis();
    let items: Vec<(&ChiFixture, u32, u32, Element)> = fixtures::all_chi()
        .filter_map(|fx| Some((fx, basis.find(fx.left)?, basis.find(fx.right)?)))
        .map(|(fx, l, r)| Ok((fx, l, r, chi_fixture_element(alg, fx)?)))
        .collect::<Result<_>>()?;
    Ok(Report::sweep("braiding reproduces the reference table", items, |(fx, l, r, want)| {
        mismatch(
            || vec![fx.left.into(), fx.right.into()],
            b.chi_basis(*l, *r),
            want,
            |e| e.pretty(basis),
        )
    }))
}

/// `h ▷ (l^N)`, expanded through the iterated coproduct, equals `h ▷ p`
/// for each `(letter l, p = l^N in the algebra)`, for each generator `h`.
pub fn check_power_relations(m: &ModuleAlgebra, letters: &[&str]) -> Result<Report> {
    let h = m.hopf();
    let alg = m.algebra();
    let n = m.field().order() as usize;
    let mut cases = Vec::new();
    for l in letters {
        let e = named(alg, l)?;
        cases.push((l.to_string(), e));
    }
    let items: Vec<(u32, usize)> = m
        .generators()
        .iter()
        .flat_map(|g| (0..cases.len()).map(move |c| (*g, c)))
        .collect();
    Ok(Report::sweep("action respects the power relations", items, |&(g, c)| {
        let (name, e) = &cases[c];
        let mut delta = h.algebra().basis_element(g);
        for slot in 0..n - 1 {
            delta = h.coproduct_at(&delta, slot);
        }
        let mut word = e.clone();
        for _ in 1..n {
            word = tensor(&word, e);
        }
        let lhs = alg.multiply_out(&m.act_tensor(&delta, &word));
        let power = (1..n).fold(e.clone(), |acc, _| alg.mul(&acc, e));
        let rhs = m.act(&h.algebra().basis_element(g), &power);
        mismatch(
            || vec![h.basis().display(g).to_string(), format!("{name}^{n}")],
            &lhs,
            &rhs,
            |v| v.pretty(alg.basis()),
        )
    }))
}

/// `∂x^N = ∂y^N = 0` as operators on the plane.
pub fn check_nilpotency(plane: &Algebra, model: DerivativeModel) -> Report {
    let n = plane.field().order();
    let (dx, dy) = model.operators(plane);
    let cases = vec![("dx", dx), ("dy", dy)];
    Report::sweep("derivatives are nilpotent", cases, |(name, d)| {
        let p = d.pow(n);
        (!p.is_zero()).then(|| crate::report::Counterexample {
            inputs: vec![format!("{name}^{n}")],
            lhs: p.pretty().trim_end().replace('\n', "; "),
            rhs: "0".into(),
        })
    })
}
