//! Finite-dimensional Hopf algebras given by tables, quasi-triangular
//! structures and checkers for their axioms.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{field, CyclotomicField, Scalar, ScalarJson};
use crate::error::{Error, Result};
use crate::linalg::{Echelon, SparseRow};
use crate::report::{mismatch, Report};
use crate::tensor::{
    all_keys, apply_to_slot, flatten, parse_indices, Algebra, AlgebraJson, Basis, Element, Key, TermJson,
};

/// A universal R-matrix with its inverse and `R̄ = τ(R⁻¹) = R₂₁⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QTStructure {
    r: Element,
    rinv: Element,
    rbar: Element,
}

impl QTStructure {
    /// Assembles the structure from `R` and a verified inverse.
    pub fn from_parts(r: Element, rinv: Element) -> Self {
        let rbar = rinv.flip();
        QTStructure { r, rinv, rbar }
    }

    pub fn r(&self) -> &Element {
        &self.r
    }

    pub fn rinv(&self) -> &Element {
        &self.rinv
    }

    pub fn rbar(&self) -> &Element {
        &self.rbar
    }

    /// The opposite structure `R' = R₂₁⁻¹`, whose own bar is `R`.
    pub fn opposite(&self) -> QTStructure {
        QTStructure {
            r: self.rbar.clone(),
            rinv: self.r.flip(),
            rbar: self.r.clone(),
        }
    }
}

/// A Hopf algebra: an algebra with coproduct, counit and antipode tables
/// indexed by basis element, and optionally an R-matrix.
#[derive(Debug, Clone)]
pub struct HopfData {
    algebra: Algebra,
    coproduct: Vec<Element>,
    counit: Vec<Scalar>,
    antipode: Vec<Element>,
    qt: Option<QTStructure>,
}

impl HopfData {
    /// Shape checks only; the axioms are verified by [`check_hopf_axioms`].
    pub fn new(algebra: Algebra, coproduct: Vec<Element>, counit: Vec<Scalar>, antipode: Vec<Element>) -> Result<Self> {
        let n = algebra.dim();
        if coproduct.len() != n || counit.len() != n || antipode.len() != n {
            return Err(Error::Malformed(format!("Hopf tables must have one entry per basis element ({n})")));
        }
        if let Some(e) = coproduct.iter().find(|e| e.arity() != 2) {
            return Err(Error::ArityMismatch {
                expected: 2,
                found: e.arity(),
            });
        }
        if let Some(e) = antipode.iter().find(|e| e.arity() != 1) {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: e.arity(),
            });
        }
        Ok(HopfData {
            algebra,
            coproduct,
            counit,
            antipode,
            qt: None,
        })
    }

    /// Attaches `R`, solving for its inverse.
    pub fn with_r(mut self, r: Element) -> Result<Self> {
        let rinv = invert_tensor(&self.algebra, &r)?;
        self.qt = Some(QTStructure::from_parts(r, rinv));
        Ok(self)
    }

    pub fn with_qt(mut self, qt: QTStructure) -> Self {
        self.qt = Some(qt);
        self
    }

    /// The same Hopf algebra with the opposite quasi-triangular structure.
    pub fn opposite(&self) -> Result<HopfData> {
        let qt = self.require_qt()?.opposite();
        Ok(self.clone().with_qt(qt))
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn field(&self) -> &'static CyclotomicField {
        self.algebra.field()
    }

    pub fn order(&self) -> u32 {
        self.field().order()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn basis(&self) -> &Basis {
        self.algebra.basis()
    }

    pub fn qt(&self) -> Option<&QTStructure> {
        self.qt.as_ref()
    }

    pub fn require_qt(&self) -> Result<&QTStructure> {
        self.qt
            .as_ref()
            .ok_or_else(|| Error::Precondition("the Hopf algebra has no R-matrix".into()))
    }

    pub fn coproduct_basis(&self, i: u32) -> &Element {
        &self.coproduct[i as usize]
    }

    pub fn counit_basis(&self, i: u32) -> &Scalar {
        &self.counit[i as usize]
    }

    pub fn antipode_basis(&self, i: u32) -> &Element {
        &self.antipode[i as usize]
    }

    /// Δ applied to slot `slot` of a tensor.
    pub fn coproduct_at(&self, t: &Element, slot: usize) -> Element {
        apply_to_slot(t, slot, 2, |i| &self.coproduct[i as usize])
    }

    /// ε applied to slot `slot` of a tensor.
    pub fn counit_at(&self, t: &Element, slot: usize) -> Element {
        apply_to_slot(t, slot, 0, |i| Element::scalar(self.counit[i as usize].clone()))
    }

    /// S applied to slot `slot` of a tensor.
    pub fn antipode_at(&self, t: &Element, slot: usize) -> Element {
        apply_to_slot(t, slot, 1, |i| &self.antipode[i as usize])
    }

    pub fn coproduct(&self, u: &Element) -> Element {
        self.coproduct_at(u, 0)
    }

    pub fn coproduct_op(&self, u: &Element) -> Element {
        self.coproduct(u).flip()
    }

    pub fn counit(&self, u: &Element) -> Scalar {
        self.counit_at(u, 0).scalar_value(self.field())
    }

    pub fn antipode(&self, u: &Element) -> Element {
        self.antipode_at(u, 0)
    }

    /// Whether `R₂₁ R = 1 ⊗ 1`.
    pub fn is_triangular(&self) -> bool {
        self.qt.as_ref().is_some_and(|qt| qt.rinv == qt.r.flip())
    }

    pub fn to_json(&self) -> HopfJson {
        let basis = self.basis();
        let idx = |i: usize| i.to_string();
        let algebra = self.algebra.to_json();
        HopfJson {
            order: self.order(),
            basis: algebra.basis,
            unit: algebra.unit,
            mul: algebra.mul,
            coproduct: self
                .coproduct
                .iter()
                .enumerate()
                .map(|(i, e)| (idx(i), e.to_json(basis)))
                .collect(),
            counit: self
                .counit
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (idx(i), c.to_json()))
                .collect(),
            antipode: self
                .antipode
                .iter()
                .enumerate()
                .map(|(i, e)| (idx(i), e.to_json(basis)))
                .collect(),
            r: self.qt.as_ref().map(|qt| qt.r.to_json(basis)),
        }
    }

    pub fn from_json(j: &HopfJson) -> Result<Self> {
        let f = field(j.order)?;
        let algebra = Algebra::from_json(
            f,
            &AlgebraJson {
                basis: j.basis.clone(),
                unit: j.unit.clone(),
                mul: j.mul.clone(),
            },
        )?;
        let n = algebra.dim();
        let basis = algebra.basis().clone();
        let index = |s: &str| -> Result<usize> {
            match parse_indices(s, n)?[..] {
                [i] => Ok(i),
                _ => Err(Error::Malformed(format!("expected one index, got `{s}`"))),
            }
        };
        let mut coproduct = vec![Element::zero(2); n];
        for (k, terms) in &j.coproduct {
            coproduct[index(k)?] = Element::from_json(f, &basis, 2, terms)?;
        }
        let mut counit = vec![f.zero(); n];
        for (k, s) in &j.counit {
            counit[index(k)?] = f.from_json(s)?;
        }
        let mut antipode = vec![Element::zero(1); n];
        for (k, terms) in &j.antipode {
            antipode[index(k)?] = Element::from_json(f, &basis, 1, terms)?;
        }
        let h = HopfData::new(algebra, coproduct, counit, antipode)?;
        match &j.r {
            None => Ok(h),
            Some(terms) => {
                let r = Element::from_json(f, &basis, 2, terms)?;
                h.with_r(r)
            }
        }
    }
}

/// JSON form of [`HopfData`]; `basis`, `unit` and `mul` are the algebra
/// fields of [`AlgebraJson`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopfJson {
    pub order: u32,
    pub basis: Vec<String>,
    pub unit: String,
    pub mul: BTreeMap<String, Vec<TermJson>>,
    pub coproduct: BTreeMap<String, Vec<TermJson>>,
    pub counit: BTreeMap<String, ScalarJson>,
    pub antipode: BTreeMap<String, Vec<TermJson>>,
    #[serde(rename = "R", skip_serializing_if = "Option::is_none", default)]
    pub r: Option<Vec<TermJson>>,
}

/// Solves `T·X = 1 ⊗ 1` in `A ⊗ A` and checks `X·T = 1 ⊗ 1`.
pub fn invert_tensor(alg: &Algebra, t: &Element) -> Result<Element> {
    if t.arity() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            found: t.arity(),
        });
    }
    let f = alg.field();
    let n = alg.dim();
    let unknowns = n * n;
    let columns: Vec<Element> = (0..unknowns)
        .into_par_iter()
        .map(|j| {
            let key = [(j / n) as u32, (j % n) as u32];
            alg.mul_tensor(t, &Element::basis(&key, f.one()))
        })
        .collect();
    let mut rows: Vec<SparseRow> = vec![SparseRow::new(); unknowns];
    for (j, col) in columns.iter().enumerate() {
        for (k, c) in col.terms() {
            rows[flatten(k, n)].insert(j, c.clone());
        }
    }
    let one = alg.unit_tensor(2);
    for (k, c) in one.terms() {
        rows[flatten(k, n)].insert(unknowns, c.clone());
    }
    let mut ech = Echelon::new(f, unknowns);
    for row in rows {
        ech.insert(row);
    }
    let x = ech
        .solve()
        .map_err(|e| Error::NotInvertible(format!("tensor has no right inverse ({e})")))?;
    let inv = Element::from_terms(
        2,
        x.into_iter()
            .enumerate()
            .map(|(j, c)| (Key::from_slice(&[(j / n) as u32, (j % n) as u32]), c)),
    );
    if alg.mul_tensor(&inv, t) != one {
        return Err(Error::NotInvertible("right inverse is not a left inverse".into()));
    }
    Ok(inv)
}

fn basis_pairs(n: usize) -> Vec<(u32, u32)> {
    (0..n as u32).flat_map(|i| (0..n as u32).map(move |j| (i, j))).collect()
}

fn single(check: &str, inputs: &[&str], lhs: &Element, rhs: &Element, basis: &Basis) -> Report {
    let cx = mismatch(|| inputs.iter().map(|s| s.to_string()).collect(), lhs, rhs, |e| e.pretty(basis));
    match cx {
        None => Report::pass(check, 1),
        Some(cx) => Report::fail(check, 1, cx),
    }
}

/// Unit, multiplicativity, coassociativity, counit and antipode laws on
/// every basis element or pair.
pub fn check_hopf_axioms(h: &HopfData) -> Vec<Report> {
    let alg = h.algebra();
    let basis = alg.basis();
    let f = h.field();
    let n = alg.dim();
    let show = |e: &Element| e.pretty(basis);
    let name = |i: u32| basis.display(i).to_string();
    let one = alg.one();
    let mut out = Vec::new();

    let unit_cx = mismatch(|| vec!["1".into()], &h.coproduct(&one), &alg.unit_tensor(2), show).or_else(|| {
        mismatch(|| vec!["1".into()], &h.counit(&one), &f.one(), |s: &Scalar| s.pretty())
    });
    out.push(match unit_cx {
        None => Report::pass("coproduct and counit are unital", 1),
        Some(cx) => Report::fail("coproduct and counit are unital", 1, cx),
    });

    out.push(Report::sweep("coproduct is multiplicative", basis_pairs(n), |&(i, j)| {
        let lhs = h.coproduct(alg.mul_basis(i, j));
        let rhs = alg.mul_tensor(h.coproduct_basis(i), h.coproduct_basis(j));
        mismatch(|| vec![name(i), name(j)], &lhs, &rhs, show)
    }));

    out.push(Report::sweep("counit is multiplicative", basis_pairs(n), |&(i, j)| {
        let lhs = h.counit(alg.mul_basis(i, j));
        let rhs = h.counit_basis(i) * h.counit_basis(j);
        mismatch(|| vec![name(i), name(j)], &lhs, &rhs, |s: &Scalar| s.pretty())
    }));

    let singles: Vec<u32> = (0..n as u32).collect();
    out.push(Report::sweep("coassociativity", singles.clone(), |&i| {
        let d = h.coproduct_basis(i);
        let lhs = h.coproduct_at(d, 0);
        let rhs = h.coproduct_at(d, 1);
        mismatch(|| vec![name(i)], &lhs, &rhs, show)
    }));

    out.push(Report::sweep("counit laws", singles.clone(), |&i| {
        let d = h.coproduct_basis(i);
        let e = alg.basis_element(i);
        mismatch(|| vec![name(i), "(e (x) 1)".into()], &h.counit_at(d, 0), &e, show)
            .or_else(|| mismatch(|| vec![name(i), "(1 (x) e)".into()], &h.counit_at(d, 1), &e, show))
    }));

    out.push(Report::sweep("antipode laws", singles, |&i| {
        let d = h.coproduct_basis(i);
        let rhs = one.scale(h.counit_basis(i));
        let left = alg.contract(&h.antipode_at(d, 0), 0);
        let right = alg.contract(&h.antipode_at(d, 1), 0);
        mismatch(|| vec![name(i), "m(S (x) 1)D".into()], &left, &rhs, show)
            .or_else(|| mismatch(|| vec![name(i), "m(1 (x) S)D".into()], &right, &rhs, show))
    }));
    out
}

/// Invertibility, quasi-cocommutativity and both hexagon identities.
pub fn check_qt_axioms(h: &HopfData) -> Result<Vec<Report>> {
    let qt = h.require_qt()?;
    let alg = h.algebra();
    let basis = alg.basis();
    let show = |e: &Element| e.pretty(basis);
    let one2 = alg.unit_tensor(2);
    let mut out = Vec::new();

    let inv_cx = mismatch(|| vec!["R R^-1".into()], &alg.mul_tensor(&qt.r, &qt.rinv), &one2, show)
        .or_else(|| mismatch(|| vec!["R^-1 R".into()], &alg.mul_tensor(&qt.rinv, &qt.r), &one2, show));
    out.push(match inv_cx {
        None => Report::pass("R is invertible", 1),
        Some(cx) => Report::fail("R is invertible", 1, cx),
    });

    out.push(Report::sweep("quasi-cocommutativity", (0..h.dim() as u32).collect(), |&i| {
        let d = h.coproduct_basis(i);
        let lhs = alg.mul_tensor(&qt.r, d);
        let rhs = alg.mul_tensor(&d.flip(), &qt.r);
        mismatch(|| vec![basis.display(i).to_string()], &lhs, &rhs, show)
    }));

    let r13 = alg.embed(&qt.r, 3, &[0, 2]);
    let r12 = alg.embed(&qt.r, 3, &[0, 1]);
    let r23 = alg.embed(&qt.r, 3, &[1, 2]);
    out.push(single(
        "(D (x) 1)R = R13 R23",
        &["R"],
        &h.coproduct_at(&qt.r, 0),
        &alg.mul_tensor(&r13, &r23),
        basis,
    ));
    out.push(single(
        "(1 (x) D)R = R13 R12",
        &["R"],
        &h.coproduct_at(&qt.r, 1),
        &alg.mul_tensor(&r13, &r12),
        basis,
    ));
    Ok(out)
}

/// `R₁₂ R₁₃ R₂₃ = R₂₃ R₁₃ R₁₂`.
pub fn check_yang_baxter(h: &HopfData) -> Result<Report> {
    let qt = h.require_qt()?;
    let alg = h.algebra();
    let r12 = alg.embed(&qt.r, 3, &[0, 1]);
    let r13 = alg.embed(&qt.r, 3, &[0, 2]);
    let r23 = alg.embed(&qt.r, 3, &[1, 2]);
    let lhs = alg.mul_tensor(&alg.mul_tensor(&r12, &r13), &r23);
    let rhs = alg.mul_tensor(&alg.mul_tensor(&r23, &r13), &r12);
    Ok(single("Yang-Baxter equation for R", &["R"], &lhs, &rhs, alg.basis()))
}

/// Counit and antipode identities satisfied by any R-matrix.
pub fn check_r_counit_antipode(h: &HopfData) -> Result<Vec<Report>> {
    let qt = h.require_qt()?;
    let alg = h.algebra();
    let basis = alg.basis();
    let one = alg.one();
    let ss = h.antipode_at(&h.antipode_at(&qt.r, 0), 1);
    Ok(vec![
        single("(e (x) 1)R = 1", &["R"], &h.counit_at(&qt.r, 0), &one, basis),
        single("(1 (x) e)R = 1", &["R"], &h.counit_at(&qt.r, 1), &one, basis),
        single("(S (x) 1)R = R^-1", &["R"], &h.antipode_at(&qt.r, 0), &qt.rinv, basis),
        single("(1 (x) S)R^-1 = R", &["R^-1"], &h.antipode_at(&qt.rinv, 1), &qt.r, basis),
        single("(S (x) S)R = R", &["R"], &ss, &qt.r, basis),
    ])
}

/// Every Hopf and quasi-triangular check combined.
pub fn check_all(h: &HopfData) -> Result<Vec<Report>> {
    let mut out = check_hopf_axioms(h);
    out.extend(check_qt_axioms(h)?);
    out.push(check_yang_baxter(h)?);
    out.extend(check_r_counit_antipode(h)?);
    Ok(out)
}

/// The group algebra of ℤ_N with the trivial R-matrix `1 ⊗ 1`.
pub fn cyclic_group_algebra(order: u32) -> Result<HopfData> {
    let f = field(order)?;
    let n = order;
    let labels = (0..n).map(|k| format!("g^{k}")).collect();
    let basis = Basis::from_labels(labels)?;
    let table = all_keys(2, n as usize)
        .map(|k| Element::basis(&[(k[0] + k[1]) % n], f.one()))
        .collect();
    let algebra = Algebra::new(f, basis, 0, table)?;
    let coproduct = (0..n).map(|k| Element::basis(&[k, k], f.one())).collect();
    let counit = vec![f.one(); n as usize];
    let antipode = (0..n).map(|k| Element::basis(&[(n - k) % n], f.one())).collect();
    let h = HopfData::new(algebra, coproduct, counit, antipode)?;
    let one2 = h.algebra().unit_tensor(2);
    Ok(h.with_qt(QTStructure::from_parts(one2.clone(), one2)))
}

/// Counterexample-free pass for every report.
pub fn all_passed(reports: &[Report]) -> bool {
    reports.iter().all(Report::passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group_is_triangular_hopf() {
        for n in [3, 5] {
            let h = cyclic_group_algebra(n).unwrap();
            let reports = check_all(&h).unwrap();
            assert!(all_passed(&reports), "{reports:?}");
            assert!(h.is_triangular());
        }
    }

    #[test]
    fn broken_antipode_is_reported() {
        let h = cyclic_group_algebra(3).unwrap();
        let f = h.field();
        let mut antipode: Vec<Element> = (0..3).map(|i| h.antipode_basis(i).clone()).collect();
        antipode[1] = Element::basis(&[1], f.one());
        let bad = HopfData::new(
            h.algebra().clone(),
            (0..3).map(|i| h.coproduct_basis(i).clone()).collect(),
            (0..3).map(|i| h.counit_basis(i).clone()).collect(),
            antipode,
        )
        .unwrap();
        let reports = check_hopf_axioms(&bad);
        let failing: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
        assert_eq!(failing.len(), 1);
        assert_eq!(failing[0].check, "antipode laws");
        assert_eq!(failing[0].counterexample.as_ref().unwrap().inputs[0], "g");
    }

    #[test]
    fn inverse_of_non_trivial_tensor() {
        let h = cyclic_group_algebra(3).unwrap();
        let f = h.field();
        let alg = h.algebra();
        // R = (1/3) Σ q^{ab} g^a ⊗ g^b is invertible
        let third = f.from_int(3).inv().unwrap();
        let r = Element::from_terms(
            2,
            all_keys(2, 3).map(|k| (k.clone(), &third * &f.q_pow((k[0] * k[1]) as i64))),
        );
        let rinv = invert_tensor(alg, &r).unwrap();
        assert_eq!(alg.mul_tensor(&r, &rinv), alg.unit_tensor(2));
    }

    #[test]
    fn json_round_trip() {
        let h = cyclic_group_algebra(3).unwrap();
        let j = serde_json::to_string(&h.to_json()).unwrap();
        let back = HopfData::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back.to_json(), h.to_json());
        assert!(back.is_triangular());
    }
}
