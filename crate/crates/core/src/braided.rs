//! The braiding `χ(a⊗b) = (R₂ ▷ b) ⊗ (R₁ ▷ a)` of a module-algebra, its
//! inverse from `R̄ = τ(R⁻¹)`, the deformed commutator
//! `[a, b]_χ = m∘(1−χ)(a⊗b)`, and checkers for its properties.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CyclotomicField, Scalar, ScalarJson};
use crate::error::{Error, Result};
use crate::hopf::HopfData;
use crate::qplane::{check_matrix_rep, ModuleAlgebra};
use crate::report::{mismatch, Counterexample, Report};
use crate::tensor::{apply_to_pair, tensor, Algebra, Basis, Element, Key};

/// Braiding and inverse braiding tables of a module-algebra over a
/// quasi-triangular Hopf algebra.
#[derive(Debug, Clone)]
pub struct Braiding {
    module: Arc<ModuleAlgebra>,
    chi: Vec<Element>,
    chi_bar: Vec<Element>,
    comm: Vec<Element>,
    comm_bar: Vec<Element>,
}

fn braid_table(m: &ModuleAlgebra, r: &Element) -> Vec<Element> {
    let n = m.dim() as u32;
    let pairs: Vec<(u32, u32)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    pairs
        .par_iter()
        .map(|&(a, b)| {
            let mut out = Element::zero(2);
            for (k, c) in r.terms() {
                let left = m.act_basis(k[1], b);
                if left.is_zero() {
                    continue;
                }
                let right = m.act_basis(k[0], a);
                if right.is_zero() {
                    continue;
                }
                out.add_scaled(c, &tensor(left, right));
            }
            out
        })
        .collect()
}

fn commutator_table(alg: &Algebra, chi: &[Element]) -> Vec<Element> {
    let n = alg.dim() as u32;
    (0..n * n)
        .into_par_iter()
        .map(|ab| {
            let (a, b) = (ab / n, ab % n);
            alg.mul_basis(a, b).sub(&alg.contract(&chi[ab as usize], 0))
        })
        .collect()
}

impl Braiding {
    pub fn new(module: Arc<ModuleAlgebra>) -> Result<Self> {
        let qt = module.hopf().require_qt()?;
        let chi = braid_table(&module, qt.r());
        let chi_bar = braid_table(&module, qt.rbar());
        Braiding::from_tables(module, chi, chi_bar)
    }

    /// A braiding with explicitly supplied tables (no consistency checks;
    /// used to feed corrupted data to the checkers).
    pub fn from_tables(module: Arc<ModuleAlgebra>, chi: Vec<Element>, chi_bar: Vec<Element>) -> Result<Self> {
        let n = module.dim();
        if chi.len() != n * n || chi_bar.len() != n * n {
            return Err(Error::Malformed("braiding table has the wrong size".into()));
        }
        if let Some(e) = chi.iter().chain(&chi_bar).find(|e| e.arity() != 2) {
            return Err(Error::ArityMismatch {
                expected: 2,
                found: e.arity(),
            });
        }
        let comm = commutator_table(module.algebra(), &chi);
        let comm_bar = commutator_table(module.algebra(), &chi_bar);
        Ok(Braiding {
            module,
            chi,
            chi_bar,
            comm,
            comm_bar,
        })
    }

    /// A copy with one braiding entry replaced.
    pub fn with_chi_entry(&self, a: u32, b: u32, value: Element) -> Result<Self> {
        let mut chi = self.chi.clone();
        chi[self.idx(a, b)] = value;
        Braiding::from_tables(self.module.clone(), chi, self.chi_bar.clone())
    }

    pub fn module(&self) -> &Arc<ModuleAlgebra> {
        &self.module
    }

    pub fn algebra(&self) -> &Algebra {
        self.module.algebra()
    }

    pub fn hopf(&self) -> &Arc<HopfData> {
        self.module.hopf()
    }

    pub fn field(&self) -> &'static CyclotomicField {
        self.module.field()
    }

    pub fn basis(&self) -> &Basis {
        self.module.basis()
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    fn idx(&self, a: u32, b: u32) -> usize {
        a as usize * self.dim() + b as usize
    }

    pub fn chi_basis(&self, a: u32, b: u32) -> &Element {
        &self.chi[self.idx(a, b)]
    }

    pub fn chi_bar_basis(&self, a: u32, b: u32) -> &Element {
        &self.chi_bar[self.idx(a, b)]
    }

    /// `[e_a, e_b]_χ`.
    pub fn commutator_basis(&self, a: u32, b: u32) -> &Element {
        &self.comm[self.idx(a, b)]
    }

    pub fn chi_table(&self) -> &[Element] {
        &self.chi
    }

    pub fn chi_bar_table(&self) -> &[Element] {
        &self.chi_bar
    }

    /// χ on a degree-2 tensor.
    pub fn chi(&self, t: &Element) -> Element {
        self.chi_at(t, 0)
    }

    pub fn chi_bar(&self, t: &Element) -> Element {
        self.chi_bar_at(t, 0)
    }

    /// χ on slots `slot, slot + 1` of a tensor.
    pub fn chi_at(&self, t: &Element, slot: usize) -> Element {
        apply_to_pair(t, slot, 2, |i, j| self.chi_basis(i, j))
    }

    pub fn chi_bar_at(&self, t: &Element, slot: usize) -> Element {
        apply_to_pair(t, slot, 2, |i, j| self.chi_bar_basis(i, j))
    }

    /// `m∘(1−χ)` on a degree-2 tensor.
    pub fn commutator_of(&self, t: &Element) -> Element {
        apply_to_pair(t, 0, 1, |i, j| self.commutator_basis(i, j))
    }

    /// `m∘(1−χ̄)` on a degree-2 tensor.
    pub fn bar_commutator_of(&self, t: &Element) -> Element {
        apply_to_pair(t, 0, 1, |i, j| &self.comm_bar[self.idx(i, j)])
    }

    /// `[a, b]_χ`.
    pub fn q_commutator(&self, a: &Element, b: &Element) -> Element {
        self.commutator_of(&tensor(a, b))
    }

    /// `[a, b]_χ̄`.
    pub fn bar_commutator(&self, a: &Element, b: &Element) -> Element {
        self.bar_commutator_of(&tensor(a, b))
    }

    /// `χ(a⊗b) = Σ_i σ_a^i(b) ⊗ e_i`, grouped by the second slot.
    pub fn sigma_decompose(&self, a: &Element, b: &Element) -> Vec<(Element, u32)> {
        self.chi(&tensor(a, b)).split_last()
    }

    /// Whether `χ² = 1` on every basis pair.
    pub fn is_involutive(&self) -> bool {
        let n = self.dim() as u32;
        (0..n * n).into_par_iter().all(|ab| {
            let (a, b) = (ab / n, ab % n);
            self.chi(self.chi_basis(a, b)) == Element::basis(&[a, b], self.field().one())
        })
    }

    fn name(&self, i: u32) -> String {
        self.basis().display(i).to_string()
    }

    fn show(&self) -> impl Fn(&Element) -> String + '_ {
        move |e: &Element| e.pretty(self.basis())
    }

    fn pairs(&self) -> Vec<(u32, u32)> {
        let n = self.dim() as u32;
        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect()
    }

    fn triples(&self) -> Vec<(u32, u32, u32)> {
        let n = self.dim() as u32;
        (0..n)
            .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
            .collect()
    }

    /// `e_i · u` for a degree-1 `u`.
    fn left_mul(&self, i: u32, u: &Element) -> Element {
        let alg = self.algebra();
        let mut r = Element::zero(1);
        for (k, c) in u.terms() {
            r.add_scaled(c, alg.mul_basis(i, k[0]));
        }
        r
    }

    /// `u · e_j` for a degree-1 `u`.
    fn right_mul(&self, u: &Element, j: u32) -> Element {
        let alg = self.algebra();
        let mut r = Element::zero(1);
        for (k, c) in u.terms() {
            r.add_scaled(c, alg.mul_basis(k[0], j));
        }
        r
    }
}

fn key2(a: u32, b: u32) -> Key {
    Key::from_slice(&[a, b])
}

/// `χ(a⊗1) = 1⊗a` and `χ(1⊗a) = a⊗1`.
pub fn check_unit_braiding(b: &Braiding) -> Report {
    let u = b.algebra().unit();
    let one = b.field().one();
    let cases: Vec<(u32, bool)> = (0..b.dim() as u32).flat_map(|a| [(a, true), (a, false)]).collect();
    Report::sweep("braiding with the unit", cases, |&(a, unit_right)| {
        let (lhs, rhs, inputs) = if unit_right {
            (b.chi_basis(a, u), Element::basis(&[u, a], one.clone()), [b.name(a), "1".into()])
        } else {
            (b.chi_basis(u, a), Element::basis(&[a, u], one.clone()), ["1".into(), b.name(a)])
        };
        mismatch(|| inputs.to_vec(), lhs, &rhs, b.show())
    })
}

/// `χ̄∘χ = χ∘χ̄ = 1` on every basis pair.
pub fn check_inverse_braiding(b: &Braiding) -> Vec<Report> {
    let one = b.field().one();
    let run = |name: &str, outer: &(dyn Fn(&Element) -> Element + Sync), inner: &(dyn Fn(u32, u32) -> Element + Sync)| {
        Report::sweep(name, b.pairs(), |&(x, y)| {
            let lhs = outer(&inner(x, y));
            mismatch(|| vec![b.name(x), b.name(y)], &lhs, &Element::basis(&[x, y], one.clone()), b.show())
        })
    };
    vec![
        run(
            "inverse braiding after braiding is the identity",
            &|t| b.chi_bar(t),
            &|x, y| b.chi_basis(x, y).clone(),
        ),
        run(
            "braiding after inverse braiding is the identity",
            &|t| b.chi(t),
            &|x, y| b.chi_bar_basis(x, y).clone(),
        ),
    ]
}

/// `[1, a]_χ = [a, 1]_χ = 0`.
pub fn check_unit_commutators(b: &Braiding) -> Report {
    let u = b.algebra().unit();
    let zero = Element::zero(1);
    let cases: Vec<(u32, bool)> = (0..b.dim() as u32).flat_map(|a| [(a, true), (a, false)]).collect();
    Report::sweep("commutators with the unit vanish", cases, |&(a, first)| {
        let (v, inputs) = if first {
            (b.commutator_basis(u, a), ["1".into(), b.name(a)])
        } else {
            (b.commutator_basis(a, u), [b.name(a), "1".into()])
        };
        mismatch(|| inputs.to_vec(), v, &zero, b.show())
    })
}

/// Leibniz rule in the second argument:
/// `[a, bc]_χ = [a, b]_χ c + σ_a^i(b)[e_i, c]_χ`, its formal form
/// `χ(a⊗bc) = (m⊗1)(1⊗χ)(χ(a⊗b)⊗c)` and `σ_a^i(bc) = σ_a^{i'}(b) σ_{e_{i'}}^i(c)`.
pub fn check_leibniz_second(b: &Braiding) -> Vec<Report> {
    let alg = b.algebra();
    let triples = b.triples();
    let inputs = |x: u32, y: u32, z: u32| move || vec![b.name(x), b.name(y), b.name(z)];

    let commutator = Report::sweep("Leibniz rule in the second argument", triples.clone(), |&(x, y, z)| {
        let lhs = b.commutator_of(&tensor(&alg.basis_element(x), alg.mul_basis(y, z)));
        let mut rhs = b.right_mul(b.commutator_basis(x, y), z);
        for (k, c) in b.chi_basis(x, y).terms() {
            rhs.add_scaled(c, &b.left_mul(k[0], b.commutator_basis(k[1], z)));
        }
        mismatch(inputs(x, y, z), &lhs, &rhs, b.show())
    });

    let formal = Report::sweep(
        "Leibniz rule in the second argument, formal form",
        triples.clone(),
        |&(x, y, z)| {
            let lhs = b.chi(&tensor(&alg.basis_element(x), alg.mul_basis(y, z)));
            let mut rhs = Element::zero(2);
            for (k, c) in b.chi_basis(x, y).terms() {
                for (m, d) in b.chi_basis(k[1], z).terms() {
                    let cd = c * d;
                    for (p, e) in alg.mul_basis(k[0], m[0]).terms() {
                        rhs.add_term(key2(p[0], m[1]), &cd * e);
                    }
                }
            }
            mismatch(inputs(x, y, z), &lhs, &rhs, b.show())
        },
    );

    let sigma = Report::sweep("sigma of a product in the second argument", triples, |&(x, y, z)| {
        let ex = alg.basis_element(x);
        let lhs: Vec<(Element, u32)> = b.sigma_decompose(&ex, alg.mul_basis(y, z));
        let mut acc: BTreeMap<u32, Element> = BTreeMap::new();
        for (s, ip) in b.sigma_decompose(&ex, &alg.basis_element(y)) {
            for (t, i) in b.sigma_decompose(&alg.basis_element(ip), &alg.basis_element(z)) {
                let e = acc.entry(i).or_insert_with(|| Element::zero(1));
                *e = e.add(&alg.mul(&s, &t));
            }
        }
        let rhs: Vec<(Element, u32)> = acc.into_iter().filter(|(_, e)| !e.is_zero()).map(|(i, e)| (e, i)).collect();
        mismatch(inputs(x, y, z), &lhs, &rhs, |v| show_sigma(b, v))
    });
    vec![commutator, formal, sigma]
}

/// Leibniz rule in the first argument:
/// `[ab, c]_χ = a[b, c]_χ + [a, σ_b^i(c)]_χ e_i`, its formal form
/// `χ(ab⊗c) = (1⊗m)(χ⊗1)(a⊗χ(b⊗c))` and the matching σ identity.
pub fn check_leibniz_first(b: &Braiding) -> Vec<Report> {
    let alg = b.algebra();
    let triples = b.triples();
    let inputs = |x: u32, y: u32, z: u32| move || vec![b.name(x), b.name(y), b.name(z)];

    let commutator = Report::sweep("Leibniz rule in the first argument", triples.clone(), |&(x, y, z)| {
        let lhs = b.commutator_of(&tensor(alg.mul_basis(x, y), &alg.basis_element(z)));
        let mut rhs = b.left_mul(x, b.commutator_basis(y, z));
        for (k, c) in b.chi_basis(y, z).terms() {
            rhs.add_scaled(c, &b.right_mul(b.commutator_basis(x, k[0]), k[1]));
        }
        mismatch(inputs(x, y, z), &lhs, &rhs, b.show())
    });

    let formal = Report::sweep(
        "Leibniz rule in the first argument, formal form",
        triples.clone(),
        |&(x, y, z)| {
            let lhs = b.chi(&tensor(alg.mul_basis(x, y), &alg.basis_element(z)));
            let mut rhs = Element::zero(2);
            for (k, c) in b.chi_basis(y, z).terms() {
                for (m, d) in b.chi_basis(x, k[0]).terms() {
                    let cd = c * d;
                    for (p, e) in alg.mul_basis(m[1], k[1]).terms() {
                        rhs.add_term(key2(m[0], p[0]), &cd * e);
                    }
                }
            }
            mismatch(inputs(x, y, z), &lhs, &rhs, b.show())
        },
    );

    let sigma = Report::sweep("sigma of a product in the first argument", triples, |&(x, y, z)| {
        let ez = alg.basis_element(z);
        let lhs = b.sigma_decompose(alg.mul_basis(x, y), &ez);
        let mut acc: BTreeMap<u32, Element> = BTreeMap::new();
        for (s, j) in b.sigma_decompose(&alg.basis_element(y), &ez) {
            for (t, ip) in b.sigma_decompose(&alg.basis_element(x), &s) {
                for (p, c) in alg.mul_basis(ip, j).terms() {
                    let e = acc.entry(p[0]).or_insert_with(|| Element::zero(1));
                    e.add_scaled(c, &t);
                }
            }
        }
        let rhs: Vec<(Element, u32)> = acc.into_iter().filter(|(_, e)| !e.is_zero()).map(|(i, e)| (e, i)).collect();
        mismatch(inputs(x, y, z), &lhs, &rhs, |v| show_sigma(b, v))
    });
    vec![commutator, formal, sigma]
}

fn show_sigma(b: &Braiding, v: &[(Element, u32)]) -> String {
    if v.is_empty() {
        return "0".into();
    }
    v.iter()
        .map(|(e, i)| format!("[{}] (x) {}", e.pretty(b.basis()), b.name(*i)))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Both Leibniz suites.
pub fn check_leibniz(b: &Braiding) -> Vec<Report> {
    let mut out = check_leibniz_second(b);
    out.extend(check_leibniz_first(b));
    out
}

/// `h ▷ [a, b]_χ = [h₁ ▷ a, h₂ ▷ b]_χ` for the generators of H.
pub fn check_covariance(b: &Braiding) -> Report {
    let m = b.module();
    let h = m.hopf();
    let cases: Vec<(u32, u32, u32)> = m
        .generators()
        .iter()
        .flat_map(|g| b.pairs().into_iter().map(move |(x, y)| (*g, x, y)))
        .collect();
    Report::sweep("covariance of the commutator", cases, |&(g, x, y)| {
        let hg = h.algebra().basis_element(g);
        let lhs = m.act(&hg, b.commutator_basis(x, y));
        let moved = m.act_tensor(h.coproduct_basis(g), &Element::basis(&[x, y], b.field().one()));
        let rhs = b.commutator_of(&moved);
        mismatch(
            || vec![h.basis().display(g).to_string(), b.name(x), b.name(y)],
            &lhs,
            &rhs,
            b.show(),
        )
    })
}

/// `[a, b]_χ = −[σ_a^i(b), e_i]_χ̄`, together with the inverse-braiding
/// identities it relies on.
pub fn check_antisymmetry(b: &Braiding) -> Vec<Report> {
    let mut out = check_inverse_braiding(b);
    out.push(Report::sweep("antisymmetry of the commutator", b.pairs(), |&(x, y)| {
        let lhs = b.commutator_basis(x, y);
        let rhs = b.bar_commutator_of(b.chi_basis(x, y)).neg();
        mismatch(|| vec![b.name(x), b.name(y)], lhs, &rhs, b.show())
    }));
    out
}

/// `(1⊗χ)(χ⊗1)(1⊗χ) = (χ⊗1)(1⊗χ)(χ⊗1)` on every basis triple.
pub fn check_chi_yang_baxter(b: &Braiding) -> Report {
    let one = b.field().one();
    Report::sweep("braid relation for the braiding", b.triples(), |&(x, y, z)| {
        let t = Element::basis(&[x, y, z], one.clone());
        let lhs = b.chi_at(&b.chi_at(&b.chi_at(&t, 1), 0), 1);
        let rhs = b.chi_at(&b.chi_at(&b.chi_at(&t, 0), 1), 0);
        mismatch(|| vec![b.name(x), b.name(y), b.name(z)], &lhs, &rhs, b.show())
    })
}

/// The Jacobi residual
/// `[[a,b]_χ, c]_χ − [a,[b,c]_χ]_χ − [[·,·]_χ, ·]_χ∘(1⊗χ)(a⊗b⊗c)`.
pub fn jacobi_residual(b: &Braiding, x: &Element, y: &Element, z: &Element) -> Element {
    let lhs = b.q_commutator(&b.q_commutator(x, y), z);
    let mut rhs = b.q_commutator(x, &b.q_commutator(y, z));
    for (k, c) in b.chi(&tensor(y, z)).terms() {
        let inner = b.q_commutator(x, &b.algebra().basis_element(k[0]));
        rhs.add_scaled(c, &b.q_commutator(&inner, &b.algebra().basis_element(k[1])));
    }
    lhs.sub(&rhs)
}

/// The operator `{(χ⊗1) − (1⊗χ)(χ⊗1)}(1 − (1⊗χ²))` on a degree-3 tensor.
pub fn jacobi_operator(b: &Braiding, t: &Element) -> Element {
    let u = t.sub(&b.chi_at(&b.chi_at(t, 1), 1));
    let v = b.chi_at(&u, 0);
    v.sub(&b.chi_at(&v, 1))
}

/// Outcome of the Jacobi analysis: whether the operator display vanishes,
/// the relation to the residual, and the dichotomy with triangularity.
#[derive(Debug, Clone)]
pub struct JacobiAnalysis {
    pub triangular: bool,
    pub involutive: bool,
    pub operator_vanishes: bool,
    /// First triple on which the operator display is nonzero, and its value.
    pub witness: Option<(Vec<String>, String)>,
    pub reports: Vec<Report>,
}

impl JacobiAnalysis {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(Report::passed)
    }
}

/// Evaluates the Jacobi operator display on every basis triple, checks that
/// the residual equals `−m∘(m⊗1)` of it, and that it vanishes exactly when χ
/// squares to the identity and H is triangular.
pub fn jacobi_operator_residual(b: &Braiding) -> Result<JacobiAnalysis> {
    let mut pre = check_leibniz(b);
    pre.push(check_chi_yang_baxter(b));
    jacobi_operator_residual_given(b, &pre)
}

/// As [`jacobi_operator_residual`] with precondition reports computed by the
/// caller.
pub fn jacobi_operator_residual_given(b: &Braiding, preconditions: &[Report]) -> Result<JacobiAnalysis> {
    if let Some(r) = preconditions.iter().find(|r| !r.passed()) {
        return Err(Error::Precondition(format!("{} fails", r.check)));
    }
    let alg = b.algebra();
    let one = b.field().one();
    let triples = b.triples();
    let names = |x: u32, y: u32, z: u32| vec![b.name(x), b.name(y), b.name(z)];

    let witness = triples.par_iter().find_map_first(|&(x, y, z)| {
        let d = jacobi_operator(b, &Element::basis(&[x, y, z], one.clone()));
        (!d.is_zero()).then(|| (names(x, y, z), d.pretty(b.basis())))
    });
    let cross = Report::sweep("Jacobi residual equals -m(m (x) 1) of the operator display", triples, |&(x, y, z)| {
        let lhs = jacobi_residual(
            b,
            &alg.basis_element(x),
            &alg.basis_element(y),
            &alg.basis_element(z),
        );
        let d = jacobi_operator(b, &Element::basis(&[x, y, z], one.clone()));
        let rhs = alg.multiply_out(&d).neg();
        mismatch(|| names(x, y, z), &lhs, &rhs, b.show())
    });
    let involutive = b.is_involutive();
    let triangular = b.hopf().is_triangular();
    let vanishes = witness.is_none();
    let verdict = |name: &str, flag: bool, what: &str| {
        if vanishes == flag {
            Report::pass(name, 1)
        } else {
            Report::fail(
                name,
                1,
                Counterexample {
                    inputs: witness.as_ref().map(|w| w.0.clone()).unwrap_or_default(),
                    lhs: format!("operator display {}", if vanishes { "vanishes" } else { "is nonzero" }),
                    rhs: format!("{what} is {flag}"),
                },
            )
        }
    };
    let reports = vec![
        cross,
        verdict("operator display vanishes iff the braiding squares to one", involutive, "involutivity"),
        verdict("operator display vanishes iff H is triangular", triangular, "triangularity"),
    ];
    Ok(JacobiAnalysis {
        triangular,
        involutive,
        operator_vanishes: vanishes,
        witness,
        reports,
    })
}

/// Classification of R under a star structure on H.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reality {
    /// `R⋆ = R⁻¹` and `R⋆ = τ(R)`.
    Both,
    /// `R⋆ = R⁻¹`.
    AntiReal,
    /// `R⋆ = τ(R)`.
    Real,
    Neither,
}

/// An antilinear map given on a basis.
#[derive(Debug, Clone)]
pub struct StarTable {
    images: Vec<Element>,
}

impl StarTable {
    pub fn new(images: Vec<Element>) -> Self {
        StarTable { images }
    }

    pub fn identity(alg: &Algebra) -> Self {
        StarTable::new((0..alg.dim() as u32).map(|i| alg.basis_element(i)).collect())
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// `(Σ c e)⋆ = Σ c̄ e⋆`, slot-wise on tensors.
    pub fn apply(&self, t: &Element) -> Element {
        let mut out = Element::zero(t.arity());
        for (k, c) in t.terms() {
            let mut acc = Element::scalar(c.conj());
            for i in k.iter() {
                acc = tensor(&acc, &self.images[*i as usize]);
            }
            out.add_scaled(&c.field().one(), &acc);
        }
        out
    }

    /// Errors unless the table is an antimultiplicative involution.
    pub fn validate(&self, alg: &Algebra, what: &str) -> Result<()> {
        let n = alg.dim() as u32;
        if self.images.len() != n as usize || self.images.iter().any(|e| e.arity() != 1) {
            return Err(Error::InvalidStar(format!("{what} star table does not match the basis")));
        }
        for i in 0..n {
            let e = alg.basis_element(i);
            if self.apply(&self.apply(&e)) != e {
                return Err(Error::InvalidStar(format!(
                    "{what} star is not involutive at `{}`",
                    alg.basis().display(i)
                )));
            }
        }
        let bad = (0..n * n).into_par_iter().find_first(|ij| {
            let (i, j) = (ij / n, ij % n);
            let lhs = self.apply(alg.mul_basis(i, j));
            let rhs = alg.mul(&self.images[j as usize], &self.images[i as usize]);
            lhs != rhs
        });
        if let Some(ij) = bad {
            return Err(Error::InvalidStar(format!(
                "{what} star is not antimultiplicative at ({}, {})",
                alg.basis().display(ij / n),
                alg.basis().display(ij % n)
            )));
        }
        Ok(())
    }
}

/// Reality class of R and the star-compatibility reports.
#[derive(Debug, Clone)]
pub struct StarReport {
    pub reality: Reality,
    pub reports: Vec<Report>,
}

/// Classifies R under `star_h`.
pub fn classify_r(h: &HopfData, star_h: &StarTable) -> Result<Reality> {
    star_h.validate(h.algebra(), "H")?;
    let qt = h.require_qt()?;
    let rs = star_h.apply(qt.r());
    let anti = &rs == qt.rinv();
    let real = rs == qt.r().flip();
    Ok(match (anti, real) {
        (true, true) => Reality::Both,
        (true, false) => Reality::AntiReal,
        (false, true) => Reality::Real,
        (false, false) => Reality::Neither,
    })
}

/// Classifies R, checks `h ▷ (a⋆) = [(Sh)⋆ ▷ a]⋆` on generators and basis
/// elements, and the matching conjugation rule of the commutator:
/// `[a,b]_χ⋆ = [b⋆, a⋆]_χ̄` for anti-real R, `[b⋆, a⋆]_χ` for real R.
pub fn check_star_conjugacy(b: &Braiding, star_h: &StarTable, star_a: &StarTable) -> Result<StarReport> {
    let m = b.module();
    let h = m.hopf();
    let reality = classify_r(h, star_h)?;
    star_a.validate(m.algebra(), "A")?;
    let gens: Vec<(u32, u32)> = m
        .generators()
        .iter()
        .flat_map(|g| (0..b.dim() as u32).map(move |a| (*g, a)))
        .collect();
    let mut reports = vec![Report::sweep("action is compatible with the stars", gens, |&(g, a)| {
        let ea = m.algebra().basis_element(a);
        let hg = h.algebra().basis_element(g);
        let lhs = m.act(&hg, &star_a.apply(&ea));
        let sh = star_h.apply(h.antipode_basis(g));
        let rhs = star_a.apply(&m.act(&sh, &ea));
        mismatch(
            || vec![h.basis().display(g).to_string(), b.name(a)],
            &lhs,
            &rhs,
            b.show(),
        )
    })];
    let lemma = |name: &str, bar: bool| {
        Report::sweep(name, b.pairs(), |&(x, y)| {
            let lhs = star_a.apply(b.commutator_basis(x, y));
            let t = tensor(&star_a.images()[y as usize], &star_a.images()[x as usize]);
            let rhs = if bar { b.bar_commutator_of(&t) } else { b.commutator_of(&t) };
            mismatch(|| vec![b.name(x), b.name(y)], &lhs, &rhs, b.show())
        })
    };
    if matches!(reality, Reality::AntiReal | Reality::Both) {
        reports.push(lemma("star of a commutator, anti-real case", true));
    }
    if matches!(reality, Reality::Real | Reality::Both) {
        reports.push(lemma("star of a commutator, real case", false));
    }
    Ok(StarReport { reality, reports })
}

/// Structure constants of the braiding and commutator on a χ-stable span of
/// basis elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QLieExport {
    pub order: u32,
    /// Algebra basis indices spanning V.
    pub indices: Vec<u32>,
    pub labels: Vec<String>,
    /// `σ[(i, j, m, k)]`: `χ(e_i⊗e_j) = Σ σ_ij^mk e_m⊗e_k` (positions in V).
    pub sigma: BTreeMap<(usize, usize, usize, usize), Scalar>,
    /// `C[(i, j, k)]`: components of `[e_i, e_j]_χ` along V.
    pub c: BTreeMap<(usize, usize, usize), Scalar>,
    pub closed: bool,
}

/// JSON form `{N, basis, sigma, C, closed}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QLieJson {
    #[serde(rename = "N")]
    pub order: u32,
    pub basis: Vec<String>,
    pub sigma: BTreeMap<String, ScalarJson>,
    #[serde(rename = "C")]
    pub c: BTreeMap<String, ScalarJson>,
    pub closed: bool,
}

impl QLieExport {
    pub fn to_json(&self) -> QLieJson {
        QLieJson {
            order: self.order,
            basis: self.labels.clone(),
            sigma: self
                .sigma
                .iter()
                .map(|((i, j, m, k), s)| (format!("{i},{j},{m},{k}"), s.to_json()))
                .collect(),
            c: self
                .c
                .iter()
                .map(|((i, j, k), s)| (format!("{i},{j},{k}"), s.to_json()))
                .collect(),
            closed: self.closed,
        }
    }

    /// The σ map as a braiding table on V (keys are positions in V).
    fn sigma_element(&self, i: usize, j: usize, one: &Scalar) -> Element {
        let mut e = Element::zero(2);
        for ((a, b, m, k), s) in self.sigma.range((i, j, 0, 0)..=(i, j, usize::MAX, usize::MAX)) {
            debug_assert_eq!((*a, *b), (i, j));
            e.add_term(key2(*m as u32, *k as u32), s * one);
        }
        e
    }
}

/// Extracts σ and C on the span of `v`; errors if the span is not χ-stable.
pub fn export_qlie(b: &Braiding, v: &[u32]) -> Result<QLieExport> {
    let mut seen = BTreeSet::new();
    if v.is_empty() || v.iter().any(|i| *i as usize >= b.dim() || !seen.insert(*i)) {
        return Err(Error::Malformed("span must list distinct basis elements".into()));
    }
    let pos: BTreeMap<u32, usize> = v.iter().enumerate().map(|(p, i)| (*i, p)).collect();
    let mut sigma = BTreeMap::new();
    let mut c = BTreeMap::new();
    let mut closed = true;
    for (pi, i) in v.iter().enumerate() {
        for (pj, j) in v.iter().enumerate() {
            for (k, s) in b.chi_basis(*i, *j).terms() {
                let (Some(m), Some(kk)) = (pos.get(&k[0]), pos.get(&k[1])) else {
                    return Err(Error::NotStable(format!(
                        "braiding of ({}, {}) leaves the span",
                        b.name(*i),
                        b.name(*j)
                    )));
                };
                sigma.insert((pi, pj, *m, *kk), s.clone());
            }
            for (k, s) in b.commutator_basis(*i, *j).terms() {
                match pos.get(&k[0]) {
                    Some(p) => {
                        c.insert((pi, pj, *p), s.clone());
                    }
                    None => closed = false,
                }
            }
        }
    }
    Ok(QLieExport {
        order: b.field().order(),
        indices: v.to_vec(),
        labels: v.iter().map(|i| b.basis().label(*i).to_string()).collect(),
        sigma,
        c,
        closed,
    })
}

/// Checks an export against the algebra: σ reproduces χ, the quantum-Lie
/// relation `e_i e_j − σ_ij^mk e_m e_k = C_ij^k e_k` holds entrywise (when
/// closed), the closure flag is honest, and σ satisfies the braid relation
/// on V⊗V⊗V using σ alone.
pub fn verify_qlie(b: &Braiding, ex: &QLieExport) -> Vec<Report> {
    let alg = b.algebra();
    let one = b.field().one();
    let n = ex.indices.len();
    let ix = |p: usize| ex.indices[p];
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let names = |i: usize, j: usize| vec![b.name(ix(i)), b.name(ix(j))];
    let to_alg = |e: &Element| {
        Element::from_terms(
            e.arity(),
            e.terms().map(|(k, c)| (k.iter().map(|p| ix(*p as usize)).collect::<Key>(), c.clone())),
        )
    };
    let mut out = vec![Report::sweep("sigma reproduces the braiding on V", pairs.clone(), |&(i, j)| {
        let lhs = to_alg(&ex.sigma_element(i, j, &one));
        mismatch(|| names(i, j), &lhs, b.chi_basis(ix(i), ix(j)), b.show())
    })];
    out.push(Report::sweep("quantum-Lie relation on V", pairs.clone(), |&(i, j)| {
        let mut lhs = alg.mul_basis(ix(i), ix(j)).clone();
        lhs = lhs.sub(&alg.contract(&to_alg(&ex.sigma_element(i, j, &one)), 0));
        let mut rhs = Element::zero(1);
        for ((a, bb, k), s) in ex.c.range((i, j, 0)..=(i, j, usize::MAX)) {
            debug_assert_eq!((*a, *bb), (i, j));
            rhs.add_term(Key::from_slice(&[ix(*k)]), s.clone());
        }
        if ex.closed {
            mismatch(|| names(i, j), &lhs, &rhs, b.show())
        } else {
            // Only the components along V are recorded.
            let proj = Element::from_terms(1, lhs.terms().filter(|(k, _)| ex.indices.contains(&k[0])).map(|(k, c)| (k.clone(), c.clone())));
            mismatch(|| names(i, j), &proj, &rhs, b.show())
        }
    }));
    let leaves = pairs
        .iter()
        .find(|(i, j)| b.commutator_basis(ix(*i), ix(*j)).terms().any(|(k, _)| !ex.indices.contains(&k[0])))
        .copied();
    out.push(match (ex.closed, leaves) {
        (true, None) | (false, Some(_)) => Report::pass("closure flag", n * n),
        (true, Some((i, j))) => Report::fail(
            "closure flag",
            n * n,
            Counterexample {
                inputs: names(i, j),
                lhs: "flag says closed".into(),
                rhs: b.commutator_basis(ix(i), ix(j)).pretty(b.basis()),
            },
        ),
        (false, None) => Report::fail(
            "closure flag",
            n * n,
            Counterexample {
                inputs: vec![],
                lhs: "flag says not closed".into(),
                rhs: "every commutator lies in V".into(),
            },
        ),
    });
    let sigma_at = |t: &Element, slot: usize| apply_to_pair(t, slot, 2, |i, j| ex.sigma_element(i as usize, j as usize, &one));
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
        .collect();
    out.push(Report::sweep("braid relation for sigma on V", triples, |&(i, j, k)| {
        let t = Element::basis(&[i as u32, j as u32, k as u32], one.clone());
        let lhs = to_alg(&sigma_at(&sigma_at(&sigma_at(&t, 1), 0), 1));
        let rhs = to_alg(&sigma_at(&sigma_at(&sigma_at(&t, 0), 1), 0));
        mismatch(|| vec![b.name(ix(i)), b.name(ix(j)), b.name(ix(k))], &lhs, &rhs, b.show())
    }));
    out
}

/// The matrix representation satisfies `xy = q yx` and `[x, x] = 0` as
/// matrices, while the braided commutator `[x, x]_χ = (1−q²)x²` is nonzero.
pub fn check_matrix_contrast(b: &Braiding) -> Result<Vec<Report>> {
    let f = b.field();
    let mut out = check_matrix_rep(f.order())?;
    let alg = b.algebra();
    let x = alg
        .basis()
        .find("x")
        .map(|i| alg.basis_element(i))
        .ok_or_else(|| Error::UnknownLabel("x".into()))?;
    let got = b.q_commutator(&x, &x);
    let want = alg.mul(&x, &x).scale(&(f.one() - f.q_pow(2)));
    let name = "braided commutator [x, x] = (1-q^2) x^2 is nonzero";
    out.push(match mismatch(|| vec!["x".into(), "x".into()], &got, &want, b.show()) {
        None if !got.is_zero() => Report::pass(name, 1),
        None => Report::fail(
            name,
            1,
            Counterexample {
                inputs: vec!["x".into(), "x".into()],
                lhs: "0".into(),
                rhs: "nonzero".into(),
            },
        ),
        Some(cx) => Report::fail(name, 1, cx),
    });
    Ok(out)
}

/// `χ² = 1` exactly when H is triangular.
pub fn check_triangular_iff_involutive(b: &Braiding) -> Report {
    let tri = b.hopf().is_triangular();
    let inv = b.is_involutive();
    let name = "braiding squares to one iff H is triangular";
    if tri == inv {
        Report::pass(name, 1)
    } else {
        Report::fail(
            name,
            1,
            Counterexample {
                inputs: vec![],
                lhs: format!("triangular = {tri}"),
                rhs: format!("braiding squares to one = {inv}"),
            },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qplane::build_qplane;
    use crate::toy::{plane_star, toy_line, toy_plane};
    use std::sync::OnceLock;

    fn plane() -> &'static Braiding {
        static B: OnceLock<Braiding> = OnceLock::new();
        B.get_or_init(|| Braiding::new(Arc::new(build_qplane(3).unwrap())).unwrap())
    }

    fn el(b: &Braiding, name: &str) -> Element {
        b.algebra().basis_element(b.basis().find(name).unwrap())
    }

    #[test]
    fn coordinate_values() {
        let b = plane();
        let f = b.field();
        let (x, y) = (el(b, "x"), el(b, "y"));
        assert_eq!(b.chi_bar(&tensor(&x, &x)), tensor(&x, &x).scale(&f.q()));
        assert_eq!(b.q_commutator(&x, &x).pretty(b.basis()), "(1-q^2) x^2");
        let y2 = el(b, "y^2");
        assert_eq!(b.q_commutator(&x, &y2), el(b, "x y^2").scale(&(f.one() - f.q())));
        let sig = b.sigma_decompose(&x, &y);
        assert_eq!(sig.len(), 2);
        // grouped in basis order of the second slot: y before x
        assert_eq!(sig[0], (x.scale(&(f.q_pow(2) - f.one())), b.basis().find("y").unwrap()));
        assert_eq!(sig[1], (y.scale(&f.q()), b.basis().find("x").unwrap()));
        let one = b.algebra().one();
        assert!(b.q_commutator(&one, &x).is_zero());
    }

    #[test]
    fn covariance_example() {
        let b = plane();
        let m = b.module();
        let f = b.field();
        let k = m.hopf().algebra().element(&crate::uqsl2::pbw_label(0, 1, 0)).unwrap();
        let c = b.q_commutator(&el(b, "x"), &el(b, "y"));
        assert_eq!(m.act(&k, &c), el(b, "x y").scale(&(f.one() - f.q_pow(2))));
    }

    #[test]
    fn jacobi_at_xxx() {
        let b = plane();
        let f = b.field();
        let x = el(b, "x");
        let r = jacobi_residual(b, &x, &x, &x);
        assert_eq!(r, b.algebra().one().scale(&(f.from_int(-3) * f.q_pow(2))));
        let t = tensor(&tensor(&x, &x), &x);
        assert_eq!(jacobi_operator(b, &t), t.scale(&(f.from_int(3) * f.q_pow(2))));
    }

    #[test]
    fn triangular_toy_has_no_jacobi_residual() {
        for m in [toy_plane(3).unwrap(), toy_line(3).unwrap()] {
            let b = Braiding::new(Arc::new(m)).unwrap();
            let j = jacobi_operator_residual(&b).unwrap();
            assert!(j.operator_vanishes && j.triangular && j.involutive);
            assert!(j.passed());
        }
    }

    #[test]
    fn qlie_exports() {
        let b = plane();
        let all: Vec<u32> = (0..9).collect();
        let ex = export_qlie(b, &all).unwrap();
        assert!(ex.closed);
        assert!(verify_qlie(b, &ex).iter().all(Report::passed));
        let (x, x2) = (b.basis().find("x").unwrap() as usize, b.basis().find("x^2").unwrap() as usize);
        let f = b.field();
        assert_eq!(ex.c[&(x, x, x2)], f.one() - f.q_pow(2));

        let v = [b.basis().find("x").unwrap(), b.basis().find("y").unwrap()];
        let ex = export_qlie(b, &v).unwrap();
        assert!(!ex.closed);
        assert!(verify_qlie(b, &ex).iter().all(Report::passed));

        let ex = export_qlie(b, &[b.algebra().unit()]).unwrap();
        assert!(ex.closed && ex.c.is_empty());

        let mixed = [b.basis().find("x").unwrap(), b.basis().find("x y").unwrap()];
        assert!(matches!(export_qlie(b, &mixed), Err(Error::NotStable(_))));
    }

    #[test]
    fn star_on_triangular_toy() {
        let m = toy_plane(3).unwrap();
        let star_h = StarTable::identity(m.hopf().algebra());
        let star_a = plane_star(m.algebra()).unwrap();
        let b = Braiding::new(Arc::new(m)).unwrap();
        let r = check_star_conjugacy(&b, &star_h, &star_a).unwrap();
        assert_eq!(r.reality, Reality::Both);
        assert_eq!(r.reports.len(), 3);
        assert!(r.reports.iter().all(Report::passed), "{:?}", r.reports);
    }

    #[test]
    fn rejects_bad_star() {
        let m = toy_plane(3).unwrap();
        let alg = m.algebra();
        let mut images = StarTable::identity(alg).images().to_vec();
        images[1] = images[2].clone();
        let b = Braiding::new(Arc::new(m.clone())).unwrap();
        let star_h = StarTable::identity(m.hopf().algebra());
        assert!(matches!(
            check_star_conjugacy(&b, &star_h, &StarTable::new(images)),
            Err(Error::InvalidStar(_))
        ));
    }

    #[test]
    fn uqsl2_star_candidate_is_classified() {
        let b = plane();
        let h = b.hopf();
        let star = StarTable::new(crate::uqsl2::star_candidate(h.algebra()).unwrap());
        let reality = classify_r(h, &star).unwrap();
        assert_eq!(reality, Reality::Neither);
    }

    #[test]
    fn matrix_contrast() {
        assert!(check_matrix_contrast(plane()).unwrap().iter().all(Report::passed));
    }

    #[test]
    fn corrupted_braiding_breaks_the_braid_relation() {
        let b = plane();
        let (x, y) = (b.basis().find("x").unwrap(), b.basis().find("y").unwrap());
        let bad = b.with_chi_entry(x, y, Element::basis(&[y, x], b.field().one())).unwrap();
        let r = check_chi_yang_baxter(&bad);
        assert!(!r.passed());
        assert!(r.counterexample.unwrap().inputs.iter().any(|s| s == "x" || s == "y"));
    }
}
