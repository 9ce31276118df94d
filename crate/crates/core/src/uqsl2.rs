//! The reduced quantum enveloping algebra of sl(2) at a primitive N-th root
//! of unity: PBW basis `Xm^a K^b Xp^c` with `K^N = 1`, `X±^N = 0`.

use std::fmt;

use crate::cyclotomic::field;
use crate::error::{Error, Result};
use crate::hopf::{check_hopf_axioms, check_qt_axioms, HopfData};
use crate::report::Report;
use crate::rewrite::RewriteSystem;
use crate::tensor::{tensor, Algebra, Basis, Element};

const XM: u8 = 0;
const K: u8 = 1;
const XP: u8 = 2;

/// Candidate Hopf structures on the same algebra. `Inverted` variants swap
/// `K` and `K⁻¹`; `Opposite` variants flip Δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoproductConvention {
    /// `Δ(Xp) = Xp⊗1 + K⊗Xp`, `Δ(Xm) = Xm⊗K⁻¹ + 1⊗Xm`.
    Standard,
    /// `Δ(Xp) = 1⊗Xp + Xp⊗K`, `Δ(Xm) = K⁻¹⊗Xm + Xm⊗1`.
    Opposite,
    /// `Δ(Xp) = Xp⊗1 + K⁻¹⊗Xp`, `Δ(Xm) = Xm⊗K + 1⊗Xm`.
    Inverted,
    /// `Δ(Xp) = 1⊗Xp + Xp⊗K⁻¹`, `Δ(Xm) = K⊗Xm + Xm⊗1`.
    InvertedOpposite,
}

impl CoproductConvention {
    pub const ALL: [CoproductConvention; 4] = [
        CoproductConvention::Standard,
        CoproductConvention::Opposite,
        CoproductConvention::Inverted,
        CoproductConvention::InvertedOpposite,
    ];
}

impl fmt::Display for CoproductConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CoproductConvention::Standard => "standard",
            CoproductConvention::Opposite => "opposite",
            CoproductConvention::Inverted => "inverted",
            CoproductConvention::InvertedOpposite => "inverted-opposite",
        };
        f.write_str(s)
    }
}

fn check_order(order: u32) -> Result<()> {
    field(order).map(|_| ())
}

/// Basis label of `Xm^a K^b Xp^c`.
pub fn pbw_label(a: u32, b: u32, c: u32) -> String {
    format!("Xm^{a} K^{b} Xp^{c}")
}

/// The rewriting system: exchange rules to `Xm < K < Xp` order.
pub fn rewrite_system(order: u32) -> Result<RewriteSystem> {
    let f = field(order)?;
    let n = order as i64;
    let mut rs = RewriteSystem::new(
        f,
        vec![order; 3],
        vec![vec![], vec![(f.one(), vec![])], vec![]],
    );
    // K Xm = q^{-2} Xm K
    rs.exchange(K, XM, vec![(f.q_pow(-2), vec![XM, K])]);
    // Xp K = q^{-2} K Xp
    rs.exchange(XP, K, vec![(f.q_pow(-2), vec![K, XP])]);
    // Xp Xm = Xm Xp + (K - K^{N-1}) / (q - q^{-1})
    let c = (f.q() - f.q_pow(-1)).inv()?;
    let kinv = vec![K; (n - 1) as usize];
    rs.exchange(XP, XM, vec![(f.one(), vec![XM, XP]), (c.clone(), vec![K]), (-c, kinv)]);
    Ok(rs)
}

/// The algebra on the PBW basis, associativity verified.
pub fn build_algebra(order: u32) -> Result<Algebra> {
    let f = field(order)?;
    let mut rs = rewrite_system(order)?;
    let labels = (0..rs.dim() as u32)
        .map(|i| {
            let e = rs.exponents(i);
            pbw_label(e[0], e[1], e[2])
        })
        .collect();
    let basis = Basis::from_labels(labels)?;
    let table = rs.product_table();
    Algebra::new(f, basis, 0, table)
}

/// Handles on the generators of a built algebra.
#[derive(Debug, Clone)]
pub struct Generators {
    pub k: Element,
    pub kinv: Element,
    pub xp: Element,
    pub xm: Element,
}

pub fn generators(alg: &Algebra) -> Result<Generators> {
    let n = alg.field().order();
    Ok(Generators {
        k: alg.element(&pbw_label(0, 1, 0))?,
        kinv: alg.element(&pbw_label(0, n - 1, 0))?,
        xp: alg.element(&pbw_label(0, 0, 1))?,
        xm: alg.element(&pbw_label(1, 0, 0))?,
    })
}

/// Basis indices of `K`, `K⁻¹`, `Xp`, `Xm`.
pub fn generator_indices(alg: &Algebra) -> Result<Vec<u32>> {
    let n = alg.field().order();
    [pbw_label(0, 1, 0), pbw_label(0, n - 1, 0), pbw_label(0, 0, 1), pbw_label(1, 0, 0)]
        .iter()
        .map(|l| alg.basis().index_of(l))
        .collect()
}

/// The antilinear antimultiplicative involution `K⋆ = K⁻¹`, `Xp⋆ = Xm`,
/// `Xm⋆ = Xp`, so `(Xm^a K^b Xp^c)⋆ = Xm^c K^{-b} Xp^a`.
pub fn star_candidate(alg: &Algebra) -> Result<Vec<Element>> {
    let n = alg.field().order();
    (0..alg.dim() as u32)
        .map(|i| {
            let (a, b, c) = (i / (n * n), (i / n) % n, i % n);
            alg.element(&pbw_label(c, (n - b) % n, a))
        })
        .collect()
}

fn power(alg: &Algebra, e: &Element, k: u32) -> Element {
    (0..k).fold(alg.one(), |acc, _| alg.mul(&acc, e))
}

fn power_tensor(alg: &Algebra, e: &Element, k: u32) -> Element {
    (0..k).fold(alg.unit_tensor(2), |acc, _| alg.mul_tensor(&acc, e))
}

/// Attaches Δ, ε, S for the chosen convention, extended multiplicatively
/// (antimultiplicatively for S) from the generators. No axioms are checked.
pub fn hopf_with(alg: Algebra, convention: CoproductConvention) -> Result<HopfData> {
    use CoproductConvention::*;
    let f = alg.field();
    let order = f.order();
    let g = generators(&alg)?;
    let one = alg.one();
    let (kp, km) = match convention {
        Standard | Opposite => (&g.k, &g.kinv),
        Inverted | InvertedOpposite => (&g.kinv, &g.k),
    };
    // Δ(Xp) = Xp⊗1 + kp⊗Xp, Δ(Xm) = Xm⊗km + 1⊗Xm, flipped for the opposites
    let mut dxp = tensor(&g.xp, &one).add(&tensor(kp, &g.xp));
    let mut dxm = tensor(&g.xm, km).add(&tensor(&one, &g.xm));
    // S is the unique solution of m(S⊗1)Δ = ε on the generators
    let (sxp, sxm) = match convention {
        Standard | Inverted => (alg.mul(km, &g.xp).neg(), alg.mul(&g.xm, kp).neg()),
        Opposite | InvertedOpposite => (alg.mul(&g.xp, km).neg(), alg.mul(kp, &g.xm).neg()),
    };
    if matches!(convention, Opposite | InvertedOpposite) {
        dxp = dxp.flip();
        dxm = dxm.flip();
    }
    let dk = tensor(&g.k, &g.k);
    let mut coproduct = Vec::with_capacity(alg.dim());
    let mut counit = Vec::with_capacity(alg.dim());
    let mut antipode = Vec::with_capacity(alg.dim());
    for a in 0..order {
        for b in 0..order {
            for c in 0..order {
                let d = alg.mul_tensor(
                    &alg.mul_tensor(&power_tensor(&alg, &dxm, a), &power_tensor(&alg, &dk, b)),
                    &power_tensor(&alg, &dxp, c),
                );
                coproduct.push(d);
                counit.push(if a == 0 && c == 0 { f.one() } else { f.zero() });
                let s = alg.mul(
                    &alg.mul(&power(&alg, &sxp, c), &power(&alg, &g.kinv, b)),
                    &power(&alg, &sxm, a),
                );
                antipode.push(s);
            }
        }
    }
    HopfData::new(alg, coproduct, counit, antipode)
}

fn require_pass(reports: &[Report]) -> Result<()> {
    match reports.iter().find(|r| !r.passed()) {
        None => Ok(()),
        Some(r) => Err(Error::AxiomViolation(r.to_string())),
    }
}

/// `R = (1/3) R_K R_X` at N = 3, assembled from its two factors.
pub fn build_r_matrix(alg: &Algebra) -> Result<Element> {
    let f = alg.field();
    if f.order() != 3 {
        return Err(Error::UnsupportedOrder {
            what: "the R-matrix",
            order: f.order(),
        });
    }
    let q = f.q();
    let e = |a, b, c| alg.element(&pbw_label(a, b, c));
    let k = [e(0, 0, 0)?, e(0, 1, 0)?, e(0, 2, 0)?];
    let mut rk = Element::zero(2);
    for (i, j, c) in [
        (0, 0, f.one()),
        (0, 1, f.one()),
        (1, 0, f.one()),
        (0, 2, f.one()),
        (2, 0, f.one()),
        (1, 2, f.q_pow(2)),
        (2, 1, f.q_pow(2)),
        (1, 1, q.clone()),
        (2, 2, q.clone()),
    ] {
        rk.add_scaled(&c, &tensor(&k[i], &k[j]));
    }
    let mut rx = alg.unit_tensor(2);
    rx.add_scaled(&(&q - &f.q_pow(-1)), &tensor(&e(1, 0, 0)?, &e(0, 0, 1)?));
    rx.add_scaled(&(&f.from_int(3) * &q), &tensor(&e(2, 0, 0)?, &e(0, 0, 2)?));
    let third = f.from_int(3).inv()?;
    Ok(alg.mul_tensor(&rk, &rx).scale(&third))
}

/// Outcome of testing one convention against the R-matrix.
#[derive(Debug, Clone)]
pub struct ConventionTrial {
    pub convention: CoproductConvention,
    pub passed: bool,
    pub reports: Vec<Report>,
}

/// Tries every convention with the R-matrix attached; exactly one must pass
/// the Hopf and quasi-triangular axioms.
pub fn select_convention(alg: &Algebra) -> Result<(HopfData, Vec<ConventionTrial>)> {
    let r = build_r_matrix(alg)?;
    let base = hopf_with(alg.clone(), CoproductConvention::Standard)?.with_r(r)?;
    let qt = base.require_qt()?.clone();
    let mut trials = Vec::new();
    let mut winners = Vec::new();
    for conv in CoproductConvention::ALL {
        let h = hopf_with(alg.clone(), conv)?.with_qt(qt.clone());
        let mut reports = check_hopf_axioms(&h);
        reports.extend(check_qt_axioms(&h)?);
        let passed = reports.iter().all(Report::passed);
        trials.push(ConventionTrial {
            convention: conv,
            passed,
            reports,
        });
        if passed {
            winners.push(h);
        }
    }
    if winners.len() != 1 {
        return Err(Error::ConventionMismatch(format!(
            "{} coproduct conventions are compatible with the R-matrix, expected exactly one",
            winners.len()
        )));
    }
    Ok((winners.pop().unwrap(), trials))
}

/// The Hopf algebra at order N with verified axioms. At N = 3 the R-matrix
/// is attached and selects the coproduct convention; otherwise the standard
/// convention is used without an R-matrix.
pub fn build_uqsl2(order: u32) -> Result<HopfData> {
    check_order(order)?;
    let alg = build_algebra(order)?;
    if order == 3 {
        return Ok(select_convention(&alg)?.0);
    }
    let h = hopf_with(alg, CoproductConvention::Standard)?;
    require_pass(&check_hopf_axioms(&h))?;
    Ok(h)
}

/// Like [`build_uqsl2`] with a fixed convention and no R-matrix gate; the
/// Hopf axioms are still verified.
pub fn build_uqsl2_with(order: u32, convention: CoproductConvention) -> Result<HopfData> {
    let h = hopf_with(build_algebra(order)?, convention)?;
    require_pass(&check_hopf_axioms(&h))?;
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{check_all, check_yang_baxter};
    use crate::tensor::Key;
    use std::sync::OnceLock;

    fn h3() -> &'static HopfData {
        static H: OnceLock<HopfData> = OnceLock::new();
        H.get_or_init(|| build_uqsl2(3).unwrap())
    }

    #[test]
    fn normal_forms() {
        let f = field(3).unwrap();
        let mut rs = rewrite_system(3).unwrap();
        let q = f.q();
        // Xp K = q K Xp
        assert_eq!(
            rs.normal_form(&[XP, K]),
            Element::basis(&[rs.index(&[0, 1, 1])], q.clone())
        );
        // Xp Xm = Xm Xp + ((q^2-q)/3)(K - K^2)
        let c = (&f.q_pow(2) - &q).scale(&crate::cyclotomic::Rational::new(1, 3));
        let mut expect = Element::basis(&[rs.index(&[1, 0, 1])], f.one());
        expect.add_term(Key::from_slice(&[rs.index(&[0, 1, 0])]), c.clone());
        expect.add_term(Key::from_slice(&[rs.index(&[0, 2, 0])]), -c);
        assert_eq!(rs.normal_form(&[XP, XM]), expect);
        assert_eq!(rs.dim(), 27);
    }

    #[test]
    fn standard_convention_is_selected() {
        let alg = build_algebra(3).unwrap();
        let (_, trials) = select_convention(&alg).unwrap();
        let passing: Vec<_> = trials.iter().filter(|t| t.passed).map(|t| t.convention).collect();
        assert_eq!(passing, vec![CoproductConvention::Standard]);
    }

    #[test]
    fn full_axiom_suite_at_order_three() {
        let reports = check_all(h3()).unwrap();
        for r in &reports {
            assert!(r.passed(), "{r}");
        }
        assert!(!h3().is_triangular());
    }

    #[test]
    fn r_matrix_display_coefficients() {
        let h = h3();
        let alg = h.algebra();
        let f = h.field();
        let r = h.require_qt().unwrap().r();
        let idx = |a, b, c| alg.basis().index_of(&pbw_label(a, b, c)).unwrap();
        let three = f.from_int(3);
        let coeff = |i, j| r.coeff(&[i, j]).cloned().unwrap_or_else(|| f.zero());
        assert_eq!(&three * &coeff(idx(0, 1, 0), idx(0, 1, 0)), f.q());
        assert_eq!(&three * &coeff(idx(0, 1, 0), idx(0, 2, 0)), f.q_pow(2));
        assert_eq!(&three * &coeff(idx(0, 0, 0), idx(0, 0, 0)), f.one());
    }

    #[test]
    fn trivial_r_fails_quasi_cocommutativity() {
        let h = h3().clone();
        let one2 = h.algebra().unit_tensor(2);
        let trivial = h.clone().with_r(one2).unwrap();
        let reports = check_qt_axioms(&trivial).unwrap();
        let qc = reports.iter().find(|r| r.check == "quasi-cocommutativity").unwrap();
        assert!(!qc.passed());
        assert!(check_yang_baxter(&trivial).unwrap().passed());
    }

    #[test]
    fn opposite_structure_is_quasi_triangular() {
        let opp = h3().opposite().unwrap();
        for r in check_all(&opp).unwrap() {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn order_five_is_a_hopf_algebra() {
        let h = build_uqsl2(5).unwrap();
        assert_eq!(h.dim(), 125);
        assert!(h.qt().is_none());
        assert!(build_r_matrix(h.algebra()).is_err());
    }
}
