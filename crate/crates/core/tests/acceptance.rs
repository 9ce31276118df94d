//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if any
//! criterion fails.

use std::process::ExitCode;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use qcomm_core::braided::{
    check_antisymmetry, check_chi_yang_baxter, check_covariance, check_inverse_braiding, check_leibniz,
    check_matrix_contrast, export_qlie, jacobi_operator, jacobi_operator_residual, jacobi_operator_residual_given,
    jacobi_residual, verify_qlie, Braiding,
};
use qcomm_core::hopf::{
    check_hopf_axioms, check_qt_axioms, check_r_counit_antipode, check_yang_baxter, HopfData, QTStructure,
};
use qcomm_core::qplane::{
    build_qplane_over, check_chi_fixture_table, check_dual_path, check_module_algebra, check_products_match,
    relation_product_table, ExtendedPlane,
};
use qcomm_core::toy::{toy_line, toy_plane};
use qcomm_core::uqsl2::{build_uqsl2, pbw_label};
use qcomm_core::{tensor, Counterexample, Element, Report};

type Outcome = Result<Vec<Report>, String>;
type Criterion = (&'static str, fn() -> Outcome);

struct Context {
    hopf: Arc<HopfData>,
    plane: Braiding,
    extended: ExtendedPlane,
    ext: Braiding,
}

fn hopf_and_build_time() -> &'static (Arc<HopfData>, Duration) {
    static H: OnceLock<(Arc<HopfData>, Duration)> = OnceLock::new();
    H.get_or_init(|| {
        let t = Instant::now();
        let h = Arc::new(build_uqsl2(3).expect("U_q(sl2) at N = 3"));
        (h, t.elapsed())
    })
}

fn ctx() -> &'static Context {
    static C: OnceLock<Context> = OnceLock::new();
    C.get_or_init(|| {
        let hopf = hopf_and_build_time().0.clone();
        let plane_module = build_qplane_over(hopf.clone()).expect("quantum plane");
        let extended = ExtendedPlane::build_over(plane_module.clone()).expect("extended plane");
        let plane = Braiding::new(Arc::new(plane_module)).expect("plane braiding");
        let ext = Braiding::new(Arc::new(extended.module.clone())).expect("extended braiding");
        Context {
            hopf,
            plane,
            extended,
            ext,
        }
    })
}

fn el(b: &Braiding, name: &str) -> Result<Element, String> {
    b.basis()
        .find(name)
        .map(|i| b.algebra().basis_element(i))
        .ok_or_else(|| format!("no basis element `{name}`"))
}

fn ok(check: &str, cond: bool, detail: impl FnOnce() -> (String, String)) -> Report {
    if cond {
        Report::pass(check, 1)
    } else {
        let (lhs, rhs) = detail();
        Report::fail(
            check,
            1,
            Counterexample {
                inputs: vec![],
                lhs,
                rhs,
            },
        )
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn r_matrix_axioms() -> Outcome {
    let t = Instant::now();
    let (h, build) = hopf_and_build_time();
    let mut out = check_qt_axioms(h).map_err(err)?;
    if out.iter().find(|r| r.check == "quasi-cocommutativity").map(|r| r.cases) != Some(27) {
        return Err("quasi-cocommutativity did not sweep 27 basis elements".into());
    }
    out.push(check_yang_baxter(h).map_err(err)?);
    out.extend(check_r_counit_antipode(h).map_err(err)?);
    let total = *build + t.elapsed();
    out.push(ok("total runtime under 60 s", total < Duration::from_secs(60), || {
        (format!("{:.1} s", total.as_secs_f64()), "60 s".into())
    }));
    Ok(out)
}

const CHI_TABLE: [(&str, &str, &str); 16] = [
    ("x", "x", "q^2 * x (x) x"),
    ("y", "x", "q * x (x) y"),
    ("x", "y", "q * y (x) x + (q^2-1) x (x) y"),
    ("y", "y", "q^2 * y (x) y"),
    ("dx", "x", "q * x (x) dx"),
    ("dy", "x", "q^2 * x (x) dy"),
    ("dx", "y", "q^2 * y (x) dx"),
    ("dy", "y", "q * y (x) dy + (q-1) x (x) dx"),
    ("x", "dx", "(q^2-q) dy (x) y + q * dx (x) x"),
    ("y", "dx", "q^2 * dx (x) y"),
    ("dx", "dx", "q^2 * dx (x) dx"),
    ("dy", "dx", "(q^2-1) dy (x) dx + q * dx (x) dy"),
    ("x", "dy", "q^2 * dy (x) x"),
    ("y", "dy", "q * dy (x) y"),
    ("dx", "dy", "q * dy (x) dx"),
    ("dy", "dy", "q^2 * dy (x) dy"),
];

fn chi_fixtures() -> Outcome {
    let c = ctx();
    let mut out = vec![check_chi_fixture_table(&c.ext).map_err(err)?];
    for (l, r, want) in CHI_TABLE {
        let got = c.ext.chi(&tensor(&el(&c.ext, l)?, &el(&c.ext, r)?)).pretty(c.ext.basis());
        out.push(ok(&format!("chi({l}, {r}) prints as `{want}`"), got == want, || (got.clone(), want.into())));
    }
    for (l, r, _) in &CHI_TABLE[..4] {
        let got = c.plane.chi(&tensor(&el(&c.plane, l)?, &el(&c.plane, r)?)).pretty(c.plane.basis());
        let want = CHI_TABLE.iter().find(|t| t.0 == *l && t.1 == *r).unwrap().2;
        out.push(ok(&format!("chi({l}, {r}) on the plane"), got == want, || (got.clone(), want.into())));
    }
    Ok(out)
}

fn commutator_fixtures() -> Outcome {
    let c = ctx();
    let f = c.ext.field();
    let e = |n: &str| el(&c.ext, n);
    let one = c.ext.algebra().one();
    let cases = [
        ("x", "x", e("x^2")?.scale(&(f.one() - f.q_pow(2))), "(1-q^2) x^2"),
        (
            "dx",
            "x",
            one.add(&e("x dx")?.scale(&(f.q_pow(2) - f.q())))
                .add(&e("y dy")?.scale(&(f.q_pow(2) - f.one()))),
            "1 + (q^2-1) y dy + (q^2-q) x dx",
        ),
        ("x", "dx", one.scale(&-f.q_pow(2)), "-q^2"),
    ];
    let mut out = Vec::new();
    for (l, r, want, printed) in cases {
        let got = c.ext.q_commutator(&e(l)?, &e(r)?);
        out.push(ok(&format!("[{l}, {r}] = {printed}"), got == want && got.pretty(c.ext.basis()) == printed, || {
            (got.pretty(c.ext.basis()), printed.into())
        }));
    }
    let px = el(&c.plane, "x")?;
    let got = c.plane.q_commutator(&px, &px).pretty(c.plane.basis());
    out.push(ok("[x, x] on the plane", got == "(1-q^2) x^2", || (got.clone(), "(1-q^2) x^2".into())));
    Ok(out)
}

fn leibniz() -> Outcome {
    let c = ctx();
    let mut out = check_leibniz(&c.plane);
    let t = Instant::now();
    out.extend(check_leibniz(&c.ext));
    let el = t.elapsed();
    out.push(ok("extended-plane sweep under 10 min", el < Duration::from_secs(600), || {
        (format!("{:.1} s", el.as_secs_f64()), "600 s".into())
    }));
    for (i, r) in out[..12].iter().enumerate() {
        let want = if i < 6 { 729 } else { 531441 };
        if r.cases != want {
            return Err(format!("{} swept {} triples, expected {want}", r.check, r.cases));
        }
    }
    Ok(out)
}

fn covariance() -> Outcome {
    let c = ctx();
    let out = vec![check_covariance(&c.plane), check_covariance(&c.ext)];
    for (r, pairs) in out.iter().zip([81usize, 6561]) {
        if r.cases != 4 * pairs {
            return Err(format!("covariance swept {} cases, expected {}", r.cases, 4 * pairs));
        }
    }
    Ok(out)
}

fn antisymmetry() -> Outcome {
    let c = ctx();
    let mut out = check_antisymmetry(&c.plane);
    out.extend(check_antisymmetry(&c.ext));
    let qt = c.hopf.require_qt().map_err(err)?;
    out.push(ok("R-bar is the flip of the inverse of R", qt.rbar() == &qt.rinv().flip(), || {
        ("R-bar".into(), "flip(R^-1)".into())
    }));
    Ok(out)
}

fn chi_yang_baxter() -> Outcome {
    let r = check_chi_yang_baxter(&ctx().plane);
    if r.cases != 729 {
        return Err(format!("swept {} triples, expected 729", r.cases));
    }
    Ok(vec![r])
}

/// `[u, v]` expanded directly as `uv − m(χ(u⊗v))`, without the commutator
/// tables.
fn direct_commutator(b: &Braiding, u: &Element, v: &Element) -> Element {
    let alg = b.algebra();
    alg.mul(u, v).sub(&alg.multiply_out(&b.chi(&tensor(u, v))))
}

fn jacobi() -> Outcome {
    let c = ctx();
    let b = &c.plane;
    let f = b.field();
    let alg = b.algebra();
    let x = el(b, "x")?;
    let mut out = Vec::new();

    let residual = jacobi_residual(b, &x, &x, &x);
    let expected = alg.one().scale(&(f.from_int(-3) * f.q_pow(2)));
    out.push(ok("residual at (x, x, x) is -3q^2", residual == expected, || {
        (residual.pretty(b.basis()), expected.pretty(b.basis()))
    }));
    let lhs = direct_commutator(b, &direct_commutator(b, &x, &x), &x);
    let mut rhs = direct_commutator(b, &x, &direct_commutator(b, &x, &x));
    for (k, coef) in b.chi(&tensor(&x, &x)).terms() {
        let inner = direct_commutator(b, &x, &alg.basis_element(k[0]));
        rhs.add_scaled(coef, &direct_commutator(b, &inner, &alg.basis_element(k[1])));
    }
    out.push(ok("direct expansion: left side is 3", lhs == alg.one().scale(&f.from_int(3)), || {
        (lhs.pretty(b.basis()), "3".into())
    }));
    out.push(ok("direct expansion agrees with the residual", lhs.sub(&rhs) == residual, || {
        (lhs.sub(&rhs).pretty(b.basis()), residual.pretty(b.basis()))
    }));
    let xxx = tensor(&tensor(&x, &x), &x);
    let d = jacobi_operator(b, &xxx);
    out.push(ok("operator display on x (x) x (x) x is 3q^2", d == xxx.scale(&(f.from_int(3) * f.q_pow(2))), || {
        (d.pretty(b.basis()), "3q^2 * x (x) x (x) x".into())
    }));

    let analysis = jacobi_operator_residual(b).map_err(err)?;
    out.push(ok(
        "non-triangular H: display nonzero",
        !analysis.triangular && !analysis.operator_vanishes,
        || (format!("{:?}", analysis.witness), "a nonzero witness".into()),
    ));
    out.extend(analysis.reports);

    for toy in [toy_plane(3).map_err(err)?, toy_line(3).map_err(err)?] {
        let tb = Braiding::new(Arc::new(toy)).map_err(err)?;
        let n = tb.dim() as u32;
        let nonzero = (0..n * n * n).find(|i| {
            let e = |k: u32| tb.algebra().basis_element(k);
            !jacobi_residual(&tb, &e(i / (n * n)), &e((i / n) % n), &e(i % n)).is_zero()
        });
        out.push(ok("triangular toy: residual vanishes on every triple", nonzero.is_none(), || {
            (format!("triple #{nonzero:?}"), "0".into())
        }));
        let a = jacobi_operator_residual(&tb).map_err(err)?;
        out.push(ok("triangular toy: display vanishes", a.triangular && a.operator_vanishes, || {
            (format!("{:?}", a.witness), "no witness".into())
        }));
        out.extend(a.reports);
    }
    Ok(out)
}

fn matrix_contrast() -> Outcome {
    check_matrix_contrast(&ctx().plane).map_err(err)
}

fn qlie_export() -> Outcome {
    let b = &ctx().plane;
    let f = b.field();
    let all: Vec<u32> = (0..b.dim() as u32).collect();
    let full = export_qlie(b, &all).map_err(err)?;
    let mut out = verify_qlie(b, &full);
    out.push(ok("full plane basis is closed", full.closed, || ("not closed".into(), "closed".into())));
    let x = b.basis().find("x").unwrap() as usize;
    let x2 = b.basis().find("x^2").unwrap() as usize;
    let cxx = full.c.get(&(x, x, x2)).cloned();
    out.push(ok("C entry of [x, x] on x^2 is 1-q^2", cxx == Some(f.one() - f.q_pow(2)), || {
        (format!("{cxx:?}"), "1-q^2".into())
    }));
    let span = [b.basis().find("x").unwrap(), b.basis().find("y").unwrap()];
    let small = export_qlie(b, &span).map_err(err)?;
    out.extend(verify_qlie(b, &small));
    out.push(ok("span{x, y} is flagged as not closed", !small.closed, || {
        ("closed".into(), "not closed".into())
    }));
    Ok(out)
}

fn dual_path() -> Outcome {
    let r = check_dual_path(&ctx().extended).map_err(err)?;
    if r.cases != 6561 {
        return Err(format!("compared {} pairs, expected 6561", r.cases));
    }
    Ok(vec![r])
}

/// A checker fed corrupted data must fail with a counterexample that names
/// its inputs.
fn localized(name: &str, reports: &[Report]) -> Report {
    let fail = reports.iter().find(|r| !r.passed());
    let good = fail.and_then(|r| r.counterexample.as_ref()).is_some_and(|cx| !cx.inputs.is_empty());
    ok(&format!("negative control: {name}"), good, || match fail {
        None => ("all checks pass".into(), "a failure".into()),
        Some(r) => (r.to_string(), "a counterexample with inputs".into()),
    })
}

fn negative_controls() -> Outcome {
    let c = ctx();
    let h = &c.hopf;
    let f = h.field();
    let halg = h.algebra();
    let hidx = |a, b, cc| halg.basis().index_of(&pbw_label(a, b, cc)).unwrap();
    let (xp, xm) = (hidx(0, 0, 1), hidx(1, 0, 0));
    let n = h.dim() as u32;
    let qt = h.require_qt().map_err(err)?.clone();
    let mut out = Vec::new();

    let mut coproduct: Vec<Element> = (0..n).map(|i| h.coproduct_basis(i).clone()).collect();
    coproduct[xp as usize] = tensor(&halg.basis_element(xp), &halg.one());
    let bad_delta = HopfData::new(
        halg.clone(),
        coproduct,
        (0..n).map(|i| h.counit_basis(i).clone()).collect(),
        (0..n).map(|i| h.antipode_basis(i).clone()).collect(),
    )
    .map_err(err)?;
    out.push(localized("hopf axioms with a corrupted coproduct", &check_hopf_axioms(&bad_delta)));

    let one2 = halg.unit_tensor(2);
    let trivial = h.as_ref().clone().with_qt(QTStructure::from_parts(one2.clone(), one2));
    out.push(localized("quasi-triangularity with R = 1 (x) 1", &check_qt_axioms(&trivial).map_err(err)?));

    let bent = qt.r().add(&tensor(&halg.basis_element(xp), &halg.basis_element(xm)));
    let bad_r = h.as_ref().clone().with_qt(QTStructure::from_parts(bent.clone(), qt.rinv().clone()));
    let yb = check_yang_baxter(&bad_r).map_err(err)?;
    out.push(ok("negative control: Yang-Baxter with a perturbed R", !yb.passed(), || {
        ("passes".into(), "fails".into())
    }));
    let spurious = qt.r().add(&tensor(&halg.one(), &halg.basis_element(hidx(0, 1, 0))));
    let bad_eps = h.as_ref().clone().with_qt(QTStructure::from_parts(spurious, qt.rinv().clone()));
    let eps = check_r_counit_antipode(&bad_eps).map_err(err)?;
    out.push(ok("negative control: counit of R with a spurious term", eps.iter().any(|r| !r.passed()), || {
        ("passes".into(), "fails".into())
    }));

    let plane = c.plane.module();
    let py = plane.basis().find("y").unwrap();
    let mut table = plane.action_table().to_vec();
    let at = xp as usize * plane.dim() + py as usize;
    table[at] = table[at].scale(&f.from_int(2));
    let bad_action = plane.with_action(table).map_err(err)?;
    out.push(localized("module-algebra law with a corrupted action", &check_module_algebra(&bad_action)));

    let b = &c.plane;
    let (x, y) = (b.basis().find("x").unwrap(), b.basis().find("y").unwrap());
    let swapped = b.with_chi_entry(x, y, Element::basis(&[y, x], f.one())).map_err(err)?;
    out.push(localized("Leibniz with a corrupted braiding", &check_leibniz(&swapped)));
    out.push(localized("braid relation with a corrupted braiding", &[check_chi_yang_baxter(&swapped)]));
    out.push(localized("reference table with a corrupted braiding", &[check_chi_fixture_table(&swapped).map_err(err)?]));

    let moved = Braiding::from_tables(Arc::new(bad_action), b.chi_table().to_vec(), b.chi_bar_table().to_vec())
        .map_err(err)?;
    out.push(localized("covariance with a corrupted action", &[check_covariance(&moved)]));

    let mut bar = b.chi_bar_table().to_vec();
    bar[x as usize * b.dim() + x as usize] = Element::basis(&[x, x], f.one());
    let bad_bar = Braiding::from_tables(b.module().clone(), b.chi_table().to_vec(), bar).map_err(err)?;
    out.push(localized("antisymmetry with a corrupted inverse braiding", &check_antisymmetry(&bad_bar)));
    out.push(localized("inverse braiding with a corrupted table", &check_inverse_braiding(&bad_bar)));

    let toy = Braiding::new(Arc::new(toy_plane(3).map_err(err)?)).map_err(err)?;
    let (tx, ty) = (toy.basis().find("x").unwrap(), toy.basis().find("y").unwrap());
    let bent_toy = toy
        .with_chi_entry(tx, ty, toy.chi_basis(tx, ty).scale(&f.q()))
        .map_err(err)?;
    let a = jacobi_operator_residual_given(&bent_toy, &[]).map_err(err)?;
    out.push(localized("Jacobi dichotomy with a non-involutive braiding on a triangular H", &a.reports));

    let all: Vec<u32> = (0..b.dim() as u32).collect();
    let mut ex = export_qlie(b, &all).map_err(err)?;
    let key = *ex.sigma.keys().find(|k| k.0 == x as usize && k.1 == y as usize).unwrap();
    ex.sigma.insert(key, f.from_int(7));
    out.push(localized("q-Lie export with a corrupted sigma", &verify_qlie(b, &ex)));

    let alg = c.extended.module.algebra();
    let mut rel = relation_product_table(3).map_err(err)?;
    let dx = alg.basis().find("dx").unwrap();
    let ex_ = alg.basis().find("x").unwrap();
    rel[(dx * alg.dim() as u32 + ex_) as usize] = alg.one();
    out.push(localized("dual path with a corrupted relation", &[check_products_match(alg, &rel)]));
    Ok(out)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("R-matrix axioms", r_matrix_axioms),
        ("braiding fixtures", chi_fixtures),
        ("commutator fixtures", commutator_fixtures),
        ("Leibniz suites", leibniz),
        ("covariance", covariance),
        ("antisymmetry", antisymmetry),
        ("braid relation for the braiding", chi_yang_baxter),
        ("Jacobi dichotomy", jacobi),
        ("matrix commutator contrast", matrix_contrast),
        ("q-Lie export", qlie_export),
        ("dual-path oracle", dual_path),
        ("negative controls", negative_controls),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(reports) if reports.iter().all(Report::passed) => {
                println!("PASS {:>2} {name} ({} checks, {secs:.1} s)", i + 1, reports.len());
            }
            Ok(reports) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1} s)", i + 1);
                for r in reports.iter().filter(|r| !r.passed()) {
                    println!("       {r}");
                }
            }
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
