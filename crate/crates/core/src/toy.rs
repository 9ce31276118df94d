//! Triangular examples: the group algebra of ℤ_N with `R = 1 ⊗ 1` acting
//! on the quantum plane and on the truncated polynomial ring `k[x]/(x^N − 1)`.

use std::sync::Arc;

use crate::braided::StarTable;
use crate::cyclotomic::field;
use crate::error::Result;
use crate::hopf::{cyclic_group_algebra, HopfData};
use crate::qplane::{check_module_algebra, plane_algebra, plane_label, require_pass, ModuleAlgebra};
use crate::tensor::{Algebra, Basis, Element};

/// ℤ_N with the trivial R-matrix.
pub fn toy_hopf(order: u32) -> Result<Arc<HopfData>> {
    Ok(Arc::new(cyclic_group_algebra(order)?))
}

/// `g^k ▷ x^a y^b = q^{ka} x^a y^b` on the quantum plane.
pub fn toy_plane(order: u32) -> Result<ModuleAlgebra> {
    let f = field(order)?;
    let h = toy_hopf(order)?;
    let alg = plane_algebra(order)?;
    let n = order;
    let mut action = Vec::with_capacity((n * n * n) as usize);
    for k in 0..n {
        for i in 0..n * n {
            let a = i / n;
            action.push(Element::basis(&[i], f.q_pow((k * a) as i64)));
        }
    }
    let m = ModuleAlgebra::new(h, alg, action, vec![1])?;
    require_pass(&check_module_algebra(&m))?;
    Ok(m)
}

/// `k[x]/(x^N − 1)` with `g^k ▷ x^a = q^{ka} x^a`.
pub fn toy_line(order: u32) -> Result<ModuleAlgebra> {
    let f = field(order)?;
    let h = toy_hopf(order)?;
    let n = order;
    let basis = Basis::from_labels((0..n).map(|a| format!("x^{a}")).collect())?;
    let table = (0..n * n)
        .map(|ij| Element::basis(&[(ij / n + ij % n) % n], f.one()))
        .collect();
    let alg = Algebra::new(f, basis, 0, table)?;
    let action = (0..n)
        .flat_map(|k| (0..n).map(move |a| (k, a)))
        .map(|(k, a)| Element::basis(&[a], f.q_pow((k * a) as i64)))
        .collect();
    let m = ModuleAlgebra::new(h, alg, action, vec![1])?;
    require_pass(&check_module_algebra(&m))?;
    Ok(m)
}

/// `x⋆ = x`, `y⋆ = y` extended antimultiplicatively: `(x^a y^b)⋆ = y^b x^a`.
pub fn plane_star(alg: &Algebra) -> Result<StarTable> {
    let n = alg.field().order();
    let x = alg.element(&plane_label(1, 0))?;
    let y = alg.element(&plane_label(0, 1))?;
    let pow = |e: &Element, k: u32| (0..k).fold(alg.one(), |acc, _| alg.mul(&acc, e));
    let images = (0..n * n)
        .map(|i| alg.mul(&pow(&y, i % n), &pow(&x, i / n)))
        .collect();
    Ok(StarTable::new(images))
}
