//! Shared test models, constructed directly on the core types.
//!
//! `term` multiplies the named factors in the order written, tracking Koszul
//! signs, so differential formulas can be transcribed verbatim from their
//! usual notation.

use crate::gens::Gens;
use crate::model::{Differential, SullivanModel};
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::scalar::rat;

pub(crate) fn term(gens: &Gens, k: i64, spec: &[(&str, u32)]) -> Poly {
    let mut m = Monomial::one();
    let mut sign = 1i8;
    for &(name, e) in spec {
        let idx = gens
            .v_by_name(name)
            .unwrap_or_else(|| panic!("unknown generator {name}"));
        let g = Monomial::gen(gens.id_of_v(idx));
        for _ in 0..e {
            let (mm, s) = m.mul(&g, gens).expect("factor squares to zero");
            m = mm;
            sign *= s;
        }
    }
    Poly::monomial(m).scale(&rat(k * i64::from(sign)))
}

fn build(gens: Gens, images: Vec<Poly>) -> SullivanModel {
    SullivanModel::new(gens, Differential::new(images)).unwrap()
}

/// Two even and two odd generators, elliptic, formal dimension 8:
/// `d y5 = x2³ - 2 x2 x4`, `d y7 = x4² - x2² x4`. Pure and elliptic.
pub(crate) fn elliptic_dim8() -> SullivanModel {
    let g = Gens::new(vec![("x2", 2), ("x4", 4), ("y5", 5), ("y7", 7)]).unwrap();
    let dy5 = term(&g, 1, &[("x2", 3)]).add(&term(&g, -2, &[("x2", 1), ("x4", 1)]));
    let dy7 = term(&g, 1, &[("x4", 2)]).add(&term(&g, -1, &[("x2", 2), ("x4", 1)]));
    build(g, vec![Poly::zero(), Poly::zero(), dy5, dy7])
}

/// The quadratic part of the dimension-8 example on its own: `d y5 =
/// -2 x2 x4`, `d y7 = x4²`. Pure but not elliptic (`x2` survives forever).
pub(crate) fn quadratic_dim8() -> SullivanModel {
    let g = Gens::new(vec![("x2", 2), ("x4", 4), ("y5", 5), ("y7", 7)]).unwrap();
    let dy5 = term(&g, -2, &[("x2", 1), ("x4", 1)]);
    let dy7 = term(&g, 1, &[("x4", 2)]);
    build(g, vec![Poly::zero(), Poly::zero(), dy5, dy7])
}

/// Six generators, formal dimension 14: `d u = a²`, `d b = a x`,
/// `d v = a b - u x`, `d w = b² - 2 v x`, declared in an order the validator
/// must repair. Purely quadratic, not pure.
pub(crate) fn elliptic_dim14() -> SullivanModel {
    let g = Gens::new(vec![("a", 2), ("b", 4), ("x", 3), ("u", 3), ("v", 5), ("w", 7)]).unwrap();
    let db = term(&g, 1, &[("a", 1), ("x", 1)]);
    let du = term(&g, 1, &[("a", 2)]);
    let dv = term(&g, 1, &[("a", 1), ("b", 1)]).sub(&term(&g, 1, &[("u", 1), ("x", 1)]));
    let dw = term(&g, 1, &[("b", 2)]).sub(&term(&g, 2, &[("v", 1), ("x", 1)]));
    build(g, vec![Poly::zero(), db, Poly::zero(), du, dv, dw])
}

/// Even-dimensional sphere: `Λ(x2, y3)`, `d y3 = x2²`.
pub(crate) fn sphere2() -> SullivanModel {
    let g = Gens::new(vec![("x2", 2), ("y3", 3)]).unwrap();
    let dy = term(&g, 1, &[("x2", 2)]);
    build(g, vec![Poly::zero(), dy])
}

/// Odd-dimensional sphere: one odd generator, zero differential.
pub(crate) fn sphere3() -> SullivanModel {
    let g = Gens::new(vec![("y3", 3)]).unwrap();
    build(g, vec![Poly::zero()])
}

/// Complex projective space of complex dimension `n`:
/// `Λ(x2, y)` with `|y| = 2n + 1`, `d y = x2ⁿ⁺¹`.
pub(crate) fn projective(n: u32) -> SullivanModel {
    let g = Gens::new(vec![("x2", 2), ("y", 2 * n + 1)]).unwrap();
    let dy = term(&g, 1, &[("x2", n + 1)]);
    build(g, vec![Poly::zero(), dy])
}

/// Product of two odd spheres: `Λ(y3, z3)`, zero differential.
pub(crate) fn s3_times_s3() -> SullivanModel {
    let g = Gens::new(vec![("y3", 3), ("z3", 3)]).unwrap();
    build(g, vec![Poly::zero(), Poly::zero()])
}

/// `S² × S³`: `Λ(x2, y3, z3)`, `d y3 = x2²`, `d z3 = 0`.
pub(crate) fn s2_times_s3() -> SullivanModel {
    let g = Gens::new(vec![("x2", 2), ("y3", 3), ("z3", 3)]).unwrap();
    let dy = term(&g, 1, &[("x2", 2)]);
    build(g, vec![Poly::zero(), dy, Poly::zero()])
}

/// One even generator and no differential: minimal but far from elliptic.
pub(crate) fn polynomial_on_one_even() -> SullivanModel {
    let g = Gens::new(vec![("x2", 2)]).unwrap();
    build(g, vec![Poly::zero()])
}
