//! The acyclic closure `(ΛV ⊗ ΛsV, d̄)` of a model: one suspension generator
//! `sv` per generator `v`, with `d̄(sv) = v - z_v` and `z_v` supported on
//! strictly earlier generators and their suspensions.
//!
//! `z_v` is determined by `d̄(z_v) = d(v)`, which pins it only up to cocycles,
//! so a canonical representative is fixed: the equation is solved over module
//! monomials carrying a single suspension factor, with candidates ordered so
//! that suspensions of later generators come first, and the Gauss-Jordan
//! particular (free coordinates zero) is taken. Concentrating the correction
//! on the latest suspensions keeps `d̄(sv)` aligned with the row equations the
//! lift stages solve; the same rule reproduces the single-term corrections
//! that suspend the top factor of each image term whenever those are valid.

use std::cmp::Reverse;

use crate::basis::Slices;
use crate::linalg::solve_affine;
use crate::model::SullivanModel;
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::scalar::rat;

#[derive(Debug, Clone)]
pub struct AcyclicClosure {
    model: SullivanModel,
    z: Vec<Poly>,
}

fn suspension_length(m: &Monomial) -> u32 {
    m.factors()
        .iter()
        .filter(|(g, _)| g.is_suspension())
        .map(|&(_, e)| e)
        .sum()
}

/// Applies the closure differential given the images `z_0..z_{i-1}` built so
/// far; every suspension appearing in `p` must already have its `z`.
fn apply_with(model: &SullivanModel, z: &[Poly], p: &Poly) -> Poly {
    let gens = model.gens();
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        for pos in 0..m.factors().len() {
            let g = m.factors()[pos].0;
            let image = if g.is_suspension() {
                let i = g.v_index();
                Poly::monomial(Monomial::gen(gens.id_of_v(i))).sub(&z[i])
            } else {
                model.diff().image(g.v_index()).clone()
            };
            if image.is_zero() {
                continue;
            }
            let (k, rest) = m.derivation_term(pos, gens);
            let term = Poly::monomial(rest).mul(&image, gens).scale(&k);
            out = out.add(&term.scale_coeff(c));
        }
    }
    out
}

impl AcyclicClosure {
    /// Builds the closure generator by generator, in the validated order.
    #[must_use]
    pub fn build(model: &SullivanModel) -> AcyclicClosure {
        let gens = model.gens().clone();
        let slices = Slices::new(&gens);
        let mut z: Vec<Poly> = Vec::new();
        for i in 0..gens.v_count() {
            if model.diff().image(i).is_zero() {
                z.push(Poly::zero());
            } else {
                z.push(Self::solve_closure_equation(model, &slices, &z, i));
            }
        }
        AcyclicClosure { model: model.clone(), z }
    }

    /// Exact solve of `d̄(z) = d(vᵢ)` over earlier-generator module monomials
    /// with `1 <= suspension length <= cap`, widening the cap only if single
    /// suspension factors cannot absorb the image.
    fn solve_closure_equation(
        model: &SullivanModel,
        slices: &Slices<'_>,
        z: &[Poly],
        i: usize,
    ) -> Poly {
        let gens = model.gens();
        let dv = model.diff().image(i);
        let degree = gens.degree(gens.id_of_v(i));
        let pool = slices.module_below(i, degree);
        let codomain = slices.module_below(i, degree + 1);
        let rhs = dv
            .coords_in(&codomain)
            .expect("image lives over earlier generators");
        for cap in 1..=degree {
            let mut candidates: Vec<Monomial> = pool
                .iter()
                .filter(|m| (1..=cap).contains(&suspension_length(m)))
                .cloned()
                .collect();
            candidates.sort_by_key(|m| {
                let top = m
                    .factors()
                    .iter()
                    .filter(|(g, _)| g.is_suspension())
                    .map(|&(g, _)| g.0)
                    .max()
                    .unwrap_or(0);
                (Reverse(top), m.clone())
            });
            if candidates.is_empty() {
                continue;
            }
            let mut rows = vec![vec![rat(0); candidates.len()]; codomain.len()];
            for (j, m) in candidates.iter().enumerate() {
                let image = apply_with(model, z, &Poly::monomial(m.clone()));
                let coords = image
                    .coords_in(&codomain)
                    .expect("closure differential preserves the generator window");
                for (r, c) in coords.into_iter().enumerate() {
                    rows[r][j] = c.as_constant().expect("parameter-free").clone();
                }
            }
            if let Ok(sol) = solve_affine(rows, rhs.clone(), candidates.len()) {
                return Poly::from_coords(&candidates, &sol.particular);
            }
        }
        unreachable!("the acyclic closure equation is always solvable")
    }

    #[must_use]
    pub fn model(&self) -> &SullivanModel {
        &self.model
    }

    /// The correction term of `d̄(svᵢ) = vᵢ - zᵢ`.
    #[must_use]
    pub fn z(&self, i: usize) -> &Poly {
        &self.z[i]
    }

    /// `d̄(svᵢ)` itself.
    #[must_use]
    pub fn boundary_of_suspension(&self, i: usize) -> Poly {
        let gens = self.model.gens();
        Poly::monomial(Monomial::gen(gens.id_of_v(i))).sub(&self.z[i])
    }

    /// The closure differential on an arbitrary module polynomial.
    #[must_use]
    pub fn apply(&self, p: &Poly) -> Poly {
        apply_with(&self.model, &self.z, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{elliptic_dim14, elliptic_dim8, sphere2};
    use crate::gens::GenId;

    #[test]
    fn dim8_corrections_suspend_the_top_factor_of_each_term() {
        let c = AcyclicClosure::build(&elliptic_dim8());
        let g = c.model().gens();
        let y5 = g.v_by_name("y5").unwrap();
        let y7 = g.v_by_name("y7").unwrap();
        assert_eq!(c.z(y5).display(g), "x2^2 sx2 - 2 x2 sx4");
        assert_eq!(c.z(y7).display(g), "-x2^2 sx4 + x4 sx4");
        for i in 0..g.v_count() {
            assert!(c.apply(&c.boundary_of_suspension(i)).is_zero(), "d̄² on s{}", g.v_name(i));
        }
    }

    #[test]
    fn dim14_corrections_concentrate_on_late_suspensions() {
        let c = AcyclicClosure::build(&elliptic_dim14());
        let g = c.model().gens();
        let idx = |n: &str| g.v_by_name(n).unwrap();
        assert_eq!(c.z(idx("u")).display(g), "a sa");
        assert_eq!(c.z(idx("b")).display(g), "a sx");
        assert_eq!(c.z(idx("v")).display(g), "a sb + sx u");
        assert_eq!(c.z(idx("w")).display(g), "-x sv + sx v + b sb");
        for i in 0..g.v_count() {
            assert!(c.apply(&c.boundary_of_suspension(i)).is_zero(), "d̄² on s{}", g.v_name(i));
        }
    }

    #[test]
    fn the_closure_differential_acts_on_suspension_words() {
        let c = AcyclicClosure::build(&elliptic_dim8());
        let g = c.model().gens();
        let sx2 = Monomial::gen(GenId(1));
        let sx4 = Monomial::gen(GenId(3));
        let word = Poly::monomial(sx2.mul(&sx4, g).unwrap().0);
        assert_eq!(c.apply(&word).display(g), "x2 sx4 - sx2 x4");
        assert!(c.apply(&c.apply(&word)).is_zero());
    }

    #[test]
    fn sphere_closure_suspends_the_square() {
        let c = AcyclicClosure::build(&sphere2());
        let g = c.model().gens();
        let y3 = g.v_by_name("y3").unwrap();
        assert_eq!(c.z(y3).display(g), "x2 sx2");
        assert_eq!(
            c.boundary_of_suspension(y3).display(g),
            "-x2 sx2 + y3"
        );
    }
}
