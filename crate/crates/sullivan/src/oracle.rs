//! Independent brute-force checks, used to validate the constructive pipeline.
//!
//! Everything here is computed by plain kernel/image linear algebra on degree
//! slices, with no knowledge of how the pipeline builds its generator:
//! cohomology dimension tables, an exact ellipticity decision, Poincaré
//! duality of the table, and the word-length invariant of the fundamental
//! class.
//!
//! Ellipticity is decided through the pure differential: a model is elliptic
//! exactly when its pure part is, and a pure model is elliptic exactly when
//! the quotient of the even subalgebra by the images of the odd generators is
//! finite dimensional. That quotient vanishes above its top degree, which for
//! an elliptic model is at most the formal dimension `N`, and a run of
//! `max generator degree` consecutive zero degrees certifies vanishing
//! forever after, so scanning up to `N + max degree + 1` decides exactly.

use crate::basis::Slices;
use crate::linalg::{class_word_length, cohomology, echelon};
use crate::model::SullivanModel;
use crate::monomial::Monomial;
use crate::poly::Poly;
use crate::scalar::Rat;

/// Dimension of `ΛV^even / (images of the odd generators under the pure
/// differential)` in one degree.
#[must_use]
pub fn quotient_dimension(model: &SullivanModel, degree: u32) -> usize {
    let gens = model.gens();
    let pure = model.diff().pure_part(gens);
    let slices = Slices::new(gens);
    let basis = slices.algebra_even(degree);
    if basis.is_empty() {
        return 0;
    }
    let mut relations: Vec<Vec<Rat>> = Vec::new();
    for i in 0..gens.v_count() {
        let image = pure.image(i);
        if image.is_zero() {
            continue;
        }
        let image_degree = gens.degree(gens.id_of_v(i)) + 1;
        if image_degree > degree {
            continue;
        }
        for u in slices.algebra_even(degree - image_degree).iter() {
            let product = image.mul_monomial(u, gens);
            let coords = product
                .coords_in(&basis)
                .expect("even products stay in the even slice")
                .into_iter()
                .map(|c| c.as_constant().expect("parameter-free").clone())
                .collect();
            relations.push(coords);
        }
    }
    basis.len() - echelon(relations, basis.len()).len()
}

/// Optional ceiling on oracle degree scans, read from the
/// `SULLIVAN_MAX_DEGREE` environment variable. Clamping trades completeness
/// for bounded work on large models.
fn scan_ceiling() -> Option<u32> {
    std::env::var("SULLIVAN_MAX_DEGREE").ok()?.parse().ok()
}

pub(crate) fn capped_scan(bound: u32) -> u32 {
    scan_ceiling().map_or(bound, |ceiling| bound.min(ceiling))
}

/// Exact ellipticity decision (finite-dimensional cohomology).
#[must_use]
pub fn is_elliptic(model: &SullivanModel) -> bool {
    let gens = model.gens();
    if gens.v_count() == 0 {
        return true;
    }
    let n = model.formal_dimension();
    if n < 2 {
        return false;
    }
    let max_degree = gens.max_v_degree();
    let mut run = 0u32;
    for degree in 0..=capped_scan(n as u32 + max_degree + 1) {
        if quotient_dimension(model, degree) == 0 {
            run += 1;
            if run >= max_degree {
                return true;
            }
        } else {
            run = 0;
        }
    }
    false
}

/// Cohomology dimensions in degrees `0..=max_degree`.
#[must_use]
pub fn cohomology_dims(model: &SullivanModel, max_degree: u32) -> Vec<usize> {
    (0..=max_degree).map(|n| cohomology(model, n).dim).collect()
}

/// Largest degree `<= scan_to` with nonzero cohomology.
#[must_use]
pub fn top_nonzero_degree(model: &SullivanModel, scan_to: u32) -> Option<u32> {
    (0..=scan_to).rev().find(|&n| cohomology(model, n).dim > 0)
}

/// Whether the dimension table satisfies `dim H^i = dim H^{N-i}` for the
/// formal dimension `N`. Meaningful for elliptic models.
#[must_use]
pub fn poincare_duality_holds(model: &SullivanModel) -> bool {
    let n = model.formal_dimension();
    if n < 0 {
        return false;
    }
    let n = n as u32;
    let dims = cohomology_dims(model, n);
    (0..=n).all(|i| dims[i as usize] == dims[(n - i) as usize])
}

/// A representative of the one-dimensional top cohomology of an elliptic
/// model; `None` when the model is not elliptic.
#[must_use]
pub fn fundamental_class(model: &SullivanModel) -> Option<Poly> {
    if !is_elliptic(model) {
        return None;
    }
    if model.gens().v_count() == 0 {
        return Some(Poly::one());
    }
    let n = model.formal_dimension() as u32;
    let top = cohomology(model, n);
    assert_eq!(top.dim, 1, "elliptic top cohomology is one-dimensional");
    Some(top.reps[0].clone())
}

/// Brute-force word-length invariant of the fundamental class: the largest
/// `m` such that some representative lives in word length `>= m`.
#[must_use]
pub fn e0_bruteforce(model: &SullivanModel) -> Option<u32> {
    let rep = fundamental_class(model)?;
    if model.gens().v_count() == 0 {
        return Some(0);
    }
    Some(class_word_length(model, &rep))
}

/// The volume form of a model with zero differential: the product of all
/// generators (odd ones once), which spans the top cohomology.
#[must_use]
pub fn free_volume_form(model: &SullivanModel) -> Monomial {
    let gens = model.gens();
    let mut m = Monomial::one();
    for i in 0..gens.v_count() {
        let (mm, sign) = m
            .mul(&Monomial::gen(gens.id_of_v(i)), gens)
            .expect("distinct generators never collide");
        debug_assert_eq!(sign, 1);
        m = mm;
    }
    m
}
