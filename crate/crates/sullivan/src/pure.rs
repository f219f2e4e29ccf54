//! Generating morphism of the differential Ext module over a pure model.
//!
//! For a pure model the acyclic-closure boundaries of the suspensions only
//! involve suspensions of earlier generators, so a `ΛV`-linear morphism `f`
//! of degree `N` (the formal dimension) can be built one row at a time: fix
//! `f(1) = ω`, then for each generator in order solve
//!
//! ```text
//! d(f(sv)) = (-1)^N f(v - z_v)
//! ```
//!
//! for `f(sv)`, an exact linear system over a finite monomial slice. Every
//! right-hand side is determined by earlier rows, and a solved system
//! contributes its kernel as fresh free parameters, so the result is the
//! full affine family of closed morphisms over the chosen seed.
//!
//! The seed is a top-degree cocycle. When the model is elliptic it is a
//! representative of the one-dimensional top cohomology; otherwise it is
//! drawn from the space of coboundaries `ω ∈ im d` with `x·ω ∈ im d` for
//! every even generator `x`, which plays the same role when the top
//! cohomology vanishes. Seeds whose rows cannot all be solved, or whose
//! resulting morphism is exact for every parameter value, are discarded and
//! the next candidate is tried.
//!
//! Values on suspensions are sought among monomials with at least one odd
//! factor; when the differential is word homogeneous the solve is further
//! restricted to the single word length compatible with the right-hand
//! side. Both restrictions cut the solution families down to the essential
//! freedom without losing solvability.

use num_traits::Zero;
use thiserror::Error;

use crate::basis::Slices;
use crate::closure::AcyclicClosure;
use crate::hom::{Extension, ModuleMorphism};
use crate::linalg::{self, matrix_of, solve_affine, Infeasible};
use crate::model::SullivanModel;
use crate::monomial::Monomial;
use crate::oracle;
use crate::param::{Coeff, ParamId, ParamSupply};
use crate::poly::Poly;
use crate::scalar::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PureError {
    #[error("the differential is not pure")]
    NotPure,
    #[error("formal dimension {0} is negative; no generator in nonnegative degree")]
    NegativeFormalDimension(i64),
    #[error("no seed yields a closed non-exact morphism ({tried} candidate(s) tried)")]
    NoGenerator { tried: usize },
}

/// A closed, generically non-exact morphism family of degree `N` over a pure
/// model, together with how it was found.
#[derive(Debug)]
pub struct PureGenerator {
    /// The morphism family; kernel directions of the row solves appear as
    /// free parameters.
    pub morphism: ModuleMorphism,
    /// The seed value on the empty word.
    pub omega: Poly,
    /// Free parameters remaining in the family.
    pub family: Vec<ParamId>,
    /// Pins that later rows forced on earlier row parameters.
    pub pins: Vec<(ParamId, Coeff)>,
    /// Whether the seed came from the top cohomology class (elliptic case)
    /// rather than from the constrained coboundary space.
    pub elliptic_seed: bool,
    /// Number of seeds attempted, the successful one included.
    pub candidates_tried: usize,
}

/// Builds the generator with an automatically chosen seed.
pub fn generator(
    model: &SullivanModel,
    supply: &mut ParamSupply,
) -> Result<PureGenerator, PureError> {
    let n = prepare(model)?;
    let elliptic = oracle::is_elliptic(model);
    if elliptic && model.diff().is_zero() {
        // Zero differential and elliptic means every generator is odd: the
        // volume form kills each v, so f(1) = volume, f(sv) = 0 is closed,
        // and nothing nonzero is exact.
        let omega = Poly::monomial(oracle::free_volume_form(model));
        let mut morphism = ModuleMorphism::zero(n);
        morphism.set_value(Monomial::one(), omega.clone());
        return Ok(PureGenerator {
            morphism,
            omega,
            family: Vec::new(),
            pins: Vec::new(),
            elliptic_seed: true,
            candidates_tried: 1,
        });
    }
    let candidates = if elliptic {
        oracle::fundamental_class(model).into_iter().collect()
    } else {
        constrained_coboundaries(model, n as u32)
    };
    run_candidates(model, candidates, elliptic, supply)
}

/// Builds the generator from a caller-supplied seed value `ω` (a top-degree
/// cocycle). Fails if the rows cannot be solved over this seed or every
/// member of the resulting family is exact.
pub fn generator_with_seed(
    model: &SullivanModel,
    omega: Poly,
    supply: &mut ParamSupply,
) -> Result<PureGenerator, PureError> {
    prepare(model)?;
    let elliptic = oracle::is_elliptic(model);
    run_candidates(model, vec![omega], elliptic, supply)
}

fn prepare(model: &SullivanModel) -> Result<i64, PureError> {
    if !model.is_pure() {
        return Err(PureError::NotPure);
    }
    let n = model.formal_dimension();
    if n < 0 {
        return Err(PureError::NegativeFormalDimension(n));
    }
    Ok(n)
}

fn run_candidates(
    model: &SullivanModel,
    candidates: Vec<Poly>,
    elliptic_seed: bool,
    supply: &mut ParamSupply,
) -> Result<PureGenerator, PureError> {
    let closure = AcyclicClosure::build(model);
    let mut tried = 0;
    for omega in candidates {
        if omega.is_zero() {
            continue;
        }
        tried += 1;
        let Ok((morphism, pins)) = closed_rows(model, &closure, &omega, supply) else {
            continue;
        };
        if is_generically_exact(model, &closure, &morphism, supply) {
            continue;
        }
        let family = morphism.params().into_iter().collect();
        return Ok(PureGenerator {
            morphism,
            omega,
            family,
            pins,
            elliptic_seed,
            candidates_tried: tried,
        });
    }
    Err(PureError::NoGenerator { tried })
}

/// Solves the closedness equations row by row in generator order. Fails on
/// the first row whose system is infeasible.
fn closed_rows(
    model: &SullivanModel,
    closure: &AcyclicClosure,
    omega: &Poly,
    supply: &mut ParamSupply,
) -> Result<(ModuleMorphism, Vec<(ParamId, Coeff)>), Infeasible> {
    let gens = model.gens();
    let slices = Slices::new(gens);
    let n = model.formal_dimension();
    let homogeneous_k = if model.diff().is_word_homogeneous() {
        model.k()
    } else {
        None
    };
    let omega_wl = match (omega.min_word_length(), omega.max_word_length()) {
        (Some(a), Some(b)) if a == b => Some(a),
        _ => None,
    };

    let mut f = ModuleMorphism::zero(n);
    f.set_value(Monomial::one(), omega.clone());
    let mut pins: Vec<(ParamId, Coeff)> = Vec::new();
    for i in 0..gens.v_count() {
        let boundary = closure.boundary_of_suspension(i);
        let applied = f
            .apply(&boundary, gens, Extension::Strict)
            .expect("pure closure boundaries only involve earlier suspensions");
        let rhs = if n % 2 == 0 { applied } else { applied.neg() };
        let degree = u32::try_from(n + i64::from(gens.degree(gens.id_of_v(i))) - 1)
            .expect("row degree is nonnegative");
        let basis = value_slice(&slices, degree, homogeneous_k, &rhs, omega_wl);
        let (value, mut new_pins) = solve_value(model, &slices, &basis, &rhs, supply)?;
        for (id, val) in &new_pins {
            f = f.substitute_param(*id, val);
            for (_, earlier) in pins.iter_mut() {
                *earlier = earlier.substitute(*id, val);
            }
        }
        pins.append(&mut new_pins);
        f.set_value(Monomial::gen(gens.id_of_sv(i)), value);
    }
    debug_assert_eq!(
        crate::hom::is_closed_on(model, closure, &f, &row_words(model), Extension::Zero),
        Some(true)
    );
    Ok((f, pins))
}

fn row_words(model: &SullivanModel) -> Vec<Monomial> {
    std::iter::once(Monomial::one())
        .chain(model.gens().sv_ids().map(Monomial::gen))
        .collect()
}

/// The monomial slice a row value is solved over: at least one odd factor,
/// and a single word length when the differential is word homogeneous.
fn value_slice(
    slices: &Slices,
    degree: u32,
    homogeneous_k: Option<u32>,
    rhs: &Poly,
    omega_wl: Option<u32>,
) -> Vec<Monomial> {
    let gens = slices.gens();
    let Some(k) = homogeneous_k else {
        return slices.algebra_with_odd_factor(degree);
    };
    // Applying d raises word length by k - 1, so the value sits k - 1 below
    // its right-hand side; a zero right-hand side pins the length through
    // the seed instead (each row adds one factor and one application of d).
    let target = if rhs.is_zero() {
        omega_wl.map(|w| i64::from(w) + 2 - i64::from(k))
    } else {
        match (rhs.min_word_length(), rhs.max_word_length()) {
            (Some(a), Some(b)) if a == b => Some(i64::from(a) + 1 - i64::from(k)),
            _ => None,
        }
    };
    match target {
        Some(t) if t >= 1 => {
            let t = t as u32;
            slices
                .algebra_word_length(degree, t)
                .into_iter()
                .filter(|m| m.odd_factor_count(gens) >= 1)
                .collect()
        }
        // No monomial fits the required length: only the zero value can work.
        Some(_) => Vec::new(),
        None => slices.algebra_with_odd_factor(degree),
    }
}

/// Solves `d(value) = rhs` over the given monomial slice, returning the
/// affine family (fresh parameters for kernel directions) and any pins the
/// system forced on ambient parameters.
fn solve_value(
    model: &SullivanModel,
    slices: &Slices,
    basis: &[Monomial],
    rhs: &Poly,
    supply: &mut ParamSupply,
) -> Result<(Poly, Vec<(ParamId, Coeff)>), Infeasible> {
    let gens = model.gens();
    if basis.is_empty() {
        if rhs.is_zero() {
            return Ok((Poly::zero(), Vec::new()));
        }
        // No unknowns: the right-hand side itself must vanish, possibly by
        // pinning parameters it contains.
        let monomials: Vec<Monomial> = rhs.terms().map(|(m, _)| m.clone()).collect();
        let coords = rhs.coords_in(&monomials).expect("self coordinates");
        let sol = solve_affine(vec![Vec::new(); coords.len()], coords, 0)?;
        return Ok((Poly::zero(), sol.pins));
    }
    let image_degree = basis[0].degree(gens) + 1;
    let codomain = slices.algebra(image_degree);
    let matrix = matrix_of(basis, &codomain, |m| {
        model.diff().apply(&Poly::monomial(m.clone()), gens)
    })
    .expect("differential images lie in the full degree slice");
    let rhs_coords = rhs
        .coords_in(&codomain)
        .expect("right-hand side lies in the image degree slice");
    let sol = solve_affine(matrix, rhs_coords, basis.len())?;
    let (coords, _fresh) = sol.family(supply);
    Ok((Poly::from_coords(basis, &coords), sol.pins))
}

/// Whether `f` is exact for every value of its parameters: solves `Dg = f`
/// row by row. A solve that only succeeds by pinning one of `f`'s own
/// parameters means some members are exact but not all, which counts as
/// non-exact here.
fn is_generically_exact(
    model: &SullivanModel,
    closure: &AcyclicClosure,
    f: &ModuleMorphism,
    supply: &mut ParamSupply,
) -> bool {
    let gens = model.gens();
    let slices = Slices::new(gens);
    let n = f.degree();
    let floor = supply.peek();
    let negative = (n - 1).rem_euclid(2) == 1;
    let mut g = ModuleMorphism::zero(n - 1);
    for word in row_words(model) {
        let target = f.value(&word).cloned().unwrap_or_else(Poly::zero);
        let rhs = if word.is_one() {
            target
        } else {
            let i = word.factors()[0].0.v_index();
            let correction = g
                .apply(&closure.boundary_of_suspension(i), gens, Extension::Strict)
                .expect("pure closure boundaries only involve earlier suspensions");
            // d(g(sv)) = f(sv) + (-1)^{|g|} g(v - z_v)
            if negative {
                target.sub(&correction)
            } else {
                target.add(&correction)
            }
        };
        let word_degree = i64::from(word.degree(gens));
        let degree = n - 1 + word_degree;
        let basis: Vec<Monomial> = if degree < 0 {
            Vec::new()
        } else {
            slices.algebra(degree as u32).to_vec()
        };
        match solve_value(model, &slices, &basis, &rhs, supply) {
            Ok((value, pins)) => {
                if pins.iter().any(|(id, _)| id.0 < floor.0) {
                    return false;
                }
                for (id, val) in &pins {
                    g = g.substitute_param(*id, val);
                }
                g.set_value(word, value);
            }
            Err(Infeasible) => return false,
        }
    }
    true
}

/// Deterministic basis of `{ω ∈ im d : x·ω ∈ im d for every even generator
/// x}` in the given degree, as echelon representatives ordered by leading
/// monomial.
fn constrained_coboundaries(model: &SullivanModel, degree: u32) -> Vec<Poly> {
    let gens = model.gens();
    let slices = Slices::new(gens);
    let image_echelon = |deg: u32| -> Vec<Vec<Rat>> {
        if deg == 0 {
            return Vec::new();
        }
        let codomain = slices.algebra(deg);
        let vectors: Vec<Vec<Rat>> = slices
            .algebra(deg - 1)
            .iter()
            .filter_map(|m| {
                let image = model.diff().apply(&Poly::monomial(m.clone()), gens);
                if image.is_zero() {
                    return None;
                }
                let coords = image.coords_in(&codomain).expect("image stays in slice");
                Some(
                    coords
                        .iter()
                        .map(|c| c.as_constant().expect("parameter free").clone())
                        .collect(),
                )
            })
            .collect();
        linalg::echelon(vectors, codomain.len())
    };

    let ambient = slices.algebra(degree);
    let coboundaries = image_echelon(degree);
    if coboundaries.is_empty() {
        return Vec::new();
    }

    // Unknowns: coefficients over the coboundary basis. Constraints: for each
    // even generator x, the product x·ω reduces to zero against the image
    // echelon one slice up.
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for x in gens.even_v_ids() {
        let shifted_degree = degree + gens.degree(x);
        let codomain = slices.algebra(shifted_degree);
        let image = image_echelon(shifted_degree);
        let reduced: Vec<Vec<Rat>> = coboundaries
            .iter()
            .map(|b| {
                let shifted = linalg::poly_from_rat_coords(&ambient, b)
                    .mul_monomial(&Monomial::gen(x), gens);
                let coords: Vec<Rat> = shifted
                    .coords_in(&codomain)
                    .expect("product stays in slice")
                    .iter()
                    .map(|c| c.as_constant().expect("parameter free").clone())
                    .collect();
                linalg::reduce_mod(coords, &image)
            })
            .collect();
        for r in 0..codomain.len() {
            if reduced.iter().any(|w| !w[r].is_zero()) {
                rows.push(reduced.iter().map(|w| w[r].clone()).collect());
            }
        }
    }

    let rhs = vec![Coeff::zero(); rows.len()];
    let sol = solve_affine(rows, rhs, coboundaries.len())
        .expect("homogeneous system is always feasible");
    let members: Vec<Vec<Rat>> = sol
        .kernel
        .iter()
        .map(|t| {
            let mut v = vec![Rat::zero(); ambient.len()];
            for (coef, row) in t.iter().zip(&coboundaries) {
                if coef.is_zero() {
                    continue;
                }
                for (slot, entry) in v.iter_mut().zip(row) {
                    let add = coef * entry;
                    *slot = &*slot + &add;
                }
            }
            v
        })
        .collect();
    linalg::echelon(members, ambient.len())
        .into_iter()
        .map(|v| linalg::poly_from_rat_coords(&ambient, &v))
        .collect()
}
