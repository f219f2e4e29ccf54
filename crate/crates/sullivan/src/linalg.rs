//! Exact linear algebra over ℚ with affine-parametric right-hand sides.
//!
//! The solver takes a parameter-free coefficient matrix and a right-hand side
//! whose entries may be affine in formal parameters. Inconsistent rows whose
//! residual still involves a parameter are resolved by pinning the youngest
//! parameter (solving the residual for it); a constant nonzero residual means
//! the system is infeasible. On top of the solver sit cohomology slices,
//! coboundary preimages, and the word-length optimisation that computes the
//! Toomer-type invariant of a cohomology class.

use crate::basis::Slices;
use crate::model::SullivanModel;
use crate::monomial::Monomial;
use crate::param::{Coeff, ParamId, ParamSupply, PinResult};
use crate::poly::Poly;
use crate::scalar::Rat;
use num_traits::Zero;
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("linear system has no solution")]
pub struct Infeasible;

/// Full solution set of `A·u = rhs`: one particular solution (free unknowns
/// set to zero), a kernel basis, and any parameter pins the zero rows forced.
#[derive(Debug, Clone)]
pub struct LinearSolution {
    pub particular: Vec<Coeff>,
    pub kernel: Vec<Vec<Rat>>,
    pub pins: Vec<(ParamId, Coeff)>,
}

impl LinearSolution {
    /// The affine family `particular + Σ fresh·kernelᵢ` as coefficients, one
    /// fresh parameter per kernel direction.
    #[must_use]
    pub fn family(&self, supply: &mut ParamSupply) -> (Vec<Coeff>, Vec<ParamId>) {
        let mut out = self.particular.clone();
        let mut fresh = Vec::new();
        for dir in &self.kernel {
            let p = supply.fresh();
            fresh.push(p);
            for (slot, k) in out.iter_mut().zip(dir) {
                if !k.is_zero() {
                    *slot = slot.add(&Coeff::param(p).scale(k));
                }
            }
        }
        (out, fresh)
    }
}

fn pivot_size(r: &Rat) -> u64 {
    r.numer().bits() + r.denom().bits()
}

/// Solves `A·u = rhs` exactly by Gauss-Jordan elimination, pivoting on small
/// entries to limit coefficient growth. `rows[i].len()` must equal `ncols`.
pub fn solve_affine(
    mut rows: Vec<Vec<Rat>>,
    mut rhs: Vec<Coeff>,
    ncols: usize,
) -> Result<LinearSolution, Infeasible> {
    assert_eq!(rows.len(), rhs.len());
    debug_assert!(rows.iter().all(|r| r.len() == ncols));

    let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut next = 0usize;
    for c in 0..ncols {
        if next == rows.len() {
            break;
        }
        let Some(p) = (next..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| (pivot_size(&rows[i][c]), i))
        else {
            continue;
        };
        rows.swap(next, p);
        rhs.swap(next, p);
        let inv = rows[next][c].recip();
        for j in c..ncols {
            let v = &rows[next][j] * &inv;
            rows[next][j] = v;
        }
        rhs[next] = rhs[next].scale(&inv);
        for i in 0..rows.len() {
            if i == next || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..ncols {
                let v = &rows[i][j] - &(&f * &rows[next][j]);
                rows[i][j] = v;
            }
            let delta = rhs[next].scale(&f);
            rhs[i] = rhs[i].sub(&delta);
        }
        pivot_row_of_col[c] = Some(next);
        next += 1;
    }

    // Zero rows: the residual must vanish, possibly by pinning parameters.
    let mut pins: Vec<(ParamId, Coeff)> = Vec::new();
    for i in next..rows.len() {
        debug_assert!(rows[i].iter().all(Rat::is_zero));
        if rhs[i].is_zero() {
            continue;
        }
        match rhs[i].pin_equation() {
            PinResult::Trivial => {}
            PinResult::Infeasible => return Err(Infeasible),
            PinResult::Pin(id, value) => {
                for entry in rhs.iter_mut() {
                    *entry = entry.substitute(id, &value);
                }
                for (_, v) in pins.iter_mut() {
                    *v = v.substitute(id, &value);
                }
                pins.push((id, value));
            }
        }
    }

    let mut particular = vec![Coeff::zero(); ncols];
    for (c, pr) in pivot_row_of_col.iter().enumerate() {
        if let Some(r) = pr {
            particular[c] = rhs[*r].clone();
        }
    }
    let mut kernel = Vec::new();
    for f in 0..ncols {
        if pivot_row_of_col[f].is_some() {
            continue;
        }
        let mut dir = vec![Rat::zero(); ncols];
        dir[f] = Rat::from_integer(1.into());
        for (c, pr) in pivot_row_of_col.iter().enumerate() {
            if let Some(r) = pr {
                dir[c] = -rows[*r][f].clone();
            }
        }
        kernel.push(dir);
    }
    Ok(LinearSolution { particular, kernel, pins })
}

pub(crate) fn poly_from_rat_coords(basis: &[Monomial], coords: &[Rat]) -> Poly {
    let coeffs: Vec<Coeff> = coords.iter().map(|r| Coeff::from_rat(r.clone())).collect();
    Poly::from_coords(basis, &coeffs)
}

/// Row-major matrix of a linear map, columns indexed by the domain basis and
/// rows by the codomain basis. `None` if some image leaves the codomain span
/// or is parametric.
pub fn matrix_of(
    domain: &[Monomial],
    codomain: &[Monomial],
    mut map: impl FnMut(&Monomial) -> Poly,
) -> Option<Vec<Vec<Rat>>> {
    let mut rows = vec![vec![Rat::zero(); domain.len()]; codomain.len()];
    for (j, m) in domain.iter().enumerate() {
        let image = map(m);
        let coords = image.coords_in(codomain)?;
        for (i, c) in coords.into_iter().enumerate() {
            rows[i][j] = c.as_constant()?.clone();
        }
    }
    Some(rows)
}

/// Reduced row-echelon basis of the span of `vs`, rows ordered by leading
/// column. The input vectors are rows.
#[must_use]
pub fn echelon(vs: Vec<Vec<Rat>>, ncols: usize) -> Vec<Vec<Rat>> {
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    for v in vs {
        let r = reduce_mod(v, &basis);
        if let Some(lead) = r.iter().position(|x| !x.is_zero()) {
            let inv = r[lead].recip();
            let normalized: Vec<Rat> = r.iter().map(|x| x * &inv).collect();
            for b in basis.iter_mut() {
                if !b[lead].is_zero() {
                    let f = b[lead].clone();
                    for j in 0..ncols {
                        let v = &b[j] - &(&f * &normalized[j]);
                        b[j] = v;
                    }
                }
            }
            basis.push(normalized);
        }
    }
    basis.sort_by_key(|b| b.iter().position(|x| !x.is_zero()).unwrap_or(ncols));
    basis
}

/// Reduces `v` modulo a reduced echelon basis.
#[must_use]
pub fn reduce_mod(mut v: Vec<Rat>, basis: &[Vec<Rat>]) -> Vec<Rat> {
    for b in basis {
        let lead = b.iter().position(|x| !x.is_zero()).expect("echelon rows are nonzero");
        if !v[lead].is_zero() {
            let f = v[lead].clone();
            for j in lead..v.len() {
                let x = &v[j] - &(&f * &b[j]);
                v[j] = x;
            }
        }
    }
    v
}

/// One cohomology degree: dimension and a deterministic list of cocycle
/// representatives, reduced against the coboundary space.
#[derive(Debug, Clone)]
pub struct CohomologySlice {
    pub degree: u32,
    pub dim: usize,
    pub reps: Vec<Poly>,
}

/// Cohomology of `(ΛV, d)` in one degree by direct kernel/image computation.
#[must_use]
pub fn cohomology(model: &SullivanModel, n: u32) -> CohomologySlice {
    let gens = model.gens();
    let slices = Slices::new(gens);
    let basis_n = slices.algebra(n);
    if basis_n.is_empty() {
        return CohomologySlice { degree: n, dim: 0, reps: Vec::new() };
    }
    let d = |m: &Monomial| model.diff().apply(&Poly::monomial(m.clone()), gens);

    let rows = matrix_of(&basis_n, &slices.algebra(n + 1), d)
        .expect("differential stays inside the degree slice");
    let sol = solve_affine(rows, vec![Coeff::zero(); slices.algebra(n + 1).len()], basis_n.len())
        .expect("homogeneous system");
    let cocycles = sol.kernel;

    let image = if n == 0 {
        Vec::new()
    } else {
        let below = slices.algebra(n - 1);
        below
            .iter()
            .map(|m| {
                d(m).coords_in(&basis_n)
                    .expect("differential stays inside the degree slice")
                    .into_iter()
                    .map(|c| c.as_constant().expect("parameter-free").clone())
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    let image_echelon = echelon(image, basis_n.len());

    let mut reps = Vec::new();
    let mut h_echelon: Vec<Vec<Rat>> = Vec::new();
    for z in cocycles {
        let reduced = reduce_mod(z, &image_echelon);
        let against = reduce_mod(reduced.clone(), &h_echelon);
        if let Some(lead) = against.iter().position(|x| !x.is_zero()) {
            let inv = against[lead].recip();
            let normalized: Vec<Rat> = against.iter().map(|x| x * &inv).collect();
            reps.push(poly_from_rat_coords(&basis_n, &normalized));
            h_echelon.push(normalized);
        }
    }
    CohomologySlice { degree: n, dim: reps.len(), reps }
}

/// A `q` with `d(q) = p`, or `None` when `p` is not a coboundary. `p` must be
/// parameter-free and homogeneous.
#[must_use]
pub fn coboundary_preimage(model: &SullivanModel, p: &Poly) -> Option<Poly> {
    assert!(p.is_parameter_free());
    let gens = model.gens();
    let n = p.degree(gens).expect("preimage of the zero polynomial is zero");
    if n == 0 {
        return None;
    }
    let slices = Slices::new(gens);
    let below = slices.algebra(n - 1);
    let basis_n = slices.algebra(n);
    let rows = matrix_of(&below, &basis_n, |m| {
        model.diff().apply(&Poly::monomial(m.clone()), gens)
    })?;
    let rhs = p.coords_in(&basis_n)?;
    let sol = solve_affine(rows, rhs, below.len()).ok()?;
    Some(Poly::from_coords(&below, &sol.particular))
}

/// A cocycle cohomologous to `rep` supported entirely in word length `>= m`,
/// or `None` if the class admits no such representative.
#[must_use]
pub fn representative_with_min_word_length(
    model: &SullivanModel,
    rep: &Poly,
    m: u32,
) -> Option<Poly> {
    assert!(rep.is_parameter_free());
    let gens = model.gens();
    let n = rep.degree(gens).expect("class of the zero polynomial");
    let slices = Slices::new(gens);
    let basis_n = slices.algebra(n);
    let high = slices.algebra_word_length_at_least(n, m);
    let below = if n == 0 { Rc::new(Vec::new()) } else { slices.algebra(n - 1) };

    // Unknowns: coefficients of the high-word-length representative, then the
    // potential. Equation: high + d(q) = rep, rowed over the degree slice.
    let ncols = high.len() + below.len();
    let mut rows = vec![vec![Rat::zero(); ncols]; basis_n.len()];
    for (j, h) in high.iter().enumerate() {
        let i = basis_n.binary_search(h).expect("sub-basis of the slice");
        rows[i][j] = Rat::from_integer(1.into());
    }
    for (j, q) in below.iter().enumerate() {
        let image = model.diff().apply(&Poly::monomial(q.clone()), gens);
        let coords = image.coords_in(&basis_n).expect("differential stays inside the slice");
        for (i, c) in coords.into_iter().enumerate() {
            rows[i][high.len() + j] = c.as_constant().expect("parameter-free").clone();
        }
    }
    let rhs = rep.coords_in(&basis_n)?;
    let sol = solve_affine(rows, rhs, ncols).ok()?;
    let witness = Poly::from_coords(&high, &sol.particular[..high.len()]);
    Some(witness)
}

/// The largest `m` such that the class of `rep` has a representative of word
/// length `>= m`: the word-length invariant of the class. `rep` must not be a
/// coboundary.
#[must_use]
pub fn class_word_length(model: &SullivanModel, rep: &Poly) -> u32 {
    let n = rep.degree(model.gens()).expect("class of the zero polynomial");
    debug_assert!(
        coboundary_preimage(model, rep).is_none(),
        "word-length invariant of the zero class is unbounded"
    );
    let mut m = rep.min_word_length().expect("nonzero representative");
    while m < n && representative_with_min_word_length(model, rep, m + 1).is_some() {
        m += 1;
    }
    m
}
