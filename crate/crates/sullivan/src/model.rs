//! Sullivan minimal models: a generator table plus a decomposable
//! differential, validated at construction.
//!
//! Validation checks, in order: images are parameter-free polynomials in the
//! algebra generators; each nonzero image is homogeneous of degree `|v|+1`;
//! every image lives in word length >= 2 (minimality); the generators can be
//! arranged so each image only references earlier generators (a stable sort
//! by degree always achieves this for minimal simply connected models, and the
//! report says whether it was needed); and `d² = 0` exactly.

use crate::gens::{GenId, Gens};
use crate::monomial::Monomial;
use crate::poly::Poly;
use std::fmt;
use thiserror::Error;

/// A degree-+1 derivation of `ΛV`, stored through its generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Differential {
    images: Vec<Poly>,
}

impl Differential {
    #[must_use]
    pub fn new(images: Vec<Poly>) -> Self {
        Differential { images }
    }

    #[must_use]
    pub fn zero(v_count: usize) -> Self {
        Differential {
            images: vec![Poly::zero(); v_count],
        }
    }

    #[must_use]
    pub fn image(&self, v_index: usize) -> &Poly {
        &self.images[v_index]
    }

    #[must_use]
    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Poly::is_zero)
    }

    /// Smallest word length over all image terms; `None` for the zero
    /// differential.
    #[must_use]
    pub fn lowest_word_length(&self) -> Option<u32> {
        self.images.iter().filter_map(Poly::min_word_length).min()
    }

    #[must_use]
    pub fn highest_word_length(&self) -> Option<u32> {
        self.images.iter().filter_map(Poly::max_word_length).max()
    }

    /// The word-length-`i` part `d_i` (each image's word-length-`i` terms).
    #[must_use]
    pub fn word_part(&self, i: u32) -> Differential {
        Differential {
            images: self
                .images
                .iter()
                .map(|p| p.word_length_component(i))
                .collect(),
        }
    }

    /// Terms of word length at least `k`: the truncation `d_{>=k}`.
    #[must_use]
    pub fn word_tail(&self, k: u32) -> Differential {
        Differential {
            images: self
                .images
                .iter()
                .map(|p| {
                    Poly::from_terms(
                        p.terms()
                            .filter(|(m, _)| m.word_length() >= k)
                            .map(|(m, c)| (m.clone(), c.clone())),
                    )
                })
                .collect(),
        }
    }

    /// The pure part: zero on even generators, and on odd generators the
    /// projection of the image onto `ΛV^even`.
    #[must_use]
    pub fn pure_part(&self, gens: &Gens) -> Differential {
        let images = self
            .images
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if gens.is_odd(gens.id_of_v(i)) {
                    Poly::from_terms(
                        p.terms()
                            .filter(|(m, _)| m.odd_factor_count(gens) == 0)
                            .map(|(m, c)| (m.clone(), c.clone())),
                    )
                } else {
                    Poly::zero()
                }
            })
            .collect();
        Differential { images }
    }

    /// Extends the generator images to a derivation and applies it to an
    /// algebra polynomial.
    #[must_use]
    pub fn apply(&self, p: &Poly, gens: &Gens) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            debug_assert!(m.is_pure_algebra(), "derivation applied to a module element");
            for pos in 0..m.factors().len() {
                let g = m.factors()[pos].0;
                let image = &self.images[g.v_index()];
                if image.is_zero() {
                    continue;
                }
                let (k, rest) = m.derivation_term(pos, gens);
                let term = Poly::monomial(rest).mul(image, gens).scale(&k);
                out = out.add(&term.scale_coeff(c));
            }
        }
        out
    }

    /// Whether the differential vanishes on even generators and maps odd
    /// generators into the even subalgebra.
    #[must_use]
    pub fn is_pure(&self, gens: &Gens) -> bool {
        self.images.iter().enumerate().all(|(i, p)| {
            if gens.is_odd(gens.id_of_v(i)) {
                p.terms().all(|(m, _)| m.odd_factor_count(gens) == 0)
            } else {
                p.is_zero()
            }
        })
    }

    /// Whether all image terms share one word length.
    #[must_use]
    pub fn is_word_homogeneous(&self) -> bool {
        match (self.lowest_word_length(), self.highest_word_length()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    fn remap(&self, old_of_new: &[usize], gens_old: &Gens) -> Differential {
        let mut new_of_old = vec![0usize; old_of_new.len()];
        for (new, &old) in old_of_new.iter().enumerate() {
            new_of_old[old] = new;
        }
        Differential {
            images: old_of_new
                .iter()
                .map(|&old| remap_poly(&self.images[old], &new_of_old, gens_old))
                .collect(),
        }
    }
}

/// Rewrites generator indices (`old v_index -> new v_index`), resorting each
/// monomial and tracking the Koszul sign of the induced permutation of odd
/// factors.
fn remap_poly(p: &Poly, new_of_old: &[usize], gens_old: &Gens) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let mut factors: Vec<(GenId, u32, bool)> = m
            .factors()
            .iter()
            .map(|&(g, e)| {
                let base = new_of_old[g.v_index()] as u32;
                let new_id = GenId(2 * base + u32::from(g.is_suspension()));
                (new_id, e, gens_old.is_odd(g))
            })
            .collect();
        // Insertion sort counting odd-odd inversions.
        let mut swaps = 0u32;
        for i in 1..factors.len() {
            let mut j = i;
            while j > 0 && factors[j - 1].0 > factors[j].0 {
                if factors[j - 1].2 && factors[j].2 {
                    swaps += 1;
                }
                factors.swap(j - 1, j);
                j -= 1;
            }
        }
        let mono = Monomial::from_sorted(factors.into_iter().map(|(g, e, _)| (g, e)).collect());
        let coeff = if swaps % 2 == 0 { c.clone() } else { c.neg() };
        out.accumulate(mono, coeff);
    }
    out
}

/// A validation problem, with enough context to act on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationIssue {
    ParametricImage { name: String },
    SuspensionInImage { name: String },
    WrongDegree { name: String, expected: u32, found: Vec<u32> },
    NotDecomposable { name: String, term: String },
    NoValidOrder { name: String },
    DSquareNonzero { name: String, residual: String },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationIssue::ParametricImage { name } => {
                write!(f, "d({name}) contains formal parameters")
            }
            ValidationIssue::SuspensionInImage { name } => {
                write!(f, "d({name}) references suspension generators")
            }
            ValidationIssue::WrongDegree { name, expected, found } => write!(
                f,
                "d({name}) must be homogeneous of degree {expected}, found degrees {found:?}"
            ),
            ValidationIssue::NotDecomposable { name, term } => write!(
                f,
                "d({name}) has the non-decomposable term {term} (word length < 2)"
            ),
            ValidationIssue::NoValidOrder { name } => write!(
                f,
                "d({name}) references generators that cannot be ordered before it"
            ),
            ValidationIssue::DSquareNonzero { name, residual } => {
                write!(f, "d²({name}) = {residual} ≠ 0")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid model:\n{}", .0.iter().map(|i| format!("  - {i}")).collect::<Vec<_>>().join("\n"))]
    Validation(Vec<ValidationIssue>),
}

/// Which reordering, if any, validation performed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub reordered: bool,
    /// Generator names in the validated order.
    pub order: Vec<String>,
}

/// A validated simply connected minimal model `(ΛV, d)`.
#[derive(Debug, Clone)]
pub struct SullivanModel {
    gens: Gens,
    diff: Differential,
    report: ValidationReport,
}

impl SullivanModel {
    /// Validates and builds a model, reordering generators by degree when the
    /// declared order is not a valid filtration order.
    pub fn new(gens: Gens, diff: Differential) -> Result<SullivanModel, ModelError> {
        assert_eq!(gens.v_count(), diff.images().len());
        let mut issues = Vec::new();

        for i in 0..gens.v_count() {
            let name = gens.v_name(i).to_string();
            let image = diff.image(i);
            if image.is_zero() {
                continue;
            }
            if !image.is_parameter_free() {
                issues.push(ValidationIssue::ParametricImage { name: name.clone() });
            }
            if image.terms().any(|(m, _)| !m.is_pure_algebra()) {
                issues.push(ValidationIssue::SuspensionInImage { name: name.clone() });
                continue;
            }
            let expected = gens.degree(gens.id_of_v(i)) + 1;
            match image.degree(&gens) {
                Ok(d) if d == expected => {}
                Ok(d) => issues.push(ValidationIssue::WrongDegree {
                    name: name.clone(),
                    expected,
                    found: vec![d],
                }),
                Err(crate::poly::DegreeError::Inhomogeneous(found)) => {
                    issues.push(ValidationIssue::WrongDegree {
                        name: name.clone(),
                        expected,
                        found,
                    });
                }
                Err(crate::poly::DegreeError::Zero) => unreachable!(),
            }
            if let Some((m, _)) = image.terms().find(|(m, _)| m.word_length() < 2) {
                issues.push(ValidationIssue::NotDecomposable {
                    name: name.clone(),
                    term: m.display(&gens),
                });
            }
        }
        if !issues.is_empty() {
            return Err(ModelError::Validation(issues));
        }

        // Filtration order: d(vᵢ) may only reference v₀..vᵢ₋₁.
        let (gens, diff, reordered) = if filtration_violation(&gens, &diff).is_some() {
            let mut order: Vec<usize> = (0..gens.v_count()).collect();
            order.sort_by_key(|&i| gens.degree(gens.id_of_v(i)));
            let new_gens = gens.permuted(&order);
            let new_diff = diff.remap(&order, &gens);
            (new_gens, new_diff, true)
        } else {
            (gens, diff, false)
        };
        if let Some(i) = filtration_violation(&gens, &diff) {
            return Err(ModelError::Validation(vec![ValidationIssue::NoValidOrder {
                name: gens.v_name(i).to_string(),
            }]));
        }

        for i in 0..gens.v_count() {
            let dd = diff.apply(diff.image(i), &gens);
            if !dd.is_zero() {
                issues.push(ValidationIssue::DSquareNonzero {
                    name: gens.v_name(i).to_string(),
                    residual: dd.display(&gens),
                });
            }
        }
        if !issues.is_empty() {
            return Err(ModelError::Validation(issues));
        }

        let order = (0..gens.v_count())
            .map(|i| gens.v_name(i).to_string())
            .collect();
        Ok(SullivanModel {
            gens,
            diff,
            report: ValidationReport { reordered, order },
        })
    }

    #[must_use]
    pub fn gens(&self) -> &Gens {
        &self.gens
    }

    #[must_use]
    pub fn diff(&self) -> &Differential {
        &self.diff
    }

    #[must_use]
    pub fn report(&self) -> &ValidationReport {
        &self.report
    }

    /// Lowest word length `k` of the differential (`None` when `d = 0`).
    #[must_use]
    pub fn k(&self) -> Option<u32> {
        self.diff.lowest_word_length()
    }

    #[must_use]
    pub fn formal_dimension(&self) -> i64 {
        self.gens.formal_dimension()
    }

    #[must_use]
    pub fn is_pure(&self) -> bool {
        self.diff.is_pure(&self.gens)
    }

    /// The associated pure model `(ΛV, d_σ)` on the same generators.
    #[must_use]
    pub fn pure_model(&self) -> SullivanModel {
        self.with_differential(self.diff.pure_part(&self.gens))
    }

    /// The model `(ΛV, d_k)` keeping only the lowest-word-length part.
    #[must_use]
    pub fn word_part_model(&self, i: u32) -> SullivanModel {
        self.with_differential(self.diff.word_part(i))
    }

    /// Same generators, different (already compatible) differential. The
    /// derived differentials this crate forms (pure parts, word-length parts)
    /// always satisfy `d² = 0`; this is still checked, as corruption here
    /// would poison everything downstream.
    #[must_use]
    pub fn with_differential(&self, diff: Differential) -> SullivanModel {
        for i in 0..self.gens.v_count() {
            let dd = diff.apply(diff.image(i), &self.gens);
            assert!(
                dd.is_zero(),
                "derived differential fails d² = 0 on {}",
                self.gens.v_name(i)
            );
        }
        SullivanModel {
            gens: self.gens.clone(),
            diff,
            report: self.report.clone(),
        }
    }
}

/// First generator whose image references a not-yet-declared generator.
fn filtration_violation(gens: &Gens, diff: &Differential) -> Option<usize> {
    (0..gens.v_count()).find(|&i| {
        diff.image(i)
            .terms()
            .any(|(m, _)| m.factors().iter().any(|&(g, _)| g.v_index() >= i))
    })
}
