//! Polynomials: finitely supported maps from monomials to affine-parametric
//! coefficients. The zero polynomial is the empty map and has no degree.

use crate::gens::Gens;
use crate::monomial::Monomial;
use crate::param::{Coeff, ParamId};
use crate::scalar::Rat;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DegreeError {
    #[error("the zero polynomial has no degree")]
    Zero,
    #[error("inhomogeneous polynomial: degrees {0:?} all occur")]
    Inhomogeneous(Vec<u32>),
}

/// Exact polynomial over the generator table implied by its monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Coeff>,
}

impl Poly {
    #[must_use]
    pub fn zero() -> Self {
        Poly::default()
    }

    #[must_use]
    pub fn one() -> Self {
        Poly::monomial(Monomial::one())
    }

    /// The monomial `m` with coefficient 1.
    #[must_use]
    pub fn monomial(m: Monomial) -> Self {
        Poly::term(m, Coeff::one())
    }

    #[must_use]
    pub fn term(m: Monomial, c: Coeff) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Coeff)>>(iter: I) -> Self {
        let mut out = Poly::zero();
        for (m, c) in iter {
            out.accumulate(m, c);
        }
        out
    }

    pub fn accumulate(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[must_use]
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    #[must_use]
    pub fn coefficient(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    #[must_use]
    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m.clone(), c.clone());
        }
        out
    }

    #[must_use]
    pub fn neg(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    #[must_use]
    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    #[must_use]
    pub fn scale(&self, k: &Rat) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.scale(k)))
                .collect(),
        }
    }

    /// Multiplies every coefficient by `k` (affine-times-affine panics).
    #[must_use]
    pub fn scale_coeff(&self, k: &Coeff) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.accumulate(m.clone(), c.mul(k));
        }
        out
    }

    /// Graded-commutative product.
    #[must_use]
    pub fn mul(&self, other: &Poly, gens: &Gens) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, sign)) = ma.mul(mb, gens) {
                    let mut c = ca.mul(cb);
                    if sign < 0 {
                        c = c.neg();
                    }
                    out.accumulate(m, c);
                }
            }
        }
        out
    }

    /// Left multiplication by a single monomial with sign.
    #[must_use]
    pub fn mul_monomial(&self, m: &Monomial, gens: &Gens) -> Poly {
        Poly::monomial(m.clone()).mul(self, gens)
    }

    /// Degree when homogeneous and nonzero.
    pub fn degree(&self, gens: &Gens) -> Result<u32, DegreeError> {
        let mut degrees: BTreeSet<u32> = BTreeSet::new();
        for m in self.terms.keys() {
            degrees.insert(m.degree(gens));
        }
        match degrees.len() {
            0 => Err(DegreeError::Zero),
            1 => Ok(degrees.into_iter().next().unwrap()),
            _ => Err(DegreeError::Inhomogeneous(degrees.into_iter().collect())),
        }
    }

    /// Terms whose monomial has the given word length.
    #[must_use]
    pub fn word_length_component(&self, w: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.word_length() == w)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Smallest word length over the support.
    #[must_use]
    pub fn min_word_length(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::word_length).min()
    }

    #[must_use]
    pub fn max_word_length(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::word_length).max()
    }

    /// Terms of the given filtration weight (degree plus odd factor count).
    #[must_use]
    pub fn sigma_component(&self, weight: u32, gens: &Gens) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.sigma_weight(gens) == weight)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    #[must_use]
    pub fn substitute_param(&self, id: ParamId, value: &Coeff) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.accumulate(m.clone(), c.substitute(id, value));
        }
        out
    }

    /// Sets every parameter to zero.
    #[must_use]
    pub fn pinned_to_zero(&self) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.accumulate(m.clone(), c.pinned_to_zero());
        }
        out
    }

    pub fn collect_params(&self, into: &mut BTreeSet<ParamId>) {
        for c in self.terms.values() {
            into.extend(c.params());
        }
    }

    #[must_use]
    pub fn is_parameter_free(&self) -> bool {
        self.terms.values().all(Coeff::is_constant)
    }

    /// Coordinates with respect to an ordered slice basis. `None` when a
    /// support monomial is missing from the basis.
    #[must_use]
    pub fn coords_in(&self, basis: &[Monomial]) -> Option<Vec<Coeff>> {
        let mut coords = vec![Coeff::zero(); basis.len()];
        let index: BTreeMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        for (m, c) in &self.terms {
            let &i = index.get(m)?;
            coords[i] = c.clone();
        }
        Some(coords)
    }

    #[must_use]
    pub fn from_coords(basis: &[Monomial], coords: &[Coeff]) -> Poly {
        debug_assert_eq!(basis.len(), coords.len());
        Poly::from_terms(
            basis
                .iter()
                .zip(coords.iter())
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Renders with generator names, highest lex term first, e.g.
    /// `x2^3 - 2 x2 x4`.
    #[must_use]
    pub fn display(&self, gens: &Gens) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let (lead, coeff_str) = coefficient_prefix(c, m.is_one());
            if i == 0 {
                if lead < 0 {
                    out.push('-');
                }
            } else if lead < 0 {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&coeff_str);
            if !m.is_one() {
                if !coeff_str.is_empty() {
                    out.push(' ');
                }
                out.push_str(&m.display(gens));
            }
        }
        out
    }
}

/// How to print one coefficient: returns (sign to hoist, body without sign).
/// Parametric coefficients are parenthesized and never hoist their sign.
fn coefficient_prefix(c: &Coeff, monomial_is_one: bool) -> (i8, String) {
    use num_traits::Signed;
    if let Some(r) = c.as_constant() {
        let (sign, abs) = if r.is_negative() {
            (-1, -r.clone())
        } else {
            (1, r.clone())
        };
        if abs == crate::scalar::rat(1) && !monomial_is_one {
            (sign, String::new())
        } else {
            (sign, crate::scalar::display(&abs))
        }
    } else {
        (1, format!("({c})"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gens::{GenId, Gens};
    use crate::scalar::rat;

    fn table() -> Gens {
        Gens::new(vec![("x2", 2), ("x4", 4), ("y5", 5), ("y7", 7)]).unwrap()
    }

    fn mono(factors: &[(u32, u32)]) -> Monomial {
        Monomial::from_sorted(factors.iter().map(|&(g, e)| (GenId(g), e)).collect())
    }

    #[test]
    fn addition_cancels_to_the_empty_map() {
        let p = Poly::monomial(mono(&[(0, 2)]));
        let q = p.neg();
        assert!(p.add(&q).is_zero());
    }

    #[test]
    fn products_expand_with_koszul_signs() {
        let g = table();
        // (y5 + y7)·(y5 + y7) = 2 y5 y7 ... wait: y5y7 + y7y5 = y5y7 - y5y7 = 0.
        let p = Poly::monomial(mono(&[(4, 1)])).add(&Poly::monomial(mono(&[(6, 1)])));
        assert!(p.mul(&p, &g).is_zero());
        // (x2 + y5)^2 = x2^2 + 2 x2 y5.
        let q = Poly::monomial(mono(&[(0, 1)])).add(&Poly::monomial(mono(&[(4, 1)])));
        let sq = q.mul(&q, &g);
        assert_eq!(sq.coefficient(&mono(&[(0, 2)])), Coeff::one());
        assert_eq!(sq.coefficient(&mono(&[(0, 1), (4, 1)])), Coeff::from_int(2));
        assert_eq!(sq.term_count(), 2);
    }

    #[test]
    fn degree_of_zero_is_an_error() {
        let g = table();
        assert_eq!(Poly::zero().degree(&g), Err(DegreeError::Zero));
        let p = Poly::monomial(mono(&[(0, 1)])).add(&Poly::monomial(mono(&[(2, 1)])));
        assert_eq!(p.degree(&g), Err(DegreeError::Inhomogeneous(vec![2, 4])));
        assert_eq!(Poly::monomial(mono(&[(0, 2)])).degree(&g), Ok(4));
    }

    #[test]
    fn display_prints_highest_lex_term_first() {
        let g = table();
        // x2^3 - 2 x2 x4.
        let p = Poly::monomial(mono(&[(0, 3)]))
            .add(&Poly::monomial(mono(&[(0, 1), (2, 1)])).scale(&rat(-2)));
        assert_eq!(p.display(&g), "x2^3 - 2 x2 x4");
        assert_eq!(Poly::zero().display(&g), "0");
        let c = Poly::term(mono(&[(0, 1)]), Coeff::from_int(-1));
        assert_eq!(c.display(&g), "-x2");
    }

    #[test]
    fn word_length_components_partition_the_polynomial() {
        let g = table();
        let p = Poly::monomial(mono(&[(0, 3)]))
            .add(&Poly::monomial(mono(&[(0, 1), (2, 1)])).scale(&rat(-2)));
        let total: Poly = (0..=3).fold(Poly::zero(), |acc, w| acc.add(&p.word_length_component(w)));
        assert_eq!(total, p);
        assert_eq!(p.min_word_length(), Some(2));
        assert_eq!(p.word_length_component(3), Poly::monomial(mono(&[(0, 3)])));
        let _ = g;
    }
}
