//! Monomials in a free graded-commutative algebra, with exact Koszul signs.
//!
//! A monomial is a sorted list of `(generator, exponent)` factors. Generators
//! of odd degree square to zero and never carry an exponent above one; even
//! generators commute with everything. All reordering signs are computed from
//! first principles: transposing two odd factors flips the sign, every other
//! transposition is free.

use crate::gens::{GenId, Gens};
use crate::scalar::{rat, Rat};
use std::fmt;

/// Normal form: factors strictly increasing by id, exponents >= 1, odd
/// generators with exponent exactly 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    factors: Vec<(GenId, u32)>,
}

/// Lexicographic order on exponent vectors: at the earliest generator where
/// two monomials differ, the larger exponent wins. Polynomial display walks
/// this order downward, so `x2^3` prints before `x2 x4` before `x4^2`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let mut i = 0;
        let mut j = 0;
        loop {
            match (self.factors.get(i), other.factors.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(ga, ea)), Some(&(gb, eb))) => {
                    if ga < gb {
                        return Ordering::Greater;
                    }
                    if ga > gb {
                        return Ordering::Less;
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    /// The empty product `1`.
    #[must_use]
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    /// A single generator.
    #[must_use]
    pub fn gen(id: GenId) -> Self {
        Monomial {
            factors: vec![(id, 1)],
        }
    }

    /// Builds a monomial from factors already in strictly increasing id order.
    #[must_use]
    pub fn from_sorted(factors: Vec<(GenId, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(factors.iter().all(|&(_, e)| e >= 1));
        Monomial { factors }
    }

    #[must_use]
    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    #[must_use]
    pub fn factors(&self) -> &[(GenId, u32)] {
        &self.factors
    }

    #[must_use]
    pub fn exponent_of(&self, id: GenId) -> u32 {
        self.factors
            .iter()
            .find(|&&(g, _)| g == id)
            .map_or(0, |&(_, e)| e)
    }

    #[must_use]
    pub fn degree(&self, gens: &Gens) -> u32 {
        self.factors
            .iter()
            .map(|&(g, e)| e * gens.degree(g))
            .sum()
    }

    /// Number of factors counted with multiplicity.
    #[must_use]
    pub fn word_length(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// Number of odd-degree factors (each has exponent 1).
    #[must_use]
    pub fn odd_factor_count(&self, gens: &Gens) -> u32 {
        self.factors
            .iter()
            .filter(|&&(g, _)| gens.is_odd(g))
            .count() as u32
    }

    /// Degree plus number of odd factors; the filtration weight behind the
    /// bigraded lift. Always even.
    #[must_use]
    pub fn sigma_weight(&self, gens: &Gens) -> u32 {
        self.degree(gens) + self.odd_factor_count(gens)
    }

    #[must_use]
    pub fn is_pure_algebra(&self) -> bool {
        self.factors.iter().all(|&(g, _)| !g.is_suspension())
    }

    #[must_use]
    pub fn is_pure_suspension(&self) -> bool {
        self.factors.iter().all(|&(g, _)| g.is_suspension())
    }

    /// Graded-commutative product. `None` when an odd generator repeats.
    /// The sign is `(-1)^k` with `k` = number of odd-odd factor pairs that
    /// cross while merging.
    #[must_use]
    pub fn mul(&self, other: &Monomial, gens: &Gens) -> Option<(Monomial, i8)> {
        let mut out: Vec<(GenId, u32)> =
            Vec::with_capacity(self.factors.len() + other.factors.len());
        let mut crossings: u32 = 0;
        // Odd factors of `self` not yet consumed by the merge; each one a
        // factor of `other` must cross when slotting in before it.
        let mut i = 0;
        let mut j = 0;
        let odd_remaining = |factors: &[(GenId, u32)], from: usize| -> u32 {
            factors[from..]
                .iter()
                .filter(|&&(g, _)| gens.is_odd(g))
                .count() as u32
        };
        while i < self.factors.len() || j < other.factors.len() {
            let take_right = match (self.factors.get(i), other.factors.get(j)) {
                (Some(&(gl, _)), Some(&(gr, _))) => gr < gl,
                (None, Some(_)) => true,
                (Some(_), None) => false,
                (None, None) => unreachable!(),
            };
            if take_right {
                let (g, e) = other.factors[j];
                if gens.is_odd(g) {
                    if e > 1 {
                        return None;
                    }
                    crossings += odd_remaining(&self.factors, i);
                }
                out.push((g, e));
                j += 1;
            } else {
                let (g, e) = self.factors[i];
                if i < self.factors.len()
                    && j < other.factors.len()
                    && other.factors[j].0 == g
                {
                    let (_, e2) = other.factors[j];
                    if gens.is_odd(g) {
                        // Odd square vanishes.
                        return None;
                    }
                    out.push((g, e + e2));
                    i += 1;
                    j += 1;
                } else {
                    out.push((g, e));
                    i += 1;
                }
            }
        }
        let sign = if crossings % 2 == 0 { 1 } else { -1 };
        Some((Monomial { factors: out }, sign))
    }

    /// Removes one power of the factor at `position`, returning the scalar
    /// produced by letting a derivation act there: the multiplicity, times the
    /// sign for carrying an operator of the given parity past the preceding
    /// factors, times the sign for carrying the degree-`|g|+1` replacement
    /// past the following factors. The replacement itself must then be
    /// multiplied in from the right.
    #[must_use]
    pub fn derivation_term(&self, position: usize, gens: &Gens) -> (Rat, Monomial) {
        let (g, e) = self.factors[position];
        let before: u32 = self.factors[..position]
            .iter()
            .map(|&(h, eh)| eh * gens.degree(h))
            .sum();
        let after: u32 = self.factors[position + 1..]
            .iter()
            .map(|&(h, eh)| eh * gens.degree(h))
            .sum();
        let replacement_parity = (gens.degree(g) + 1) % 2;
        let flips = before % 2 + replacement_parity * (after % 2);
        let mut coeff = rat(i64::from(e));
        if flips % 2 == 1 {
            coeff = -coeff;
        }
        let mut factors = self.factors.clone();
        if e == 1 {
            factors.remove(position);
        } else {
            factors[position].1 -= 1;
        }
        (coeff, Monomial { factors })
    }

    /// Splits off the factor of highest id: returns the reduced monomial and
    /// that id. `None` on the empty monomial.
    #[must_use]
    pub fn strip_highest(&self) -> Option<(Monomial, GenId)> {
        let &(g, e) = self.factors.last()?;
        let mut factors = self.factors.clone();
        if e == 1 {
            factors.pop();
        } else {
            factors.last_mut().unwrap().1 -= 1;
        }
        Some((Monomial { factors }, g))
    }

    /// Splits a mixed monomial into algebra and suspension parts,
    /// `m = ± λ · w`, returning `(sign, λ, w)`. The sign counts odd algebra
    /// factors crossed by odd suspension factors moving right.
    #[must_use]
    pub fn split_suspension(&self, gens: &Gens) -> (i8, Monomial, Monomial) {
        let mut algebra: Vec<(GenId, u32)> = Vec::new();
        let mut word: Vec<(GenId, u32)> = Vec::new();
        let mut crossings: u32 = 0;
        let mut odd_suspensions_seen: u32 = 0;
        for &(g, e) in &self.factors {
            if g.is_suspension() {
                if gens.is_odd(g) {
                    odd_suspensions_seen += 1;
                }
                word.push((g, e));
            } else {
                if gens.is_odd(g) {
                    crossings += odd_suspensions_seen;
                }
                algebra.push((g, e));
            }
        }
        let sign = if crossings % 2 == 0 { 1 } else { -1 };
        (sign, Monomial { factors: algebra }, Monomial { factors: word })
    }

    /// Renders with the table's names, e.g. `x2^3 x4`.
    #[must_use]
    pub fn display(&self, gens: &Gens) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        self.factors
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    gens.name(g)
                } else {
                    format!("{}^{}", gens.name(g), e)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    format!("g{}", g.0)
                } else {
                    format!("g{}^{}", g.0, e)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}
