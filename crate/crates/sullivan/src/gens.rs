//! Generator tables.
//!
//! A model's free graded-commutative algebra `ΛV` is described by its graded
//! generators `v₀, v₁, …` in declaration order. The acyclic closure adjoins a
//! suspension generator `svᵢ` of degree `|vᵢ| - 1` for each `vᵢ`. Both families
//! share one id space, interleaved as `vᵢ ↦ 2i`, `svᵢ ↦ 2i+1`, so that sorting
//! monomial factors by id puts suspensions right after their base generator and
//! makes "the factor of highest id" mean "the latest declared generator".

use std::fmt;
use thiserror::Error;

/// Identifier of a generator of `ΛV ⊗ ΛsV` (even ids: `V`; odd ids: `sV`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenId(pub u32);

impl GenId {
    #[must_use]
    pub fn is_suspension(self) -> bool {
        self.0 % 2 == 1
    }

    /// Index of the underlying `V`-generator in declaration order.
    #[must_use]
    pub fn v_index(self) -> usize {
        (self.0 / 2) as usize
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GensError {
    #[error("generator `{0}` is declared twice")]
    DuplicateName(String),
    #[error("generator `{name}` has degree {degree}; simple connectivity requires degree >= 2")]
    DegreeTooLow { name: String, degree: u32 },
    #[error("generator name `{0}` is not a valid identifier")]
    BadName(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct VGen {
    name: String,
    degree: u32,
}

/// Table of the `V`-generators of a model, with degrees and names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gens {
    vgens: Vec<VGen>,
}

impl Gens {
    /// Builds a table from `(name, degree)` pairs in declaration order.
    pub fn new<S: Into<String>>(gens: Vec<(S, u32)>) -> Result<Self, GensError> {
        let mut vgens: Vec<VGen> = Vec::with_capacity(gens.len());
        for (name, degree) in gens {
            let name = name.into();
            if name.is_empty()
                || !name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(GensError::BadName(name));
            }
            if vgens.iter().any(|g| g.name == name) {
                return Err(GensError::DuplicateName(name));
            }
            if degree < 2 {
                return Err(GensError::DegreeTooLow { name, degree });
            }
            vgens.push(VGen { name, degree });
        }
        Ok(Gens { vgens })
    }

    #[must_use]
    pub fn v_count(&self) -> usize {
        self.vgens.len()
    }

    #[must_use]
    pub fn id_of_v(&self, index: usize) -> GenId {
        debug_assert!(index < self.vgens.len());
        GenId(2 * index as u32)
    }

    #[must_use]
    pub fn id_of_sv(&self, index: usize) -> GenId {
        debug_assert!(index < self.vgens.len());
        GenId(2 * index as u32 + 1)
    }

    /// Degree of any generator; suspensions sit one below their base.
    #[must_use]
    pub fn degree(&self, id: GenId) -> u32 {
        let base = self.vgens[id.v_index()].degree;
        if id.is_suspension() {
            base - 1
        } else {
            base
        }
    }

    #[must_use]
    pub fn is_odd(&self, id: GenId) -> bool {
        self.degree(id) % 2 == 1
    }

    #[must_use]
    pub fn name(&self, id: GenId) -> String {
        let base = &self.vgens[id.v_index()].name;
        if id.is_suspension() {
            format!("s{base}")
        } else {
            base.clone()
        }
    }

    #[must_use]
    pub fn v_name(&self, index: usize) -> &str {
        &self.vgens[index].name
    }

    /// Looks a `V`-generator up by name.
    #[must_use]
    pub fn v_by_name(&self, name: &str) -> Option<usize> {
        self.vgens.iter().position(|g| g.name == name)
    }

    pub fn v_ids(&self) -> impl Iterator<Item = GenId> + '_ {
        (0..self.vgens.len()).map(|i| self.id_of_v(i))
    }

    pub fn sv_ids(&self) -> impl Iterator<Item = GenId> + '_ {
        (0..self.vgens.len()).map(|i| self.id_of_sv(i))
    }

    pub fn even_v_ids(&self) -> impl Iterator<Item = GenId> + '_ {
        self.v_ids().filter(|&id| !self.is_odd(id))
    }

    pub fn odd_v_ids(&self) -> impl Iterator<Item = GenId> + '_ {
        self.v_ids().filter(|&id| self.is_odd(id))
    }

    #[must_use]
    pub fn even_v_count(&self) -> usize {
        self.even_v_ids().count()
    }

    #[must_use]
    pub fn odd_v_count(&self) -> usize {
        self.odd_v_ids().count()
    }

    #[must_use]
    pub fn max_v_degree(&self) -> u32 {
        self.vgens.iter().map(|g| g.degree).max().unwrap_or(0)
    }

    /// Formal dimension `Σ|odd| + Σ(1 - |even|)` read off the degrees alone.
    /// Negative values occur for models that cannot be elliptic.
    #[must_use]
    pub fn formal_dimension(&self) -> i64 {
        self.vgens
            .iter()
            .map(|g| {
                if g.degree % 2 == 1 {
                    i64::from(g.degree)
                } else {
                    1 - i64::from(g.degree)
                }
            })
            .sum()
    }

    /// Reorders the generators by the given permutation (new position ->
    /// old index), returning the reordered table.
    #[must_use]
    pub fn permuted(&self, order: &[usize]) -> Gens {
        debug_assert_eq!(order.len(), self.vgens.len());
        Gens {
            vgens: order.iter().map(|&i| self.vgens[i].clone()).collect(),
        }
    }
}

impl fmt::Display for Gens {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self
            .vgens
            .iter()
            .map(|g| format!("{}:{}", g.name, g.degree))
            .collect();
        write!(f, "Λ({})", names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Gens {
        Gens::new(vec![("x2", 2), ("x4", 4), ("y5", 5), ("y7", 7)]).unwrap()
    }

    #[test]
    fn ids_interleave_generators_and_suspensions() {
        let g = table();
        assert_eq!(g.id_of_v(1), GenId(2));
        assert_eq!(g.id_of_sv(1), GenId(3));
        assert!(GenId(3).is_suspension());
        assert_eq!(GenId(3).v_index(), 1);
        assert_eq!(g.degree(GenId(2)), 4);
        assert_eq!(g.degree(GenId(3)), 3);
        assert_eq!(g.name(GenId(3)), "sx4");
        assert!(g.is_odd(GenId(3)));
    }

    #[test]
    fn formal_dimension_reads_degrees_only() {
        // Σ|odd| + Σ(1-|even|) = (5+7) + (1-2) + (1-4) = 8.
        assert_eq!(table().formal_dimension(), 8);
        let single_even = Gens::new(vec![("x2", 2)]).unwrap();
        assert_eq!(single_even.formal_dimension(), -1);
    }

    #[test]
    fn degree_one_generators_are_rejected() {
        let err = Gens::new(vec![("t", 1)]).unwrap_err();
        assert_eq!(
            err,
            GensError::DegreeTooLow {
                name: "t".into(),
                degree: 1
            }
        );
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let err = Gens::new(vec![("a", 2), ("a", 4)]).unwrap_err();
        assert_eq!(err, GensError::DuplicateName("a".into()));
    }
}
