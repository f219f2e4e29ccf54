//! Deterministic monomial bases of graded slices, with per-table caching.
//!
//! Slice enumeration is the inner loop of every linear-algebra question this
//! crate asks, so results are memoized per generator table. The cache lives
//! inside a [`Slices`] value and is thread-confined by construction.

use crate::gens::{GenId, Gens};
use crate::monomial::Monomial;
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

/// Which generators a slice draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum GenSet {
    /// All of `V`.
    Algebra,
    /// Even-degree generators of `V`.
    AlgebraEven,
    /// `V ⊗ sV`, all generators.
    Module,
    /// `V ⊗ sV` restricted to the first `k` declared generators.
    ModuleBelow(u32),
}

/// Basis provider over one generator table.
pub struct Slices<'g> {
    gens: &'g Gens,
    cache: RefCell<HashMap<(GenSet, u32), Rc<Vec<Monomial>>>>,
}

impl<'g> Slices<'g> {
    #[must_use]
    pub fn new(gens: &'g Gens) -> Self {
        Slices {
            gens,
            cache: RefCell::new(HashMap::new()),
        }
    }

    #[must_use]
    pub fn gens(&self) -> &'g Gens {
        self.gens
    }

    fn ids_for(&self, set: GenSet) -> Vec<GenId> {
        match set {
            GenSet::Algebra => self.gens.v_ids().collect(),
            GenSet::AlgebraEven => self.gens.even_v_ids().collect(),
            GenSet::Module => {
                let mut ids: Vec<GenId> = self.gens.v_ids().collect();
                ids.extend(self.gens.sv_ids());
                ids.sort();
                ids
            }
            GenSet::ModuleBelow(k) => {
                let mut ids = Vec::new();
                for i in 0..(k as usize) {
                    ids.push(self.gens.id_of_v(i));
                    ids.push(self.gens.id_of_sv(i));
                }
                ids.sort();
                ids
            }
        }
    }

    fn slice(&self, set: GenSet, degree: u32) -> Rc<Vec<Monomial>> {
        if let Some(hit) = self.cache.borrow().get(&(set, degree)) {
            return Rc::clone(hit);
        }
        let ids = self.ids_for(set);
        let mut out = enumerate(self.gens, &ids, degree);
        out.sort();
        let rc = Rc::new(out);
        self.cache
            .borrow_mut()
            .insert((set, degree), Rc::clone(&rc));
        rc
    }

    /// All monomials of `(ΛV)^degree`.
    #[must_use]
    pub fn algebra(&self, degree: u32) -> Rc<Vec<Monomial>> {
        self.slice(GenSet::Algebra, degree)
    }

    /// All monomials of `(ΛV^even)^degree`.
    #[must_use]
    pub fn algebra_even(&self, degree: u32) -> Rc<Vec<Monomial>> {
        self.slice(GenSet::AlgebraEven, degree)
    }

    /// All monomials of `(ΛV ⊗ ΛsV)^degree`.
    #[must_use]
    pub fn module(&self, degree: u32) -> Rc<Vec<Monomial>> {
        self.slice(GenSet::Module, degree)
    }

    /// Module monomials over the first `v_count` declared generators and
    /// their suspensions.
    #[must_use]
    pub fn module_below(&self, v_count: usize, degree: u32) -> Rc<Vec<Monomial>> {
        self.slice(GenSet::ModuleBelow(v_count as u32), degree)
    }

    /// Algebra slice filtered to one word length.
    #[must_use]
    pub fn algebra_word_length(&self, degree: u32, word_length: u32) -> Vec<Monomial> {
        self.algebra(degree)
            .iter()
            .filter(|m| m.word_length() == word_length)
            .cloned()
            .collect()
    }

    /// Algebra slice filtered to word length at least `bound`.
    #[must_use]
    pub fn algebra_word_length_at_least(&self, degree: u32, bound: u32) -> Vec<Monomial> {
        self.algebra(degree)
            .iter()
            .filter(|m| m.word_length() >= bound)
            .cloned()
            .collect()
    }

    /// Algebra slice filtered to monomials with at least one odd factor.
    #[must_use]
    pub fn algebra_with_odd_factor(&self, degree: u32) -> Vec<Monomial> {
        self.algebra(degree)
            .iter()
            .filter(|m| m.odd_factor_count(self.gens) > 0)
            .cloned()
            .collect()
    }

    /// Algebra slice filtered to one filtration weight
    /// (degree + odd factor count).
    #[must_use]
    pub fn algebra_sigma_weight(&self, degree: u32, weight: u32) -> Vec<Monomial> {
        self.algebra(degree)
            .iter()
            .filter(|m| m.sigma_weight(self.gens) == weight)
            .cloned()
            .collect()
    }

    /// Largest filtration weight present in an algebra slice, if nonempty.
    #[must_use]
    pub fn max_sigma_weight(&self, degree: u32) -> Option<u32> {
        self.algebra(degree)
            .iter()
            .map(|m| m.sigma_weight(self.gens))
            .max()
    }

    /// Largest word length present in an algebra slice, if nonempty.
    #[must_use]
    pub fn max_word_length(&self, degree: u32) -> Option<u32> {
        self.algebra(degree).iter().map(Monomial::word_length).max()
    }
}

/// All monomials of the given degree over `ids` (sorted ascending), in
/// enumeration order. Odd generators cap at exponent 1.
fn enumerate(gens: &Gens, ids: &[GenId], degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current: Vec<(GenId, u32)> = Vec::new();
    rec(gens, ids, 0, degree, &mut current, &mut out);
    out
}

fn rec(
    gens: &Gens,
    ids: &[GenId],
    idx: usize,
    remaining: u32,
    current: &mut Vec<(GenId, u32)>,
    out: &mut Vec<Monomial>,
) {
    if remaining == 0 {
        out.push(Monomial::from_sorted(current.clone()));
        return;
    }
    if idx == ids.len() {
        return;
    }
    let id = ids[idx];
    let d = gens.degree(id);
    let max_e = if gens.is_odd(id) {
        u32::from(d <= remaining)
    } else {
        remaining / d
    };
    // e = 0 first keeps the recursion tree small near the top.
    rec(gens, ids, idx + 1, remaining, current, out);
    for e in 1..=max_e {
        current.push((id, e));
        rec(gens, ids, idx + 1, remaining - e * d, current, out);
        current.pop();
    }
}

/// Suspension words (monomials in `sV` only) of word length up to `max_len`,
/// any degree, deterministically ordered. Length zero (the empty word) is
/// included.
#[must_use]
pub fn suspension_words_up_to(gens: &Gens, max_len: u32) -> Vec<Monomial> {
    let ids: Vec<GenId> = gens.sv_ids().collect();
    let mut out = vec![Monomial::one()];
    let mut layer: Vec<Monomial> = vec![Monomial::one()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &id in &ids {
                if let Some((m, _)) = w.mul(&Monomial::gen(id), gens) {
                    if m.word_length() == w.word_length() + 1 && !next.contains(&m) {
                        next.push(m);
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gens::Gens;

    fn table() -> Gens {
        Gens::new(vec![("x2", 2), ("x4", 4), ("y5", 5), ("y7", 7)]).unwrap()
    }

    #[test]
    fn degree_eight_algebra_slice_is_the_known_triple() {
        let g = table();
        let s = Slices::new(&g);
        let names: Vec<String> = s.algebra(8).iter().map(|m| m.display(&g)).collect();
        assert_eq!(names.len(), 3);
        assert!(names.contains(&"x2^4".to_string()));
        assert!(names.contains(&"x2^2 x4".to_string()));
        assert!(names.contains(&"x4^2".to_string()));
    }

    #[test]
    fn slice_sizes_match_the_generating_function() {
        // Π_even 1/(1-q^|x|) · Π_odd (1+q^|y|), coefficients up to degree 20.
        let g = table();
        let s = Slices::new(&g);
        let max = 20usize;
        let mut series = vec![0u64; max + 1];
        series[0] = 1;
        for id in g.v_ids() {
            let d = g.degree(id) as usize;
            if g.is_odd(id) {
                let mut next = series.clone();
                for (n, v) in series.iter().enumerate() {
                    if n + d <= max {
                        next[n + d] += v;
                    }
                }
                series = next;
            } else {
                // Geometric factor: series /= (1 - q^d) done as prefix sums.
                for n in d..=max {
                    series[n] += series[n - d];
                }
            }
        }
        for (n, expected) in series.iter().enumerate() {
            assert_eq!(
                s.algebra(n as u32).len() as u64,
                *expected,
                "slice size mismatch in degree {n}"
            );
        }
    }

    #[test]
    fn module_slices_include_suspensions() {
        let g = table();
        let s = Slices::new(&g);
        // Degree 1: only sx2.
        let deg1: Vec<String> = s.module(1).iter().map(|m| m.display(&g)).collect();
        assert_eq!(deg1, vec!["sx2".to_string()]);
        // module_below(1): only x2 and sx2 contribute; degree 2 = {x2, sx2^2}?
        // sx2 is odd (degree 1), so sx2^2 = 0; expect exactly {x2}.
        let below: Vec<String> = s.module_below(1, 2).iter().map(|m| m.display(&g)).collect();
        assert_eq!(below, vec!["x2".to_string()]);
    }

    #[test]
    fn word_filters_select_consistent_subsets() {
        let g = table();
        let s = Slices::new(&g);
        let full = s.algebra(8);
        let by_wl: usize = (0..=8)
            .map(|w| s.algebra_word_length(8, w).len())
            .sum();
        assert_eq!(by_wl, full.len());
        // Degree 8 by word length: x4^2 (2), x2^2 x4 (3), x2^4 (4).
        assert_eq!(s.algebra_word_length(8, 2).len(), 1);
        assert_eq!(s.algebra_word_length_at_least(8, 3).len(), 2);
    }

    #[test]
    fn suspension_words_enumerate_pairs_once() {
        let g = table();
        let words = suspension_words_up_to(&g, 2);
        // sx2 (deg 1) and sx4 (deg 3) are odd and square to zero; sy5 (deg 4)
        // and sy7 (deg 6) are even and can square.
        let singles = words.iter().filter(|w| w.word_length() == 1).count();
        let pairs = words.iter().filter(|w| w.word_length() == 2).count();
        assert_eq!(singles, 4);
        assert_eq!(pairs, 6 + 2);
        assert!(words.contains(&Monomial::one()));
    }
}
