//! `ΛV`-linear morphisms from the acyclic closure into `ΛV`, and the
//! differential `D(f) = d∘f - (-1)^{|f|} f∘d̄` of the resulting Hom complex.
//!
//! A morphism is determined by its values on suspension words. Values are
//! stored on a finite tracked set: the empty word, the single suspensions,
//! all length-two words, and whatever longer words the closure differential
//! drags in (its correction terms can have suspension words of any length).
//! `tracked_words` computes that set as a fixpoint, so applying `f∘d̄` to a
//! tracked word only ever asks for tracked values.

use crate::closure::AcyclicClosure;
use crate::basis::suspension_words_up_to;
use crate::gens::Gens;
use crate::model::SullivanModel;
use crate::monomial::Monomial;
use crate::param::{Coeff, ParamId};
use crate::poly::Poly;
use crate::scalar::Rat;
use std::collections::{BTreeMap, BTreeSet};

/// How to treat a suspension word the morphism has no stored value for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extension {
    /// Fail the evaluation: the caller must guarantee tracked support.
    Strict,
    /// Treat the value as zero.
    Zero,
}

/// A degree-`n` morphism `ΛV ⊗ ΛsV → ΛV` of `ΛV`-modules, with the Koszul
/// convention `f(a·w) = (-1)^{|f||a|} a·f(w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleMorphism {
    degree: i64,
    values: BTreeMap<Monomial, Poly>,
}

impl ModuleMorphism {
    #[must_use]
    pub fn zero(degree: i64) -> Self {
        ModuleMorphism { degree, values: BTreeMap::new() }
    }

    #[must_use]
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn set_value(&mut self, word: Monomial, value: Poly) {
        debug_assert!(word.is_pure_suspension());
        if value.is_zero() {
            self.values.remove(&word);
        } else {
            self.values.insert(word, value);
        }
    }

    /// Stored value on a suspension word; absent means zero under
    /// [`Extension::Zero`] and failure under [`Extension::Strict`].
    #[must_use]
    pub fn value(&self, word: &Monomial) -> Option<&Poly> {
        self.values.get(word)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&Monomial, &Poly)> {
        self.values.iter()
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Evaluation on a module polynomial.
    #[must_use]
    pub fn apply(&self, p: &Poly, gens: &Gens, extension: Extension) -> Option<Poly> {
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            let (split_sign, algebra, word) = m.split_suspension(gens);
            let value = match self.values.get(&word) {
                Some(v) => v,
                None => match extension {
                    Extension::Zero => continue,
                    Extension::Strict => return None,
                },
            };
            let koszul = if self.degree.rem_euclid(2) == 1 && algebra.degree(gens) % 2 == 1 {
                -1
            } else {
                1
            };
            let term = Poly::monomial(algebra)
                .mul(value, gens)
                .scale(&crate::scalar::rat(i64::from(split_sign) * koszul));
            out = out.add(&term.scale_coeff(c));
        }
        Some(out)
    }

    #[must_use]
    pub fn add(&self, other: &ModuleMorphism) -> ModuleMorphism {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (w, v) in &other.values {
            let merged = out.values.get(w).map_or_else(|| v.clone(), |u| u.add(v));
            out.set_value(w.clone(), merged);
        }
        out
    }

    #[must_use]
    pub fn sub(&self, other: &ModuleMorphism) -> ModuleMorphism {
        self.add(&other.scale(&crate::scalar::rat(-1)))
    }

    #[must_use]
    pub fn scale(&self, k: &Rat) -> ModuleMorphism {
        ModuleMorphism {
            degree: self.degree,
            values: self
                .values
                .iter()
                .map(|(w, v)| (w.clone(), v.scale(k)))
                .collect(),
        }
    }

    #[must_use]
    pub fn substitute_param(&self, id: ParamId, replacement: &Coeff) -> ModuleMorphism {
        let mut out = ModuleMorphism::zero(self.degree);
        for (w, v) in &self.values {
            out.set_value(w.clone(), v.substitute_param(id, replacement));
        }
        out
    }

    /// All parameters appearing in any value.
    #[must_use]
    pub fn params(&self) -> BTreeSet<ParamId> {
        let mut set = BTreeSet::new();
        for v in self.values.values() {
            v.collect_params(&mut set);
        }
        set
    }

    #[must_use]
    pub fn is_parameter_free(&self) -> bool {
        self.values.values().all(Poly::is_parameter_free)
    }

    /// The morphism with every parameter set to zero.
    #[must_use]
    pub fn pinned_to_zero(&self) -> ModuleMorphism {
        let mut out = ModuleMorphism::zero(self.degree);
        for (w, v) in &self.values {
            out.set_value(w.clone(), v.pinned_to_zero());
        }
        out
    }
}

/// The tracked suspension words of a closure: empty word, singles, pairs,
/// and the closure of that set under words appearing in `d̄`.
#[must_use]
pub fn tracked_words(closure: &AcyclicClosure) -> Vec<Monomial> {
    let gens = closure.model().gens();
    let mut set: BTreeSet<Monomial> = suspension_words_up_to(gens, 2).into_iter().collect();
    loop {
        let mut fresh: Vec<Monomial> = Vec::new();
        for w in &set {
            let image = closure.apply(&Poly::monomial(w.clone()));
            for (m, _) in image.terms() {
                let (_, _, word) = m.split_suspension(gens);
                if !set.contains(&word) {
                    fresh.push(word);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        set.extend(fresh);
    }
    set.into_iter().collect()
}

/// One row of the Hom differential:
/// `(Df)(w) = d(f(w)) - (-1)^{|f|} f(d̄(w))`.
#[must_use]
pub fn hom_row(
    model: &SullivanModel,
    closure: &AcyclicClosure,
    f: &ModuleMorphism,
    word: &Monomial,
    extension: Extension,
) -> Option<Poly> {
    let gens = model.gens();
    let value = match f.value(word) {
        Some(v) => v.clone(),
        None => match extension {
            Extension::Zero => Poly::zero(),
            Extension::Strict => return None,
        },
    };
    let outer = model.diff().apply(&value, gens);
    let inner = f.apply(&closure.apply(&Poly::monomial(word.clone())), gens, extension)?;
    Some(if f.degree().rem_euclid(2) == 0 {
        outer.sub(&inner)
    } else {
        outer.add(&inner)
    })
}

/// The Hom differential restricted to the given rows.
#[must_use]
pub fn hom_differential(
    model: &SullivanModel,
    closure: &AcyclicClosure,
    f: &ModuleMorphism,
    words: &[Monomial],
    extension: Extension,
) -> Option<ModuleMorphism> {
    let mut out = ModuleMorphism::zero(f.degree() + 1);
    for w in words {
        let row = hom_row(model, closure, f, w, extension)?;
        out.set_value(w.clone(), row);
    }
    Some(out)
}

/// Whether `Df` vanishes identically (for all parameter values) on the rows.
#[must_use]
pub fn is_closed_on(
    model: &SullivanModel,
    closure: &AcyclicClosure,
    f: &ModuleMorphism,
    words: &[Monomial],
    extension: Extension,
) -> Option<bool> {
    let df = hom_differential(model, closure, f, words, extension)?;
    Some(df.is_zero())
}
