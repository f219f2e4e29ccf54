//! Affine-parametric scalars.
//!
//! Solution families are tracked symbolically: a [`Coeff`] is an affine-linear
//! expression `c + Σ aᵢ·pᵢ` in formal parameters [`ParamId`]. Linear solving
//! keeps matrices parameter-free; parameters only ever enter right-hand sides,
//! so affine expressions are closed under every operation the solver performs.
//! Multiplying two genuinely parametric coefficients has no meaning here and
//! panics: it would signal corrupted bookkeeping, not user error.

use crate::scalar::{display, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// Identifier of a formal parameter. Fresh ids are handed out by
/// [`ParamSupply`]; higher ids are considered "younger" and are preferred when
/// a constraint pins a parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamId(pub u32);

impl fmt::Display for ParamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// Hands out fresh parameter ids, strictly increasing.
#[derive(Debug, Default)]
pub struct ParamSupply {
    next: u32,
}

impl ParamSupply {
    #[must_use]
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self) -> ParamId {
        let id = ParamId(self.next);
        self.next += 1;
        id
    }

    /// The id the next `fresh` call will hand out. Ids below this value were
    /// created earlier, which lets callers tell their own parameters apart
    /// from ones minted inside a nested solve.
    #[must_use]
    pub fn peek(&self) -> ParamId {
        ParamId(self.next)
    }
}

/// Affine-linear expression `constant + Σ coef·param` over ℚ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coeff {
    constant: Rat,
    linear: BTreeMap<ParamId, Rat>,
}

/// Outcome of forcing an affine expression to vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PinResult {
    /// `0 = 0`: no information.
    Trivial,
    /// Nonzero constant: the constraint is unsatisfiable.
    Infeasible,
    /// The youngest parameter is determined by the remaining expression.
    Pin(ParamId, Coeff),
}

impl Coeff {
    #[must_use]
    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    #[must_use]
    pub fn one() -> Self {
        Self::from_int(1)
    }

    #[must_use]
    pub fn from_rat(constant: Rat) -> Self {
        Coeff {
            constant,
            linear: BTreeMap::new(),
        }
    }

    #[must_use]
    pub fn from_int(n: i64) -> Self {
        Self::from_rat(crate::scalar::rat(n))
    }

    /// The expression `1·param`.
    #[must_use]
    pub fn param(id: ParamId) -> Self {
        let mut linear = BTreeMap::new();
        linear.insert(id, crate::scalar::rat(1));
        Coeff {
            constant: Rat::zero(),
            linear,
        }
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.is_empty()
    }

    #[must_use]
    pub fn is_constant(&self) -> bool {
        self.linear.is_empty()
    }

    /// The constant term (the full value when [`Self::is_constant`]).
    #[must_use]
    pub fn constant_part(&self) -> &Rat {
        &self.constant
    }

    /// Returns the value as a plain rational if no parameters occur.
    #[must_use]
    pub fn as_constant(&self) -> Option<&Rat> {
        self.is_constant().then_some(&self.constant)
    }

    pub fn params(&self) -> impl Iterator<Item = ParamId> + '_ {
        self.linear.keys().copied()
    }

    /// Coefficient of one parameter.
    #[must_use]
    pub fn coefficient_of(&self, id: ParamId) -> Rat {
        self.linear.get(&id).cloned().unwrap_or_else(Rat::zero)
    }

    fn normalized(mut self) -> Self {
        self.linear.retain(|_, c| !c.is_zero());
        self
    }

    #[must_use]
    pub fn add(&self, other: &Coeff) -> Coeff {
        let mut out = self.clone();
        out.constant += &other.constant;
        for (id, c) in &other.linear {
            let entry = out.linear.entry(*id).or_insert_with(Rat::zero);
            *entry += c;
        }
        out.normalized()
    }

    #[must_use]
    pub fn neg(&self) -> Coeff {
        let mut out = self.clone();
        out.constant = -out.constant;
        for c in out.linear.values_mut() {
            *c = -c.clone();
        }
        out
    }

    #[must_use]
    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    #[must_use]
    pub fn scale(&self, k: &Rat) -> Coeff {
        if k.is_zero() {
            return Coeff::zero();
        }
        let mut out = self.clone();
        out.constant *= k;
        for c in out.linear.values_mut() {
            *c *= k;
        }
        out
    }

    /// Exact division by a nonzero rational.
    #[must_use]
    pub fn div(&self, k: &Rat) -> Coeff {
        assert!(!k.is_zero(), "division of a coefficient by zero");
        self.scale(&k.recip())
    }

    /// Product of two coefficients. At most one side may carry parameters;
    /// a parameter-times-parameter product means the affine invariant broke.
    #[must_use]
    pub fn mul(&self, other: &Coeff) -> Coeff {
        if let Some(k) = self.as_constant() {
            return other.scale(k);
        }
        if let Some(k) = other.as_constant() {
            return self.scale(k);
        }
        panic!("product of two parametric coefficients: affine invariant violated");
    }

    /// Substitutes an affine expression for a parameter.
    #[must_use]
    pub fn substitute(&self, id: ParamId, value: &Coeff) -> Coeff {
        let Some(a) = self.linear.get(&id) else {
            return self.clone();
        };
        let a = a.clone();
        let mut out = self.clone();
        out.linear.remove(&id);
        out.add(&value.scale(&a))
    }

    /// Sets every parameter to zero.
    #[must_use]
    pub fn pinned_to_zero(&self) -> Coeff {
        Coeff::from_rat(self.constant.clone())
    }

    /// Interprets `self = 0` as a constraint and solves it for the youngest
    /// parameter present, if any.
    #[must_use]
    pub fn pin_equation(&self) -> PinResult {
        match self.linear.last_key_value() {
            None => {
                if self.constant.is_zero() {
                    PinResult::Trivial
                } else {
                    PinResult::Infeasible
                }
            }
            Some((&id, a)) => {
                let mut rest = self.clone();
                rest.linear.remove(&id);
                PinResult::Pin(id, rest.scale(&-a.recip()))
            }
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        if !self.constant.is_zero() {
            write!(f, "{}", display(&self.constant))?;
            first = false;
        }
        for (id, c) in &self.linear {
            if first {
                if c == &crate::scalar::rat(1) {
                    write!(f, "{id}")?;
                } else if c == &crate::scalar::rat(-1) {
                    write!(f, "-{id}")?;
                } else {
                    write!(f, "{}*{id}", display(c))?;
                }
                first = false;
            } else if c == &crate::scalar::rat(1) {
                write!(f, " + {id}")?;
            } else if c == &crate::scalar::rat(-1) {
                write!(f, " - {id}")?;
            } else if c.numer() < &num_bigint::BigInt::from(0) {
                write!(f, " - {}*{id}", display(&-c.clone()))?;
            } else {
                write!(f, " + {}*{id}", display(c))?;
            }
        }
        Ok(())
    }
}
