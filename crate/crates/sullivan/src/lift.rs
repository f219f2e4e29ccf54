//! Stepwise correction of a closed module morphism across a grading of the
//! differential.
//!
//! Input: a morphism of degree `N` with values on the empty word and the
//! single suspensions (possibly carrying free parameters) that is closed for
//! a *base* part of the differential. Output: a corrected morphism closed
//! for the full differential, the number of counted correction steps, and
//! the parameter pins the corrections forced along the way.
//!
//! Two gradings share one engine:
//!
//! * [`lift_word_length`] grades by word length. The base is the lowest
//!   word-length part of the differential, which raises word length by
//!   exactly `k - 1`; the corrector of step `i` is sought on word length
//!   `p + i - 1` over suspension rows and `p + i` on the empty word (one
//!   ahead, because the empty-word residual component of that step lives
//!   one length higher).
//! * [`lift_filtration`] grades by filtration weight (degree plus odd
//!   factor count). The base is the pure part, which preserves the weight;
//!   step `j` targets the single absolute level `entry + j - 1` on every
//!   row, starting at the level of the input morphism itself. Odd levels
//!   carry no monomials and are skipped without being counted.
//!
//! A step solves its corrector row by row, the empty word first and then
//! each suspension in generator order, each time as a full polynomial
//! identity over the codomain degree slice. Residual components the base
//! differential cannot reach therefore force parameter pins instead of
//! being dropped, and pins apply at once to everything solved so far. The
//! residual against the full differential is recomputed from the corrected
//! morphism before every step; the loop stops once at least one step has
//! been counted and the residual vanishes identically in the surviving
//! parameters. The at-least-one rule makes the first step record the
//! general corrector family at the entry level even when the residual is
//! already zero there. A corrector that reproduces the whole residual
//! exactly under the full differential, found without pins after at least
//! one counted step, is applied as a terminal step that does not count.

use thiserror::Error;

use crate::basis::{suspension_words_up_to, Slices};
use crate::closure::AcyclicClosure;
use crate::gens::Gens;
use crate::hom::{hom_differential, hom_row, Extension, ModuleMorphism};
use crate::linalg::{matrix_of, solve_affine, Infeasible};
use crate::model::SullivanModel;
use crate::monomial::Monomial;
use crate::param::{Coeff, ParamId, ParamSupply};
use crate::poly::Poly;
use crate::scalar::rat;
use std::collections::BTreeSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LiftError {
    #[error("row {row} at level {level}: the corrector system has no solution")]
    Infeasible { row: String, level: i64 },
    #[error("residual still nonzero after all {budget} reachable levels")]
    LevelBudget { budget: u32 },
    #[error("{steps} counted steps exceed the proven bound {cap}")]
    StepBound { steps: u32, cap: i64 },
}

/// What one engine iteration did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    /// A corrector was solved and subtracted; the step counts.
    Counted,
    /// Nothing to do at this level: no unknowns and no targeted residual.
    Skipped,
    /// The corrector reproduced the whole residual exactly; subtracted
    /// without counting, ending the climb.
    Terminal,
}

impl StepOutcome {
    #[must_use]
    pub fn name(self) -> &'static str {
        match self {
            StepOutcome::Counted => "counted",
            StepOutcome::Skipped => "skipped",
            StepOutcome::Terminal => "terminal",
        }
    }
}

#[derive(Debug, Clone)]
pub struct StepRecord {
    /// Word-length scheme: the component index of the step. Filtration
    /// scheme: the absolute weight level targeted.
    pub level: i64,
    pub outcome: StepOutcome,
    /// Parameter pins forced during this step.
    pub pins: usize,
    /// Fresh parameters minted for kernel directions during this step.
    pub fresh_params: usize,
    /// Rows whose unknown slice had to be widened beyond the exact level
    /// (filtration scheme only).
    pub widened_rows: usize,
    /// Total terms across the residual rows at entry to this step.
    pub residual_terms: usize,
    /// Row words where the subtracted corrector is nonzero.
    pub corrector_support: Vec<Monomial>,
    /// Distinct word lengths among the corrector's value terms.
    pub corrector_word_lengths: Vec<u32>,
}

#[derive(Debug)]
pub struct LiftOutcome {
    pub morphism: ModuleMorphism,
    /// Counted correction steps.
    pub steps: u32,
    /// The base already equals the full differential; nothing ran.
    pub degenerate: bool,
    /// Word-length scheme: the lowest word length among the input values.
    /// Filtration scheme: the weight level of the input morphism.
    pub entry_level: i64,
    /// All pins applied, in order, later pins substituted into earlier ones.
    pub pins: Vec<(ParamId, Coeff)>,
    pub trace: Vec<StepRecord>,
}

/// The rows a lift corrects and measures residuals on: the empty word and
/// the single suspensions in generator order.
pub(crate) fn row_words(gens: &Gens) -> Vec<Monomial> {
    std::iter::once(Monomial::one())
        .chain(gens.sv_ids().map(Monomial::gen))
        .collect()
}

/// Corrects a morphism closed for the lowest word-length part of the
/// differential until it is closed for the whole differential. The model's
/// differential is the full one; its lowest word-length part is the base.
pub fn lift_word_length(
    model: &SullivanModel,
    f: ModuleMorphism,
    supply: &mut ParamSupply,
) -> Result<LiftOutcome, LiftError> {
    let p = lowest_value_word_length(&f);
    if model.diff().is_zero() || model.diff().is_word_homogeneous() {
        return Ok(degenerate_outcome(f, i64::from(p)));
    }
    let k = model.k().expect("a non-homogeneous differential is nonzero");
    let base = model.word_part_model(k);
    Engine::new(model, base, Scheme::WordLength { p, k }, &f).run(f, supply)
}

/// Corrects a morphism closed for the pure part of the differential until
/// it is closed for the full differential. The input should already carry
/// values on the length-two suspension words (see [`extend_over_pairs`]);
/// correctors only touch the empty word and the single suspensions.
pub fn lift_filtration(
    model: &SullivanModel,
    mut f: ModuleMorphism,
    supply: &mut ParamSupply,
) -> Result<LiftOutcome, LiftError> {
    let gens = model.gens();
    let entry = filtration_level(gens, &f);
    let base = model.pure_model();
    if base.diff().images() == model.diff().images() {
        return Ok(degenerate_outcome(f, entry));
    }
    // Keep only the family directions concentrated at the entry level.
    // Off-level directions would leak residual components through the
    // weight-raising closure terms to levels the climb never targets.
    let mut pre_pins: Vec<(ParamId, Coeff)> = Vec::new();
    for id in f.params() {
        let off_level = row_words(gens).iter().any(|word| {
            let shift = i64::from(word_shift(gens, word));
            f.value(word).into_iter().flat_map(|v| v.terms()).any(|(m, c)| {
                c.coefficient_of(id) != rat(0)
                    && i64::from(m.sigma_weight(gens)) - shift != entry
            })
        });
        if off_level {
            f = f.substitute_param(id, &Coeff::zero());
            pre_pins.push((id, Coeff::zero()));
        }
    }
    let mut out = Engine::new(model, base, Scheme::Filtration { entry }, &f).run(f, supply)?;
    out.pins.splice(0..0, pre_pins);
    Ok(out)
}

fn degenerate_outcome(f: ModuleMorphism, entry: i64) -> LiftOutcome {
    LiftOutcome {
        morphism: f,
        steps: 0,
        degenerate: true,
        entry_level: entry,
        pins: Vec::new(),
        trace: Vec::new(),
    }
}

fn lowest_value_word_length(f: &ModuleMorphism) -> u32 {
    f.rows()
        .filter_map(|(_, v)| v.min_word_length())
        .min()
        .unwrap_or(0)
}

/// `s(m) + r(m)` of a suspension word: its degree, plus one per odd-degree
/// factor and two per even-degree factor counted with multiplicity. The
/// filtration level of a value monomial `μ` on row `m` is its weight minus
/// this shift.
fn word_shift(gens: &Gens, word: &Monomial) -> u32 {
    let r: u32 = word
        .factors()
        .iter()
        .map(|&(g, e)| if gens.degree(g) % 2 == 1 { e } else { 2 * e })
        .sum();
    word.degree(gens) + r
}

/// The filtration-weight level of a morphism: the minimum level of any
/// value monomial over the empty word and the single suspensions. Measured
/// on the zero member of a parametric family, since kernel directions may
/// sit at other levels without changing where the climb starts.
fn filtration_level(gens: &Gens, f: &ModuleMorphism) -> i64 {
    let pinned = f.pinned_to_zero();
    let mut level = i64::MAX;
    for (word, value) in pinned.rows() {
        if word.word_length() > 1 {
            continue;
        }
        let shift = i64::from(word_shift(gens, word));
        for (m, _) in value.terms() {
            level = level.min(i64::from(m.sigma_weight(gens)) - shift);
        }
    }
    assert!(level < i64::MAX, "the morphism has at least one value");
    level
}

#[derive(Debug, Clone, Copy)]
enum Scheme {
    WordLength { p: u32, k: u32 },
    Filtration { entry: i64 },
}

/// A row the corrector is solved on: the empty word or one suspension.
type Row = Option<usize>;

struct Engine<'a> {
    full: &'a SullivanModel,
    base: SullivanModel,
    base_closure: AcyclicClosure,
    full_closure: AcyclicClosure,
    rows: Vec<Monomial>,
    n: i64,
    scheme: Scheme,
}

impl<'a> Engine<'a> {
    fn new(full: &'a SullivanModel, base: SullivanModel, scheme: Scheme, f: &ModuleMorphism) -> Self {
        Engine {
            full,
            base_closure: AcyclicClosure::build(&base),
            full_closure: AcyclicClosure::build(full),
            base,
            rows: row_words(full.gens()),
            n: f.degree(),
            scheme,
        }
    }

    fn row_word(&self, row: Row) -> Monomial {
        let gens = self.full.gens();
        match row {
            None => Monomial::one(),
            Some(i) => Monomial::gen(gens.id_of_sv(i)),
        }
    }

    fn row_list(&self) -> Vec<Row> {
        std::iter::once(None)
            .chain((0..self.full.gens().v_count()).map(Some))
            .collect()
    }

    fn value_degree(&self, row: Row) -> u32 {
        let gens = self.full.gens();
        let d = self.n + i64::from(self.row_word(row).degree(gens));
        u32::try_from(d).expect("value degrees are nonnegative")
    }

    /// Residual of `f` against the full differential on the tracked rows.
    fn residual(&self, f: &ModuleMorphism) -> ModuleMorphism {
        hom_differential(self.full, &self.full_closure, f, &self.rows, Extension::Zero)
            .expect("zero extension always evaluates")
    }

    /// The monomial slice a corrector value is solved over.
    fn unknown_slice(&self, slices: &Slices, row: Row, step: u32, widened: bool) -> Vec<Monomial> {
        let gens = slices.gens();
        let degree = self.value_degree(row);
        match self.scheme {
            Scheme::WordLength { p, k: _ } => {
                let wl = match row {
                    None => p + step,
                    Some(_) => p + step - 1,
                };
                let slice = slices.algebra_word_length(degree, wl);
                match row {
                    None => slice,
                    Some(_) => slice
                        .into_iter()
                        .filter(|m| m.odd_factor_count(gens) >= 1)
                        .collect(),
                }
            }
            Scheme::Filtration { .. } => {
                let Some(target) = self.sigma_target(row, step) else {
                    return Vec::new();
                };
                if widened {
                    slices
                        .algebra(degree)
                        .iter()
                        .filter(|m| m.sigma_weight(gens) >= target)
                        .cloned()
                        .collect()
                } else {
                    slices.algebra_sigma_weight(degree, target)
                }
            }
        }
    }

    /// The component of a residual row targeted by the given step.
    fn target(&self, residual_row: &Poly, row: Row, step: u32) -> Poly {
        let gens = self.full.gens();
        match self.scheme {
            Scheme::WordLength { p, k } => {
                let wl = match row {
                    None => p + k - 1 + step,
                    Some(_) => p + k - 2 + step,
                };
                residual_row.word_length_component(wl)
            }
            Scheme::Filtration { .. } => match self.sigma_target(row, step) {
                Some(weight) => residual_row.sigma_component(weight, gens),
                None => Poly::zero(),
            },
        }
    }

    /// Absolute weight of the slice a filtration step works in on a row:
    /// the targeted level plus the row's shift.
    fn sigma_target(&self, row: Row, step: u32) -> Option<u32> {
        let Scheme::Filtration { entry } = self.scheme else {
            return None;
        };
        let shift = i64::from(word_shift(self.full.gens(), &self.row_word(row)));
        u32::try_from(entry + i64::from(step) - 1 + shift).ok()
    }

    /// Last step index at which either an unknown slice or a residual
    /// component can still be nonempty.
    fn level_budget(&self, slices: &Slices) -> u32 {
        let gens = self.full.gens();
        let mut budget: i64 = 1;
        for row in self.row_list() {
            let vd = self.value_degree(row);
            match self.scheme {
                Scheme::WordLength { p, k } => {
                    let p = i64::from(p);
                    let k = i64::from(k);
                    if let Some(w) = slices.max_word_length(vd) {
                        let unknown = i64::from(w) - p + i64::from(u32::from(row.is_some()));
                        budget = budget.max(unknown);
                    }
                    if let Some(w) = slices.max_word_length(vd + 1) {
                        let offset = if row.is_none() { k - 1 } else { k - 2 };
                        budget = budget.max(i64::from(w) - p - offset);
                    }
                }
                Scheme::Filtration { entry } => {
                    let shift = i64::from(word_shift(gens, &self.row_word(row)));
                    for d in [vd, vd + 1] {
                        if let Some(w) = slices.max_sigma_weight(d) {
                            budget = budget.max(i64::from(w) - shift - entry + 1);
                        }
                    }
                }
            }
        }
        u32::try_from(budget.max(1) + 1).expect("level budget fits")
    }

    /// Proven bound on counted steps, where the grading provides one.
    fn counted_cap(&self) -> Option<i64> {
        match self.scheme {
            Scheme::WordLength { p, k } => {
                let gens = self.full.gens();
                let top = (0..gens.v_count())
                    .map(|i| i64::from(gens.degree(gens.id_of_v(i))))
                    .max()
                    .unwrap_or(0);
                let numerator = self.n + 2 - 2 * i64::from(p) - 2 * i64::from(k) + top;
                Some(if numerator >= 0 {
                    numerator / 2
                } else {
                    (numerator - 1) / 2
                })
            }
            Scheme::Filtration { .. } => None,
        }
    }

    fn level_label(&self, step: u32) -> i64 {
        match self.scheme {
            Scheme::WordLength { .. } => i64::from(step),
            Scheme::Filtration { entry } => entry + i64::from(step) - 1,
        }
    }

    /// Solves `d_base(value) = rhs` over the unknown slice as a full
    /// identity on the codomain degree slice.
    fn solve_row(
        &self,
        slices: &Slices,
        unknowns: &[Monomial],
        rhs_poly: &Poly,
        codomain_degree: u32,
        supply: &mut ParamSupply,
    ) -> Result<(Poly, Vec<(ParamId, Coeff)>, usize), Infeasible> {
        let gens = self.full.gens();
        let codomain = slices.algebra(codomain_degree);
        let rhs = rhs_poly
            .coords_in(&codomain)
            .expect("the right-hand side has the codomain degree");
        let matrix = matrix_of(unknowns, &codomain, |m| {
            self.base.diff().apply(&Poly::monomial(m.clone()), gens)
        })
        .expect("base differential images are parameter-free");
        let sol = solve_affine(matrix, rhs, unknowns.len())?;
        let (coords, fresh) = sol.family(supply);
        Ok((Poly::from_coords(unknowns, &coords), sol.pins, fresh.len()))
    }

    fn run(self, f: ModuleMorphism, supply: &mut ParamSupply) -> Result<LiftOutcome, LiftError> {
        let gens = self.full.gens();
        let slices = Slices::new(gens);
        let budget = self.level_budget(&slices);
        let cap = self.counted_cap();
        let sign = if self.n.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };

        let mut f = f;
        let mut counted: u32 = 0;
        let mut trace: Vec<StepRecord> = Vec::new();
        let mut pins_all: Vec<(ParamId, Coeff)> = Vec::new();
        let mut step: u32 = 1;
        loop {
            let mut residual = self.residual(&f);
            if counted >= 1 && residual.is_zero() {
                break;
            }
            if step > budget {
                if residual.is_zero() {
                    break;
                }
                return Err(LiftError::LevelBudget { budget });
            }

            let residual_terms: usize = residual.rows().map(|(_, p)| p.term_count()).sum();
            let row_poly = |r: &ModuleMorphism, row: Row| -> Poly {
                r.value(&self.row_word(row))
                    .cloned()
                    .unwrap_or_else(Poly::zero)
            };
            let trivial = self.row_list().into_iter().all(|row| {
                self.unknown_slice(&slices, row, step, false).is_empty()
                    && self.target(&row_poly(&residual, row), row, step).is_zero()
            });
            if trivial {
                trace.push(StepRecord {
                    level: self.level_label(step),
                    outcome: StepOutcome::Skipped,
                    pins: 0,
                    fresh_params: 0,
                    widened_rows: 0,
                    residual_terms,
                    corrector_support: Vec::new(),
                    corrector_word_lengths: Vec::new(),
                });
                step += 1;
                continue;
            }

            let mut corrector = ModuleMorphism::zero(self.n);
            let mut step_pins = 0usize;
            let mut step_fresh = 0usize;
            let mut widened_rows = 0usize;
            for row in self.row_list() {
                let target = self.target(&row_poly(&residual, row), row, step);
                // The word-length scheme keeps the base-closure boundary
                // and the whole adjustment: its off-length components hit
                // rows the unknowns cannot reach and pin spurious kernel
                // directions right away. The filtration scheme measures the
                // residual against the full closure, whose weight-raising
                // terms belong to later levels, so it applies the full
                // boundary and keeps only the on-level component.
                let adjustment = match row {
                    None => Poly::zero(),
                    Some(i) => {
                        let boundary = match self.scheme {
                            Scheme::WordLength { .. } => {
                                self.base_closure.boundary_of_suspension(i)
                            }
                            Scheme::Filtration { .. } => {
                                self.full_closure.boundary_of_suspension(i)
                            }
                        };
                        let applied = corrector
                            .apply(&boundary, gens, Extension::Zero)
                            .expect("zero extension always evaluates")
                            .scale(&sign);
                        match self.scheme {
                            Scheme::WordLength { .. } => applied,
                            Scheme::Filtration { .. } => match self.sigma_target(row, step) {
                                Some(weight) => applied.sigma_component(weight, gens),
                                None => Poly::zero(),
                            },
                        }
                    }
                };
                let rhs = target.add(&adjustment);
                let codomain_degree = self.value_degree(row) + 1;
                let unknowns = self.unknown_slice(&slices, row, step, false);
                let mut solved = self.solve_row(&slices, &unknowns, &rhs, codomain_degree, supply);
                if solved.is_err() && matches!(self.scheme, Scheme::Filtration { .. }) {
                    let wider = self.unknown_slice(&slices, row, step, true);
                    widened_rows += 1;
                    solved = self.solve_row(&slices, &wider, &rhs, codomain_degree, supply);
                }
                let Ok((value, pins, fresh)) = solved else {
                    return Err(LiftError::Infeasible {
                        row: self.row_word(row).display(gens),
                        level: self.level_label(step),
                    });
                };
                corrector.set_value(self.row_word(row), value);
                step_fresh += fresh;
                step_pins += pins.len();
                for (id, val) in &pins {
                    f = f.substitute_param(*id, val);
                    corrector = corrector.substitute_param(*id, val);
                    residual = residual.substitute_param(*id, val);
                    for (_, earlier) in pins_all.iter_mut() {
                        *earlier = earlier.substitute(*id, val);
                    }
                }
                pins_all.extend(pins);
            }

            let corrector_support: Vec<Monomial> = corrector
                .rows()
                .filter(|(_, p)| !p.is_zero())
                .map(|(w, _)| w.clone())
                .collect();
            let corrector_word_lengths: Vec<u32> = corrector
                .rows()
                .flat_map(|(_, p)| p.terms().map(|(m, _)| m.word_length()))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            if step_pins == 0 && counted >= 1 {
                let image =
                    hom_differential(self.full, &self.full_closure, &corrector, &self.rows, Extension::Zero)
                        .expect("zero extension always evaluates");
                if image == residual {
                    f = f.sub(&corrector);
                    trace.push(StepRecord {
                        level: self.level_label(step),
                        outcome: StepOutcome::Terminal,
                        pins: 0,
                        fresh_params: step_fresh,
                        widened_rows,
                        residual_terms,
                        corrector_support,
                        corrector_word_lengths,
                    });
                    break;
                }
            }
            f = f.sub(&corrector);
            counted += 1;
            trace.push(StepRecord {
                level: self.level_label(step),
                outcome: StepOutcome::Counted,
                pins: step_pins,
                fresh_params: step_fresh,
                widened_rows,
                residual_terms,
                corrector_support,
                corrector_word_lengths,
            });
            if let Some(cap) = cap {
                if i64::from(counted) > cap {
                    return Err(LiftError::StepBound { steps: counted, cap });
                }
            }
            step += 1;
        }

        let entry_level = match self.scheme {
            Scheme::WordLength { p, .. } => i64::from(p),
            Scheme::Filtration { entry } => entry,
        };
        Ok(LiftOutcome {
            morphism: f,
            steps: counted,
            degenerate: false,
            entry_level,
            pins: pins_all,
            trace,
        })
    }
}

/// Why a pair word could not be given (or keep) a closed value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairIssue {
    /// The closedness equation has no solution in the degree slice.
    NoPreimage,
    /// The right-hand side involves longer words without stored values.
    LongerWordValue,
    /// A pair feeding this word's right-hand side already failed.
    FailedDependency,
    /// A preserved word whose residual row is not zero.
    NonzeroResidual,
}

#[derive(Debug, Default)]
pub struct PairReport {
    pub solved: usize,
    pub preserved: usize,
    /// Pins forced on morphism parameters by unsolvable components.
    pub pins: Vec<(ParamId, Coeff)>,
    pub issues: Vec<(Monomial, PairIssue)>,
}

impl PairReport {
    #[must_use]
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Words of length two or more appearing in an acyclic closure's correction
/// terms. Residual rows read morphism values on exactly these words beyond
/// the single suspensions.
#[must_use]
pub fn correction_pair_words(closure: &AcyclicClosure) -> BTreeSet<Monomial> {
    let gens = closure.model().gens();
    let mut out = BTreeSet::new();
    for i in 0..gens.v_count() {
        for (m, _) in closure.z(i).terms() {
            let (_, _, word) = m.split_suspension(gens);
            if word.word_length() >= 2 {
                out.insert(word);
            }
        }
    }
    out
}

/// Extends a morphism over the length-two suspension words so that every
/// new row of the differential vanishes: in increasing degree, each pair
/// `w` gets `f(w)` solving `d(f(w)) = (-1)^N f(d̄(w))`, a plain preimage
/// over the full degree slice taking the particular solution. The
/// right-hand side only involves singles and strictly smaller pairs, so the
/// order makes every solve self-contained. Words in `preserve` keep their
/// stored value and are verified instead; unsolvable or blocked words are
/// reported and left without a value.
pub fn extend_over_pairs(
    model: &SullivanModel,
    closure: &AcyclicClosure,
    f: &mut ModuleMorphism,
    preserve: &BTreeSet<Monomial>,
) -> PairReport {
    let gens = model.gens();
    let slices = Slices::new(gens);
    let n = f.degree();
    let sign = if n.rem_euclid(2) == 0 { rat(1) } else { rat(-1) };
    let mut report = PairReport::default();
    let mut failed: BTreeSet<Monomial> = BTreeSet::new();

    let mut pairs: Vec<Monomial> = suspension_words_up_to(gens, 2)
        .into_iter()
        .filter(|w| w.word_length() == 2)
        .collect();
    pairs.sort_by_key(|w| (w.degree(gens), w.clone()));

    for word in pairs {
        if preserve.contains(&word) {
            report.preserved += 1;
            let row = hom_row(model, closure, f, &word, Extension::Zero)
                .expect("zero extension always evaluates");
            if !row.is_zero() {
                report.issues.push((word, PairIssue::NonzeroResidual));
            }
            continue;
        }
        let boundary = closure.apply(&Poly::monomial(word.clone()));
        let mut blocked = None;
        for (m, _) in boundary.terms() {
            let (_, _, inner) = m.split_suspension(gens);
            if inner.word_length() > 2 && f.value(&inner).is_none() {
                blocked = Some(PairIssue::LongerWordValue);
            } else if inner.word_length() == 2 && failed.contains(&inner) {
                blocked = Some(PairIssue::FailedDependency);
            }
        }
        if let Some(issue) = blocked {
            failed.insert(word.clone());
            report.issues.push((word, issue));
            continue;
        }
        let rhs = f
            .apply(&boundary, gens, Extension::Zero)
            .expect("zero extension always evaluates")
            .scale(&sign);
        let degree = u32::try_from(n + i64::from(word.degree(gens)))
            .expect("pair value degrees are nonnegative");
        let domain = slices.algebra(degree);
        let codomain = slices.algebra(degree + 1);
        let rhs_coords = rhs
            .coords_in(&codomain)
            .expect("the right-hand side has the row degree");
        let matrix = matrix_of(&domain, &codomain, |m| {
            model.diff().apply(&Poly::monomial(m.clone()), gens)
        })
        .expect("differential images are parameter-free");
        match solve_affine(matrix, rhs_coords, domain.len()) {
            Ok(sol) => {
                for (id, val) in &sol.pins {
                    *f = f.substitute_param(*id, val);
                    for (_, earlier) in report.pins.iter_mut() {
                        *earlier = earlier.substitute(*id, val);
                    }
                }
                f.set_value(word, Poly::from_coords(&domain, &sol.particular));
                report.pins.extend(sol.pins);
                report.solved += 1;
            }
            Err(Infeasible) => {
                failed.insert(word.clone());
                report.issues.push((word, PairIssue::NoPreimage));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{elliptic_dim14, elliptic_dim8, s3_times_s3, sphere2, term};
    use crate::hom::is_closed_on;
    use crate::linalg::class_word_length;
    use crate::pure;

    fn sv(model: &SullivanModel, name: &str) -> Monomial {
        let gens = model.gens();
        Monomial::gen(gens.id_of_sv(gens.v_by_name(name).unwrap()))
    }

    /// Rows solved to zero carry no entry in the morphism.
    fn value(f: &ModuleMorphism, model: &SullivanModel, name: &str) -> Poly {
        f.value(&sv(model, name)).cloned().unwrap_or_else(Poly::zero)
    }

    #[test]
    fn the_quadratic_part_generator_lifts_in_three_counted_steps() {
        let model = elliptic_dim8();
        let g = model.gens().clone();
        let mut supply = ParamSupply::new();
        let base = model.word_part_model(2);
        let seed = term(&g, 2, &[("x4", 2)]);
        let start = pure::generator_with_seed(&base, seed, &mut supply).unwrap();
        let out = lift_word_length(&model, start.morphism, &mut supply).unwrap();

        assert_eq!(out.steps, 3);
        assert!(!out.degenerate);
        assert_eq!(out.entry_level, 2);
        assert_eq!(
            out.trace
                .iter()
                .filter(|s| s.outcome == StepOutcome::Counted)
                .count(),
            3
        );
        assert_eq!(out.pins.len(), 4);

        let closure = AcyclicClosure::build(&model);
        assert_eq!(
            is_closed_on(&model, &closure, &out.morphism, &row_words(&g), Extension::Zero),
            Some(true)
        );
        // Every parameter was pinned away or cancelled outright.
        assert!(out.morphism.is_parameter_free());

        let top = out.morphism.value(&Monomial::one()).unwrap();
        assert_eq!(*top, term(&g, 2, &[("x4", 2)]));
        assert_eq!(class_word_length(&model, top), 4);
        assert_eq!(
            value(&out.morphism, &model, "x2"),
            term(&g, -2, &[("x4", 1), ("y5", 1)]).add(&term(&g, -2, &[("x2", 1), ("y7", 1)]))
        );
        assert_eq!(
            value(&out.morphism, &model, "x4"),
            term(&g, 2, &[("x4", 1), ("y7", 1)])
                .add(&term(&g, -2, &[("x2", 1), ("x4", 1), ("y5", 1)]))
                .add(&term(&g, -2, &[("x2", 2), ("y7", 1)]))
        );
        assert_eq!(
            value(&out.morphism, &model, "y5"),
            term(&g, -2, &[("y5", 1), ("y7", 1)])
        );
        assert_eq!(
            value(&out.morphism, &model, "y7"),
            term(&g, -2, &[("x2", 1), ("y5", 1), ("y7", 1)])
        );
    }

    #[test]
    fn a_word_homogeneous_differential_needs_no_correction() {
        let model = sphere2();
        let mut supply = ParamSupply::new();
        let start = pure::generator(&model, &mut supply).unwrap();
        let before = start.morphism.clone();
        let out = lift_word_length(&model, start.morphism, &mut supply).unwrap();
        assert!(out.degenerate);
        assert_eq!(out.steps, 0);
        assert_eq!(out.morphism, before);
    }

    #[test]
    fn zero_and_pure_differentials_are_degenerate_for_the_filtration_scheme() {
        let product = s3_times_s3();
        let mut supply = ParamSupply::new();
        let start = pure::generator(&product, &mut supply).unwrap();
        let out = lift_word_length(&product, start.morphism.clone(), &mut supply).unwrap();
        assert!(out.degenerate);
        let out = lift_filtration(&product, start.morphism, &mut supply).unwrap();
        assert!(out.degenerate);
        assert_eq!(out.steps, 0);

        let pure_model = elliptic_dim8();
        let start = pure::generator(&pure_model, &mut supply).unwrap();
        let out = lift_filtration(&pure_model, start.morphism, &mut supply).unwrap();
        assert!(out.degenerate);
        assert_eq!(out.steps, 0);
    }

    fn dim14_seed(g: &Gens) -> Poly {
        term(g, 1, &[("a", 1), ("b", 1), ("x", 1), ("v", 1)])
            .add(&term(g, -1, &[("b", 2), ("x", 1), ("u", 1)]))
    }

    #[test]
    fn pair_values_extend_the_pure_generator_closedly() {
        let model = elliptic_dim14();
        let g = model.gens().clone();
        let pure_model = model.pure_model();
        let mut supply = ParamSupply::new();
        let start = pure::generator_with_seed(&pure_model, dim14_seed(&g), &mut supply).unwrap();
        let closure = AcyclicClosure::build(&pure_model);
        let mut f = start.morphism;
        let report = extend_over_pairs(&pure_model, &closure, &mut f, &BTreeSet::new());
        assert!(report.is_clean(), "issues: {:?}", report.issues);

        let pairs: Vec<Monomial> = suspension_words_up_to(&g, 2)
            .into_iter()
            .filter(|w| w.word_length() == 2)
            .collect();
        assert_eq!(report.solved, pairs.len());
        assert_eq!(
            is_closed_on(&pure_model, &closure, &f, &pairs, Extension::Zero),
            Some(true)
        );
    }

    #[test]
    fn the_filtration_lift_counts_one_step_on_the_dim14_model() {
        let model = elliptic_dim14();
        let g = model.gens().clone();
        let pure_model = model.pure_model();
        let mut supply = ParamSupply::new();
        let start = pure::generator_with_seed(&pure_model, dim14_seed(&g), &mut supply).unwrap();
        let pure_closure = AcyclicClosure::build(&pure_model);
        let mut f = start.morphism;
        let report = extend_over_pairs(&pure_model, &pure_closure, &mut f, &BTreeSet::new());
        assert!(report.is_clean());

        let out = lift_filtration(&model, f, &mut supply).unwrap();
        assert_eq!(out.entry_level, 16);
        assert_eq!(out.steps, 1);
        assert!(!out.degenerate);

        let closure = AcyclicClosure::build(&model);
        assert_eq!(
            is_closed_on(&model, &closure, &out.morphism, &row_words(&g), Extension::Zero),
            Some(true)
        );
        // The counted step leaves a one-parameter family. Both ends of the
        // known closed family lie in it, with the parameter coupling all
        // rows at once.
        assert!(!out.morphism.is_parameter_free());
        let low = [
            (Monomial::one(), dim14_seed(&g)),
            (
                sv(&model, "a"),
                term(&g, -1, &[("b", 1), ("x", 1), ("u", 1), ("v", 1)]),
            ),
            (sv(&model, "x"), Poly::zero()),
            (sv(&model, "u"), Poly::zero()),
            (
                sv(&model, "b"),
                term(&g, 1, &[("a", 1), ("x", 1), ("v", 1), ("w", 1)])
                    .add(&term(&g, -1, &[("b", 1), ("x", 1), ("u", 1), ("w", 1)])),
            ),
            (
                sv(&model, "v"),
                term(&g, 1, &[("x", 1), ("u", 1), ("v", 1), ("w", 1)]),
            ),
            (sv(&model, "w"), Poly::zero()),
        ];
        assert!(family_contains(&out.morphism, &low));
        let high = [
            (
                Monomial::one(),
                term(&g, 1, &[("a", 1), ("b", 1), ("x", 1), ("v", 1)])
                    .add(&term(&g, -1, &[("a", 2), ("x", 1), ("w", 1)])),
            ),
            (
                sv(&model, "a"),
                term(&g, -1, &[("b", 1), ("x", 1), ("u", 1), ("v", 1)])
                    .add(&term(&g, 1, &[("a", 1), ("x", 1), ("u", 1), ("w", 1)])),
            ),
            (sv(&model, "x"), Poly::zero()),
            (sv(&model, "u"), Poly::zero()),
            (
                sv(&model, "b"),
                term(&g, 1, &[("a", 1), ("x", 1), ("v", 1), ("w", 1)]),
            ),
            (sv(&model, "v"), Poly::zero()),
            (sv(&model, "w"), Poly::zero()),
        ];
        assert!(family_contains(&out.morphism, &high));
    }

    fn family_contains(actual: &ModuleMorphism, expected: &[(Monomial, Poly)]) -> bool {
        let mut coords: Vec<Coeff> = Vec::new();
        for (word, want) in expected {
            let got = actual.value(word).cloned().unwrap_or_else(Poly::zero);
            let diff = got.sub(want);
            coords.extend(diff.terms().map(|(_, c)| c.clone()));
        }
        let rows = vec![Vec::new(); coords.len()];
        solve_affine(rows, coords, 0).is_ok()
    }
}
