//! The composed pipeline: build the generating class of the differential
//! Ext group in three stages and read the homotopy invariants off the
//! result.
//!
//! Stage one builds the pure generator over the lowest word-length part of
//! the pure differential. Stage two corrects it word length by word length
//! inside the pure differential (`t` counted steps). Stage three corrects
//! it level by level up to the full differential (`l` counted steps). The
//! invariants then follow: `e0` is recomputed by the independent
//! representative search on the final evaluation at 1 (the pipeline
//! representative itself need not be word-length optimal), `cat0` and `R0`
//! equal `e0`, and `L0 = l0 = t - 1`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::closure::AcyclicClosure;
use crate::gens::Gens;
use crate::hom::{is_closed_on, Extension, ModuleMorphism};
use crate::lift::{
    correction_pair_words, extend_over_pairs, lift_filtration, lift_word_length, row_words,
    LiftError, LiftOutcome, StepRecord,
};
use crate::linalg::class_word_length;
use crate::model::SullivanModel;
use crate::monomial::Monomial;
use crate::oracle;
use crate::param::ParamSupply;
use crate::poly::Poly;
use crate::pure::{self, PureError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(
        "the model is not elliptic (infinite-dimensional cohomology); \
         the invariant equalities need ellipticity, so only the oracle \
         subcommands apply"
    )]
    NotElliptic,
    #[error("pure stage: {0}")]
    Pure(#[from] PureError),
    #[error("word-length stage: {0}")]
    WordLength(LiftError),
    #[error("filtration stage: {0}")]
    Filtration(LiftError),
    #[error("pair extension: {failed} length-two word(s) have no closed value")]
    Pairs { failed: usize },
}

/// How far to run the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// The direct generator of the associated pure model `(ΛV, d_σ)`,
    /// without any perturbation steps.
    Pure,
    /// The perturbative route to the same algebra: start from the lowest
    /// word-length part `(d_k)_σ` and correct across word lengths of the
    /// pure differential.
    WordLength,
    /// All stages: corrected up to the full differential.
    Full,
}

/// What one stage did, for reporting and tracing.
#[derive(Debug, Clone)]
pub struct StageReport {
    pub stage: &'static str,
    /// Counted correction steps (0 for the pure stage).
    pub steps: u32,
    /// The stage had nothing to correct.
    pub degenerate: bool,
    /// Pure stage: lowest word length of the evaluation at 1. Word-length
    /// stage: lowest word length among input values. Filtration stage: the
    /// weight level of the input.
    pub entry_level: i64,
    /// Parameter pins forced during the stage.
    pub pins: usize,
    pub trace: Vec<StepRecord>,
}

/// A pipeline run: the (possibly parametric) morphism after the requested
/// stage, with per-stage metadata.
#[derive(Debug)]
pub struct PipelineRun {
    pub morphism: ModuleMorphism,
    pub stages: Vec<StageReport>,
    /// Counted steps of the word-length stage, when it ran.
    pub t: u32,
    /// Counted steps of the filtration stage, when it ran.
    pub l: u32,
}

/// The assembled invariants of an elliptic model.
#[derive(Debug)]
pub struct InvariantReport {
    /// Formal dimension `N`.
    pub formal_dimension: i64,
    pub elliptic: bool,
    /// Whether the lowest word-length part alone is elliptic (fast path).
    pub elliptic_dk: bool,
    /// Whether the pure part is elliptic.
    pub elliptic_pure: bool,
    pub e0: u32,
    pub cat0: u32,
    pub r0: u32,
    /// Counted steps of the word-length stage.
    pub t: u32,
    /// Counted steps of the filtration stage.
    pub l: u32,
    /// `L0 = t - 1`, saturating at zero when the word-length stage was
    /// degenerate.
    pub big_l0: u32,
    /// `l0 = L0`.
    pub l0: u32,
    /// The word-length stage had nothing to correct (`t = 0`).
    pub degenerate_at_first_term: bool,
    /// The final evaluation at 1: a cocycle representing the fundamental
    /// class, with any leftover family parameters pinned to zero.
    pub fundamental_class_rep: Poly,
    /// The closed-form value when the lowest word-length part is elliptic.
    pub e0_fast: Option<u32>,
    pub stages: Vec<StageReport>,
}

impl InvariantReport {
    /// Renders the report with a fixed key order, so identical inputs
    /// produce byte-identical output. With `trace`, each stage carries its
    /// per-step records.
    #[must_use]
    pub fn to_json(&self, gens: &Gens, trace: bool) -> String {
        let mut s = String::new();
        s.push('{');
        s.push_str(&format!("\"N\":{}", self.formal_dimension));
        s.push_str(&format!(",\"e0\":{}", self.e0));
        s.push_str(&format!(",\"cat0\":{}", self.cat0));
        s.push_str(&format!(",\"R0\":{}", self.r0));
        s.push_str(&format!(",\"t\":{}", self.t));
        s.push_str(&format!(",\"L0\":{}", self.big_l0));
        s.push_str(&format!(",\"l0\":{}", self.l0));
        s.push_str(&format!(",\"l\":{}", self.l));
        s.push_str(&format!(",\"elliptic\":{}", self.elliptic));
        s.push_str(&format!(",\"elliptic_dk\":{}", self.elliptic_dk));
        s.push_str(&format!(",\"elliptic_pure\":{}", self.elliptic_pure));
        s.push_str(&format!(
            ",\"degenerate_at_first_term\":{}",
            self.degenerate_at_first_term
        ));
        match self.e0_fast {
            Some(v) => s.push_str(&format!(",\"e0_fast_path\":{v}")),
            None => s.push_str(",\"e0_fast_path\":null"),
        }
        s.push_str(&format!(
            ",\"fundamental_class_rep\":{}",
            json_string(&self.fundamental_class_rep.display(gens))
        ));
        s.push_str(",\"stages\":[");
        for (i, stage) in self.stages.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&stage_json(stage, gens, trace));
        }
        s.push_str("]}");
        s
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn stage_json(stage: &StageReport, gens: &Gens, trace: bool) -> String {
    let mut s = String::new();
    s.push('{');
    s.push_str(&format!("\"stage\":{}", json_string(stage.stage)));
    s.push_str(&format!(",\"steps\":{}", stage.steps));
    s.push_str(&format!(",\"degenerate\":{}", stage.degenerate));
    s.push_str(&format!(",\"entry_level\":{}", stage.entry_level));
    s.push_str(&format!(",\"pins\":{}", stage.pins));
    if trace {
        s.push_str(",\"trace\":[");
        for (index, step) in stage.trace.iter().enumerate() {
            if index > 0 {
                s.push(',');
            }
            s.push_str(&step_json(index + 1, step, gens));
        }
        s.push(']');
    }
    s.push('}');
    s
}

fn step_json(index: usize, step: &StepRecord, gens: &Gens) -> String {
    let support: Vec<String> = step
        .corrector_support
        .iter()
        .map(|w| json_string(&w.display(gens)))
        .collect();
    let lengths: Vec<String> =
        step.corrector_word_lengths.iter().map(ToString::to_string).collect();
    format!(
        "{{\"step\":{index},\"level\":{},\"outcome\":{},\"pins\":{},\
         \"fresh_params\":{},\"widened_rows\":{},\"residual_terms\":{},\
         \"corrector_support\":[{}],\"corrector_word_lengths\":[{}]}}",
        step.level,
        json_string(step.outcome.name()),
        step.pins,
        step.fresh_params,
        step.widened_rows,
        step.residual_terms,
        support.join(","),
        lengths.join(",")
    )
}

/// Closed-form `e0` when the lowest word-length part of the differential
/// is itself elliptic: `dim V^odd + (k - 2) dim V^even`, and `dim V^odd`
/// for a zero differential. `None` when that part is not elliptic.
#[must_use]
pub fn e0_fast_path(model: &SullivanModel) -> Option<u32> {
    let gens = model.gens();
    let odd = u32::try_from(gens.odd_v_count()).expect("generator counts are small");
    let even = u32::try_from(gens.even_v_count()).expect("generator counts are small");
    match model.k() {
        None => oracle::is_elliptic(model).then_some(odd),
        Some(k) => {
            let dk = model.word_part_model(k);
            oracle::is_elliptic(&dk).then(|| odd + (k - 2) * even)
        }
    }
}

/// Runs the pipeline through `stage`, threading one parameter supply across
/// the stages. The returned morphism may carry free family parameters; pins
/// already applied are reflected in the stage reports.
pub fn run_pipeline(model: &SullivanModel, stage: Stage) -> Result<PipelineRun, PipelineError> {
    let mut supply = ParamSupply::new();
    let mut stages = Vec::new();

    // The direct construction builds the generator of the whole pure model.
    // The perturbative stages instead enter at (ΛV, (d_k)_σ), the pure part
    // of the lowest word-length part, and correct upward from there.
    let stage1_model = match (stage, model.k()) {
        (Stage::Pure, _) | (_, None) => model.pure_model(),
        (_, Some(k)) => model.word_part_model(k).pure_model(),
    };
    let start = pure::generator(&stage1_model, &mut supply)?;
    let entry = start
        .morphism
        .value(&Monomial::one())
        .and_then(Poly::min_word_length)
        .unwrap_or(0);
    stages.push(StageReport {
        stage: "pure",
        steps: 0,
        degenerate: false,
        entry_level: i64::from(entry),
        pins: start.pins.len(),
        trace: Vec::new(),
    });
    let mut f = start.morphism;
    let mut t = 0;
    let mut l = 0;

    // Stage two: correct across the word lengths of the pure differential.
    if stage != Stage::Pure {
        let pure_model = model.pure_model();
        let out = lift_word_length(&pure_model, f, &mut supply)
            .map_err(PipelineError::WordLength)?;
        t = out.steps;
        stages.push(stage_report("word-length", &out));
        f = out.morphism;
    }

    // Stage three: correct level by level up to the full differential.
    if stage == Stage::Full {
        prepare_pair_values(model, &mut f)?;
        let out = lift_filtration(model, f, &mut supply).map_err(PipelineError::Filtration)?;
        l = out.steps;
        stages.push(stage_report("filtration", &out));
        f = out.morphism;
    }

    Ok(PipelineRun { morphism: f, stages, t, l })
}

fn stage_report(stage: &'static str, out: &LiftOutcome) -> StageReport {
    StageReport {
        stage,
        steps: out.steps,
        degenerate: out.degenerate,
        entry_level: out.entry_level,
        pins: out.pins.len(),
        trace: out.trace.clone(),
    }
}

/// Gives the morphism values on the length-two suspension words that the
/// closure correction terms mention, so the filtration stage can read them.
/// Values are solved against the pure differential, which the input is
/// closed for. Usually the correction terms stay within single suspensions
/// and there is nothing to do.
fn prepare_pair_values(model: &SullivanModel, f: &mut ModuleMorphism) -> Result<(), PipelineError> {
    let pure_model = model.pure_model();
    let pure_closure = AcyclicClosure::build(&pure_model);
    let full_closure = AcyclicClosure::build(model);
    let mut needed = correction_pair_words(&full_closure);
    needed.extend(correction_pair_words(&pure_closure));
    if needed.is_empty() {
        return Ok(());
    }
    let report = extend_over_pairs(&pure_model, &pure_closure, f, &BTreeSet::new());
    if report.is_clean() {
        Ok(())
    } else {
        Err(PipelineError::Pairs { failed: report.issues.len() })
    }
}

/// Runs the whole pipeline on an elliptic model and assembles the report.
/// Leftover family parameters are pinned to zero at the end, then the
/// length-two suspension words get values closed for the full differential,
/// and `e0` is recomputed from the final representative by the independent
/// word-length search.
pub fn compute_invariants(model: &SullivanModel) -> Result<InvariantReport, PipelineError> {
    let elliptic = oracle::is_elliptic(model);
    let elliptic_pure = oracle::is_elliptic(&model.pure_model());
    let e0_fast = e0_fast_path(model);
    if !elliptic {
        return Err(PipelineError::NotElliptic);
    }

    let run = run_pipeline(model, Stage::Full)?;
    let mut final_morphism = run.morphism.pinned_to_zero();
    let closure = AcyclicClosure::build(model);
    let pair_report =
        extend_over_pairs(model, &closure, &mut final_morphism, &BTreeSet::new());
    if !pair_report.is_clean() {
        return Err(PipelineError::Pairs { failed: pair_report.issues.len() });
    }
    debug_assert_eq!(
        is_closed_on(
            model,
            &closure,
            &final_morphism,
            &row_words(model.gens()),
            Extension::Zero
        ),
        Some(true),
        "the pipeline output must be closed on the tracked rows"
    );

    let rep = final_morphism
        .value(&Monomial::one())
        .cloned()
        .unwrap_or_else(Poly::zero);
    debug_assert!(
        model.diff().apply(&rep, model.gens()).is_zero(),
        "the final evaluation at 1 must be a cocycle"
    );
    let e0 = class_word_length(model, &rep);
    let t = run.t;
    let big_l0 = t.saturating_sub(1);

    Ok(InvariantReport {
        formal_dimension: model.formal_dimension(),
        elliptic,
        elliptic_dk: e0_fast.is_some(),
        elliptic_pure,
        e0,
        cat0: e0,
        r0: e0,
        t,
        l: run.l,
        big_l0,
        l0: big_l0,
        degenerate_at_first_term: t == 0,
        fundamental_class_rep: rep,
        e0_fast,
        stages: run.stages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{
        elliptic_dim14, elliptic_dim8, polynomial_on_one_even, projective, quadratic_dim8,
        s2_times_s3, s3_times_s3, sphere2, sphere3,
    };

    #[test]
    fn the_dim8_pipeline_reports_the_published_invariants() {
        let model = elliptic_dim8();
        let report = compute_invariants(&model).unwrap();
        assert_eq!(report.formal_dimension, 8);
        assert_eq!(report.t, 3);
        assert_eq!(report.l, 0);
        assert_eq!(report.big_l0, 2);
        assert_eq!(report.l0, 2);
        assert_eq!(report.e0, 4);
        assert_eq!(report.cat0, 4);
        assert_eq!(report.r0, 4);
        assert!(!report.degenerate_at_first_term);
        // The quadratic part alone is not elliptic: no fast path.
        assert_eq!(report.e0_fast, None);
        assert!(!report.elliptic_dk);
        assert!(report.elliptic && report.elliptic_pure);
        assert_eq!(report.stages.len(), 3);
        assert_eq!(oracle::e0_bruteforce(&model), Some(4));
    }

    #[test]
    fn the_sphere_pipeline_degenerates_at_the_first_term() {
        let report = compute_invariants(&sphere2()).unwrap();
        assert_eq!(report.formal_dimension, 2);
        assert_eq!(report.t, 0);
        assert_eq!(report.l, 0);
        assert!(report.degenerate_at_first_term);
        assert_eq!(report.big_l0, 0);
        assert_eq!(report.e0, 1);
        assert_eq!(report.e0_fast, Some(1));
    }

    #[test]
    fn the_dim14_pipeline_lifts_once_in_the_filtration_stage() {
        let model = elliptic_dim14();
        let report = compute_invariants(&model).unwrap();
        assert_eq!(report.formal_dimension, 14);
        // The pure part is word-homogeneous, so the word-length stage has
        // nothing to correct; the filtration stage counts the single step.
        assert_eq!(report.t, 0);
        assert_eq!(report.l, 1);
        assert!(report.degenerate_at_first_term);
        assert_eq!(report.e0, 4);
        // The differential is already quadratic, so the fast path applies
        // and must agree.
        assert_eq!(report.e0_fast, Some(4));
        assert_eq!(oracle::e0_bruteforce(&model), Some(4));
    }

    #[test]
    fn projective_spaces_run_the_fast_path_and_agree() {
        for n in 2..=4u32 {
            let model = projective(n);
            let report = compute_invariants(&model).unwrap();
            assert_eq!(report.e0, n, "e0 of the degree-{n} projective model");
            assert_eq!(report.e0_fast, Some(n));
            assert_eq!(oracle::e0_bruteforce(&model), Some(n));
            assert_eq!(report.t, 0);
            assert_eq!(report.l, 0);
        }
    }

    #[test]
    fn products_of_spheres_report_their_volume_word_length() {
        let report = compute_invariants(&s3_times_s3()).unwrap();
        assert_eq!(report.formal_dimension, 6);
        assert_eq!(report.e0, 2);
        assert_eq!(report.e0_fast, Some(2));

        let report = compute_invariants(&s2_times_s3()).unwrap();
        assert_eq!(report.formal_dimension, 5);
        assert_eq!(report.e0, 2);
        assert_eq!(report.e0_fast, Some(2));
    }

    #[test]
    fn odd_spheres_use_the_volume_form() {
        let report = compute_invariants(&sphere3()).unwrap();
        assert_eq!(report.formal_dimension, 3);
        assert_eq!(report.e0, 1);
        assert_eq!(report.e0_fast, Some(1));
        assert!(report.degenerate_at_first_term);
    }

    #[test]
    fn non_elliptic_models_are_refused() {
        assert!(matches!(
            compute_invariants(&polynomial_on_one_even()),
            Err(PipelineError::NotElliptic)
        ));
        assert!(matches!(
            compute_invariants(&quadratic_dim8()),
            Err(PipelineError::NotElliptic)
        ));
        assert_eq!(e0_fast_path(&polynomial_on_one_even()), None);
    }

    #[test]
    fn word_part_and_pure_part_projections_commute() {
        for model in [
            elliptic_dim8(),
            quadratic_dim8(),
            elliptic_dim14(),
            sphere2(),
            s2_times_s3(),
            projective(3),
        ] {
            let Some(k) = model.k() else { continue };
            let a = model.word_part_model(k).pure_model();
            let b = model.pure_model().word_part_model(k);
            assert_eq!(a.diff().images(), b.diff().images());
        }
    }
}
