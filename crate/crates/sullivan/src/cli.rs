//! The command-line surface: validation, cohomology tables, generator
//! construction, invariant reports (text or deterministic JSON), and the
//! brute-force oracle checks.
//!
//! Exit codes: 0 on success, 1 on domain errors (unreadable or invalid
//! models, non-elliptic inputs, failed constructions), 2 on usage errors.
//! The `SULLIVAN_MAX_DEGREE` environment variable caps the oracle's degree
//! scans; see [`crate::oracle`].

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use crate::dsl;
use crate::gens::Gens;
use crate::hom::ModuleMorphism;
use crate::invariants::{compute_invariants, run_pipeline, InvariantReport, Stage, StageReport};
use crate::lift::StepRecord;
use crate::model::SullivanModel;
use crate::monomial::Monomial;
use crate::oracle;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "sullivan",
    version,
    about = "Exact invariants of simply connected Sullivan minimal models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a model file.
    Validate { file: PathBuf },
    /// Print cohomology dimensions in degrees 0 through M.
    Cohomology {
        file: PathBuf,
        #[arg(long, value_name = "M")]
        max_degree: u32,
    },
    /// Print the associated pure model in the model language.
    Pure { file: PathBuf },
    /// Build the Ext generator through a stage and print its values.
    ExtGen {
        file: PathBuf,
        #[arg(long, value_enum)]
        stage: StageArg,
    },
    /// Run the full pipeline and report the homotopy invariants.
    Invariants {
        file: PathBuf,
        /// Include the per-step correction trace.
        #[arg(long)]
        trace: bool,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Independent brute-force checks.
    Oracle {
        #[command(subcommand)]
        check: OracleCheck,
    },
}

#[derive(Subcommand)]
enum OracleCheck {
    /// Brute-force the word-length invariant of the fundamental class.
    E0 { file: PathBuf },
    /// Decide ellipticity by scanning quotient dimensions.
    Elliptic { file: PathBuf },
    /// Check Poincaré duality of the cohomology dimension table.
    Poincare { file: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StageArg {
    /// The direct generator of the associated pure model.
    Pure,
    /// The perturbative route: enter at the lowest word-length part and
    /// correct across the word lengths of the pure differential.
    K,
    /// Corrected up to the full differential.
    Full,
}

impl From<StageArg> for Stage {
    fn from(arg: StageArg) -> Stage {
        match arg {
            StageArg::Pure => Stage::Pure,
            StageArg::K => Stage::WordLength,
            StageArg::Full => Stage::Full,
        }
    }
}

/// Runs one command line (without the program name) against the given
/// output streams and returns the exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut argv = Vec::with_capacity(args.len() + 1);
    argv.push("sullivan".to_string());
    argv.extend_from_slice(args);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_DOMAIN
        }
    }
}

fn dispatch(command: &Command, out: &mut dyn Write) -> Result<(), String> {
    match command {
        Command::Validate { file } => {
            let model = load(file)?;
            let gens = model.gens();
            emit(out, &format!(
                "ok: {} generators, formal dimension {}\n",
                gens.v_count(),
                model.formal_dimension()
            ))?;
            let order = model.report().order.join(" ");
            if model.report().reordered {
                emit(out, &format!("order: {order} (reordered from the declared order)\n"))?;
            } else {
                emit(out, &format!("order: {order}\n"))?;
            }
            Ok(())
        }
        Command::Cohomology { file, max_degree } => {
            let model = load(file)?;
            for (degree, dim) in oracle::cohomology_dims(&model, *max_degree).iter().enumerate() {
                emit(out, &format!("dim H^{degree} = {dim}\n"))?;
            }
            Ok(())
        }
        Command::Pure { file } => {
            let model = load(file)?;
            emit(out, &dsl::print_model(&model.pure_model()))
        }
        Command::ExtGen { file, stage } => {
            let model = load(file)?;
            let run = run_pipeline(&model, Stage::from(*stage)).map_err(|e| e.to_string())?;
            for report in &run.stages {
                emit(out, &format!("{}\n", stage_line(report)))?;
            }
            print_morphism(out, &run.morphism, model.gens())
        }
        Command::Invariants { file, trace, json } => {
            let model = load(file)?;
            let report = compute_invariants(&model).map_err(|e| e.to_string())?;
            if *json {
                emit(out, &format!("{}\n", report.to_json(model.gens(), *trace)))
            } else {
                print_report(out, &report, &model, *trace)
            }
        }
        Command::Oracle { check } => match check {
            OracleCheck::E0 { file } => {
                let model = load(file)?;
                match oracle::e0_bruteforce(&model) {
                    Some(e0) => emit(out, &format!("{e0}\n")),
                    None => Err("the model is not elliptic, so the fundamental class \
                                 and its word-length invariant are undefined"
                        .to_string()),
                }
            }
            OracleCheck::Elliptic { file } => {
                let model = load(file)?;
                let verdict = if oracle::is_elliptic(&model) { "elliptic" } else { "not elliptic" };
                emit(out, &format!("{verdict}\n"))
            }
            OracleCheck::Poincare { file } => {
                let model = load(file)?;
                if !oracle::is_elliptic(&model) {
                    return Err("the model is not elliptic; the dimension table \
                                has no duality to check"
                        .to_string());
                }
                let verdict = if oracle::poincare_duality_holds(&model) {
                    "poincare duality holds"
                } else {
                    "poincare duality fails"
                };
                emit(out, &format!("{verdict}\n"))
            }
        },
    }
}

fn load(path: &Path) -> Result<SullivanModel, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    dsl::parse_model(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), String> {
    out.write_all(text.as_bytes()).map_err(|e| e.to_string())
}

fn stage_line(report: &StageReport) -> String {
    if report.degenerate {
        return format!("stage {}: nothing to correct", report.stage);
    }
    format!(
        "stage {}: {} counted step(s) from level {}, {} pin(s)",
        report.stage, report.steps, report.entry_level, report.pins
    )
}

fn print_morphism(
    out: &mut dyn Write,
    morphism: &ModuleMorphism,
    gens: &Gens,
) -> Result<(), String> {
    let mut rows = vec![Monomial::one()];
    rows.extend(gens.sv_ids().map(Monomial::gen));
    for word in rows {
        let value = morphism.value(&word).cloned().unwrap_or_default();
        emit(out, &format!("f({}) = {}\n", word.display(gens), value.display(gens)))?;
    }
    let params = morphism.params();
    if !params.is_empty() {
        let names: Vec<String> = params.iter().map(ToString::to_string).collect();
        emit(out, &format!("free parameters: {}\n", names.join(" ")))?;
    }
    Ok(())
}

fn print_report(
    out: &mut dyn Write,
    report: &InvariantReport,
    model: &SullivanModel,
    trace: bool,
) -> Result<(), String> {
    let mut text = String::new();
    text.push_str(&format!("N = {}\n", report.formal_dimension));
    text.push_str(&format!("e0 = {}\n", report.e0));
    text.push_str(&format!("cat0 = {}\n", report.cat0));
    text.push_str(&format!("R0 = {}\n", report.r0));
    text.push_str(&format!("t = {}\n", report.t));
    text.push_str(&format!("L0 = {}\n", report.big_l0));
    text.push_str(&format!("l0 = {}\n", report.l0));
    text.push_str(&format!("l = {}\n", report.l));
    text.push_str(&format!(
        "elliptic: {} (pure part: {}, lowest word part: {})\n",
        report.elliptic, report.elliptic_pure, report.elliptic_dk
    ));
    text.push_str(&format!(
        "degenerate at first term: {}\n",
        report.degenerate_at_first_term
    ));
    text.push_str(&format!(
        "fundamental class = {}\n",
        report.fundamental_class_rep.display(model.gens())
    ));
    match report.e0_fast {
        Some(v) => text.push_str(&format!("e0 fast path = {v}\n")),
        None => text.push_str("e0 fast path: not applicable\n"),
    }
    for stage in &report.stages {
        text.push_str(&format!("{}\n", stage_line(stage)));
        if trace {
            for (index, step) in stage.trace.iter().enumerate() {
                text.push_str(&format!("  {}\n", step_line(index + 1, step, model.gens())));
            }
        }
    }
    emit(out, &text)
}

fn step_line(index: usize, step: &StepRecord, gens: &Gens) -> String {
    let support: Vec<String> =
        step.corrector_support.iter().map(|w| w.display(gens)).collect();
    let lengths: Vec<String> =
        step.corrector_word_lengths.iter().map(ToString::to_string).collect();
    format!(
        "step {index} at level {}: {}, residual terms {}, pins {}, fresh {}, \
         corrector on [{}] with word lengths [{}]",
        step.level,
        step.outcome.name(),
        step.residual_terms,
        step.pins,
        step.fresh_params,
        support.join(" "),
        lengths.join(" ")
    )
}
