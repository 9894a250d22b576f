use std::fs;

use collatz_fp::collatz::stopping_time;
use collatz_fp::framework::{ConditionKind, ConditionParams};
use collatz_fp::verifier::{
    condition_coverage, cross_check_simplified, orbit_decay_sweep, search_lambda, verify_lemmas,
    verify_pseudocontraction_with, verify_weight_bound, LhsRoute, PseudoOptions, SearchGrid,
};
use serde::Serialize;

use crate::args::{Command, Format, Mode, OutputArgs};
use crate::render::Render;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] collatz_fp::Error),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot render report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot render report: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 3 for arithmetic overflow, 1 for a cap exceeded during a sweep, 2 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_overflow() => 3,
            CliError::Core(collatz_fp::Error::CapExceeded { .. }) => 1,
            _ => 2,
        }
    }
}

/// Whether a successful run found anything that should fail the exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Clean,
    Findings,
}

fn outcome(clean: bool) -> Outcome {
    if clean {
        Outcome::Clean
    } else {
        Outcome::Findings
    }
}

fn emit<R: Render + Serialize>(report: &R, out: &OutputArgs) -> Result<(), CliError> {
    let body = match out.format {
        Format::Text => report.text(),
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Csv => report.csv()?,
    };
    match &out.output {
        Some(path) => fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn timing(out: &OutputArgs, elapsed: &mut Option<u64>) {
    if !out.timing {
        *elapsed = None;
    }
}

pub fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Verify(a) => {
            let range = a.range.spec()?;
            let mut report = match a.mode {
                Mode::Direct => verify_pseudocontraction_with(
                    &range,
                    PseudoOptions {
                        route: LhsRoute::Direct,
                        sharpened: false,
                    },
                )?,
                Mode::Simplified => verify_pseudocontraction_with(
                    &range,
                    PseudoOptions {
                        route: LhsRoute::Simplified,
                        sharpened: false,
                    },
                )?,
                Mode::Bounds => verify_pseudocontraction_with(&range, PseudoOptions::default())?,
                Mode::Cross => cross_check_simplified(&range)?,
                Mode::MBound => verify_weight_bound(&range, a.m)?,
            };
            timing(&a.output, &mut report.elapsed_ms);
            report.violations.truncate(a.output.max_violations);
            emit(&report, &a.output)?;
            Ok(outcome(report.is_clean()))
        }
        Command::Lemmas(a) => {
            let mut report = verify_lemmas(&a.range.spec()?, &a.thetas, &a.lambdas)?;
            timing(&a.output, &mut report.elapsed_ms);
            report.violations.truncate(a.output.max_violations);
            emit(&report, &a.output)?;
            Ok(outcome(report.is_clean()))
        }
        Command::Conditions(a) => {
            let c = &a.condition;
            let kind = ConditionKind::new(c.theorem, c.condition)?;
            let params = ConditionParams::new(c.lambda.clone(), a.a, c.b, c.m)?.with_m_on_symmetrized(c.m_symmetrized);
            let mut report = condition_coverage(&a.range.spec()?, &params, kind, c.corrected_c4)?;
            timing(&a.output, &mut report.elapsed_ms);
            emit(&report, &a.output)?;
            Ok(Outcome::Clean)
        }
        Command::Orbit(a) => {
            let record = stopping_time(a.map, a.seed, a.cap, a.path)?;
            emit(&record, &a.output)?;
            Ok(outcome(record.reached_one()))
        }
        Command::Decay(a) => {
            let params = ConditionParams::new(a.lambda, a.a, 2.into(), 2.into())?;
            let mut report = orbit_decay_sweep(a.min, a.max, &params, a.cap)?;
            timing(&a.output, &mut report.elapsed_ms);
            report.violations.truncate(a.output.max_violations);
            emit(&report, &a.output)?;
            Ok(outcome(report.is_clean()))
        }
        Command::SearchLambda(a) => {
            let grid = SearchGrid {
                q: a.q,
                a_grid: a.a,
                condition: ConditionKind::new(a.theorem, a.condition)?,
                corrected_c4: a.corrected_c4,
                b: a.b,
                m: a.m,
                m_on_symmetrized: a.m_symmetrized,
                budget: a.budget,
            };
            let mut result = search_lambda(&a.range.spec()?, &grid)?;
            timing(&a.output, &mut result.elapsed_ms);
            emit(&result, &a.output)?;
            Ok(Outcome::Clean)
        }
    }
}
