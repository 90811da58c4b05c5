//! Shared output helpers and error mapping.

use loopfo_core::approximants::ApproxError;
use loopfo_core::game::GameError;
use loopfo_core::structures::{Assignment, EvalError, ModelError, Structure};
use loopfo_core::syntax::{parse_formula_inferred, Formula, Vocabulary};
use loopfo_core::transform::TransformError;
use loopfo_core::translate::TranslateError;

use crate::{CliError, FormulaArg, EXIT_BUDGET, EXIT_INPUT, EXIT_PROVER};

pub fn read_formula_text(arg: &FormulaArg) -> Result<String, CliError> {
    match (&arg.formula, &arg.formula_file) {
        (Some(text), None) => Ok(text.clone()),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map(|t| t.trim().to_string())
            .map_err(|e| CliError::input(format!("reading {path}: {e}"))),
        _ => Err(CliError::input(
            "provide exactly one of --formula or --formula-file",
        )),
    }
}

/// Parses the formula against a model's vocabulary, or with inference.
pub fn parse_with(arg: &FormulaArg, vocab: Option<&Vocabulary>) -> Result<Formula, CliError> {
    let text = read_formula_text(arg)?;
    match vocab {
        Some(v) => loopfo_core::syntax::parse_formula(&text, v).map_err(CliError::input),
        None => Ok(parse_formula_inferred(&text).map_err(CliError::input)?.0),
    }
}

pub fn load_model(path: &str) -> Result<Structure, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("reading {path}: {e}")))?;
    loopfo_core::structures::parse_structure(&text).map_err(CliError::input)
}

pub fn parse_assign(text: &str) -> Result<Assignment, CliError> {
    Assignment::parse(text).map_err(CliError::input)
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> CliError {
        CliError::input(e)
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> CliError {
        CliError::input(e)
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> CliError {
        CliError::input(e)
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> CliError {
        let code = match e {
            TransformError::Budget { .. } => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ApproxError> for CliError {
    fn from(e: ApproxError) -> CliError {
        let code = match &e {
            ApproxError::Budget { .. } => EXIT_BUDGET,
            ApproxError::Prover(_) => EXIT_PROVER,
            ApproxError::Transform(TransformError::Budget { .. }) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<TranslateError> for CliError {
    fn from(e: TranslateError) -> CliError {
        let code = match e {
            TranslateError::BitCapExceeded { .. } | TranslateError::DomainCapExceeded { .. } => {
                EXIT_BUDGET
            }
            _ => EXIT_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}
