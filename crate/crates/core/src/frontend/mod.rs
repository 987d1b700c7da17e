//! Text and JSON input/output.

use std::fmt;

use thiserror::Error;

use crate::euler::EulerError;
use crate::jet::JetSpace;
use crate::{Expr, Form, Lagrangian, SourceForm};

mod json;
mod parse;
mod print;

pub use json::{form_from_json, form_from_json_value, form_to_json};
pub use parse::{parse_expr, parse_form, parse_form_with_warnings};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: index out of range: {message}")]
    OutOfRange {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: jet order {order} exceeds max order {max}")]
    OrderTooHigh {
        line: usize,
        column: usize,
        order: u32,
        max: u32,
    },
    #[error("mixed bidegree in one form: {first:?} and {second:?}")]
    MixedBidegree {
        first: (usize, usize),
        second: (usize, usize),
    },
    #[error("invalid JSON form: {0}")]
    Json(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Dimensions and limits shared by every parse in a session.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SessionConfig {
    pub n: usize,
    pub m: usize,
    pub max_order: u32,
}

impl SessionConfig {
    pub const MAX_DIM: usize = 3;
    pub const DEFAULT_MAX_ORDER: u32 = 4;

    pub fn new(n: usize, m: usize) -> Result<Self, ParseError> {
        Self::with_max_order(n, m, Self::DEFAULT_MAX_ORDER)
    }

    pub fn with_max_order(n: usize, m: usize, max_order: u32) -> Result<Self, ParseError> {
        for (name, v) in [("n", n), ("m", m)] {
            if v == 0 || v > Self::MAX_DIM {
                return Err(ParseError::Invalid(format!(
                    "{name} = {v} not in 1..={}",
                    Self::MAX_DIM
                )));
            }
        }
        if max_order == 0 {
            return Err(ParseError::Invalid("max order must be positive".into()));
        }
        Ok(SessionConfig { n, m, max_order })
    }

    pub fn space(&self) -> JetSpace {
        JetSpace::new(self.n, self.m).expect("validated dimensions")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Expr,
    Lagrangian,
    SourceForm,
    Form,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputValue {
    Expr(Expr),
    Lagrangian(Lagrangian),
    SourceForm(SourceForm),
    Form(Form),
}

/// A parsed literal together with the base dimension it was read under.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedInput {
    pub n: usize,
    pub value: InputValue,
}

impl ParsedInput {
    pub fn kind(&self) -> InputKind {
        match self.value {
            InputValue::Expr(_) => InputKind::Expr,
            InputValue::Lagrangian(_) => InputKind::Lagrangian,
            InputValue::SourceForm(_) => InputKind::SourceForm,
            InputValue::Form(_) => InputKind::Form,
        }
    }
}

/// Parses `text` as the given kind. Lagrangians are densities; source forms
/// are written as `(n,1)`-forms `Δ_α theta<α> ^ nu`.
pub fn parse_input(
    kind: InputKind,
    text: &str,
    cfg: &SessionConfig,
) -> Result<ParsedInput, ParseError> {
    let value = match kind {
        InputKind::Expr => InputValue::Expr(parse_expr(text, cfg)?),
        InputKind::Lagrangian => InputValue::Lagrangian(Lagrangian::new(parse_expr(text, cfg)?)),
        InputKind::Form => InputValue::Form(parse_form(text, cfg)?),
        InputKind::SourceForm => {
            let w = parse_form(text, cfg)?;
            let delta = SourceForm::from_form(&cfg.space(), &w)
                .map_err(|e: EulerError| ParseError::Invalid(e.to_string()))?;
            InputValue::SourceForm(delta)
        }
    };
    Ok(ParsedInput { n: cfg.n, value })
}

impl fmt::Display for ParsedInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            InputValue::Expr(e) => write!(f, "{e}"),
            InputValue::Lagrangian(l) => write!(f, "{}", l.density),
            InputValue::Form(w) => write!(f, "{w}"),
            InputValue::SourceForm(d) => write!(f, "{}", d.to_form(self.n)),
        }
    }
}
