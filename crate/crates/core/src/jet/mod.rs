//! Jet coordinates and the exact polynomial algebra over them.
//!
//! Indices are 0-based throughout the library: base variables `x^0..x^{n-1}`,
//! fibre components `u^0..u^{m-1}`. The text grammar in [`crate::frontend`]
//! is 1-based.

mod expr;
mod multi_index;

use std::fmt;

use thiserror::Error;

pub use expr::{Monomial, Polynomial};
pub use multi_index::{mi_binom, MultiIndex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("multi-index dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("invalid jet space dimensions n={n}, m={m}")]
    InvalidDimensions { n: usize, m: usize },
}

/// The jet coordinate `u^α_I`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVar {
    pub alpha: usize,
    pub index: MultiIndex,
}

impl JetVar {
    pub fn new(alpha: usize, index: MultiIndex) -> Self {
        JetVar { alpha, index }
    }

    pub fn order(&self) -> u32 {
        self.index.order()
    }
}

impl fmt::Debug for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}", self.alpha + 1)?;
        if !self.index.is_empty() {
            write!(f, "_{}", self.index.to_digits())?;
        }
        Ok(())
    }
}

/// A coordinate on the infinite jet space: a base variable or a jet variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X(usize),
    U(JetVar),
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{}", i + 1),
            Var::U(v) => write!(f, "{v}"),
        }
    }
}

/// Base dimension `n` and fibre dimension `m` of the bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JetSpace {
    pub n: usize,
    pub m: usize,
}

impl JetSpace {
    pub fn new(n: usize, m: usize) -> Result<Self, JetError> {
        if n == 0 || m == 0 {
            return Err(JetError::InvalidDimensions { n, m });
        }
        Ok(JetSpace { n, m })
    }
}
