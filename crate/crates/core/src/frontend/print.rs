//! Canonical text output. Everything printed here parses back to the same value.

use std::fmt;

use num_traits::Signed;

use crate::filtration::GradedClass;
use crate::forms::{Form, WedgeMonomial};
use crate::jet::{Monomial, Polynomial};
use crate::scalar::Scalar;

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    for (k, (v, p)) in m.powers().iter().enumerate() {
        if k > 0 {
            f.write_str("*")?;
        }
        write!(f, "{v}")?;
        if *p > 1 {
            write!(f, "^{p}")?;
        }
    }
    Ok(())
}

/// Writes `|c|·m`, omitting a unit coefficient.
fn write_abs_term<C>(f: &mut fmt::Formatter<'_>, m: &Monomial, c: &C) -> fmt::Result
where
    C: Scalar + fmt::Display + Signed,
{
    let a = c.abs();
    if m.is_one() {
        write!(f, "{a}")
    } else if a.is_one() {
        write_monomial(f, m)
    } else {
        write!(f, "{a}*")?;
        write_monomial(f, m)
    }
}

impl<C> fmt::Display for Polynomial<C>
where
    C: Scalar + fmt::Display + Signed,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            match (k, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write_abs_term(f, m, c)?;
        }
        Ok(())
    }
}

/// The wedge part of a term, `None` for the empty product.
pub(crate) fn wedge_text(mono: &WedgeMonomial, n: usize) -> Option<String> {
    let mut parts: Vec<String> = mono.contact().iter().map(|c| c.to_string()).collect();
    let h = mono.horizontal();
    if !h.is_empty() && h.len() == n {
        parts.push("nu".to_string());
    } else {
        parts.extend(h.iter().map(|i| format!("dx{}", i + 1)));
    }
    if parts.is_empty() {
        None
    } else {
        Some(parts.join(" ^ "))
    }
}

impl<C> fmt::Display for Form<C>
where
    C: Scalar + fmt::Display + Signed,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let n = self.base_dim();
        for (k, (mono, coeff)) in self.terms().enumerate() {
            let Some(wedge) = wedge_text(mono, n) else {
                return write!(f, "{coeff}");
            };
            if coeff.len() == 1 {
                let (m, c) = coeff.terms().next().expect("one term");
                match (k, c.is_negative()) {
                    (0, true) => f.write_str("-")?,
                    (0, false) => {}
                    (_, true) => f.write_str(" - ")?,
                    (_, false) => f.write_str(" + ")?,
                }
                if !(m.is_one() && c.abs().is_one()) {
                    write_abs_term(f, m, c)?;
                    f.write_str(" * ")?;
                }
            } else {
                if k > 0 {
                    f.write_str(" + ")?;
                }
                write!(f, "({coeff}) * ")?;
            }
            f.write_str(&wedge)?;
        }
        Ok(())
    }
}

impl<C> fmt::Display for GradedClass<C>
where
    C: Scalar + fmt::Display + Signed,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self.payload(), self.level())
    }
}
