//! The jet-order filtration `F^l Ω^{n,s}` by total contact weight, its graded
//! pieces, the operator `Ī_l` induced by the interior Euler operator, the
//! off-diagonal block `B_l`, and the decomposition of functional forms into
//! graph pieces.
//!
//! Graded pieces are realized concretely: `Gr^l Ω^{n,s}_0` is identified with
//! the span of basis monomials of weight exactly `l`, so taking the class of
//! a form is the projection onto its weight-`l` monomials.

mod closed_form;

use thiserror::Error;

pub use closed_form::{
    ibar_s2, l1_apply, l1_class, l1_coeffs, l1_matrix, l1_membership, s2_class, s2_coeffs,
    s2_in_image, s2_in_kernel, L1Coeffs, L1Part, Matrix, S2Coeffs,
};

use crate::euler::{interior_euler, EulerError};
use crate::forms::Form;
use crate::jet::Polynomial;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error("expected an (n, s)-form with s >= 1, found bidegree {0:?}")]
    Bidegree((usize, usize)),
    #[error("form has contact weight {found} above level {level}")]
    AboveLevel { level: u32, found: u32 },
    #[error("graded representative has a monomial of weight {found}, expected {level}")]
    WrongWeight { level: u32, found: u32 },
    #[error("form has a monomial without an order-zero contact factor")]
    NotInOmega0,
    #[error("form is not functional (w != I(w))")]
    NotFunctional,
    #[error("decomposition remainder did not drop below level {0}")]
    Inconsistent(u32),
    #[error("invalid closed-form input: {0}")]
    InvalidInput(String),
    #[error("coefficients are not antisymmetric in the first s-1 fibre indices")]
    NotAntisymmetric,
    #[error(transparent)]
    Euler(#[from] EulerError),
}

/// An element of `Gr^l Ω^{n,s}_0`, represented by its weight-`l` monomials.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedClass<C> {
    level: u32,
    payload: Form<C>,
}

impl<C: Scalar> GradedClass<C> {
    pub fn new(level: u32, payload: Form<C>) -> Result<Self, FiltrationError> {
        check_top(&payload)?;
        for (mono, _) in payload.terms() {
            let wgt = mono.contact_weight();
            if wgt != level {
                return Err(FiltrationError::WrongWeight { level, found: wgt });
            }
            if !mono.has_order_zero_contact() {
                return Err(FiltrationError::NotInOmega0);
            }
        }
        Ok(GradedClass { level, payload })
    }

    pub fn zero(n: usize, s: usize, level: u32) -> Self {
        GradedClass {
            level,
            payload: Form::zero(n, (n, s)),
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn payload(&self) -> &Form<C> {
        &self.payload
    }

    pub fn vertical_degree(&self) -> usize {
        self.payload.bidegree().1
    }

    pub fn is_zero(&self) -> bool {
        self.payload.is_zero()
    }

    /// The basis-aligned inclusion `Gr^l → F^l`.
    pub fn lift(&self) -> Form<C> {
        self.payload.clone()
    }

    /// Module action of a function on the class.
    pub fn mul_fn(&self, f: &Polynomial<C>) -> Self {
        GradedClass {
            level: self.level,
            payload: self.payload.mul_fn(f),
        }
    }
}

impl<C: Scalar> std::ops::Add for &GradedClass<C> {
    type Output = GradedClass<C>;
    fn add(self, rhs: &GradedClass<C>) -> GradedClass<C> {
        assert_eq!(self.level, rhs.level, "graded level mismatch");
        GradedClass {
            level: self.level,
            payload: &self.payload + &rhs.payload,
        }
    }
}

impl<C: Scalar> std::ops::Sub for &GradedClass<C> {
    type Output = GradedClass<C>;
    fn sub(self, rhs: &GradedClass<C>) -> GradedClass<C> {
        assert_eq!(self.level, rhs.level, "graded level mismatch");
        GradedClass {
            level: self.level,
            payload: &self.payload - &rhs.payload,
        }
    }
}

fn check_top<C: Scalar>(w: &Form<C>) -> Result<(), FiltrationError> {
    let (r, s) = w.bidegree();
    if w.is_zero() && s >= 1 {
        return Ok(());
    }
    if r != w.base_dim() || s == 0 {
        return Err(FiltrationError::Bidegree(w.bidegree()));
    }
    Ok(())
}

/// The smallest `l` with `w ∈ F^l Ω^{n,s}`; `-1` for the zero form.
pub fn filtration_level<C: Scalar>(w: &Form<C>) -> i64 {
    w.max_weight().map_or(-1, i64::from)
}

/// The class of `w ∈ F^l Ω^{n,s}_0` in `Gr^l Ω^{n,s}_0`.
pub fn gr_top<C: Scalar>(w: &Form<C>, level: u32) -> Result<GradedClass<C>, FiltrationError> {
    check_top(w)?;
    if !w.in_omega0() {
        return Err(FiltrationError::NotInOmega0);
    }
    if let Some(found) = w.max_weight().filter(|&m| m > level) {
        return Err(FiltrationError::AboveLevel { level, found });
    }
    Ok(GradedClass {
        level,
        payload: w.filter(|m| m.contact_weight() == level),
    })
}

/// The weight-`l` part of `I(w)` for `w ∈ F^l Ω^{n,s}`, without requiring
/// membership in `Ω_0`. On `Ω^{n,s}_0` this is [`ibar`] on payloads.
pub fn graded_interior_euler<C: Scalar>(
    w: &Form<C>,
    level: u32,
) -> Result<Form<C>, FiltrationError> {
    check_top(w)?;
    if let Some(found) = w.max_weight().filter(|&m| m > level) {
        return Err(FiltrationError::AboveLevel { level, found });
    }
    let iw = interior_euler(w)?;
    if let Some(found) = iw.max_weight().filter(|&m| m > level) {
        return Err(FiltrationError::AboveLevel { level, found });
    }
    Ok(iw.filter(|m| m.contact_weight() == level))
}

/// `Ī_l(η) = [I(lift η)]` in `Gr^l Ω^{n,s}_0`.
pub fn ibar<C: Scalar>(eta: &GradedClass<C>) -> Result<GradedClass<C>, FiltrationError> {
    if eta.is_zero() {
        return Ok(eta.clone());
    }
    gr_top(&interior_euler(&eta.lift())?, eta.level)
}

/// `B_l(η) = I(lift η) − lift(Ī_l η) ∈ F^{l−1} Ω^{n,s}_0`.
pub fn b_op<C: Scalar>(eta: &GradedClass<C>) -> Result<Form<C>, FiltrationError> {
    if eta.is_zero() {
        return Ok(eta.lift());
    }
    let full = interior_euler(&eta.lift())?;
    let top = gr_top(&full, eta.level)?;
    Ok(&full - &top.lift())
}

/// One graph piece `ω_k = I(lift η_k)` of a functional form.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaPiece<C> {
    pub level: u32,
    pub eta: GradedClass<C>,
    pub omega: Form<C>,
}

/// `ω = ω_l + ω_{l−1} + ⋯ + ω_0` with `η_k` fixed by `Ī_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaDecomposition<C> {
    pub pieces: Vec<GammaPiece<C>>,
}

impl<C: Scalar> GammaDecomposition<C> {
    pub fn reconstruct(&self, n: usize, s: usize) -> Form<C> {
        let mut acc = Form::zero(n, (n, s));
        for p in &self.pieces {
            acc += &p.omega;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| p.eta.is_zero() && p.omega.is_zero())
    }
}

/// Splits a functional form into its graph pieces, top level first.
pub fn gamma_decompose<C: Scalar>(w: &Form<C>) -> Result<GammaDecomposition<C>, FiltrationError> {
    check_top(w)?;
    if interior_euler(w)? != *w {
        return Err(FiltrationError::NotFunctional);
    }
    let top = filtration_level(w);
    let mut pieces = Vec::new();
    let mut remainder = w.clone();
    for k in (0..=top.max(-1)).rev() {
        let k = k as u32;
        let eta = gr_top(&remainder, k)?;
        let omega = interior_euler(&eta.lift())?;
        remainder -= &omega;
        if filtration_level(&remainder) >= i64::from(k) {
            return Err(FiltrationError::Inconsistent(k));
        }
        pieces.push(GammaPiece {
            level: k,
            eta,
            omega,
        });
    }
    if !remainder.is_zero() {
        return Err(FiltrationError::Inconsistent(0));
    }
    Ok(GammaDecomposition { pieces })
}
