use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use super::{JetVar, MultiIndex, Var};
use crate::scalar::Scalar;

/// A power product of jet-space coordinates, sorted by variable with
/// positive exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut acc: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, k) in powers {
            *acc.entry(v).or_default() += k;
        }
        Monomial(acc.into_iter().filter(|(_, k)| *k > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, k)| k).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((va, ka)), Some((vb, kb))) => match va.cmp(vb) {
                    std::cmp::Ordering::Less => {
                        out.push((va.clone(), *ka));
                        a.next();
                    }
                    std::cmp::Ordering::Greater => {
                        out.push((vb.clone(), *kb));
                        b.next();
                    }
                    std::cmp::Ordering::Equal => {
                        out.push((va.clone(), ka + kb));
                        a.next();
                        b.next();
                    }
                },
                (Some(x), None) => {
                    out.push((*x).clone());
                    a.next();
                }
                (None, Some(y)) => {
                    out.push((*y).clone());
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial(out)
    }

    /// `∂/∂v` of the monomial as `(multiplicity, monomial)`, or `None` when
    /// `v` does not occur.
    pub fn partial(&self, v: &Var) -> Option<(u32, Monomial)> {
        let pos = self.0.iter().position(|(w, _)| w == v)?;
        let k = self.0[pos].1;
        let mut out = self.0.clone();
        if k == 1 {
            out.remove(pos);
        } else {
            out[pos].1 -= 1;
        }
        Some((k, Monomial(out)))
    }

    pub fn jet_vars(&self) -> impl Iterator<Item = &JetVar> {
        self.0.iter().filter_map(|(v, _)| match v {
            Var::U(jv) => Some(jv),
            Var::X(_) => None,
        })
    }
}

/// An exact polynomial in the base and jet coordinates.
///
/// The representation is canonical: no zero coefficients are stored, so two
/// polynomials are equal iff their term maps coincide.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Default for Polynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Scalar> Polynomial<C> {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(k: i64) -> Self {
        Self::constant(C::from_int(k))
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn var(v: Var) -> Self {
        Self::term(C::one(), Monomial::var(v))
    }

    /// The base coordinate `x^i`.
    pub fn x(i: usize) -> Self {
        Self::var(Var::X(i))
    }

    /// The jet coordinate `u^α_I`.
    pub fn u(alpha: usize, index: MultiIndex) -> Self {
        Self::var(Var::U(JetVar::new(alpha, index)))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    /// The value if the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Every jet variable occurring in the polynomial.
    pub fn jet_vars(&self) -> BTreeSet<JetVar> {
        self.terms
            .keys()
            .flat_map(|m| m.jet_vars().cloned())
            .collect()
    }

    /// Highest `|I|` over the jet variables present; `None` if there are none.
    pub fn jet_order(&self) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.jet_vars().map(JetVar::order))
            .max()
    }

    /// Partial derivative with respect to a single coordinate.
    pub fn partial(&self, v: &Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some((k, dm)) = m.partial(v) {
                out.add_term(dm, c.clone() * C::from_int(k as i64));
            }
        }
        out
    }

    /// `∂f/∂u^α_I`.
    pub fn partial_jet(&self, alpha: usize, index: &MultiIndex) -> Self {
        self.partial(&Var::U(JetVar::new(alpha, index.clone())))
    }

    /// The total derivative `D_j f = ∂_j f + Σ u^α_{Ij} ∂f/∂u^α_I`.
    pub fn total_derivative(&self, j: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (v, k) in m.powers() {
                let (_, rest) = m.partial(v).expect("factor present");
                let scaled = c.clone() * C::from_int(*k as i64);
                match v {
                    Var::X(i) if *i == j => out.add_term(rest, scaled),
                    Var::X(_) => {}
                    Var::U(jv) => {
                        let next = Var::U(JetVar::new(jv.alpha, jv.index.with_added(j)));
                        out.add_term(rest.mul(&Monomial::var(next)), scaled);
                    }
                }
            }
        }
        out
    }

    /// `D_I f`, or `(-D)_I f = (-1)^{|I|} D_I f` when `signed`.
    pub fn total_derivative_mi(&self, index: &MultiIndex, signed: bool) -> Self {
        let mut out = self.clone();
        for j in index.directions() {
            if out.is_zero() {
                break;
            }
            out = out.total_derivative(j);
        }
        if signed && index.order() % 2 == 1 {
            -out
        } else {
            out
        }
    }

    /// Applies `f` to every coefficient, dropping those that become zero.
    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

impl<C: Scalar> AddAssign<&Polynomial<C>> for Polynomial<C> {
    fn add_assign(&mut self, rhs: &Polynomial<C>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<C: Scalar> SubAssign<&Polynomial<C>> for Polynomial<C> {
    fn sub_assign(&mut self, rhs: &Polynomial<C>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl<C: Scalar> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Self::Output {
        Polynomial {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<C: Scalar> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Self::Output {
        -self.clone()
    }
}

impl<C: Scalar> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: &Polynomial<C>) -> Self::Output {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign:ident) => {
        impl<C: Scalar> $tr for &Polynomial<C> {
            type Output = Polynomial<C>;
            fn $method(self, rhs: &Polynomial<C>) -> Self::Output {
                let mut out = self.clone();
                out.$assign(rhs);
                out
            }
        }
        impl<C: Scalar> $tr for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $method(mut self, rhs: Polynomial<C>) -> Self::Output {
                self.$assign(&rhs);
                self
            }
        }
        impl<C: Scalar> $tr<&Polynomial<C>> for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $method(mut self, rhs: &Polynomial<C>) -> Self::Output {
                self.$assign(rhs);
                self
            }
        }
    };
}

forward_binop!(Add, add, add_assign);
forward_binop!(Sub, sub, sub_assign);

impl<C: Scalar> Mul for Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: Polynomial<C>) -> Self::Output {
        &self * &rhs
    }
}

impl<C: Scalar> Mul<&Polynomial<C>> for Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: &Polynomial<C>) -> Self::Output {
        &self * rhs
    }
}
