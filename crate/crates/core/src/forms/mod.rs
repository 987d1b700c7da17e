//! Bigraded differential forms on the infinite jet space.
//!
//! A [`Form`] is bidegree-homogeneous: a map from canonical
//! [`WedgeMonomial`]s of a fixed bidegree `(r, s)` to polynomial coefficients.
//! The volume form is `ν = dx^1 ∧ ⋯ ∧ dx^n`.

mod monomial;

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

pub use monomial::{ContactFactor, Factor, WedgeMonomial};

use crate::jet::{MultiIndex, Polynomial, Var};
use crate::scalar::Scalar;

/// Equality is equality of the underlying forms: the zero forms of all
/// bidegrees compare equal.
#[derive(Clone, Debug)]
pub struct Form<C> {
    n: usize,
    bidegree: (usize, usize),
    terms: BTreeMap<WedgeMonomial, Polynomial<C>>,
}

impl<C: PartialEq> PartialEq for Form<C> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.terms == other.terms
    }
}

impl<C: Scalar> Form<C> {
    pub fn zero(n: usize, bidegree: (usize, usize)) -> Self {
        Form {
            n,
            bidegree,
            terms: BTreeMap::new(),
        }
    }

    /// A function viewed as a `(0,0)`-form.
    pub fn function(n: usize, f: Polynomial<C>) -> Self {
        let mut out = Self::zero(n, (0, 0));
        out.add_term(WedgeMonomial::unit(), f);
        out
    }

    /// `f·ν`, the top horizontal form with coefficient `f`.
    pub fn top(n: usize, f: Polynomial<C>) -> Self {
        let dx = (0..n).map(Factor::Dx).collect();
        let mut out = Self::zero(n, (n, 0));
        out.add_factors(dx, f);
        out
    }

    /// The volume form `ν`.
    pub fn nu(n: usize) -> Self {
        Self::top(n, Polynomial::one())
    }

    /// `θ^α_I`.
    pub fn theta(n: usize, alpha: usize, index: MultiIndex) -> Self {
        let mut out = Self::zero(n, (0, 1));
        out.add_factors(
            vec![Factor::Theta(ContactFactor::new(alpha, index))],
            Polynomial::one(),
        );
        out
    }

    /// `dx^i`.
    pub fn dx(n: usize, i: usize) -> Self {
        let mut out = Self::zero(n, (1, 0));
        out.add_factors(vec![Factor::Dx(i)], Polynomial::one());
        out
    }

    /// `f · f_1 ∧ ⋯ ∧ f_k` for an ordered list of 1-form factors.
    pub fn from_factors(n: usize, factors: Vec<Factor>, f: Polynomial<C>) -> Self {
        let r = factors
            .iter()
            .filter(|f| matches!(f, Factor::Dx(_)))
            .count();
        let s = factors.len() - r;
        let mut out = Self::zero(n, (r, s));
        out.add_factors(factors, f);
        out
    }

    pub fn base_dim(&self) -> usize {
        self.n
    }

    pub fn bidegree(&self) -> (usize, usize) {
        self.bidegree
    }

    pub fn degree(&self) -> usize {
        self.bidegree.0 + self.bidegree.1
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

    pub fn terms(&self) -> impl Iterator<Item = (&WedgeMonomial, &Polynomial<C>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &WedgeMonomial) -> Polynomial<C> {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    /// Adds `f · mono` for an already canonical monomial.
    pub fn add_term(&mut self, mono: WedgeMonomial, f: Polynomial<C>) {
        debug_assert_eq!(mono.bidegree(), self.bidegree, "bidegree mismatch");
        if f.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(f);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &f;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Adds `f · f_1 ∧ ⋯ ∧ f_k`, canonicalizing the product.
    pub fn add_factors(&mut self, factors: Vec<Factor>, f: Polynomial<C>) {
        if f.is_zero() {
            return;
        }
        if let Some((mono, odd)) = WedgeMonomial::from_factors(factors) {
            if mono.horizontal().last().is_some_and(|&i| i >= self.n) {
                panic!("horizontal index out of range for n={}", self.n);
            }
            self.add_term(mono, if odd { -f } else { f });
        }
    }

    /// Multiplies every coefficient by the function `f`.
    pub fn mul_fn(&self, f: &Polynomial<C>) -> Self {
        let mut out = Self::zero(self.n, self.bidegree);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * f);
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.n, self.bidegree);
        for (m, p) in &self.terms {
            out.add_term(m.clone(), p.scale(c));
        }
        out
    }

    /// Applies `f` to every coefficient; monomials are kept as they are.
    pub fn map_coeffs(&self, f: impl Fn(&Polynomial<C>) -> Polynomial<C>) -> Self {
        let mut out = Self::zero(self.n, self.bidegree);
        for (m, p) in &self.terms {
            out.add_term(m.clone(), f(p));
        }
        out
    }

    /// Keeps only the monomials satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&WedgeMonomial) -> bool) -> Self {
        Form {
            n: self.n,
            bidegree: self.bidegree,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The exterior product; graded anticommutative.
    pub fn wedge(&self, other: &Form<C>) -> Form<C> {
        assert_eq!(self.n, other.n, "base dimension mismatch");
        let (r, s) = (
            self.bidegree.0 + other.bidegree.0,
            self.bidegree.1 + other.bidegree.1,
        );
        let mut out = Form::zero(self.n, (r, s));
        if r > self.n {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut factors = ma.factors();
                factors.extend(mb.factors());
                out.add_factors(factors, ca * cb);
            }
        }
        out
    }

    /// Distinct contact factors appearing in any monomial.
    pub fn contact_factors(&self) -> BTreeSet<ContactFactor> {
        self.terms
            .keys()
            .flat_map(|m| m.contact().iter().cloned())
            .collect()
    }

    /// The total derivative `D_j` acting on forms as a degree-0 derivation:
    /// `D_j` on coefficients, `D_j θ^α_I = θ^α_{Ij}`, `D_j dx^i = 0`.
    pub fn lie_total(&self, j: usize) -> Self {
        let mut out = Self::zero(self.n, self.bidegree);
        for (mono, f) in &self.terms {
            out.add_term(mono.clone(), f.total_derivative(j));
            for k in 0..mono.contact().len() {
                let mut factors = mono.factors();
                if let Factor::Theta(c) = &mut factors[k] {
                    c.index = c.index.with_added(j);
                }
                out.add_factors(factors, f.clone());
            }
        }
        out
    }

    /// `D_I ω`, or `(-D)_I ω` when `signed`.
    pub fn lie_total_mi(&self, index: &MultiIndex, signed: bool) -> Self {
        let mut out = self.clone();
        for j in index.directions() {
            if out.is_zero() {
                break;
            }
            out = out.lie_total(j);
        }
        if signed && index.order() % 2 == 1 {
            -out
        } else {
            out
        }
    }

    /// The horizontal differential, `d_H ω = Σ_i dx^i ∧ D_i ω`.
    pub fn d_h(&self) -> Self {
        let (r, s) = self.bidegree;
        let mut out = Self::zero(self.n, (r + 1, s));
        if r >= self.n {
            return out;
        }
        for i in 0..self.n {
            for (mono, f) in &self.lie_total(i).terms {
                let mut factors = vec![Factor::Dx(i)];
                factors.extend(mono.factors());
                out.add_factors(factors, f.clone());
            }
        }
        out
    }

    /// The vertical differential: `d_V f = Σ ∂f/∂u^α_I θ^α_I`, and
    /// `d_V θ = d_V dx = 0`.
    pub fn d_v(&self) -> Self {
        let (r, s) = self.bidegree;
        let mut out = Self::zero(self.n, (r, s + 1));
        for (mono, f) in &self.terms {
            for jv in f.jet_vars() {
                let df = f.partial(&Var::U(jv.clone()));
                let mut factors = vec![Factor::Theta(ContactFactor::new(jv.alpha, jv.index))];
                factors.extend(mono.factors());
                out.add_factors(factors, df);
            }
        }
        out
    }

    /// Interior product with `∂/∂u^α_I`.
    pub fn contract(&self, alpha: usize, index: &MultiIndex) -> Self {
        let (r, s) = self.bidegree;
        if s == 0 {
            return Self::zero(self.n, (r, 0));
        }
        let target = ContactFactor::new(alpha, index.clone());
        let mut out = Self::zero(self.n, (r, s - 1));
        for (mono, f) in &self.terms {
            if let Some(k) = mono.contact_position(&target) {
                let c = if k % 2 == 0 { f.clone() } else { -f };
                out.add_term(mono.without_contact(k), c);
            }
        }
        out
    }

    /// Interior product with the base vector field `∂_j`.
    pub fn contract_horizontal(&self, j: usize) -> Self {
        let (r, s) = self.bidegree;
        if r == 0 {
            return Self::zero(self.n, (0, s));
        }
        let mut out = Self::zero(self.n, (r - 1, s));
        for (mono, f) in &self.terms {
            if let Ok(k) = mono.horizontal().binary_search(&j) {
                let c = if (s + k) % 2 == 0 { f.clone() } else { -f };
                out.add_term(mono.without_horizontal(k), c);
            }
        }
        out
    }

    /// Partitions the monomials by contact weight. The parts sum back to
    /// `self`; the zero form gives an empty map.
    pub fn contact_weight_split(&self) -> BTreeMap<u32, Form<C>> {
        let mut out: BTreeMap<u32, Form<C>> = BTreeMap::new();
        for (mono, f) in &self.terms {
            out.entry(mono.contact_weight())
                .or_insert_with(|| Self::zero(self.n, self.bidegree))
                .add_term(mono.clone(), f.clone());
        }
        out
    }

    /// The maximum contact weight, `None` for the zero form.
    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(WedgeMonomial::contact_weight).max()
    }

    /// Highest jet order among the coefficients and contact factors.
    pub fn jet_order(&self) -> Option<u32> {
        self.terms
            .iter()
            .flat_map(|(m, f)| {
                m.contact()
                    .iter()
                    .map(ContactFactor::order)
                    .chain(f.jet_order())
            })
            .max()
    }

    /// Whether every monomial carries an order-zero contact factor.
    pub fn in_omega0(&self) -> bool {
        self.terms.keys().all(WedgeMonomial::has_order_zero_contact)
    }

    fn check_compatible(&self, other: &Form<C>) {
        assert_eq!(self.n, other.n, "base dimension mismatch");
        if !self.is_zero() && !other.is_zero() {
            assert_eq!(self.bidegree, other.bidegree, "bidegree mismatch");
        }
    }
}

impl<C: Scalar> AddAssign<&Form<C>> for Form<C> {
    fn add_assign(&mut self, rhs: &Form<C>) {
        self.check_compatible(rhs);
        if self.is_zero() {
            self.bidegree = rhs.bidegree;
        }
        for (m, f) in &rhs.terms {
            self.add_term(m.clone(), f.clone());
        }
    }
}

impl<C: Scalar> SubAssign<&Form<C>> for Form<C> {
    fn sub_assign(&mut self, rhs: &Form<C>) {
        self.check_compatible(rhs);
        if self.is_zero() {
            self.bidegree = rhs.bidegree;
        }
        for (m, f) in &rhs.terms {
            self.add_term(m.clone(), -f);
        }
    }
}

impl<C: Scalar> Neg for Form<C> {
    type Output = Form<C>;
    fn neg(self) -> Form<C> {
        Form {
            n: self.n,
            bidegree: self.bidegree,
            terms: self.terms.into_iter().map(|(m, f)| (m, -f)).collect(),
        }
    }
}

impl<C: Scalar> Neg for &Form<C> {
    type Output = Form<C>;
    fn neg(self) -> Form<C> {
        -self.clone()
    }
}

impl<C: Scalar> Add for &Form<C> {
    type Output = Form<C>;
    fn add(self, rhs: &Form<C>) -> Form<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<C: Scalar> Sub for &Form<C> {
    type Output = Form<C>;
    fn sub(self, rhs: &Form<C>) -> Form<C> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<C: Scalar> Add for Form<C> {
    type Output = Form<C>;
    fn add(mut self, rhs: Form<C>) -> Form<C> {
        self += &rhs;
        self
    }
}

impl<C: Scalar> Sub for Form<C> {
    type Output = Form<C>;
    fn sub(mut self, rhs: Form<C>) -> Form<C> {
        self -= &rhs;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;
    type F = Form<Q>;
    type P = Polynomial<Q>;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    fn th(alpha: usize, e: &[u32]) -> F {
        F::theta(e.len(), alpha, mi(e))
    }

    fn u(alpha: usize, e: &[u32]) -> P {
        P::u(alpha, mi(e))
    }

    #[test]
    fn wedge_examples() {
        assert!(th(0, &[0]).wedge(&th(0, &[0])).is_zero());
        let a = th(0, &[1]).wedge(&th(0, &[0]));
        let b = th(0, &[0]).wedge(&th(0, &[1]));
        assert_eq!(a, -b);
        let w = th(0, &[0]).mul_fn(&u(0, &[0])).wedge(&F::nu(1));
        assert_eq!(w.bidegree(), (1, 1));
        assert_eq!(
            w,
            F::from_factors(
                1,
                vec![
                    Factor::Theta(ContactFactor::new(0, mi(&[0]))),
                    Factor::Dx(0),
                ],
                u(0, &[0])
            )
        );
    }

    #[test]
    fn wedge_horizontal_overflow() {
        let w = F::nu(1).wedge(&F::dx(1, 0));
        assert!(w.is_zero());
        assert_eq!(w.bidegree(), (2, 0));
    }

    #[test]
    fn d_h_examples() {
        let f = F::function(1, u(0, &[0]));
        assert_eq!(f.d_h(), F::dx(1, 0).mul_fn(&u(0, &[1])));
        let g = F::function(1, &u(0, &[0]) * &u(0, &[1]));
        assert!(g.d_h().d_h().is_zero());
        assert_eq!(th(0, &[0]).d_h(), F::dx(1, 0).wedge(&th(0, &[1])));
    }

    #[test]
    fn d_v_examples() {
        assert_eq!(F::function(1, u(0, &[0])).d_v(), th(0, &[0]));
        let lam = F::top(1, u(0, &[1]).pow(2).scale(&Q::new(1, 2)));
        let expected = th(0, &[1]).wedge(&F::nu(1)).mul_fn(&u(0, &[1]));
        assert_eq!(lam.d_v(), expected);
        let h = F::function(1, &P::x(0) * &u(0, &[0]));
        assert!(h.d_v().d_v().is_zero());
    }

    #[test]
    fn contract_examples() {
        let tn = th(0, &[0]).wedge(&F::nu(1));
        assert_eq!(tn.contract(0, &mi(&[0])), F::nu(1));
        let w = th(0, &[0]).wedge(&th(0, &[1])).wedge(&F::nu(1));
        assert_eq!(w.contract(0, &mi(&[1])), -tn.clone());
        assert!(tn.contract(1, &mi(&[0])).is_zero());
        let lam = F::nu(1);
        assert!(lam.contract(0, &mi(&[0])).is_zero());
    }

    #[test]
    fn lie_total_examples() {
        let a = F::top(1, u(0, &[0]));
        assert_eq!(a.lie_total(0), F::top(1, u(0, &[1])));
        let b = th(0, &[0]).wedge(&F::nu(1));
        assert_eq!(b.lie_total(0), th(0, &[1]).wedge(&F::nu(1)));
    }

    #[test]
    fn weight_split_examples() {
        let nu = F::nu(1);
        let w0 = th(0, &[0]).wedge(&nu);
        let split = w0.contact_weight_split();
        assert_eq!(split.len(), 1);
        assert_eq!(split[&0], w0);

        let t1 = th(0, &[0]).wedge(&th(0, &[1])).wedge(&nu);
        let t2 = th(0, &[0])
            .wedge(&th(0, &[2]))
            .wedge(&nu)
            .mul_fn(&u(0, &[0]));
        let w = &t1 + &t2;
        let split = w.contact_weight_split();
        assert_eq!(split[&1], t1);
        assert_eq!(split[&2], t2);
        assert!(F::zero(1, (1, 2)).contact_weight_split().is_empty());
    }

    #[test]
    fn horizontal_contraction_of_volume() {
        let nu = F::nu(2);
        assert_eq!(nu.contract_horizontal(0), F::dx(2, 1));
        assert_eq!(nu.contract_horizontal(1), -F::dx(2, 0));
    }
}
