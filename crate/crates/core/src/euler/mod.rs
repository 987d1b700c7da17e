//! Variational operators: Euler and higher Euler derivatives, the
//! first-variation boundary term, the interior Euler operator, `δ_V` and the
//! Helmholtz residuals of a source form.
//!
//! Every sum over multi-indices runs over the finitely many unordered
//! multi-indices that actually occur in the operand.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::filtration::{FiltrationError, GradedClass};
use crate::forms::{ContactFactor, Factor, Form, WedgeMonomial};
use crate::jet::{mi_binom, JetSpace, MultiIndex, Polynomial};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EulerError {
    #[error("the interior Euler operator needs vertical degree s >= 1")]
    NoVerticalDegree,
    #[error("expected bidegree ({expected_r}, s) with s >= 1, found {found:?}")]
    Bidegree {
        expected_r: usize,
        found: (usize, usize),
    },
    #[error("form is not functional (w != I(w))")]
    NotFunctional,
    #[error("form is not a source form: {0}")]
    NotSourceForm(String),
    #[error("graded component {k} requested above the jet order bound {bound}")]
    ComponentOutOfRange { k: u32, bound: u32 },
    #[error(transparent)]
    Filtration(#[from] Box<FiltrationError>),
}

/// A Lagrangian `λ = L·ν`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lagrangian<C> {
    pub density: Polynomial<C>,
}

impl<C: Scalar> Lagrangian<C> {
    pub fn new(density: Polynomial<C>) -> Self {
        Lagrangian { density }
    }

    pub fn to_form(&self, n: usize) -> Form<C> {
        Form::top(n, self.density.clone())
    }
}

/// A source form `Δ = Δ_α θ^α ∧ ν`, one component per fibre index.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceForm<C> {
    pub components: Vec<Polynomial<C>>,
}

impl<C: Scalar> SourceForm<C> {
    pub fn new(components: Vec<Polynomial<C>>) -> Self {
        SourceForm { components }
    }

    pub fn zero(m: usize) -> Self {
        SourceForm {
            components: vec![Polynomial::zero(); m],
        }
    }

    pub fn to_form(&self, n: usize) -> Form<C> {
        let mut out = Form::zero(n, (n, 1));
        for (alpha, d) in self.components.iter().enumerate() {
            let mut factors = vec![Factor::Theta(ContactFactor::new(
                alpha,
                MultiIndex::zero(n),
            ))];
            factors.extend((0..n).map(Factor::Dx));
            out.add_factors(factors, d.clone());
        }
        out
    }

    /// Reads the components back off an `(n,1)`-form of order-zero contact
    /// factors.
    pub fn from_form(space: &JetSpace, w: &Form<C>) -> Result<Self, EulerError> {
        let n = space.n;
        if !w.is_zero() && w.bidegree() != (n, 1) {
            return Err(EulerError::Bidegree {
                expected_r: n,
                found: w.bidegree(),
            });
        }
        let mut out = Self::zero(space.m);
        for (mono, f) in w.terms() {
            let c = &mono.contact()[0];
            if !c.index.is_empty() || c.alpha >= space.m {
                return Err(EulerError::NotSourceForm(format!("unexpected factor {c}")));
            }
            out.components[c.alpha] = f.clone();
        }
        Ok(out)
    }

    /// Highest jet order over the components; 0 when no jet variable occurs.
    pub fn order_bound(&self) -> u32 {
        self.components
            .iter()
            .filter_map(Polynomial::jet_order)
            .max()
            .unwrap_or(0)
    }
}

fn present_indices<C: Scalar>(f: &Polynomial<C>, alpha: usize) -> BTreeSet<MultiIndex> {
    f.jet_vars()
        .into_iter()
        .filter(|v| v.alpha == alpha)
        .map(|v| v.index)
        .collect()
}

/// The Euler derivative `E_α(λ) = Σ_I (−D)_I ∂λ/∂u^α_I` for every `α`.
pub fn euler<C: Scalar>(space: &JetSpace, lam: &Lagrangian<C>) -> SourceForm<C> {
    let components = (0..space.m)
        .map(|alpha| {
            let mut acc = Polynomial::zero();
            for index in present_indices(&lam.density, alpha) {
                acc += &lam
                    .density
                    .partial_jet(alpha, &index)
                    .total_derivative_mi(&index, true);
            }
            acc
        })
        .collect();
    SourceForm { components }
}

/// The higher Euler derivative
/// `E^I_α(F) = Σ_{J ⊇ I} binom(J, I) (−D)_{J∖I} ∂F/∂u^α_J`, with the
/// componentwise multi-index binomial.
pub fn higher_euler<C: Scalar>(
    f: &Polynomial<C>,
    alpha: usize,
    index: &MultiIndex,
) -> Polynomial<C> {
    let mut acc = Polynomial::zero();
    for big in present_indices(f, alpha) {
        let Some(rest) = big.checked_sub(index) else {
            continue;
        };
        let b = mi_binom(&big, index).expect("same dimension");
        let term = f.partial_jet(alpha, &big).total_derivative_mi(&rest, true);
        acc += &term.scale(&C::from_int(b as i64));
    }
    acc
}

/// A boundary term `η ∈ Ω^{n−1,1}` with `d_V λ = E_α(λ) θ^α ∧ ν + d_H η`.
///
/// Built from the higher Euler derivatives as
/// `η = −Σ_j Σ_I (I_j+1)/(|I|+1) · D_I(E^{Ij}_α(λ) θ^α) ∧ (∂_j ⌟ ν)`.
/// The weight splits each divergence `D_K` evenly over the directions of
/// `K`, so every unordered `K` is counted exactly once.
pub fn variation_boundary<C: Scalar>(space: &JetSpace, lam: &Lagrangian<C>) -> Form<C> {
    let n = space.n;
    let nu = Form::nu(n);
    let mut eta = Form::zero(n, (n - 1, 1));
    for alpha in 0..space.m {
        let ks: BTreeSet<MultiIndex> = present_indices(&lam.density, alpha)
            .iter()
            .flat_map(MultiIndex::sub_indices)
            .filter(|k| !k.is_empty())
            .collect();
        for k in ks {
            let e = higher_euler(&lam.density, alpha, &k);
            if e.is_zero() {
                continue;
            }
            let base = Form::theta(n, alpha, MultiIndex::zero(n)).mul_fn(&e);
            for j in 0..n {
                let kj = k.get(j);
                if kj == 0 {
                    continue;
                }
                let i = k.checked_sub(&MultiIndex::unit(n, j)).expect("k_j > 0");
                let weight = C::ratio(-(kj as i64), k.order() as i64);
                let q = base.lie_total_mi(&i, false).scale(&weight);
                eta += &q.wedge(&nu.contract_horizontal(j));
            }
        }
    }
    eta
}

/// The interior Euler operator
/// `I(ω) = (1/s) θ^α ∧ Σ_I (−D)_I (∂/∂u^α_I ⌟ ω)` on an `(r,s)`-form, `s ≥ 1`.
pub fn interior_euler<C: Scalar>(w: &Form<C>) -> Result<Form<C>, EulerError> {
    let (_, s) = w.bidegree();
    if s == 0 {
        return Err(EulerError::NoVerticalDegree);
    }
    let n = w.base_dim();
    let mut acc = Form::zero(n, w.bidegree());
    for cf in w.contact_factors() {
        let inner = w
            .contract(cf.alpha, &cf.index)
            .lie_total_mi(&cf.index, true);
        acc += &Form::theta(n, cf.alpha, MultiIndex::zero(n)).wedge(&inner);
    }
    Ok(acc.scale(&C::ratio(1, s as i64)))
}

/// Whether `w` is an `(n,s)`-form with `s >= 1` fixed by `I`.
pub fn is_functional<C: Scalar>(w: &Form<C>) -> bool {
    let (r, s) = w.bidegree();
    if w.is_zero() {
        return true;
    }
    r == w.base_dim() && s >= 1 && interior_euler(w).is_ok_and(|iw| iw == *w)
}

/// `δ_V = I ∘ d_V` on functional forms.
pub fn delta_v<C: Scalar>(w: &Form<C>) -> Result<Form<C>, EulerError> {
    let (r, s) = w.bidegree();
    if r != w.base_dim() || s == 0 {
        return Err(EulerError::Bidegree {
            expected_r: w.base_dim(),
            found: w.bidegree(),
        });
    }
    if interior_euler(w)? != *w {
        return Err(EulerError::NotFunctional);
    }
    delta_v_unchecked(w)
}

/// `I(d_V w)` without the functional-form check.
pub fn delta_v_unchecked<C: Scalar>(w: &Form<C>) -> Result<Form<C>, EulerError> {
    interior_euler(&w.d_v())
}

/// Helmholtz residuals `∂^I_β Δ_α − (−1)^{|I|} E^I_α(Δ_β)` for every ordered
/// pair `(α, β)` and every `|I|` up to the jet order bound of `Δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct HelmholtzResiduals<C> {
    pub order_bound: u32,
    pub entries: BTreeMap<(usize, usize, MultiIndex), Polynomial<C>>,
}

impl<C: Scalar> HelmholtzResiduals<C> {
    pub fn is_variational(&self) -> bool {
        self.entries.values().all(Polynomial::is_zero)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&(usize, usize, MultiIndex), &Polynomial<C>)> {
        self.entries.iter().filter(|(_, r)| !r.is_zero())
    }

    pub fn get(&self, alpha: usize, beta: usize, index: &MultiIndex) -> Polynomial<C> {
        self.entries
            .get(&(alpha, beta, index.clone()))
            .cloned()
            .unwrap_or_default()
    }
}

pub fn helmholtz_residuals<C: Scalar>(
    space: &JetSpace,
    delta: &SourceForm<C>,
) -> HelmholtzResiduals<C> {
    let bound = delta.order_bound();
    let mut entries = BTreeMap::new();
    for index in MultiIndex::up_to_order(space.n, bound) {
        let sign = C::from_int(if index.order() % 2 == 0 { 1 } else { -1 });
        for alpha in 0..space.m {
            for beta in 0..space.m {
                let lhs = delta.components[alpha].partial_jet(beta, &index);
                let rhs = higher_euler(&delta.components[beta], alpha, &index).scale(&sign);
                entries.insert((alpha, beta, index.clone()), lhs - rhs);
            }
        }
    }
    HelmholtzResiduals {
        order_bound: bound,
        entries,
    }
}

/// The weight-`k` graded component of `δ_V Δ`,
/// `μ_k = −½ Σ_{|I|=k} res(α,β,I) θ^α ∧ θ^β_I ∧ ν`.
pub fn mu_component<C: Scalar>(
    space: &JetSpace,
    delta: &SourceForm<C>,
    k: u32,
) -> Result<GradedClass<C>, EulerError> {
    let bound = delta.order_bound();
    if k > bound {
        return Err(EulerError::ComponentOutOfRange { k, bound });
    }
    let n = space.n;
    let residuals = helmholtz_residuals(space, delta);
    let half = C::ratio(-1, 2);
    let mut payload = Form::zero(n, (n, 2));
    for ((alpha, beta, index), r) in residuals.nonzero() {
        if index.order() != k {
            continue;
        }
        let mut factors = vec![
            Factor::Theta(ContactFactor::new(*alpha, MultiIndex::zero(n))),
            Factor::Theta(ContactFactor::new(*beta, index.clone())),
        ];
        factors.extend((0..n).map(Factor::Dx));
        payload.add_factors(factors, r.scale(&half));
    }
    GradedClass::new(k, payload).map_err(|e| EulerError::Filtration(Box::new(e)))
}

/// The canonical `(n,s)` basis monomial `θ^{α_1}_{I_1} ∧ ⋯ ∧ ν`, if nonzero.
pub fn top_monomial(n: usize, contact: Vec<ContactFactor>) -> Option<(WedgeMonomial, bool)> {
    let mut factors: Vec<Factor> = contact.into_iter().map(Factor::Theta).collect();
    factors.extend((0..n).map(Factor::Dx));
    WedgeMonomial::from_factors(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;
    type P = Polynomial<Q>;
    type F = Form<Q>;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    fn u(alpha: usize, e: &[u32]) -> P {
        P::u(alpha, mi(e))
    }

    fn space(n: usize, m: usize) -> JetSpace {
        JetSpace::new(n, m).unwrap()
    }

    fn half() -> Q {
        Q::new(1, 2)
    }

    #[test]
    fn euler_examples() {
        let s = space(1, 1);
        let e = euler(&s, &Lagrangian::new(u(0, &[0])));
        assert_eq!(e.components[0], P::one());
        let e = euler(&s, &Lagrangian::new(u(0, &[1]).pow(2).scale(&half())));
        assert_eq!(e.components[0], -u(0, &[2]));
        let e = euler(&s, &Lagrangian::new(&u(0, &[0]) * &u(0, &[1])));
        assert!(e.components[0].is_zero());
    }

    #[test]
    fn higher_euler_examples() {
        let f = u(0, &[1]).pow(2).scale(&half());
        assert_eq!(higher_euler(&f, 0, &mi(&[1])), u(0, &[1]));
        assert!(higher_euler(&u(0, &[2]), 0, &mi(&[1])).is_zero());
        assert!(higher_euler(&f, 0, &mi(&[3])).is_zero());
        assert_eq!(higher_euler(&f, 0, &mi(&[0])), -u(0, &[2]));
    }

    fn first_variation_residual(s: &JetSpace, lam: &Lagrangian<Q>) -> F {
        let n = s.n;
        let e = euler(s, lam).to_form(n);
        let eta = variation_boundary(s, lam);
        lam.to_form(n).d_v() - e - eta.d_h()
    }

    #[test]
    fn boundary_term_one_dimensional() {
        let s = space(1, 1);
        assert!(variation_boundary(&s, &Lagrangian::new(u(0, &[0]))).is_zero());
        let lam = Lagrangian::new(u(0, &[1]).pow(2).scale(&half()));
        let eta = variation_boundary(&s, &lam);
        assert_eq!(eta, -F::theta(1, 0, mi(&[0])).mul_fn(&u(0, &[1])));
        assert!(first_variation_residual(&s, &lam).is_zero());
    }

    #[test]
    fn boundary_term_mixed_derivative() {
        let s = space(2, 1);
        let lam = Lagrangian::new(u(0, &[1, 1]).pow(2) + &P::x(0) * &u(0, &[2, 0]));
        assert!(first_variation_residual(&s, &lam).is_zero());
    }

    #[test]
    fn interior_euler_examples() {
        let nu = F::nu(1);
        let w = F::theta(1, 0, mi(&[1])).wedge(&nu).mul_fn(&u(0, &[1]));
        let expected = F::theta(1, 0, mi(&[0])).wedge(&nu).mul_fn(&-u(0, &[2]));
        assert_eq!(interior_euler(&w).unwrap(), expected);
        let t = F::theta(1, 0, mi(&[0])).wedge(&nu);
        assert_eq!(interior_euler(&t).unwrap(), t);
        assert_eq!(interior_euler(&nu), Err(EulerError::NoVerticalDegree));
    }

    #[test]
    fn delta_v_examples() {
        let s = space(1, 1);
        let lam = Lagrangian::new(u(0, &[1]).pow(2).scale(&half()));
        let src = euler(&s, &lam).to_form(1);
        assert!(delta_v(&src).unwrap().is_zero());
        let heat_like = SourceForm::new(vec![u(0, &[1])]).to_form(1);
        assert!(!delta_v(&heat_like).unwrap().is_zero());
        let non_functional = F::theta(1, 0, mi(&[1])).wedge(&F::nu(1));
        assert_eq!(delta_v(&non_functional), Err(EulerError::NotFunctional));
    }

    #[test]
    fn helmholtz_examples() {
        let s = space(1, 1);
        assert!(helmholtz_residuals(&s, &SourceForm::new(vec![u(0, &[2])])).is_variational());
        assert!(helmholtz_residuals(&s, &SourceForm::<Q>::zero(1)).is_variational());

        let s2 = space(2, 1);
        let heat = SourceForm::new(vec![u(0, &[0, 1]) - u(0, &[2, 0])]);
        let res = helmholtz_residuals(&s2, &heat);
        assert!(!res.is_variational());
        let nz: Vec<_> = res.nonzero().collect();
        assert_eq!(nz.len(), 1);
        assert_eq!(*nz[0].0, (0, 0, mi(&[0, 1])));
        assert_eq!(*nz[0].1, P::int(2));
    }

    #[test]
    fn mu_components_sum_to_delta_v() {
        let s = space(2, 1);
        let heat = SourceForm::new(vec![u(0, &[0, 1]) - u(0, &[2, 0])]);
        let dv = delta_v(&heat.to_form(2)).unwrap();
        let mut sum = F::zero(2, (2, 2));
        for k in 0..=heat.order_bound() {
            sum += mu_component(&s, &heat, k).unwrap().payload();
        }
        assert_eq!(sum, dv);
        assert!(!mu_component(&s, &heat, 1).unwrap().is_zero());
        assert!(mu_component(&s, &heat, 3).is_err());
    }

    #[test]
    fn top_weight_sign() {
        // Δ = u_x: ∂^{(1)}Δ = 1 enters μ_1 as 1 − (−1)·1, not 1 + (−1)·1.
        let s = space(1, 1);
        let delta = SourceForm::new(vec![u(0, &[1])]);
        let mu = mu_component(&s, &delta, 1).unwrap();
        let expected = F::theta(1, 0, mi(&[0]))
            .wedge(&F::theta(1, 0, mi(&[1])))
            .wedge(&F::nu(1))
            .scale(&Q::from_integer(-1));
        assert_eq!(*mu.payload(), expected);
    }
}
