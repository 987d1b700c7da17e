//! Seeded generators of random polynomials, forms and graded classes, used by
//! the `check` suite and the property tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::euler::{Lagrangian, SourceForm};
use crate::filtration::GradedClass;
use crate::forms::{ContactFactor, Factor, Form};
use crate::jet::{JetSpace, JetVar, Monomial, MultiIndex, Polynomial, Var};
use crate::scalar::Scalar;

/// Size knobs for generated objects.
#[derive(Debug, Clone, Copy)]
pub struct SampleSize {
    /// Highest jet order of variables in coefficients.
    pub max_order: u32,
    /// Upper bound on the number of terms of a polynomial or form.
    pub max_terms: usize,
    /// Upper bound on the total degree of a monomial.
    pub max_degree: u32,
}

impl Default for SampleSize {
    fn default() -> Self {
        SampleSize {
            max_order: 2,
            max_terms: 3,
            max_degree: 2,
        }
    }
}

pub struct Sampler {
    space: JetSpace,
    size: SampleSize,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(space: JetSpace, size: SampleSize, seed: u64) -> Self {
        Sampler {
            space,
            size,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn space(&self) -> JetSpace {
        self.space
    }

    pub fn size(&self) -> SampleSize {
        self.size
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn coeff(&mut self) -> i64 {
        let k = self.rng.random_range(1..=3);
        if self.rng.random_bool(0.5) {
            k
        } else {
            -k
        }
    }

    pub fn multi_index(&mut self, order: u32) -> MultiIndex {
        let n = self.space.n;
        let dirs: Vec<usize> = (0..order).map(|_| self.rng.random_range(0..n)).collect();
        MultiIndex::from_directions(n, &dirs)
    }

    pub fn multi_index_up_to(&mut self, max_order: u32) -> MultiIndex {
        let order = self.rng.random_range(0..=max_order);
        self.multi_index(order)
    }

    fn var(&mut self, max_order: u32) -> Var {
        if self.rng.random_ratio(1, 5) {
            Var::X(self.rng.random_range(0..self.space.n))
        } else {
            let alpha = self.rng.random_range(0..self.space.m);
            Var::U(JetVar::new(alpha, self.multi_index_up_to(max_order)))
        }
    }

    /// A random polynomial with jet order at most `max_order`.
    pub fn expr_of_order<C: Scalar>(&mut self, max_order: u32) -> Polynomial<C> {
        let terms = self.rng.random_range(1..=self.size.max_terms);
        let mut p = Polynomial::zero();
        for _ in 0..terms {
            let degree = self.rng.random_range(0..=self.size.max_degree);
            let powers: Vec<(Var, u32)> = (0..degree).map(|_| (self.var(max_order), 1)).collect();
            let c = self.coeff();
            p.add_term(Monomial::from_powers(powers), C::from_int(c));
        }
        p
    }

    pub fn expr<C: Scalar>(&mut self) -> Polynomial<C> {
        self.expr_of_order(self.size.max_order)
    }

    /// A nonconstant polynomial, resampled until one is found.
    pub fn nonconstant_expr<C: Scalar>(&mut self) -> Polynomial<C> {
        loop {
            let p = self.expr::<C>();
            if p.as_constant().is_none() {
                return p;
            }
        }
    }

    pub fn lagrangian<C: Scalar>(&mut self) -> Lagrangian<C> {
        Lagrangian::new(self.nonconstant_expr())
    }

    pub fn source_form<C: Scalar>(&mut self) -> SourceForm<C> {
        SourceForm::new((0..self.space.m).map(|_| self.expr()).collect())
    }

    /// `s` contact factors whose orders sum to exactly `weight`; with
    /// `omega0` the first factor has order zero.
    fn contact_with_weight(&mut self, s: usize, weight: u32, omega0: bool) -> Vec<ContactFactor> {
        let mut orders = vec![0u32; s];
        let free = if omega0 { 1 } else { 0 };
        if s > free {
            for _ in 0..weight {
                let k = self.rng.random_range(free..s);
                orders[k] += 1;
            }
        }
        orders
            .into_iter()
            .map(|o| {
                let alpha = self.rng.random_range(0..self.space.m);
                ContactFactor::new(alpha, self.multi_index(o))
            })
            .collect()
    }

    fn form_generic<C: Scalar>(
        &mut self,
        (r, s): (usize, usize),
        weight: impl Fn(&mut Self) -> u32,
        omega0: bool,
    ) -> Form<C> {
        let n = self.space.n;
        assert!(r <= n, "horizontal degree above base dimension");
        let mut out = Form::zero(n, (r, s));
        let terms = self.rng.random_range(1..=self.size.max_terms);
        for _ in 0..terms {
            let wgt = weight(self);
            let contact = self.contact_with_weight(s, wgt, omega0);
            let mut dx: Vec<usize> = (0..n).collect();
            while dx.len() > r {
                let k = self.rng.random_range(0..dx.len());
                dx.remove(k);
            }
            let mut factors: Vec<Factor> = contact.into_iter().map(Factor::Theta).collect();
            factors.extend(dx.into_iter().map(Factor::Dx));
            let f = self.expr::<C>();
            out.add_factors(factors, f);
        }
        out
    }

    /// A random `(r,s)`-form with contact weight at most `max_weight`.
    pub fn form<C: Scalar>(&mut self, bidegree: (usize, usize), max_weight: u32) -> Form<C> {
        self.form_generic(bidegree, |g| g.rng.random_range(0..=max_weight), false)
    }

    /// A random element of `F^l Ω^{n,s}_0`.
    pub fn form_omega0<C: Scalar>(&mut self, s: usize, max_weight: u32) -> Form<C> {
        let n = self.space.n;
        self.form_generic((n, s), |g| g.rng.random_range(0..=max_weight), true)
    }

    /// A random class in `Gr^l Ω^{n,s}_0`.
    pub fn graded_class<C: Scalar>(&mut self, s: usize, level: u32) -> GradedClass<C> {
        assert!(s >= 1);
        let n = self.space.n;
        let level = if s == 1 { 0 } else { level };
        let mut w = self.form_generic((n, s), |_| level, true);
        for _ in 0..64 {
            if !w.is_zero() {
                break;
            }
            w = self.form_generic((n, s), |_| level, true);
        }
        GradedClass::new(level, w).expect("generated class is weight-homogeneous")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn deterministic_for_seed() {
        let space = JetSpace::new(2, 2).unwrap();
        let mut a = Sampler::new(space, SampleSize::default(), 7);
        let mut b = Sampler::new(space, SampleSize::default(), 7);
        for _ in 0..5 {
            assert_eq!(a.form::<Rational>((1, 2), 3), b.form::<Rational>((1, 2), 3));
        }
    }

    #[test]
    fn graded_classes_have_exact_weight() {
        let space = JetSpace::new(2, 2).unwrap();
        let mut g = Sampler::new(space, SampleSize::default(), 1);
        for l in 0..3 {
            let c = g.graded_class::<Rational>(3, l);
            assert!(c.payload().terms().all(|(m, _)| m.contact_weight() == l));
            assert!(c.payload().in_omega0());
        }
    }
}
