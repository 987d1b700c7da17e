use proptest::prelude::*;
use rand::Rng;

use varbicomplex::frontend::{form_from_json, form_to_json, parse_expr, parse_form, SessionConfig};
use varbicomplex::random::{SampleSize, Sampler};
use varbicomplex::scalar::sign;
use varbicomplex::{Expr, Form, JetSpace, Rational};

fn sampler(n: usize, m: usize, seed: u64) -> Sampler {
    Sampler::new(JetSpace::new(n, m).unwrap(), SampleSize::default(), seed)
}

fn dims() -> impl Strategy<Value = (usize, usize, u64)> {
    (1usize..=2, 1usize..=2, any::<u64>())
}

fn random_form(g: &mut Sampler, r: usize, s: usize) -> Form {
    g.form((r.min(g.space().n), s), 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn total_derivatives_commute((n, m, seed) in dims()) {
        let mut g = sampler(n, m, seed);
        let f: Expr = g.expr();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(
                    f.total_derivative(i).total_derivative(j),
                    f.total_derivative(j).total_derivative(i)
                );
            }
        }
    }

    #[test]
    fn total_derivative_leibniz((n, m, seed) in dims()) {
        let mut g = sampler(n, m, seed);
        let (f, h): (Expr, Expr) = (g.expr(), g.expr());
        for j in 0..n {
            let lhs = (&f * &h).total_derivative(j);
            let rhs = &f.total_derivative(j) * &h + &f * &h.total_derivative(j);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn differentials_square_to_zero((n, m, seed) in dims(), r in 0usize..=2, s in 0usize..=2) {
        let mut g = sampler(n, m, seed);
        let w = random_form(&mut g, r, s);
        prop_assert!(w.d_h().d_h().is_zero());
        prop_assert!(w.d_v().d_v().is_zero());
        prop_assert!((w.d_h().d_v() + w.d_v().d_h()).is_zero());
    }

    #[test]
    fn wedge_associative_and_graded((n, m, seed) in dims(), degs in prop::array::uniform6(0usize..=1)) {
        let mut g = sampler(n, m, seed);
        let a: Form = g.form((degs[0].min(n), degs[1]), 1);
        let b: Form = g.form((degs[2].min(n), degs[3]), 1);
        let c: Form = g.form((degs[4].min(n), degs[5]), 1);
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
        let sgn: Rational = sign(a.degree() * b.degree());
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).scale(&sgn));
    }

    #[test]
    fn contractions_are_antiderivations((n, m, seed) in dims(), degs in prop::array::uniform4(0usize..=2)) {
        let mut g = sampler(n, m, seed);
        let a: Form = g.form((degs[0].min(n), degs[1]), 1);
        let b: Form = g.form((degs[2].min(n - a.bidegree().0), degs[3]), 1);
        let sgn: Rational = sign(a.degree());
        let alpha = g.rng().random_range(0..m);
        let index = g.multi_index_up_to(2);
        let lhs = a.wedge(&b).contract(alpha, &index);
        let rhs = a.contract(alpha, &index).wedge(&b) + a.wedge(&b.contract(alpha, &index)).scale(&sgn);
        prop_assert_eq!(lhs, rhs);
        let j = g.rng().random_range(0..n);
        let lhs = a.wedge(&b).contract_horizontal(j);
        let rhs = a.contract_horizontal(j).wedge(&b) + a.wedge(&b.contract_horizontal(j)).scale(&sgn);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lie_total_is_a_derivation((n, m, seed) in dims(), degs in prop::array::uniform4(0usize..=1)) {
        let mut g = sampler(n, m, seed);
        let a: Form = g.form((degs[0].min(n), degs[1]), 1);
        let b: Form = g.form((degs[2].min(n), degs[3]), 1);
        for j in 0..n {
            let lhs = a.wedge(&b).lie_total(j);
            let rhs = a.lie_total(j).wedge(&b) + a.wedge(&b.lie_total(j));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn text_round_trip((n, m, seed) in dims(), r in 0usize..=2, s in 0usize..=3) {
        let cfg = SessionConfig::with_max_order(n, m, 8).unwrap();
        let mut g = sampler(n, m, seed);
        let f: Expr = g.expr();
        prop_assert_eq!(parse_expr(&f.to_string(), &cfg).unwrap(), f);
        let w = random_form(&mut g, r, s);
        prop_assume!(!w.is_zero());
        prop_assert_eq!(parse_form(&w.to_string(), &cfg).unwrap(), w);
    }

    #[test]
    fn json_round_trip((n, m, seed) in dims(), r in 0usize..=2, s in 0usize..=3) {
        let cfg = SessionConfig::with_max_order(n, m, 8).unwrap();
        let mut g = sampler(n, m, seed);
        let w = random_form(&mut g, r, s);
        let text = form_to_json(&w).to_string();
        prop_assert_eq!(form_from_json(&text, &cfg).unwrap(), w);
    }
}
