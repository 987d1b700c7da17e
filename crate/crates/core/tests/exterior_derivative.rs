//! `d_H + d_V` agrees with the full exterior derivative computed in the
//! coordinate coframe `{dx^i, du^α_I}`.

use std::collections::BTreeMap;

use varbicomplex::forms::{ContactFactor, Factor};
use varbicomplex::jet::Polynomial;
use varbicomplex::random::{SampleSize, Sampler};
use varbicomplex::{Expr, Form, JetSpace, JetVar, MultiIndex, Rational, Var};

/// Coordinate 1-forms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Coord {
    Du(JetVar),
    Dx(usize),
}

type CoordForm = BTreeMap<Vec<Coord>, Expr>;
type ContactForm = BTreeMap<Vec<Factor>, Expr>;

/// Sorts by bubble passes, returning `None` on a repeated factor.
fn sort_signed<T: Ord + Clone>(mut v: Vec<T>) -> Option<(Vec<T>, bool)> {
    let mut odd = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                odd = !odd;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

fn push<T: Ord + Clone>(acc: &mut BTreeMap<Vec<T>, Expr>, factors: Vec<T>, c: Expr) {
    if let Some((k, odd)) = sort_signed(factors) {
        let slot = acc.entry(k).or_insert_with(Expr::zero);
        if odd {
            *slot -= &c;
        } else {
            *slot += &c;
        }
    }
}

fn clean<T: Ord>(mut m: BTreeMap<Vec<T>, Expr>) -> BTreeMap<Vec<T>, Expr> {
    m.retain(|_, c| !c.is_zero());
    m
}

/// Each factor expanded as a sum of (coefficient, coordinate 1-forms).
fn to_coords(n: usize, w: &Form) -> CoordForm {
    let mut acc = CoordForm::new();
    for (mono, coeff) in w.terms() {
        let mut partial: Vec<(Expr, Vec<Coord>)> = vec![(coeff.clone(), Vec::new())];
        for f in mono.factors() {
            let options: Vec<(Expr, Coord)> = match f {
                Factor::Dx(i) => vec![(Expr::one(), Coord::Dx(i))],
                Factor::Theta(c) => {
                    let mut o = vec![(
                        Expr::one(),
                        Coord::Du(JetVar::new(c.alpha, c.index.clone())),
                    )];
                    for j in 0..n {
                        o.push((-Expr::u(c.alpha, c.index.with_added(j)), Coord::Dx(j)));
                    }
                    o
                }
            };
            partial = partial
                .into_iter()
                .flat_map(|(c, fs)| {
                    options.iter().map(move |(oc, of)| {
                        let mut fs = fs.clone();
                        fs.push(of.clone());
                        (&c * oc, fs)
                    })
                })
                .collect();
        }
        for (c, fs) in partial {
            push(&mut acc, fs, c);
        }
    }
    clean(acc)
}

fn exterior_d(w: &CoordForm) -> CoordForm {
    let mut acc = CoordForm::new();
    for (fs, c) in w {
        let mut vars: Vec<Var> = c
            .terms()
            .flat_map(|(m, _)| m.powers().iter().map(|(v, _)| v.clone()))
            .collect();
        vars.sort();
        vars.dedup();
        for v in vars {
            let dc = c.partial(&v);
            let head = match v {
                Var::X(i) => Coord::Dx(i),
                Var::U(j) => Coord::Du(j),
            };
            let mut factors = vec![head];
            factors.extend(fs.iter().cloned());
            push(&mut acc, factors, dc);
        }
    }
    clean(acc)
}

/// Rewrites `du^α_I = θ^α_I + u^α_{Ij} dx^j`.
fn to_contact(n: usize, w: &CoordForm) -> ContactForm {
    let mut acc = ContactForm::new();
    for (fs, coeff) in w {
        let mut partial: Vec<(Expr, Vec<Factor>)> = vec![(coeff.clone(), Vec::new())];
        for f in fs {
            let options: Vec<(Expr, Factor)> = match f {
                Coord::Dx(i) => vec![(Expr::one(), Factor::Dx(*i))],
                Coord::Du(v) => {
                    let mut o = vec![(
                        Expr::one(),
                        Factor::Theta(ContactFactor::new(v.alpha, v.index.clone())),
                    )];
                    for j in 0..n {
                        o.push((Expr::u(v.alpha, v.index.with_added(j)), Factor::Dx(j)));
                    }
                    o
                }
            };
            partial = partial
                .into_iter()
                .flat_map(|(c, fs)| {
                    options.iter().map(move |(oc, of)| {
                        let mut fs = fs.clone();
                        fs.push(of.clone());
                        (&c * oc, fs)
                    })
                })
                .collect();
        }
        for (c, fs) in partial {
            push(&mut acc, fs, c);
        }
    }
    clean(acc)
}

fn as_contact(w: &Form) -> ContactForm {
    let mut acc = ContactForm::new();
    for (mono, c) in w.terms() {
        push(&mut acc, mono.factors(), c.clone());
    }
    clean(acc)
}

fn library_d(w: &Form) -> ContactForm {
    let mut acc = as_contact(&w.d_h());
    for (k, c) in as_contact(&w.d_v()) {
        let slot = acc.entry(k).or_insert_with(Polynomial::zero);
        *slot += &c;
    }
    clean(acc)
}

fn oracle_d(n: usize, w: &Form) -> ContactForm {
    to_contact(n, &exterior_d(&to_coords(n, w)))
}

#[test]
fn contact_form_derivative() {
    let n = 2;
    let t: Form = Form::theta(n, 0, MultiIndex::new(vec![1, 0]));
    let d = oracle_d(n, &t);
    assert_eq!(d, library_d(&t));
    assert_eq!(d.len(), 2);
}

#[test]
fn function_derivative() {
    let n = 1;
    let f = Expr::u(0, MultiIndex::zero(1)).pow(2) * Expr::x(0);
    let w: Form = Form::function(n, f);
    assert_eq!(oracle_d(n, &w), library_d(&w));
}

#[test]
fn random_forms_match_oracle() {
    for (n, m) in [(1, 1), (2, 1), (2, 2)] {
        let space = JetSpace::new(n, m).unwrap();
        let mut g = Sampler::new(space, SampleSize::default(), 11 + n as u64 * 7 + m as u64);
        for k in 0..30 {
            let r = k % (n + 1);
            let s = k % 3;
            let w: Form = g.form((r, s), 2);
            assert_eq!(oracle_d(n, &w), library_d(&w), "d mismatch on {w}");
        }
    }
}

#[test]
fn rational_coefficients() {
    let n = 1;
    let half = Rational::new(1.into(), 2.into());
    let f = Expr::constant(half) * Expr::u(0, MultiIndex::unit(1, 0));
    let w: Form = Form::theta(n, 0, MultiIndex::zero(1)).mul_fn(&f);
    assert_eq!(oracle_d(n, &w), library_d(&w));
}
