//! A seeded suite of algebraic invariants over random inputs.

use std::fmt;

use crate::euler::{
    delta_v, euler, helmholtz_residuals, interior_euler, mu_component, variation_boundary,
};
use crate::filtration::{b_op, filtration_level, gamma_decompose, ibar};
use crate::frontend::{form_from_json, form_to_json, parse_expr, parse_form, SessionConfig};
use crate::jet::JetSpace;
use crate::random::{SampleSize, Sampler};
use crate::{Expr, Form, GradedClass, Lagrangian, SourceForm};

/// Dimensions, seed and per-check case count.
#[derive(Debug, Clone, Copy)]
pub struct CheckConfig {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub cases: usize,
    pub size: SampleSize,
}

impl CheckConfig {
    pub fn new(n: usize, m: usize, seed: u64, cases: usize) -> Self {
        CheckConfig {
            n,
            m,
            seed,
            cases,
            size: SampleSize::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// Index and description of the first failing case.
    pub first_failure: Option<(usize, String)>,
}

impl CheckOutcome {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub config: CheckConfig,
    pub outcomes: Vec<CheckOutcome>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(CheckOutcome::ok)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(f, "seed {} n {} m {} cases {}", c.seed, c.n, c.m, c.cases)?;
        for o in &self.outcomes {
            let tag = if o.ok() { "PASS" } else { "FAIL" };
            write!(f, "{tag} {} ({}/{})", o.name, o.passed, o.passed + o.failed)?;
            if let Some((k, msg)) = &o.first_failure {
                write!(f, " first failure at case {k}: {msg}")?;
            }
            writeln!(f)?;
        }
        let verdict = if self.all_passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} overall (seed {})", c.seed)
    }
}

type Case = fn(&mut Sampler) -> Result<(), String>;

fn expect(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn zero(w: &Form, what: &str) -> Result<(), String> {
    expect(w.is_zero(), || format!("{what} = {w}"))
}

fn err(e: impl fmt::Display) -> String {
    e.to_string()
}

fn random_bidegree(g: &mut Sampler, max_s: usize) -> (usize, usize) {
    use rand::Rng;
    let n = g.space().n;
    let r = g.rng().random_range(0..=n);
    let s = g.rng().random_range(0..=max_s);
    (r, s)
}

fn random_s(g: &mut Sampler, lo: usize, hi: usize) -> usize {
    use rand::Rng;
    g.rng().random_range(lo..=hi)
}

fn total_derivatives_commute(g: &mut Sampler) -> Result<(), String> {
    let n = g.space().n;
    let f: Expr = g.expr();
    for i in 0..n {
        for j in 0..n {
            let a = f.total_derivative(i).total_derivative(j);
            let b = f.total_derivative(j).total_derivative(i);
            expect(a == b, || format!("D_{i} D_{j} differ on {f}"))?;
        }
    }
    Ok(())
}

fn total_derivative_leibniz(g: &mut Sampler) -> Result<(), String> {
    let (f, h): (Expr, Expr) = (g.expr(), g.expr());
    for j in 0..g.space().n {
        let lhs = (&f * &h).total_derivative(j);
        let rhs = &f.total_derivative(j) * &h + &f * &h.total_derivative(j);
        expect(lhs == rhs, || format!("Leibniz fails for {f} and {h}"))?;
    }
    Ok(())
}

fn d_h_squared(g: &mut Sampler) -> Result<(), String> {
    let b = random_bidegree(g, 2);
    let w: Form = g.form(b, 2);
    zero(&w.d_h().d_h(), "d_H d_H w")
}

fn d_v_squared(g: &mut Sampler) -> Result<(), String> {
    let b = random_bidegree(g, 2);
    let w: Form = g.form(b, 2);
    zero(&w.d_v().d_v(), "d_V d_V w")
}

fn d_h_d_v_anticommute(g: &mut Sampler) -> Result<(), String> {
    let b = random_bidegree(g, 2);
    let w: Form = g.form(b, 2);
    zero(&(w.d_h().d_v() + w.d_v().d_h()), "d_H d_V w + d_V d_H w")
}

fn first_variation(g: &mut Sampler) -> Result<(), String> {
    let space = g.space();
    let lam: Lagrangian = g.lagrangian();
    let n = space.n;
    let res = lam.to_form(n).d_v()
        - euler(&space, &lam).to_form(n)
        - variation_boundary(&space, &lam).d_h();
    zero(&res, "d_V λ − E(λ) − d_H η")
}

fn interior_euler_idempotent(g: &mut Sampler) -> Result<(), String> {
    let n = g.space().n;
    let s = random_s(g, 1, 3);
    let w: Form = g.form((n, s), 2);
    let iw = interior_euler(&w).map_err(err)?;
    let iiw = interior_euler(&iw).map_err(err)?;
    expect(iw == iiw, || format!("I(I w) != I w for {w}"))
}

fn interior_euler_kills_exact(g: &mut Sampler) -> Result<(), String> {
    let n = g.space().n;
    let s = random_s(g, 1, 2);
    let eta: Form = g.form((n - 1, s), 2);
    zero(&interior_euler(&eta.d_h()).map_err(err)?, "I(d_H η)")
}

fn delta_v_squared(g: &mut Sampler) -> Result<(), String> {
    let n = g.space().n;
    let w: Form = g.form((n, 1), 1);
    let iw = interior_euler(&w).map_err(err)?;
    let once = delta_v(&iw).map_err(err)?;
    zero(&delta_v(&once).map_err(err)?, "δ_V δ_V I(w)")
}

fn euler_image_is_variational(g: &mut Sampler) -> Result<(), String> {
    let space = g.space();
    let lam: Lagrangian = g.lagrangian();
    let delta = euler(&space, &lam);
    let res = helmholtz_residuals(&space, &delta);
    expect(res.is_variational(), || {
        format!("E({}) fails Helmholtz", lam.density)
    })
}

fn helmholtz_matches_delta_v(g: &mut Sampler) -> Result<(), String> {
    let space = g.space();
    let delta: SourceForm = g.source_form();
    let w = delta.to_form(space.n);
    let dv = delta_v(&w).map_err(err)?;
    let res = helmholtz_residuals(&space, &delta);
    expect(res.is_variational() == dv.is_zero(), || {
        format!("verdicts differ on {w}")
    })?;
    let mut sum = Form::zero(space.n, (space.n, 2));
    for k in 0..=delta.order_bound() {
        sum += &mu_component(&space, &delta, k).map_err(err)?.lift();
    }
    expect(sum == dv, || format!("Σ μ_k != δ_V Δ for {w}"))
}

fn filtration_preserved(g: &mut Sampler) -> Result<(), String> {
    let s = random_s(g, 1, 3);
    let w: Form = g.form_omega0(s, 3);
    let iw = interior_euler(&w).map_err(err)?;
    expect(filtration_level(&iw) <= filtration_level(&w), || {
        format!("I raises the level of {w}")
    })
}

fn random_class(g: &mut Sampler) -> GradedClass {
    let s = random_s(g, 1, 3);
    let l = random_s(g, 0, 3) as u32;
    g.graded_class(s, l)
}

fn ibar_module_projector(g: &mut Sampler) -> Result<(), String> {
    let eta = random_class(g);
    let f: Expr = g.expr();
    let once = ibar(&eta).map_err(err)?;
    expect(ibar(&once).map_err(err)? == once, || {
        format!("Ī not idempotent on {eta}")
    })?;
    let lhs = ibar(&eta.mul_fn(&f)).map_err(err)?;
    expect(lhs == once.mul_fn(&f), || {
        format!("Ī not linear over {f} on {eta}")
    })
}

fn block_identities(g: &mut Sampler) -> Result<(), String> {
    let eta = random_class(g);
    let fixed = ibar(&eta).map_err(err)?;
    let b = b_op(&eta).map_err(err)?;
    let b_fixed = b_op(&fixed).map_err(err)?;
    let i_b = interior_euler(&b).map_err(err)?;
    let b_rest = b_op(&(&eta - &fixed)).map_err(err)?;
    expect(b_rest == i_b, || format!("B(id − Ī) != I B on {eta}"))?;
    expect(b_fixed == &b - &i_b, || {
        format!("B Ī != (id − I) B on {eta}")
    })
}

fn decomposition_reconstructs(g: &mut Sampler) -> Result<(), String> {
    let s = random_s(g, 1, 3);
    let w: Form = g.form_omega0(s, 2);
    let w = interior_euler(&w).map_err(err)?;
    let dec = gamma_decompose(&w).map_err(err)?;
    let n = g.space().n;
    expect(dec.reconstruct(n, s) == w, || {
        format!("decomposition of {w} does not add up")
    })?;
    for p in &dec.pieces {
        expect(ibar(&p.eta).map_err(err)? == p.eta, || {
            format!("η_{} not fixed", p.level)
        })?;
    }
    Ok(())
}

fn session(g: &Sampler) -> SessionConfig {
    let sp = g.space();
    SessionConfig::with_max_order(sp.n, sp.m, 8).expect("suite dimensions")
}

fn text_round_trip(g: &mut Sampler) -> Result<(), String> {
    let cfg = session(g);
    let f: Expr = g.expr();
    let back = parse_expr(&f.to_string(), &cfg).map_err(err)?;
    expect(back == f, || format!("expression {f} reparses as {back}"))?;
    let b = random_bidegree(g, 3);
    let w: Form = g.form(b, 2);
    let back = parse_form(&w.to_string(), &cfg).map_err(err)?;
    expect(back == w, || format!("form {w} reparses as {back}"))
}

fn json_round_trip(g: &mut Sampler) -> Result<(), String> {
    let cfg = session(g);
    let b = random_bidegree(g, 3);
    let w: Form = g.form(b, 2);
    let back = form_from_json(&form_to_json(&w).to_string(), &cfg).map_err(err)?;
    expect(back == w, || format!("JSON of {w} reparses as {back}"))
}

const SUITE: &[(&str, Case)] = &[
    ("total derivatives commute", total_derivatives_commute),
    ("total derivative is a derivation", total_derivative_leibniz),
    ("d_H^2 = 0", d_h_squared),
    ("d_V^2 = 0", d_v_squared),
    ("d_H d_V + d_V d_H = 0", d_h_d_v_anticommute),
    ("first variation formula", first_variation),
    ("I^2 = I", interior_euler_idempotent),
    ("I d_H = 0", interior_euler_kills_exact),
    ("delta_V^2 = 0", delta_v_squared),
    (
        "Euler-Lagrange expressions are variational",
        euler_image_is_variational,
    ),
    (
        "Helmholtz iff delta_V, sum of mu_k",
        helmholtz_matches_delta_v,
    ),
    ("I preserves the filtration", filtration_preserved),
    ("Ibar is a module projector", ibar_module_projector),
    ("block identities of B", block_identities),
    ("graph decomposition", decomposition_reconstructs),
    ("print/parse round trip", text_round_trip),
    ("JSON round trip", json_round_trip),
];

/// The names of the checks, in report order.
pub fn check_names() -> Vec<&'static str> {
    SUITE.iter().map(|(name, _)| *name).collect()
}

/// Runs every check on `cases` seeded inputs. Each check draws from its own
/// generator, so results do not depend on which other checks ran.
pub fn run_checks(config: CheckConfig) -> Result<CheckReport, crate::jet::JetError> {
    let space = JetSpace::new(config.n, config.m)?;
    let outcomes = SUITE
        .iter()
        .enumerate()
        .map(|(k, (name, case))| {
            let seed = config
                .seed
                .wrapping_add((k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut g = Sampler::new(space, config.size, seed);
            let mut out = CheckOutcome {
                name,
                passed: 0,
                failed: 0,
                first_failure: None,
            };
            for i in 0..config.cases {
                match case(&mut g) {
                    Ok(()) => out.passed += 1,
                    Err(msg) => {
                        out.failed += 1;
                        out.first_failure.get_or_insert((i, msg));
                    }
                }
            }
            out
        })
        .collect();
    Ok(CheckReport { config, outcomes })
}
