//! The `varbi` command line.

use std::fmt::Display;
use std::io::Write;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use varbicomplex::check::{run_checks, CheckConfig};
use varbicomplex::euler::{euler, helmholtz_residuals, interior_euler};
use varbicomplex::filtration::{filtration_level, gamma_decompose};
use varbicomplex::frontend::{
    form_to_json, parse_expr, parse_form_with_warnings, ParseError, SessionConfig,
};
use varbicomplex::{Form, Lagrangian, SourceForm};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "varbi",
    version,
    about = "Exact computations in the variational bicomplex"
)]
struct Cli {
    /// Base dimension.
    #[arg(long, global = true, default_value_t = 1)]
    n: usize,
    /// Fiber dimension.
    #[arg(long, global = true, default_value_t = 1)]
    m: usize,
    /// Highest jet order accepted in input.
    #[arg(long = "max-order", global = true, default_value_t = SessionConfig::DEFAULT_MAX_ORDER)]
    max_order: u32,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Euler-Lagrange expressions of a Lagrangian density.
    El {
        #[arg(allow_hyphen_values = true)]
        lagrangian: String,
    },
    /// Helmholtz conditions for a source form, one component per fiber index.
    Helmholtz {
        #[arg(required = true, allow_hyphen_values = true)]
        components: Vec<String>,
    },
    /// The interior Euler operator of an (n,s)-form.
    Ieuler {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Graph decomposition of a functional form.
    Decompose {
        #[arg(allow_hyphen_values = true)]
        form: String,
        /// Apply the interior Euler operator first.
        #[arg(long)]
        project: bool,
    },
    /// Filtration level and contact-weight split of a form.
    Gr {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Run the randomized invariant suite.
    Check {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
}

enum Failure {
    Usage(String),
    Parse(ParseError),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

struct Session<'a> {
    cfg: SessionConfig,
    json: bool,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Session<'_> {
    fn emit(&mut self, text: &str, value: Value) {
        if self.json {
            let _ = writeln!(self.out, "{value}");
        } else {
            let _ = writeln!(self.out, "{text}");
        }
    }

    fn form(&mut self, text: &str) -> Result<Form, Failure> {
        let (w, warnings) = parse_form_with_warnings(text, &self.cfg)?;
        for msg in warnings {
            let _ = writeln!(self.err, "warning: {msg}");
        }
        Ok(w)
    }

    fn el(&mut self, text: &str) -> Result<i32, Failure> {
        let lam = Lagrangian::new(parse_expr(text, &self.cfg)?);
        let e = euler(&self.cfg.space(), &lam);
        let lines: Vec<String> = e
            .components
            .iter()
            .enumerate()
            .map(|(a, c)| format!("E_{} = {c}", a + 1))
            .collect();
        let comps: Vec<Value> = e.components.iter().map(|c| json!(c.to_string())).collect();
        self.emit(
            &lines.join("\n"),
            json!({ "command": "el", "components": comps }),
        );
        Ok(EXIT_OK)
    }

    fn helmholtz(&mut self, texts: &[String]) -> Result<i32, Failure> {
        if texts.len() != self.cfg.m {
            return Err(Failure::Usage(format!(
                "expected {} source components, got {}",
                self.cfg.m,
                texts.len()
            )));
        }
        let comps = texts
            .iter()
            .map(|t| parse_expr(t, &self.cfg))
            .collect::<Result<Vec<_>, _>>()?;
        let delta = SourceForm::new(comps);
        let res = helmholtz_residuals(&self.cfg.space(), &delta);
        let ok = res.is_variational();
        let verdict = if ok { "PASS" } else { "FAIL" };
        let mut lines = vec![format!("verdict: {verdict}")];
        let mut entries = Vec::new();
        for ((a, b, index), r) in res.nonzero() {
            lines.push(format!("residual at ({},{},I={index}): {r}", a + 1, b + 1));
            entries.push(json!({
                "alpha": a + 1,
                "beta": b + 1,
                "index": index.exponents(),
                "value": r.to_string(),
            }));
        }
        self.emit(
            &lines.join("\n"),
            json!({ "command": "helmholtz", "verdict": verdict, "residuals": entries }),
        );
        Ok(if ok { EXIT_OK } else { EXIT_FAIL })
    }

    fn ieuler(&mut self, text: &str) -> Result<i32, Failure> {
        let w = self.form(text)?;
        let iw = interior_euler(&w).map_err(usage)?;
        self.emit(
            &iw.to_string(),
            json!({ "command": "ieuler", "form": form_to_json(&iw) }),
        );
        Ok(EXIT_OK)
    }

    fn decompose(&mut self, text: &str, project: bool) -> Result<i32, Failure> {
        let mut w = self.form(text)?;
        if project {
            w = interior_euler(&w).map_err(usage)?;
        }
        let dec = gamma_decompose(&w).map_err(usage)?;
        let mut lines = Vec::new();
        let mut pieces = Vec::new();
        for p in &dec.pieces {
            lines.push(format!(
                "k = {}: eta = {} ; omega = {}",
                p.level,
                p.eta.payload(),
                p.omega
            ));
            pieces.push(json!({
                "level": p.level,
                "eta": form_to_json(p.eta.payload()),
                "omega": form_to_json(&p.omega),
            }));
        }
        if lines.is_empty() {
            lines.push("zero form".to_string());
        }
        self.emit(
            &lines.join("\n"),
            json!({ "command": "decompose", "pieces": pieces }),
        );
        Ok(EXIT_OK)
    }

    fn gr(&mut self, text: &str) -> Result<i32, Failure> {
        let w = self.form(text)?;
        let level = filtration_level(&w);
        let mut lines = vec![format!("level: {level}")];
        let mut split = Vec::new();
        for (k, part) in w.contact_weight_split() {
            lines.push(format!("weight {k}: {part}"));
            split.push(json!({ "weight": k, "form": form_to_json(&part) }));
        }
        self.emit(
            &lines.join("\n"),
            json!({ "command": "gr", "level": level, "split": split }),
        );
        Ok(EXIT_OK)
    }

    fn check(&mut self, seed: u64, cases: usize) -> Result<i32, Failure> {
        let report =
            run_checks(CheckConfig::new(self.cfg.n, self.cfg.m, seed, cases)).map_err(usage)?;
        let checks: Vec<Value> = report
            .outcomes
            .iter()
            .map(|o| {
                json!({
                    "name": o.name,
                    "passed": o.passed,
                    "failed": o.failed,
                    "first_failure": o.first_failure.as_ref().map(|(k, m)| json!({"case": k, "message": m})),
                })
            })
            .collect();
        let ok = report.all_passed();
        self.emit(
            &report.to_string(),
            json!({ "command": "check", "seed": seed, "cases": cases, "pass": ok, "checks": checks }),
        );
        Ok(if ok { EXIT_OK } else { EXIT_FAIL })
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let stream: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(stream, "{}", e.render());
            return code;
        }
    };
    let cfg = match SessionConfig::with_max_order(cli.n, cli.m, cli.max_order) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut s = Session {
        cfg,
        json: cli.json,
        out,
        err,
    };
    let result = match &cli.command {
        Command::El { lagrangian } => s.el(lagrangian),
        Command::Helmholtz { components } => s.helmholtz(components),
        Command::Ieuler { form } => s.ieuler(form),
        Command::Decompose { form, project } => s.decompose(form, *project),
        Command::Gr { form } => s.gr(form),
        Command::Check { seed, cases } => s.check(*seed, *cases),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(s.err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Parse(e)) => {
            let _ = writeln!(s.err, "parse error: {e}");
            EXIT_PARSE
        }
    }
}
