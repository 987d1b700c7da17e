//! Lexer and recursive-descent parser for expressions and forms.
//!
//! ```text
//! sum     := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | primary ('^' (nat | primary))*
//! primary := nat | var | form-atom | '(' sum ')'
//! var     := 'x' digit | 'u' digit ['_' digits]
//! form-atom := 'theta' digit ['_' digits] | 'dx' digit | 'nu'
//! ```
//!
//! `^` followed by a natural number is a power, otherwise it is a wedge
//! product. Division is only by nonzero constants.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{ParseError, SessionConfig};
use crate::forms::{ContactFactor, Factor, WedgeMonomial};
use crate::jet::{JetVar, MultiIndex, Var};
use crate::{Expr, Form, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident {
        word: String,
        major: String,
        minor: Option<String>,
    },
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                out.push((Tok::Num(s.parse().expect("digit string")), pos));
                continue;
            }
            a if a.is_ascii_alphabetic() => {
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let ds = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let major: String = chars[ds..i].iter().collect();
                let mut minor = None;
                if i < chars.len() && chars[i] == '_' {
                    i += 1;
                    let ms = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if ms == i {
                        return Err(syntax(
                            Pos {
                                line,
                                column: col + (i - start),
                            },
                            "expected index digits after '_'",
                        ));
                    }
                    minor = Some(chars[ms..i].iter().collect());
                }
                col += i - start;
                out.push((Tok::Ident { word, major, minor }, pos));
                continue;
            }
            other => return Err(syntax(pos, format!("unexpected character '{other}'"))),
        };
        i += 1;
        col += 1;
        out.push((tok, pos));
    }
    out.push((Tok::End, Pos { line, column: col }));
    Ok(out)
}

/// A sum of `coefficient · ordered product of 1-forms` terms.
#[derive(Debug, Clone, Default)]
struct Val {
    terms: BTreeMap<Vec<Factor>, Expr>,
}

impl Val {
    fn function(e: Expr) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), e);
        Val { terms }
    }

    fn atom(factors: Vec<Factor>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(factors, Expr::one());
        Val { terms }
    }

    fn as_function(&self) -> Option<Expr> {
        if self.terms.keys().all(|k| k.is_empty()) {
            Some(
                self.terms
                    .values()
                    .fold(Expr::zero(), |acc, e| acc + e.clone()),
            )
        } else {
            None
        }
    }

    fn add(&mut self, other: Val, negate: bool) {
        for (k, e) in other.terms {
            let slot = self.terms.entry(k).or_default();
            if negate {
                *slot -= &e;
            } else {
                *slot += &e;
            }
        }
    }

    fn mul(&self, other: &Val) -> Val {
        let mut out = Val::default();
        for (ka, ea) in &self.terms {
            for (kb, eb) in &other.terms {
                let mut k = ka.clone();
                k.extend(kb.iter().cloned());
                *out.terms.entry(k).or_default() += &(ea * eb);
            }
        }
        out
    }

    fn neg(self) -> Val {
        Val {
            terms: self.terms.into_iter().map(|(k, e)| (k, -e)).collect(),
        }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    cfg: &'a SessionConfig,
    forms: bool,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn sum(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.term()?;
        loop {
            let negate = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.term()?;
            acc.add(rhs, negate);
        }
    }

    fn term(&mut self) -> Result<Val, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = acc.mul(&rhs);
                }
                Tok::Slash => {
                    self.bump();
                    let pos = self.pos();
                    let rhs = self.factor()?;
                    let c = rhs
                        .as_function()
                        .and_then(|f| f.as_constant())
                        .ok_or_else(|| syntax(pos, "division is only by a nonzero constant"))?;
                    if c.is_zero() {
                        return Err(syntax(pos, "division by zero"));
                    }
                    acc = acc.mul(&Val::function(Expr::constant(Rational::one() / c)));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Val, ParseError> {
        if matches!(self.peek(), Tok::Minus) {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let base_pos = self.pos();
        let mut acc = self.primary()?;
        while matches!(self.peek(), Tok::Caret) {
            self.bump();
            if let Tok::Num(k) = self.peek().clone() {
                let pos = self.pos();
                self.bump();
                let k: u32 = u32::try_from(&k).map_err(|_| syntax(pos, "exponent too large"))?;
                let f = acc
                    .as_function()
                    .ok_or_else(|| syntax(base_pos, "cannot raise a form to a power"))?;
                acc = Val::function(f.pow(k));
            } else {
                let rhs = self.primary()?;
                acc = acc.mul(&rhs);
            }
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<Val, ParseError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Num(k) => Ok(Val::function(Expr::constant(Rational::from_integer(k)))),
            Tok::LParen => {
                let v = self.sum()?;
                match self.bump() {
                    (Tok::RParen, _) => Ok(v),
                    (_, p) => Err(syntax(p, "expected ')'")),
                }
            }
            Tok::Ident { word, major, minor } => self.ident(pos, &word, &major, minor.as_deref()),
            Tok::End => Err(syntax(pos, "unexpected end of input")),
            other => Err(syntax(
                pos,
                format!("unexpected token {}", describe(&other)),
            )),
        }
    }

    fn index_number(
        &self,
        pos: Pos,
        what: &str,
        digits: &str,
        bound: usize,
    ) -> Result<usize, ParseError> {
        if digits.is_empty() {
            return Err(syntax(pos, format!("expected a {what} number")));
        }
        let k: usize = digits.parse().unwrap_or(usize::MAX);
        if k == 0 || k > bound {
            return Err(ParseError::OutOfRange {
                line: pos.line,
                column: pos.column,
                message: format!("{what} {digits} not in 1..={bound}"),
            });
        }
        Ok(k - 1)
    }

    fn multi_index(&self, pos: Pos, digits: Option<&str>) -> Result<MultiIndex, ParseError> {
        let n = self.cfg.n;
        let mut dirs = Vec::new();
        for ch in digits.unwrap_or("").chars() {
            let d = ch.to_digit(10).expect("lexed digit") as usize;
            if d == 0 || d > n {
                return Err(ParseError::OutOfRange {
                    line: pos.line,
                    column: pos.column,
                    message: format!("derivative direction {d} not in 1..={n}"),
                });
            }
            dirs.push(d - 1);
        }
        let index = MultiIndex::from_directions(n, &dirs);
        if index.order() > self.cfg.max_order {
            return Err(ParseError::OrderTooHigh {
                line: pos.line,
                column: pos.column,
                order: index.order(),
                max: self.cfg.max_order,
            });
        }
        Ok(index)
    }

    fn ident(
        &self,
        pos: Pos,
        word: &str,
        major: &str,
        minor: Option<&str>,
    ) -> Result<Val, ParseError> {
        let (n, m) = (self.cfg.n, self.cfg.m);
        let form_atom = matches!(word, "theta" | "dx" | "nu");
        if form_atom && !self.forms {
            return Err(syntax(
                pos,
                format!("form token '{word}' not allowed in an expression"),
            ));
        }
        let no_minor = |what: &str| -> Result<(), ParseError> {
            if minor.is_some() {
                Err(syntax(pos, format!("'{what}' takes no derivative index")))
            } else {
                Ok(())
            }
        };
        match word {
            "x" => {
                no_minor("x")?;
                let i = self.index_number(pos, "base coordinate", major, n)?;
                Ok(Val::function(Expr::x(i)))
            }
            "u" => {
                let alpha = self.index_number(pos, "fiber coordinate", major, m)?;
                let index = self.multi_index(pos, minor)?;
                Ok(Val::function(Expr::var(Var::U(JetVar::new(alpha, index)))))
            }
            "theta" => {
                let alpha = self.index_number(pos, "fiber coordinate", major, m)?;
                let index = self.multi_index(pos, minor)?;
                Ok(Val::atom(vec![Factor::Theta(ContactFactor::new(
                    alpha, index,
                ))]))
            }
            "dx" => {
                no_minor("dx")?;
                let i = self.index_number(pos, "base coordinate", major, n)?;
                Ok(Val::atom(vec![Factor::Dx(i)]))
            }
            "nu" => {
                no_minor("nu")?;
                if !major.is_empty() {
                    return Err(syntax(pos, "'nu' takes no index"));
                }
                Ok(Val::atom((0..n).map(Factor::Dx).collect()))
            }
            other => Err(syntax(pos, format!("unknown identifier '{other}{major}'"))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(k) => k.to_string(),
        Tok::Ident { word, major, minor } => match minor {
            Some(mi) => format!("'{word}{major}_{mi}'"),
            None => format!("'{word}{major}'"),
        },
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::End => "end of input".into(),
    }
}

fn parse_val(text: &str, cfg: &SessionConfig, forms: bool) -> Result<Val, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        cfg,
        forms,
    };
    let v = p.sum()?;
    match p.peek() {
        Tok::End => Ok(v),
        other => Err(syntax(
            p.pos(),
            format!("unexpected token {}", describe(other)),
        )),
    }
}

/// Parses a scalar expression.
pub fn parse_expr(text: &str, cfg: &SessionConfig) -> Result<Expr, ParseError> {
    let v = parse_val(text, cfg, false)?;
    Ok(v.as_function()
        .expect("form tokens rejected in expression mode"))
}

/// Parses a homogeneous form; repeated factors are reported as warnings.
pub fn parse_form_with_warnings(
    text: &str,
    cfg: &SessionConfig,
) -> Result<(Form, Vec<String>), ParseError> {
    let v = parse_val(text, cfg, true)?;
    let mut bidegree: Option<(usize, usize)> = None;
    for k in v.terms.keys() {
        let r = k.iter().filter(|f| matches!(f, Factor::Dx(_))).count();
        let b = (r, k.len() - r);
        match bidegree {
            None => bidegree = Some(b),
            Some(first) if first != b => {
                return Err(ParseError::MixedBidegree { first, second: b });
            }
            _ => {}
        }
    }
    let mut form = Form::zero(cfg.n, bidegree.unwrap_or((0, 0)));
    let mut warnings = Vec::new();
    for (factors, coeff) in v.terms {
        if coeff.is_zero() {
            continue;
        }
        if WedgeMonomial::from_factors(factors.clone()).is_none() {
            let text: Vec<String> = factors
                .iter()
                .map(|f| match f {
                    Factor::Theta(c) => c.to_string(),
                    Factor::Dx(i) => format!("dx{}", i + 1),
                })
                .collect();
            warnings.push(format!(
                "repeated factor in {}; term is zero",
                text.join(" ^ ")
            ));
            continue;
        }
        form.add_factors(factors, coeff);
    }
    Ok((form, warnings))
}

/// Parses a homogeneous form, discarding warnings.
pub fn parse_form(text: &str, cfg: &SessionConfig) -> Result<Form, ParseError> {
    parse_form_with_warnings(text, cfg).map(|(f, _)| f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, m: usize) -> SessionConfig {
        SessionConfig::new(n, m).unwrap()
    }

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn expression_examples() {
        let e = parse_expr("u1_11", &cfg(1, 1)).unwrap();
        assert_eq!(e, Expr::u(0, MultiIndex::new(vec![2])));
        let e = parse_expr("1/2*u1_1^2", &cfg(1, 1)).unwrap();
        assert_eq!(
            e,
            Expr::u(0, MultiIndex::new(vec![1])).pow(2).scale(&q(1, 2))
        );
        assert_eq!(
            parse_expr("u1_21", &cfg(2, 1)),
            parse_expr("u1_12", &cfg(2, 1))
        );
    }

    #[test]
    fn arithmetic() {
        let c = cfg(2, 2);
        let e = parse_expr("(x1 + 1)^2 - x1*x1 - 2*x1", &c).unwrap();
        assert_eq!(e, Expr::one());
        let e = parse_expr("-u2 + 3/4", &c).unwrap();
        assert_eq!(e, Expr::constant(q(3, 4)) - Expr::u(1, MultiIndex::zero(2)));
        assert_eq!(parse_expr("x1 - x1", &c).unwrap(), Expr::zero());
    }

    #[test]
    fn expression_errors() {
        let c = cfg(1, 1);
        match parse_expr("u1_1 +\n  * u1", &c) {
            Err(ParseError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_expr("u2", &c),
            Err(ParseError::OutOfRange { .. })
        ));
        assert!(matches!(
            parse_expr("u1_2", &c),
            Err(ParseError::OutOfRange { .. })
        ));
        assert!(matches!(
            parse_expr("x0", &c),
            Err(ParseError::OutOfRange { .. })
        ));
        assert!(matches!(
            parse_expr("u1_11111", &c),
            Err(ParseError::OrderTooHigh {
                order: 5,
                max: 4,
                ..
            })
        ));
        assert!(matches!(
            parse_expr("x1/x1", &c),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_expr("1/0", &c),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_expr("theta1", &c),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_expr("(x1", &c),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_expr("x1 x1", &c),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_expr("y1", &c),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn form_examples() {
        let c = cfg(1, 1);
        let t = Form::theta(1, 0, MultiIndex::zero(1));
        let t1 = Form::theta(1, 0, MultiIndex::unit(1, 0));
        assert_eq!(
            parse_form("theta1 ^ nu", &c).unwrap(),
            t.wedge(&Form::nu(1))
        );
        assert_eq!(
            parse_form("theta1_1 ^ theta1 ^ nu", &c).unwrap(),
            -t.wedge(&t1).wedge(&Form::nu(1))
        );
        let (w, warnings) = parse_form_with_warnings("u1 * theta1 ^ theta1 ^ nu", &c).unwrap();
        assert!(w.is_zero());
        assert_eq!(w.bidegree(), (1, 2));
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn form_grammar() {
        let c = cfg(2, 1);
        let w = parse_form("(u1 + x2) * theta1 ^ dx2 - dx1 ^ theta1_12", &c).unwrap();
        assert_eq!(w.bidegree(), (1, 1));
        assert_eq!(w.len(), 2);
        assert!(matches!(
            parse_form("theta1 + dx1", &c),
            Err(ParseError::MixedBidegree { .. })
        ));
        assert!(matches!(
            parse_form("theta1^2", &c),
            Err(ParseError::Syntax { .. })
        ));
        assert_eq!(parse_form("x1^2 * dx1", &c).unwrap().bidegree(), (1, 0));
    }
}
