//! The JSON form schema:
//! `{"bidegree":[r,s],"terms":[{"coeff":"<expr>","contact":[["α","digits"],…],"dx":[i,…]}]}`.

use serde_json::{json, Value};

use super::{parse_expr, ParseError, SessionConfig};
use crate::forms::{ContactFactor, Factor};
use crate::jet::MultiIndex;
use crate::Form;

pub fn form_to_json(w: &Form) -> Value {
    let terms: Vec<Value> = w
        .terms()
        .map(|(mono, coeff)| {
            let contact: Vec<Value> = mono
                .contact()
                .iter()
                .map(|c| json!([(c.alpha + 1).to_string(), c.index.to_digits()]))
                .collect();
            let dx: Vec<usize> = mono.horizontal().iter().map(|i| i + 1).collect();
            json!({ "coeff": coeff.to_string(), "contact": contact, "dx": dx })
        })
        .collect();
    let (r, s) = w.bidegree();
    json!({ "bidegree": [r, s], "terms": terms })
}

fn bad(msg: impl Into<String>) -> ParseError {
    ParseError::Json(msg.into())
}

fn as_index(v: &Value, what: &str, bound: usize) -> Result<usize, ParseError> {
    let k = v
        .as_u64()
        .or_else(|| v.as_str().and_then(|s| s.parse().ok()))
        .ok_or_else(|| bad(format!("{what} must be a positive integer")))? as usize;
    if k == 0 || k > bound {
        return Err(bad(format!("{what} {k} not in 1..={bound}")));
    }
    Ok(k - 1)
}

fn contact_factor(v: &Value, cfg: &SessionConfig) -> Result<ContactFactor, ParseError> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| bad("contact entry must be a pair [alpha, digits]"))?;
    let alpha = as_index(&pair[0], "fiber index", cfg.m)?;
    let digits = pair[1]
        .as_str()
        .ok_or_else(|| bad("contact digits must be a string"))?;
    let mut dirs = Vec::new();
    for ch in digits.chars() {
        let d = ch
            .to_digit(10)
            .ok_or_else(|| bad(format!("bad digit '{ch}' in contact index")))?
            as usize;
        if d == 0 || d > cfg.n {
            return Err(bad(format!(
                "derivative direction {d} not in 1..={}",
                cfg.n
            )));
        }
        dirs.push(d - 1);
    }
    let index = MultiIndex::from_directions(cfg.n, &dirs);
    if index.order() > cfg.max_order {
        return Err(bad(format!(
            "jet order {} exceeds max order {}",
            index.order(),
            cfg.max_order
        )));
    }
    Ok(ContactFactor::new(alpha, index))
}

pub fn form_from_json_value(v: &Value, cfg: &SessionConfig) -> Result<Form, ParseError> {
    let bd = v
        .get("bidegree")
        .and_then(Value::as_array)
        .filter(|a| a.len() == 2)
        .ok_or_else(|| bad("missing bidegree [r, s]"))?;
    let r = bd[0]
        .as_u64()
        .ok_or_else(|| bad("bidegree entries must be integers"))? as usize;
    let s = bd[1]
        .as_u64()
        .ok_or_else(|| bad("bidegree entries must be integers"))? as usize;
    if r > cfg.n {
        return Err(bad(format!("horizontal degree {r} exceeds n = {}", cfg.n)));
    }
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing terms array"))?;
    let mut w = Form::zero(cfg.n, (r, s));
    for t in terms {
        let coeff = t
            .get("coeff")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("term coeff must be a string"))?;
        let coeff = parse_expr(coeff, cfg)?;
        let contact = match t.get("contact") {
            None => Vec::new(),
            Some(c) => c
                .as_array()
                .ok_or_else(|| bad("contact must be an array"))?
                .iter()
                .map(|c| contact_factor(c, cfg))
                .collect::<Result<Vec<_>, _>>()?,
        };
        let dx = match t.get("dx") {
            None => Vec::new(),
            Some(d) => d
                .as_array()
                .ok_or_else(|| bad("dx must be an array"))?
                .iter()
                .map(|i| as_index(i, "dx index", cfg.n))
                .collect::<Result<Vec<_>, _>>()?,
        };
        if (dx.len(), contact.len()) != (r, s) {
            return Err(bad(format!(
                "term of bidegree ({}, {}) in a ({r}, {s})-form",
                dx.len(),
                contact.len()
            )));
        }
        let mut factors: Vec<Factor> = contact.into_iter().map(Factor::Theta).collect();
        factors.extend(dx.into_iter().map(Factor::Dx));
        w.add_factors(factors, coeff);
    }
    Ok(w)
}

pub fn form_from_json(text: &str, cfg: &SessionConfig) -> Result<Form, ParseError> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    form_from_json_value(&v, cfg)
}
