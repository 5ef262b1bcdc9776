//! Wire formats: rationals as `"num/den"` strings, matrices as row-major
//! nested arrays, factored words as lists of tagged letters.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::mpcover::{FactoredWord, Letter};
use crate::rational::{format_rational, int, parse_rational, Rational};
use crate::spgroup::{BruhatForm, SpElement};

fn parse_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// Accepts `"num/den"`, `"num"`, or a JSON integer.
pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(int(i)),
            None => parse_err(format!("not an integer: {n}")),
        },
        other => parse_err(format!("expected a rational, found {other}")),
    }
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(rational_to_json).collect()))
            .collect(),
    )
}

/// Nested rows, or a flat row-major array of a square `dim × dim` matrix
/// when `dim` is given.
pub fn matrix_from_json(v: &Value, dim: Option<usize>) -> Result<Matrix> {
    let Value::Array(items) = v else {
        return parse_err("matrix must be an array");
    };
    if items.iter().all(Value::is_array) {
        let rows = items
            .iter()
            .map(|row| {
                row.as_array()
                    .expect("checked")
                    .iter()
                    .map(rational_from_json)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let m = Matrix::from_rows(rows).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(d) = dim {
            if m.rows() != d || m.cols() != d {
                return parse_err(format!("expected a {d}x{d} matrix"));
            }
        }
        return Ok(m);
    }
    let Some(d) = dim else {
        return parse_err("flat matrix needs an explicit size");
    };
    if items.len() != d * d {
        return parse_err(format!("flat matrix needs {} entries, found {}", d * d, items.len()));
    }
    let entries = items.iter().map(rational_from_json).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_fn(d, d, |r, c| entries[r * d + c].clone()))
}

pub fn sp_from_json(v: &Value, n: Option<usize>) -> Result<SpElement> {
    SpElement::new(matrix_from_json(v, n.map(|n| 2 * n))?)
}

pub fn letter_to_json(l: &Letter) -> Value {
    match l {
        Letter::Parabolic { g, .. } => json!({"type": "parabolic", "matrix": matrix_to_json(g.matrix())}),
        Letter::Sigma(s) => json!({"type": "sigma", "S": s}),
    }
}

pub fn word_to_json(w: &FactoredWord) -> Value {
    Value::Array(w.letters().iter().map(letter_to_json).collect())
}

fn parse_subset(v: &Value) -> Result<Vec<usize>> {
    let Some(items) = v.as_array() else {
        return parse_err("S must be an array of indices");
    };
    items
        .iter()
        .map(|i| match i.as_u64() {
            Some(i) => Ok(i as usize),
            None => parse_err(format!("bad index {i}")),
        })
        .collect()
}

/// Rank of a word: from its first parabolic matrix, else the largest
/// index among its sigma letters.
pub fn word_rank(v: &Value) -> Result<usize> {
    let Some(items) = v.as_array() else {
        return parse_err("word must be an array");
    };
    for it in items {
        if it.get("type").and_then(Value::as_str) == Some("parabolic") {
            let m = it.get("matrix").ok_or_else(|| Error::Parse("letter without matrix".into()))?;
            let len = m.as_array().map_or(0, Vec::len);
            let side = if m.as_array().is_some_and(|r| r.iter().all(Value::is_array)) {
                len
            } else {
                (len as f64).sqrt().round() as usize
            };
            return Ok(side / 2);
        }
    }
    let mut n = 0;
    for it in items {
        if let Some(s) = it.get("S") {
            n = n.max(parse_subset(s)?.into_iter().max().unwrap_or(0));
        }
    }
    Ok(n.max(1))
}

pub fn word_from_json(v: &Value, n: usize) -> Result<FactoredWord> {
    let Some(items) = v.as_array() else {
        return parse_err("word must be an array");
    };
    let mut letters = Vec::with_capacity(items.len());
    for it in items {
        let letter = match it.get("type").and_then(Value::as_str) {
            Some("parabolic") => {
                let m = it.get("matrix").ok_or_else(|| Error::Parse("letter without matrix".into()))?;
                Letter::parabolic(sp_from_json(m, Some(n))?)?
            }
            Some("sigma") => {
                let s = it.get("S").ok_or_else(|| Error::Parse("sigma letter without S".into()))?;
                Letter::Sigma(parse_subset(s)?)
            }
            _ => return parse_err(format!("unknown letter {it}")),
        };
        letters.push(letter);
    }
    FactoredWord::new(n, letters)
}

pub fn bruhat_to_json(b: &BruhatForm, x: &str) -> Value {
    json!({
        "p1": matrix_to_json(b.p1.matrix()),
        "S": b.s,
        "p2": matrix_to_json(b.p2.matrix()),
        "x": x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::spgroup::sigma;

    #[test]
    fn matrix_round_trip() {
        let m = Matrix::from_rows(vec![vec![frac(1, 2), int(-3)], vec![int(0), frac(-7, 5)]]).unwrap();
        let v = matrix_to_json(&m);
        assert_eq!(v, json!([["1/2", "-3/1"], ["0/1", "-7/5"]]));
        assert_eq!(matrix_from_json(&v, None).unwrap(), m);
        let flat = json!(["1/2", -3, "0", "-7/5"]);
        assert_eq!(matrix_from_json(&flat, Some(2)).unwrap(), m);
        assert!(matrix_from_json(&flat, None).is_err());
        assert!(matrix_from_json(&json!([["x"]]), None).is_err());
    }

    #[test]
    fn word_round_trip() {
        let v = json!([{"type": "sigma", "S": [1, 3]}, {"type": "parabolic", "matrix": matrix_to_json(sigma(3, &[]).unwrap().matrix())}]);
        assert_eq!(word_rank(&v).unwrap(), 3);
        let w = word_from_json(&v, 3).unwrap();
        assert_eq!(word_to_json(&w), v);
        assert_eq!(word_rank(&json!([{"type": "sigma", "S": [2]}])).unwrap(), 2);
        let bad = json!([{"type": "parabolic", "matrix": matrix_to_json(sigma(1, &[1]).unwrap().matrix())}]);
        assert!(word_from_json(&bad, 1).is_err());
    }
}
