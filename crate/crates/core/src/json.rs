//! JSON mirrors of the text formats. Scalars are strings in the expression
//! grammar (`"3/4"`, `"1.5-2i"`); plain JSON numbers are accepted on input.
//! A rational entry is `{"num": [...], "den": [...]}` with coefficients from
//! the constant term up, or an expression string.

use serde_json::{json, Map, Value};

use crate::dense::Mat;
use crate::error::{Error, Result};
use crate::format::{ratfun_to_string, scalar_to_string};
use crate::parse::{parse_ratfun, parse_scalar};
use crate::poly::Poly;
use crate::ratfun::RatFun;
use crate::ratmat::RatMat;
use crate::realization::StateSpace;
use crate::scalar::{Context, Scalar};

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        column: 1,
        message: msg.into(),
    }
}

pub fn scalar_to_json<S: Scalar>(s: &S) -> Value {
    Value::String(scalar_to_string(s))
}

pub fn scalar_from_json<S: Scalar>(v: &Value) -> Result<S> {
    match v {
        Value::String(s) => parse_scalar(s),
        Value::Number(n) => parse_scalar(&n.to_string()),
        other => Err(bad(format!("expected a scalar, found {other}"))),
    }
}

fn poly_to_json<S: Scalar>(p: &Poly<S>) -> Value {
    Value::Array(p.coeffs().iter().map(scalar_to_json).collect())
}

fn poly_from_json<S: Scalar>(v: &Value) -> Result<Poly<S>> {
    let arr = v.as_array().ok_or_else(|| bad("coefficients must be an array"))?;
    Ok(Poly::new(arr.iter().map(scalar_from_json).collect::<Result<_>>()?))
}

pub fn ratfun_to_json<S: Scalar>(r: &RatFun<S>) -> Value {
    json!({ "num": poly_to_json(r.num()), "den": poly_to_json(r.den()) })
}

pub fn ratfun_from_json<S: Scalar>(v: &Value, ctx: &Context) -> Result<RatFun<S>> {
    match v {
        Value::Object(o) => {
            let num = poly_from_json(o.get("num").ok_or_else(|| bad("entry without 'num'"))?)?;
            let den = match o.get("den") {
                Some(d) => poly_from_json(d)?,
                None => Poly::one(),
            };
            RatFun::new_with(num, den, ctx)
        }
        Value::String(s) => parse_ratfun(s),
        Value::Number(n) => parse_ratfun(&n.to_string()),
        other => Err(bad(format!("expected a rational function, found {other}"))),
    }
}

fn rows(v: &Value) -> Result<&Vec<Value>> {
    v.as_array().ok_or_else(|| bad("a matrix is an array of rows"))
}

pub fn ratmat_to_json<S: Scalar>(r: &RatMat<S>) -> Value {
    Value::Array(
        (0..r.nrows())
            .map(|i| Value::Array(r.row(i).iter().map(ratfun_to_json).collect()))
            .collect(),
    )
}

pub fn ratmat_from_json<S: Scalar>(v: &Value, ctx: &Context) -> Result<RatMat<S>> {
    let parsed = rows(v)?
        .iter()
        .map(|row| {
            let row = row.as_array().ok_or_else(|| bad("each row must be an array"))?;
            row.iter().map(|e| ratfun_from_json(e, ctx)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    RatMat::new(parsed)
}

/// Entries as readable expressions, for reports.
pub fn ratmat_to_text_json<S: Scalar>(r: &RatMat<S>) -> Value {
    Value::Array(
        (0..r.nrows())
            .map(|i| Value::Array(r.row(i).iter().map(|e| Value::String(ratfun_to_string(e))).collect()))
            .collect(),
    )
}

pub fn mat_to_json<S: Scalar>(m: &Mat<S>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array(m.row(i).iter().map(scalar_to_json).collect()))
            .collect(),
    )
}

/// `rows x cols` is needed for empty matrices, which JSON cannot shape.
pub fn mat_from_json<S: Scalar>(v: &Value, rows_hint: Option<usize>, cols_hint: Option<usize>) -> Result<Mat<S>> {
    let data = rows(v)?
        .iter()
        .map(|row| {
            let row = row.as_array().ok_or_else(|| bad("each row must be an array"))?;
            row.iter().map(scalar_from_json).collect::<Result<Vec<S>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let r = data.len();
    let c = data.first().map(|row| row.len()).unwrap_or(0);
    if data.iter().any(|row| row.len() != c) {
        return Err(bad("rows of different lengths"));
    }
    if r == 0 || c == 0 {
        let r = if r == 0 { rows_hint.unwrap_or(0) } else { r };
        return Ok(Mat::zeros(r, cols_hint.unwrap_or(0)));
    }
    Ok(Mat::from_rows(data))
}

pub fn state_space_to_json<S: Scalar>(ss: &StateSpace<S>) -> Value {
    let mut o = Map::new();
    o.insert("schema".into(), json!(1));
    o.insert("states".into(), json!(ss.order()));
    o.insert("inputs".into(), json!(ss.inputs()));
    o.insert("outputs".into(), json!(ss.outputs()));
    o.insert("A".into(), mat_to_json(&ss.a));
    o.insert("E".into(), mat_to_json(&ss.e));
    o.insert("B".into(), mat_to_json(&ss.b));
    o.insert("C".into(), mat_to_json(&ss.c));
    o.insert("D".into(), mat_to_json(&ss.d));
    Value::Object(o)
}

pub fn state_space_from_json<S: Scalar>(v: &Value) -> Result<StateSpace<S>> {
    let get = |k: &str| v.get(k).ok_or_else(|| bad(format!("state space without '{k}'")));
    let d: Mat<S> = mat_from_json(get("D")?, None, None)?;
    let (m, n) = match (v.get("outputs"), v.get("inputs")) {
        (Some(m), Some(n)) => (
            m.as_u64().ok_or_else(|| bad("'outputs' must be a count"))? as usize,
            n.as_u64().ok_or_else(|| bad("'inputs' must be a count"))? as usize,
        ),
        _ => (d.nrows(), d.ncols()),
    };
    let d = if d.nrows() == 0 { Mat::zeros(m, n) } else { d };
    let a: Mat<S> = mat_from_json(get("A")?, Some(0), Some(0))?;
    let q = a.nrows();
    let e = match v.get("E") {
        Some(e) => mat_from_json(e, Some(q), Some(q))?,
        None => Mat::identity(q),
    };
    StateSpace::new(
        a,
        e,
        mat_from_json(get("B")?, Some(q), Some(n))?,
        mat_from_json(get("C")?, Some(m), Some(q))?,
        d,
    )
}

/// Coefficients (M0, M1) of L(λ) = M0 + λ M1, from `{"M0": .., "M1": ..}` or
/// from a state space, which stands for its system matrix.
pub fn pencil_from_json<S: Scalar>(v: &Value) -> Result<(Mat<S>, Mat<S>)> {
    if let Some(m0) = v.get("M0") {
        let m0: Mat<S> = mat_from_json(m0, None, None)?;
        let m1 = match v.get("M1") {
            Some(m1) => mat_from_json(m1, Some(m0.nrows()), Some(m0.ncols()))?,
            None => Mat::zeros(m0.nrows(), m0.ncols()),
        };
        if m1.nrows() != m0.nrows() || m1.ncols() != m0.ncols() {
            return Err(Error::Dimension(format!(
                "M0 is {}x{}, M1 is {}x{}",
                m0.nrows(),
                m0.ncols(),
                m1.nrows(),
                m1.ncols()
            )));
        }
        return Ok((m0, m1));
    }
    if v.get("A").is_some() {
        let sm = state_space_from_json::<S>(v)?.system_matrix();
        return Ok((sm.m0, sm.m1));
    }
    Err(bad("a pencil needs 'M0' and 'M1', or a state space"))
}

pub fn pencil_to_json<S: Scalar>(m0: &Mat<S>, m1: &Mat<S>) -> Value {
    json!({ "schema": 1, "M0": mat_to_json(m0), "M1": mat_to_json(m1) })
}

/// Reads a JSON document, reporting the position of syntax errors.
pub fn parse_json(src: &str) -> Result<Value> {
    serde_json::from_str(src).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}
