//! Instance files and value serialization.
//!
//! An instance is a JSON document with fields `n`, `Q` (n rows of n
//! numbers), optional `q` (defaults to zeros), `lower` and `upper`.
//! Numbers are JSON integers or decimals, or exact-rational strings of the
//! form `"p/d"`. Decimals are read by their literal decimal expansion in
//! exact mode, so `0.1` means exactly one tenth; rational strings are
//! rejected in float mode.

use std::str::FromStr;

use num::bigint::BigInt;
use num::pow::Pow;
use num::One;
use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::model::{ModelError, QpInstance};
use crate::matrix::Matrix;
use crate::scalar::{Rational, Scalar};

/// Which scalar type a run works in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithmeticMode {
    Exact,
    Float,
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed instance file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad number {text:?} in {context}: {reason}")]
    BadNumber {
        context: &'static str,
        text: String,
        reason: &'static str,
    },
    #[error("rational literal {text:?} in {context} requires exact mode")]
    RationalInFloatMode { context: &'static str, text: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("cannot read instance: {0}")]
    Read(#[from] std::io::Error),
}

#[derive(Deserialize)]
struct RawInstance {
    n: usize,
    #[serde(rename = "Q")]
    quadratic: Vec<Vec<Value>>,
    q: Option<Vec<Value>>,
    lower: Vec<Value>,
    upper: Vec<Value>,
}

/// An instance in either arithmetic mode.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedInstance {
    Exact(QpInstance<Rational>),
    Float(QpInstance<f64>),
}

fn pow10(exp: u32) -> BigInt {
    BigInt::from(10u32).pow(exp)
}

/// Exact value of a decimal literal, exponent notation included.
fn rational_from_decimal(text: &str, context: &'static str) -> Result<Rational, IoError> {
    let bad = |reason: &'static str| IoError::BadNumber {
        context,
        text: text.to_string(),
        reason,
    };
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = text[pos + 1..].parse().map_err(|_| bad("unreadable exponent"))?;
            (&text[..pos], exp)
        }
        None => (text, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    if frac_part.contains(['+', '-']) {
        return Err(bad("sign inside fraction"));
    }
    let digits: String = [int_part, frac_part].concat();
    let numer = BigInt::from_str(&digits).map_err(|_| bad("unreadable digits"))?;
    let mut value = Rational::new(numer, pow10(frac_part.len() as u32));
    if exponent >= 0 {
        value *= Rational::from_integer(pow10(exponent as u32));
    } else {
        value /= Rational::from_integer(pow10(exponent.unsigned_abs()));
    }
    Ok(value)
}

/// Exact value of a `"p/d"` string.
fn rational_from_fraction_str(text: &str, context: &'static str) -> Result<Rational, IoError> {
    let bad = |reason: &'static str| IoError::BadNumber {
        context,
        text: text.to_string(),
        reason,
    };
    let (numer_text, denom_text) = text.split_once('/').ok_or_else(|| bad("expected p/d"))?;
    let numer = BigInt::from_str(numer_text.trim()).map_err(|_| bad("unreadable numerator"))?;
    let denom = BigInt::from_str(denom_text.trim()).map_err(|_| bad("unreadable denominator"))?;
    if denom <= BigInt::from(0) {
        return Err(bad("denominator must be positive"));
    }
    Ok(Rational::new(numer, denom))
}

fn value_to_rational(v: &Value, context: &'static str) -> Result<Rational, IoError> {
    match v {
        Value::Number(num) => rational_from_decimal(&num.to_string(), context),
        Value::String(text) => rational_from_fraction_str(text, context),
        other => Err(IoError::BadNumber {
            context,
            text: other.to_string(),
            reason: "expected a number or a \"p/d\" string",
        }),
    }
}

fn value_to_f64(v: &Value, context: &'static str) -> Result<f64, IoError> {
    match v {
        Value::Number(num) => num.as_f64().ok_or(IoError::BadNumber {
            context,
            text: num.to_string(),
            reason: "not representable as a double",
        }),
        Value::String(text) => Err(IoError::RationalInFloatMode {
            context,
            text: text.clone(),
        }),
        other => Err(IoError::BadNumber {
            context,
            text: other.to_string(),
            reason: "expected a number",
        }),
    }
}

/// Rectangularity guard; square-ness and sizes are instance validation.
fn matrix_from_rows<S: Scalar>(rows: Vec<Vec<S>>) -> Result<Matrix<S>, IoError> {
    let ncols = rows.first().map_or(0, Vec::len);
    for row in &rows {
        if row.len() != ncols {
            return Err(ModelError::DimensionMismatch {
                what: "Q row",
                expected: ncols,
                got: row.len(),
            }
            .into());
        }
    }
    Ok(Matrix::from_rows(rows))
}

/// Parses an instance document in the requested mode.
pub fn parse_instance(text: &str, mode: ArithmeticMode) -> Result<ParsedInstance, IoError> {
    let raw: RawInstance = serde_json::from_str(text)?;
    let n = raw.n;
    let zeros = vec![Value::from(0); n];
    let linear_raw = raw.q.as_deref().unwrap_or(&zeros);
    match mode {
        ArithmeticMode::Exact => {
            let mut rows = Vec::with_capacity(raw.quadratic.len());
            for row in &raw.quadratic {
                let mut out = Vec::with_capacity(row.len());
                for v in row {
                    out.push(value_to_rational(v, "Q")?);
                }
                rows.push(out);
            }
            let quadratic = matrix_from_rows(rows)?;
            let linear = linear_raw
                .iter()
                .map(|v| value_to_rational(v, "q"))
                .collect::<Result<Vec<_>, _>>()?;
            let lower = raw
                .lower
                .iter()
                .map(|v| value_to_rational(v, "lower"))
                .collect::<Result<Vec<_>, _>>()?;
            let upper = raw
                .upper
                .iter()
                .map(|v| value_to_rational(v, "upper"))
                .collect::<Result<Vec<_>, _>>()?;
            if lower.len() != n {
                return Err(ModelError::DimensionMismatch {
                    what: "lower",
                    expected: n,
                    got: lower.len(),
                }
                .into());
            }
            Ok(ParsedInstance::Exact(QpInstance::new(
                quadratic, linear, lower, upper,
            )?))
        }
        ArithmeticMode::Float => {
            let mut rows = Vec::with_capacity(raw.quadratic.len());
            for row in &raw.quadratic {
                let mut out = Vec::with_capacity(row.len());
                for v in row {
                    out.push(value_to_f64(v, "Q")?);
                }
                rows.push(out);
            }
            let quadratic = matrix_from_rows(rows)?;
            let linear = linear_raw
                .iter()
                .map(|v| value_to_f64(v, "q"))
                .collect::<Result<Vec<_>, _>>()?;
            let lower = raw
                .lower
                .iter()
                .map(|v| value_to_f64(v, "lower"))
                .collect::<Result<Vec<_>, _>>()?;
            let upper = raw
                .upper
                .iter()
                .map(|v| value_to_f64(v, "upper"))
                .collect::<Result<Vec<_>, _>>()?;
            if lower.len() != n {
                return Err(ModelError::DimensionMismatch {
                    what: "lower",
                    expected: n,
                    got: lower.len(),
                }
                .into());
            }
            Ok(ParsedInstance::Float(QpInstance::new(
                quadratic, linear, lower, upper,
            )?))
        }
    }
}

/// JSON value for one exact scalar: an integer when it fits, a `"p/d"`
/// string otherwise.
pub fn rational_to_value(r: &Rational) -> Value {
    if r.denom().is_one() {
        if let Some(as_i64) = num::ToPrimitive::to_i64(r.numer()) {
            return Value::from(as_i64);
        }
        return Value::String(format!("{}/1", r.numer()));
    }
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

/// JSON value for a scalar of either mode.
pub fn scalar_to_value<S: Scalar>(v: &S) -> Value {
    if S::EXACT {
        rational_to_value(&v.to_rational())
    } else {
        serde_json::Number::from_f64(v.to_f64_lossy())
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }
}

/// Serializes an exact instance; parsing the result reproduces it bit for
/// bit in exact mode.
pub fn serialize_instance(inst: &QpInstance<Rational>) -> String {
    let n = inst.n();
    let quadratic: Vec<Value> = (0..n)
        .map(|i| Value::Array((0..n).map(|j| rational_to_value(&inst.quadratic()[(i, j)])).collect()))
        .collect();
    let vector = |vals: &[Rational]| Value::Array(vals.iter().map(rational_to_value).collect());
    let doc = serde_json::json!({
        "n": n,
        "Q": Value::Array(quadratic),
        "q": vector(inst.linear()),
        "lower": vector(inst.lower()),
        "upper": vector(inst.upper()),
    });
    serde_json::to_string_pretty(&doc).expect("instance document serializes")
}
