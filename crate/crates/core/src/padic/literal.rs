//! Scalar literal conventions shared by fixtures and reports: rational
//! strings `"a/b"`, or digit records `{"val": v, "digits": [...], "prec": M}`.

use serde_json::{json, Value};

use super::scalar::{Context, Padic, INF};
use crate::error::{Error, Result};
use crate::rational::format_rational;

pub fn parse_scalar(ctx: &Context, value: &Value) -> Result<Padic> {
    match value {
        Value::String(s) => ctx.parse(s),
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| Error::InvalidInput(format!("scalar must be an integer: {n}")))?;
            Ok(ctx.int(i))
        }
        Value::Object(map) => {
            let get_i64 = |k: &str| -> Result<Option<i64>> {
                match map.get(k) {
                    None | Some(Value::Null) => Ok(None),
                    Some(v) => v
                        .as_i64()
                        .map(Some)
                        .ok_or_else(|| Error::InvalidInput(format!("field {k:?} must be an integer"))),
                }
            };
            let prec = get_i64("prec")?.unwrap_or(ctx.precision);
            let digits: Vec<u32> = match map.get("digits") {
                Some(Value::Array(ds)) => ds
                    .iter()
                    .map(|d| {
                        d.as_u64()
                            .map(|x| x as u32)
                            .ok_or_else(|| Error::InvalidInput("digits must be nonnegative integers".into()))
                    })
                    .collect::<Result<_>>()?,
                None => Vec::new(),
                _ => return Err(Error::InvalidInput("digits must be an array".into())),
            };
            match get_i64("val")? {
                None => Ok(if digits.is_empty() && map.get("prec").is_none() {
                    Padic::zero(ctx.p)
                } else {
                    Padic::approx_zero(ctx.p, prec)
                }),
                Some(v) => Padic::from_digits(ctx.p, v, &digits, prec),
            }
        }
        _ => Err(Error::InvalidInput(format!("unsupported scalar literal: {value}"))),
    }
}

/// Rational string when the value has a small-height rational representative,
/// digit record otherwise.
pub fn scalar_to_json(x: &Padic) -> Value {
    if x.is_exact_zero() {
        return Value::String("0".into());
    }
    if x.is_zero() {
        return json!({ "val": Value::Null, "digits": [], "prec": x.precision() });
    }
    if let Some(q) = x.reconstruct() {
        return Value::String(format_rational(&q));
    }
    digit_record(x)
}

pub fn digit_record(x: &Padic) -> Value {
    if x.is_zero() {
        let prec = if x.precision() == INF { Value::Null } else { json!(x.precision()) };
        return json!({ "val": Value::Null, "digits": [], "prec": prec });
    }
    json!({
        "val": x.valuation().unwrap(),
        "digits": x.unit_digits(),
        "prec": x.precision(),
    })
}
