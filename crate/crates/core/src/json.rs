//! JSON helpers shared by every module.
//!
//! Integers are written as JSON numbers when they fit in an `i64` and as
//! decimal strings otherwise; both forms are accepted on input. Objects are
//! built from [`serde_json::Value`], whose maps keep keys sorted, so reports
//! are byte-stable.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::Value;

/// Error raised while decoding a JSON document into a domain value.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct DecodeError {
    pub path: String,
    pub message: String,
}

impl DecodeError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        DecodeError {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Prefixes the error path with `outer`.
    pub fn within(self, outer: &str) -> Self {
        let path = if self.path.is_empty() {
            outer.to_string()
        } else if self.path.starts_with('[') {
            format!("{outer}{}", self.path)
        } else {
            format!("{outer}.{}", self.path)
        };
        DecodeError { path, ..self }
    }
}

pub fn int(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(n.to_string()),
    }
}

pub fn ints<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> Value {
    Value::Array(xs.into_iter().map(int).collect())
}

pub fn parse_int(v: &Value) -> Result<BigInt, DecodeError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(DecodeError::new(
                    "",
                    format!("expected an integer, found {n}"),
                ))
            }
        }
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| DecodeError::new("", format!("expected an integer, found {s:?}"))),
        other => Err(DecodeError::new(
            "",
            format!("expected an integer, found {other}"),
        )),
    }
}

/// A rational number, written as an integer when it is one and as the
/// string `"p/q"` otherwise.
pub fn rational(q: &BigRational) -> Value {
    if q.is_integer() {
        int(q.numer())
    } else {
        Value::String(format!("{}/{}", q.numer(), q.denom()))
    }
}

/// Accepts an integer, or a string `"p"` or `"p/q"` with `q ≠ 0`.
pub fn parse_rational(v: &Value) -> Result<BigRational, DecodeError> {
    if let Value::String(s) = v {
        let bad = || DecodeError::new("", format!("expected a rational, found {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(DecodeError::new("", "zero denominator"));
        }
        return Ok(BigRational::new(num, den));
    }
    parse_int(v)
        .map(BigRational::from_integer)
        .map_err(|_| DecodeError::new("", format!("expected a rational, found {v}")))
}

pub fn parse_i64(v: &Value) -> Result<i64, DecodeError> {
    parse_int(v)?
        .to_i64()
        .ok_or_else(|| DecodeError::new("", "integer out of range"))
}

pub fn array(v: &Value) -> Result<&Vec<Value>, DecodeError> {
    v.as_array()
        .ok_or_else(|| DecodeError::new("", format!("expected an array, found {}", kind(v))))
}

pub fn parse_int_array(v: &Value, len: Option<usize>) -> Result<Vec<BigInt>, DecodeError> {
    let items = array(v)?;
    if let Some(n) = len {
        if items.len() != n {
            return Err(DecodeError::new(
                "",
                format!("expected {n} entries, found {}", items.len()),
            ));
        }
    }
    items
        .iter()
        .enumerate()
        .map(|(i, x)| parse_int(x).map_err(|e| e.within(&format!("[{i}]"))))
        .collect()
}

pub fn parse_i64_array(v: &Value) -> Result<Vec<i64>, DecodeError> {
    array(v)?
        .iter()
        .enumerate()
        .map(|(i, x)| parse_i64(x).map_err(|e| e.within(&format!("[{i}]"))))
        .collect()
}

/// Required field of a JSON object.
pub fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value, DecodeError> {
    let obj = v
        .as_object()
        .ok_or_else(|| DecodeError::new("", format!("expected an object, found {}", kind(v))))?;
    obj.get(name)
        .ok_or_else(|| DecodeError::new(name, "missing field"))
}

/// Optional field; JSON `null` counts as absent.
pub fn opt_field<'a>(v: &'a Value, name: &str) -> Option<&'a Value> {
    v.get(name).filter(|x| !x.is_null())
}

pub fn parse_str(v: &Value) -> Result<&str, DecodeError> {
    v.as_str()
        .ok_or_else(|| DecodeError::new("", format!("expected a string, found {}", kind(v))))
}

pub fn parse_bool(v: &Value) -> Result<bool, DecodeError> {
    v.as_bool()
        .ok_or_else(|| DecodeError::new("", format!("expected a boolean, found {}", kind(v))))
}

fn kind(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

/// Serialises `v` with sorted keys and no insignificant whitespace, plus a
/// trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("Value always serialises");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn big_integers_round_trip_as_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let v = int(&big);
        assert_eq!(v, json!("123456789012345678901234567890"));
        assert_eq!(parse_int(&v).unwrap(), big);
        assert_eq!(int(&BigInt::from(-7)), json!(-7));
        assert_eq!(parse_int(&json!(-7)).unwrap(), BigInt::from(-7));
    }

    #[test]
    fn rationals_round_trip() {
        let q = BigRational::new(BigInt::from(6), BigInt::from(-4));
        assert_eq!(rational(&q), json!("-3/2"));
        assert_eq!(parse_rational(&json!("-3/2")).unwrap(), q);
        assert_eq!(
            parse_rational(&json!(5)).unwrap(),
            BigRational::from_integer(5.into())
        );
        assert_eq!(rational(&BigRational::from_integer(5.into())), json!(5));
        assert!(parse_rational(&json!("1/0")).is_err());
        assert!(parse_rational(&json!("a/2")).is_err());
    }

    #[test]
    fn rejects_non_integers() {
        assert!(parse_int(&json!(1.5)).is_err());
        assert!(parse_int(&json!("x")).is_err());
        assert!(parse_int(&json!([1])).is_err());
    }

    #[test]
    fn paths_compose() {
        let e = DecodeError::new("", "bad").within("[2]").within("points");
        assert_eq!(e.path, "points[2]");
        let e = DecodeError::new("a", "bad").within("outer");
        assert_eq!(e.path, "outer.a");
    }

    #[test]
    fn canonical_output_sorts_keys() {
        let v = json!({"b": 1, "a": [1, 2]});
        assert_eq!(to_canonical_string(&v), "{\"a\":[1,2],\"b\":1}\n");
    }
}
