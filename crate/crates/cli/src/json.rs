//! Value-level JSON helpers: exact integers and rationals, JSON-pointer
//! error paths, and canonical (sorted-key, compact) emission.
//!
//! Numbers round-trip exactly: integers of any size are kept as JSON
//! numbers with their full digit strings, rationals are `[num, den]` pairs
//! with positive denominator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde_json::{Map, Number, Value};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.pointer, self.message)
    }
}

impl std::error::Error for ParseError {}

/// JSON-pointer path under construction.
#[derive(Debug, Clone, Default)]
pub struct Path(Vec<String>);

impl Path {
    pub fn root() -> Self {
        Path(Vec::new())
    }

    pub fn key(&self, k: &str) -> Path {
        let mut p = self.0.clone();
        p.push(k.replace('~', "~0").replace('/', "~1"));
        Path(p)
    }

    pub fn index(&self, i: usize) -> Path {
        let mut p = self.0.clone();
        p.push(i.to_string());
        Path(p)
    }

    pub fn pointer(&self) -> String {
        if self.0.is_empty() {
            "/".to_owned()
        } else {
            format!("/{}", self.0.join("/"))
        }
    }

    pub fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            pointer: self.pointer(),
            message: message.into(),
        }
    }
}

pub fn as_object<'a>(v: &'a Value, at: &Path) -> Result<&'a Map<String, Value>, ParseError> {
    v.as_object().ok_or_else(|| at.err("expected an object"))
}

pub fn as_array<'a>(v: &'a Value, at: &Path) -> Result<&'a Vec<Value>, ParseError> {
    v.as_array().ok_or_else(|| at.err("expected an array"))
}

pub fn get<'a>(
    obj: &'a Map<String, Value>,
    key: &str,
    at: &Path,
) -> Result<&'a Value, ParseError> {
    obj.get(key)
        .ok_or_else(|| at.err(format!("missing required field \"{key}\"")))
}

/// Rejects fields outside the allowed set, pointing at the first offender.
pub fn deny_unknown(
    obj: &Map<String, Value>,
    allowed: &[&str],
    at: &Path,
) -> Result<(), ParseError> {
    for k in obj.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(at.key(k).err("unknown field"));
        }
    }
    Ok(())
}

pub fn bigint(v: &Value, at: &Path) -> Result<BigInt, ParseError> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string())
            .map_err(|_| at.err(format!("expected an integer, got {n}"))),
        _ => Err(at.err("expected an integer")),
    }
}

pub fn bigint_to_value(n: &BigInt) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integer digits form a JSON number"))
}

pub fn u64_from(v: &Value, at: &Path) -> Result<u64, ParseError> {
    let n = bigint(v, at)?;
    u64::try_from(&n).map_err(|_| at.err("expected a non-negative integer in u64 range"))
}

pub fn bool_from(v: &Value, at: &Path) -> Result<bool, ParseError> {
    v.as_bool().ok_or_else(|| at.err("expected a boolean"))
}

pub fn string_from(v: &Value, at: &Path) -> Result<String, ParseError> {
    v.as_str()
        .map(str::to_owned)
        .ok_or_else(|| at.err("expected a string"))
}

/// `[numerator, denominator]` with a positive denominator.
pub fn rational(v: &Value, at: &Path) -> Result<BigRational, ParseError> {
    let arr = as_array(v, at)?;
    if arr.len() != 2 {
        return Err(at.err("expected a [numerator, denominator] pair"));
    }
    let num = bigint(&arr[0], &at.index(0))?;
    let den = bigint(&arr[1], &at.index(1))?;
    if !den.is_positive() {
        return Err(at.index(1).err("denominator must be positive"));
    }
    Ok(BigRational::new(num, den))
}

pub fn rational_to_value(r: &BigRational) -> Value {
    Value::Array(vec![
        bigint_to_value(r.numer()),
        bigint_to_value(r.denom()),
    ])
}

/// Canonical text form: object keys sorted (the default map is ordered),
/// no whitespace variance.
pub fn to_canonical_string(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON value serializes")
}

pub fn parse_value(text: &str) -> Result<Value, ParseError> {
    serde_json::from_str(text).map_err(|e| Path::root().err(format!("malformed JSON: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointer_paths() {
        let p = Path::root().key("lattice").key("gram").index(0).index(1);
        assert_eq!(p.pointer(), "/lattice/gram/0/1");
        let esc = Path::root().key("a/b~c");
        assert_eq!(esc.pointer(), "/a~1b~0c");
    }

    #[test]
    fn huge_integers_round_trip() {
        let n = BigInt::from_str("123456789012345678901234567890123456789").unwrap();
        let v = bigint_to_value(&n);
        let back = bigint(&v, &Path::root()).unwrap();
        assert_eq!(n, back);
        let text = to_canonical_string(&v);
        let reparsed = parse_value(&text).unwrap();
        assert_eq!(bigint(&reparsed, &Path::root()).unwrap(), n);
    }

    #[test]
    fn rational_validation() {
        let ok = parse_value("[3, 4]").unwrap();
        assert_eq!(
            rational(&ok, &Path::root()).unwrap(),
            BigRational::new(BigInt::from(3), BigInt::from(4))
        );
        let zero_den = parse_value("[1, 0]").unwrap();
        let err = rational(&zero_den, &Path::root()).unwrap_err();
        assert_eq!(err.pointer, "/1");
        let neg_den = parse_value("[1, -2]").unwrap();
        assert!(rational(&neg_den, &Path::root()).is_err());
        let float = parse_value("[1.5, 2]").unwrap();
        assert!(rational(&float, &Path::root()).is_err());
    }

    #[test]
    fn canonical_output_sorts_keys() {
        let v = parse_value("{\"z\": 1, \"a\": 2}").unwrap();
        assert_eq!(to_canonical_string(&v), "{\"a\":2,\"z\":1}");
    }
}
