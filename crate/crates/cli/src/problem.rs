//! Problem-file schema: lattice, vectors, optional stability parameter and
//! task parameters, validated at parse time with JSON-pointer error paths.

use mukai_walls::mukai::{MukaiVector, NSLattice};
use mukai_walls::stability::StabParam;
use mukai_walls::walls::Bounds;
use num_bigint::BigInt;
use serde_json::{Map, Value};

use crate::json::*;

#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub lattice: NSLattice,
    pub vector: Option<MukaiVector>,
    pub vector2: Option<MukaiVector>,
    pub stab: Option<StabParam>,
    pub bounds: Option<Bounds>,
    pub k_final: Option<BigInt>,
    pub n: Option<u64>,
    pub k: Option<u64>,
    pub count: Option<u64>,
}

pub fn lattice_from_value(v: &Value, at: &Path) -> Result<NSLattice, ParseError> {
    let obj = as_object(v, at)?;
    deny_unknown(obj, &["gram", "labels"], at)?;
    let gram_at = at.key("gram");
    let gram_val = as_array(get(obj, "gram", at)?, &gram_at)?;
    let mut gram = Vec::with_capacity(gram_val.len());
    for (i, row) in gram_val.iter().enumerate() {
        let row_at = gram_at.index(i);
        let row_val = as_array(row, &row_at)?;
        let mut out = Vec::with_capacity(row_val.len());
        for (j, entry) in row_val.iter().enumerate() {
            out.push(bigint(entry, &row_at.index(j))?);
        }
        gram.push(out);
    }
    let labels_at = at.key("labels");
    let labels_val = as_array(get(obj, "labels", at)?, &labels_at)?;
    let mut labels = Vec::with_capacity(labels_val.len());
    for (i, l) in labels_val.iter().enumerate() {
        labels.push(string_from(l, &labels_at.index(i))?);
    }
    NSLattice::new(gram, labels).map_err(|e| gram_at.err(e.to_string()))
}

pub fn lattice_to_value(lat: &NSLattice) -> Value {
    let mut obj = Map::new();
    obj.insert(
        "gram".to_owned(),
        Value::Array(
            lat.gram()
                .iter()
                .map(|row| Value::Array(row.iter().map(bigint_to_value).collect()))
                .collect(),
        ),
    );
    obj.insert(
        "labels".to_owned(),
        Value::Array(
            lat.labels()
                .iter()
                .map(|l| Value::String(l.clone()))
                .collect(),
        ),
    );
    Value::Object(obj)
}

pub fn vector_from_value(v: &Value, at: &Path) -> Result<MukaiVector, ParseError> {
    let obj = as_object(v, at)?;
    deny_unknown(obj, &["r", "delta", "s"], at)?;
    let r = bigint(get(obj, "r", at)?, &at.key("r"))?;
    let delta_at = at.key("delta");
    let delta_val = as_array(get(obj, "delta", at)?, &delta_at)?;
    let mut delta = Vec::with_capacity(delta_val.len());
    for (i, d) in delta_val.iter().enumerate() {
        delta.push(bigint(d, &delta_at.index(i))?);
    }
    let s = bigint(get(obj, "s", at)?, &at.key("s"))?;
    Ok(MukaiVector::new(r, delta, s))
}

pub fn vector_to_value(v: &MukaiVector) -> Value {
    let mut obj = Map::new();
    obj.insert("r".to_owned(), bigint_to_value(&v.r));
    obj.insert(
        "delta".to_owned(),
        Value::Array(v.delta.iter().map(bigint_to_value).collect()),
    );
    obj.insert("s".to_owned(), bigint_to_value(&v.s));
    Value::Object(obj)
}

pub fn stab_from_value(v: &Value, at: &Path) -> Result<StabParam, ParseError> {
    let obj = as_object(v, at)?;
    deny_unknown(obj, &["d", "alpha", "beta"], at)?;
    let d = bigint(get(obj, "d", at)?, &at.key("d"))?;
    let alpha = rational(get(obj, "alpha", at)?, &at.key("alpha"))?;
    let beta = rational(get(obj, "beta", at)?, &at.key("beta"))?;
    StabParam::new(d, alpha, beta).map_err(|e| at.err(e.to_string()))
}

pub fn stab_to_value(p: &StabParam) -> Value {
    let mut obj = Map::new();
    obj.insert("d".to_owned(), bigint_to_value(&p.d));
    obj.insert("alpha".to_owned(), rational_to_value(&p.alpha));
    obj.insert("beta".to_owned(), rational_to_value(&p.beta));
    Value::Object(obj)
}

pub fn bounds_from_value(v: &Value, at: &Path) -> Result<Bounds, ParseError> {
    let obj = as_object(v, at)?;
    deny_unknown(obj, &["c_max", "s_max"], at)?;
    let c_max = u64_from(get(obj, "c_max", at)?, &at.key("c_max"))?;
    let s_max = u64_from(get(obj, "s_max", at)?, &at.key("s_max"))?;
    Ok(Bounds { c_max, s_max })
}

pub fn bounds_to_value(b: &Bounds) -> Value {
    let mut obj = Map::new();
    obj.insert("c_max".to_owned(), Value::from(b.c_max));
    obj.insert("s_max".to_owned(), Value::from(b.s_max));
    Value::Object(obj)
}

/// Parses and validates a problem file: schema, unknown-field rejection,
/// and the nested type invariants (symmetric even Gram, positive
/// denominators, vector/lattice rank agreement).
pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let root = parse_value(text)?;
    let at = Path::root();
    let obj = as_object(&root, &at)?;
    deny_unknown(
        obj,
        &[
            "lattice", "vector", "vector2", "stab", "bounds", "k_final", "n", "k", "count",
        ],
        &at,
    )?;
    let lattice = lattice_from_value(get(obj, "lattice", &at)?, &at.key("lattice"))?;
    let opt_vec = |key: &str| -> Result<Option<MukaiVector>, ParseError> {
        match obj.get(key) {
            Some(v) => {
                let at_v = at.key(key);
                let vec = vector_from_value(v, &at_v)?;
                if vec.delta.len() != lattice.rank() {
                    return Err(at_v
                        .key("delta")
                        .err(format!("expected {} divisor coordinates", lattice.rank())));
                }
                Ok(Some(vec))
            }
            None => Ok(None),
        }
    };
    let vector = opt_vec("vector")?;
    let vector2 = opt_vec("vector2")?;
    let stab = match obj.get("stab") {
        Some(v) => Some(stab_from_value(v, &at.key("stab"))?),
        None => None,
    };
    let bounds = match obj.get("bounds") {
        Some(v) => Some(bounds_from_value(v, &at.key("bounds"))?),
        None => None,
    };
    let k_final = match obj.get("k_final") {
        Some(v) => Some(bigint(v, &at.key("k_final"))?),
        None => None,
    };
    let n = match obj.get("n") {
        Some(v) => Some(u64_from(v, &at.key("n"))?),
        None => None,
    };
    let k = match obj.get("k") {
        Some(v) => Some(u64_from(v, &at.key("k"))?),
        None => None,
    };
    let count = match obj.get("count") {
        Some(v) => Some(u64_from(v, &at.key("count"))?),
        None => None,
    };
    Ok(ProblemFile {
        lattice,
        vector,
        vector2,
        stab,
        bounds,
        k_final,
        n,
        k,
        count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_minimal_problem() {
        let text = r#"{"lattice":{"gram":[[2]],"labels":["H"]},"vector":{"r":1,"delta":[0],"s":-1}}"#;
        let p = parse_problem(text).unwrap();
        assert_eq!(p.lattice.rank1_degree(), Some(BigInt::from(1)));
        assert_eq!(p.vector.unwrap(), MukaiVector::from_i64(1, &[0], -1));
    }

    #[test]
    fn odd_diagonal_rejected() {
        let text = r#"{"lattice":{"gram":[[3]],"labels":["H"]},"vector":{"r":1,"delta":[0],"s":-1}}"#;
        let err = parse_problem(text).unwrap_err();
        assert_eq!(err.pointer, "/lattice/gram");
        assert!(err.message.contains("even lattice"), "{}", err.message);
    }

    #[test]
    fn zero_denominator_rejected() {
        let text = r#"{"lattice":{"gram":[[2]],"labels":["H"]},"stab":{"d":1,"alpha":[1,0],"beta":[0,1]}}"#;
        let err = parse_problem(text).unwrap_err();
        assert_eq!(err.pointer, "/stab/alpha/1");
    }

    #[test]
    fn unknown_field_rejected() {
        let text = r#"{"lattice":{"gram":[[2]],"labels":["H"]},"extra":1}"#;
        let err = parse_problem(text).unwrap_err();
        assert_eq!(err.pointer, "/extra");
    }

    #[test]
    fn rank_mismatch_rejected() {
        let text = r#"{"lattice":{"gram":[[2]],"labels":["H"]},"vector":{"r":1,"delta":[0,0],"s":1}}"#;
        let err = parse_problem(text).unwrap_err();
        assert_eq!(err.pointer, "/vector/delta");
    }
}
