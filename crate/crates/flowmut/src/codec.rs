//! Typed conversion between JSON and runtime values.
//!
//! JSON alone cannot tell a pair from a two-element list, so decoding is
//! driven by the element type declared in the program.

use flowmut_core::{Value, ValueType};
use serde_json::Value as Json;

pub fn decode(json: &Json, ty: &ValueType) -> Result<Value, String> {
    match (ty, json) {
        (_, Json::Null) => Ok(Value::Null),
        (ValueType::Int, Json::Number(n)) if !n.is_f64() => {
            n.as_i64().map(Value::Int).ok_or_else(|| format!("{n} does not fit in a 64-bit int"))
        }
        (ValueType::Float, Json::Number(n)) if n.is_f64() => Ok(Value::Float(n.as_f64().unwrap_or(f64::NAN))),
        (ValueType::Bool, Json::Bool(b)) => Ok(Value::Bool(*b)),
        (ValueType::Str, Json::String(s)) => Ok(Value::Str(s.clone())),
        (ValueType::Pair(k, v), Json::Array(items)) if items.len() == 2 => {
            Ok(Value::pair(decode(&items[0], k)?, decode(&items[1], v)?))
        }
        (ValueType::ListOf(e), Json::Array(items)) => {
            items.iter().map(|i| decode(i, e)).collect::<Result<_, _>>().map(Value::List)
        }
        (ValueType::Float, Json::Number(n)) => Err(format!("expected float, found {n} (floats need a decimal point)")),
        (ValueType::Int, Json::Number(n)) => Err(format!("expected int, found {n}")),
        _ => Err(format!("expected {ty}, found {json}")),
    }
}

pub fn decode_list(json: &Json, ty: &ValueType) -> Result<Vec<Value>, String> {
    match json {
        Json::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, j)| decode(j, ty).map_err(|e| format!("element {i}: {e}")))
            .collect(),
        other => Err(format!("expected a list of {ty}, found {other}")),
    }
}

/// JSON form of a value. Non-finite floats become strings.
pub fn encode(v: &Value) -> Json {
    match v {
        Value::Int(i) => Json::from(*i),
        Value::Float(f) => serde_json::Number::from_f64(*f).map(Json::Number).unwrap_or_else(|| Json::String(f.to_string())),
        Value::Bool(b) => Json::Bool(*b),
        Value::Str(s) => Json::String(s.clone()),
        Value::Pair(k, v) => Json::Array(vec![encode(k), encode(v)]),
        Value::List(items) => Json::Array(items.iter().map(encode).collect()),
        Value::Null => Json::Null,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn decimal_point_decides_float() {
        assert_eq!(decode(&json!(1.0), &ValueType::Float).unwrap(), Value::Float(1.0));
        assert!(decode(&json!(1), &ValueType::Float).is_err());
        assert!(decode(&json!(1.5), &ValueType::Int).is_err());
    }

    #[test]
    fn pairs_and_lists_follow_the_type() {
        let ty = ValueType::pair(ValueType::Str, ValueType::list(ValueType::Int));
        let v = decode(&json!(["a", [1, 2]]), &ty).unwrap();
        assert_eq!(v, Value::pair(Value::str("a"), Value::List(vec![Value::Int(1), Value::Int(2)])));
        assert_eq!(encode(&v), json!(["a", [1, 2]]));
        assert!(decode(&json!(["a", 1, 2]), &ty).is_err());
    }
}
