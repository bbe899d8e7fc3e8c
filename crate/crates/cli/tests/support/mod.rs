//! Validation against the draft-07 keywords used by the shipped schemas:
//! `type`, `properties`, `required`, `additionalProperties`, `items`,
//! `minItems`, `maxItems`, `enum`, `oneOf`, `pattern` and `minimum`.

use serde_json::{Map, Value};

pub fn validate(schema: &Value, v: &Value) -> Vec<String> {
    let mut errors = Vec::new();
    check(schema, v, "", &mut errors);
    errors
}

fn type_matches(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "number" => v.is_number(),
        "integer" => v.is_i64() || v.is_u64(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        other => panic!("unsupported type {other:?}"),
    }
}

fn check(schema: &Value, v: &Value, path: &str, errors: &mut Vec<String>) {
    let s: &Map<String, Value> = match schema {
        Value::Bool(true) => return,
        Value::Bool(false) => {
            errors.push(format!("{path}: not allowed"));
            return;
        }
        Value::Object(s) => s,
        other => panic!("bad schema {other}"),
    };
    for key in s.keys() {
        assert!(
            matches!(
                key.as_str(),
                "$schema" | "title" | "description" | "type" | "properties" | "required" | "additionalProperties"
                    | "items" | "minItems" | "maxItems" | "enum" | "oneOf" | "pattern" | "minimum"
            ),
            "unsupported keyword {key:?}"
        );
    }
    if let Some(t) = s.get("type") {
        let ok = match t {
            Value::String(t) => type_matches(t, v),
            Value::Array(ts) => ts.iter().any(|t| type_matches(t.as_str().unwrap(), v)),
            _ => panic!("bad type {t}"),
        };
        if !ok {
            errors.push(format!("{path}: {v} is not of type {t}"));
            return;
        }
    }
    if let Some(Value::Array(options)) = s.get("enum") {
        if !options.contains(v) {
            errors.push(format!("{path}: {v} not in {options:?}"));
        }
    }
    if let Some(Value::Array(options)) = s.get("oneOf") {
        let matching = options.iter().filter(|o| validate(o, v).is_empty()).count();
        if matching != 1 {
            errors.push(format!("{path}: {v} matches {matching} alternatives of oneOf"));
        }
    }
    if let (Some(Value::String(p)), Value::String(x)) = (s.get("pattern"), v) {
        if !regex::Regex::new(p).unwrap().is_match(x) {
            errors.push(format!("{path}: {x:?} does not match {p}"));
        }
    }
    if let (Some(min), Some(x)) = (s.get("minimum").and_then(Value::as_f64), v.as_f64()) {
        if x < min {
            errors.push(format!("{path}: {x} < {min}"));
        }
    }
    if let Value::Array(items) = v {
        if let Some(n) = s.get("minItems").and_then(Value::as_u64) {
            if (items.len() as u64) < n {
                errors.push(format!("{path}: fewer than {n} items"));
            }
        }
        if let Some(n) = s.get("maxItems").and_then(Value::as_u64) {
            if items.len() as u64 > n {
                errors.push(format!("{path}: more than {n} items"));
            }
        }
        if let Some(item) = s.get("items") {
            for (i, x) in items.iter().enumerate() {
                check(item, x, &format!("{path}/{i}"), errors);
            }
        }
    }
    if let Value::Object(o) = v {
        let props = s.get("properties").and_then(Value::as_object);
        if let Some(Value::Array(req)) = s.get("required") {
            for r in req {
                if !o.contains_key(r.as_str().unwrap()) {
                    errors.push(format!("{path}: missing {r}"));
                }
            }
        }
        for (k, x) in o {
            let sub = format!("{path}/{k}");
            match props.and_then(|p| p.get(k)) {
                Some(ps) => check(ps, x, &sub, errors),
                None => {
                    if let Some(extra) = s.get("additionalProperties") {
                        check(extra, x, &sub, errors);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keywords() {
        let s = json!({
            "type": "object",
            "properties": {"a": {"type": "integer", "minimum": 0}, "b": {"oneOf": [{"type": "null"}, {"type": "string", "pattern": "^x+$"}]}},
            "required": ["a"],
            "additionalProperties": false
        });
        assert!(validate(&s, &json!({"a": 1, "b": "xx"})).is_empty());
        assert!(validate(&s, &json!({"a": 1, "b": null})).is_empty());
        assert_eq!(validate(&s, &json!({"a": -1})).len(), 1);
        assert_eq!(validate(&s, &json!({"b": "y", "c": 0})).len(), 3);
        assert_eq!(validate(&s, &json!([1])).len(), 1);
    }
}
