//! A validator for the subset of JSON Schema used by the files under
//! `schemas/v1`: `$ref`, `type`, `properties`, `required`,
//! `additionalProperties`, `items`, `minItems`/`maxItems`, `minLength`/`maxLength`,
//! `enum`, `const`, `minimum`/`maximum` and `anyOf`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const VERSION: &str = "v1";

pub const FILES: &[(&str, &str)] = &[
    ("common.schema.json", include_str!("../schemas/v1/common.schema.json")),
    ("classification.schema.json", include_str!("../schemas/v1/classification.schema.json")),
    ("infomorphism-check.schema.json", include_str!("../schemas/v1/infomorphism-check.schema.json")),
    ("diagram.schema.json", include_str!("../schemas/v1/diagram.schema.json")),
    ("cccd.schema.json", include_str!("../schemas/v1/cccd.schema.json")),
    ("qrf.schema.json", include_str!("../schemas/v1/qrf.schema.json")),
    ("state.schema.json", include_str!("../schemas/v1/state.schema.json")),
    ("model.schema.json", include_str!("../schemas/v1/model.schema.json")),
    ("bell-setup.schema.json", include_str!("../schemas/v1/bell-setup.schema.json")),
    ("agent.schema.json", include_str!("../schemas/v1/agent.schema.json")),
    ("qfp-instance.schema.json", include_str!("../schemas/v1/qfp-instance.schema.json")),
    ("thermo.schema.json", include_str!("../schemas/v1/thermo.schema.json")),
    ("report.schema.json", include_str!("../schemas/v1/report.schema.json")),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// JSON pointer into the checked document.
    pub pointer: String,
    pub message: String,
}

fn registry() -> &'static BTreeMap<&'static str, Value> {
    static R: OnceLock<BTreeMap<&'static str, Value>> = OnceLock::new();
    R.get_or_init(|| {
        FILES
            .iter()
            .map(|(name, text)| (*name, serde_json::from_str(text).unwrap_or_else(|e| panic!("schema {name}: {e}"))))
            .collect()
    })
}

/// Every violation of schema `file` by `v`, in document order.
pub fn validate(file: &str, v: &Value) -> Vec<Violation> {
    let schema = registry().get(file).unwrap_or_else(|| panic!("no schema {file}"));
    let mut out = Vec::new();
    check(file, schema, v, "", &mut out);
    out
}

fn escape(seg: &str) -> String {
    seg.replace('~', "~0").replace('/', "~1")
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

fn has_type(v: &Value, t: &str) -> bool {
    match t {
        "integer" => v.as_i64().is_some() || v.as_u64().is_some() || v.as_f64().is_some_and(|x| x.fract() == 0.),
        t => type_name(v) == t,
    }
}

fn resolve<'a>(file: &'a str, reference: &'a str) -> (&'a str, &'static Value) {
    let (target, fragment) = reference.split_once('#').unwrap_or((reference, ""));
    let target = if target.is_empty() { file } else { target };
    let (name, doc) = registry().get_key_value(target).unwrap_or_else(|| panic!("unresolved $ref {reference}"));
    let node = if fragment.is_empty() { doc } else { doc.pointer(fragment).unwrap_or_else(|| panic!("unresolved $ref {reference}")) };
    (name, node)
}

fn check(file: &str, s: &Value, v: &Value, ptr: &str, out: &mut Vec<Violation>) {
    let mut fail = |message: String| out.push(Violation { pointer: ptr.to_string(), message });
    if let Some(r) = s.get("$ref").and_then(Value::as_str) {
        let (f, node) = resolve(file, r);
        check(f, node, v, ptr, out);
        return;
    }
    if let Some(t) = s.get("type") {
        let allowed: Vec<&str> = match t {
            Value::String(t) => vec![t.as_str()],
            Value::Array(ts) => ts.iter().filter_map(Value::as_str).collect(),
            _ => vec![],
        };
        if !allowed.iter().any(|t| has_type(v, t)) {
            fail(format!("expected {}, found {}", allowed.join(" or "), type_name(v)));
            return;
        }
    }
    if let Some(c) = s.get("const") {
        if c != v {
            fail(format!("expected {c}"));
        }
    }
    if let Some(Value::Array(options)) = s.get("enum") {
        if !options.contains(v) {
            let names: Vec<String> = options.iter().map(Value::to_string).collect();
            fail(format!("expected one of {}", names.join(", ")));
        }
    }
    if let Some(x) = v.as_f64() {
        if let Some(m) = s.get("minimum").and_then(Value::as_f64) {
            if x < m {
                fail(format!("{x} is below the minimum {m}"));
            }
        }
        if let Some(m) = s.get("maximum").and_then(Value::as_f64) {
            if x > m {
                fail(format!("{x} is above the maximum {m}"));
            }
        }
    }
    if let Value::String(text) = v {
        let n = text.chars().count() as u64;
        if let Some(m) = s.get("minLength").and_then(Value::as_u64) {
            if n < m {
                fail(format!("string shorter than {m}"));
            }
        }
        if let Some(m) = s.get("maxLength").and_then(Value::as_u64) {
            if n > m {
                fail(format!("string longer than {m}"));
            }
        }
    }
    if let Value::Array(items) = v {
        if let Some(m) = s.get("minItems").and_then(Value::as_u64) {
            if (items.len() as u64) < m {
                fail(format!("expected at least {m} items, found {}", items.len()));
            }
        }
        if let Some(m) = s.get("maxItems").and_then(Value::as_u64) {
            if (items.len() as u64) > m {
                fail(format!("expected at most {m} items, found {}", items.len()));
            }
        }
        if let Some(item) = s.get("items") {
            for (i, x) in items.iter().enumerate() {
                check(file, item, x, &format!("{ptr}/{i}"), out);
            }
        }
    }
    if let Value::Object(map) = v {
        let props = s.get("properties").and_then(Value::as_object);
        if let Some(Value::Array(req)) = s.get("required") {
            for r in req.iter().filter_map(Value::as_str) {
                if !map.contains_key(r) {
                    out.push(Violation { pointer: ptr.to_string(), message: format!("missing required property `{r}`") });
                }
            }
        }
        for (k, x) in map {
            let p = format!("{ptr}/{}", escape(k));
            match props.and_then(|p| p.get(k)) {
                Some(sub) => check(file, sub, x, &p, out),
                None => match s.get("additionalProperties") {
                    Some(Value::Bool(false)) => out.push(Violation { pointer: p, message: format!("unexpected property `{k}`") }),
                    Some(sub @ Value::Object(_)) => check(file, sub, x, &p, out),
                    _ => {}
                },
            }
        }
    }
    if let Some(Value::Array(alts)) = s.get("anyOf") {
        let mut best: Option<Vec<Violation>> = None;
        for alt in alts {
            let mut sub = Vec::new();
            check(file, alt, v, ptr, &mut sub);
            if sub.is_empty() {
                return;
            }
            if best.as_ref().is_none_or(|b| sub.len() < b.len()) {
                best = Some(sub);
            }
        }
        out.push(Violation { pointer: ptr.to_string(), message: "matches none of the allowed shapes; closest:".into() });
        out.extend(best.unwrap_or_default());
    }
}
