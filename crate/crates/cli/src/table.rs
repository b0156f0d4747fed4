//! Fixed-width text rendering of a JSON document.
//!
//! Keys are right-aligned so every value starts in the same column, which
//! keeps `key: value` contiguous. Arrays of scalars (and of scalar arrays)
//! print inline as `[a,b,c]`; objects and arrays of objects nest.

use serde_json::{Map, Value};

pub fn render(doc: &Value) -> String {
    let mut lines = Vec::new();
    match doc {
        Value::Object(obj) => lines.extend(object(obj)),
        Value::Array(items) if !is_inline(doc) => lines.extend(list(items)),
        _ => lines.push(inline(doc)),
    }
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

fn is_inline(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(items) => items.iter().all(|i| match i {
            Value::Array(inner) => inner.iter().all(|x| !x.is_array() && !x.is_object()),
            Value::Object(_) => false,
            _ => true,
        }),
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(inline).collect();
            format!("[{}]", parts.join(","))
        }
        other => other.to_string(),
    }
}

fn object(obj: &Map<String, Value>) -> Vec<String> {
    let width = obj.keys().map(|k| k.chars().count()).max().unwrap_or(0);
    let mut lines = Vec::new();
    for (k, v) in obj {
        let pad = " ".repeat(width - k.chars().count());
        if is_inline(v) {
            lines.push(format!("{pad}{k}: {}", inline(v)));
            continue;
        }
        lines.push(format!("{pad}{k}:"));
        let nested = match v {
            Value::Object(o) => object(o),
            Value::Array(items) => list(items),
            _ => unreachable!(),
        };
        lines.extend(nested.into_iter().map(|l| format!("{}{l}", " ".repeat(width + 2))));
    }
    lines
}

fn list(items: &[Value]) -> Vec<String> {
    let mut lines = Vec::new();
    for item in items {
        let block = match item {
            Value::Object(o) => object(o),
            Value::Array(a) if !is_inline(item) => list(a),
            other => vec![inline(other)],
        };
        for (i, l) in block.into_iter().enumerate() {
            lines.push(if i == 0 { format!("- {l}") } else { format!("  {l}") });
        }
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn aligned_keys() {
        let doc = json!({"m": "3", "exceptions": [], "witness": [["5", "1", "5", "11"]]});
        assert_eq!(render(&doc), "         m: 3\nexceptions: []\n   witness: [[5,1,5,11]]\n");
    }

    #[test]
    fn nested_objects() {
        let doc = json!({"a": {"b": "1"}, "rows": [{"x": "2"}, {"x": "3"}]});
        assert_eq!(render(&doc), "   a:\n      b: 1\nrows:\n      - x: 2\n      - x: 3\n");
    }

    #[test]
    fn null_and_scalar() {
        assert_eq!(render(&Value::Null), "-\n");
        assert_eq!(render(&json!([{"x": "1"}])), "- x: 1\n");
    }
}
