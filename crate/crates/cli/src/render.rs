//! Text rendering: a line-per-leaf projection of the JSON report.

use serde_json::Value;

use crate::run::Report;

/// One `path: value` line per scalar in the report's JSON form.
pub fn render_text(report: &Report) -> String {
    let value = serde_json::to_value(report).expect("reports serialize");
    let mut out = String::new();
    walk(&value, &mut String::new(), &mut out);
    out
}

fn walk(v: &Value, path: &mut String, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let len = path.len();
                if !path.is_empty() {
                    path.push('.');
                }
                path.push_str(k);
                walk(child, path, out);
                path.truncate(len);
            }
        }
        Value::Array(items) if !items.is_empty() => {
            for (i, child) in items.iter().enumerate() {
                let len = path.len();
                path.push_str(&format!("[{i}]"));
                walk(child, path, out);
                path.truncate(len);
            }
        }
        Value::String(s) => out.push_str(&format!("{path}: {s}\n")),
        other => out.push_str(&format!("{path}: {other}\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::run::run_text;

    #[test]
    fn lines_follow_the_json() {
        let r = run_text("{\"P\": \"x^2 + y^2\", \"task\": \"milnor\"}");
        let text = render_text(&r);
        assert!(text.contains("result.jacobian.mu: 1\n"));
        assert!(text.contains("spec.P: x^2 + y^2\n"));
        assert!(text.contains("warnings: []\n"));
    }
}
