//! Deterministic number formatting and report writing.

use serde_json::Value;

/// Rounds to 12 significant digits. Rust's float formatting rounds the exact
/// binary value half-to-even.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Shortest decimal that round-trips the 12-digit rounded value.
pub fn fmt_num(x: f64) -> String {
    let r = round_sig(x);
    if r.is_finite() {
        serde_json::to_string(&r).expect("finite floats serialize")
    } else {
        "NaN".to_string()
    }
}

/// Applies [`round_sig`] to every float in a JSON tree.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            *v = serde_json::Number::from_f64(round_sig(x)).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

pub fn json_document(mut v: Value) -> String {
    round_json(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Compact single-line JSON for `#` header lines.
pub fn json_line(mut v: Value) -> String {
    round_json(&mut v);
    serde_json::to_string(&v).expect("JSON values serialize")
}

/// CSV text with `#`-prefixed header lines.
#[derive(Debug, Default)]
pub struct CsvDoc {
    text: String,
}

impl CsvDoc {
    pub fn comment(&mut self, key: &str, value: Value) {
        self.text.push_str("# ");
        self.text.push_str(key);
        self.text.push_str(": ");
        self.text.push_str(&json_line(value));
        self.text.push('\n');
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for c in cells {
            if !first {
                self.text.push(',');
            }
            first = false;
            self.text.push_str(c.as_ref());
        }
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}
