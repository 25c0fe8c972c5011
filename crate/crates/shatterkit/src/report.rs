//! Command reports.
//!
//! A report is an ordered list of `key: value` lines: the command, its
//! resolved inputs, the status and the command-specific result. The same
//! data renders as one JSON document.

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A checked property failed; the result names the witness.
    Violation,
    /// The request exceeds a supported limit or has no solution.
    CapabilityError,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Violation => "violation",
            Status::CapabilityError => "capability-error",
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::CapabilityError => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<(String, Value)>,
    pub status: Status,
    pub result: Vec<(String, Value)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            inputs: Vec::new(),
            status: Status::Ok,
            result: Vec::new(),
        }
    }

    pub fn input(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.inputs.push((key.into(), value.into()));
        self
    }

    pub fn put(&mut self, key: &str, value: impl Into<Value>) {
        self.result.push((key.into(), value.into()));
    }

    /// A result field by key.
    pub fn get(&self, key: &str) -> Option<&Value> {
        self.result.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// Marks the report as a capability error with a reason.
    pub fn capability(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::CapabilityError;
        self.put("reason", reason.into());
        self
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for (k, v) in &self.inputs {
            out.push_str(&format!("{k}: {}\n", render(v)));
        }
        out.push_str(&format!("status: {}\n", self.status.as_str()));
        for (k, v) in &self.result {
            out.push_str(&format!("{k}: {}\n", render(v)));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let object = |fields: &[(String, Value)]| Value::Object(fields.iter().cloned().collect::<Map<_, _>>());
        let doc = serde_json::json!({
            "command": self.command,
            "inputs": object(&self.inputs),
            "status": self.status.as_str(),
            "result": object(&self.result),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("values serialize");
        s.push('\n');
        s
    }
}

/// Scalars print plainly, `null` as `none`, lists comma-separated and
/// lists of lists as space-separated groups.
fn render(v: &Value) -> String {
    match v {
        Value::Null => String::from("none"),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.is_empty() => String::from("-"),
        Value::Array(items) => {
            let sep = if items.iter().any(Value::is_array) { " " } else { "," };
            items.iter().map(render).collect::<Vec<_>>().join(sep)
        }
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", render(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_layout() {
        let mut r = Report::new("dim").input("family", "a.fam");
        r.put("vc_dim", 2);
        r.put("witness", json!([0, 1]));
        r.put("pairs", json!([[0, 1], [2]]));
        r.put("none", Value::Null);
        r.put("empty", json!([]));
        assert_eq!(
            r.to_text(),
            "command: dim\nfamily: a.fam\nstatus: ok\nvc_dim: 2\nwitness: 0,1\npairs: 0,1 2\nnone: none\nempty: -\n"
        );
    }

    #[test]
    fn json_layout() {
        let r = Report::new("cover").capability("too wide");
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["status"], "capability-error");
        assert_eq!(v["result"]["reason"], "too wide");
        assert_eq!(r.status.exit_code(), 3);
    }
}
