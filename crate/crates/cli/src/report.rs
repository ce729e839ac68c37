//! Command output: an ordered record rendered either as flat `key: value`
//! lines or as JSON.
//!
//! In the text form nested records join their keys with `.` and list items
//! are numbered from 0, so `accepted.0.label: L1` is the label of the first
//! accepted statement. Empty lists print as `[]` and absent values as
//! `none`. Rationals are always exact `p/q` strings.

use serde_json::{Map, Value};

use probaccept_core::Rational;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(Map<String, Value>);

impl Record {
    pub fn new() -> Record {
        Record::default()
    }

    pub fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.insert(key.to_owned(), value.into());
        self
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.put(key, value);
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }
}

impl From<Record> for Value {
    fn from(r: Record) -> Value {
        Value::Object(r.0)
    }
}

pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn optional<T: Into<Value>>(v: Option<T>) -> Value {
    v.map_or(Value::Null, Into::into)
}

/// The top-level output of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    body: Record,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            body: Record::new().with("command", command),
        }
    }

    pub fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.body.put(key, value);
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.body.get(key)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.body.0).expect("plain JSON values");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.body.0 {
            flatten(key, value, &mut out);
        }
        out
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut String) {
    let mut line = |text: &str| {
        out.push_str(prefix);
        out.push_str(": ");
        out.push_str(text);
        out.push('\n');
    };
    match value {
        Value::Null => line("none"),
        Value::Bool(b) => line(if *b { "true" } else { "false" }),
        Value::Number(n) => line(&n.to_string()),
        Value::String(s) => line(s),
        Value::Array(items) if items.is_empty() => line("[]"),
        Value::Object(map) if map.is_empty() => line("{}"),
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), item, out);
            }
        }
        Value::Object(map) => {
            for (key, item) in map {
                flatten(&format!("{prefix}.{key}"), item, out);
            }
        }
    }
}
