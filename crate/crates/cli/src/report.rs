use serde::Serialize;
use serde_json::{Map, Value};

/// The JSON document written to stdout (and `--out`).
#[derive(Debug, Serialize)]
pub struct ReportDocument<R: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub parameters: Map<String, Value>,
    /// Whether the expected verdict was reproduced, for `verify` commands.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matched: Option<bool>,
    pub result: R,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub seconds: f64,
}

impl<R: Serialize> ReportDocument<R> {
    pub fn new(command: String, parameters: Map<String, Value>, result: R) -> Self {
        ReportDocument {
            tool: "bcay",
            version: env!("CARGO_PKG_VERSION"),
            command,
            parameters,
            matched: None,
            result,
            timing: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// One report for a single `n`, a list for a range.
#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    pub fn from_vec(mut items: Vec<T>, single: bool) -> Self {
        if single && items.len() == 1 {
            OneOrMany::One(items.pop().unwrap())
        } else {
            OneOrMany::Many(items)
        }
    }
}
