//! Structured reports with a canonical serialization: object keys sorted,
//! integers only, no timing unless asked for.

use clap::ValueEnum;
use posat::{Family, SetWord};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Fail,
    BudgetExceeded,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Fail => "fail",
            Status::BudgetExceeded => "budget-exceeded",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Fail => 1,
            Status::BudgetExceeded => 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    root: Map<String, Value>,
    status: Status,
}

impl Report {
    pub fn new(command: &str, args: Value) -> Report {
        let mut root = Map::new();
        root.insert("command".into(), json!({ "name": command, "args": args }));
        root.insert(
            "version".into(),
            json!(concat!("posat ", env!("CARGO_PKG_VERSION"))),
        );
        Report {
            root,
            status: Status::Ok,
        }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.root.insert(key.into(), value);
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.root.get(key)
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn set_status(&mut self, status: Status) {
        self.status = status;
    }

    /// Raises the status; a budget stop outranks a failure.
    pub fn escalate(&mut self, status: Status) {
        let rank = |s: Status| match s {
            Status::Ok => 0,
            Status::Fail => 1,
            Status::BudgetExceeded => 2,
        };
        if rank(status) > rank(self.status) {
            self.status = status;
        }
    }

    pub fn to_value(&self) -> Value {
        let mut root = self.root.clone();
        root.insert("status".into(), json!(self.status.name()));
        Value::Object(root)
    }

    pub fn render(&self, format: Format) -> String {
        let value = self.to_value();
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&value).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut out = String::new();
                render_text(&value, 0, &mut out);
                out
            }
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                if let Some(s) = scalar(v) {
                    out.push_str(&format!("{pad}{k}: {s}\n"));
                } else if let Some(items) = v
                    .as_array()
                    .filter(|a| a.iter().all(|x| scalar(x).is_some()))
                {
                    let items: Vec<String> = items.iter().filter_map(scalar).collect();
                    out.push_str(&format!("{pad}{k}: [{}]\n", items.join(", ")));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render_text(v, indent + 2, out);
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        render_text(item, indent + 2, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

pub fn set_value(s: SetWord) -> Value {
    json!(s.to_string())
}

pub fn sets_value(sets: impl IntoIterator<Item = SetWord>) -> Value {
    Value::Array(sets.into_iter().map(set_value).collect())
}

pub fn family_value(f: &Family) -> Value {
    json!({ "n": f.ground_size(), "size": f.len(), "sets": sets_value(f.iter()) })
}
