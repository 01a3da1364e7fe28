use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        }
    }

    /// 0 for pass and info, 1 for a failed check.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass | Status::Info => 0,
            Status::Fail => 1,
        }
    }

    pub fn from_check(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Number {
    Int(i64),
    Real(f64),
}

/// Significant digits kept when printing reals.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] and clears negative zero.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

impl Number {
    fn to_json(self) -> Value {
        match self {
            Number::Int(i) => json!(i),
            Number::Real(x) => json!(round_sig(x)),
        }
    }

    fn to_text(self) -> String {
        match self {
            Number::Int(i) => i.to_string(),
            Number::Real(x) => {
                let r = round_sig(x);
                if r.fract() == 0.0 && r.abs() < 1e15 {
                    format!("{r:.1}")
                } else {
                    r.to_string()
                }
            }
        }
    }
}

/// Output of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub values: BTreeMap<String, Number>,
    pub details: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_string(), status: Status::Info, values: BTreeMap::new(), details: Vec::new() }
    }

    pub fn real(&mut self, key: &str, v: f64) -> &mut Self {
        self.values.insert(key.to_string(), Number::Real(v));
        self
    }

    pub fn int(&mut self, key: &str, v: i64) -> &mut Self {
        self.values.insert(key.to_string(), Number::Int(v));
        self
    }

    pub fn flag(&mut self, key: &str, v: bool) -> &mut Self {
        self.int(key, i64::from(v))
    }

    pub fn detail(&mut self, line: impl Into<String>) -> &mut Self {
        self.details.push(line.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).map(|n| match *n {
            Number::Int(i) => i as f64,
            Number::Real(x) => x,
        })
    }

    pub fn to_json_value(&self) -> Value {
        let values: serde_json::Map<String, Value> =
            self.values.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
        json!({
            "command": self.command,
            "status": self.status.as_str(),
            "values": values,
            "details": self.details,
        })
    }

    /// Canonical JSON: keys sorted, reals rounded to 12 significant digits.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.command, self.status.as_str());
        for (k, v) in &self.values {
            let _ = writeln!(out, "  {k} = {}", v.to_text());
        }
        for d in &self.details {
            let _ = writeln!(out, "  - {d}");
        }
        out
    }
}
