//! JSON reports. Keys keep insertion order and every float is written with
//! 17 significant digits, so equal runs give equal bytes.

use serde_json::{Map, Number, Value};
use sha2::{Digest, Sha256};

/// A float as a JSON number with 17 significant digits; non-finite values
/// become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let s = format!("{x:.16e}");
    Value::Number(s.parse::<Number>().expect("formatted float is a JSON number"))
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

pub fn digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    AtMost,
    AtLeast,
    Flag,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerdictLine {
    pub name: String,
    pub measured: Option<f64>,
    pub bound: Option<f64>,
    pub relation: Relation,
    pub pass: bool,
}

impl VerdictLine {
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64, pass: bool) -> Self {
        Self {
            name: name.into(),
            measured: Some(measured),
            bound: Some(bound),
            relation: Relation::AtMost,
            pass,
        }
    }

    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64, pass: bool) -> Self {
        Self {
            name: name.into(),
            measured: Some(measured),
            bound: Some(bound),
            relation: Relation::AtLeast,
            pass,
        }
    }

    pub fn flag(name: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            measured: None,
            bound: None,
            relation: Relation::Flag,
            pass,
        }
    }

    pub fn from_core(prefix: &str, v: &steiner_core::analysis::Verdict<f64>, relation: Relation) -> Self {
        let name = if prefix.is_empty() {
            v.name.to_string()
        } else {
            format!("{prefix}.{}", v.name)
        };
        Self {
            name,
            measured: Some(v.measured),
            bound: Some(v.bound),
            relation,
            pass: v.pass,
        }
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), self.name.clone().into());
        if let (Some(a), Some(b)) = (self.measured, self.bound) {
            m.insert("measured".into(), num(a));
            m.insert(
                "relation".into(),
                match self.relation {
                    Relation::AtMost => "<=",
                    Relation::AtLeast => ">=",
                    Relation::Flag => "",
                }
                .into(),
            );
            m.insert("bound".into(), num(b));
        }
        m.insert("status".into(), if self.pass { "PASS" } else { "FAIL" }.into());
        Value::Object(m)
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub command: String,
    pub input_digest: Option<String>,
    pub seed: Option<u64>,
    pub payload: Map<String, Value>,
    pub verdicts: Vec<VerdictLine>,
    /// Only recorded on request, since it breaks byte-identical output.
    pub wall_time: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            input_digest: None,
            seed: None,
            payload: Map::new(),
            verdicts: Vec::new(),
            wall_time: None,
        }
    }

    pub fn put(&mut self, key: &str, v: impl Into<Value>) {
        self.payload.insert(key.into(), v.into());
    }

    pub fn verdict(&mut self, v: VerdictLine) {
        self.verdicts.push(v);
    }

    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), self.command.clone().into());
        m.insert(
            "input_digest".into(),
            self.input_digest.clone().map_or(Value::Null, Value::from),
        );
        m.insert("seed".into(), self.seed.map_or(Value::Null, Value::from));
        m.insert("result".into(), Value::Object(self.payload.clone()));
        m.insert(
            "verdicts".into(),
            Value::Array(self.verdicts.iter().map(VerdictLine::to_json).collect()),
        );
        m.insert("status".into(), if self.pass() { "PASS" } else { "FAIL" }.into());
        if let Some(t) = self.wall_time {
            m.insert("wall_time_s".into(), num(t));
        }
        Value::Object(m)
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("reports serialize");
        s.push('\n');
        s
    }
}
