use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// What every command prints. Keys serialize in sorted order.
#[derive(Debug, Serialize)]
pub struct OutputEnvelope {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub warnings: Vec<String>,
}

impl OutputEnvelope {
    pub fn new(command: &str, inputs: Value, result: Value) -> Self {
        Self {
            command: command.to_string(),
            inputs: round_value(inputs),
            result: round_value(result),
            warnings: Vec::new(),
        }
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn render(&self, format: Format) -> String {
        let value = serde_json::to_value(self).expect("envelope is plain data");
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&value).expect("envelope is plain data");
                s.push('\n');
                s
            }
            Format::Csv => render_csv(&value),
            Format::Text => render_text(&value),
        }
    }
}

/// Round to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or_default());
            Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_value).collect()),
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, v)| (k, round_value(v)))
                .collect::<Map<_, _>>(),
        ),
        other => other,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        leaf => out.push((prefix.to_string(), leaf.clone())),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_csv(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"]).expect("in-memory write");
    for (k, v) in rows {
        w.write_record([k, scalar(&v)]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("csv output is utf-8")
}

const PROBABILITY_KEYS: &[&str] = &[
    "p",
    "q",
    "p_computed",
    "p_numeric",
    "p_conjecture",
    "p_star",
    "probabilities",
];

fn is_probability(key: &str) -> bool {
    key.split('.')
        .rev()
        .find(|seg| seg.parse::<usize>().is_err())
        .is_some_and(|seg| PROBABILITY_KEYS.contains(&seg))
}

fn render_text(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let mut s = String::new();
    for (k, v) in rows {
        let shown = match v.as_f64() {
            Some(x) if is_probability(&k) && !k.starts_with("inputs") => {
                format!("{}%", round_sig(100.0 * x))
            }
            _ => scalar(&v),
        };
        let _ = writeln!(s, "{k}: {shown}");
    }
    s
}
