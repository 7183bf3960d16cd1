//! Result records and report emission.
//!
//! The JSON-lines form is the deterministic machine interface: keys appear
//! in a fixed documented order, optional fields are omitted entirely, map
//! keys are sorted, and floats are printed with 17 significant digits so
//! parsing the text recovers the exact bit pattern. Two runs with the same
//! input, flags, and seed therefore produce byte-identical output.
//!
//! JSON has no literals for non-finite numbers, so `NaN` and infinities are
//! serialized as the strings `"nan"`, `"inf"`, and `"-inf"`.

use std::collections::BTreeMap;
use std::io::Write;

use crate::error::CliError;

/// One parameter value recorded alongside a score.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    /// A flag.
    Bool(bool),
    /// A count or order.
    Int(i64),
    /// A numeric parameter.
    Float(f64),
    /// A categorical parameter.
    Text(String),
}

impl ParamValue {
    fn to_json(&self) -> String {
        match self {
            ParamValue::Bool(b) => b.to_string(),
            ParamValue::Int(i) => i.to_string(),
            ParamValue::Float(v) => json_f64(*v),
            ParamValue::Text(s) => json_string(s),
        }
    }

    fn to_display(&self) -> String {
        match self {
            ParamValue::Bool(b) => b.to_string(),
            ParamValue::Int(i) => i.to_string(),
            ParamValue::Float(v) => format!("{v}"),
            ParamValue::Text(s) => s.clone(),
        }
    }
}

/// One estimate for one directed (or symmetric) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    /// Which estimator produced the record: `corr`, `gc`, `te`, `ccc`, `ccm`.
    pub measure: String,
    /// Driving series (first series for the symmetric `corr`).
    pub source: String,
    /// Driven series (second series for the symmetric `corr`).
    pub target: String,
    /// The estimate; `NaN` when the pair's estimator failed.
    pub score: f64,
    /// Significance probability, when the estimator defines one.
    pub p_value: Option<f64>,
    /// Decision at the configured threshold, when one is defined.
    pub significant: Option<bool>,
    /// Every parameter that influenced the estimate, keyed by name.
    pub params: BTreeMap<String, ParamValue>,
    /// Master seed of the run.
    pub seed: u64,
    /// Human-readable caveats; estimator failures land here.
    pub warnings: Vec<String>,
}

/// Serializes a float as a JSON value that parses back to the same bits:
/// 17 significant digits for finite values, quoted sentinels otherwise.
pub fn json_f64(v: f64) -> String {
    if v.is_nan() {
        "\"nan\"".to_string()
    } else if v == f64::INFINITY {
        "\"inf\"".to_string()
    } else if v == f64::NEG_INFINITY {
        "\"-inf\"".to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// Escapes and quotes a string for JSON.
pub fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn json_params(params: &BTreeMap<String, ParamValue>) -> String {
    let body: Vec<String> = params
        .iter()
        .map(|(k, v)| format!("{}:{}", json_string(k), v.to_json()))
        .collect();
    format!("{{{}}}", body.join(","))
}

impl ResultRecord {
    /// The record as one JSON line. Key order is fixed: measure, source,
    /// target, score, p_value (when present), significant (when present),
    /// params (keys sorted), seed, warnings.
    pub fn to_jsonl(&self) -> String {
        let mut line = String::with_capacity(256);
        line.push('{');
        line.push_str(&format!("\"measure\":{}", json_string(&self.measure)));
        line.push_str(&format!(",\"source\":{}", json_string(&self.source)));
        line.push_str(&format!(",\"target\":{}", json_string(&self.target)));
        line.push_str(&format!(",\"score\":{}", json_f64(self.score)));
        if let Some(p) = self.p_value {
            line.push_str(&format!(",\"p_value\":{}", json_f64(p)));
        }
        if let Some(s) = self.significant {
            line.push_str(&format!(",\"significant\":{s}"));
        }
        line.push_str(&format!(",\"params\":{}", json_params(&self.params)));
        line.push_str(&format!(",\"seed\":{}", self.seed));
        let warns: Vec<String> = self.warnings.iter().map(|w| json_string(w)).collect();
        line.push_str(&format!(",\"warnings\":[{}]", warns.join(",")));
        line.push('}');
        line
    }
}

/// Human-friendly float: fixed notation in a comfortable range, scientific
/// outside it, bare words for non-finite values.
pub fn display_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 1e-4 && v.abs() < 1e7 {
        format!("{v:.6}")
    } else {
        format!("{v:.4e}")
    }
}

fn pad(s: &str, width: usize) -> String {
    let mut t: String = s.chars().take(width).collect();
    while t.chars().count() < width {
        t.push(' ');
    }
    t
}

const COLS: [(&str, usize); 6] = [
    ("measure", 8),
    ("source", 14),
    ("target", 14),
    ("score", 16),
    ("p_value", 12),
    ("significant", 12),
];

fn table_header() -> String {
    let mut line = String::new();
    for (name, width) in COLS {
        line.push_str(&pad(name, width));
        line.push(' ');
    }
    line.push_str("params");
    line
}

fn table_row(r: &ResultRecord) -> String {
    let cells = [
        r.measure.clone(),
        r.source.clone(),
        r.target.clone(),
        display_f64(r.score),
        r.p_value.map(display_f64).unwrap_or_default(),
        r.significant.map(|s| s.to_string()).unwrap_or_default(),
    ];
    let mut line = String::new();
    for (cell, (_, width)) in cells.iter().zip(COLS) {
        line.push_str(&pad(cell, width));
        line.push(' ');
    }
    line.push_str(&display_params(&r.params));
    if !r.warnings.is_empty() {
        line.push_str("  ! ");
        line.push_str(&r.warnings.join("; "));
    }
    line.trim_end().to_string()
}

/// Output shape for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Fixed-width human-readable columns.
    Table,
    /// One self-contained JSON object per line.
    Jsonl,
}

/// Writes all records in the requested format. Refuses an empty record
/// list: silence would hide a dispatch bug.
pub fn emit_report(
    records: &[ResultRecord],
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if records.is_empty() {
        return Err(CliError::Data("no records to report".to_string()));
    }
    match format {
        Format::Jsonl => {
            for r in records {
                writeln!(out, "{}", r.to_jsonl())?;
            }
        }
        Format::Table => {
            writeln!(out, "{}", table_header())?;
            for r in records {
                writeln!(out, "{}", table_row(r))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Renders a parameter map for table-style summaries (`k=v` pairs, sorted).
pub fn display_params(params: &BTreeMap<String, ParamValue>) -> String {
    params
        .iter()
        .map(|(k, v)| format!("{k}={}", v.to_display()))
        .collect::<Vec<_>>()
        .join(" ")
}
