//! Report envelope and rendering.
//!
//! Every command wraps its payload in the same envelope (tool version,
//! echoed command line, seed, optional timestamp) and renders it as JSON
//! or CSV. Rendering is pure, so identical inputs give identical bytes.
//! The timestamp comes from the `CHESSDYN_TIMESTAMP` environment variable
//! and is empty when unset, keeping default output reproducible.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

/// Output encodings a report can be rendered in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("unknown report format {other:?} (json, csv)")),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
        })
    }
}

/// A payload that knows its tabular shape for CSV output.
///
/// JSON output serializes the whole payload; CSV output writes the
/// scalar facts as leading `# key=value` comment lines, then one header
/// row, then the data rows.
pub trait Report: Serialize {
    fn notes(&self) -> Vec<(String, String)>;
    fn header(&self) -> Vec<String>;
    fn rows(&self) -> Vec<Vec<String>>;
}

/// Common wrapper carrying provenance around every payload.
#[derive(Serialize)]
pub struct ReportEnvelope<P: Serialize> {
    pub tool_version: String,
    pub command: String,
    pub seed: u64,
    pub timestamp: String,
    pub payload: P,
}

impl<P: Report> ReportEnvelope<P> {
    pub fn new(command: String, seed: u64, payload: P) -> ReportEnvelope<P> {
        ReportEnvelope {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            seed,
            timestamp: std::env::var("CHESSDYN_TIMESTAMP").unwrap_or_default(),
            payload,
        }
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => {
                let mut text =
                    serde_json::to_string_pretty(self).expect("reports are plain data");
                text.push('\n');
                text
            }
            ReportFormat::Csv => self.render_csv(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        let mut note = |key: &str, value: &str| {
            out.push_str(&format!("# {key}={value}\n"));
        };
        note("tool_version", &self.tool_version);
        note("command", &self.command);
        note("seed", &self.seed.to_string());
        note("timestamp", &self.timestamp);
        for (key, value) in self.payload.notes() {
            out.push_str(&format!("# {key}={value}\n"));
        }
        out.push_str(&csv_line(&self.payload.header()));
        for row in self.payload.rows() {
            out.push_str(&csv_line(&row));
        }
        out
    }
}

fn csv_line(fields: &[String]) -> String {
    let mut line = fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",");
    line.push('\n');
    line
}

fn csv_field(raw: &str) -> String {
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

/// Key/value helper for payloads whose CSV form is a two-column table.
pub fn scalar_rows(pairs: &[(&str, String)]) -> (Vec<String>, Vec<Vec<String>>) {
    let header = vec!["key".to_string(), "value".to_string()];
    let rows = pairs
        .iter()
        .map(|(key, value)| vec![key.to_string(), value.clone()])
        .collect();
    (header, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Sample {
        answer: u32,
    }

    impl Report for Sample {
        fn notes(&self) -> Vec<(String, String)> {
            vec![("answer".to_string(), self.answer.to_string())]
        }

        fn header(&self) -> Vec<String> {
            vec!["key".to_string(), "value".to_string()]
        }

        fn rows(&self) -> Vec<Vec<String>> {
            vec![vec!["answer".to_string(), self.answer.to_string()]]
        }
    }

    #[test]
    fn json_renders_round_trip() {
        let envelope = ReportEnvelope::new("chessdyn demo".to_string(), 7, Sample { answer: 42 });
        let text = envelope.render(ReportFormat::Json);
        assert_eq!(text, envelope.render(ReportFormat::Json));
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["seed"], 7);
        assert_eq!(value["command"], "chessdyn demo");
        assert_eq!(value["payload"]["answer"], 42);
    }

    #[test]
    fn csv_has_notes_then_header_then_rows() {
        let envelope = ReportEnvelope::new("chessdyn demo".to_string(), 0, Sample { answer: 42 });
        let text = envelope.render(ReportFormat::Csv);
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# tool_version="));
        assert_eq!(lines[1], "# command=chessdyn demo");
        assert_eq!(lines[2], "# seed=0");
        assert_eq!(lines[4], "# answer=42");
        assert_eq!(lines[5], "key,value");
        assert_eq!(lines[6], "answer,42");
    }

    #[test]
    fn csv_fields_with_commas_are_quoted() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn format_names_round_trip_and_reject_strangers() {
        assert_eq!("json".parse::<ReportFormat>(), Ok(ReportFormat::Json));
        assert_eq!("csv".parse::<ReportFormat>(), Ok(ReportFormat::Csv));
        assert!("yaml".parse::<ReportFormat>().is_err());
        assert_eq!(ReportFormat::Csv.to_string(), "csv");
    }
}
