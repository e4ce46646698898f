//! JSON envelopes and CSV tables, each stamped with the schema version.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::config::RunConfig;
use crate::report::VerificationReport;

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub schema_version: &'static str,
    pub command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix_ms: Option<u128>,
    pub config: &'a RunConfig,
    pub result: T,
}

impl<'a, T: Serialize> Envelope<'a, T> {
    /// The timestamp is omitted under `reproducible`.
    pub fn new(command: &'a str, config: &'a RunConfig, result: T) -> Self {
        let generated_unix_ms = (!config.reproducible).then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_millis())
                .unwrap_or(0)
        });
        Envelope { schema_version: SCHEMA_VERSION, command, generated_unix_ms, config, result }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report types serialize");
        s.push('\n');
        s
    }
}

/// CSV with a leading `schema_version` column.
pub struct CsvTable {
    writer: csv::Writer<Vec<u8>>,
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["schema_version"];
        header.extend_from_slice(columns);
        writer.write_record(&header).expect("in-memory write");
        CsvTable { writer }
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        let mut record = vec![SCHEMA_VERSION];
        record.extend(fields.iter().map(AsRef::as_ref));
        self.writer.write_record(&record).expect("in-memory write");
    }

    pub fn finish(self) -> String {
        let bytes = self.writer.into_inner().expect("in-memory flush");
        String::from_utf8(bytes).expect("utf-8 fields")
    }
}

pub const REPORT_COLUMNS: [&str; 11] = [
    "identity_id",
    "parameters",
    "lhs",
    "rhs",
    "abs_error",
    "rel_error",
    "terms_used",
    "tail_bound",
    "tolerance",
    "verdict",
    "details",
];

/// `k1=v1;k2=v2`
pub fn join_map(map: &BTreeMap<String, String>) -> String {
    map.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

pub fn report_fields(r: &VerificationReport) -> Vec<String> {
    vec![
        r.identity_id.clone(),
        join_map(&r.parameters),
        r.lhs.to_string(),
        r.rhs.to_string(),
        r.abs_error.to_string(),
        r.rel_error.to_string(),
        r.terms_used.to_string(),
        r.tail_bound.to_string(),
        format!("{:e}", r.tolerance),
        r.verdict.to_string(),
        join_map(&r.details),
    ]
}

/// Destination of the rendered output.
pub fn emit(output: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_schema_column() {
        let mut t = CsvTable::new(&["k", "v"]);
        t.row(&["1", "a,b"]);
        assert_eq!(t.finish(), "schema_version,k,v\n1.0,1,\"a,b\"\n");
    }

    #[test]
    fn reproducible_envelope_has_no_timestamp() {
        let mut cfg = RunConfig::default();
        cfg.reproducible = true;
        let json = Envelope::new("verify", &cfg, 1).to_json();
        assert!(!json.contains("generated_unix_ms"));
        assert!(json.contains("\"schema_version\": \"1.0\""));
        cfg.reproducible = false;
        assert!(Envelope::new("verify", &cfg, 1).to_json().contains("generated_unix_ms"));
    }
}
