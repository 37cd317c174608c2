//! Report rendering. The JSON and CSV layouts are stable:
//!
//! JSON: `{"schema": 1, "passed": bool, "reports": [{"law", "instances",
//! "passed", "failures": [{"inputs", "expected", "got"}], "elapsed_ms"}]}`.
//!
//! CSV: header `law,kind,inputs,expected,got,instances,passed,elapsed_ms`;
//! one `failure` row per failure, then one `summary` row per law.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::json;

use reciprocity_core::engine::VerificationReport;
use reciprocity_core::error::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

fn io_error(e: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("writing output: {e}"))
}

pub fn write_reports(reports: &[VerificationReport], format: Format) -> Result<(), Error> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Text => {
            for r in reports {
                writeln!(out, "{r}").map_err(io_error)?;
            }
            let overall = if reports.iter().all(VerificationReport::passed) { "PASS" } else { "FAIL" };
            writeln!(out, "overall: {overall}").map_err(io_error)?;
        }
        Format::Json => {
            let body = json!({
                "schema": SCHEMA_VERSION,
                "passed": reports.iter().all(VerificationReport::passed),
                "reports": reports.iter().map(|r| json!({
                    "law": r.law,
                    "instances": r.instances,
                    "passed": r.passed(),
                    "failures": r.failures.iter().map(|f| json!({
                        "inputs": f.inputs,
                        "expected": f.expected,
                        "got": f.got,
                    })).collect::<Vec<_>>(),
                    "elapsed_ms": r.elapsed.as_millis() as u64,
                })).collect::<Vec<_>>(),
            });
            let text = serde_json::to_string_pretty(&body).map_err(io_error)?;
            writeln!(out, "{text}").map_err(io_error)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["law", "kind", "inputs", "expected", "got", "instances", "passed", "elapsed_ms"])
                .map_err(io_error)?;
            for r in reports {
                for f in &r.failures {
                    w.write_record([r.law.as_str(), "failure", &f.inputs, &f.expected, &f.got, "", "", ""])
                        .map_err(io_error)?;
                }
                w.write_record([
                    r.law.as_str(),
                    "summary",
                    "",
                    "",
                    "",
                    &r.instances.to_string(),
                    &r.passed().to_string(),
                    &r.elapsed.as_millis().to_string(),
                ])
                .map_err(io_error)?;
            }
            w.flush().map_err(io_error)?;
        }
    }
    Ok(())
}
