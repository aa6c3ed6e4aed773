use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Value};

use crate::manifest::RunManifest;
use crate::{CliError, Format};

/// A command result: the JSON document plus a flat table for CSV.
pub struct Output {
    pub result: Value,
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub exhausted: bool,
}

pub fn emit(manifest: &RunManifest, out: &Output, format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let mut sink: Box<dyn Write> = match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Json => {
            let doc = json!({ "manifest": manifest, "result": out.result });
            serde_json::to_writer_pretty(&mut sink, &doc)?;
            writeln!(sink)?;
        }
        Format::Csv => {
            writeln!(sink, "# manifest: {}", serde_json::to_string(manifest)?)?;
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(&out.headers)?;
            for r in &out.rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}
