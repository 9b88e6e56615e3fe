use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Human,
}

pub struct Sink {
    format: Format,
    out: Box<dyn Write + Send>,
}

impl Sink {
    pub fn open(format: Format, path: Option<&PathBuf>) -> io::Result<Self> {
        let out: Box<dyn Write + Send> = match path {
            Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
            None => Box::new(io::BufWriter::new(io::stdout())),
        };
        Ok(Sink { format, out })
    }

    /// Emits flat records: a CSV table, a JSON array, or `key=value` lines.
    pub fn rows<T: Serialize>(&mut self, rows: &[T]) -> io::Result<()> {
        match self.format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut self.out);
                for r in rows {
                    w.serialize(r).map_err(io::Error::other)?;
                }
                w.flush()?;
            }
            Format::Json => {
                serde_json::to_writer_pretty(&mut self.out, rows)?;
                writeln!(self.out)?;
            }
            Format::Human => {
                for r in rows {
                    let line = human_line(&serde_json::to_value(r)?);
                    writeln!(self.out, "{line}")?;
                }
            }
        }
        self.out.flush()
    }

    /// Emits one record; `flat` is its CSV form.
    pub fn record<T: Serialize, F: Serialize>(&mut self, full: &T, flat: &F) -> io::Result<()> {
        match self.format {
            Format::Csv => self.rows(std::slice::from_ref(flat)),
            Format::Json => {
                serde_json::to_writer_pretty(&mut self.out, full)?;
                writeln!(self.out)?;
                self.out.flush()
            }
            Format::Human => {
                if let Value::Object(map) = serde_json::to_value(full)? {
                    for (k, v) in map {
                        writeln!(self.out, "{k}: {}", scalar_text(&v))?;
                    }
                } else {
                    writeln!(self.out, "{}", scalar_text(&serde_json::to_value(full)?))?;
                }
                self.out.flush()
            }
        }
    }

    pub fn is_json(&self) -> bool {
        self.format == Format::Json
    }

    pub fn note(&mut self, text: &str) -> io::Result<()> {
        if self.format == Format::Human {
            writeln!(self.out, "# {text}")?;
        }
        Ok(())
    }

    pub fn text(&mut self, text: &str) -> io::Result<()> {
        self.out.write_all(text.as_bytes())?;
        self.out.flush()
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn human_line(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", scalar_text(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => scalar_text(other),
    }
}
