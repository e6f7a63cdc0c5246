//! CSV output: '#'-prefixed metadata lines, a header row, then data rows
//! with every float printed to 17 significant digits ('.' decimal).

use std::io::Write;

pub const SCHEMA: &str = "mutail-csv v1";

/// 17 significant digits: enough for exact f64 round-trips.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct CsvWriter<'a> {
    out: &'a mut dyn Write,
}

impl<'a> CsvWriter<'a> {
    pub fn new(out: &'a mut dyn Write) -> Self {
        Self { out }
    }

    pub fn meta(&mut self, line: &str) -> std::io::Result<()> {
        writeln!(self.out, "# {line}")
    }

    pub fn schema(&mut self, command: &str) -> std::io::Result<()> {
        self.meta(&format!("schema: {SCHEMA}"))?;
        self.meta(&format!("command: {command}"))
    }

    pub fn header(&mut self, columns: &[&str]) -> std::io::Result<()> {
        writeln!(self.out, "{}", columns.join(","))
    }

    pub fn row(&mut self, fields: &[String]) -> std::io::Result<()> {
        writeln!(self.out, "{}", fields.join(","))
    }
}
