//! Artifact serialization: JSON with every float at 17 significant digits, CSV
//! curves, and where each artifact goes.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::ser::Formatter;

/// Compact JSON, but floats as `d.ddddddddddddddddde±x` so that they round-trip
/// and print identically on every platform.
struct Sig17;

impl Formatter for Sig17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(sig17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// `value` with 17 significant digits in scientific notation.
pub fn sig17(value: f64) -> String {
    format!("{value:.16e}")
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    value.serialize(&mut ser).expect("report types serialize infallibly");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// A CSV table whose cells are already formatted.
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 cells")
    }
}

/// Cell for an optional float; missing values are empty cells.
pub fn cell(value: Option<f64>) -> String {
    value.filter(|v| v.is_finite()).map(sig17).unwrap_or_default()
}

/// Where an artifact is written: an explicit path, else `<out_dir>/<default_name>`,
/// else standard output (only when `stdout_fallback`).
pub struct Destination<'a> {
    pub explicit: Option<&'a Path>,
    pub out_dir: Option<&'a Path>,
    pub default_name: &'a str,
    pub stdout_fallback: bool,
}

impl Destination<'_> {
    /// Writes `content`; returns where it went, or `None` if it was skipped.
    pub fn write(&self, content: &str) -> io::Result<Option<String>> {
        let path: Option<PathBuf> = match (self.explicit, self.out_dir) {
            (Some(p), _) => Some(p.to_path_buf()),
            (None, Some(dir)) => {
                std::fs::create_dir_all(dir)?;
                Some(dir.join(self.default_name))
            }
            (None, None) => None,
        };
        match path {
            Some(p) => {
                let mut f = BufWriter::new(File::create(&p)?);
                f.write_all(content.as_bytes())?;
                f.flush()?;
                Ok(Some(p.display().to_string()))
            }
            None if self.stdout_fallback => {
                let mut out = io::stdout().lock();
                out.write_all(content.as_bytes())?;
                out.flush()?;
                Ok(Some("stdout".into()))
            }
            None => Ok(None),
        }
    }
}
