use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use srgkit::SrgError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit statuses.
pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<SrgError>() {
        Some(SrgError::NoCertificate(_)) => EXIT_FAIL,
        Some(SrgError::Numerical(_) | SrgError::Evaluation(_)) => EXIT_NUMERICAL,
        _ => EXIT_INPUT,
    }
}

/// Sixteen significant digits.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.15e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// CSV document with `#` comment lines ahead of the header row.
pub struct Csv {
    comments: Vec<String>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(columns: &[&str]) -> Self {
        Csv {
            comments: vec![format!("srgkit {VERSION}")],
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    pub fn flags(&mut self, flags: &[String]) -> &mut Self {
        if flags.is_empty() {
            self.comment("flags: none")
        } else {
            self.comment(format!("flags: {}", flags.join("; ")))
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    pub fn render(&self) -> Result<String> {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        out.push_str(&String::from_utf8(w.into_inner()?)?);
        Ok(out)
    }

    /// Writes to `path`, or stdout when `path` is `None` or `-`.
    pub fn write(&self, path: Option<&Path>) -> Result<()> {
        emit(path, &self.render()?)
    }
}

pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        _ => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}
