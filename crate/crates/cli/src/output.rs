//! Deterministic CSV and JSON writers.
//!
//! Floats go through Rust's shortest-round-trip formatting and structs
//! serialize with fixed field order, so identical runs produce
//! byte-identical files.

use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use swcp_core::{Error, Result};

pub struct OutDir {
    dir: PathBuf,
}

impl OutDir {
    pub fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Parse(format!("cannot create {}: {e}", dir.display())))?;
        Ok(OutDir {
            dir: dir.to_path_buf(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn write_text(&self, name: &str, text: &str) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, text)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let json = serde_json::to_string_pretty(value)
            .map_err(|e| Error::Parse(format!("{name}: serialization failed: {e}")))?;
        self.write_text(name, &(json + "\n"))
    }
}

/// Incremental CSV builder with a fixed header.
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv {
            text: header.join(",") + "\n",
            columns: header.len(),
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.columns, "CSV row width mismatch");
        let _ = writeln!(self.text, "{}", fields.join(","));
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// Shorthand for building a CSV row out of heterogeneous displayables.
#[macro_export]
macro_rules! csv_row {
    ($csv:expr, $($field:expr),+ $(,)?) => {
        $csv.row(&[$(format!("{}", $field)),+])
    };
}
