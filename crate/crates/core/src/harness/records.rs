//! Output files: JSON lines per replication, a summary document, CSV tables.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::{Error, Result};

/// A summary wrapped with its creation time. The timestamp is the only field
/// that differs between runs of the same configuration.
#[derive(Debug, Serialize)]
pub struct Stamped<'a, T: Serialize> {
    pub created_unix: u64,
    #[serde(flatten)]
    pub body: &'a T,
}

pub fn stamped<T: Serialize>(body: &T) -> Stamped<'_, T> {
    let created_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    Stamped { created_unix, body }
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Numerical(format!("serialization failed: {e}"))
}

pub fn write_jsonl<T: Serialize, W: Write>(items: &[T], mut w: W) -> Result<()> {
    for item in items {
        serde_json::to_writer(&mut w, item).map_err(json_err)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(json_err)
}

/// Output directory layout: `records.jsonl`, `summary.json`, `sweep.csv`.
pub struct OutputDir {
    root: PathBuf,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root)?;
        Ok(Self { root: root.to_path_buf() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn records<T: Serialize>(&self, items: &[T]) -> Result<PathBuf> {
        let path = self.path("records.jsonl");
        write_jsonl(items, BufWriter::new(File::create(&path)?))?;
        Ok(path)
    }

    pub fn summary<T: Serialize>(&self, summary: &T) -> Result<PathBuf> {
        let path = self.path("summary.json");
        fs::write(&path, to_pretty_json(&stamped(summary))? + "\n")?;
        Ok(path)
    }

    pub fn file(&self, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
        let path = self.path(name);
        let f = File::create(&path)?;
        Ok((path, BufWriter::new(f)))
    }
}
