//! Atomic artifact writing and the run report.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Artifacts of one run; everything written is removed again on failure.
pub struct Artifacts {
    dir: Option<PathBuf>,
    written: Vec<(PathBuf, String)>,
    stdout: Vec<u8>,
    stdout_used: bool,
}

impl Artifacts {
    pub fn new(dir: Option<PathBuf>) -> std::io::Result<Self> {
        if let Some(d) = &dir {
            fs::create_dir_all(d)?;
        }
        Ok(Artifacts { dir, written: Vec::new(), stdout: Vec::new(), stdout_used: false })
    }

    /// Writes `name` into the output directory; without one, the first
    /// artifact goes to stdout and the rest are dropped.
    pub fn write(&mut self, name: &str, bytes: &[u8]) -> std::io::Result<()> {
        let Some(dir) = &self.dir else {
            if !self.stdout_used {
                self.stdout.extend_from_slice(bytes);
                self.stdout_used = true;
            }
            return Ok(());
        };
        let path = dir.join(name);
        write_atomic(&path, bytes)?;
        self.written.push((path, digest(bytes)));
        Ok(())
    }

    pub fn write_json(&mut self, name: &str, value: &Value) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(value).expect("serializable");
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn discard(&mut self) {
        for (p, _) in self.written.drain(..) {
            let _ = fs::remove_file(p);
        }
        self.stdout.clear();
    }

    /// Writes the run report (directory mode) and flushes stdout output.
    pub fn finish(mut self, report: Value) -> std::io::Result<()> {
        if self.dir.is_some() {
            let arts: Vec<Value> = self
                .written
                .iter()
                .map(|(p, d)| json!({ "path": p.file_name().unwrap().to_string_lossy(), "sha256": d }))
                .collect();
            let mut report = report;
            report["artifacts"] = Value::Array(arts);
            self.write_json("report.json", &report)?;
        }
        std::io::stdout().write_all(&self.stdout)
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension("partial");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}
