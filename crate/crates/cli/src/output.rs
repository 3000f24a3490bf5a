//! Output files: fixed float formatting and all-or-nothing writes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;

/// Twelve significant digits in scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    pub fn new(name: String, contents: String) -> Self {
        Artifact { name, contents }
    }

    pub fn json(name: &str, value: &Value) -> Self {
        let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
        text.push('\n');
        Artifact::new(name.to_string(), text)
    }
}

/// Writes every artifact into `dir`. Each file goes through a temporary
/// sibling and a rename; if any step fails, files already placed by this
/// call are removed again.
pub fn write_all(dir: &Path, artifacts: &[Artifact]) -> std::io::Result<()> {
    let created_dir = !dir.exists();
    fs::create_dir_all(dir)?;
    let mut placed: Vec<PathBuf> = Vec::new();
    let result = (|| {
        for a in artifacts {
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(a.contents.as_bytes())?;
            tmp.as_file().sync_all()?;
            let target = dir.join(&a.name);
            tmp.persist(&target).map_err(|e| e.error)?;
            placed.push(target);
        }
        Ok(())
    })();
    if result.is_err() {
        for path in &placed {
            let _ = fs::remove_file(path);
        }
        if created_dir {
            let _ = fs::remove_dir(dir);
        }
    }
    result
}
