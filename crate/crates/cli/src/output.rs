//! All-or-nothing output: files are written to a hidden staging directory
//! next to the destination and moved into place only when the command
//! succeeds. A failed command leaves the destination untouched.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tempfile::TempDir;

use crate::CliError;

pub struct Staging {
    dir: TempDir,
    dest: PathBuf,
    files: Vec<String>,
}

#[derive(Serialize)]
struct Manifest<'a, C: Serialize> {
    command: &'a str,
    config: &'a C,
    seeds: &'a std::collections::BTreeMap<String, String>,
    files: &'a [String],
}

impl Staging {
    pub fn new(dest: &Path) -> Result<Self, CliError> {
        let parent = match dest.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&parent).map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", parent.display())))?;
        let dir = tempfile::Builder::new()
            .prefix(".spi-staging-")
            .tempdir_in(&parent)
            .map_err(|e| CliError::Runtime(format!("cannot stage output in {}: {e}", parent.display())))?;
        Ok(Self { dir, dest: dest.to_path_buf(), files: Vec::new() })
    }

    /// Path inside the staging area for `name` (may contain `/`).
    pub fn path(&mut self, name: &str) -> Result<PathBuf, CliError> {
        let p = self.dir.path().join(name);
        if let Some(parent) = p.parent() {
            fs::create_dir_all(parent).map_err(|e| CliError::Runtime(format!("{}: {e}", parent.display())))?;
        }
        self.files.push(name.to_string());
        Ok(p)
    }

    pub fn write(&mut self, name: &str, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
        let p = self.path(name)?;
        fs::write(&p, contents).map_err(|e| CliError::Runtime(format!("{}: {e}", p.display())))
    }

    /// Writes `manifest.json` and moves everything into the destination.
    pub fn commit<C: Serialize>(
        mut self,
        command: &str,
        config: &C,
        seeds: &std::collections::BTreeMap<String, String>,
    ) -> Result<Vec<String>, CliError> {
        let mut files = self.files.clone();
        files.sort();
        let manifest = Manifest { command, config, seeds, files: &files };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        self.write("manifest.json", text)?;
        fs::create_dir_all(&self.dest)
            .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", self.dest.display())))?;
        for name in &self.files {
            let from = self.dir.path().join(name);
            let to = self.dest.join(name);
            if let Some(parent) = to.parent() {
                fs::create_dir_all(parent).map_err(|e| CliError::Runtime(format!("{}: {e}", parent.display())))?;
            }
            fs::rename(&from, &to).map_err(|e| CliError::Runtime(format!("{}: {e}", to.display())))?;
        }
        Ok(std::mem::take(&mut self.files))
    }
}
