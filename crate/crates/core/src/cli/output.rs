//! Output directory bookkeeping and the run manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub config_sha256: String,
    pub config: serde_json::Value,
    pub files: Vec<ManifestEntry>,
}

impl Manifest {
    /// Re-hashes every listed file under `dir` and reports the first mismatch.
    pub fn verify(&self, dir: &Path) -> Result<()> {
        for f in &self.files {
            let p = dir.join(&f.path);
            let bytes = std::fs::read(&p).map_err(|e| Error::io(&p, e))?;
            if sha256_hex(&bytes) != f.sha256 {
                return Err(Error::config(format!("{} does not match its manifest hash", f.path)));
            }
        }
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let p = dir.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: p.display().to_string(),
            source,
        })
    }
}

/// Writes plain file names into one directory and remembers what it wrote.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    command: String,
    config: serde_json::Value,
    config_sha256: String,
    seed: Option<u64>,
    files: BTreeMap<String, ManifestEntry>,
}

impl OutputDir {
    /// Creates `root` if needed. `config` is the effective configuration
    /// echoed into the manifest; its canonical JSON is what gets hashed.
    pub fn create(root: &Path, command: &str, config: serde_json::Value, seed: Option<u64>) -> Result<Self> {
        std::fs::create_dir_all(root).map_err(|e| Error::io(root, e))?;
        let canonical = serde_json::to_vec(&config).expect("JSON value serializes");
        Ok(OutputDir {
            root: root.to_path_buf(),
            command: command.to_string(),
            config_sha256: sha256_hex(&canonical),
            config,
            seed,
            files: BTreeMap::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn config_sha256(&self) -> &str {
        &self.config_sha256
    }

    /// First line of every CSV this run writes.
    pub fn csv_comment(&self) -> String {
        let seed = self.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        format!(
            "# snn-memory {} command={} seed={} config_sha256={}\n",
            env!("CARGO_PKG_VERSION"),
            self.command,
            seed,
            self.config_sha256
        )
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let plain = !name.is_empty()
            && name != "."
            && name != ".."
            && !name.contains(['/', '\\'])
            && name != MANIFEST_FILE;
        if !plain {
            return Err(Error::config(format!("refusing to write {name:?} outside the output directory")));
        }
        let path = self.root.join(name);
        std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        self.files.insert(
            name.to_string(),
            ManifestEntry {
                path: name.to_string(),
                sha256: sha256_hex(bytes),
                bytes: bytes.len() as u64,
            },
        );
        Ok(path)
    }

    /// Writes `body` (header + rows) preceded by the metadata comment.
    pub fn write_csv(&mut self, name: &str, body: &str) -> Result<PathBuf> {
        let text = self.csv_comment() + body;
        self.write(name, text.as_bytes())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value).expect("value serializes");
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn manifest(&self) -> Manifest {
        Manifest {
            schema_version: MANIFEST_SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: self.command.clone(),
            config_sha256: self.config_sha256.clone(),
            config: self.config.clone(),
            files: self.files.values().cloned().collect(),
        }
    }

    pub fn finish(self) -> Result<Manifest> {
        let m = self.manifest();
        let path = self.root.join(MANIFEST_FILE);
        let mut text = serde_json::to_string_pretty(&m).expect("manifest serializes");
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        Ok(m)
    }
}
