use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// One output file before it is written.
#[derive(Clone, Debug)]
pub struct Artifact {
    pub object: String,
    pub n: usize,
    pub format: Format,
    /// Plot role, e.g. the point colour of a zero set.
    pub label: Option<String>,
    pub bytes: Vec<u8>,
}

impl Artifact {
    pub fn csv(object: &str, n: usize, text: String) -> Self {
        Artifact {
            object: object.to_string(),
            n,
            format: Format::Csv,
            label: None,
            bytes: text.into_bytes(),
        }
    }

    pub fn json<T: Serialize>(object: &str, n: usize, value: &T) -> Result<Self> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        Ok(Artifact {
            object: object.to_string(),
            n,
            format: Format::Json,
            label: None,
            bytes: text.into_bytes(),
        })
    }

    pub fn labelled(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn file_name(&self, experiment: &str) -> String {
        format!("{experiment}_{}_{}.{}", self.object, self.n, self.format.ext())
    }
}

/// Everything an experiment produced, ready to be written.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub experiment: String,
    pub config: serde_json::Value,
    pub summary: serde_json::Value,
    pub artifacts: Vec<Artifact>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub name: String,
    pub object: String,
    pub n: usize,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment: String,
    pub config: serde_json::Value,
    pub summary: serde_json::Value,
    pub files: Vec<FileEntry>,
}

impl Manifest {
    pub fn file_name(experiment: &str) -> String {
        format!("{experiment}_manifest.json")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes every artifact and the manifest into `dir`, creating it if needed.
pub fn write_outputs(run: &RunOutput, dir: &Path) -> Result<Manifest> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::with_capacity(run.artifacts.len());
    for a in &run.artifacts {
        let name = a.file_name(&run.experiment);
        if files.iter().any(|f: &FileEntry| f.name == name) {
            return Err(Error::InvalidInput(format!("two artifacts named {name}")));
        }
        let path = dir.join(&name);
        fs::write(&path, &a.bytes).map_err(|e| Error::io(&path, e))?;
        files.push(FileEntry {
            name,
            object: a.object.clone(),
            n: a.n,
            format: a.format,
            label: a.label.clone(),
            bytes: a.bytes.len(),
            sha256: sha256_hex(&a.bytes),
        });
    }
    let manifest = Manifest {
        experiment: run.experiment.clone(),
        config: run.config.clone(),
        summary: run.summary.clone(),
        files,
    };
    let path = dir.join(Manifest::file_name(&run.experiment));
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(artifacts: Vec<Artifact>) -> RunOutput {
        RunOutput {
            experiment: "demo".into(),
            config: serde_json::json!({"n": [1]}),
            summary: serde_json::json!({}),
            artifacts,
        }
    }

    #[test]
    fn empty_run_has_empty_file_list() {
        let dir = tempfile::tempdir().unwrap();
        let m = write_outputs(&run(Vec::new()), dir.path()).unwrap();
        assert!(m.files.is_empty());
        assert_eq!(Manifest::read(&dir.path().join("demo_manifest.json")).unwrap(), m);
    }

    #[test]
    fn names_and_hashes_are_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let a = Artifact::csv("Q2", 7, "re,im,source,n\n".into()).labelled("black");
        let m1 = write_outputs(&run(vec![a.clone()]), dir.path()).unwrap();
        let m2 = write_outputs(&run(vec![a]), dir.path()).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(m1.files[0].name, "demo_Q2_7.csv");
        assert_eq!(m1.files[0].sha256, sha256_hex(b"re,im,source,n\n"));
    }

    #[test]
    fn unicode_directory() {
        let dir = tempfile::tempdir().unwrap();
        let sub = dir.path().join("résultats-Δ");
        let m = write_outputs(&run(vec![Artifact::csv("x", 1, "a\n".into())]), &sub).unwrap();
        assert_eq!(fs::read(sub.join(&m.files[0].name)).unwrap(), b"a\n");
    }

    #[test]
    fn unwritable_directory_names_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "x").unwrap();
        match write_outputs(&run(Vec::new()), &blocker.join("sub")) {
            Err(Error::Io { path, .. }) => assert!(path.ends_with("sub")),
            other => panic!("expected I/O error, got {other:?}"),
        }
    }
}
