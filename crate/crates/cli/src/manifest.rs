use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// What a run was computed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputSpec {
    Board {
        levels: usize,
        /// `unbiased`, `uniform` or `per_peg`.
        bias: String,
        #[serde(skip_serializing_if = "Vec::is_empty", default)]
        angles: Vec<String>,
    },
    Peg {
        #[serde(skip_serializing_if = "Option::is_none", default)]
        theta: Option<String>,
    },
    File {
        path: PathBuf,
        bytes: usize,
        /// SHA-256 of the file contents, hex.
        sha256: String,
    },
}

impl InputSpec {
    pub fn file(path: &Path, contents: &str) -> Self {
        InputSpec::File {
            path: path.to_path_buf(),
            bytes: contents.len(),
            sha256: format!("{:x}", Sha256::digest(contents.as_bytes())),
        }
    }

    /// Board depth when the input names one directly.
    pub fn levels(&self) -> Option<usize> {
        match self {
            InputSpec::Board { levels, .. } => Some(*levels),
            _ => None,
        }
    }
}

/// Everything needed to reproduce an output. Worker count is deliberately
/// absent: outputs do not depend on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub input: InputSpec,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub shots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub exact: bool,
    pub version: String,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(command: &str, input: InputSpec) -> Self {
        Self {
            command: command.to_owned(),
            input,
            shots: None,
            seed: None,
            exact: false,
            version: env!("CARGO_PKG_VERSION").to_owned(),
            outputs: Vec::new(),
        }
    }

    /// Writes the manifest next to `output` as `<output>.manifest.json`.
    pub fn write_beside(&self, output: &Path) -> anyhow::Result<PathBuf> {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest.json");
        let path = PathBuf::from(name);
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(&path, text)?;
        Ok(path)
    }
}
