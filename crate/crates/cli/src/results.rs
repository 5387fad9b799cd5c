use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::manifest::RunManifest;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotResults {
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
    pub seed: u64,
    pub manifest: RunManifest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactResults {
    pub probabilities: BTreeMap<String, f64>,
    pub manifest: RunManifest,
}

/// Either shape of `simulate` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Results {
    Shots(ShotResults),
    Exact(ExactResults),
}

impl Results {
    pub fn manifest(&self) -> &RunManifest {
        match self {
            Results::Shots(r) => &r.manifest,
            Results::Exact(r) => &r.manifest,
        }
    }

    pub fn keys(&self) -> Box<dyn Iterator<Item = &str> + '_> {
        match self {
            Results::Shots(r) => Box::new(r.counts.keys().map(String::as_str)),
            Results::Exact(r) => Box::new(r.probabilities.keys().map(String::as_str)),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}
