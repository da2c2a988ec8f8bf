//! Loading the country table from disk or from the copy compiled into the
//! binary, with a SHA-256 fingerprint.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use goodwin_core::{load_dataset, CountryRecord, BUNDLED_TABLE};
use sha2::{Digest, Sha256};

/// SHA-256 of the bundled `table1.csv`.
pub const BUNDLED_SHA256: &str = "38e6149cf7b529bcd5fda6fc957c9c0b80d33550c381c9129f3822256e9da07b";

pub struct LoadedDataset {
    pub records: Vec<CountryRecord>,
    pub sha256: String,
    /// Where the data came from, for diagnostics.
    pub origin: String,
}

impl LoadedDataset {
    pub fn is_bundled_content(&self) -> bool {
        self.sha256 == BUNDLED_SHA256
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn load(path: Option<&Path>) -> Result<LoadedDataset> {
    let (text, origin) = match path {
        Some(p) => (
            fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
            p.display().to_string(),
        ),
        None => (BUNDLED_TABLE.to_string(), "bundled table".to_string()),
    };
    let records = load_dataset(&text).with_context(|| format!("loading {origin}"))?;
    Ok(LoadedDataset {
        records,
        sha256: sha256_hex(text.as_bytes()),
        origin,
    })
}

pub fn find<'a>(records: &'a [CountryRecord], name: &str) -> Result<&'a CountryRecord> {
    records
        .iter()
        .find(|r| r.name.eq_ignore_ascii_case(name))
        .with_context(|| {
            let names: Vec<&str> = records.iter().map(|r| r.name.as_str()).collect();
            format!(
                "unknown country {name:?}; expected one of {}",
                names.join(", ")
            )
        })
}
