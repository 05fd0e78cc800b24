//! Hashes tying every output to the exact bytes and settings that made it.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;
use crate::files;

#[derive(Debug, Clone, Default)]
pub struct Provenance {
    entries: BTreeMap<String, String>,
}

impl Provenance {
    /// Starts from the subcommand name and its settings (output paths and
    /// worker count excluded).
    pub fn new(command: &str, settings: &impl Serialize) -> Provenance {
        let mut p = Provenance::default();
        p.entries.insert("command".into(), command.into());
        p.entries.insert("config_sha256".into(), files::sha256_hex(&serde_json::to_vec(settings).expect("serializable")));
        p.entries.insert("tool_version".into(), env!("CARGO_PKG_VERSION").into());
        p
    }

    pub fn input(&mut self, name: &str, path: &Path) -> Result<(), CliError> {
        let bytes = files::read(path)?;
        self.entries.insert(format!("input:{name}"), files::sha256_hex(&bytes));
        Ok(())
    }

    pub fn insert(&mut self, key: String, value: String) {
        self.entries.insert(key, value);
    }

    /// All entries plus `provenance_sha256` over them.
    pub fn finish(mut self) -> BTreeMap<String, String> {
        let joined: String = self.entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect();
        self.entries.insert("provenance_sha256".into(), files::sha256_hex(joined.as_bytes()));
        self.entries
    }
}

/// A serialized body with a provenance block appended.
#[derive(Serialize)]
pub struct WithProvenance<'a, T: Serialize> {
    #[serde(flatten)]
    pub body: &'a T,
    pub provenance: BTreeMap<String, String>,
}
