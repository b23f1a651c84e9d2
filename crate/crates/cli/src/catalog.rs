//! Built-in systems and JSON system files.

use std::path::Path;

use coulomb3::System;
use serde::{Deserialize, Serialize};

use crate::report::Units;
use crate::CliError;

/// Proton mass in electron masses.
pub const PROTON_MASS: f64 = 1836.1527;
/// Helium-4 nucleus mass in electron masses.
pub const ALPHA_PARTICLE_MASS: f64 = 7294.299536;

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub system: System,
    pub note: &'static str,
}

/// Built-in systems, in a fixed order.
pub fn catalog() -> Vec<CatalogEntry> {
    let entry = |key, charges, masses, note| CatalogEntry {
        key,
        system: System::new(charges, masses).expect("catalog systems are valid").with_label(key),
        note,
    };
    vec![
        entry("helium", [-1, -1, 2], [1.0, 1.0, ALPHA_PARTICLE_MASS], "two electrons and an alpha particle"),
        entry("ps-minus", [-1, 1, -1], [1.0, 1.0, 1.0], "two electrons and a positron"),
        entry("e+hydrogen", [1, -1, 1], [1.0, 1.0, PROTON_MASS], "positron, electron and proton"),
    ]
}

pub fn lookup(key: &str) -> Result<CatalogEntry, CliError> {
    let all = catalog();
    let available = all.iter().map(|e| e.key).collect::<Vec<_>>().join(", ");
    all.into_iter()
        .find(|e| e.key == key)
        .ok_or_else(|| CliError::UnknownSystem { key: key.to_owned(), available })
}

/// On-disk system description.
///
/// ```json
/// {"label": "helium", "charges": [-1, -1, 2], "masses": [1, 1, 7294.299536]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub label: String,
    pub charges: [i32; 3],
    pub masses: [f64; 3],
    /// Preferred output units; the command line overrides it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<Units>,
}

impl SystemConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn to_system(&self) -> Result<System, CliError> {
        Ok(System::new(self.charges, self.masses)?.with_label(self.label.clone()))
    }

    pub fn from_system(system: &System) -> Self {
        Self {
            label: system.label().unwrap_or("custom").to_owned(),
            charges: system.charges(),
            masses: system.masses(),
            units: None,
        }
    }
}
