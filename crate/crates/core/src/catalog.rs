//! Built-in catalog of example maps and direction sets.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arcs::{lewis_cross, ArcSet};
use crate::error::{Error, Result};
use crate::expr::HarmonicMap;

const BUILTIN: &str = include_str!("../data/catalog.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    /// How the expected values were obtained: "stated" (given with the
    /// example), "elementary" (immediate from the formula) or "computed".
    pub basis: String,
    /// Expected direction arcs in degrees, when known.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub directions_deg: Option<Vec<(f64, f64)>>,
    pub antipodal_pair: bool,
}

impl Expected {
    pub fn directions(&self) -> Option<ArcSet> {
        self.directions_deg
            .as_ref()
            .map(|d| ArcSet::from_arcs(d.iter().map(|(a, b)| (a.to_radians(), b.to_radians()))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    Map,
    Arcs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub kind: EntryKind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub literal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub arcs_deg: Option<Vec<(f64, f64)>>,
    pub sha256: String,
    pub description: String,
    pub expected: Expected,
}

#[derive(Debug, Clone)]
pub enum CatalogItem {
    Map(HarmonicMap),
    Arcs(ArcSet),
}

pub fn sha256_hex(s: &str) -> String {
    format!("{:x}", Sha256::digest(s.as_bytes()))
}

fn canonical_arcs(arcs: &[(f64, f64)]) -> String {
    let parts: Vec<String> = arcs.iter().map(|(a, b)| format!("[{},{}]", a, b)).collect();
    format!("[{}]", parts.join(","))
}

impl CatalogEntry {
    /// The text the checksum covers.
    pub fn payload(&self) -> Result<String> {
        match self.kind {
            EntryKind::Map => self.literal.clone().ok_or_else(|| Error::Catalog(format!("{}: missing literal", self.name))),
            EntryKind::Arcs => self
                .arcs_deg
                .as_deref()
                .map(canonical_arcs)
                .ok_or_else(|| Error::Catalog(format!("{}: missing arcs", self.name))),
        }
    }

    pub fn verify(&self) -> Result<()> {
        let got = sha256_hex(&self.payload()?);
        if got != self.sha256 {
            return Err(Error::Catalog(format!("{}: checksum mismatch (expected {}, got {})", self.name, self.sha256, got)));
        }
        Ok(())
    }

    pub fn item(&self) -> Result<CatalogItem> {
        self.verify()?;
        match self.kind {
            EntryKind::Map => Ok(CatalogItem::Map(HarmonicMap::parse(&self.payload()?)?.named(self.name.clone()))),
            EntryKind::Arcs => {
                let arcs = self.arcs_deg.as_deref().unwrap_or_default();
                Ok(CatalogItem::Arcs(ArcSet::from_arcs(arcs.iter().map(|(a, b)| (a.to_radians(), b.to_radians())))))
            }
        }
    }

    pub fn map(&self) -> Result<HarmonicMap> {
        match self.item()? {
            CatalogItem::Map(f) => Ok(f),
            CatalogItem::Arcs(_) => Err(Error::Catalog(format!("{} is a direction set, not a map", self.name))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub version: u32,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn builtin() -> Result<Self> {
        Self::from_json(BUILTIN)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Parses and verifies every checksum.
    pub fn from_json(src: &str) -> Result<Self> {
        let cat: Catalog = serde_json::from_str(src)?;
        for e in &cat.entries {
            e.verify()?;
        }
        Ok(cat)
    }

    pub fn get(&self, name: &str) -> Result<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name).ok_or_else(|| {
            let names: Vec<&str> = self.entries.iter().map(|e| e.name.as_str()).collect();
            Error::Catalog(format!("no entry '{}' (known: {})", name, names.join(", ")))
        })
    }

    pub fn maps(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(|e| e.kind == EntryKind::Map)
    }
}

/// The Lewis direction set as stored in the catalog; agrees with
/// [`lewis_cross`].
pub fn lewis_entry_matches() -> Result<bool> {
    let cat = Catalog::builtin()?;
    match cat.get("lewis-cross")?.item()? {
        CatalogItem::Arcs(a) => Ok(a.hausdorff(&lewis_cross()) < 1e-12),
        CatalogItem::Map(_) => Ok(false),
    }
}
