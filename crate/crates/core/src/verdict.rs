//! Verdict reports shared by the checkers.
//!
//! A verdict records what was checked on a finite sample, never a proof:
//! every report carries the sampling radius and density it was computed
//! from.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    Lewis,
    ThmAntipodal,
    ThmHalfplane,
    CorAlpha,
    ThmMurdochKuran,
    IneqLog2,
    /// Range of a rescaled map against the direction set of its source.
    RescaledRange,
    /// Local zero-set coincidence of a pair `(U, V)`.
    Cleaning,
    /// Sublinear growth of the upper envelope `Φ`.
    PhiGrowth,
}

impl TheoremId {
    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::Lewis => "lewis",
            TheoremId::ThmAntipodal => "thm_antipodal",
            TheoremId::ThmHalfplane => "thm_halfplane",
            TheoremId::CorAlpha => "cor_alpha",
            TheoremId::ThmMurdochKuran => "thm_murdoch_kuran",
            TheoremId::IneqLog2 => "ineq_log2",
            TheoremId::RescaledRange => "rescaled_range",
            TheoremId::Cleaning => "cleaning",
            TheoremId::PhiGrowth => "phi_growth",
        }
    }
}

/// A concrete point where a condition was observed to fail (or hold).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<Complex64>,
    pub detail: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub values: BTreeMap<String, f64>,
}

impl Witness {
    pub fn at(z: Complex64, w: Complex64, detail: impl Into<String>) -> Self {
        Self { z: Some(z), w: Some(w), detail: detail.into(), values: BTreeMap::new() }
    }

    pub fn note(detail: impl Into<String>) -> Self {
        Self { z: None, w: None, detail: detail.into(), values: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.values.insert(key.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

/// Witness lists are capped so reports stay readable.
pub const MAX_WITNESSES: usize = 8;

impl Check {
    pub fn pass() -> Self {
        Self { holds: true, witnesses: Vec::new() }
    }

    pub fn fail(witness: Witness) -> Self {
        Self { holds: false, witnesses: vec![witness] }
    }

    /// Builds a check from collected violations; holds iff there are none.
    pub fn from_violations(mut violations: Vec<Witness>) -> Self {
        violations.truncate(MAX_WITNESSES);
        Self { holds: violations.is_empty(), witnesses: violations }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub theorem: TheoremId,
    /// False when the checker cannot evaluate the theorem's hypothesis on
    /// this input (e.g. a polynomial requirement is not met).
    pub applicable: bool,
    pub hypothesis: Check,
    pub conclusion: Check,
    pub params: BTreeMap<String, Value>,
    pub sampling: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

impl TheoremVerdict {
    pub fn new(theorem: TheoremId, hypothesis: Check, conclusion: Check) -> Self {
        Self {
            theorem,
            applicable: true,
            hypothesis,
            conclusion,
            params: BTreeMap::new(),
            sampling: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn sampled(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.sampling.insert(key.to_string(), value.into());
        self
    }

    pub fn noted(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// A theorem says hypothesis ⇒ conclusion; a verdict contradicts it only
    /// when the hypothesis was observed to hold and the conclusion did not.
    pub fn consistent(&self) -> bool {
        !self.applicable || !self.hypothesis.holds || self.conclusion.holds
    }

    /// Both flags true.
    pub fn holds(&self) -> bool {
        self.hypothesis.holds && self.conclusion.holds
    }
}
