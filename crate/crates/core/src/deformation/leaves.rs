use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{FiniteGroup, Flavor, LeafTriple};

use super::DeformationError;

/// Orders of a cyclic leaf triple `Z_{s/g} -> Z_s -> Z_g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafPair {
    pub s: usize,
    pub g: usize,
}

/// Leaf table as read from TOML: a default pair plus per-label overrides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeafSpec {
    #[serde(default = "default_s")]
    pub s: usize,
    #[serde(default = "default_g")]
    pub g: usize,
    #[serde(default)]
    pub labels: BTreeMap<String, LeafPair>,
}

fn default_s() -> usize {
    4
}

fn default_g() -> usize {
    2
}

impl Default for LeafSpec {
    fn default() -> Self {
        Self {
            s: default_s(),
            g: default_g(),
            labels: BTreeMap::new(),
        }
    }
}

impl LeafSpec {
    pub fn from_toml_str(src: &str) -> Result<Self, DeformationError> {
        toml::from_str(src).map_err(|e| DeformationError::Leaves(e.to_string()))
    }

    pub fn assignments(&self) -> Result<LeafAssignments, DeformationError> {
        let default = LeafTriple::cyclic(self.s, self.g)?;
        let labels = self
            .labels
            .iter()
            .map(|(k, p)| Ok((k.clone(), LeafTriple::cyclic(p.s, p.g)?)))
            .collect::<Result<_, DeformationError>>()?;
        Ok(LeafAssignments { default, labels })
    }
}

/// Finite leaf triples for every atom label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LeafAssignments {
    pub default: LeafTriple,
    pub labels: BTreeMap<String, LeafTriple>,
}

impl LeafAssignments {
    pub fn uniform(triple: LeafTriple) -> Self {
        Self {
            default: triple,
            labels: BTreeMap::new(),
        }
    }

    pub fn triple(&self, label: &str) -> &LeafTriple {
        self.labels.get(label).unwrap_or(&self.default)
    }

    pub fn group(&self, label: &str, flavor: Flavor) -> Arc<FiniteGroup> {
        let t = self.triple(label);
        match flavor {
            Flavor::Delta => t.delta.clone(),
            Flavor::S => t.s.clone(),
            Flavor::G => t.g.clone(),
        }
    }
}
