use serde::{Deserialize, Serialize};

use super::{FinitePoset, PosetError};

/// Wire format: `{"elements": [...], "le": [[a, b], ...]}`.
///
/// On input `le` may be any relation whose reflexive-transitive closure is
/// antisymmetric. On output it is the full closed relation with pairs
/// sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub le: Vec<(String, String)>,
}

impl PosetJson {
    pub fn into_poset(self) -> Result<FinitePoset, PosetError> {
        FinitePoset::from_relation(&self.elements, &self.le)
    }
}

impl From<&FinitePoset> for PosetJson {
    fn from(p: &FinitePoset) -> Self {
        let mut le: Vec<(String, String)> = p
            .relation()
            .map(|(a, b)| (p.name(a).to_owned(), p.name(b).to_owned()))
            .collect();
        le.sort();
        PosetJson {
            elements: p.names().to_vec(),
            le,
        }
    }
}

impl FinitePoset {
    pub fn from_json_str(text: &str) -> Result<FinitePoset, PosetError> {
        let raw: PosetJson = serde_json::from_str(text).map_err(|e| PosetError::Json(e.to_string()))?;
        raw.into_poset()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PosetJson::from(self)).expect("plain data")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&PosetJson::from(self)).expect("plain data")
    }
}
