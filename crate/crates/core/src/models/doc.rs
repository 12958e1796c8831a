//! JSON model documents.
//!
//! ```json
//! {"kind":"simplicial","agents":["a","b"],
//!  "vertices":[{"id":"v1","color":"a"},{"id":"v2","color":"b"}],
//!  "facets":[["v1","v2"]],
//!  "labeling":{"p":["v1"]}}
//!
//! {"kind":"kripke","agents":["a"],
//!  "worlds":[{"id":"w1","domain":["a"],"interp":{"p":["a"]}}],
//!  "relations":{"a":[["w1","w1"]]}}
//! ```
//!
//! A facet may also be written `{"id":"F","vertices":[...]}` to give it a
//! name; unnamed facets are called by their sorted vertex ids joined with
//! `+`. Reflexive pairs are never added implicitly.

use crate::syntax::{AgentId, PredId};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelDoc {
    Simplicial(SimplicialDoc),
    Kripke(KripkeDoc),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplicialDoc {
    pub agents: Vec<AgentId>,
    pub vertices: Vec<VertexDoc>,
    pub facets: Vec<FacetDoc>,
    #[serde(default)]
    pub labeling: BTreeMap<PredId, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    pub color: AgentId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FacetDoc {
    Plain(Vec<String>),
    Named { id: String, vertices: Vec<String> },
}

impl FacetDoc {
    pub fn vertices(&self) -> &[String] {
        match self {
            FacetDoc::Plain(vs) | FacetDoc::Named { vertices: vs, .. } => vs,
        }
    }

    pub fn name(&self) -> String {
        match self {
            FacetDoc::Named { id, .. } => id.clone(),
            FacetDoc::Plain(vs) => default_facet_name(vs.iter().map(String::as_str)),
        }
    }
}

/// Sorted vertex ids joined with `+`.
pub fn default_facet_name<'a>(vertices: impl IntoIterator<Item = &'a str>) -> String {
    let mut ids: Vec<&str> = vertices.into_iter().collect();
    ids.sort_unstable();
    ids.join("+")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KripkeDoc {
    pub agents: Vec<AgentId>,
    pub worlds: Vec<WorldDoc>,
    #[serde(default)]
    pub relations: BTreeMap<AgentId, Vec<(String, String)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldDoc {
    pub id: String,
    pub domain: Vec<AgentId>,
    #[serde(default)]
    pub interp: BTreeMap<PredId, Vec<AgentId>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn facets_accept_both_spellings() {
        let doc: SimplicialDoc = serde_json::from_str(
            r#"{"agents":["a"],"vertices":[{"id":"v","color":"a"}],
                "facets":[["v"],{"id":"F","vertices":["v"]}]}"#,
        )
        .unwrap();
        assert_eq!(doc.facets[0].name(), "v");
        assert_eq!(doc.facets[1].name(), "F");
    }

    #[test]
    fn kind_tag_selects_the_variant() {
        let doc: ModelDoc = serde_json::from_str(
            r#"{"kind":"kripke","agents":["a"],"worlds":[{"id":"w","domain":["a"]}],
                "relations":{"a":[["w","w"]]}}"#,
        )
        .unwrap();
        assert!(matches!(doc, ModelDoc::Kripke(_)));
        let err = serde_json::from_str::<ModelDoc>(r#"{"kind":"graph"}"#).unwrap_err();
        assert!(err.to_string().contains("unknown variant"));
    }
}
