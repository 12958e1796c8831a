//! Simplicial models and first-order Kripke models.
//!
//! Both kinds are validated on construction and immutable afterwards. The
//! [`EpistemicModel`] trait is the common surface used by evaluation and
//! bisimulation: points are facets or worlds, addressed by index.

mod doc;
pub mod fixtures;
mod kripke;
mod lep;
mod simplicial;

pub use doc::{default_facet_name, FacetDoc, KripkeDoc, ModelDoc, SimplicialDoc, VertexDoc, WorldDoc};
pub use kripke::{validate_kripke, KripkeIssue, KripkeModel, World};
pub use lep::{check_local_epistemic, properize, LepReport, LepViolation, NotLocalEpistemic};
pub use simplicial::{validate_simplicial, Facet, SimplicialIssue, SimplicialModel, Vertex};

use crate::syntax::{AgentSet, PredId};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

pub(crate) static EMPTY_AGENTS: AgentSet = AgentSet::new();

/// Points, live agents, predicate extensions and group successors.
pub trait EpistemicModel {
    /// The declared agent universe.
    fn agents(&self) -> &AgentSet;

    /// Number of points (facets or worlds).
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn point_name(&self, point: usize) -> &str;

    fn point_index(&self, name: &str) -> Option<usize>;

    /// χ[F] or δ(w).
    fn live(&self, point: usize) -> &AgentSet;

    /// χ[F ∩ ℓ(p)] or ρ(p, w).
    fn extension(&self, pred: &PredId, point: usize) -> &AgentSet;

    fn predicates(&self) -> BTreeSet<PredId>;

    /// Points reachable for the group `group`, in index order. The empty
    /// group reaches every point.
    fn successors(&self, point: usize, group: &AgentSet) -> Vec<usize>;
}

#[derive(Debug, Clone)]
pub enum Model {
    Simplicial(SimplicialModel),
    Kripke(KripkeModel),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Simplicial,
    Kripke,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Simplicial => "simplicial",
            ModelKind::Kripke => "kripke",
        })
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid model document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid simplicial model:\n  {}", join_lines(.0))]
    Simplicial(Vec<SimplicialIssue>),
    #[error("invalid kripke model:\n  {}", join_lines(.0))]
    Kripke(Vec<KripkeIssue>),
}

fn join_lines<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n  ")
}

impl Model {
    pub fn from_doc(doc: &ModelDoc) -> Result<Self, ModelError> {
        match doc {
            ModelDoc::Simplicial(d) => SimplicialModel::from_doc(d)
                .map(Model::Simplicial)
                .map_err(ModelError::Simplicial),
            ModelDoc::Kripke(d) => KripkeModel::from_doc(d).map(Model::Kripke).map_err(ModelError::Kripke),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        Self::from_doc(&serde_json::from_str(text)?)
    }

    pub fn to_doc(&self) -> ModelDoc {
        match self {
            Model::Simplicial(m) => ModelDoc::Simplicial(m.to_doc()),
            Model::Kripke(m) => ModelDoc::Kripke(m.to_doc()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("model documents serialize")
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Simplicial(_) => ModelKind::Simplicial,
            Model::Kripke(_) => ModelKind::Kripke,
        }
    }

    pub fn as_dyn(&self) -> &dyn EpistemicModel {
        match self {
            Model::Simplicial(m) => m,
            Model::Kripke(m) => m,
        }
    }
}

/// A model together with one of its points.
#[derive(Debug, Clone, Copy)]
pub enum PointedModel<'m> {
    Simplicial(&'m SimplicialModel, usize),
    Kripke(&'m KripkeModel, usize),
}

impl<'m> PointedModel<'m> {
    /// Looks up `point` by name; `None` if the model has no such point.
    pub fn new(model: &'m Model, point: &str) -> Option<Self> {
        match model {
            Model::Simplicial(m) => m.point_index(point).map(|i| PointedModel::Simplicial(m, i)),
            Model::Kripke(m) => m.point_index(point).map(|i| PointedModel::Kripke(m, i)),
        }
    }

    pub fn model(&self) -> &'m dyn EpistemicModel {
        match *self {
            PointedModel::Simplicial(m, _) => m,
            PointedModel::Kripke(m, _) => m,
        }
    }

    pub fn point(&self) -> usize {
        match *self {
            PointedModel::Simplicial(_, p) | PointedModel::Kripke(_, p) => p,
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            PointedModel::Simplicial(..) => ModelKind::Simplicial,
            PointedModel::Kripke(..) => ModelKind::Kripke,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_both_kinds_from_json() {
        let m = Model::from_json(fixtures::INTRO_JSON).unwrap();
        assert_eq!(m.kind(), ModelKind::Simplicial);
        let m = Model::from_json(fixtures::HEX_KRIPKE_JSON).unwrap();
        assert_eq!(m.kind(), ModelKind::Kripke);
        assert_eq!(m.as_dyn().len(), 6);
    }

    #[test]
    fn errors_name_the_field() {
        let err = Model::from_json(
            r#"{"kind":"simplicial","agents":["a"],"vertices":[{"id":"v","color":"a"}],"facets":[["w"]]}"#,
        )
        .unwrap_err();
        assert!(
            err.to_string().contains("facets: `w` lists unknown vertex `w`"),
            "{err}"
        );
        let err = Model::from_json(r#"{"kind":"simplicial","agents":["a"],"vertices":[],"facets":[],"extra":1}"#)
            .unwrap_err();
        assert!(err.to_string().contains("unknown field"), "{err}");
    }

    #[test]
    fn pointed_lookup() {
        let m = Model::Simplicial(fixtures::intro());
        let p = PointedModel::new(&m, "G").unwrap();
        assert_eq!(p.point(), 1);
        assert!(PointedModel::new(&m, "H").is_none());
    }
}
