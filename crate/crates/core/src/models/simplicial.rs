//! Simplicial models, stored by their facets.
//!
//! Faces are the non-empty subsets of the listed facets and are never
//! materialized except by [`SimplicialModel::all_faces`].

use super::doc::{default_facet_name, FacetDoc, SimplicialDoc, VertexDoc};
use super::{EpistemicModel, EMPTY_AGENTS};
use crate::syntax::{is_valid_token, AgentId, AgentSet, PredId};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub color: AgentId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub name: String,
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
}

/// One violated simplicial-model invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplicialIssue {
    NoFacets,
    InvalidAgent(String),
    InvalidPredicate(String),
    DuplicateVertex(String),
    UnknownColor {
        vertex: String,
        color: AgentId,
    },
    EmptyFacet {
        facet: String,
    },
    UnknownVertex {
        facet: String,
        vertex: String,
    },
    RepeatedVertex {
        facet: String,
        vertex: String,
    },
    DuplicateFacetName(String),
    ColorClash {
        facet: String,
        color: AgentId,
        first: String,
        second: String,
    },
    NotMaximal {
        facet: String,
        superset: String,
    },
    DuplicateFacet {
        facet: String,
        other: String,
    },
    UncoveredVertex(String),
    UnknownLabeledVertex {
        pred: PredId,
        vertex: String,
    },
}

impl fmt::Display for SimplicialIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SimplicialIssue::*;
        match self {
            NoFacets => write!(f, "facets: the model has no facets"),
            InvalidAgent(a) => write!(f, "agents: `{a}` is not a valid agent token"),
            InvalidPredicate(p) => write!(f, "labeling: `{p}` is not a valid predicate token"),
            DuplicateVertex(v) => write!(f, "vertices: duplicate id `{v}`"),
            UnknownColor { vertex, color } => {
                write!(f, "vertices: `{vertex}` has undeclared color `{color}`")
            }
            EmptyFacet { facet } => write!(f, "facets: `{facet}` is empty"),
            UnknownVertex { facet, vertex } => {
                write!(f, "facets: `{facet}` lists unknown vertex `{vertex}`")
            }
            RepeatedVertex { facet, vertex } => {
                write!(f, "facets: `{facet}` lists vertex `{vertex}` twice")
            }
            DuplicateFacetName(n) => write!(f, "facets: duplicate facet name `{n}`"),
            ColorClash {
                facet,
                color,
                first,
                second,
            } => write!(
                f,
                "facets: coloring is not injective on `{facet}`: `{first}` and `{second}` are both colored `{color}`"
            ),
            NotMaximal { facet, superset } => {
                write!(f, "facets: `{facet}` is contained in `{superset}`")
            }
            DuplicateFacet { facet, other } => {
                write!(f, "facets: `{facet}` and `{other}` have the same vertices")
            }
            UncoveredVertex(v) => write!(f, "vertices: `{v}` belongs to no facet"),
            UnknownLabeledVertex { pred, vertex } => {
                write!(f, "labeling: `{pred}` refers to unknown vertex `{vertex}`")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplicialModel {
    agents: AgentSet,
    vertices: Vec<Vertex>,
    facets: Vec<Facet>,
    labeling: BTreeMap<PredId, BTreeSet<usize>>,
    vertex_index: HashMap<String, usize>,
    facet_index: HashMap<String, usize>,
    /// χ[F] per facet.
    colors: Vec<AgentSet>,
    /// χ[F ∩ G] per pair of facets.
    shared: Vec<Vec<AgentSet>>,
    /// χ[F ∩ ℓ(p)] per facet.
    extensions: Vec<BTreeMap<PredId, AgentSet>>,
}

/// Checks a document against the simplicial-model invariants.
pub fn validate_simplicial(doc: &SimplicialDoc) -> Result<(), Vec<SimplicialIssue>> {
    SimplicialModel::from_doc(doc).map(|_| ())
}

impl SimplicialModel {
    pub fn from_doc(doc: &SimplicialDoc) -> Result<Self, Vec<SimplicialIssue>> {
        let mut issues = Vec::new();
        let agents: AgentSet = doc.agents.iter().cloned().collect();
        for a in &agents {
            if !is_valid_token(a.as_str()) {
                issues.push(SimplicialIssue::InvalidAgent(a.to_string()));
            }
        }
        let mut vertex_index = HashMap::new();
        let mut vertices = Vec::new();
        for VertexDoc { id, color } in &doc.vertices {
            if vertex_index.insert(id.clone(), vertices.len()).is_some() {
                issues.push(SimplicialIssue::DuplicateVertex(id.clone()));
                continue;
            }
            if !agents.contains(color) {
                issues.push(SimplicialIssue::UnknownColor {
                    vertex: id.clone(),
                    color: color.clone(),
                });
            }
            vertices.push(Vertex {
                id: id.clone(),
                color: color.clone(),
            });
        }
        let mut facets = Vec::new();
        for fd in &doc.facets {
            let name = fd.name();
            let mut members = BTreeSet::new();
            for v in fd.vertices() {
                match vertex_index.get(v) {
                    Some(&i) => {
                        if !members.insert(i) {
                            issues.push(SimplicialIssue::RepeatedVertex {
                                facet: name.clone(),
                                vertex: v.clone(),
                            });
                        }
                    }
                    None => issues.push(SimplicialIssue::UnknownVertex {
                        facet: name.clone(),
                        vertex: v.clone(),
                    }),
                }
            }
            facets.push(Facet {
                name,
                vertices: members.into_iter().collect(),
            });
        }
        let mut labeling: BTreeMap<PredId, BTreeSet<usize>> = BTreeMap::new();
        for (p, vs) in &doc.labeling {
            if !is_valid_token(p.as_str()) {
                issues.push(SimplicialIssue::InvalidPredicate(p.to_string()));
            }
            let entry = labeling.entry(p.clone()).or_default();
            for v in vs {
                match vertex_index.get(v) {
                    Some(&i) => {
                        entry.insert(i);
                    }
                    None => issues.push(SimplicialIssue::UnknownLabeledVertex {
                        pred: p.clone(),
                        vertex: v.clone(),
                    }),
                }
            }
        }
        if !issues.is_empty() {
            return Err(issues);
        }
        Self::from_parts(agents, vertices, facets, labeling)
    }

    /// Builds a model from indexed parts, checking facet-level invariants:
    /// non-emptiness, injective coloring, maximality, vertex coverage.
    pub fn from_parts(
        agents: AgentSet,
        vertices: Vec<Vertex>,
        facets: Vec<Facet>,
        labeling: BTreeMap<PredId, BTreeSet<usize>>,
    ) -> Result<Self, Vec<SimplicialIssue>> {
        let mut issues = Vec::new();
        if facets.is_empty() {
            issues.push(SimplicialIssue::NoFacets);
        }
        let mut facet_index = HashMap::new();
        for (i, f) in facets.iter().enumerate() {
            if facet_index.insert(f.name.clone(), i).is_some() {
                issues.push(SimplicialIssue::DuplicateFacetName(f.name.clone()));
            }
            if f.vertices.is_empty() {
                issues.push(SimplicialIssue::EmptyFacet { facet: f.name.clone() });
            }
            let mut seen: BTreeMap<&AgentId, usize> = BTreeMap::new();
            for &v in &f.vertices {
                if let Some(&prev) = seen.get(&vertices[v].color) {
                    issues.push(SimplicialIssue::ColorClash {
                        facet: f.name.clone(),
                        color: vertices[v].color.clone(),
                        first: vertices[prev].id.clone(),
                        second: vertices[v].id.clone(),
                    });
                } else {
                    seen.insert(&vertices[v].color, v);
                }
            }
        }
        for (i, f) in facets.iter().enumerate() {
            for (j, g) in facets.iter().enumerate() {
                if i == j || f.vertices.is_empty() {
                    continue;
                }
                let subset = f.vertices.iter().all(|v| g.vertices.binary_search(v).is_ok());
                if !subset {
                    continue;
                }
                if f.vertices.len() < g.vertices.len() {
                    issues.push(SimplicialIssue::NotMaximal {
                        facet: f.name.clone(),
                        superset: g.name.clone(),
                    });
                } else if i < j {
                    issues.push(SimplicialIssue::DuplicateFacet {
                        facet: f.name.clone(),
                        other: g.name.clone(),
                    });
                }
            }
        }
        let mut covered = vec![false; vertices.len()];
        for f in &facets {
            for &v in &f.vertices {
                covered[v] = true;
            }
        }
        for (v, c) in covered.iter().enumerate() {
            if !c {
                issues.push(SimplicialIssue::UncoveredVertex(vertices[v].id.clone()));
            }
        }
        if !issues.is_empty() {
            return Err(issues);
        }

        let vertex_index = vertices.iter().enumerate().map(|(i, v)| (v.id.clone(), i)).collect();
        let color_of =
            |vs: &mut dyn Iterator<Item = usize>| -> AgentSet { vs.map(|v| vertices[v].color.clone()).collect() };
        let colors: Vec<AgentSet> = facets
            .iter()
            .map(|f| color_of(&mut f.vertices.iter().copied()))
            .collect();
        let shared = facets
            .iter()
            .map(|f| {
                facets
                    .iter()
                    .map(|g| {
                        color_of(
                            &mut f
                                .vertices
                                .iter()
                                .copied()
                                .filter(|v| g.vertices.binary_search(v).is_ok()),
                        )
                    })
                    .collect()
            })
            .collect();
        let extensions = facets
            .iter()
            .map(|f| {
                labeling
                    .iter()
                    .map(|(p, vs)| {
                        (
                            p.clone(),
                            color_of(&mut f.vertices.iter().copied().filter(|v| vs.contains(v))),
                        )
                    })
                    .collect()
            })
            .collect();
        Ok(SimplicialModel {
            agents,
            vertices,
            facets,
            labeling,
            vertex_index,
            facet_index,
            colors,
            shared,
            extensions,
        })
    }

    pub fn to_doc(&self) -> SimplicialDoc {
        SimplicialDoc {
            agents: self.agents.iter().cloned().collect(),
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexDoc {
                    id: v.id.clone(),
                    color: v.color.clone(),
                })
                .collect(),
            facets: self
                .facets
                .iter()
                .map(|f| {
                    let vertices: Vec<String> = f.vertices.iter().map(|&v| self.vertices[v].id.clone()).collect();
                    if f.name == default_facet_name(vertices.iter().map(String::as_str)) {
                        FacetDoc::Plain(vertices)
                    } else {
                        FacetDoc::Named {
                            id: f.name.clone(),
                            vertices,
                        }
                    }
                })
                .collect(),
            labeling: self
                .labeling
                .iter()
                .map(|(p, vs)| (p.clone(), vs.iter().map(|&v| self.vertices[v].id.clone()).collect()))
                .collect(),
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    /// The facet family 𝓕(C).
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn facet_index(&self, name: &str) -> Option<usize> {
        self.facet_index.get(name).copied()
    }

    pub fn labeling(&self) -> &BTreeMap<PredId, BTreeSet<usize>> {
        &self.labeling
    }

    pub fn is_labeled(&self, pred: &PredId, vertex: usize) -> bool {
        self.labeling.get(pred).is_some_and(|vs| vs.contains(&vertex))
    }

    /// χ[F ∩ G].
    pub fn shared_colors(&self, f: usize, g: usize) -> &AgentSet {
        &self.shared[f][g]
    }

    /// True when some facet carries fewer than all of the model's colors.
    pub fn is_impure(&self) -> bool {
        let all: AgentSet = self.vertices.iter().map(|v| v.color.clone()).collect();
        self.colors.iter().any(|c| *c != all)
    }

    /// Every face: all non-empty subsets of facets, sorted and deduplicated.
    pub fn all_faces(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            let n = f.vertices.len();
            for mask in 1u64..(1 << n) {
                out.insert((0..n).filter(|i| mask & (1 << i) != 0).map(|i| f.vertices[i]).collect());
            }
        }
        out
    }
}

impl EpistemicModel for SimplicialModel {
    fn agents(&self) -> &AgentSet {
        &self.agents
    }

    fn len(&self) -> usize {
        self.facets.len()
    }

    fn point_name(&self, point: usize) -> &str {
        &self.facets[point].name
    }

    fn point_index(&self, name: &str) -> Option<usize> {
        self.facet_index(name)
    }

    fn live(&self, point: usize) -> &AgentSet {
        &self.colors[point]
    }

    fn extension(&self, pred: &PredId, point: usize) -> &AgentSet {
        self.extensions[point].get(pred).unwrap_or(&EMPTY_AGENTS)
    }

    fn predicates(&self) -> BTreeSet<PredId> {
        self.labeling.keys().cloned().collect()
    }

    /// Facets `G` with `group ⊆ χ[F ∩ G]`.
    fn successors(&self, point: usize, group: &AgentSet) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&g| group.is_subset(&self.shared[point][g]))
            .collect()
    }
}
