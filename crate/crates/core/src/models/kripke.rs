//! First-order Kripke models with local agent domains.

use super::doc::{KripkeDoc, WorldDoc};
use super::{EpistemicModel, EMPTY_AGENTS};
use crate::syntax::{is_valid_token, AgentId, AgentSet, PredId};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct World {
    pub id: String,
    pub domain: AgentSet,
    pub interp: BTreeMap<PredId, AgentSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KripkeIssue {
    NoWorlds,
    InvalidAgent(String),
    InvalidPredicate(String),
    DuplicateWorld(String),
    EmptyDomain(String),
    UnknownDomainAgent {
        world: String,
        agent: AgentId,
    },
    InterpOutsideDomain {
        world: String,
        pred: PredId,
        agent: AgentId,
    },
    UnknownRelationAgent(AgentId),
    UnknownWorld {
        agent: AgentId,
        world: String,
    },
    DeadAgentEdge {
        agent: AgentId,
        from: String,
        to: String,
    },
}

impl fmt::Display for KripkeIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use KripkeIssue::*;
        match self {
            NoWorlds => write!(f, "worlds: the model has no worlds"),
            InvalidAgent(a) => write!(f, "agents: `{a}` is not a valid agent token"),
            InvalidPredicate(p) => write!(f, "interp: `{p}` is not a valid predicate token"),
            DuplicateWorld(w) => write!(f, "worlds: duplicate id `{w}`"),
            EmptyDomain(w) => write!(f, "worlds: `{w}` has an empty domain"),
            UnknownDomainAgent { world, agent } => {
                write!(f, "worlds: `{world}` has undeclared agent `{agent}` in its domain")
            }
            InterpOutsideDomain { world, pred, agent } => write!(
                f,
                "worlds: `{world}` interprets `{pred}` on `{agent}`, which is not in its domain"
            ),
            UnknownRelationAgent(a) => write!(f, "relations: undeclared agent `{a}`"),
            UnknownWorld { agent, world } => {
                write!(f, "relations: `{agent}` relates unknown world `{world}`")
            }
            DeadAgentEdge { agent, from, to } => write!(
                f,
                "relations: `{agent}` relates `{from}` to `{to}` but is not in the domain of `{from}`"
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub struct KripkeModel {
    agents: AgentSet,
    worlds: Vec<World>,
    /// Sorted successor lists per agent and world.
    rel: BTreeMap<AgentId, Vec<Vec<usize>>>,
    index: HashMap<String, usize>,
}

pub fn validate_kripke(doc: &KripkeDoc) -> Result<(), Vec<KripkeIssue>> {
    KripkeModel::from_doc(doc).map(|_| ())
}

impl KripkeModel {
    pub fn from_doc(doc: &KripkeDoc) -> Result<Self, Vec<KripkeIssue>> {
        let mut issues = Vec::new();
        let agents: AgentSet = doc.agents.iter().cloned().collect();
        for a in &agents {
            if !is_valid_token(a.as_str()) {
                issues.push(KripkeIssue::InvalidAgent(a.to_string()));
            }
        }
        let mut seen = BTreeSet::new();
        let mut worlds = Vec::new();
        for WorldDoc { id, domain, interp } in &doc.worlds {
            if !seen.insert(id.clone()) {
                issues.push(KripkeIssue::DuplicateWorld(id.clone()));
                continue;
            }
            for p in interp.keys() {
                if !is_valid_token(p.as_str()) {
                    issues.push(KripkeIssue::InvalidPredicate(p.to_string()));
                }
            }
            worlds.push(World {
                id: id.clone(),
                domain: domain.iter().cloned().collect(),
                interp: interp
                    .iter()
                    .map(|(p, ags)| (p.clone(), ags.iter().cloned().collect()))
                    .collect(),
            });
        }
        let index: HashMap<String, usize> = worlds.iter().enumerate().map(|(i, w)| (w.id.clone(), i)).collect();
        let mut rel: BTreeMap<AgentId, BTreeSet<(usize, usize)>> = BTreeMap::new();
        for (agent, pairs) in &doc.relations {
            if !agents.contains(agent) {
                issues.push(KripkeIssue::UnknownRelationAgent(agent.clone()));
                continue;
            }
            let entry = rel.entry(agent.clone()).or_default();
            for (from, to) in pairs {
                let mut lookup = |w: &String| {
                    let found = index.get(w).copied();
                    if found.is_none() {
                        issues.push(KripkeIssue::UnknownWorld {
                            agent: agent.clone(),
                            world: w.clone(),
                        });
                    }
                    found
                };
                if let (Some(i), Some(j)) = (lookup(from), lookup(to)) {
                    entry.insert((i, j));
                }
            }
        }
        if !issues.is_empty() {
            return Err(issues);
        }
        Self::from_parts(agents, worlds, rel)
    }

    /// Builds a model from worlds and per-agent edge sets, checking the
    /// domain, interpretation and dead-agent invariants.
    pub fn from_parts(
        agents: AgentSet,
        worlds: Vec<World>,
        edges: BTreeMap<AgentId, BTreeSet<(usize, usize)>>,
    ) -> Result<Self, Vec<KripkeIssue>> {
        let mut issues = Vec::new();
        if worlds.is_empty() {
            issues.push(KripkeIssue::NoWorlds);
        }
        for w in &worlds {
            if w.domain.is_empty() {
                issues.push(KripkeIssue::EmptyDomain(w.id.clone()));
            }
            for a in w.domain.difference(&agents) {
                issues.push(KripkeIssue::UnknownDomainAgent {
                    world: w.id.clone(),
                    agent: a.clone(),
                });
            }
            for (p, ags) in &w.interp {
                for a in ags.difference(&w.domain) {
                    issues.push(KripkeIssue::InterpOutsideDomain {
                        world: w.id.clone(),
                        pred: p.clone(),
                        agent: a.clone(),
                    });
                }
            }
        }
        let mut rel = BTreeMap::new();
        for a in &agents {
            let mut succ = vec![Vec::new(); worlds.len()];
            for &(i, j) in edges.get(a).into_iter().flatten() {
                if !worlds[i].domain.contains(a) {
                    issues.push(KripkeIssue::DeadAgentEdge {
                        agent: a.clone(),
                        from: worlds[i].id.clone(),
                        to: worlds[j].id.clone(),
                    });
                }
                succ[i].push(j);
            }
            rel.insert(a.clone(), succ);
        }
        for a in edges.keys() {
            if !agents.contains(a) {
                issues.push(KripkeIssue::UnknownRelationAgent(a.clone()));
            }
        }
        if !issues.is_empty() {
            return Err(issues);
        }
        let index = worlds.iter().enumerate().map(|(i, w)| (w.id.clone(), i)).collect();
        Ok(KripkeModel {
            agents,
            worlds,
            rel,
            index,
        })
    }

    pub fn to_doc(&self) -> KripkeDoc {
        KripkeDoc {
            agents: self.agents.iter().cloned().collect(),
            worlds: self
                .worlds
                .iter()
                .map(|w| WorldDoc {
                    id: w.id.clone(),
                    domain: w.domain.iter().cloned().collect(),
                    interp: w
                        .interp
                        .iter()
                        .filter(|(_, ags)| !ags.is_empty())
                        .map(|(p, ags)| (p.clone(), ags.iter().cloned().collect()))
                        .collect(),
                })
                .collect(),
            relations: self
                .rel
                .iter()
                .map(|(a, succ)| {
                    let pairs = succ
                        .iter()
                        .enumerate()
                        .flat_map(|(i, js)| {
                            js.iter()
                                .map(move |&j| (self.worlds[i].id.clone(), self.worlds[j].id.clone()))
                        })
                        .collect();
                    (a.clone(), pairs)
                })
                .collect(),
        }
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    /// R_a(w) in index order; empty for undeclared agents.
    pub fn related(&self, agent: &AgentId, world: usize) -> &[usize] {
        self.rel.get(agent).map_or(&[], |succ| &succ[world])
    }

    pub fn relates(&self, agent: &AgentId, from: usize, to: usize) -> bool {
        self.related(agent, from).binary_search(&to).is_ok()
    }

    /// All edges per agent.
    pub fn edges(&self) -> BTreeMap<AgentId, BTreeSet<(usize, usize)>> {
        self.rel
            .iter()
            .map(|(a, succ)| {
                let pairs = succ
                    .iter()
                    .enumerate()
                    .flat_map(|(i, js)| js.iter().map(move |&j| (i, j)))
                    .collect();
                (a.clone(), pairs)
            })
            .collect()
    }
}

impl EpistemicModel for KripkeModel {
    fn agents(&self) -> &AgentSet {
        &self.agents
    }

    fn len(&self) -> usize {
        self.worlds.len()
    }

    fn point_name(&self, point: usize) -> &str {
        &self.worlds[point].id
    }

    fn point_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    fn live(&self, point: usize) -> &AgentSet {
        &self.worlds[point].domain
    }

    fn extension(&self, pred: &PredId, point: usize) -> &AgentSet {
        self.worlds[point].interp.get(pred).unwrap_or(&EMPTY_AGENTS)
    }

    fn predicates(&self) -> BTreeSet<PredId> {
        self.worlds.iter().flat_map(|w| w.interp.keys().cloned()).collect()
    }

    /// ⋂_{a ∈ group} R_a(w), or every world for the empty group.
    fn successors(&self, point: usize, group: &AgentSet) -> Vec<usize> {
        let mut agents = group.iter();
        let Some(first) = agents.next() else {
            return (0..self.worlds.len()).collect();
        };
        let mut out = self.related(first, point).to_vec();
        for a in agents {
            let next = self.related(a, point);
            out.retain(|w| next.binary_search(w).is_ok());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::fixtures;

    fn doc(json: &str) -> KripkeDoc {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn hexagon_is_valid() {
        let hex = fixtures::hex_kripke();
        assert_eq!(hex.len(), 6);
        let ac = hex.point_index("ac").unwrap();
        let bcd = hex.point_index("bcd").unwrap();
        assert!(hex.relates(&"c".into(), ac, bcd));
        assert!(!hex.relates(&"a".into(), ac, bcd));
    }

    #[test]
    fn rejects_edges_leaving_a_dead_agent() {
        let issues = validate_kripke(&doc(
            r#"{"agents":["a","b"],"worlds":[{"id":"w","domain":["a"]},{"id":"v","domain":["b"]}],
                "relations":{"b":[["w","v"]]}}"#,
        ))
        .unwrap_err();
        assert_eq!(
            issues,
            [KripkeIssue::DeadAgentEdge {
                agent: "b".into(),
                from: "w".into(),
                to: "v".into()
            }]
        );
    }

    #[test]
    fn rejects_interpretation_outside_domain() {
        let issues = validate_kripke(&doc(
            r#"{"agents":["a","b"],"worlds":[{"id":"w","domain":["a"],"interp":{"p":["b"]}}]}"#,
        ))
        .unwrap_err();
        assert!(matches!(issues[0], KripkeIssue::InterpOutsideDomain { .. }));
    }

    #[test]
    fn rejects_empty_domain() {
        let issues = validate_kripke(&doc(r#"{"agents":["a"],"worlds":[{"id":"w","domain":[]}]}"#)).unwrap_err();
        assert_eq!(issues, [KripkeIssue::EmptyDomain("w".into())]);
    }

    #[test]
    fn empty_group_reaches_everything() {
        let hex = fixtures::hex_kripke();
        assert_eq!(hex.successors(0, &AgentSet::new()).len(), 6);
    }

    #[test]
    fn doc_round_trip() {
        let hex = fixtures::hex_kripke();
        let again = KripkeModel::from_doc(&hex.to_doc()).unwrap();
        assert_eq!(again.to_doc(), hex.to_doc());
    }
}
