//! Seeded random models.

use crate::correspondence::lem;
use crate::models::{default_facet_name, EpistemicModel, Facet, KripkeModel, SimplicialModel, Vertex, World};
use crate::syntax::{AgentId, AgentSet, PredId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

const AGENT_NAMES: [&str; 4] = ["a", "b", "c", "d"];
const PRED_NAMES: [&str; 3] = ["p", "q", "r"];

/// Size parameters for random models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    /// At most 4.
    pub agents: usize,
    pub max_vertices: usize,
    pub max_facets: usize,
    /// At most 3.
    pub preds: usize,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            agents: 3,
            max_vertices: 9,
            max_facets: 6,
            preds: 1,
            seed: 0,
        }
    }
}

impl GenParams {
    pub fn with_seed(self, seed: u64) -> Self {
        GenParams { seed, ..self }
    }

    pub fn agent_set(&self) -> AgentSet {
        AGENT_NAMES[..self.agents].iter().map(|&a| AgentId::from(a)).collect()
    }

    pub fn pred_set(&self) -> BTreeSet<PredId> {
        PRED_NAMES[..self.preds].iter().map(|&p| PredId::from(p)).collect()
    }

    fn check(&self) {
        assert!((1..=4).contains(&self.agents), "agent count must be in 1..=4");
        assert!(self.preds <= 3, "at most 3 predicates");
        assert!(self.max_vertices > 0 && self.max_facets > 0, "budgets must be positive");
    }
}

/// A valid simplicial model drawn deterministically from `gp.seed`.
///
/// Facets pick random color sets and either reuse an existing vertex of each
/// color or spend vertex budget on a new one; duplicate and non-maximal
/// facets are dropped afterwards.
pub fn random_simplicial_model(gp: &GenParams) -> SimplicialModel {
    gp.check();
    let mut rng = ChaCha8Rng::seed_from_u64(gp.seed);
    let agents: Vec<AgentId> = gp.agent_set().into_iter().collect();
    let facet_count = rng.gen_range(1..=gp.max_facets);
    let mut by_color: Vec<Vec<usize>> = vec![Vec::new(); agents.len()];
    let mut colors: Vec<usize> = Vec::new();
    let mut raw: Vec<BTreeSet<usize>> = Vec::new();
    for _ in 0..facet_count {
        let mut chosen: Vec<usize> = (0..agents.len()).filter(|_| rng.gen_bool(0.6)).collect();
        if chosen.is_empty() {
            chosen.push(rng.gen_range(0..agents.len()));
        }
        chosen.shuffle(&mut rng);
        let mut facet = BTreeSet::new();
        for c in chosen {
            let reuse = !by_color[c].is_empty() && (colors.len() >= gp.max_vertices || rng.gen_bool(0.5));
            if reuse {
                facet.insert(*by_color[c].choose(&mut rng).unwrap());
            } else if colors.len() < gp.max_vertices {
                by_color[c].push(colors.len());
                facet.insert(colors.len());
                colors.push(c);
            }
        }
        if !facet.is_empty() {
            raw.push(facet);
        }
    }
    let mut facets: Vec<BTreeSet<usize>> = Vec::new();
    for f in &raw {
        let dominated = raw.iter().any(|g| f.is_subset(g) && f != g);
        if !dominated && !facets.contains(f) {
            facets.push(f.clone());
        }
    }
    let used: BTreeSet<usize> = facets.iter().flatten().copied().collect();
    let renumber: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut counters = vec![0usize; agents.len()];
    let vertices: Vec<Vertex> = used
        .iter()
        .map(|&v| {
            let c = colors[v];
            counters[c] += 1;
            Vertex {
                id: format!("{}{}", agents[c], counters[c]),
                color: agents[c].clone(),
            }
        })
        .collect();
    let facets: Vec<Facet> = facets
        .iter()
        .map(|f| {
            let vs: Vec<usize> = f.iter().map(|v| renumber[v]).collect();
            Facet {
                name: default_facet_name(vs.iter().map(|&v| vertices[v].id.as_str())),
                vertices: vs,
            }
        })
        .collect();
    let labeling = gp
        .pred_set()
        .into_iter()
        .map(|p| {
            let ext = (0..vertices.len()).filter(|_| rng.gen_bool(0.5)).collect();
            (p, ext)
        })
        .collect();
    SimplicialModel::from_parts(gp.agent_set(), vertices, facets, labeling).expect("generator produces valid models")
}

/// A proper local epistemic model: `lem` of a random simplicial model.
pub fn random_local_epistemic_model(gp: &GenParams) -> KripkeModel {
    lem(&random_simplicial_model(gp))
}

/// A local epistemic model that is generally not proper: some worlds of a
/// random proper model get indistinguishable copies.
pub fn random_improper_local_epistemic_model(gp: &GenParams) -> KripkeModel {
    let base = random_local_epistemic_model(gp);
    let mut rng = ChaCha8Rng::seed_from_u64(gp.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut worlds: Vec<World> = base.worlds().to_vec();
    let mut origin: Vec<usize> = (0..worlds.len()).collect();
    let copies = rng.gen_range(1..=worlds.len().min(3));
    for k in 0..copies {
        let w = rng.gen_range(0..base.worlds().len());
        let mut copy = base.worlds()[w].clone();
        copy.id = format!("{}'{}", copy.id, k + 1);
        worlds.push(copy);
        origin.push(w);
    }
    let mut edges: BTreeMap<AgentId, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for a in base.agents() {
        let set = edges.entry(a.clone()).or_default();
        for i in 0..worlds.len() {
            for j in 0..worlds.len() {
                if base.relates(a, origin[i], origin[j]) {
                    set.insert((i, j));
                }
            }
        }
    }
    KripkeModel::from_parts(base.agents().clone(), worlds, edges).expect("copies keep the model valid")
}
