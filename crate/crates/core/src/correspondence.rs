//! Translations between simplicial models and local epistemic models, and
//! isomorphism checking.

use crate::models::{
    check_local_epistemic, default_facet_name, EpistemicModel, Facet, KripkeModel, Model, ModelKind, NotLocalEpistemic,
    SimplicialModel, Vertex, World,
};
use crate::syntax::{AgentId, AgentSet, PredId};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Facets become worlds, colors become domains, and two facets are
/// `a`-related when they share the `a`-vertex.
pub fn lem(c: &SimplicialModel) -> KripkeModel {
    let preds = c.predicates();
    let worlds = (0..c.len())
        .map(|f| World {
            id: c.point_name(f).to_owned(),
            domain: c.live(f).clone(),
            interp: preds.iter().map(|p| (p.clone(), c.extension(p, f).clone())).collect(),
        })
        .collect();
    let mut edges: BTreeMap<AgentId, BTreeSet<(usize, usize)>> =
        c.agents().iter().map(|a| (a.clone(), BTreeSet::new())).collect();
    for f in 0..c.len() {
        for g in 0..c.len() {
            for a in c.shared_colors(f, g) {
                edges.get_mut(a).expect("colors are declared agents").insert((f, g));
            }
        }
    }
    KripkeModel::from_parts(c.agents().clone(), worlds, edges).expect("lem of a valid simplicial model is valid")
}

/// Agent-labeled indistinguishability cells become vertices.
///
/// Returns the model and the map from world index to facet index. Vertices
/// are named `a[w1,w2,...]` after their agent and sorted cell members;
/// facets get the default name built from their vertex ids.
pub fn sc(m: &KripkeModel) -> Result<(SimplicialModel, Vec<usize>), NotLocalEpistemic> {
    let report = check_local_epistemic(m);
    if !report.is_local_epistemic() {
        return Err(NotLocalEpistemic(report.local_violations()));
    }
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut vertex_of: HashMap<(AgentId, Vec<usize>), usize> = HashMap::new();
    let mut facets: Vec<Facet> = Vec::new();
    let mut facet_of_world = Vec::with_capacity(m.len());
    let mut labeling: BTreeMap<PredId, BTreeSet<usize>> =
        m.predicates().into_iter().map(|p| (p, BTreeSet::new())).collect();
    for w in 0..m.len() {
        let mut members = Vec::new();
        for a in m.live(w) {
            let cell = m.related(a, w).to_vec();
            let v = *vertex_of.entry((a.clone(), cell.clone())).or_insert_with(|| {
                let mut ids: Vec<&str> = cell.iter().map(|&u| m.point_name(u)).collect();
                ids.sort_unstable();
                vertices.push(Vertex {
                    id: format!("{a}[{}]", ids.join(",")),
                    color: a.clone(),
                });
                vertices.len() - 1
            });
            for (p, ext) in &m.worlds()[w].interp {
                if ext.contains(a) {
                    labeling.get_mut(p).expect("predicate listed").insert(v);
                }
            }
            members.push(v);
        }
        members.sort_unstable();
        let index = match facets.iter().position(|f| f.vertices == members) {
            Some(i) => i,
            None => {
                facets.push(Facet {
                    name: default_facet_name(members.iter().map(|&v| vertices[v].id.as_str())),
                    vertices: members,
                });
                facets.len() - 1
            }
        };
        facet_of_world.push(index);
    }
    let c = SimplicialModel::from_parts(m.agents().clone(), vertices, facets, labeling)
        .expect("sc of a local epistemic model is a simplicial model");
    Ok((c, facet_of_world))
}

/// A structure-preserving bijection, by identifier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoWitness {
    pub kind: String,
    /// Vertex ids (simplicial) or world ids (Kripke), left to right.
    pub mapping: BTreeMap<String, String>,
    /// Facet names, left to right; empty for Kripke models.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub facets: BTreeMap<String, String>,
}

impl IsoWitness {
    /// Re-checks the witness against the two models.
    pub fn verify(&self, a: &Model, b: &Model) -> bool {
        match (a, b) {
            (Model::Simplicial(a), Model::Simplicial(b)) => verify_simplicial(&self.mapping, a, b),
            (Model::Kripke(a), Model::Kripke(b)) => verify_kripke(&self.mapping, a, b),
            _ => false,
        }
    }
}

pub fn isomorphic(a: &Model, b: &Model) -> Option<IsoWitness> {
    match (a, b) {
        (Model::Simplicial(a), Model::Simplicial(b)) => isomorphic_simplicial(a, b),
        (Model::Kripke(a), Model::Kripke(b)) => isomorphic_kripke(a, b),
        _ => None,
    }
}

fn label_set(c: &SimplicialModel, v: usize) -> BTreeSet<&PredId> {
    c.labeling()
        .iter()
        .filter(|(_, vs)| vs.contains(&v))
        .map(|(p, _)| p)
        .collect()
}

/// Facet-driven backtracking: since colors are injective on facets, mapping
/// one facet onto another fixes the vertex map on it.
pub fn isomorphic_simplicial(a: &SimplicialModel, b: &SimplicialModel) -> Option<IsoWitness> {
    if a.vertices().len() != b.vertices().len() || a.len() != b.len() {
        return None;
    }
    fn profile(c: &SimplicialModel, f: usize) -> BTreeMap<AgentId, BTreeSet<&PredId>> {
        c.facets()[f]
            .vertices
            .iter()
            .map(|&v| (c.vertices()[v].color.clone(), label_set(c, v)))
            .collect()
    }
    let pa: Vec<_> = (0..a.len()).map(|f| profile(a, f)).collect();
    let pb: Vec<_> = (0..b.len()).map(|f| profile(b, f)).collect();
    let mut ms_a = pa.clone();
    let mut ms_b = pb.clone();
    ms_a.sort();
    ms_b.sort();
    if ms_a != ms_b {
        return None;
    }

    struct Search<'a> {
        a: &'a SimplicialModel,
        b: &'a SimplicialModel,
        candidates: Vec<Vec<usize>>,
        facet_map: Vec<Option<usize>>,
        used: Vec<bool>,
        fwd: Vec<Option<usize>>,
        back: Vec<Option<usize>>,
    }

    impl Search<'_> {
        fn run(&mut self, f: usize) -> bool {
            if f == self.a.len() {
                return true;
            }
            for gi in 0..self.candidates[f].len() {
                let g = self.candidates[f][gi];
                if self.used[g] {
                    continue;
                }
                let mut assigned = Vec::new();
                let mut ok = true;
                for &v in &self.a.facets()[f].vertices {
                    let color = &self.a.vertices()[v].color;
                    let w = *self.b.facets()[g]
                        .vertices
                        .iter()
                        .find(|&&w| self.b.vertices()[w].color == *color)
                        .expect("same color sets");
                    match (self.fwd[v], self.back[w]) {
                        (Some(x), _) if x != w => ok = false,
                        (None, Some(_)) => ok = false,
                        (Some(_), _) => {}
                        (None, None) => {
                            self.fwd[v] = Some(w);
                            self.back[w] = Some(v);
                            assigned.push((v, w));
                        }
                    }
                    if !ok {
                        break;
                    }
                }
                if ok {
                    self.used[g] = true;
                    self.facet_map[f] = Some(g);
                    if self.run(f + 1) {
                        return true;
                    }
                    self.used[g] = false;
                    self.facet_map[f] = None;
                }
                for (v, w) in assigned {
                    self.fwd[v] = None;
                    self.back[w] = None;
                }
            }
            false
        }
    }

    let candidates = (0..a.len())
        .map(|f| (0..b.len()).filter(|&g| pa[f] == pb[g]).collect())
        .collect();
    let mut s = Search {
        a,
        b,
        candidates,
        facet_map: vec![None; a.len()],
        used: vec![false; b.len()],
        fwd: vec![None; a.vertices().len()],
        back: vec![None; b.vertices().len()],
    };
    if !s.run(0) {
        return None;
    }
    let mapping: BTreeMap<String, String> = s
        .fwd
        .iter()
        .enumerate()
        .map(|(v, w)| (a.vertices()[v].id.clone(), b.vertices()[w.expect("covered")].id.clone()))
        .collect();
    if !verify_simplicial(&mapping, a, b) {
        return None;
    }
    let facets = s
        .facet_map
        .iter()
        .enumerate()
        .map(|(f, g)| (a.point_name(f).to_owned(), b.point_name(g.expect("mapped")).to_owned()))
        .collect();
    Some(IsoWitness {
        kind: ModelKind::Simplicial.to_string(),
        mapping,
        facets,
    })
}

fn verify_simplicial(mapping: &BTreeMap<String, String>, a: &SimplicialModel, b: &SimplicialModel) -> bool {
    if mapping.len() != a.vertices().len() || a.vertices().len() != b.vertices().len() {
        return false;
    }
    let mut map = vec![usize::MAX; a.vertices().len()];
    let mut hit = vec![false; b.vertices().len()];
    for (v, va) in a.vertices().iter().enumerate() {
        let Some(w) = mapping.get(&va.id).and_then(|id| b.vertex_index(id)) else {
            return false;
        };
        if hit[w] || b.vertices()[w].color != va.color || label_set(a, v) != label_set(b, w) {
            return false;
        }
        hit[w] = true;
        map[v] = w;
    }
    let image: BTreeSet<Vec<usize>> = a
        .facets()
        .iter()
        .map(|f| {
            let mut vs: Vec<usize> = f.vertices.iter().map(|&v| map[v]).collect();
            vs.sort_unstable();
            vs
        })
        .collect();
    let target: BTreeSet<Vec<usize>> = b.facets().iter().map(|f| f.vertices.clone()).collect();
    image == target
}

fn world_profile(
    m: &KripkeModel,
    agents: &AgentSet,
    preds: &BTreeSet<PredId>,
    w: usize,
) -> (AgentSet, Vec<AgentSet>, Vec<(usize, usize)>) {
    let interp = preds.iter().map(|p| m.extension(p, w).clone()).collect();
    let degrees = agents
        .iter()
        .map(|a| {
            let out = m.related(a, w).len();
            let inc = (0..m.len()).filter(|&v| m.relates(a, v, w)).count();
            (out, inc)
        })
        .collect();
    (m.live(w).clone(), interp, degrees)
}

pub fn isomorphic_kripke(a: &KripkeModel, b: &KripkeModel) -> Option<IsoWitness> {
    if a.len() != b.len() {
        return None;
    }
    let agents: AgentSet = a.agents().union(b.agents()).cloned().collect();
    let preds: BTreeSet<PredId> = a.predicates().union(&b.predicates()).cloned().collect();
    let pa: Vec<_> = (0..a.len()).map(|w| world_profile(a, &agents, &preds, w)).collect();
    let pb: Vec<_> = (0..b.len()).map(|w| world_profile(b, &agents, &preds, w)).collect();
    let mut ms_a = pa.clone();
    let mut ms_b = pb.clone();
    ms_a.sort();
    ms_b.sort();
    if ms_a != ms_b {
        return None;
    }
    let candidates: Vec<Vec<usize>> = (0..a.len())
        .map(|w| (0..b.len()).filter(|&v| pa[w] == pb[v]).collect())
        .collect();

    fn extend(
        a: &KripkeModel,
        b: &KripkeModel,
        agents: &AgentSet,
        candidates: &[Vec<usize>],
        map: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let w = map.len();
        if w == a.len() {
            return true;
        }
        for &v in &candidates[w] {
            if used[v] {
                continue;
            }
            let consistent = (0..=w).all(|u| {
                let mu = if u == w { v } else { map[u] };
                agents.iter().all(|ag| {
                    a.relates(ag, w, u) == b.relates(ag, v, mu) && a.relates(ag, u, w) == b.relates(ag, mu, v)
                })
            });
            if !consistent {
                continue;
            }
            used[v] = true;
            map.push(v);
            if extend(a, b, agents, candidates, map, used) {
                return true;
            }
            map.pop();
            used[v] = false;
        }
        false
    }

    let mut map = Vec::with_capacity(a.len());
    let mut used = vec![false; b.len()];
    if !extend(a, b, &agents, &candidates, &mut map, &mut used) {
        return None;
    }
    let mapping = map
        .iter()
        .enumerate()
        .map(|(w, &v)| (a.point_name(w).to_owned(), b.point_name(v).to_owned()))
        .collect();
    Some(IsoWitness {
        kind: ModelKind::Kripke.to_string(),
        mapping,
        facets: BTreeMap::new(),
    })
}

fn verify_kripke(mapping: &BTreeMap<String, String>, a: &KripkeModel, b: &KripkeModel) -> bool {
    if mapping.len() != a.len() || a.len() != b.len() {
        return false;
    }
    let mut map = Vec::with_capacity(a.len());
    let mut hit = vec![false; b.len()];
    for w in 0..a.len() {
        let Some(v) = mapping.get(a.point_name(w)).and_then(|id| b.point_index(id)) else {
            return false;
        };
        if hit[v] {
            return false;
        }
        hit[v] = true;
        map.push(v);
    }
    let preds: BTreeSet<PredId> = a.predicates().union(&b.predicates()).cloned().collect();
    let agents: AgentSet = a.agents().union(b.agents()).cloned().collect();
    (0..a.len()).all(|w| {
        a.live(w) == b.live(map[w])
            && preds.iter().all(|p| a.extension(p, w) == b.extension(p, map[w]))
            && (0..a.len()).all(|u| {
                agents
                    .iter()
                    .all(|ag| a.relates(ag, w, u) == b.relates(ag, map[w], map[u]))
            })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{fixtures, properize};
    use crate::semantics::holds;
    use crate::syntax::parse;

    fn simplicial(json: &str) -> SimplicialModel {
        match Model::from_json(json).unwrap() {
            Model::Simplicial(m) => m,
            _ => unreachable!(),
        }
    }

    #[test]
    fn lem_of_intro() {
        let intro = fixtures::intro();
        let m = lem(&intro);
        assert_eq!(m.len(), 2);
        let (f, g) = (m.point_index("F").unwrap(), m.point_index("G").unwrap());
        assert!(m.relates(&"a".into(), f, g));
        assert!(!m.relates(&"c".into(), f, g));
        for a in ["a", "b", "c"] {
            assert!(m.relates(&a.into(), f, f));
        }
        assert!(!m.relates(&"d".into(), f, f));
        assert!(check_local_epistemic(&m).is_proper());
        for s in fixtures::CLARIFICATIONS {
            let alpha = parse(s).unwrap();
            assert_eq!(holds(&intro, 0, &alpha), holds(&m, f, &alpha), "{s}");
        }
    }

    #[test]
    fn hexagon_translations_match() {
        let hs = Model::Simplicial(fixtures::hex_simplicial());
        let hk = Model::Kripke(fixtures::hex_kripke());
        let Model::Simplicial(c) = &hs else { unreachable!() };
        let Model::Kripke(k) = &hk else { unreachable!() };
        let lemmed = Model::Kripke(lem(c));
        let w = isomorphic(&lemmed, &hk).expect("lem(hex) is hex kripke");
        assert!(w.verify(&lemmed, &hk));
        let back = Model::Simplicial(sc(k).unwrap().0);
        let w = isomorphic(&back, &hs).expect("sc(hex kripke) is hex");
        assert!(w.verify(&back, &hs));
        assert_eq!(w.facets.len(), 6);
    }

    #[test]
    fn sc_lem_round_trip_on_intro() {
        let intro = fixtures::intro();
        let (back, map) = sc(&lem(&intro)).unwrap();
        assert_eq!(map, [0, 1]);
        let w = isomorphic_simplicial(&intro, &back).unwrap();
        assert_eq!(w.mapping["a1"], "a[F,G]");
        assert_eq!(w.mapping["c1"], "c[F]");
    }

    #[test]
    fn single_reflexive_world() {
        let m = Model::from_json(
            r#"{"kind":"kripke","agents":["a"],"worlds":[{"id":"w","domain":["a"]}],"relations":{"a":[["w","w"]]}}"#,
        )
        .unwrap();
        let Model::Kripke(k) = &m else { unreachable!() };
        let (c, _) = sc(k).unwrap();
        assert_eq!((c.vertices().len(), c.len()), (1, 1));
        let single =
            simplicial(r#"{"kind":"simplicial","agents":["a"],"vertices":[{"id":"v","color":"a"}],"facets":[["v"]]}"#);
        let l = lem(&single);
        assert!(l.relates(&"a".into(), 0, 0));
        assert!(isomorphic(&Model::Kripke(l), &m).is_some());
    }

    #[test]
    fn different_colors_are_not_isomorphic() {
        let a = simplicial(
            r#"{"kind":"simplicial","agents":["a","b"],"vertices":[{"id":"v","color":"a"}],"facets":[["v"]]}"#,
        );
        let b = simplicial(
            r#"{"kind":"simplicial","agents":["a","b"],"vertices":[{"id":"v","color":"b"}],"facets":[["v"]]}"#,
        );
        assert!(isomorphic_simplicial(&a, &b).is_none());
    }

    #[test]
    fn labeling_matters_for_isomorphism() {
        let a = simplicial(
            r#"{"kind":"simplicial","agents":["a"],"vertices":[{"id":"v","color":"a"}],"facets":[["v"]],"labeling":{"p":["v"]}}"#,
        );
        let b =
            simplicial(r#"{"kind":"simplicial","agents":["a"],"vertices":[{"id":"v","color":"a"}],"facets":[["v"]]}"#);
        assert!(isomorphic_simplicial(&a, &b).is_none());
        assert!(isomorphic_simplicial(&a, &a).is_some());
    }

    #[test]
    fn lem_sc_is_properization() {
        let hex = fixtures::hex_kripke();
        let (pr, _) = properize(&hex).unwrap();
        let round = lem(&sc(&hex).unwrap().0);
        assert!(isomorphic_kripke(&pr, &round).is_some());
        assert!(isomorphic_kripke(&hex, &round).is_some());
    }

    #[test]
    fn sc_rejects_non_local_models() {
        let m = Model::from_json(r#"{"kind":"kripke","agents":["a"],"worlds":[{"id":"w","domain":["a"]}]}"#).unwrap();
        let Model::Kripke(k) = m else { unreachable!() };
        assert!(sc(&k).is_err());
    }
}
