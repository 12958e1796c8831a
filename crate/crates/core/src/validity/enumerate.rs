//! Exhaustive enumeration of small simplicial models up to isomorphism.
//!
//! A skeleton is a list of facets given by color sets plus a vertex-sharing
//! pattern: for every color, a restricted-growth string over the facets that
//! carry it. Skeletons are reduced to a canonical form (minimum over facet
//! orders, vertices renumbered by first occurrence), and labelings are kept
//! only when minimal under the skeleton's automorphisms.
//!
//! Order: facet count, then vertex count, then canonical skeleton key, then
//! labeling bitmask.

use crate::models::{default_facet_name, Facet, SimplicialModel, Vertex};
use crate::syntax::{AgentId, AgentSet, PredId};
use std::collections::{BTreeMap, BTreeSet, HashSet};

/// Facets as sorted `(color, index)` lists.
type Key = Vec<Vec<(usize, usize)>>;
type VertexMap = BTreeMap<(usize, usize), (usize, usize)>;

/// A canonical unlabeled model shape.
#[derive(Debug, Clone)]
pub struct Skeleton {
    /// Vertices as `(color, index within color)`, sorted.
    vertices: Vec<(usize, usize)>,
    facets: Vec<Vec<usize>>,
    /// Vertex permutations preserving the facet structure.
    automorphisms: Vec<Vec<usize>>,
}

impl Skeleton {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    /// Whether `mask` is the least labeling in its automorphism orbit.
    /// Bit `p * V + v` labels vertex `v` with predicate `p`.
    fn is_canonical_labeling(&self, mask: u64, preds: usize) -> bool {
        let n = self.vertices.len();
        self.automorphisms.iter().all(|g| {
            let mut image = 0u64;
            for p in 0..preds {
                for (v, &gv) in g.iter().enumerate() {
                    if mask & (1 << (p * n + v)) != 0 {
                        image |= 1 << (p * n + gv);
                    }
                }
            }
            image >= mask
        })
    }

    fn build(&self, agents: &[AgentId], preds: &[PredId], mask: u64) -> SimplicialModel {
        let n = self.vertices.len();
        let vertices: Vec<Vertex> = self
            .vertices
            .iter()
            .map(|&(c, i)| Vertex {
                id: format!("{}{}", agents[c], i + 1),
                color: agents[c].clone(),
            })
            .collect();
        let facets = self
            .facets
            .iter()
            .map(|vs| Facet {
                name: default_facet_name(vs.iter().map(|&v| vertices[v].id.as_str())),
                vertices: vs.clone(),
            })
            .collect();
        let labeling = preds
            .iter()
            .enumerate()
            .map(|(p, name)| {
                let set = (0..n).filter(|v| mask & (1 << (p * n + v)) != 0).collect();
                (name.clone(), set)
            })
            .collect();
        SimplicialModel::from_parts(agents.iter().cloned().collect(), vertices, facets, labeling)
            .expect("enumerated skeletons are valid")
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Restricted-growth strings of length `n`: set partitions in canonical form.
fn rgs(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|s: Vec<usize>| {
                let next = s.iter().max().map_or(0, |m| m + 1);
                (0..=next).map(move |v| {
                    let mut t = s.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Relabels vertices by first occurrence along `order` and returns the key
/// together with the old-to-new vertex map.
fn relabel(facets: &[Vec<(usize, usize)>], order: &[usize]) -> (Key, VertexMap) {
    let mut map = BTreeMap::new();
    let mut next: BTreeMap<usize, usize> = BTreeMap::new();
    let key = order
        .iter()
        .map(|&f| {
            let mut vs: Vec<(usize, usize)> = facets[f]
                .iter()
                .map(|&(c, i)| {
                    *map.entry((c, i)).or_insert_with(|| {
                        let n = next.entry(c).or_insert(0);
                        *n += 1;
                        (c, *n - 1)
                    })
                })
                .collect();
            vs.sort_unstable();
            vs
        })
        .collect();
    (key, map)
}

fn is_valid(facets: &[Vec<(usize, usize)>]) -> bool {
    let sets: Vec<BTreeSet<(usize, usize)>> = facets.iter().map(|f| f.iter().copied().collect()).collect();
    sets.iter()
        .enumerate()
        .all(|(i, s)| sets.iter().enumerate().all(|(j, t)| i == j || !s.is_subset(t)))
}

fn canonicalize(facets: &[Vec<(usize, usize)>], perms: &[Vec<usize>]) -> Key {
    perms
        .iter()
        .map(|order| relabel(facets, order).0)
        .min()
        .expect("at least one facet order")
}

fn skeleton_from_key(key: &Key, perms: &[Vec<usize>]) -> Skeleton {
    let vertices: Vec<(usize, usize)> = key
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<(usize, usize), usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let facets = key.iter().map(|f| f.iter().map(|v| index[v]).collect()).collect();
    let mut automorphisms = BTreeSet::new();
    for order in perms {
        let (k, map) = relabel(key, order);
        if &k == key {
            let g: Vec<usize> = vertices.iter().map(|v| index[&map[v]]).collect();
            automorphisms.insert(g);
        }
    }
    Skeleton {
        vertices,
        facets,
        automorphisms: automorphisms.into_iter().collect(),
    }
}

/// All canonical skeletons with exactly `k` facets over `n` agents, sorted
/// by vertex count and then key.
pub fn skeletons(n: usize, k: usize) -> Vec<Skeleton> {
    assert!(n > 0 && n < 16, "agent count out of range");
    let perms = permutations(k);
    let masks: Vec<u32> = (1..(1u32 << n)).collect();
    let mut seen: HashSet<Key> = HashSet::new();
    let mut keys = Vec::new();
    let mut choice = vec![0usize; k];
    // nondecreasing color-mask sequences
    loop {
        let colors: Vec<u32> = choice.iter().map(|&i| masks[i]).collect();
        let carriers: Vec<Vec<usize>> = (0..n)
            .map(|c| (0..k).filter(|&f| colors[f] & (1 << c) != 0).collect())
            .collect();
        let patterns: Vec<Vec<Vec<usize>>> = carriers.iter().map(|fs| rgs(fs.len())).collect();
        let mut idx = vec![0usize; n];
        'sharing: loop {
            let mut facets: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k];
            for c in 0..n {
                for (pos, &f) in carriers[c].iter().enumerate() {
                    facets[f].push((c, patterns[c][idx[c]][pos]));
                }
            }
            if is_valid(&facets) {
                let key = canonicalize(&facets, &perms);
                if seen.insert(key.clone()) {
                    keys.push(key);
                }
            }
            for c in 0..n {
                idx[c] += 1;
                if idx[c] < patterns[c].len() {
                    continue 'sharing;
                }
                idx[c] = 0;
            }
            break;
        }
        // next nondecreasing sequence
        let mut i = k;
        loop {
            if i == 0 {
                keys.sort();
                let mut out: Vec<Skeleton> = keys.iter().map(|key| skeleton_from_key(key, &perms)).collect();
                out.sort_by_key(Skeleton::vertex_count);
                return out;
            }
            i -= 1;
            if choice[i] + 1 < masks.len() {
                choice[i] += 1;
                for j in i + 1..k {
                    choice[j] = choice[i];
                }
                break;
            }
        }
    }
}

/// Every model with at most `max_facets` facets over the given signature,
/// one per isomorphism class, in canonical order.
pub fn models<'a>(
    agents: &'a AgentSet,
    preds: &'a BTreeSet<PredId>,
    max_facets: usize,
) -> impl Iterator<Item = SimplicialModel> + 'a {
    let agent_list: Vec<AgentId> = agents.iter().cloned().collect();
    let pred_list: Vec<PredId> = preds.iter().cloned().collect();
    (1..=max_facets).flat_map(move |k| {
        let agent_list = agent_list.clone();
        let pred_list = pred_list.clone();
        skeletons(agent_list.len(), k).into_iter().flat_map(move |sk| {
            let bits = pred_list.len() * sk.vertex_count();
            assert!(bits < 64, "labeling space too large to enumerate");
            let agent_list = agent_list.clone();
            let pred_list = pred_list.clone();
            let preds = pred_list.len();
            (0..(1u64 << bits)).filter_map(move |m| {
                if sk.is_canonical_labeling(m, preds) {
                    Some(sk.build(&agent_list, &pred_list, m))
                } else {
                    None
                }
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::isomorphic_simplicial;
    use crate::models::fixtures;
    use crate::EpistemicModel;

    fn agents(n: usize) -> AgentSet {
        ["a", "b", "c", "d"][..n].iter().map(|&s| AgentId::from(s)).collect()
    }

    #[test]
    fn single_facets_are_color_sets() {
        assert_eq!(skeletons(3, 1).len(), 7);
        assert_eq!(skeletons(1, 2).len(), 1);
    }

    #[test]
    fn two_agents_two_facets() {
        // {a}{a'} {b}{b'} {a}{b} {a}{a',b} {b}{a,b'} and three {a,b}{a,b} sharings
        assert_eq!(skeletons(2, 2).len(), 8);
    }

    #[test]
    fn enumeration_is_pairwise_non_isomorphic() {
        let ags = agents(2);
        let preds = BTreeSet::from([PredId::from("p")]);
        let all: Vec<SimplicialModel> = models(&ags, &preds, 2).collect();
        for (i, m) in all.iter().enumerate() {
            for n in &all[..i] {
                assert!(
                    isomorphic_simplicial(m, n).is_none(),
                    "{:?} ~ {:?}",
                    m.to_doc(),
                    n.to_doc()
                );
            }
        }
        // unlabeled single facets: 3 color sets, labelings up to symmetry
        assert_eq!(all.iter().filter(|m| m.len() == 1).count(), 2 + 2 + 4);
    }

    #[test]
    fn intro_occurs_at_two_facets() {
        let intro = fixtures::intro();
        let preds = BTreeSet::from([PredId::from("p")]);
        let found = models(intro.agents(), &preds, 2)
            .filter(|m| isomorphic_simplicial(m, &intro).is_some())
            .count();
        assert_eq!(found, 1);
    }

    #[test]
    fn order_is_by_facets_then_vertices() {
        let ags = agents(3);
        let preds = BTreeSet::new();
        let sizes: Vec<(usize, usize)> = models(&ags, &preds, 2).map(|m| (m.len(), m.vertices().len())).collect();
        let mut sorted = sizes.clone();
        sorted.sort();
        assert_eq!(sizes, sorted);
    }
}
