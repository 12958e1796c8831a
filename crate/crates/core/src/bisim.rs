//! Greatest bisimulations and distinguishing sentences.
//!
//! The relation is computed as a decreasing fixpoint in rounds: round 0
//! drops pairs failing (Inv), and round `k` drops pairs with an unmatched
//! group successor relative to the survivors of round `k - 1`. The round at
//! which a pair is dropped drives the distinguisher, so every pair outside
//! the relation gets a sentence by induction on that round.

use crate::models::{EpistemicModel, PointedModel};
use crate::semantics::holds;
use crate::syntax::{fresh_vars, AgentId, AgentSet, Formula, PredId, VarSet};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BisimError {
    #[error("cannot compare a {0} model with a {1} model")]
    KindMismatch(String, String),
    #[error("distinguishing sentence `{0}` failed verification")]
    VerificationFailed(Formula),
}

/// The greatest bisimulation between two models, with the round at which
/// each excluded pair was removed.
#[derive(Debug, Clone)]
pub struct BisimRelation {
    left: usize,
    right: usize,
    /// `None` for pairs in the relation.
    removed: Vec<Option<usize>>,
}

impl BisimRelation {
    pub fn contains(&self, s: usize, t: usize) -> bool {
        self.removed[s * self.right + t].is_none()
    }

    /// The fixpoint round that removed `(s, t)`.
    pub fn removal_round(&self, s: usize, t: usize) -> Option<usize> {
        self.removed[s * self.right + t]
    }

    pub fn pairs(&self) -> BTreeSet<(usize, usize)> {
        (0..self.left)
            .flat_map(|s| (0..self.right).map(move |t| (s, t)))
            .filter(|&(s, t)| self.contains(s, t))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.removed.iter().filter(|r| r.is_none()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn subsets(agents: &AgentSet) -> Vec<AgentSet> {
    let items: Vec<&AgentId> = agents.iter().collect();
    (0u32..(1 << items.len()))
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, a)| (*a).clone())
                .collect()
        })
        .collect()
}

fn predicates(m1: &dyn EpistemicModel, m2: &dyn EpistemicModel) -> BTreeSet<PredId> {
    m1.predicates().union(&m2.predicates()).cloned().collect()
}

fn inv(m1: &dyn EpistemicModel, s: usize, m2: &dyn EpistemicModel, t: usize, preds: &BTreeSet<PredId>) -> bool {
    m1.live(s) == m2.live(t) && preds.iter().all(|p| m1.extension(p, s) == m2.extension(p, t))
}

pub fn greatest_bisim(m1: &dyn EpistemicModel, m2: &dyn EpistemicModel) -> BisimRelation {
    let (n1, n2) = (m1.len(), m2.len());
    let preds = predicates(m1, m2);
    let mut removed = vec![None; n1 * n2];
    for s in 0..n1 {
        for t in 0..n2 {
            if !inv(m1, s, m2, t, &preds) {
                removed[s * n2 + t] = Some(0);
            }
        }
    }
    let groups: Vec<Vec<AgentSet>> = (0..n1).map(|s| subsets(m1.live(s))).collect();
    let mut round = 0;
    loop {
        round += 1;
        let alive = |removed: &[Option<usize>], s: usize, t: usize| removed[s * n2 + t].is_none();
        let mut dropped = Vec::new();
        for (s, group) in groups.iter().enumerate() {
            for t in 0..n2 {
                if !alive(&removed, s, t) {
                    continue;
                }
                let fails = group.iter().any(|a| {
                    let left = m1.successors(s, a);
                    let right = m2.successors(t, a);
                    let zig = left.iter().all(|&s2| right.iter().any(|&t2| alive(&removed, s2, t2)));
                    let zag = right.iter().all(|&t2| left.iter().any(|&s2| alive(&removed, s2, t2)));
                    !(zig && zag)
                });
                if fails {
                    dropped.push(s * n2 + t);
                }
            }
        }
        if dropped.is_empty() {
            break;
        }
        for i in dropped {
            removed[i] = Some(round);
        }
    }
    BisimRelation {
        left: n1,
        right: n2,
        removed,
    }
}

fn check_kinds(p1: &PointedModel, p2: &PointedModel) -> Result<(), BisimError> {
    if p1.kind() != p2.kind() {
        return Err(BisimError::KindMismatch(p1.kind().to_string(), p2.kind().to_string()));
    }
    Ok(())
}

pub fn bisimilar(p1: PointedModel, p2: PointedModel) -> Result<bool, BisimError> {
    check_kinds(&p1, &p2)?;
    Ok(greatest_bisim(p1.model(), p2.model()).contains(p1.point(), p2.point()))
}

/// A sentence true at `p1` and false at `p2`, or `None` if they are
/// bisimilar. The result is checked by evaluation before it is returned.
pub fn distinguishing_sentence(p1: PointedModel, p2: PointedModel) -> Result<Option<Formula>, BisimError> {
    check_kinds(&p1, &p2)?;
    distinguish(p1.model(), p1.point(), p2.model(), p2.point())
}

/// [`distinguishing_sentence`] on bare models of any kind.
pub fn distinguish(
    m1: &dyn EpistemicModel,
    s: usize,
    m2: &dyn EpistemicModel,
    t: usize,
) -> Result<Option<Formula>, BisimError> {
    let rel = greatest_bisim(m1, m2);
    if rel.contains(s, t) {
        return Ok(None);
    }
    let mut synth = Synth {
        m1,
        m2,
        rel: &rel,
        universe: m1.agents().union(m2.agents()).cloned().collect(),
        preds: predicates(m1, m2),
        memo: HashMap::new(),
    };
    let f = synth.dist(false, s, t);
    if holds(m1, s, &f) && !holds(m2, t, &f) {
        Ok(Some(f))
    } else {
        Err(BisimError::VerificationFailed(f))
    }
}

struct Synth<'a> {
    m1: &'a dyn EpistemicModel,
    m2: &'a dyn EpistemicModel,
    rel: &'a BisimRelation,
    universe: AgentSet,
    preds: BTreeSet<PredId>,
    memo: HashMap<(bool, usize, usize), Formula>,
}

impl Synth<'_> {
    /// Models and the removal round as seen from the `swapped` direction.
    fn sides(&self, swapped: bool) -> (&dyn EpistemicModel, &dyn EpistemicModel) {
        if swapped {
            (self.m2, self.m1)
        } else {
            (self.m1, self.m2)
        }
    }

    fn round(&self, swapped: bool, s: usize, t: usize) -> Option<usize> {
        if swapped {
            self.rel.removal_round(t, s)
        } else {
            self.rel.removal_round(s, t)
        }
    }

    fn removed_before(&self, swapped: bool, s: usize, t: usize, k: usize) -> bool {
        self.round(swapped, s, t).is_some_and(|r| r < k)
    }

    /// True at `s` (left side of the direction), false at `t`.
    fn dist(&mut self, swapped: bool, s: usize, t: usize) -> Formula {
        if let Some(f) = self.memo.get(&(swapped, s, t)) {
            return f.clone();
        }
        let k = self.round(swapped, s, t).expect("pair is outside the bisimulation");
        let f = if k == 0 {
            self.inv_formula(swapped, s, t)
        } else {
            self.step_formula(swapped, s, t, k)
        };
        self.memo.insert((swapped, s, t), f.clone());
        f
    }

    fn alpha(&self, x: &str, set: &AgentSet, body: impl Fn() -> Formula) -> Formula {
        Formula::conj(self.universe.iter().map(|a| {
            if set.contains(a) {
                Formula::diamond(x, a.clone(), body())
            } else {
                Formula::assign(x, a.clone(), body().not())
            }
        }))
    }

    fn inv_formula(&self, swapped: bool, s: usize, t: usize) -> Formula {
        let (l, r) = self.sides(swapped);
        if l.live(s) != r.live(t) {
            return self.alpha("x", l.live(s), Formula::top);
        }
        let p = self
            .preds
            .iter()
            .find(|p| l.extension(p, s) != r.extension(p, t))
            .expect("(Inv) failed on some predicate");
        self.alpha("x", l.extension(p, s), || Formula::atom(p.clone(), "x"))
    }

    fn step_formula(&mut self, swapped: bool, s: usize, t: usize, k: usize) -> Formula {
        let (l, r) = self.sides(swapped);
        for group in subsets(l.live(s)) {
            let left = l.successors(s, &group);
            let right = r.successors(t, &group);
            if let Some(&s2) = left
                .iter()
                .find(|&&s2| right.iter().all(|&t2| self.removed_before(swapped, s2, t2, k)))
            {
                let beta = Formula::conj(right.iter().map(|&t2| self.dist(swapped, s2, t2)));
                return Self::khat_prefix(&group, beta);
            }
            if let Some(&t2) = right
                .iter()
                .find(|&&t2| left.iter().all(|&s2| self.removed_before(swapped, s2, t2, k)))
            {
                let beta = Formula::conj(left.iter().map(|&s2| self.dist(!swapped, t2, s2)));
                return Self::khat_prefix(&group, beta).not();
            }
        }
        unreachable!("pair removed at round {k} has an unmatched successor")
    }

    /// `<x1:=a1>...<xn:=an> Khat{x1..xn} beta`.
    fn khat_prefix(group: &AgentSet, beta: Formula) -> Formula {
        let vars = fresh_vars(&VarSet::new(), group.len());
        let inner = Formula::khat(vars.iter().cloned(), beta);
        vars.iter()
            .zip(group)
            .rev()
            .fold(inner, |f, (x, a)| Formula::diamond(x.clone(), a.clone(), f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::lem;
    use crate::models::{fixtures, properize, Model, SimplicialModel};
    use crate::syntax::parse;

    fn simplicial(json: &str) -> SimplicialModel {
        match Model::from_json(json).unwrap() {
            Model::Simplicial(m) => m,
            _ => unreachable!(),
        }
    }

    #[test]
    fn identity_is_contained() {
        let hex = fixtures::hex_simplicial();
        let rel = greatest_bisim(&hex, &hex);
        for f in 0..hex.len() {
            assert!(rel.contains(f, f));
        }
    }

    #[test]
    fn intro_facets_are_not_bisimilar() {
        let intro = fixtures::intro();
        let f = PointedModel::Simplicial(&intro, 0);
        let g = PointedModel::Simplicial(&intro, 1);
        assert_eq!(bisimilar(f, g), Ok(false));
        let d = distinguishing_sentence(f, g).unwrap().unwrap();
        assert!(holds(&intro, 0, &d) && !holds(&intro, 1, &d));
        assert_eq!(bisimilar(f, f), Ok(true));
        assert_eq!(distinguishing_sentence(f, f), Ok(None));
    }

    #[test]
    fn single_facets_by_color() {
        let a =
            simplicial(r#"{"kind":"simplicial","agents":["a"],"vertices":[{"id":"v","color":"a"}],"facets":[["v"]]}"#);
        let ab = simplicial(
            r#"{"kind":"simplicial","agents":["a","b"],"vertices":[{"id":"v","color":"a"},{"id":"w","color":"b"}],"facets":[["v","w"]]}"#,
        );
        let d = distinguish(&a, 0, &ab, 0).unwrap().unwrap();
        assert_eq!(d, parse("(<x:=a> top & [x:=b] bot)").unwrap());
    }

    #[test]
    fn zig_failure_on_shared_vertex() {
        // F of intro against a lone copy of F: the a-successor G is unmatched
        let intro = fixtures::intro();
        let lone = simplicial(
            r#"{"kind":"simplicial","agents":["a","b","c","d"],
                "vertices":[{"id":"a1","color":"a"},{"id":"b1","color":"b"},{"id":"c1","color":"c"}],
                "facets":[["a1","b1","c1"]],"labeling":{"p":["c1"]}}"#,
        );
        let rel = greatest_bisim(&intro, &lone);
        assert_eq!(rel.removal_round(0, 0), Some(1));
        let d = distinguish(&intro, 0, &lone, 0).unwrap().unwrap();
        assert!(holds(&intro, 0, &d));
        assert!(!holds(&lone, 0, &d));
    }

    #[test]
    fn hexagon_outer_edge_matches_its_world() {
        let hs = fixtures::hex_simplicial();
        let hk = fixtures::hex_kripke();
        let lemmed = lem(&hs);
        let ac = hk.point_index("ac").unwrap();
        let f = lemmed.point_index("ac").unwrap();
        assert_eq!(
            bisimilar(PointedModel::Kripke(&hk, ac), PointedModel::Kripke(&lemmed, f)),
            Ok(true)
        );
        assert!(matches!(
            bisimilar(PointedModel::Kripke(&hk, ac), PointedModel::Simplicial(&hs, f)),
            Err(BisimError::KindMismatch(..))
        ));
    }

    #[test]
    fn properization_pairs_are_bisimilar() {
        let hk = fixtures::hex_kripke();
        let (pr, q) = properize(&hk).unwrap();
        let rel = greatest_bisim(&hk, &pr);
        for (w, c) in q.into_iter().enumerate() {
            assert!(rel.contains(w, c));
        }
    }

    #[test]
    fn relation_is_symmetric() {
        let intro = fixtures::intro();
        let hex = fixtures::hex_simplicial();
        let ab = greatest_bisim(&intro, &hex).pairs();
        let ba: BTreeSet<_> = greatest_bisim(&hex, &intro)
            .pairs()
            .into_iter()
            .map(|(s, t)| (t, s))
            .collect();
        assert_eq!(ab, ba);
    }
}
