//! Local epistemic model properties and properization.

use super::kripke::{KripkeModel, World};
use super::EpistemicModel;
use crate::syntax::{AgentId, PredId};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// A concrete failure of one of the five properties, named by world ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LepViolation {
    NotReflexive {
        agent: AgentId,
        world: String,
    },
    NotSymmetric {
        agent: AgentId,
        from: String,
        to: String,
    },
    NotTransitive {
        agent: AgentId,
        first: String,
        second: String,
        third: String,
    },
    DomainShrinks {
        agent: AgentId,
        from: String,
        to: String,
    },
    PredicateChanges {
        pred: PredId,
        agent: AgentId,
        from: String,
        to: String,
    },
    DomainGrows {
        world: String,
        successor: String,
        agent: AgentId,
    },
    NotProper {
        world: String,
        cell: Vec<String>,
    },
}

impl fmt::Display for LepViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use LepViolation::*;
        match self {
            NotReflexive { agent, world } => write!(f, "`{agent}` is live at `{world}` but `{world}` is not {agent}-related to itself"),
            NotSymmetric { agent, from, to } => write!(f, "`{from}` {agent}-sees `{to}` but not conversely"),
            NotTransitive { agent, first, second, third } => write!(
                f,
                "`{first}` {agent}-sees `{second}` which {agent}-sees `{third}`, but `{first}` does not {agent}-see `{third}`"
            ),
            DomainShrinks { agent, from, to } => {
                write!(f, "`{from}` {agent}-sees `{to}` where `{agent}` is dead")
            }
            PredicateChanges { pred, agent, from, to } => write!(
                f,
                "`{pred}` holds of `{agent}` at `{from}` but not at its {agent}-successor `{to}`"
            ),
            DomainGrows { world, successor, agent } => write!(
                f,
                "`{successor}` is in the live-agent cell of `{world}` but adds agent `{agent}`"
            ),
            NotProper { world, cell } => {
                write!(f, "the live-agent cell of `{world}` is {{{}}}", cell.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LepReport {
    pub local_s5: Result<(), LepViolation>,
    pub indiv_increasing: Result<(), LepViolation>,
    pub local_predicates: Result<(), LepViolation>,
    pub coll_decreasing: Result<(), LepViolation>,
    pub properness: Result<(), LepViolation>,
}

impl LepReport {
    /// The four properties defining local epistemic models.
    pub fn is_local_epistemic(&self) -> bool {
        self.local_violations().is_empty()
    }

    pub fn is_proper(&self) -> bool {
        self.is_local_epistemic() && self.properness.is_ok()
    }

    pub fn local_violations(&self) -> Vec<LepViolation> {
        [
            &self.local_s5,
            &self.indiv_increasing,
            &self.local_predicates,
            &self.coll_decreasing,
        ]
        .into_iter()
        .filter_map(|r| r.clone().err())
        .collect()
    }

    pub fn rows(&self) -> [(&'static str, &Result<(), LepViolation>); 5] {
        [
            ("local_s5", &self.local_s5),
            ("indiv_increasing", &self.indiv_increasing),
            ("local_predicates", &self.local_predicates),
            ("coll_decreasing", &self.coll_decreasing),
            ("properness", &self.properness),
        ]
    }
}

impl fmt::Display for LepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, row) in self.rows() {
            match row {
                Ok(()) => writeln!(f, "{name}: pass")?,
                Err(v) => writeln!(f, "{name}: fail ({v})")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Error)]
#[error("not a local epistemic model: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
pub struct NotLocalEpistemic(pub Vec<LepViolation>);

pub fn check_local_epistemic(m: &KripkeModel) -> LepReport {
    LepReport {
        local_s5: local_s5(m),
        indiv_increasing: indiv_increasing(m),
        local_predicates: local_predicates(m),
        coll_decreasing: coll_decreasing(m),
        properness: properness(m),
    }
}

fn id(m: &KripkeModel, w: usize) -> String {
    m.worlds()[w].id.clone()
}

fn local_s5(m: &KripkeModel) -> Result<(), LepViolation> {
    for a in m.agents() {
        let live = |w: usize| m.live(w).contains(a);
        for w in (0..m.len()).filter(|&w| live(w)) {
            if !m.relates(a, w, w) {
                return Err(LepViolation::NotReflexive {
                    agent: a.clone(),
                    world: id(m, w),
                });
            }
            for &v in m.related(a, w).iter().filter(|&&v| live(v)) {
                if !m.relates(a, v, w) {
                    return Err(LepViolation::NotSymmetric {
                        agent: a.clone(),
                        from: id(m, w),
                        to: id(m, v),
                    });
                }
                for &u in m.related(a, v).iter().filter(|&&u| live(u)) {
                    if !m.relates(a, w, u) {
                        return Err(LepViolation::NotTransitive {
                            agent: a.clone(),
                            first: id(m, w),
                            second: id(m, v),
                            third: id(m, u),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

fn indiv_increasing(m: &KripkeModel) -> Result<(), LepViolation> {
    for a in m.agents() {
        for w in 0..m.len() {
            if !m.live(w).contains(a) {
                continue;
            }
            if let Some(&v) = m.related(a, w).iter().find(|&&v| !m.live(v).contains(a)) {
                return Err(LepViolation::DomainShrinks {
                    agent: a.clone(),
                    from: id(m, w),
                    to: id(m, v),
                });
            }
        }
    }
    Ok(())
}

fn local_predicates(m: &KripkeModel) -> Result<(), LepViolation> {
    for w in 0..m.len() {
        for (p, ags) in &m.worlds()[w].interp {
            for a in ags {
                if let Some(&v) = m.related(a, w).iter().find(|&&v| !m.extension(p, v).contains(a)) {
                    return Err(LepViolation::PredicateChanges {
                        pred: p.clone(),
                        agent: a.clone(),
                        from: id(m, w),
                        to: id(m, v),
                    });
                }
            }
        }
    }
    Ok(())
}

fn coll_decreasing(m: &KripkeModel) -> Result<(), LepViolation> {
    for w in 0..m.len() {
        for v in m.successors(w, m.live(w)) {
            if let Some(extra) = m.live(v).difference(m.live(w)).next() {
                return Err(LepViolation::DomainGrows {
                    world: id(m, w),
                    successor: id(m, v),
                    agent: extra.clone(),
                });
            }
        }
    }
    Ok(())
}

fn properness(m: &KripkeModel) -> Result<(), LepViolation> {
    for w in 0..m.len() {
        let cell = m.successors(w, m.live(w));
        if cell != [w] {
            return Err(LepViolation::NotProper {
                world: id(m, w),
                cell: cell.into_iter().map(|v| id(m, v)).collect(),
            });
        }
    }
    Ok(())
}

/// Quotients a local epistemic model by its cells `[w]_δ`.
///
/// Returns the proper model and the map from old world index to cell
/// index. Cells are named `[w1,w2,...]` by their sorted member ids and
/// listed in order of first appearance.
pub fn properize(m: &KripkeModel) -> Result<(KripkeModel, Vec<usize>), NotLocalEpistemic> {
    let report = check_local_epistemic(m);
    if !report.is_local_epistemic() {
        return Err(NotLocalEpistemic(report.local_violations()));
    }
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut quotient = Vec::with_capacity(m.len());
    for w in 0..m.len() {
        let cell = m.successors(w, m.live(w));
        let index = match cells.iter().position(|c| *c == cell) {
            Some(i) => i,
            None => {
                cells.push(cell);
                cells.len() - 1
            }
        };
        quotient.push(index);
    }
    let worlds = cells
        .iter()
        .map(|cell| {
            let rep = &m.worlds()[cell[0]];
            let mut ids: Vec<&str> = cell.iter().map(|&v| m.worlds()[v].id.as_str()).collect();
            ids.sort_unstable();
            World {
                id: format!("[{}]", ids.join(",")),
                domain: rep.domain.clone(),
                interp: rep.interp.clone(),
            }
        })
        .collect();
    let edges: BTreeMap<AgentId, BTreeSet<(usize, usize)>> = m
        .edges()
        .into_iter()
        .map(|(a, pairs)| {
            let mapped = pairs.into_iter().map(|(w, v)| (quotient[w], quotient[v])).collect();
            (a, mapped)
        })
        .collect();
    let pr = KripkeModel::from_parts(m.agents().clone(), worlds, edges)
        .expect("quotient of a local epistemic model is well formed");
    Ok((pr, quotient))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{fixtures, KripkeDoc};

    fn model(json: &str) -> KripkeModel {
        KripkeModel::from_doc(&serde_json::from_str::<KripkeDoc>(json).unwrap()).unwrap()
    }

    #[test]
    fn hexagon_passes_everything() {
        let report = check_local_epistemic(&fixtures::hex_kripke());
        assert!(report.is_proper(), "{report}");
    }

    #[test]
    fn missing_reflexive_pair_breaks_s5() {
        let mut doc = fixtures::hex_kripke().to_doc();
        let pairs = doc.relations.get_mut(&AgentId::from("b")).unwrap();
        pairs.retain(|(w, v)| !(w == "ab" && v == "ab"));
        let m = KripkeModel::from_doc(&doc).unwrap();
        assert_eq!(
            check_local_epistemic(&m).local_s5,
            Err(LepViolation::NotReflexive {
                agent: "b".into(),
                world: "ab".into()
            })
        );
    }

    #[test]
    fn growing_domain_in_cell_breaks_coll_decreasing() {
        let m = model(
            r#"{"agents":["a","b"],
                "worlds":[{"id":"w","domain":["a"]},{"id":"v","domain":["a","b"]}],
                "relations":{"a":[["w","w"],["w","v"],["v","w"],["v","v"]],"b":[["v","v"]]}}"#,
        );
        let report = check_local_epistemic(&m);
        assert!(report.local_s5.is_ok() && report.indiv_increasing.is_ok());
        assert_eq!(
            report.coll_decreasing,
            Err(LepViolation::DomainGrows {
                world: "w".into(),
                successor: "v".into(),
                agent: "b".into()
            })
        );
    }

    #[test]
    fn dead_successor_and_predicate_changes_are_witnessed() {
        let m = model(
            r#"{"agents":["a","b"],
                "worlds":[{"id":"w","domain":["a"],"interp":{"p":["a"]}},{"id":"v","domain":["a","b"]}],
                "relations":{"a":[["w","w"],["w","v"],["v","w"],["v","v"]],"b":[["v","v"],["v","w"]]}}"#,
        );
        let report = check_local_epistemic(&m);
        assert_eq!(
            report.indiv_increasing,
            Err(LepViolation::DomainShrinks {
                agent: "b".into(),
                from: "v".into(),
                to: "w".into()
            })
        );
        assert!(matches!(
            report.local_predicates,
            Err(LepViolation::PredicateChanges { .. })
        ));
    }

    #[test]
    fn properize_merges_duplicates() {
        let m = model(
            r#"{"agents":["a"],
                "worlds":[{"id":"w","domain":["a"]},{"id":"v","domain":["a"]}],
                "relations":{"a":[["w","w"],["w","v"],["v","w"],["v","v"]]}}"#,
        );
        assert!(check_local_epistemic(&m).properness.is_err());
        let (pr, q) = properize(&m).unwrap();
        assert_eq!(pr.len(), 1);
        assert_eq!(pr.point_name(0), "[v,w]");
        assert_eq!(q, [0, 0]);
        assert!(check_local_epistemic(&pr).is_proper());
    }

    #[test]
    fn properize_keeps_a_singleton() {
        let m = model(r#"{"agents":["a"],"worlds":[{"id":"w","domain":["a"]}],"relations":{"a":[["w","w"]]}}"#);
        let (pr, q) = properize(&m).unwrap();
        assert_eq!((pr.len(), q), (1, vec![0]));
        assert!(pr.relates(&"a".into(), 0, 0));
    }

    #[test]
    fn properize_rejects_non_local_models() {
        let m = model(r#"{"agents":["a"],"worlds":[{"id":"w","domain":["a"]}]}"#);
        assert!(properize(&m).is_err());
    }
}
