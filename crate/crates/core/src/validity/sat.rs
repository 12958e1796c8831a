//! Bounded satisfiability by exhaustive model enumeration.

use super::enumerate;
use crate::models::SimplicialModel;
use crate::semantics::Evaluator;
use crate::syntax::{AgentId, AgentSet, Formula, PredId};
use std::collections::BTreeSet;
use thiserror::Error;

/// Largest bound picked by [`default_bound`].
pub const DEFAULT_BOUND_CAP: usize = 3;

/// Labeling bits above this make the enumeration impractical.
const MAX_LABEL_BITS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("`{0}` is not a sentence")]
    NotASentence(Formula),
    #[error("search space too large: {agents} agents, {preds} predicates, {facets} facets")]
    TooLarge { agents: usize, preds: usize, facets: usize },
}

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum SatResult {
    Sat {
        model: SimplicialModel,
        facet: usize,
    },
    /// No model with at most this many facets satisfies the sentence.
    UnsatUpTo(usize),
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat { .. })
    }
}

/// The agents of `alpha` plus one unused agent, and its predicates.
pub fn signature(alpha: &Formula) -> (AgentSet, BTreeSet<PredId>) {
    let mut agents = alpha.agents();
    let vars = alpha.all_vars();
    let spare = ('a'..='z')
        .map(|c| c.to_string())
        .chain((0..).map(|i| format!("agent{i}")))
        .find(|s| !agents.contains(s.as_str()) && !vars.contains(s.as_str()))
        .expect("unbounded supply of names");
    agents.insert(AgentId::from(spare.as_str()));
    (agents, alpha.predicates())
}

/// `2^(agents + K-subformulas)`, capped at [`DEFAULT_BOUND_CAP`]. A heuristic
/// only: no bound is known to make `UnsatUpTo` certify unsatisfiability.
pub fn default_bound(alpha: &Formula) -> usize {
    let mut ks = 0;
    alpha.visit(&mut |f| {
        if matches!(f, Formula::Know(..)) {
            ks += 1;
        }
    });
    let exp = alpha.agents().len() + ks;
    if exp >= usize::BITS as usize {
        DEFAULT_BOUND_CAP
    } else {
        (1usize << exp).min(DEFAULT_BOUND_CAP)
    }
}

fn check_size(agents: &AgentSet, preds: &BTreeSet<PredId>, max_facets: usize) -> Result<(), SatError> {
    if preds.len() * agents.len() * max_facets > MAX_LABEL_BITS {
        return Err(SatError::TooLarge {
            agents: agents.len(),
            preds: preds.len(),
            facets: max_facets,
        });
    }
    Ok(())
}

/// The enumeration used by [`sat_bounded`], exposed for cross-checks.
pub fn search_space(alpha: &Formula, max_facets: usize) -> Result<Vec<SimplicialModel>, SatError> {
    let (agents, preds) = signature(alpha);
    check_size(&agents, &preds, max_facets)?;
    Ok(enumerate::models(&agents, &preds, max_facets).collect())
}

/// The first facet satisfying `alpha` in canonical enumeration order.
pub fn sat_bounded(alpha: &Formula, max_facets: usize) -> Result<SatResult, SatError> {
    if !alpha.is_sentence() {
        return Err(SatError::NotASentence(alpha.clone()));
    }
    let (agents, preds) = signature(alpha);
    check_size(&agents, &preds, max_facets)?;
    for model in enumerate::models(&agents, &preds, max_facets) {
        let hit = Evaluator::new(&model)
            .truths(alpha)
            .expect("sentences evaluate")
            .iter()
            .position(|&t| t);
        if let Some(facet) = hit {
            assert!(
                crate::semantics::holds(&model, facet, alpha),
                "witness failed re-verification"
            );
            return Ok(SatResult::Sat { model, facet });
        }
    }
    Ok(SatResult::UnsatUpTo(max_facets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisim::greatest_bisim;
    use crate::models::{fixtures, EpistemicModel};
    use crate::semantics::holds;
    use crate::syntax::parse;

    #[test]
    fn existence_is_satisfiable_by_one_vertex() {
        let SatResult::Sat { model, facet } = sat_bounded(&parse("<x:=a> top").unwrap(), 2).unwrap() else {
            panic!("expected sat");
        };
        assert_eq!(model.len(), 1);
        assert_eq!(model.live(facet), &AgentSet::from([AgentId::from("a")]));
    }

    #[test]
    fn contradictory_existence() {
        let f = parse("(<x:=a> top & [x:=a] bot)").unwrap();
        for bound in 1..=3 {
            assert!(matches!(sat_bounded(&f, bound), Ok(SatResult::UnsatUpTo(b)) if b == bound));
        }
    }

    #[test]
    fn clarification_gap_is_realized_at_intro_size() {
        let [_, ii, iii, _] = fixtures::CLARIFICATIONS.map(|s| parse(s).unwrap());
        let f = ii.and(iii.not());
        let SatResult::Sat { model, facet } = sat_bounded(&f, 2).unwrap() else {
            panic!("expected sat");
        };
        assert!(holds(&model, facet, &f));
        assert!(model.len() <= 2);
        let intro = fixtures::intro();
        assert!(holds(&intro, 0, &f));
        // INTRO itself is in the search space
        let space = search_space(&f, 2).unwrap();
        assert!(space.iter().any(|m| {
            let rel = greatest_bisim(m, &intro);
            (0..m.len()).any(|i| rel.contains(i, 0))
        }));
    }

    #[test]
    fn spare_agent_and_bound() {
        let f = parse("<x:=a> K{x} [y:=b] p(y)").unwrap();
        let (agents, preds) = signature(&f);
        assert_eq!(agents.len(), 3);
        assert!(agents.contains("c"));
        assert_eq!(preds.len(), 1);
        assert_eq!(default_bound(&f), DEFAULT_BOUND_CAP);
        assert_eq!(default_bound(&Formula::Top), 1);
        assert!(matches!(
            sat_bounded(&parse("p(x)").unwrap(), 1),
            Err(SatError::NotASentence(_))
        ));
    }
}
