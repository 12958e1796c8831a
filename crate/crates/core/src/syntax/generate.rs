//! Seeded random formulas for the property suites.

use super::{AgentId, AgentSet, Formula, PredId, VarId, VarSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Random formula source over a fixed signature.
///
/// `depth` bounds the nesting of assignment and knowledge operators; the
/// Boolean structure in between is bounded separately by a size budget.
#[derive(Debug, Clone)]
pub struct FormulaGen {
    agents: Vec<AgentId>,
    preds: Vec<PredId>,
    vars: Vec<VarId>,
}

impl FormulaGen {
    pub fn new<'a>(agents: impl IntoIterator<Item = &'a AgentId>, preds: impl IntoIterator<Item = &'a PredId>) -> Self {
        let mut agents: Vec<AgentId> = agents.into_iter().cloned().collect();
        agents.sort();
        agents.dedup();
        assert!(!agents.is_empty(), "formula generator needs at least one agent");
        let mut preds: Vec<PredId> = preds.into_iter().cloned().collect();
        preds.sort();
        preds.dedup();
        FormulaGen {
            agents,
            preds,
            vars: ["x", "y", "z"].into_iter().map(VarId::from).collect(),
        }
    }

    pub fn agents(&self) -> &[AgentId] {
        &self.agents
    }

    pub fn preds(&self) -> &[PredId] {
        &self.preds
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn agent<R: Rng>(&self, rng: &mut R) -> AgentId {
        self.agents.choose(rng).expect("non-empty").clone()
    }

    pub fn var<R: Rng>(&self, rng: &mut R) -> VarId {
        self.vars.choose(rng).expect("non-empty").clone()
    }

    /// A sentence of modal depth at most `depth`.
    pub fn sentence<R: Rng>(&self, rng: &mut R, depth: usize) -> Formula {
        self.open(rng, &[], depth)
    }

    /// A formula whose free variables are among `free`.
    pub fn open<R: Rng>(&self, rng: &mut R, free: &[VarId], depth: usize) -> Formula {
        let mut bound = free.to_vec();
        self.gen(rng, depth, 3 + 2 * depth, &mut bound)
    }

    /// A formula drawn from `χ ::= p(x) | K{x} α | ~χ | (χ & χ)` with sentences
    /// `α` of depth below `depth`.
    pub fn introspective_group<R: Rng>(&self, rng: &mut R, x: &VarId, depth: usize) -> Formula {
        self.introspective(rng, x, depth, 4)
    }

    fn introspective<R: Rng>(&self, rng: &mut R, x: &VarId, depth: usize, budget: usize) -> Formula {
        let roll = if budget == 0 {
            rng.gen_range(0..2)
        } else {
            rng.gen_range(0..5)
        };
        match roll {
            0 if !self.preds.is_empty() => Formula::Atom(self.preds.choose(rng).unwrap().clone(), x.clone()),
            0 | 1 => Formula::know([x.clone()], self.sentence(rng, depth.saturating_sub(1))),
            2 => self.introspective(rng, x, depth, budget - 1).not(),
            _ => self
                .introspective(rng, x, depth, budget / 2)
                .and(self.introspective(rng, x, depth, budget / 2)),
        }
    }

    fn leaf<R: Rng>(&self, rng: &mut R, bound: &[VarId]) -> Formula {
        if !bound.is_empty() && !self.preds.is_empty() && rng.gen_bool(0.6) {
            let p = self.preds.choose(rng).unwrap().clone();
            let x = bound.choose(rng).unwrap().clone();
            Formula::Atom(p, x)
        } else if rng.gen_bool(0.75) {
            Formula::Top
        } else {
            Formula::bot()
        }
    }

    fn gen<R: Rng>(&self, rng: &mut R, depth: usize, budget: usize, bound: &mut Vec<VarId>) -> Formula {
        if budget == 0 || rng.gen_bool(0.15) {
            return self.leaf(rng, bound);
        }
        let modal = depth > 0;
        match rng.gen_range(0..12) {
            0 | 1 => self.gen(rng, depth, budget - 1, bound).not(),
            2..=4 => {
                let half = (budget - 1) / 2;
                let f = self.gen(rng, depth, half, bound);
                f.and(self.gen(rng, depth, half, bound))
            }
            5..=7 if modal => {
                let x = self.var(rng);
                let a = self.agent(rng);
                bound.push(x.clone());
                let body = self.gen(rng, depth - 1, budget - 1, bound);
                bound.pop();
                if rng.gen_bool(0.5) {
                    Formula::assign(x, a, body)
                } else {
                    Formula::diamond(x, a, body)
                }
            }
            8..=10 if modal => {
                let candidates: Vec<VarId> = bound.iter().cloned().collect::<VarSet>().into_iter().collect();
                let vars: VarSet = candidates.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
                let body = self.gen(rng, depth - 1, budget - 1, &mut Vec::new());
                if rng.gen_bool(0.7) {
                    Formula::know(vars, body)
                } else {
                    Formula::khat(vars, body)
                }
            }
            _ => self.leaf(rng, bound),
        }
    }
}

/// A deterministic random sentence over the given signature.
pub fn random_formula(agents: &AgentSet, preds: &BTreeSet<PredId>, depth: usize, seed: u64) -> Formula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    FormulaGen::new(agents, preds).sentence(&mut rng, depth)
}

/// A deterministic random formula with free variables among `free`.
pub fn random_open_formula(
    agents: &AgentSet,
    preds: &BTreeSet<PredId>,
    free: &[VarId],
    depth: usize,
    seed: u64,
) -> Formula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    FormulaGen::new(agents, preds).open(&mut rng, free, depth)
}
