//! Satisfaction for both model kinds.
//!
//! One evaluator serves simplicial and Kripke models through
//! [`EpistemicModel`]: the clauses only differ in how live agents,
//! predicate extensions and group successors are computed. Satisfaction is
//! only defined for admissible assignments, so an assignment sending a free
//! variable to a dead or unmapped agent is an error, never `false`.

use crate::models::{EpistemicModel, KripkeModel, SimplicialModel};
use crate::syntax::{AgentId, AgentSet, Formula, VarId};
use std::collections::{BTreeMap, HashMap};
use std::marker::PhantomData;
use thiserror::Error;

/// Finite partial map from variables to agents.
pub type Assignment = BTreeMap<VarId, AgentId>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("free variable `{0}` is not assigned")]
    UnmappedFreeVariable(VarId),
    #[error("assignment {var}={agent} is inadmissible at `{point}`: `{agent}` is not live there")]
    InadmissibleAssignment { var: VarId, agent: AgentId, point: String },
    #[error("no point with index {0}")]
    NoSuchPoint(usize),
}

/// Whether σ[FV(f)] consists of agents live at `point`.
pub fn admissible<M: EpistemicModel + ?Sized>(
    model: &M,
    point: usize,
    sigma: &Assignment,
    f: &Formula,
) -> Result<bool, EvalError> {
    let live = model.live(point);
    for x in f.free_vars() {
        match sigma.get(&x) {
            Some(a) if live.contains(a) => {}
            Some(_) => return Ok(false),
            None => return Err(EvalError::UnmappedFreeVariable(x)),
        }
    }
    Ok(true)
}

fn check_admissible<M: EpistemicModel + ?Sized>(
    model: &M,
    point: usize,
    sigma: &Assignment,
    f: &Formula,
) -> Result<(), EvalError> {
    if point >= model.len() {
        return Err(EvalError::NoSuchPoint(point));
    }
    let live = model.live(point);
    for x in f.free_vars() {
        match sigma.get(&x) {
            Some(a) if live.contains(a) => {}
            Some(a) => {
                return Err(EvalError::InadmissibleAssignment {
                    var: x,
                    agent: a.clone(),
                    point: model.point_name(point).to_owned(),
                })
            }
            None => return Err(EvalError::UnmappedFreeVariable(x)),
        }
    }
    Ok(())
}

/// Evaluator over one model, memoizing closed knowledge bodies per point.
///
/// The memo is keyed by node address, so it only lives as long as the
/// formulas borrowed for `'f`.
pub struct Evaluator<'m, 'f, M: EpistemicModel + ?Sized> {
    model: &'m M,
    memo: HashMap<(*const Formula, usize), bool>,
    _formulas: PhantomData<&'f Formula>,
}

impl<'m, 'f, M: EpistemicModel + ?Sized> Evaluator<'m, 'f, M> {
    pub fn new(model: &'m M) -> Self {
        Evaluator {
            model,
            memo: HashMap::new(),
            _formulas: PhantomData,
        }
    }

    pub fn model(&self) -> &'m M {
        self.model
    }

    pub fn eval(&mut self, point: usize, sigma: &Assignment, f: &'f Formula) -> Result<bool, EvalError> {
        check_admissible(self.model, point, sigma, f)?;
        let mut env: Vec<(&VarId, &AgentId)> = sigma.iter().collect();
        self.go(point, &mut env, f)
    }

    /// Truth of a closed formula at `point`.
    pub fn sentence(&mut self, point: usize, f: &'f Formula) -> Result<bool, EvalError> {
        self.eval(point, &Assignment::new(), f)
    }

    /// Truth of a closed formula at every point, in index order.
    pub fn truths(&mut self, f: &'f Formula) -> Result<Vec<bool>, EvalError> {
        (0..self.model.len()).map(|p| self.sentence(p, f)).collect()
    }

    fn lookup<'e>(env: &[(&'e VarId, &'e AgentId)], x: &VarId) -> Result<&'e AgentId, EvalError> {
        env.iter()
            .rev()
            .find(|(y, _)| *y == x)
            .map(|(_, a)| *a)
            .ok_or_else(|| EvalError::UnmappedFreeVariable(x.clone()))
    }

    fn go<'e>(
        &mut self,
        point: usize,
        env: &mut Vec<(&'e VarId, &'e AgentId)>,
        f: &'e Formula,
    ) -> Result<bool, EvalError>
    where
        'f: 'e,
    {
        match f {
            Formula::Top => Ok(true),
            Formula::Atom(p, x) => {
                let a = Self::lookup(env, x)?;
                Ok(self.model.extension(p, point).contains(a))
            }
            Formula::Not(g) => Ok(!self.go(point, env, g)?),
            Formula::And(g, h) => Ok(self.go(point, env, g)? && self.go(point, env, h)?),
            Formula::Assign(x, a, g) => {
                if !self.model.live(point).contains(a) {
                    return Ok(true);
                }
                env.push((x, a));
                let result = self.go(point, env, g);
                env.pop();
                result
            }
            Formula::Know(xs, body) => {
                let group = xs
                    .iter()
                    .map(|x| Self::lookup(env, x).cloned())
                    .collect::<Result<AgentSet, _>>()?;
                for g in self.model.successors(point, &group) {
                    if !self.closed(g, body)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    fn closed(&mut self, point: usize, body: &Formula) -> Result<bool, EvalError> {
        let key = (body as *const Formula, point);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let v = self.go(point, &mut Vec::new(), body)?;
        self.memo.insert(key, v);
        Ok(v)
    }
}

/// `model, point ⊨ f` under `sigma`, for either model kind.
pub fn eval<M: EpistemicModel + ?Sized>(
    model: &M,
    point: usize,
    sigma: &Assignment,
    f: &Formula,
) -> Result<bool, EvalError> {
    Evaluator::new(model).eval(point, sigma, f)
}

pub fn eval_simplicial(c: &SimplicialModel, facet: usize, sigma: &Assignment, f: &Formula) -> Result<bool, EvalError> {
    eval(c, facet, sigma, f)
}

pub fn eval_kripke(m: &KripkeModel, world: usize, sigma: &Assignment, f: &Formula) -> Result<bool, EvalError> {
    eval(m, world, sigma, f)
}

/// Truth of a closed formula. Panics if `alpha` has free variables.
pub fn holds<M: EpistemicModel + ?Sized>(model: &M, point: usize, alpha: &Formula) -> bool {
    eval(model, point, &Assignment::new(), alpha).expect("holds() takes a sentence")
}

/// The first point where `alpha` fails, or `None` if it is valid on the model.
pub fn valid_on_model<M: EpistemicModel + ?Sized>(model: &M, alpha: &Formula) -> Result<Option<usize>, EvalError> {
    let mut ev = Evaluator::new(model);
    for p in 0..model.len() {
        if !ev.sentence(p, alpha)? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}
