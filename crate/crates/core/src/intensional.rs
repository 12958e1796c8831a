//! Intensional groups and their distributed knowledge `K_φ`.
//!
//! A group formula `φ(x)` picks out, at each point, the live agents that
//! satisfy it. `K_φ α` quantifies over the successors of that extension.
//! It is evaluated two ways: directly, and through its expansion into a
//! conjunction over candidate extensions guarded by characterizers.

use crate::models::{EpistemicModel, SimplicialModel};
use crate::semantics::{eval, holds, Assignment, Evaluator};
use crate::syntax::{fresh_vars, parse, AgentId, AgentSet, Formula, ParseError, PredId, VarId, VarSet};
use crate::validity::enumerate;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Expansions are exponential in the universe; larger ones are refused.
pub const MAX_EXPANSION_AGENTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntensionalError {
    #[error("group formula `{formula}` has free variables {vars:?}; at most one is allowed")]
    TooManyFreeVariables { formula: Formula, vars: Vec<VarId> },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("`{0}` is not a sentence")]
    NotASentence(Formula),
    #[error("expansion over {0} agents exceeds the limit of {MAX_EXPANSION_AGENTS}")]
    UniverseTooLarge(usize),
}

/// A formula with at most one free variable, the designated `var`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupFormula {
    var: VarId,
    body: Formula,
}

impl GroupFormula {
    /// Uses the formula's free variable if it has one, `x` otherwise.
    pub fn new(body: Formula) -> Result<Self, IntensionalError> {
        let free: Vec<VarId> = body.free_vars().into_iter().collect();
        match free.as_slice() {
            [] => Ok(GroupFormula { var: "x".into(), body }),
            [v] => Ok(GroupFormula { var: v.clone(), body }),
            _ => Err(IntensionalError::TooManyFreeVariables {
                formula: body,
                vars: free,
            }),
        }
    }

    pub fn with_var(body: Formula, var: VarId) -> Result<Self, IntensionalError> {
        let free: Vec<VarId> = body.free_vars().into_iter().collect();
        if free.iter().any(|v| *v != var) {
            return Err(IntensionalError::TooManyFreeVariables {
                formula: body,
                vars: free,
            });
        }
        Ok(GroupFormula { var, body })
    }

    pub fn parse(text: &str) -> Result<Self, IntensionalError> {
        Self::new(parse(text)?)
    }

    pub fn var(&self) -> &VarId {
        &self.var
    }

    pub fn body(&self) -> &Formula {
        &self.body
    }

    /// Membership in `χ ::= p(x) | K{x} α | ~χ | (χ & χ)`.
    pub fn in_introspective_grammar(&self) -> bool {
        fn go(f: &Formula, x: &VarId) -> bool {
            match f {
                Formula::Atom(_, y) => y == x,
                Formula::Know(xs, _) => xs.len() == 1 && xs.contains(x),
                Formula::Not(g) => go(g, x),
                Formula::And(g, h) => go(g, x) && go(h, x),
                Formula::Top | Formula::Assign(..) => false,
            }
        }
        go(&self.body, &self.var)
    }
}

impl fmt::Display for GroupFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.body)
    }
}

/// φ(M, w): the live agents satisfying `phi` at `point`.
pub fn group_extension<M: EpistemicModel + ?Sized>(model: &M, phi: &GroupFormula, point: usize) -> AgentSet {
    model
        .live(point)
        .iter()
        .filter(|a| {
            let sigma = Assignment::from([(phi.var.clone(), (*a).clone())]);
            eval(model, point, &sigma, &phi.body).expect("live agents are admissible")
        })
        .cloned()
        .collect()
}

/// φ!(A): `A` is exactly the extension of `phi`, relative to `universe`.
pub fn characterizer(phi: &GroupFormula, group: &AgentSet, universe: &AgentSet) -> Formula {
    let x = &phi.var;
    Formula::conj(universe.union(group).map(|a| {
        if group.contains(a) {
            Formula::diamond(x.clone(), a.clone(), phi.body.clone())
        } else {
            Formula::assign(x.clone(), a.clone(), phi.body.clone().not())
        }
    }))
}

/// Subsets of `universe` in bitmask order over its sorted elements.
fn subsets(universe: &AgentSet) -> Vec<Vec<AgentId>> {
    let items: Vec<&AgentId> = universe.iter().collect();
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

/// `⋀_A (φ!(A) -> [x⃗:=a⃗] K{x⃗} α)` over all `A ⊆ universe`.
pub fn expand_k_phi(phi: &GroupFormula, alpha: &Formula, universe: &AgentSet) -> Result<Formula, IntensionalError> {
    if !alpha.is_sentence() {
        return Err(IntensionalError::NotASentence(alpha.clone()));
    }
    if universe.len() > MAX_EXPANSION_AGENTS {
        return Err(IntensionalError::UniverseTooLarge(universe.len()));
    }
    Ok(Formula::conj(subsets(universe).into_iter().map(|group| {
        let vars = fresh_vars(&VarSet::new(), group.len());
        let k = Formula::know(vars.iter().cloned(), alpha.clone());
        let guarded = Formula::assign_prefix(vars.iter().zip(&group), k);
        characterizer(phi, &group.into_iter().collect(), universe).implies(guarded)
    })))
}

/// `K_φ` applied pointwise to the truth set `inner` of some sentence.
pub fn k_phi_truths<M: EpistemicModel + ?Sized>(model: &M, phi: &GroupFormula, inner: &[bool]) -> Vec<bool> {
    (0..model.len())
        .map(|w| {
            let group = group_extension(model, phi, w);
            model.successors(w, &group).into_iter().all(|v| inner[v])
        })
        .collect()
}

/// `K_φ α` at `point` by the direct truth condition.
pub fn eval_k_phi_direct<M: EpistemicModel + ?Sized>(
    model: &M,
    phi: &GroupFormula,
    alpha: &Formula,
    point: usize,
) -> Result<bool, IntensionalError> {
    if !alpha.is_sentence() {
        return Err(IntensionalError::NotASentence(alpha.clone()));
    }
    let group = group_extension(model, phi, point);
    let mut ev = Evaluator::new(model);
    for v in model.successors(point, &group) {
        if !ev.sentence(v, alpha).expect("sentences evaluate") {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntrospectionFailure {
    pub model: usize,
    pub point: String,
    pub alpha: Formula,
}

#[derive(Debug, Clone)]
pub struct PosIntrospectionReport {
    /// Whether `phi` is in the grammar for which positive introspection is
    /// guaranteed. Outside it, failures are expected and not an error.
    pub in_grammar: bool,
    pub checks: usize,
    pub failures: Vec<IntrospectionFailure>,
}

impl PosIntrospectionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for PosIntrospectionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scope = if self.in_grammar {
            "in grammar"
        } else {
            "outside grammar; no guarantee"
        };
        write!(f, "{} checks, {} failures ({scope})", self.checks, self.failures.len())
    }
}

/// Checks `K_φ α -> K_φ K_φ α` at every point of every model.
pub fn check_pos_introspection(
    phi: &GroupFormula,
    alphas: &[Formula],
    models: &[&dyn EpistemicModel],
) -> Result<PosIntrospectionReport, IntensionalError> {
    if let Some(a) = alphas.iter().find(|a| !a.is_sentence()) {
        return Err(IntensionalError::NotASentence(a.clone()));
    }
    let mut checks = 0;
    let mut failures = Vec::new();
    for (i, &m) in models.iter().enumerate() {
        for alpha in alphas {
            let truths = Evaluator::new(m).truths(alpha).expect("sentences evaluate");
            let once = k_phi_truths(m, phi, &truths);
            let twice = k_phi_truths(m, phi, &once);
            for w in 0..m.len() {
                checks += 1;
                if once[w] && !twice[w] {
                    failures.push(IntrospectionFailure {
                        model: i,
                        point: m.point_name(w).to_owned(),
                        alpha: alpha.clone(),
                    });
                }
            }
        }
    }
    Ok(PosIntrospectionReport {
        in_grammar: phi.in_introspective_grammar(),
        checks,
        failures,
    })
}

/// A point where `~K_φ α -> K_φ ~K_φ α` fails.
#[derive(Debug, Clone)]
pub struct NegIntrospectionWitness {
    pub model: SimplicialModel,
    pub point: usize,
    pub alpha: Formula,
}

impl NegIntrospectionWitness {
    /// The instance `~K_φ α -> K_φ ~K_φ α` written out by expansion.
    pub fn instance(&self, phi: &GroupFormula) -> Formula {
        let universe = self.model.agents();
        let k = expand_k_phi(phi, &self.alpha, universe).expect("witness universe is small");
        let kk = expand_k_phi(phi, &k.clone().not(), universe).expect("witness universe is small");
        k.not().implies(kk)
    }

    /// Re-checks the failure by evaluating the expanded instance.
    pub fn verify(&self, phi: &GroupFormula) -> bool {
        !holds(&self.model, self.point, &self.instance(phi))
    }
}

fn candidate_sentences(agents: &AgentSet, preds: &BTreeSet<PredId>) -> Vec<Formula> {
    let mut out = Vec::new();
    for a in agents {
        out.push(Formula::assign("x", a.clone(), Formula::bot()));
        out.push(Formula::diamond("x", a.clone(), Formula::Top));
        for p in preds {
            let atom = Formula::atom(p.clone(), "x");
            out.push(Formula::assign("x", a.clone(), atom.clone()));
            out.push(Formula::diamond("x", a.clone(), atom.clone()));
            out.push(Formula::assign("x", a.clone(), atom.clone().not()));
            out.push(Formula::diamond("x", a.clone(), atom.not()));
        }
    }
    out
}

/// Searches simplicial models over agents `a, b, c` with at most `bound`
/// facets, in enumeration order, for a failure of negative introspection.
/// Sentences are the one-binder formulas `[x:=a] bot`, `<x:=a> top`,
/// `[x:=a] q(x)`, `<x:=a> q(x)` and their negated-atom variants.
pub fn search_neg_introspection_counterexample(phi: &GroupFormula, bound: usize) -> Option<NegIntrospectionWitness> {
    let agents: AgentSet = ["a", "b", "c"].into_iter().map(AgentId::from).collect();
    let mut preds = phi.body.predicates();
    if preds.is_empty() {
        preds.insert(PredId::from("p"));
    }
    let sentences = candidate_sentences(&agents, &preds);
    for model in enumerate::models(&agents, &preds, bound) {
        for alpha in &sentences {
            let truths = Evaluator::new(&model).truths(alpha).expect("sentences evaluate");
            let k = k_phi_truths(&model, phi, &truths);
            let not_k: Vec<bool> = k.iter().map(|t| !t).collect();
            let k_not_k = k_phi_truths(&model, phi, &not_k);
            if let Some(point) = (0..model.len()).find(|&w| not_k[w] && !k_not_k[w]) {
                let witness = NegIntrospectionWitness {
                    model,
                    point,
                    alpha: alpha.clone(),
                };
                assert!(witness.verify(phi), "direct and expanded semantics disagree");
                return Some(witness);
            }
        }
    }
    None
}
