//! Axiom schemas of the proof system and random closed instances.

use crate::syntax::{fresh_var, AgentId, AgentSet, Formula, FormulaGen, PredId, VarId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomSchema {
    Taut,
    KK,
    MonoK,
    KAssign,
    Det,
    Tr,
    Sub,
    Com,
    Ui,
    TK,
    Kni,
    Epi,
    Api,
    Eni,
    Rename,
    Kpi,
    Ani,
    ElmTr,
    ElmNot,
    ElmAnd,
    ElmAssign,
    /// ENI with `B` drawn freely instead of as the complement of the
    /// prefix agents. Not valid; used to check that the harness can fail.
    EniUnguarded,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown axiom schema `{0}`")]
pub struct UnknownSchema(String);

impl AxiomSchema {
    pub const PRIMITIVE: [AxiomSchema; 14] = [
        AxiomSchema::Taut,
        AxiomSchema::KK,
        AxiomSchema::MonoK,
        AxiomSchema::KAssign,
        AxiomSchema::Det,
        AxiomSchema::Tr,
        AxiomSchema::Sub,
        AxiomSchema::Com,
        AxiomSchema::Ui,
        AxiomSchema::TK,
        AxiomSchema::Kni,
        AxiomSchema::Epi,
        AxiomSchema::Api,
        AxiomSchema::Eni,
    ];

    pub const DERIVED: [AxiomSchema; 3] = [AxiomSchema::Rename, AxiomSchema::Kpi, AxiomSchema::Ani];

    pub const ELM: [AxiomSchema; 4] = [
        AxiomSchema::ElmTr,
        AxiomSchema::ElmNot,
        AxiomSchema::ElmAnd,
        AxiomSchema::ElmAssign,
    ];

    /// Every valid schema: primitive, derived and ELM.
    pub fn all() -> Vec<AxiomSchema> {
        Self::PRIMITIVE
            .iter()
            .chain(&Self::DERIVED)
            .chain(&Self::ELM)
            .copied()
            .collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            AxiomSchema::Taut => "TAUT",
            AxiomSchema::KK => "K^K",
            AxiomSchema::MonoK => "MONO^K",
            AxiomSchema::KAssign => "K^[:=]",
            AxiomSchema::Det => "DET^[:=]",
            AxiomSchema::Tr => "TR^[:=]",
            AxiomSchema::Sub => "SUB^[:=]",
            AxiomSchema::Com => "COM^[:=]",
            AxiomSchema::Ui => "UI^[:=]",
            AxiomSchema::TK => "T^K",
            AxiomSchema::Kni => "KNI",
            AxiomSchema::Epi => "EPI",
            AxiomSchema::Api => "API",
            AxiomSchema::Eni => "ENI",
            AxiomSchema::Rename => "R^[:=]",
            AxiomSchema::Kpi => "KPI",
            AxiomSchema::Ani => "ANI",
            AxiomSchema::ElmTr => "ELM^TR",
            AxiomSchema::ElmNot => "ELM^~",
            AxiomSchema::ElmAnd => "ELM^&",
            AxiomSchema::ElmAssign => "ELM^[:=]",
            AxiomSchema::EniUnguarded => "ENI-unguarded",
        }
    }

    /// The metavariables an instance draws, with side conditions.
    pub fn signature(self) -> &'static str {
        match self {
            AxiomSchema::Taut => "tautology skeleton; formulas φ1..φ3",
            AxiomSchema::KK => "variable set X; sentences α, β",
            AxiomSchema::MonoK => "variable sets X ⊆ Y; sentence α",
            AxiomSchema::KAssign => "variable x; agent a; formulas φ, ψ",
            AxiomSchema::Det => "variable x; agent a; formula φ",
            AxiomSchema::Tr => "variable x; agent a; formula φ with x ∉ FV(φ)",
            AxiomSchema::Sub => "variables x ≠ y; agent a; formula φ with φ[y/x] admissible",
            AxiomSchema::Com => "variables x ≠ y; agents a, b; formula φ",
            AxiomSchema::Ui => "variable x; formula φ; the agent universe",
            AxiomSchema::TK => "variable set X; sentence α",
            AxiomSchema::Kni | AxiomSchema::Kpi => "variable string x⃗; agent string a⃗; sentence α",
            AxiomSchema::Epi => "variable x; agent a",
            AxiomSchema::Api | AxiomSchema::Ani => "variable x; agent a; predicate p",
            AxiomSchema::Eni => "variable string x⃗; agent string a⃗; B = universe ∖ {a⃗}",
            AxiomSchema::EniUnguarded => "variable string x⃗; agent string a⃗; arbitrary B",
            AxiomSchema::Rename => "variable x; agent a; formula φ; y not in φ",
            AxiomSchema::ElmTr => "variable x; agent a; formula χ with x ∉ FV(χ)",
            AxiomSchema::ElmNot | AxiomSchema::ElmAnd => "variable x; agent a; formulas φ, ψ",
            AxiomSchema::ElmAssign => "variables x ≠ y; agents a, b; formula φ",
        }
    }
}

impl fmt::Display for AxiomSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomSchema {
    type Err = UnknownSchema;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = |t: &str| t.to_ascii_uppercase().replace(['^', '[', ']', ':', '=', '-', '_'], "");
        let wanted = norm(s);
        Self::all()
            .into_iter()
            .chain([AxiomSchema::EniUnguarded])
            .find(|a| norm(a.name()) == wanted)
            .or(match wanted.as_str() {
                "ELMNOT" | "ELM¬" => Some(AxiomSchema::ElmNot),
                "ELMAND" | "ELM∧" => Some(AxiomSchema::ElmAnd),
                "R" | "RENAME" => Some(AxiomSchema::Rename),
                _ => None,
            })
            .ok_or_else(|| UnknownSchema(s.to_owned()))
    }
}

/// Propositional skeletons for TAUT instances.
#[derive(Debug, Clone)]
enum Prop {
    Letter(usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Implies(Box<Prop>, Box<Prop>),
}

impl Prop {
    const LETTERS: usize = 3;

    fn random<R: Rng>(rng: &mut R, budget: usize) -> Prop {
        if budget == 0 || rng.gen_bool(0.25) {
            return Prop::Letter(rng.gen_range(0..Self::LETTERS));
        }
        let half = (budget - 1) / 2;
        match rng.gen_range(0..4) {
            0 => Prop::Not(Box::new(Prop::random(rng, budget - 1))),
            1 => Prop::And(Box::new(Prop::random(rng, half)), Box::new(Prop::random(rng, half))),
            2 => Prop::Or(Box::new(Prop::random(rng, half)), Box::new(Prop::random(rng, half))),
            _ => Prop::Implies(Box::new(Prop::random(rng, half)), Box::new(Prop::random(rng, half))),
        }
    }

    fn eval(&self, row: usize) -> bool {
        match self {
            Prop::Letter(i) => row & (1 << i) != 0,
            Prop::Not(p) => !p.eval(row),
            Prop::And(p, q) => p.eval(row) && q.eval(row),
            Prop::Or(p, q) => p.eval(row) || q.eval(row),
            Prop::Implies(p, q) => !p.eval(row) || q.eval(row),
        }
    }

    fn is_tautology(&self) -> bool {
        (0..1 << Self::LETTERS).all(|row| self.eval(row))
    }

    fn substitute(&self, letters: &[Formula]) -> Formula {
        match self {
            Prop::Letter(i) => letters[*i].clone(),
            Prop::Not(p) => p.substitute(letters).not(),
            Prop::And(p, q) => p.substitute(letters).and(q.substitute(letters)),
            Prop::Or(p, q) => p.substitute(letters).or(q.substitute(letters)),
            Prop::Implies(p, q) => p.substitute(letters).implies(q.substitute(letters)),
        }
    }

    /// Fallback tautologies, indexed by seed.
    fn template(i: usize) -> Prop {
        let l = |n| Box::new(Prop::Letter(n));
        match i % 4 {
            0 => Prop::Or(l(0), Box::new(Prop::Not(l(0)))),
            1 => Prop::Implies(l(0), Box::new(Prop::Implies(l(1), l(0)))),
            2 => Prop::Implies(Box::new(Prop::And(l(0), l(1))), l(1)),
            _ => Prop::Implies(
                Box::new(Prop::And(
                    Box::new(Prop::Implies(l(0), l(1))),
                    Box::new(Prop::Implies(l(1), l(2))),
                )),
                Box::new(Prop::Implies(l(0), l(2))),
            ),
        }
    }
}

/// Draws closed instances of schemas over a fixed signature.
#[derive(Debug, Clone)]
pub struct Instantiator {
    universe: AgentSet,
    preds: BTreeSet<PredId>,
    depth: usize,
    gen: FormulaGen,
}

impl Instantiator {
    /// `universe` must contain the agents of every model the instances are
    /// checked against (UI and ENI quantify over it).
    pub fn new(universe: &AgentSet, preds: &BTreeSet<PredId>, depth: usize) -> Self {
        Instantiator {
            universe: universe.clone(),
            preds: preds.clone(),
            depth,
            gen: FormulaGen::new(universe, preds),
        }
    }

    pub fn universe(&self) -> &AgentSet {
        &self.universe
    }

    pub fn instance(&self, schema: AxiomSchema, seed: u64) -> Formula {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let body = self.open_instance(schema, &mut rng);
        self.close(body, &mut rng)
    }

    /// Wraps `[v:=a]` around every free variable, outermost first in sorted
    /// order.
    fn close<R: Rng>(&self, f: Formula, rng: &mut R) -> Formula {
        f.free_vars()
            .into_iter()
            .rev()
            .fold(f, |acc, v| Formula::assign(v, self.gen.agent(rng), acc))
    }

    fn vars(&self) -> [VarId; 3] {
        ["x", "y", "z"].map(VarId::from)
    }

    fn open<R: Rng>(&self, rng: &mut R, free: &[VarId]) -> Formula {
        self.gen.open(rng, free, self.depth)
    }

    fn sentence<R: Rng>(&self, rng: &mut R) -> Formula {
        self.gen.sentence(rng, self.depth)
    }

    fn var_subset<R: Rng>(&self, rng: &mut R) -> BTreeSet<VarId> {
        self.vars().into_iter().filter(|_| rng.gen_bool(0.5)).collect()
    }

    /// Distinct variables with agents, for `[x⃗:=a⃗]` prefixes.
    fn prefix<R: Rng>(&self, rng: &mut R) -> Vec<(VarId, AgentId)> {
        let n = rng.gen_range(0..=self.universe.len().min(3));
        let mut vars = self.vars().to_vec();
        vars.shuffle(rng);
        vars.into_iter().take(n).map(|x| (x, self.gen.agent(rng))).collect()
    }

    fn pred<R: Rng>(&self, rng: &mut R) -> PredId {
        let preds: Vec<&PredId> = self.preds.iter().collect();
        preds.choose(rng).map_or_else(|| PredId::from("p"), |p| (*p).clone())
    }

    fn open_instance<R: Rng>(&self, schema: AxiomSchema, rng: &mut R) -> Formula {
        let [x, y, z] = self.vars();
        let all = [x.clone(), y.clone(), z.clone()];
        let a = self.gen.agent(rng);
        let b = self.gen.agent(rng);
        let with_prefix = |prefix: &[(VarId, AgentId)], body: Formula| {
            Formula::assign_prefix(prefix.iter().map(|(v, a)| (v, a)), body)
        };
        match schema {
            AxiomSchema::Taut => {
                let skeleton = (0..50)
                    .map(|_| Prop::random(rng, 7))
                    .find(Prop::is_tautology)
                    .unwrap_or_else(|| Prop::template(rng.gen()));
                let letters: Vec<Formula> = (0..Prop::LETTERS).map(|_| self.open(rng, &all)).collect();
                skeleton.substitute(&letters)
            }
            AxiomSchema::KK => {
                let xs = self.var_subset(rng);
                let (alpha, beta) = (self.sentence(rng), self.sentence(rng));
                Formula::know(xs.clone(), alpha.clone().implies(beta.clone()))
                    .implies(Formula::know(xs.clone(), alpha).implies(Formula::know(xs, beta)))
            }
            AxiomSchema::MonoK => {
                let xs = self.var_subset(rng);
                let ys: BTreeSet<VarId> = xs.iter().cloned().chain(self.var_subset(rng)).collect();
                let alpha = self.sentence(rng);
                Formula::know(xs, alpha.clone()).implies(Formula::know(ys, alpha))
            }
            AxiomSchema::KAssign => {
                let (phi, psi) = (self.open(rng, &all), self.open(rng, &all));
                Formula::assign(x.clone(), a.clone(), phi.clone().implies(psi.clone()))
                    .implies(Formula::assign(x.clone(), a.clone(), phi).implies(Formula::assign(x, a, psi)))
            }
            AxiomSchema::Det => {
                let phi = self.open(rng, &all);
                Formula::diamond(x.clone(), a.clone(), phi.clone()).implies(Formula::assign(x, a, phi))
            }
            AxiomSchema::Tr => {
                let phi = self.open(rng, &[y, z]);
                debug_assert!(!phi.is_free(&x));
                phi.clone().implies(Formula::assign(x, a, phi))
            }
            AxiomSchema::Sub => {
                let phi = (0..50)
                    .map(|_| self.open(rng, &all))
                    .find(|phi| phi.substitution_admissible(&y, &x))
                    .unwrap_or_else(|| Formula::atom(self.pred(rng), x.clone()));
                let substituted = phi.substitute(&y, &x).expect("checked admissible");
                Formula::assign(y, a.clone(), Formula::assign(x, a, phi).implies(substituted))
            }
            AxiomSchema::Com => {
                let phi = self.open(rng, &all);
                let lhs = Formula::assign(x.clone(), a.clone(), Formula::assign(y.clone(), b.clone(), phi.clone()));
                lhs.implies(Formula::assign(y, b, Formula::assign(x, a, phi)))
            }
            AxiomSchema::Ui => {
                let phi = self.open(rng, &all);
                Formula::conj(
                    self.universe
                        .iter()
                        .map(|c| Formula::assign(x.clone(), c.clone(), phi.clone())),
                )
                .implies(phi)
            }
            AxiomSchema::TK => {
                let alpha = self.sentence(rng);
                Formula::know(self.var_subset(rng), alpha.clone()).implies(alpha)
            }
            AxiomSchema::Kni => {
                let prefix = self.prefix(rng);
                let xs: Vec<VarId> = prefix.iter().map(|(v, _)| v.clone()).collect();
                let not_k = Formula::know(xs.clone(), self.sentence(rng)).not();
                let inner = Formula::know(xs, with_prefix(&prefix, not_k.clone()));
                with_prefix(&prefix, not_k.implies(inner))
            }
            AxiomSchema::Kpi => {
                let prefix = self.prefix(rng);
                let xs: Vec<VarId> = prefix.iter().map(|(v, _)| v.clone()).collect();
                let k = Formula::know(xs.clone(), self.sentence(rng));
                let inner = Formula::know(xs, with_prefix(&prefix, k.clone()));
                with_prefix(&prefix, k.implies(inner))
            }
            AxiomSchema::Epi => Formula::assign(
                x.clone(),
                a.clone(),
                Formula::know([x.clone()], Formula::diamond(x, a, Formula::Top)),
            ),
            AxiomSchema::Api | AxiomSchema::Ani => {
                let mut atom = Formula::atom(self.pred(rng), x.clone());
                if schema == AxiomSchema::Ani {
                    atom = atom.not();
                }
                let known = Formula::know([x.clone()], Formula::assign(x.clone(), a.clone(), atom.clone()));
                Formula::assign(x, a, atom.implies(known))
            }
            AxiomSchema::Eni | AxiomSchema::EniUnguarded => {
                let prefix = self.prefix(rng);
                let xs: Vec<VarId> = prefix.iter().map(|(v, _)| v.clone()).collect();
                let named: AgentSet = prefix.iter().map(|(_, a)| a.clone()).collect();
                let others: Vec<AgentId> = if schema == AxiomSchema::Eni {
                    self.universe.difference(&named).cloned().collect()
                } else {
                    self.universe.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
                };
                let dead = Formula::conj(
                    others
                        .into_iter()
                        .map(|b| Formula::assign(x.clone(), b, Formula::bot())),
                );
                with_prefix(&prefix, dead.clone().implies(Formula::know(xs, dead)))
            }
            AxiomSchema::Rename => {
                let phi = self.open(rng, &[x.clone(), z]);
                let fresh = fresh_var(&phi.all_vars());
                let renamed = phi.substitute(&fresh, &x).expect("fresh variable is never captured");
                Formula::assign(x, a.clone(), phi).iff(Formula::assign(fresh, a, renamed))
            }
            AxiomSchema::ElmTr => {
                let chi = self.open(rng, &[y, z]);
                Formula::assign(x.clone(), a.clone(), chi.clone()).iff(Formula::assign(x, a, Formula::bot()).or(chi))
            }
            AxiomSchema::ElmNot => {
                let phi = self.open(rng, &all);
                Formula::assign(x.clone(), a.clone(), phi.clone().not())
                    .iff(Formula::assign(x.clone(), a.clone(), Formula::bot()).or(Formula::assign(x, a, phi).not()))
            }
            AxiomSchema::ElmAnd => {
                let (phi, psi) = (self.open(rng, &all), self.open(rng, &all));
                Formula::assign(x.clone(), a.clone(), phi.clone().and(psi.clone()))
                    .iff(Formula::assign(x.clone(), a.clone(), phi).and(Formula::assign(x, a, psi)))
            }
            AxiomSchema::ElmAssign => {
                let phi = self.open(rng, &all);
                let lhs = Formula::assign(x.clone(), a.clone(), Formula::assign(y.clone(), b.clone(), phi.clone()));
                lhs.iff(Formula::assign(y, b, Formula::assign(x, a, phi)))
            }
        }
    }
}

/// A closed instance over agents `a, b, c` and predicates `p, q`.
pub fn instantiate(schema: AxiomSchema, seed: u64) -> Formula {
    let agents: AgentSet = ["a", "b", "c"].into_iter().map(AgentId::from).collect();
    let preds: BTreeSet<PredId> = ["p", "q"].into_iter().map(PredId::from).collect();
    Instantiator::new(&agents, &preds, 2).instance(schema, seed)
}
