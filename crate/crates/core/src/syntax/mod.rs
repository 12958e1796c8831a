//! Abstract syntax of the term-modal language with assignment operators.
//!
//! Six primitive constructors make up the core: labeled atoms `p(x)`, `top`,
//! negation, conjunction, assignment operators `[x:=a]φ` and distributed
//! knowledge `K{X} α` over a finite variable set. Everything else (`bot`,
//! `|`, `->`, `<x:=a>`, `Khat`) is sugar, expanded on construction and
//! re-sugared by the printer.

mod generate;
mod parser;
mod printer;

pub use generate::{random_formula, random_open_formula, FormulaGen};
pub use parser::{parse, ParseError};

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

macro_rules! token_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(name: impl Into<String>) -> Self {
                Self(name.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl std::borrow::Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

token_newtype!(
    /// An agent name. Agents only ever appear on the right of `:=`.
    AgentId
);
token_newtype!(
    /// A variable; variables label atoms and knowledge operators.
    VarId
);
token_newtype!(
    /// A unary predicate symbol.
    PredId
);

/// Returns true if `s` is a legal agent/variable/predicate token.
pub fn is_valid_token(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(s, "top" | "bot")
}

pub type AgentSet = BTreeSet<AgentId>;
pub type VarSet = BTreeSet<VarId>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(PredId, VarId),
    Top,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Assign(VarId, AgentId, Box<Formula>),
    /// Distributed knowledge of the group named by the variables. The body
    /// must be a sentence.
    Know(VarSet, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("variable `{var}` is free under K{{{vars}}}; knowledge bodies must be sentences")]
    FreeVariableUnderK { var: VarId, vars: String },
    #[error("substitution of `{replacement}` for `{var}` is not admissible: `{var}` occurs free under [{replacement}:={agent}]")]
    InadmissibleSubstitution {
        var: VarId,
        replacement: VarId,
        agent: AgentId,
    },
    #[error("token `{0}` is used both as an agent and as a variable")]
    AgentVariableClash(String),
}

impl Formula {
    pub fn atom(pred: impl Into<PredId>, var: impl Into<VarId>) -> Self {
        Formula::Atom(pred.into(), var.into())
    }

    pub fn top() -> Self {
        Formula::Top
    }

    pub fn bot() -> Self {
        Formula::Top.not()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    /// `(φ | ψ)` as `~(~φ & ~ψ)`.
    pub fn or(self, other: Formula) -> Self {
        self.not().and(other.not()).not()
    }

    /// `(φ -> ψ)` as `~(φ & ~ψ)`.
    pub fn implies(self, other: Formula) -> Self {
        self.and(other.not()).not()
    }

    pub fn iff(self, other: Formula) -> Self {
        self.clone().implies(other.clone()).and(other.implies(self))
    }

    pub fn assign(var: impl Into<VarId>, agent: impl Into<AgentId>, body: Formula) -> Self {
        Formula::Assign(var.into(), agent.into(), Box::new(body))
    }

    /// `<x:=a>φ` as `~[x:=a]~φ`.
    pub fn diamond(var: impl Into<VarId>, agent: impl Into<AgentId>, body: Formula) -> Self {
        Formula::assign(var, agent, body.not()).not()
    }

    pub fn know<I, V>(vars: I, body: Formula) -> Self
    where
        I: IntoIterator<Item = V>,
        V: Into<VarId>,
    {
        let vars: VarSet = vars.into_iter().map(Into::into).collect();
        debug_assert!(body.is_sentence(), "K body must be closed: {body}");
        Formula::Know(vars, Box::new(body))
    }

    /// `Khat{X} α` as `~K{X}~α`.
    pub fn khat<I, V>(vars: I, body: Formula) -> Self
    where
        I: IntoIterator<Item = V>,
        V: Into<VarId>,
    {
        Formula::know(vars, body.not()).not()
    }

    /// Right-nested conjunction; the empty conjunction is `top`.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::Top;
        };
        while let Some(f) = items.pop() {
            acc = f.and(acc);
        }
        acc
    }

    /// Right-nested disjunction; the empty disjunction is `bot`.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Formula::bot();
        };
        while let Some(f) = items.pop() {
            acc = f.or(acc);
        }
        acc
    }

    /// `[x1:=a1]...[xn:=an]φ`.
    pub fn assign_prefix<'a>(prefix: impl IntoIterator<Item = (&'a VarId, &'a AgentId)>, body: Formula) -> Self {
        let prefix: Vec<_> = prefix.into_iter().collect();
        prefix
            .into_iter()
            .rev()
            .fold(body, |acc, (x, a)| Formula::Assign(x.clone(), a.clone(), Box::new(acc)))
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Formula::Not(inner) if **inner == Formula::Top)
    }

    pub fn free_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut VarSet) {
        match self {
            Formula::Atom(_, x) => {
                out.insert(x.clone());
            }
            Formula::Top => {}
            Formula::Not(f) => f.collect_free(out),
            Formula::And(f, g) => {
                f.collect_free(out);
                g.collect_free(out);
            }
            Formula::Assign(x, _, f) => {
                let mut inner = VarSet::new();
                f.collect_free(&mut inner);
                inner.remove(x);
                out.extend(inner);
            }
            Formula::Know(vars, _) => out.extend(vars.iter().cloned()),
        }
    }

    pub fn is_free(&self, var: &VarId) -> bool {
        match self {
            Formula::Atom(_, x) => x == var,
            Formula::Top => false,
            Formula::Not(f) => f.is_free(var),
            Formula::And(f, g) => f.is_free(var) || g.is_free(var),
            Formula::Assign(x, _, f) => x != var && f.is_free(var),
            Formula::Know(vars, _) => vars.contains(var),
        }
    }

    pub fn is_sentence(&self) -> bool {
        match self {
            Formula::Atom(..) => false,
            Formula::Top => true,
            Formula::Not(f) => f.is_sentence(),
            Formula::And(f, g) => f.is_sentence() && g.is_sentence(),
            Formula::Assign(x, _, f) => f.free_vars().iter().all(|v| v == x),
            Formula::Know(vars, _) => vars.is_empty(),
        }
    }

    /// Every variable token occurring anywhere, bound or free.
    pub fn all_vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(_, x) | Formula::Assign(x, _, _) => {
                out.insert(x.clone());
            }
            Formula::Know(vars, _) => out.extend(vars.iter().cloned()),
            _ => {}
        });
        out
    }

    pub fn agents(&self) -> AgentSet {
        let mut out = AgentSet::new();
        self.visit(&mut |f| {
            if let Formula::Assign(_, a, _) = f {
                out.insert(a.clone());
            }
        });
        out
    }

    pub fn predicates(&self) -> BTreeSet<PredId> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(p, _) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Atom(..) | Formula::Top => {}
            Formula::Not(g) | Formula::Assign(_, _, g) | Formula::Know(_, g) => g.visit(f),
            Formula::And(g, h) => {
                g.visit(f);
                h.visit(f);
            }
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Nesting depth of assignment and knowledge operators.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Atom(..) | Formula::Top => 0,
            Formula::Not(f) => f.modal_depth(),
            Formula::And(f, g) => f.modal_depth().max(g.modal_depth()),
            Formula::Assign(_, _, f) | Formula::Know(_, f) => 1 + f.modal_depth(),
        }
    }

    /// Checks that every knowledge body is a sentence.
    pub fn check_well_formed(&self) -> Result<(), SyntaxError> {
        let mut err = None;
        self.visit(&mut |f| {
            if err.is_some() {
                return;
            }
            if let Formula::Know(vars, body) = f {
                if let Some(var) = body.free_vars().into_iter().next() {
                    err = Some(SyntaxError::FreeVariableUnderK { var, vars: join(vars) });
                }
            }
        });
        err.map_or(Ok(()), Err)
    }

    /// Rejects formulas that use a declared agent name as a variable.
    pub fn check_disjoint(&self, agents: &AgentSet) -> Result<(), SyntaxError> {
        match self.all_vars().into_iter().find(|v| agents.contains(v.as_str())) {
            Some(v) => Err(SyntaxError::AgentVariableClash(v.0)),
            None => Ok(()),
        }
    }

    /// `φ[y/x]`: replaces the free occurrences of `x` with `y`.
    ///
    /// Fails if some free occurrence of `x` sits under a binder `[y:=a]`,
    /// where it would be captured.
    pub fn substitute(&self, replacement: &VarId, var: &VarId) -> Result<Formula, SyntaxError> {
        Ok(match self {
            Formula::Atom(p, x) if x == var => Formula::Atom(p.clone(), replacement.clone()),
            Formula::Atom(..) | Formula::Top => self.clone(),
            Formula::Not(f) => f.substitute(replacement, var)?.not(),
            Formula::And(f, g) => f.substitute(replacement, var)?.and(g.substitute(replacement, var)?),
            Formula::Assign(x, _, _) if x == var => self.clone(),
            Formula::Assign(x, a, f) => {
                if x == replacement && f.is_free(var) {
                    return Err(SyntaxError::InadmissibleSubstitution {
                        var: var.clone(),
                        replacement: replacement.clone(),
                        agent: a.clone(),
                    });
                }
                Formula::Assign(x.clone(), a.clone(), Box::new(f.substitute(replacement, var)?))
            }
            Formula::Know(vars, body) if vars.contains(var) => {
                let mut vars = vars.clone();
                vars.remove(var);
                vars.insert(replacement.clone());
                Formula::Know(vars, body.clone())
            }
            Formula::Know(..) => self.clone(),
        })
    }

    /// True when `φ[y/x]` is admissible.
    pub fn substitution_admissible(&self, replacement: &VarId, var: &VarId) -> bool {
        self.substitute(replacement, var).is_ok()
    }
}

/// The lexicographically smallest `x<n>` not in `avoid`.
pub fn fresh_var(avoid: &VarSet) -> VarId {
    (0..)
        .map(|n| VarId(format!("x{n}")))
        .find(|v| !avoid.contains(v))
        .expect("unbounded counter")
}

/// `n` distinct fresh variables, in order.
pub fn fresh_vars(avoid: &VarSet, n: usize) -> Vec<VarId> {
    let mut avoid = avoid.clone();
    (0..n)
        .map(|_| {
            let v = fresh_var(&avoid);
            avoid.insert(v.clone());
            v
        })
        .collect()
}

pub(crate) fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|t| t.to_string()).collect::<Vec<_>>().join(",")
}
