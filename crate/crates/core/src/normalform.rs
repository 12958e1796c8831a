//! Assignment normal form.
//!
//! [`nf_step`] is the single-binder translation NF^a_x: it pushes every
//! `[x:=a]` down until it sits over `p(x)`, `bot` or an assignment prefix
//! over a knowledge operator mentioning `x`. [`anf`] runs it once per
//! distinct binder of the input, innermost first.

use crate::syntax::{AgentId, Formula, VarId, VarSet};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error("`{0}` is not a sentence")]
    NotASentence(Formula),
    #[error("normalization did not reach assignment normal form within {0} passes")]
    NoFixpoint(usize),
}

/// Splits a maximal assignment prefix off `f`.
fn prefix(f: &Formula) -> (Vec<(&VarId, &AgentId)>, &Formula) {
    let mut binders = Vec::new();
    let mut cur = f;
    while let Formula::Assign(y, b, body) = cur {
        binders.push((y, b));
        cur = body;
    }
    (binders, cur)
}

/// Whether `theta` may stand under `[x:=...]` in `[x:=a]`-normal form.
fn settled_under(x: &VarId, theta: &Formula) -> bool {
    match theta {
        Formula::Atom(_, y) => y == x,
        t if t.is_bot() => true,
        _ => {
            let (binders, core) = prefix(theta);
            match core {
                Formula::Know(z, _) => z.contains(x) && binders.iter().all(|(y, _)| *y != x && z.contains(*y)),
                _ => false,
            }
        }
    }
}

/// NF^a_x.
pub fn nf_step(f: &Formula, x: &VarId, a: &AgentId) -> Formula {
    match f {
        Formula::Top | Formula::Atom(..) => f.clone(),
        Formula::Not(g) => nf_step(g, x, a).not(),
        Formula::And(g, h) => nf_step(g, x, a).and(nf_step(h, x, a)),
        Formula::Know(xs, body) => Formula::Know(xs.clone(), Box::new(nf_step(body, x, a))),
        Formula::Assign(y, b, chi) if y != x || b != a => Formula::assign(y.clone(), b.clone(), nf_step(chi, x, a)),
        Formula::Assign(_, _, chi) => bound(chi, x, a),
    }
}

/// NF^a_x([x:=a] chi).
fn bound(chi: &Formula, x: &VarId, a: &AgentId) -> Formula {
    let wrap = |g: Formula| Formula::assign(x.clone(), a.clone(), g);
    if settled_under(x, chi) {
        return wrap(settle(chi, x, a));
    }
    if !chi.is_free(x) {
        return wrap(Formula::bot()).or(nf_step(chi, x, a));
    }
    match chi {
        Formula::Not(phi) => wrap(Formula::bot()).or(bound(phi, x, a).not()),
        Formula::And(phi, psi) => bound(phi, x, a).and(bound(psi, x, a)),
        Formula::Assign(y, b, phi) => Formula::assign(y.clone(), b.clone(), bound(phi, x, a)),
        Formula::Know(xs, body) => wrap(Formula::Know(xs.clone(), Box::new(nf_step(body, x, a)))),
        Formula::Top | Formula::Atom(..) => unreachable!("x is free in chi and chi is not p(x)"),
    }
}

/// Recurses into the knowledge body of an already settled `[x:=a]` scope.
fn settle(chi: &Formula, x: &VarId, a: &AgentId) -> Formula {
    match chi {
        Formula::Assign(y, b, g) => Formula::assign(y.clone(), b.clone(), settle(g, x, a)),
        Formula::Know(xs, body) => Formula::Know(xs.clone(), Box::new(nf_step(body, x, a))),
        _ => chi.clone(),
    }
}

/// Distinct binders of `f` in post-order, innermost first.
pub fn binders(f: &Formula) -> Vec<(VarId, AgentId)> {
    fn go(f: &Formula, out: &mut Vec<(VarId, AgentId)>, seen: &mut BTreeSet<(VarId, AgentId)>) {
        match f {
            Formula::Top | Formula::Atom(..) => {}
            Formula::Not(g) | Formula::Know(_, g) => go(g, out, seen),
            Formula::And(g, h) => {
                go(g, out, seen);
                go(h, out, seen);
            }
            Formula::Assign(x, a, g) => {
                go(g, out, seen);
                if seen.insert((x.clone(), a.clone())) {
                    out.push((x.clone(), a.clone()));
                }
            }
        }
    }
    let mut out = Vec::new();
    go(f, &mut out, &mut BTreeSet::new());
    out
}

/// An assignment normal form of the sentence `alpha`.
pub fn anf(alpha: &Formula) -> Result<Formula, NormalFormError> {
    if !alpha.is_sentence() {
        return Err(NormalFormError::NotASentence(alpha.clone()));
    }
    let bound = binders(alpha).len() + 1;
    let mut cur = alpha.clone();
    for _ in 0..bound {
        if is_anf(&cur) {
            return Ok(cur);
        }
        for (x, a) in binders(&cur) {
            cur = nf_step(&cur, &x, &a);
        }
    }
    if is_anf(&cur) {
        Ok(cur)
    } else {
        Err(NormalFormError::NoFixpoint(bound))
    }
}

/// Membership in the assignment-normal-form grammar.
pub fn is_anf(f: &Formula) -> bool {
    match f {
        Formula::Top => true,
        Formula::Atom(..) => false,
        Formula::Not(g) => is_anf(g),
        Formula::And(g, h) => is_anf(g) && is_anf(h),
        Formula::Assign(x, _, body) if matches!(&**body, Formula::Atom(_, y) if y == x) => true,
        Formula::Assign(_, _, body) if body.is_bot() => true,
        Formula::Assign(..) | Formula::Know(..) => {
            let (binders, core) = prefix(f);
            let Formula::Know(z, body) = core else {
                return false;
            };
            let vars: VarSet = binders.iter().map(|(y, _)| (*y).clone()).collect();
            vars.len() == binders.len() && &vars == z && is_anf(body)
        }
    }
}

/// Folds `top`/`bot` constants. Keeps assignment normal form.
pub fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::Top | Formula::Atom(..) => f.clone(),
        Formula::Not(g) => match simplify(g) {
            Formula::Not(h) if *h == Formula::Top => Formula::Top,
            g => g.not(),
        },
        Formula::And(g, h) => {
            let (g, h) = (simplify(g), simplify(h));
            if g.is_bot() || h.is_bot() {
                Formula::bot()
            } else if g == Formula::Top {
                h
            } else if h == Formula::Top {
                g
            } else {
                g.and(h)
            }
        }
        Formula::Assign(x, a, g) => match simplify(g) {
            Formula::Top => Formula::Top,
            g => Formula::assign(x.clone(), a.clone(), g),
        },
        Formula::Know(xs, g) => match simplify(g) {
            Formula::Top => Formula::Top,
            g => Formula::Know(xs.clone(), Box::new(g)),
        },
    }
}
