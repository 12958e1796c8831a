//! Concrete syntax output. Sugar is recovered structurally, so that
//! `parse(&f.to_string())` always returns `f`.

use super::{join, Formula};
use std::fmt;

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(p, x) => write!(f, "{p}({x})"),
            Formula::Top => f.write_str("top"),
            Formula::And(g, h) => write!(f, "({g} & {h})"),
            Formula::Assign(x, a, g) => write!(f, "[{x}:={a}] {g}"),
            Formula::Know(vars, g) => write!(f, "K{{{}}} {g}", join(vars)),
            Formula::Not(inner) => match &**inner {
                Formula::Top => f.write_str("bot"),
                Formula::And(g, h) => match (&**g, &**h) {
                    (Formula::Not(g), Formula::Not(h)) => write!(f, "({g} | {h})"),
                    (g, Formula::Not(h)) => write!(f, "({g} -> {h})"),
                    _ => write!(f, "~{inner}"),
                },
                Formula::Assign(x, a, body) => match &**body {
                    Formula::Not(g) => write!(f, "<{x}:={a}> {g}"),
                    _ => write!(f, "~{inner}"),
                },
                Formula::Know(vars, body) => match &**body {
                    Formula::Not(g) => write!(f, "Khat{{{}}} {g}", join(vars)),
                    _ => write!(f, "~{inner}"),
                },
                _ => write!(f, "~{inner}"),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;

    #[test]
    fn prints_primitives_and_sugar() {
        assert_eq!(
            Formula::know(Vec::<VarId>::new(), Formula::top()).to_string(),
            "K{} top"
        );
        assert_eq!(
            Formula::assign("x", "a", Formula::atom("p", "x")).to_string(),
            "[x:=a] p(x)"
        );
        assert_eq!(Formula::bot().to_string(), "bot");
        assert_eq!(Formula::diamond("x", "a", Formula::top()).to_string(), "<x:=a> top");
        assert_eq!(
            Formula::atom("p", "x").or(Formula::atom("q", "x")).to_string(),
            "(p(x) | q(x))"
        );
        assert_eq!(
            Formula::atom("p", "x").implies(Formula::atom("q", "x")).to_string(),
            "(p(x) -> q(x))"
        );
        assert_eq!(Formula::khat(["x", "y"], Formula::top()).to_string(), "Khat{x,y} top");
    }

    #[test]
    fn prints_clarification_iii() {
        let f = Formula::diamond(
            "x",
            "a",
            Formula::know(
                ["x"],
                Formula::diamond(
                    "y",
                    "b",
                    Formula::know(["y"], Formula::assign("z", "c", Formula::atom("p", "z"))),
                ),
            ),
        );
        assert_eq!(f.to_string(), "<x:=a> K{x} <y:=b> K{y} [z:=c] p(z)");
        assert_eq!(parse("<x:=a> K{x} <y:=b> K{y} [z:=c] p(z)").unwrap(), f);
    }
}
