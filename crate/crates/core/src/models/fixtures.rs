//! Built-in example models.
//!
//! `intro`: two facets `F = {a1, b1, c1}` and `G = {a1, c2, d1}` sharing the
//! a-vertex, with `p` on `c1`. `hex_simplicial` / `hex_kripke`: three
//! triangles around a shared d-vertex and three outer edges, in both
//! presentations.

use super::{KripkeModel, Model, SimplicialModel};

pub const INTRO_JSON: &str = include_str!("../../fixtures/intro.json");
pub const HEX_SIMPLICIAL_JSON: &str = include_str!("../../fixtures/hex_simplicial.json");
pub const HEX_KRIPKE_JSON: &str = include_str!("../../fixtures/hex_kripke.json");

/// Four readings of "a knows that b knows that c is p" on `intro`, in
/// order (i) to (iv): each of b and c is either conditionally or
/// existentially quantified.
pub const CLARIFICATIONS: [&str; 4] = [
    "<x:=a> K{x} [y:=b] K{y} [z:=c] p(z)",
    "<x:=a> K{x} [y:=b] K{y} <z:=c> p(z)",
    "<x:=a> K{x} <y:=b> K{y} [z:=c] p(z)",
    "<x:=a> K{x} <y:=b> K{y} <z:=c> p(z)",
];

fn simplicial(json: &str) -> SimplicialModel {
    match Model::from_json(json) {
        Ok(Model::Simplicial(m)) => m,
        other => panic!("bundled fixture is not a valid simplicial model: {other:?}"),
    }
}

pub fn intro() -> SimplicialModel {
    simplicial(INTRO_JSON)
}

pub fn hex_simplicial() -> SimplicialModel {
    simplicial(HEX_SIMPLICIAL_JSON)
}

pub fn hex_kripke() -> KripkeModel {
    match Model::from_json(HEX_KRIPKE_JSON) {
        Ok(Model::Kripke(m)) => m,
        other => panic!("bundled fixture is not a valid kripke model: {other:?}"),
    }
}
