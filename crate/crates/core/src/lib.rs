//! A workbench for epistemic logic with assignment operators on impure
//! simplicial complexes.

pub mod bisim;
pub mod correspondence;
pub mod intensional;
pub mod models;
pub mod normalform;
pub mod semantics;
pub mod syntax;
pub mod validity;

pub use models::{EpistemicModel, KripkeModel, Model, PointedModel, SimplicialModel};
pub use semantics::{eval, holds, valid_on_model, Assignment, EvalError, Evaluator};
pub use syntax::{parse, AgentId, AgentSet, Formula, PredId, VarId, VarSet};
