//! Axiom instances, random models, empirical soundness and bounded
//! satisfiability.

pub mod axioms;
pub mod enumerate;
pub mod generate;
pub mod sat;
pub mod soundness;

pub use axioms::{instantiate, AxiomSchema, Instantiator, UnknownSchema};
pub use generate::{
    random_improper_local_epistemic_model, random_local_epistemic_model, random_simplicial_model, GenParams,
};
pub use sat::{default_bound, sat_bounded, SatError, SatResult};
pub use soundness::{
    rule_preservation, soundness_suite, Counterexample, Rule, RuleRow, SchemaRow, SoundnessConfig, SoundnessReport,
};
