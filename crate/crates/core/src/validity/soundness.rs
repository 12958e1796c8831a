//! Empirical soundness: schema instances checked on batteries of random
//! proper local epistemic models.

use super::axioms::{AxiomSchema, Instantiator};
use super::generate::{random_local_epistemic_model, GenParams};
use crate::models::{EpistemicModel, KripkeModel, Model};
use crate::semantics::{holds, valid_on_model};
use crate::syntax::{random_formula, Formula};
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

/// Counterexamples kept per schema; failures beyond this are only counted.
const KEEP: usize = 5;

#[derive(Debug, Clone)]
pub struct SoundnessConfig {
    pub instances: usize,
    pub models: usize,
    /// `gen.agents` also fixes the instance universe; battery models use
    /// 1 to `gen.agents` agents.
    pub gen: GenParams,
    pub depth: usize,
}

impl Default for SoundnessConfig {
    fn default() -> Self {
        SoundnessConfig {
            instances: 200,
            models: 50,
            gen: GenParams::default(),
            depth: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaRow {
    pub schema: AxiomSchema,
    pub instances: usize,
    pub models: usize,
    pub failures: usize,
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub schema: AxiomSchema,
    pub seed: u64,
    pub formula: Formula,
    pub model: KripkeModel,
    pub world: String,
}

impl Counterexample {
    /// Writes `<stem>.json` (the model) and `<stem>.txt` (formula and
    /// world) into `dir`.
    pub fn dump(&self, dir: &Path) -> io::Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir)?;
        let stem: String = format!("{}-{}", self.schema.name(), self.seed)
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
            .collect();
        let model_path = dir.join(format!("{stem}.json"));
        let formula_path = dir.join(format!("{stem}.txt"));
        fs::write(&model_path, Model::Kripke(self.model.clone()).to_json())?;
        fs::write(
            &formula_path,
            format!(
                "schema: {}\nworld: {}\nformula: {}\n",
                self.schema, self.world, self.formula
            ),
        )?;
        Ok((model_path, formula_path))
    }

    /// Re-checks the failure on a JSON round trip of the model.
    pub fn reverify(&self) -> bool {
        let Ok(Model::Kripke(m)) = Model::from_json(&Model::Kripke(self.model.clone()).to_json()) else {
            return false;
        };
        m.point_index(&self.world).is_some_and(|w| !holds(&m, w, &self.formula))
    }
}

#[derive(Debug, Clone)]
pub struct SoundnessReport {
    pub rows: Vec<SchemaRow>,
    pub counterexamples: Vec<Counterexample>,
}

impl SoundnessReport {
    pub fn total_failures(&self) -> usize {
        self.rows.iter().map(|r| r.failures).sum()
    }
}

impl fmt::Display for SoundnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "schema,instances,models,failures")?;
        for r in &self.rows {
            writeln!(f, "{},{},{},{}", r.schema, r.instances, r.models, r.failures)?;
        }
        Ok(())
    }
}

/// The model battery used by [`soundness_suite`].
pub fn battery(cfg: &SoundnessConfig) -> Vec<KripkeModel> {
    (0..cfg.models)
        .map(|i| {
            let gp = GenParams {
                agents: i % cfg.gen.agents + 1,
                seed: cfg.gen.seed.wrapping_add(i as u64),
                ..cfg.gen
            };
            random_local_epistemic_model(&gp)
        })
        .collect()
}

fn instance_seed(base: u64, schema: AxiomSchema, i: usize) -> u64 {
    base.wrapping_mul(0x100_0000_01b3) ^ ((schema as u64) << 40) ^ i as u64
}

pub fn soundness_suite(schemas: &[AxiomSchema], cfg: &SoundnessConfig) -> SoundnessReport {
    let models = battery(cfg);
    let inst = Instantiator::new(&cfg.gen.agent_set(), &cfg.gen.pred_set(), cfg.depth);
    let mut rows = Vec::new();
    let mut counterexamples = Vec::new();
    for &schema in schemas {
        let mut failures = 0;
        let mut kept = 0;
        for i in 0..cfg.instances {
            let seed = instance_seed(cfg.gen.seed, schema, i);
            let formula = inst.instance(schema, seed);
            for m in &models {
                let at = valid_on_model(m, &formula).expect("instances are sentences");
                if let Some(w) = at {
                    failures += 1;
                    let cx = Counterexample {
                        schema,
                        seed,
                        formula: formula.clone(),
                        model: m.clone(),
                        world: m.point_name(w).to_owned(),
                    };
                    if kept < KEEP && cx.reverify() {
                        kept += 1;
                        counterexamples.push(cx);
                    }
                }
            }
        }
        rows.push(SchemaRow {
            schema,
            instances: cfg.instances,
            models: models.len(),
            failures,
        });
    }
    SoundnessReport { rows, counterexamples }
}

/// Inference rules, checked as validity preservation on single models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Mp,
    NecK,
    NecAssign,
}

impl Rule {
    pub const ALL: [Rule; 3] = [Rule::Mp, Rule::NecK, Rule::NecAssign];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Mp => "MP",
            Rule::NecK => "NEC^K",
            Rule::NecAssign => "NEC^[:=]",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleRow {
    pub rule: Rule,
    /// Premise sets valid on their model, i.e. non-vacuous checks.
    pub premises: usize,
    pub failures: usize,
}

/// For each battery model and candidate premise valid on it, checks that
/// the rule's conclusion is valid on the same model. Premises alternate
/// between schema instances and random sentences.
pub fn rule_preservation(cfg: &SoundnessConfig) -> Vec<RuleRow> {
    let models = battery(cfg);
    let (universe, preds) = (cfg.gen.agent_set(), cfg.gen.pred_set());
    let inst = Instantiator::new(&universe, &preds, cfg.depth);
    let schemas = AxiomSchema::all();
    let candidate = |i: usize| -> Formula {
        let seed = cfg.gen.seed.wrapping_add(i as u64);
        if i.is_multiple_of(2) {
            inst.instance(schemas[(i / 2) % schemas.len()], seed)
        } else {
            random_formula(&universe, &preds, cfg.depth, seed)
        }
    };
    let valid = |m: &KripkeModel, f: &Formula| valid_on_model(m, f).expect("sentences evaluate").is_none();
    let mut rows: Vec<RuleRow> = Rule::ALL
        .iter()
        .map(|&rule| RuleRow {
            rule,
            premises: 0,
            failures: 0,
        })
        .collect();
    for m in &models {
        for i in 0..cfg.instances {
            let alpha = candidate(i);
            if !valid(m, &alpha) {
                continue;
            }
            let beta = candidate(i + 1);
            if valid(m, &alpha.clone().implies(beta.clone())) {
                rows[0].premises += 1;
                rows[0].failures += usize::from(!valid(m, &beta));
            }
            for a in &universe {
                rows[1].premises += 1;
                let nec = Formula::assign("x", a.clone(), Formula::know(["x"], alpha.clone()));
                rows[1].failures +=
                    usize::from(!valid(m, &nec) || !valid(m, &Formula::know(Vec::<&str>::new(), alpha.clone())));
                rows[2].premises += 1;
                rows[2].failures += usize::from(!valid(m, &Formula::assign("x", a.clone(), alpha.clone())));
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SoundnessConfig {
        SoundnessConfig {
            instances: 20,
            models: 10,
            ..SoundnessConfig::default()
        }
    }

    #[test]
    fn valid_schemas_have_no_failures() {
        let report = soundness_suite(&AxiomSchema::all(), &small());
        assert_eq!(report.total_failures(), 0, "{report}");
        assert!(report
            .to_string()
            .starts_with("schema,instances,models,failures\nTAUT,20,10,0\n"));
    }

    #[test]
    fn mutant_is_caught_and_dumped() {
        let cfg = SoundnessConfig {
            instances: 100,
            ..small()
        };
        let report = soundness_suite(&[AxiomSchema::EniUnguarded], &cfg);
        assert!(report.total_failures() > 0);
        let cx = &report.counterexamples[0];
        assert!(cx.reverify());
        let dir = std::env::temp_dir().join(format!("simpla-cx-{}", std::process::id()));
        let (m, f) = cx.dump(&dir).unwrap();
        assert!(Model::from_json(&fs::read_to_string(m).unwrap()).is_ok());
        assert!(fs::read_to_string(f).unwrap().contains("ENI-unguarded"));
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn rules_preserve_validity() {
        let rows = rule_preservation(&small());
        for row in &rows {
            assert!(row.premises > 0, "{:?}", row.rule);
            assert_eq!(row.failures, 0, "{:?}", row.rule);
        }
    }

    #[test]
    fn deterministic() {
        let a = soundness_suite(&[AxiomSchema::EniUnguarded, AxiomSchema::Kni], &small());
        let b = soundness_suite(&[AxiomSchema::EniUnguarded, AxiomSchema::Kni], &small());
        assert_eq!(a.rows, b.rows);
    }
}
