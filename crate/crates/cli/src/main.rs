//! `simpla`: command-line front end for the workbench.
//!
//! Exit codes: 0 for success or a true verdict, 1 for a false or negative
//! verdict, 2 for usage and input errors.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use simpla::bisim::{greatest_bisim, BisimError};
use simpla::correspondence::{isomorphic, lem, sc};
use simpla::intensional::{
    check_pos_introspection, eval_k_phi_direct, expand_k_phi, search_neg_introspection_counterexample, GroupFormula,
};
use simpla::models::{check_local_epistemic, properize};
use simpla::normalform::{anf, simplify};
use simpla::semantics::{eval, Assignment};
use simpla::syntax::FormulaGen;
use simpla::validity::sat::{default_bound, sat_bounded, SatResult};
use simpla::validity::{random_simplicial_model, soundness_suite, AxiomSchema, GenParams, SoundnessConfig};
use simpla::{AgentId, EpistemicModel, Evaluator, Formula, Model, PointedModel, VarId};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const SYNOPSIS: &str = "\
formula grammar:
  f ::= top | bot | PRED(VAR) | ~f | (f & f) | (f | f) | (f -> f)
      | [VAR:=AGENT] f | <VAR:=AGENT> f | K{VAR,...} f | Khat{VAR,...} f
  binary connectives must be parenthesized; knowledge bodies must be sentences

model files (JSON, kind auto-detected):
  {\"kind\":\"simplicial\",\"agents\":[..],\"vertices\":[{\"id\":..,\"color\":..}],
   \"facets\":[[vertex ids] | {\"id\":..,\"vertices\":[..]}],\"labeling\":{pred:[vertex ids]}}
  {\"kind\":\"kripke\",\"agents\":[..],\"worlds\":[{\"id\":..,\"domain\":[..],\"interp\":{pred:[agents]}}],
   \"relations\":{agent:[[world, world]]}}";

#[derive(Parser)]
#[command(name = "simpla", version, about = "Epistemic logic on impure simplicial models", after_help = SYNOPSIS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FormulaArgs {
    /// Formula text.
    #[arg(long, conflicts_with = "formula_file")]
    formula: Option<String>,
    /// File holding the formula text.
    #[arg(long)]
    formula_file: Option<PathBuf>,
}

#[derive(Args)]
struct SeedArg {
    #[arg(long, env = "SIMPLA_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Kripke,
    Simplicial,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at a point, or at every point if none is given.
    Check {
        model: PathBuf,
        #[arg(long)]
        point: Option<String>,
        #[command(flatten)]
        formula: FormulaArgs,
        /// Bindings for free variables, e.g. `x=a,y=b`.
        #[arg(long)]
        assign: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Translate between simplicial and Kripke models.
    Convert {
        model: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
    },
    /// Quotient a local epistemic model into a proper one.
    Properize { model: PathBuf },
    /// Search for an isomorphism between two models of the same kind.
    Iso { left: PathBuf, right: PathBuf },
    /// Decide bisimilarity of two pointed models.
    Bisim {
        left: PathBuf,
        left_point: String,
        right: PathBuf,
        right_point: String,
        #[arg(long)]
        json: bool,
    },
    /// Print a sentence true at the left point and false at the right one.
    Distinguish {
        left: PathBuf,
        left_point: String,
        right: PathBuf,
        right_point: String,
        #[arg(long)]
        json: bool,
    },
    /// Assignment normal form of a sentence.
    Nf {
        #[command(flatten)]
        formula: FormulaArgs,
        /// Fold constants in the result.
        #[arg(long)]
        simplify: bool,
        /// Compare against the input on this many random models.
        #[arg(long, default_value_t = 0)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        json: bool,
    },
    /// Knowledge of an intensional group: evaluate or expand `K_phi alpha`.
    Kphi {
        model: PathBuf,
        /// Group formula with one free variable.
        #[arg(long)]
        phi: String,
        /// The free variable of the group formula.
        #[arg(long, default_value = "x")]
        var: String,
        #[arg(long)]
        point: Option<String>,
        #[command(flatten)]
        formula: FormulaArgs,
        /// Print the finite expansion over the model's agents instead.
        #[arg(long)]
        expand: bool,
        #[arg(long)]
        json: bool,
    },
    /// Positive introspection on random models and a negative-introspection
    /// counterexample search.
    Introspect {
        #[arg(long)]
        phi: String,
        #[arg(long, default_value = "x")]
        var: String,
        /// Number of random models.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Facet bound for the counterexample search.
        #[arg(long, default_value_t = 4)]
        max_facets: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        json: bool,
    },
    /// Empirical soundness of axiom schemas.
    Axioms {
        /// Schema names; all valid schemas if omitted.
        #[arg(long = "schema")]
        schemas: Vec<AxiomSchema>,
        /// Instances per schema.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Random proper local epistemic models.
        #[arg(long, default_value_t = 50)]
        models: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// Write counterexamples into this directory.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Bounded satisfiability search.
    Sat {
        #[command(flatten)]
        formula: FormulaArgs,
        #[arg(long)]
        max_facets: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Load a model and report on its well-formedness.
    Validate {
        model: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            eprintln!("\n{SYNOPSIS}");
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load_model(path: &Path) -> Result<Model> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Model::from_json(&text).with_context(|| format!("in {}", path.display()))
}

fn parse_formula(text: &str) -> Result<Formula> {
    simpla::parse(text).map_err(|e| anyhow!("{e}\n\n{SYNOPSIS}"))
}

impl FormulaArgs {
    fn load(&self) -> Result<Formula> {
        match (&self.formula, &self.formula_file) {
            (Some(text), _) => parse_formula(text),
            (None, Some(path)) => {
                let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
                parse_formula(text.trim())
            }
            (None, None) => bail!("one of --formula or --formula-file is required\n\n{SYNOPSIS}"),
        }
    }

    fn sentence(&self) -> Result<Formula> {
        let f = self.load()?;
        if !f.is_sentence() {
            bail!("`{f}` has free variables; a sentence is required");
        }
        Ok(f)
    }
}

fn parse_assignment(text: &str) -> Result<Assignment> {
    let mut sigma = Assignment::new();
    for binding in text.split(',').map(str::trim).filter(|b| !b.is_empty()) {
        let (x, a) = binding
            .split_once('=')
            .ok_or_else(|| anyhow!("binding `{binding}` is not of the form x=a"))?;
        let (x, a) = (x.trim(), a.trim());
        if !simpla::syntax::is_valid_token(x) || !simpla::syntax::is_valid_token(a) {
            bail!("binding `{binding}` is not of the form x=a");
        }
        if sigma.insert(VarId::from(x), AgentId::from(a)).is_some() {
            bail!("variable `{x}` is bound twice");
        }
    }
    Ok(sigma)
}

fn point_index(model: &dyn EpistemicModel, name: &str) -> Result<usize> {
    model
        .point_index(name)
        .ok_or_else(|| anyhow!("no point named `{name}`"))
}

fn pointed<'m>(model: &'m Model, name: &str) -> Result<PointedModel<'m>> {
    PointedModel::new(model, name).ok_or_else(|| anyhow!("no point named `{name}`"))
}

fn group_formula(phi: &str, var: &str) -> Result<GroupFormula> {
    let body = parse_formula(phi)?;
    Ok(GroupFormula::with_var(body, VarId::from(var))?)
}

fn verdict(v: bool) -> &'static str {
    if v {
        "true"
    } else {
        "false"
    }
}

fn print_json(value: serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(&value).expect("json values serialize")
    );
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Check {
            model,
            point,
            formula,
            assign,
            json,
        } => {
            let model = load_model(&model)?;
            let m = model.as_dyn();
            let f = formula.load()?;
            let mut sigma = match &assign {
                Some(text) => parse_assignment(text)?,
                None => Assignment::new(),
            };
            if f.is_sentence() {
                sigma.clear();
            } else if point.is_none() {
                bail!("`{f}` has free variables; pick a point with --point and bind them with --assign");
            }
            let points: Vec<usize> = match &point {
                Some(name) => vec![point_index(m, name)?],
                None => (0..m.len()).collect(),
            };
            let mut truths = Vec::new();
            for &p in &points {
                truths.push(eval(m, p, &sigma, &f)?);
            }
            let all = truths.iter().all(|&t| t);
            if json {
                let per_point: serde_json::Map<String, serde_json::Value> = points
                    .iter()
                    .zip(&truths)
                    .map(|(&p, &t)| (m.point_name(p).to_owned(), json!(t)))
                    .collect();
                print_json(json!({"formula": f.to_string(), "result": all, "points": per_point}));
            } else {
                println!("{}", verdict(all));
                if point.is_none() {
                    for (&p, _) in points.iter().zip(&truths).filter(|(_, &t)| !t) {
                        eprintln!("false at {}", m.point_name(p));
                    }
                }
            }
            Ok(all)
        }
        Command::Convert { model, to } => {
            let converted = match (load_model(&model)?, to) {
                (Model::Simplicial(c), Target::Kripke) => Model::Kripke(lem(&c)),
                (Model::Kripke(m), Target::Simplicial) => Model::Simplicial(sc(&m).context("cannot convert")?.0),
                (m, _) => bail!("model is already {}", m.kind()),
            };
            println!("{}", converted.to_json());
            Ok(true)
        }
        Command::Properize { model } => match load_model(&model)? {
            Model::Kripke(m) => {
                let (pr, _) = properize(&m).context("cannot properize")?;
                println!("{}", Model::Kripke(pr).to_json());
                Ok(true)
            }
            Model::Simplicial(_) => bail!("properize takes a kripke model"),
        },
        Command::Iso { left, right } => {
            let (a, b) = (load_model(&left)?, load_model(&right)?);
            if a.kind() != b.kind() {
                bail!("cannot compare a {} model with a {} model", a.kind(), b.kind());
            }
            match isomorphic(&a, &b) {
                Some(w) => {
                    println!("{}", serde_json::to_string_pretty(&w)?);
                    Ok(true)
                }
                None => {
                    println!("false");
                    Ok(false)
                }
            }
        }
        Command::Bisim {
            left,
            left_point,
            right,
            right_point,
            json,
        } => {
            let (a, b) = (load_model(&left)?, load_model(&right)?);
            let (p, q) = (pointed(&a, &left_point)?, pointed(&b, &right_point)?);
            if p.kind() != q.kind() {
                return Err(BisimError::KindMismatch(p.kind().to_string(), q.kind().to_string()).into());
            }
            let rel = greatest_bisim(p.model(), q.model());
            let related = rel.contains(p.point(), q.point());
            if json {
                print_json(json!({
                    "bisimilar": related,
                    "removal_round": rel.removal_round(p.point(), q.point()),
                }));
            } else {
                println!("{}", verdict(related));
            }
            Ok(related)
        }
        Command::Distinguish {
            left,
            left_point,
            right,
            right_point,
            json,
        } => {
            let (a, b) = (load_model(&left)?, load_model(&right)?);
            let (p, q) = (pointed(&a, &left_point)?, pointed(&b, &right_point)?);
            let d = simpla::bisim::distinguishing_sentence(p, q)?;
            if json {
                print_json(json!({"distinguisher": d.as_ref().map(ToString::to_string)}));
            } else {
                println!("{}", d.as_ref().map_or_else(|| "none".to_owned(), ToString::to_string));
            }
            Ok(d.is_some())
        }
        Command::Nf {
            formula,
            simplify: fold,
            trials,
            seed,
            json,
        } => {
            let alpha = formula.sentence()?;
            let mut gamma = anf(&alpha)?;
            if fold {
                gamma = simplify(&gamma);
            }
            let mut disagreements = Vec::new();
            if trials > 0 {
                let agents = alpha.agents();
                let gp = GenParams {
                    agents: agents.len().clamp(1, 4),
                    preds: alpha.predicates().len().min(3),
                    ..GenParams::default()
                };
                if agents.iter().any(|a| !gp.agent_set().contains(a))
                    || alpha.predicates().iter().any(|p| !gp.pred_set().contains(p))
                {
                    bail!("--trials needs agents among a..d and predicates among p, q, r");
                }
                for i in 0..trials {
                    let c = random_simplicial_model(&gp.with_seed(seed.seed.wrapping_add(i as u64)));
                    let (mut ea, mut eg) = (Evaluator::new(&c), Evaluator::new(&c));
                    if ea.truths(&alpha)? != eg.truths(&gamma)? {
                        disagreements.push(i);
                    }
                }
            }
            if json {
                print_json(json!({
                    "input": alpha.to_string(),
                    "normal_form": gamma.to_string(),
                    "trials": trials,
                    "disagreements": disagreements,
                }));
            } else {
                println!("{gamma}");
                if trials > 0 {
                    println!(
                        "equivalence: {} of {trials} random models agree",
                        trials - disagreements.len()
                    );
                }
            }
            Ok(disagreements.is_empty())
        }
        Command::Kphi {
            model,
            phi,
            var,
            point,
            formula,
            expand,
            json,
        } => {
            let model = load_model(&model)?;
            let m = model.as_dyn();
            let phi = group_formula(&phi, &var)?;
            let alpha = formula.sentence()?;
            if expand {
                let k = expand_k_phi(&phi, &alpha, m.agents())?;
                if json {
                    print_json(json!({"phi": phi.to_string(), "alpha": alpha.to_string(), "expansion": k.to_string()}));
                } else {
                    println!("{k}");
                }
                return Ok(true);
            }
            let points: Vec<usize> = match &point {
                Some(name) => vec![point_index(m, name)?],
                None => (0..m.len()).collect(),
            };
            let mut truths = Vec::new();
            for &p in &points {
                truths.push(eval_k_phi_direct(m, &phi, &alpha, p)?);
            }
            let all = truths.iter().all(|&t| t);
            if json {
                let per_point: serde_json::Map<String, serde_json::Value> = points
                    .iter()
                    .zip(&truths)
                    .map(|(&p, &t)| (m.point_name(p).to_owned(), json!(t)))
                    .collect();
                print_json(json!({"result": all, "points": per_point}));
            } else {
                println!("{}", verdict(all));
            }
            Ok(all)
        }
        Command::Introspect {
            phi,
            var,
            trials,
            max_facets,
            seed,
            json,
        } => {
            let phi = group_formula(&phi, &var)?;
            let gp = GenParams {
                max_facets: 5,
                ..GenParams::default()
            };
            let models: Vec<_> = (0..trials)
                .map(|i| random_simplicial_model(&gp.with_seed(seed.seed.wrapping_add(i as u64))))
                .collect();
            let dyn_models: Vec<&dyn EpistemicModel> = models.iter().map(|m| m as &dyn EpistemicModel).collect();
            let (agents, preds) = (gp.agent_set(), gp.pred_set());
            let mut rng = ChaCha8Rng::seed_from_u64(seed.seed);
            let gen = FormulaGen::new(&agents, &preds);
            let alphas: Vec<Formula> = (0..5).map(|_| gen.sentence(&mut rng, 2)).collect();
            let report = check_pos_introspection(&phi, &alphas, &dyn_models)?;
            let witness = search_neg_introspection_counterexample(&phi, max_facets);
            if json {
                print_json(json!({
                    "phi": phi.to_string(),
                    "in_grammar": report.in_grammar,
                    "positive_checks": report.checks,
                    "positive_failures": report.failures.iter().map(|f| json!({
                        "model": f.model, "point": f.point, "alpha": f.alpha.to_string(),
                    })).collect::<Vec<_>>(),
                    "negative_witness": witness.as_ref().map(|w| json!({
                        "model": serde_json::to_value(w.model.to_doc()).expect("documents serialize"),
                        "point": w.model.point_name(w.point),
                        "alpha": w.alpha.to_string(),
                        "instance": w.instance(&phi).to_string(),
                    })),
                }));
            } else {
                println!("positive introspection: {report}");
                match &witness {
                    Some(w) => println!(
                        "negative introspection fails for alpha `{}` at {} of a {}-facet model",
                        w.alpha,
                        w.model.point_name(w.point),
                        w.model.len()
                    ),
                    None => println!("negative introspection: no counterexample up to {max_facets} facets"),
                }
            }
            Ok(report.passed())
        }
        Command::Axioms {
            schemas,
            trials,
            models,
            seed,
            dump,
            json,
        } => {
            let schemas = if schemas.is_empty() {
                AxiomSchema::all()
            } else {
                schemas
            };
            let cfg = SoundnessConfig {
                instances: trials,
                models,
                gen: GenParams::default().with_seed(seed.seed),
                ..SoundnessConfig::default()
            };
            let report = soundness_suite(&schemas, &cfg);
            if let Some(dir) = &dump {
                for c in &report.counterexamples {
                    c.dump(dir)
                        .with_context(|| format!("cannot write into {}", dir.display()))?;
                }
            }
            if json {
                print_json(json!({
                    "rows": report.rows.iter().map(|r| json!({
                        "schema": r.schema.name(), "instances": r.instances,
                        "models": r.models, "failures": r.failures,
                    })).collect::<Vec<_>>(),
                    "counterexamples": report.counterexamples.iter().map(|c| json!({
                        "schema": c.schema.name(), "seed": c.seed,
                        "formula": c.formula.to_string(), "world": c.world,
                    })).collect::<Vec<_>>(),
                }));
            } else {
                print!("{report}");
            }
            Ok(report.total_failures() == 0)
        }
        Command::Sat {
            formula,
            max_facets,
            json,
        } => {
            let alpha = formula.sentence()?;
            let bound = max_facets.unwrap_or_else(|| default_bound(&alpha));
            let result = sat_bounded(&alpha, bound)?;
            match &result {
                SatResult::Sat { model, facet } => {
                    if json {
                        print_json(json!({
                            "result": "sat",
                            "facet": model.point_name(*facet),
                            "model": serde_json::to_value(model.to_doc())?,
                        }));
                    } else {
                        println!("sat at {}", model.point_name(*facet));
                        println!("{}", Model::Simplicial(model.clone()).to_json());
                    }
                }
                SatResult::UnsatUpTo(b) => {
                    if json {
                        print_json(json!({"result": "unsat", "max_facets": b}));
                    } else {
                        println!("unsat up to {b} facets");
                    }
                }
            }
            Ok(result.is_sat())
        }
        Command::Validate { model, json } => {
            let model = load_model(&model)?;
            match &model {
                Model::Simplicial(c) => {
                    if json {
                        print_json(json!({
                            "kind": "simplicial",
                            "vertices": c.vertices().len(),
                            "facets": c.len(),
                            "impure": c.is_impure(),
                        }));
                    } else {
                        let purity = if c.is_impure() { "impure" } else { "pure" };
                        println!(
                            "valid {purity} simplicial model: {} vertices, {} facets",
                            c.vertices().len(),
                            c.len()
                        );
                    }
                    Ok(true)
                }
                Model::Kripke(m) => {
                    let report = check_local_epistemic(m);
                    if json {
                        let rows: serde_json::Map<String, serde_json::Value> = report
                            .rows()
                            .iter()
                            .map(|(name, row)| {
                                let v = match row {
                                    Ok(()) => json!(null),
                                    Err(v) => json!(v.to_string()),
                                };
                                ((*name).to_owned(), v)
                            })
                            .collect();
                        print_json(json!({
                            "kind": "kripke",
                            "worlds": m.len(),
                            "local_epistemic": report.is_local_epistemic(),
                            "proper": report.is_proper(),
                            "violations": rows,
                        }));
                    } else {
                        println!("valid kripke model: {} worlds", m.len());
                        print!("{report}");
                    }
                    Ok(report.is_local_epistemic())
                }
            }
        }
    }
}
