//! Randomized properties spanning several modules.

use proptest::prelude::*;
use simpla::bisim::{distinguish, greatest_bisim};
use simpla::correspondence::lem;
use simpla::intensional::{characterizer, group_extension, GroupFormula};
use simpla::models::properize;
use simpla::normalform::{anf, is_anf};
use simpla::syntax::{random_formula, random_open_formula};
use simpla::validity::{random_improper_local_epistemic_model, random_simplicial_model, GenParams};
use simpla::{
    eval, holds, parse, AgentId, AgentSet, Assignment, EpistemicModel, Evaluator, Formula, Model, PredId, VarId, VarSet,
};
use std::collections::BTreeSet;

fn abc() -> AgentSet {
    ["a", "b", "c"].into_iter().map(AgentId::from).collect()
}

fn pq() -> BTreeSet<PredId> {
    ["p", "q"].into_iter().map(PredId::from).collect()
}

fn xyz() -> [VarId; 3] {
    ["x", "y", "z"].map(VarId::from)
}

fn naive_free(f: &Formula) -> VarSet {
    match f {
        Formula::Atom(_, x) => VarSet::from([x.clone()]),
        Formula::Top => VarSet::new(),
        Formula::Not(a) => naive_free(a),
        Formula::And(a, b) => naive_free(a).union(&naive_free(b)).cloned().collect(),
        Formula::Assign(x, _, body) => {
            let mut s = naive_free(body);
            s.remove(x);
            s
        }
        Formula::Know(xs, body) => xs.union(&naive_free(body)).cloned().collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>(), depth in 0usize..=4) {
        let alpha = random_formula(&abc(), &pq(), depth, seed);
        prop_assert_eq!(parse(&alpha.to_string()).unwrap(), alpha);
        let phi = random_open_formula(&abc(), &pq(), &xyz(), depth, seed);
        prop_assert_eq!(parse(&phi.to_string()).unwrap(), phi);
    }

    #[test]
    fn free_variables_match_the_recursive_definition(seed in any::<u64>(), depth in 0usize..=4) {
        let phi = random_open_formula(&abc(), &pq(), &xyz(), depth, seed);
        prop_assert_eq!(phi.free_vars(), naive_free(&phi));
        prop_assert_eq!(phi.is_sentence(), naive_free(&phi).is_empty());
    }

    #[test]
    fn substituting_a_non_free_variable_is_a_no_op(seed in any::<u64>(), depth in 0usize..=3) {
        let phi = random_open_formula(&abc(), &pq(), &xyz()[..2], depth, seed);
        let w = VarId::from("w");
        prop_assert_eq!(phi.substitute(&VarId::from("x"), &w).unwrap(), phi);
    }

    #[test]
    fn substitution_lemma(seed in any::<u64>(), model_seed in 0u64..500) {
        let [x, y, _] = xyz();
        let phi = random_open_formula(&abc(), &pq(), &[x.clone(), y.clone()], 3, seed);
        prop_assume!(phi.substitution_admissible(&y, &x));
        let moved = phi.substitute(&y, &x).unwrap();
        let gp = GenParams { preds: 2, ..GenParams::default() }.with_seed(model_seed);
        let c = random_simplicial_model(&gp);
        for f in 0..c.len() {
            for a in c.live(f).clone() {
                for b in c.live(f).clone() {
                    let sigma: Assignment = [(x.clone(), a.clone()), (y.clone(), b.clone())].into();
                    let shifted: Assignment = [(x.clone(), b.clone()), (y.clone(), b.clone())].into();
                    prop_assert_eq!(eval(&c, f, &sigma, &moved).unwrap(), eval(&c, f, &shifted, &phi).unwrap());
                }
            }
        }
    }

    #[test]
    fn normal_form_is_equivalent(seed in any::<u64>(), model_seed in 0u64..1000) {
        let alpha = random_formula(&abc(), &pq(), 3, seed);
        let gamma = anf(&alpha).unwrap();
        prop_assert!(is_anf(&gamma), "{}", gamma);
        let c = random_simplicial_model(&GenParams { preds: 2, ..GenParams::default() }.with_seed(model_seed));
        prop_assert_eq!(Evaluator::new(&c).truths(&alpha).unwrap(), Evaluator::new(&c).truths(&gamma).unwrap());
    }

    #[test]
    fn model_documents_round_trip(seed in any::<u64>()) {
        let c = Model::Simplicial(random_simplicial_model(&GenParams::default().with_seed(seed)));
        let back = Model::from_json(&c.to_json()).unwrap();
        prop_assert_eq!(back.to_doc(), c.to_doc());
        let m = Model::Kripke(random_improper_local_epistemic_model(&GenParams::default().with_seed(seed)));
        prop_assert_eq!(Model::from_json(&m.to_json()).unwrap().to_doc(), m.to_doc());
    }
}

#[test]
fn bisimilar_pairs_agree_on_sentences() {
    let gp = GenParams {
        preds: 2,
        ..GenParams::default()
    };
    let mut pairs = 0;
    for i in 0..200u64 {
        let m = random_improper_local_epistemic_model(&gp.with_seed(i));
        let (pr, cell) = properize(&m).unwrap();
        let sentences: Vec<Formula> = (0..50)
            .map(|j| random_formula(m.agents(), &gp.pred_set(), 3, i * 50 + j))
            .collect();
        let (mut em, mut ep) = (Evaluator::new(&m), Evaluator::new(&pr));
        let w = (i as usize) % m.len();
        for alpha in &sentences {
            assert_eq!(
                em.sentence(w, alpha).unwrap(),
                ep.sentence(cell[w], alpha).unwrap(),
                "{alpha}"
            );
        }
        pairs += 1;
    }
    assert_eq!(pairs, 200);
}

#[test]
fn logical_equivalence_coincides_with_bisimilarity() {
    let gp = GenParams {
        agents: 2,
        max_vertices: 6,
        max_facets: 4,
        preds: 1,
        seed: 0,
    };
    for i in 0..100u64 {
        let c1 = random_simplicial_model(&gp.with_seed(10_000 + i));
        let c2 = random_simplicial_model(&gp.with_seed(20_000 + i / 2));
        let rel = greatest_bisim(&c1, &c2);
        for s in 0..c1.len() {
            for t in 0..c2.len() {
                match distinguish(&c1, s, &c2, t).unwrap() {
                    Some(d) => {
                        assert!(!rel.contains(s, t));
                        assert!(holds(&c1, s, &d) && !holds(&c2, t, &d), "{d}");
                    }
                    None => {
                        assert!(rel.contains(s, t));
                        for j in 0..20 {
                            let alpha = random_formula(c1.agents(), &gp.pred_set(), 3, i * 20 + j);
                            assert_eq!(holds(&c1, s, &alpha), holds(&c2, t, &alpha), "{alpha}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn lem_worlds_are_bisimilar_to_their_facets() {
    for i in 0..50u64 {
        let c = random_simplicial_model(&GenParams::default().with_seed(i));
        let m = lem(&c);
        let rel = greatest_bisim(&m, &lem(&c));
        for f in 0..c.len() {
            let w = m.point_index(c.point_name(f)).unwrap();
            assert!(rel.contains(w, w));
        }
    }
}

#[test]
fn exactly_one_characterizer_holds() {
    let x = VarId::from("x");
    let universe = abc();
    let subsets: Vec<AgentSet> = (0..8u32)
        .map(|mask| {
            universe
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, a)| a.clone())
                .collect()
        })
        .collect();
    for i in 0..40u64 {
        let c = random_simplicial_model(
            &GenParams {
                preds: 2,
                ..GenParams::default()
            }
            .with_seed(i),
        );
        let body = random_open_formula(&universe, &pq(), std::slice::from_ref(&x), 2, 300 + i);
        let phi = GroupFormula::with_var(body, x.clone()).unwrap();
        for f in 0..c.len() {
            let holding: Vec<&AgentSet> = subsets
                .iter()
                .filter(|a| holds(&c, f, &characterizer(&phi, a, &universe)))
                .collect();
            assert_eq!(holding, vec![&group_extension(&c, &phi, f)], "{phi}");
        }
    }
}
