mod common;

use std::collections::HashMap;

use ahp_core::{evaluate, parse_model, AnalysisResult, Children, DecisionModel, Node};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODEL: &str = include_str!("fixtures/chatbot_quality.yaml");
const TOL: f64 = 1e-9;

fn check_conservation(result: &AnalysisResult) -> Result<(), String> {
    let total: f64 = result.alternative_totals.values().sum();
    if (total - 1.0).abs() > TOL {
        return Err(format!("totals sum to {total}"));
    }
    for parent in &result.rows {
        let children: Vec<_> = result
            .rows
            .iter()
            .filter(|r| {
                r.path.depth() == parent.path.depth() + 1 && r.path.segments().starts_with(parent.path.segments())
            })
            .collect();
        if children.is_empty() {
            let leaf_sum: f64 = parent.per_alternative_weight.values().sum();
            if (leaf_sum - parent.global_weight).abs() > TOL {
                return Err(format!("{}: alternatives sum to {leaf_sum}", parent.path));
            }
            continue;
        }
        let sum: f64 = children.iter().map(|c| c.global_weight).sum();
        if (sum - parent.global_weight).abs() > TOL {
            return Err(format!(
                "{}: children sum to {sum}, parent {}",
                parent.path, parent.global_weight
            ));
        }
        for (alt, w) in &parent.per_alternative_weight {
            let sum: f64 = children.iter().map(|c| c.per_alternative_weight[alt]).sum();
            if (sum - w).abs() > TOL {
                return Err(format!("{}: {alt} does not add up", parent.path));
            }
        }
    }
    Ok(())
}

fn shuffle_siblings(node: &mut Node, rng: &mut ChaCha8Rng) {
    node.judgments.shuffle(rng);
    if let Children::Criteria(children) = &mut node.children {
        children.shuffle(rng);
        for child in children {
            shuffle_siblings(child, rng);
        }
    }
}

fn by_path(result: &AnalysisResult) -> HashMap<String, f64> {
    result
        .rows
        .iter()
        .map(|r| (r.path.to_string(), r.global_weight))
        .collect()
}

fn check_permutation(model: &DecisionModel, seed: u64) -> Result<(), String> {
    let mut shuffled = model.clone();
    shuffle_siblings(&mut shuffled.goal, &mut ChaCha8Rng::seed_from_u64(seed));
    let base = evaluate(model).unwrap();
    let moved = evaluate(&shuffled).unwrap();
    let (a, b) = (by_path(&base), by_path(&moved));
    for (path, w) in &a {
        if (w - b[path]).abs() > TOL {
            return Err(format!("{path}: {w} vs {}", b[path]));
        }
    }
    for (alt, w) in &base.alternative_totals {
        if (w - moved.alternative_totals[alt]).abs() > TOL {
            return Err(format!("total {alt} moved"));
        }
    }
    Ok(())
}

#[test]
fn chatbot_model_conserves_weight() {
    let result = evaluate(&parse_model(MODEL).unwrap()).unwrap();
    check_conservation(&result).unwrap();
}

#[test]
fn chatbot_model_is_permutation_equivariant() {
    let model = parse_model(MODEL).unwrap();
    for seed in 0..20 {
        check_permutation(&model, seed).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaffolded_models_conserve_weight(shape in common::shape()) {
        let model = common::build(&shape, common::plain_name);
        let result = evaluate(&model).unwrap();
        prop_assert!(check_conservation(&result).is_ok(), "{:?}", check_conservation(&result));
    }

    #[test]
    fn scaffolded_models_are_permutation_equivariant(shape in common::shape()) {
        let model = common::build(&shape, common::plain_name);
        let outcome = check_permutation(&model, shape.seed);
        prop_assert!(outcome.is_ok(), "{:?}", outcome);
    }
}
