//! Random model generation shared by the property suites.

#![allow(dead_code)]

use ahp_core::catalog::scaffold_model;
use ahp_core::{DecisionModel, Node, Ratio};
use proptest::prelude::*;

/// Every judgment value on the 1..9 scale and its reciprocal.
pub fn scale_value() -> impl Strategy<Value = Ratio> {
    (1i64..=9, any::<bool>()).prop_map(|(v, flip)| {
        if flip {
            Ratio::new(1, v).unwrap()
        } else {
            Ratio::integer(v)
        }
    })
}

#[derive(Debug, Clone)]
pub struct Shape {
    pub categories: Vec<usize>,
    pub alternatives: usize,
    pub values: Vec<Ratio>,
    pub seed: u64,
}

pub fn shape() -> impl Strategy<Value = Shape> {
    (
        proptest::collection::vec(1usize..5, 1..5),
        2usize..5,
        proptest::collection::vec(scale_value(), 128),
        any::<u64>(),
    )
        .prop_map(|(categories, alternatives, values, seed)| Shape {
            categories,
            alternatives,
            values,
            seed,
        })
}

/// Scaffolds a model of the given shape and replaces every placeholder
/// judgment with the next value from `shape.values` (cycling as needed).
pub fn build(shape: &Shape, name: impl Fn(&str, usize) -> String) -> DecisionModel {
    let mut selection = Vec::new();
    for (c, &attrs) in shape.categories.iter().enumerate() {
        for a in 0..attrs {
            selection.push((name("C", c), name("A", c * 10 + a)));
        }
    }
    let alternatives: Vec<String> = (0..shape.alternatives).map(|i| name("Alt", i)).collect();
    let mut model = scaffold_model(&selection, &alternatives).unwrap();
    let mut values = shape.values.iter().cycle();
    fill(&mut model.goal, &mut values);
    model
}

fn fill<'a>(node: &mut Node, values: &mut impl Iterator<Item = &'a Ratio>) {
    for j in &mut node.judgments {
        j.value = *values.next().unwrap();
    }
    node.placeholder = false;
    if let ahp_core::Children::Criteria(children) = &mut node.children {
        for child in children {
            fill(child, values);
        }
    }
}

pub fn plain_name(prefix: &str, i: usize) -> String {
    format!("{prefix}{i}")
}
