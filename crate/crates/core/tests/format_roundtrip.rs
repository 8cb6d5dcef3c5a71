mod common;

use ahp_core::model::{Node, PairwiseJudgment};
use ahp_core::{parse_model, serialize_model, validate_model, DecisionModel, Ratio};
use proptest::prelude::*;

const MODEL: &str = include_str!("fixtures/chatbot_quality.yaml");

fn roundtrip(model: &DecisionModel) -> DecisionModel {
    let text = serialize_model(model);
    parse_model(&text).unwrap_or_else(|e| panic!("{e}\n---\n{text}"))
}

#[test]
fn chatbot_model_roundtrips() {
    let model = parse_model(MODEL).unwrap();
    assert_eq!(roundtrip(&model), model);
    assert_eq!(
        model.metadata.description,
        "Model quality assessment as a decision process."
    );
    assert_eq!(model.metadata.author, "unknown");
    assert_eq!(model.alternative_names(), ["OLD", "NEW"]);
}

#[test]
fn every_scale_value_survives_exactly() {
    let mut values: Vec<Ratio> = (1..=9).map(Ratio::integer).collect();
    values.extend((2..=9).map(|d| Ratio::new(1, d).unwrap()));
    let alternatives: Vec<String> = (0..values.len() + 1).map(|i| format!("X{i}")).collect();
    // a chain X0..X17 plus the remaining pairs at 1 keeps the model complete
    let mut judgments = Vec::new();
    for i in 0..alternatives.len() {
        for j in i + 1..alternatives.len() {
            let value = if j == i + 1 { values[i] } else { Ratio::ONE };
            judgments.push(PairwiseJudgment::new(&alternatives[i], &alternatives[j], value));
        }
    }
    let model = DecisionModel {
        version: "2.0".into(),
        metadata: Default::default(),
        alternatives: alternatives.iter().map(ahp_core::AlternativeDecl::new).collect(),
        goal: Node::leaf("Goal", judgments),
    };
    let back = roundtrip(&model);
    assert_eq!(back, model);
    for (i, value) in values.iter().enumerate() {
        let j = &back
            .goal
            .judgments
            .iter()
            .find(|j| j.left == alternatives[i] && j.right == alternatives[i + 1])
            .unwrap();
        assert_eq!((j.value.numer(), j.value.denom()), (value.numer(), value.denom()));
    }
}

fn awkward_name(prefix: &str, i: usize) -> String {
    const SPICE: [&str; 8] = [
        "",
        " with space",
        ": colon",
        " #hash",
        ", comma",
        "[x]",
        "'q'",
        "\"dq\"",
    ];
    format!("{prefix}{i}{}", SPICE[i % SPICE.len()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaffolded_models_roundtrip(shape in common::shape()) {
        let model = common::build(&shape, common::plain_name);
        prop_assert_eq!(roundtrip(&model), model);
    }

    #[test]
    fn quoted_names_roundtrip(shape in common::shape()) {
        let model = common::build(&shape, awkward_name);
        prop_assert!(validate_model(&model).is_ok());
        prop_assert_eq!(roundtrip(&model), model);
    }

    #[test]
    fn placeholder_scaffolds_roundtrip(shape in common::shape()) {
        let selection: Vec<(String, String)> = shape
            .categories
            .iter()
            .enumerate()
            .flat_map(|(c, &n)| (0..n).map(move |a| (format!("C{c}"), format!("A{c}_{a}"))))
            .collect();
        let alternatives: Vec<String> = (0..shape.alternatives).map(|i| format!("Alt{i}")).collect();
        let model = ahp_core::catalog::scaffold_model(&selection, &alternatives).unwrap();
        prop_assert_eq!(roundtrip(&model), model);
    }

    #[test]
    fn serialization_is_a_fixed_point(shape in common::shape()) {
        let model = common::build(&shape, awkward_name);
        let once = serialize_model(&model);
        let twice = serialize_model(&parse_model(&once).unwrap());
        prop_assert_eq!(once, twice);
    }
}
