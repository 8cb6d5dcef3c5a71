//! The OLD/NEW chatbot comparison model, checked against values computed
//! independently with a dense eigensolver (numpy `linalg.eig`).

use ahp_core::catalog::{attach_metrics, example_metric_records};
use ahp_core::priority::ConsistencyStatus;
use ahp_core::{evaluate, parse_model, serialize_model, whatif, NodePath, Ratio};

const MODEL: &str = include_str!("fixtures/chatbot_quality.yaml");

const ORACLE_TOL: f64 = 1e-9;

fn close(actual: f64, expected: f64, tol: f64) -> bool {
    (actual - expected).abs() <= tol
}

#[test]
fn totals_match_dense_oracle() {
    let result = evaluate(&parse_model(MODEL).unwrap()).unwrap();
    assert_eq!(result.title, "Select Between Old and New Chatbots");
    assert!(close(result.alternative_totals["OLD"], 0.662388869937455, ORACLE_TOL));
    assert!(close(result.alternative_totals["NEW"], 0.337611130062544, ORACLE_TOL));
}

#[test]
fn category_weights_match_dense_oracle() {
    let result = evaluate(&parse_model(MODEL).unwrap()).unwrap();
    let expected = [
        ("Performance", 0.3210231382555897),
        ("Humanity", 0.04073401396228499),
        ("Affect", 0.09364136801881817),
        ("Accessibility", 0.5446014797633071),
    ];
    for (name, weight) in expected {
        let row = result.row_named(name).unwrap();
        assert!(
            close(row.global_weight, weight, ORACLE_TOL),
            "{name}: {}",
            row.global_weight
        );
        assert!(close(row.local_weight, weight, ORACLE_TOL));
    }
    let goal = &result.rows[0];
    assert!(close(goal.lambda_max, 4.495578251939143, 1e-9));
    // CI / RI₄ with RI₄ = 0.90
    assert!(close(goal.consistency_ratio, 0.18354750071820128, 1e-9));
    assert_eq!(goal.consistency_status, ConsistencyStatus::Acceptable);
}

#[test]
fn leaf_weights_and_splits_match_dense_oracle() {
    let result = evaluate(&parse_model(MODEL).unwrap()).unwrap();
    let expected = [
        (
            "UnexpectedInput",
            0.280895245973641,
            0.21067143448023076,
            0.07022381149341025,
        ),
        (
            "Escalation",
            0.04012789228194871,
            0.03511190574670513,
            0.005015986535243589,
        ),
        (
            "Transparent",
            0.0037030921783895473,
            0.0018515460891947737,
            0.0018515460891947737,
        ),
        (
            "ThemedDiscussion",
            0.018515460891947718,
            0.0046288652229869295,
            0.013886595668960788,
        ),
        (
            "SpecificQs",
            0.018515460891947718,
            0.0030859101486579534,
            0.015429550743289765,
        ),
        (
            "Personality",
            0.01560689466980303,
            0.0026011491116338385,
            0.013005745558169192,
        ),
        (
            "Entertaining",
            0.07803447334901514,
            0.013005745558169192,
            0.06502872779084595,
        ),
        (
            "MeaningIntent",
            0.4765262947928937,
            0.3573947210946703,
            0.11913157369822343,
        ),
        (
            "SocialCues",
            0.06807518497041339,
            0.03403759248520669,
            0.03403759248520669,
        ),
    ];
    for (name, global, old, new) in expected {
        let row = result.row_named(name).unwrap();
        assert!(close(row.global_weight, global, ORACLE_TOL), "{name} global");
        assert!(close(row.per_alternative_weight["OLD"], old, ORACLE_TOL), "{name} OLD");
        assert!(close(row.per_alternative_weight["NEW"], new, ORACLE_TOL), "{name} NEW");
        assert!(row.consistency_ratio.abs() < 1e-12, "{name} CR");
        assert_eq!(row.consistency_status, ConsistencyStatus::Ideal);
    }
}

#[test]
fn row_order_is_depth_first_by_weight() {
    let result = evaluate(&parse_model(MODEL).unwrap()).unwrap();
    let names: Vec<&str> = result.rows.iter().map(|r| r.name.as_str()).collect();
    assert_eq!(
        names,
        [
            "Goal",
            "Accessibility",
            "MeaningIntent",
            "SocialCues",
            "Performance",
            "UnexpectedInput",
            "Escalation",
            "Affect",
            "Entertaining",
            "Personality",
            "Humanity",
            // tied weights keep file order
            "ThemedDiscussion",
            "SpecificQs",
            "Transparent",
        ]
    );
    let depths: Vec<usize> = result.rows.iter().map(|r| r.depth).collect();
    assert_eq!(depths, [0, 1, 2, 2, 1, 2, 2, 1, 2, 2, 1, 2, 2, 2]);
}

#[test]
fn whatif_matches_dense_oracle() {
    let model = parse_model(MODEL).unwrap();
    let escalation: NodePath = "Goal/Performance/Escalation".parse().unwrap();
    let delta = whatif(&model, &escalation, ("OLD", "NEW"), Ratio::new(1, 7).unwrap()).unwrap();
    assert!(close(
        delta.after.alternative_totals["OLD"],
        0.632292950725994,
        ORACLE_TOL
    ));
    assert!(close(
        delta.total_shift["OLD"],
        0.632292950725994 - 0.662388869937455,
        ORACLE_TOL
    ));
    assert_eq!(delta.changed.old_value, Ratio::integer(7));

    let unexpected: NodePath = "Goal/Performance/UnexpectedInput".parse().unwrap();
    let delta = whatif(&model, &unexpected, ("OLD", "NEW"), Ratio::ONE).unwrap();
    assert!(close(
        delta.after.alternative_totals["OLD"],
        0.592165058444045,
        ORACLE_TOL
    ));

    // reversed pair direction stores the reciprocal
    let delta = whatif(&model, &escalation, ("NEW", "OLD"), Ratio::integer(7)).unwrap();
    assert!(close(
        delta.after.alternative_totals["OLD"],
        0.632292950725994,
        ORACLE_TOL
    ));
    assert_eq!(delta.changed.old_value, Ratio::new(1, 7).unwrap());
}

#[test]
fn noop_whatif_is_exactly_zero() {
    let model = parse_model(MODEL).unwrap();
    let path: NodePath = "Goal".parse().unwrap();
    let delta = whatif(&model, &path, ("Humanity", "Affect"), Ratio::new(1, 5).unwrap()).unwrap();
    assert!(delta.total_shift.values().all(|s| *s == 0.0));
    assert_eq!(delta.before, delta.after);
}

#[test]
fn serialize_then_parse_is_identity() {
    let model = parse_model(MODEL).unwrap();
    let text = serialize_model(&model);
    assert_eq!(parse_model(&text).unwrap(), model);
    assert_eq!(serialize_model(&parse_model(&text).unwrap()), text);
}

#[test]
fn example_evidence_attaches_to_leaves() {
    let model = parse_model(MODEL).unwrap();
    let annotated = attach_metrics(&model, &example_metric_records()).unwrap();
    assert_eq!(annotated.evidence.len(), 9);
    assert!(annotated.evidence.contains_key("Goal/Performance/Escalation"));
    assert!(annotated.evidence.contains_key("Goal/Accessibility/SocialCues"));
}
