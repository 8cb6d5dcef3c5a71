//! Whole-model evaluation: local priorities at every node, global weights
//! propagated down the hierarchy, and distributive synthesis of alternative
//! totals.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{DecisionModel, ModelError, Node, NodePath};
use crate::priority::{build_matrix, consistency, ConsistencyStatus, PowerIteration, PriorityError};
use crate::ratio::Ratio;
use crate::validate::{validate_model, ValidationReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("model has {} validation error(s)", .0.errors.len())]
    Invalid(ValidationReport),
    #[error("at {path}: {source}")]
    Priority {
        path: NodePath,
        #[source]
        source: PriorityError,
    },
    #[error(transparent)]
    UnknownPath(#[from] ModelError),
    #[error("UNKNOWN_PAIR: no judgment compares `{left}` with `{right}` at {path}")]
    UnknownPair {
        path: NodePath,
        left: String,
        right: String,
    },
    #[error("BAD_VALUE: judgment value {0} must be positive")]
    BadValue(Ratio),
}

impl AnalysisError {
    pub fn code(&self) -> &'static str {
        match self {
            AnalysisError::Invalid(_) => "VALIDATION_FAILED",
            AnalysisError::Priority { source, .. } => source.code(),
            AnalysisError::UnknownPath(e) => e.code(),
            AnalysisError::UnknownPair { .. } => "UNKNOWN_PAIR",
            AnalysisError::BadValue(_) => "BAD_VALUE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub path: NodePath,
    pub name: String,
    pub depth: usize,
    pub global_weight: f64,
    pub local_weight: f64,
    pub per_alternative_weight: IndexMap<String, f64>,
    pub lambda_max: f64,
    pub consistency_ratio: f64,
    pub consistency_status: ConsistencyStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisResult {
    /// Display name of the decision (the goal's `name`).
    pub title: String,
    /// Goal row first, then depth-first with siblings by descending global
    /// weight (declaration order on ties).
    pub rows: Vec<ResultRow>,
    pub alternative_totals: IndexMap<String, f64>,
    /// Consistency ratio of the goal node.
    pub overall_consistency: f64,
}

impl AnalysisResult {
    pub fn row(&self, path: &NodePath) -> Option<&ResultRow> {
        self.rows.iter().find(|r| &r.path == path)
    }

    /// First row whose node has the given name.
    pub fn row_named(&self, name: &str) -> Option<&ResultRow> {
        self.rows.iter().find(|r| r.name == name)
    }
}

pub fn evaluate(model: &DecisionModel) -> Result<AnalysisResult, AnalysisError> {
    evaluate_with(model, &PowerIteration::default())
}

pub fn evaluate_with(model: &DecisionModel, solver: &PowerIteration) -> Result<AnalysisResult, AnalysisError> {
    let report = validate_model(model);
    if !report.is_ok() {
        return Err(AnalysisError::Invalid(report));
    }
    let alternatives = model.alternative_names();
    let ctx = Context {
        alternatives: &alternatives,
        solver,
    };
    let tree = ctx.node(&model.goal, NodePath(vec![model.goal.name.clone()]), 1.0, 1.0)?;

    let mut rows = Vec::with_capacity(model.goal.subtree_len());
    flatten(tree, &mut rows);
    let goal = &rows[0];
    Ok(AnalysisResult {
        title: model.metadata.name.clone(),
        alternative_totals: goal.per_alternative_weight.clone(),
        overall_consistency: goal.consistency_ratio,
        rows,
    })
}

struct Context<'a> {
    alternatives: &'a [&'a str],
    solver: &'a PowerIteration,
}

struct Evaluated {
    row: ResultRow,
    children: Vec<Evaluated>,
}

impl Context<'_> {
    fn node(&self, node: &Node, path: NodePath, global: f64, local: f64) -> Result<Evaluated, AnalysisError> {
        let at = |source| AnalysisError::Priority {
            path: path.clone(),
            source,
        };
        let elements = node.element_names(self.alternatives);
        let matrix = build_matrix(&elements, &node.judgments).map_err(at)?;
        let priorities = self.solver.run(&matrix).map_err(at)?;
        let report = consistency(priorities.lambda_max, elements.len()).map_err(at)?;

        let mut per_alternative: IndexMap<String, f64> =
            self.alternatives.iter().map(|a| (a.to_string(), 0.0)).collect();
        let mut children = Vec::new();
        if node.is_leaf() {
            for (alt, w) in self.alternatives.iter().zip(&priorities.weights) {
                per_alternative[*alt] = global * w;
            }
        } else {
            for (child, w) in node.child_nodes().iter().zip(&priorities.weights) {
                let evaluated = self.node(child, path.child(&child.name), global * w, *w)?;
                for (alt, share) in &evaluated.row.per_alternative_weight {
                    per_alternative[alt] += share;
                }
                children.push(evaluated);
            }
        }

        Ok(Evaluated {
            row: ResultRow {
                depth: path.depth(),
                name: node.name.clone(),
                path,
                global_weight: global,
                local_weight: local,
                per_alternative_weight: per_alternative,
                lambda_max: priorities.lambda_max,
                consistency_ratio: report.consistency_ratio,
                consistency_status: report.status,
            },
            children,
        })
    }
}

fn flatten(mut node: Evaluated, rows: &mut Vec<ResultRow>) {
    // stable: equal weights keep declaration order
    node.children
        .sort_by(|a, b| b.row.global_weight.total_cmp(&a.row.global_weight));
    rows.push(node.row);
    for child in node.children {
        flatten(child, rows);
    }
}

/// Alternatives by descending total, declaration order on ties.
pub fn rank_alternatives(result: &AnalysisResult) -> Vec<(String, f64)> {
    let mut ranked: Vec<(String, f64)> = result
        .alternative_totals
        .iter()
        .map(|(name, w)| (name.clone(), *w))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    ranked
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JudgmentChange {
    pub path: NodePath,
    pub pair: (String, String),
    /// Previous value, read in the direction of `pair`.
    pub old_value: Ratio,
    pub new_value: Ratio,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisDelta {
    pub changed: JudgmentChange,
    pub before: AnalysisResult,
    pub after: AnalysisResult,
    /// `after − before` per alternative.
    pub total_shift: IndexMap<String, f64>,
}

/// Re-evaluates the model with one judgment replaced. The input model is left
/// untouched.
pub fn whatif(
    model: &DecisionModel,
    path: &NodePath,
    pair: (&str, &str),
    value: Ratio,
) -> Result<AnalysisDelta, AnalysisError> {
    if !value.is_positive() {
        return Err(AnalysisError::BadValue(value));
    }
    let (left, right) = pair;
    let mut edited = model.clone();
    let node = edited.node_at_mut(path)?;
    let judgment = node
        .judgments
        .iter_mut()
        .find(|j| j.value_for(left, right).is_some())
        .ok_or_else(|| AnalysisError::UnknownPair {
            path: path.clone(),
            left: left.to_string(),
            right: right.to_string(),
        })?;
    let old_value = judgment.value_for(left, right).expect("judgment matched this pair");
    judgment.value = if judgment.left == left {
        value
    } else {
        value.recip().expect("positive value")
    };

    let before = evaluate(model)?;
    let after = evaluate(&edited)?;
    let total_shift = after
        .alternative_totals
        .iter()
        .map(|(alt, w)| (alt.clone(), w - before.alternative_totals[alt]))
        .collect();
    Ok(AnalysisDelta {
        changed: JudgmentChange {
            path: path.clone(),
            pair: (left.to_string(), right.to_string()),
            old_value,
            new_value: value,
        },
        before,
        after,
        total_shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AlternativeDecl, Metadata, PairwiseJudgment, GOAL_NODE_NAME};

    fn j(a: &str, b: &str, v: &str) -> PairwiseJudgment {
        PairwiseJudgment::new(a, b, v.parse().unwrap())
    }

    fn model(alternatives: &[&str], goal: Node) -> DecisionModel {
        DecisionModel {
            version: "2.0".into(),
            metadata: Metadata {
                name: "test".into(),
                ..Default::default()
            },
            alternatives: alternatives.iter().map(|a| AlternativeDecl::new(*a)).collect(),
            goal,
        }
    }

    #[test]
    fn symmetric_single_criterion() {
        let m = model(
            &["A", "B"],
            Node::criteria(GOAL_NODE_NAME, vec![], vec![Node::leaf("C", vec![j("A", "B", "1")])]),
        );
        let r = evaluate(&m).unwrap();
        assert_eq!(r.alternative_totals["A"], 0.5);
        assert_eq!(r.alternative_totals["B"], 0.5);
        assert!(r.rows.iter().all(|row| row.consistency_ratio == 0.0));
        assert_eq!(rank_alternatives(&r), [("A".to_string(), 0.5), ("B".to_string(), 0.5)]);
    }

    #[test]
    fn three_alternatives_consistent_leaf() {
        let m = model(
            &["A", "B", "C"],
            Node::leaf(
                GOAL_NODE_NAME,
                vec![j("A", "B", "3"), j("A", "C", "9"), j("B", "C", "3")],
            ),
        );
        let ranked = rank_alternatives(&evaluate(&m).unwrap());
        let names: Vec<&str> = ranked.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["A", "B", "C"]);
        for ((_, w), e) in ranked.iter().zip([9.0 / 13.0, 3.0 / 13.0, 1.0 / 13.0]) {
            assert!((w - e).abs() < 1e-12);
        }
    }

    #[test]
    fn rows_sorted_by_global_weight() {
        let m = model(
            &["A", "B"],
            Node::criteria(
                GOAL_NODE_NAME,
                vec![j("X", "Y", "1/3")],
                vec![
                    Node::leaf("X", vec![j("A", "B", "1")]),
                    Node::leaf("Y", vec![j("A", "B", "5")]),
                ],
            ),
        );
        let r = evaluate(&m).unwrap();
        let names: Vec<&str> = r.rows.iter().map(|row| row.name.as_str()).collect();
        assert_eq!(names, ["Goal", "Y", "X"]);
        assert_eq!(r.rows[1].path.to_string(), "Goal/Y");
        assert_eq!(r.rows[1].depth, 1);
    }

    #[test]
    fn invalid_model_is_rejected() {
        let m = model(&["A", "B"], Node::leaf(GOAL_NODE_NAME, vec![]));
        assert!(matches!(evaluate(&m), Err(AnalysisError::Invalid(report)) if !report.is_ok()));
    }

    #[test]
    fn whatif_errors() {
        let m = model(&["A", "B"], Node::leaf(GOAL_NODE_NAME, vec![j("A", "B", "3")]));
        let root = NodePath::root();
        assert_eq!(
            whatif(&m, &root, ("A", "B"), Ratio::integer(0)).unwrap_err().code(),
            "BAD_VALUE"
        );
        assert_eq!(
            whatif(&m, &"Goal/Nope".parse().unwrap(), ("A", "B"), Ratio::ONE)
                .unwrap_err()
                .code(),
            "UNKNOWN_PATH"
        );
        assert_eq!(
            whatif(&m, &root, ("A", "Z"), Ratio::ONE).unwrap_err().code(),
            "UNKNOWN_PAIR"
        );
    }

    #[test]
    fn whatif_reversed_pair() {
        let m = model(&["A", "B"], Node::leaf(GOAL_NODE_NAME, vec![j("A", "B", "3")]));
        let delta = whatif(&m, &NodePath::root(), ("B", "A"), Ratio::integer(3)).unwrap();
        assert_eq!(delta.changed.old_value, Ratio::new(1, 3).unwrap());
        assert!((delta.after.alternative_totals["B"] - 0.75).abs() < 1e-12);
        assert!((delta.total_shift["A"] + 0.5).abs() < 1e-12);
        // input untouched
        assert_eq!(m.goal.judgments[0].value, Ratio::integer(3));
    }
}
