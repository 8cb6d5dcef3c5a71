//! Structural checks run before any priority math.
//!
//! A model with an empty error list is guaranteed to evaluate: every node has
//! a complete, non-contradictory set of positive judgments over its children.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{Children, DecisionModel, Node, NodePath, SUPPORTED_VERSION};
use crate::ratio::Ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IssueCode {
    BadVersion,
    TooFewAlternatives,
    DuplicateAlternative,
    EmptyName,
    EmptyNode,
    DuplicateChild,
    UnknownName,
    SelfPair,
    MissingPair,
    DuplicatePair,
    ConflictingPair,
    NonPositiveValue,
    // warnings
    ValueOutOfScale,
    NonSaatyValue,
    PlaceholderJudgments,
}

impl IssueCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            IssueCode::BadVersion => "BAD_VERSION",
            IssueCode::TooFewAlternatives => "TOO_FEW_ALTERNATIVES",
            IssueCode::DuplicateAlternative => "DUPLICATE_ALTERNATIVE",
            IssueCode::EmptyName => "EMPTY_NAME",
            IssueCode::EmptyNode => "EMPTY_NODE",
            IssueCode::DuplicateChild => "DUPLICATE_CHILD",
            IssueCode::UnknownName => "UNKNOWN_NAME",
            IssueCode::SelfPair => "SELF_PAIR",
            IssueCode::MissingPair => "MISSING_PAIR",
            IssueCode::DuplicatePair => "DUPLICATE_PAIR",
            IssueCode::ConflictingPair => "CONFLICTING_PAIR",
            IssueCode::NonPositiveValue => "NON_POSITIVE_VALUE",
            IssueCode::ValueOutOfScale => "VALUE_OUT_OF_SCALE",
            IssueCode::NonSaatyValue => "NON_SAATY_VALUE",
            IssueCode::PlaceholderJudgments => "PLACEHOLDER_JUDGMENTS",
        }
    }
}

impl fmt::Display for IssueCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub path: String,
    pub code: IssueCode,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.code, self.path, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl ValidationReport {
    /// True when the model can be evaluated.
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }

    pub fn has_error(&self, code: IssueCode) -> bool {
        self.errors.iter().any(|i| i.code == code)
    }

    pub fn has_warning(&self, code: IssueCode) -> bool {
        self.warnings.iter().any(|i| i.code == code)
    }

    fn error(&mut self, path: impl ToString, code: IssueCode, message: String) {
        self.errors.push(Issue {
            path: path.to_string(),
            code,
            message,
        });
    }

    fn warn(&mut self, path: impl ToString, code: IssueCode, message: String) {
        self.warnings.push(Issue {
            path: path.to_string(),
            code,
            message,
        });
    }
}

const ALTERNATIVES_PATH: &str = "Alternatives";

pub fn validate_model(model: &DecisionModel) -> ValidationReport {
    let mut report = ValidationReport::default();

    if model.version != SUPPORTED_VERSION {
        report.error(
            "Version",
            IssueCode::BadVersion,
            format!(
                "version `{}` is not supported, expected {SUPPORTED_VERSION}",
                model.version
            ),
        );
    }

    if model.alternatives.len() < 2 {
        report.error(
            ALTERNATIVES_PATH,
            IssueCode::TooFewAlternatives,
            format!(
                "{} alternative(s) declared, at least 2 required",
                model.alternatives.len()
            ),
        );
    }
    let mut seen = HashSet::new();
    for alt in &model.alternatives {
        if alt.name.trim().is_empty() {
            report.error(
                ALTERNATIVES_PATH,
                IssueCode::EmptyName,
                "alternative with empty name".into(),
            );
        } else if !seen.insert(alt.name.as_str()) {
            report.error(
                ALTERNATIVES_PATH,
                IssueCode::DuplicateAlternative,
                format!("alternative `{}` declared more than once", alt.name),
            );
        }
    }

    let alternatives = model.alternative_names();
    let mut path = NodePath(Vec::new());
    validate_node(&model.goal, &alternatives, &mut path, &mut report);
    report
}

fn validate_node(node: &Node, alternatives: &[&str], path: &mut NodePath, report: &mut ValidationReport) {
    path.0.push(node.name.clone());
    let here = path.to_string();

    if node.name.trim().is_empty() {
        report.error(&here, IssueCode::EmptyName, "node with empty name".into());
    }

    let elements: Vec<&str> = match &node.children {
        Children::Criteria(nodes) => {
            if nodes.is_empty() {
                report.error(&here, IssueCode::EmptyNode, "node has no children".into());
            }
            let mut names = HashSet::new();
            for child in nodes {
                if !names.insert(child.name.as_str()) {
                    report.error(
                        &here,
                        IssueCode::DuplicateChild,
                        format!("child `{}` appears more than once", child.name),
                    );
                }
            }
            nodes.iter().map(|n| n.name.as_str()).collect()
        }
        Children::Alternatives => alternatives.to_vec(),
    };

    check_judgments(node, &elements, &here, report);

    if node.placeholder && !node.judgments.is_empty() {
        report.warn(
            &here,
            IssueCode::PlaceholderJudgments,
            "judgments are unit placeholders; enter real comparisons before relying on the analysis".into(),
        );
    }

    for child in node.child_nodes() {
        validate_node(child, alternatives, path, report);
    }
    path.0.pop();
}

fn check_judgments(node: &Node, elements: &[&str], here: &str, report: &mut ValidationReport) {
    let index: HashMap<&str, usize> = elements.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    // canonical key (i < j) -> value of elements[i] over elements[j]
    let mut covered: HashMap<(usize, usize), Ratio> = HashMap::new();

    for j in &node.judgments {
        let label = format!("[{}, {}, {}]", j.left, j.right, j.value);
        let (Some(&li), Some(&ri)) = (index.get(j.left.as_str()), index.get(j.right.as_str())) else {
            for name in [&j.left, &j.right] {
                if !index.contains_key(name.as_str()) {
                    report.error(
                        here,
                        IssueCode::UnknownName,
                        format!("{label} references `{name}`, which is not compared at this node"),
                    );
                }
            }
            continue;
        };
        if li == ri {
            report.error(
                here,
                IssueCode::SelfPair,
                format!("{label} compares an element with itself"),
            );
            continue;
        }
        if !j.value.is_positive() {
            report.error(
                here,
                IssueCode::NonPositiveValue,
                format!("{label} must have a positive value"),
            );
            continue;
        }
        if !j.value.in_canonical_range() {
            report.warn(
                here,
                IssueCode::ValueOutOfScale,
                format!("{label} lies outside the judgment scale [1/9, 9]"),
            );
        } else if !j.value.is_saaty_value() {
            report.warn(
                here,
                IssueCode::NonSaatyValue,
                format!("{label} is not one of 1, 3, 5, 7, 9 or their reciprocals"),
            );
        }

        let (key, canonical) = if li < ri {
            ((li, ri), j.value)
        } else {
            ((ri, li), j.value.recip().expect("positive value has a reciprocal"))
        };
        match covered.get(&key) {
            None => {
                covered.insert(key, canonical);
            }
            Some(previous) if *previous == canonical => report.error(
                here,
                IssueCode::DuplicatePair,
                format!("{label} repeats an earlier judgment of the same pair"),
            ),
            Some(previous) => report.error(
                here,
                IssueCode::ConflictingPair,
                format!(
                    "{label} contradicts the earlier judgment [{}, {}, {}]",
                    elements[key.0], elements[key.1], previous
                ),
            ),
        }
    }

    for i in 0..elements.len() {
        for k in (i + 1)..elements.len() {
            if !covered.contains_key(&(i, k)) && !has_unknown_or_bad(node, elements[i], elements[k]) {
                report.error(
                    here,
                    IssueCode::MissingPair,
                    format!("no judgment compares `{}` with `{}`", elements[i], elements[k]),
                );
            }
        }
    }
}

// A pair whose only judgment was already rejected (non-positive) is reported
// once, not again as missing.
fn has_unknown_or_bad(node: &Node, a: &str, b: &str) -> bool {
    node.judgments
        .iter()
        .any(|j| ((j.left == a && j.right == b) || (j.left == b && j.right == a)) && !j.value.is_positive())
}
