//! Decision hierarchy: a goal, nested criteria and the alternatives compared
//! under every leaf criterion.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::ratio::Ratio;

/// The only model file version this crate reads and writes.
pub const SUPPORTED_VERSION: &str = "2.0";

/// Name carried by the root node; also the first segment of every node path.
pub const GOAL_NODE_NAME: &str = "Goal";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("UNKNOWN_PATH: `{segment}` is not a child of `{parent}`")]
    UnknownPath { parent: String, segment: String },
    #[error("UNKNOWN_PATH: empty node path")]
    EmptyPath,
}

impl ModelError {
    pub fn code(&self) -> &'static str {
        "UNKNOWN_PATH"
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub author: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternativeDecl {
    pub name: String,
    /// Free-form attributes; carried through untouched.
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub attributes: IndexMap<String, String>,
}

impl AlternativeDecl {
    pub fn new(name: impl Into<String>) -> Self {
        AlternativeDecl {
            name: name.into(),
            attributes: IndexMap::new(),
        }
    }
}

/// `value` states how strongly `left` is preferred over `right`.
/// The reverse direction is implied as the reciprocal and never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseJudgment {
    pub left: String,
    pub right: String,
    pub value: Ratio,
}

impl PairwiseJudgment {
    pub fn new(left: impl Into<String>, right: impl Into<String>, value: Ratio) -> Self {
        PairwiseJudgment {
            left: left.into(),
            right: right.into(),
            value,
        }
    }

    /// Value of this judgment read in the direction `a` over `b`, if it
    /// concerns that pair.
    pub fn value_for(&self, a: &str, b: &str) -> Option<Ratio> {
        if self.left == a && self.right == b {
            Some(self.value)
        } else if self.left == b && self.right == a {
            self.value.recip()
        } else {
            None
        }
    }
}

// Wire form is the compact triplet `["A", "B", "1/7"]`.
impl Serialize for PairwiseJudgment {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        (&self.left, &self.right, &self.value).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PairwiseJudgment {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let (left, right, value) = <(String, String, Ratio)>::deserialize(deserializer)?;
        Ok(PairwiseJudgment::new(left.trim(), right.trim(), value))
    }
}

/// What a node's judgments compare: nested criteria, or the model's
/// alternatives (which makes the node a leaf criterion).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Children {
    Criteria(Vec<Node>),
    Alternatives,
}

const ALTERNATIVES_MARKER: &str = "alternatives";

impl Serialize for Children {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Children::Criteria(nodes) => nodes.serialize(serializer),
            Children::Alternatives => serializer.serialize_str(ALTERNATIVES_MARKER),
        }
    }
}

impl<'de> Deserialize<'de> for Children {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Marker(String),
            Nodes(Vec<Node>),
        }
        match Wire::deserialize(deserializer)? {
            Wire::Nodes(nodes) => Ok(Children::Criteria(nodes)),
            Wire::Marker(s) if s == ALTERNATIVES_MARKER || s == "*alternatives" => Ok(Children::Alternatives),
            Wire::Marker(s) => Err(de::Error::custom(format!(
                "children must be a list of nodes or \"{ALTERNATIVES_MARKER}\", got \"{s}\""
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub name: String,
    #[serde(default)]
    pub judgments: Vec<PairwiseJudgment>,
    pub children: Children,
    /// Set on scaffolded nodes whose judgments are unit placeholders awaiting
    /// real input.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub placeholder: bool,
}

impl Node {
    pub fn leaf(name: impl Into<String>, judgments: Vec<PairwiseJudgment>) -> Self {
        Node {
            name: name.into(),
            judgments,
            children: Children::Alternatives,
            placeholder: false,
        }
    }

    pub fn criteria(name: impl Into<String>, judgments: Vec<PairwiseJudgment>, children: Vec<Node>) -> Self {
        Node {
            name: name.into(),
            judgments,
            children: Children::Criteria(children),
            placeholder: false,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.children, Children::Alternatives)
    }

    pub fn child_nodes(&self) -> &[Node] {
        match &self.children {
            Children::Criteria(nodes) => nodes,
            Children::Alternatives => &[],
        }
    }

    /// Names of the elements this node's judgments range over.
    pub fn element_names<'a>(&'a self, alternatives: &[&'a str]) -> Vec<&'a str> {
        match &self.children {
            Children::Criteria(nodes) => nodes.iter().map(|n| n.name.as_str()).collect(),
            Children::Alternatives => alternatives.to_vec(),
        }
    }

    pub fn child(&self, name: &str) -> Option<&Node> {
        self.child_nodes().iter().find(|n| n.name == name)
    }

    fn child_mut(&mut self, name: &str) -> Option<&mut Node> {
        match &mut self.children {
            Children::Criteria(nodes) => nodes.iter_mut().find(|n| n.name == name),
            Children::Alternatives => None,
        }
    }

    /// Number of nodes in this subtree, including `self`.
    pub fn subtree_len(&self) -> usize {
        1 + self.child_nodes().iter().map(Node::subtree_len).sum::<usize>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionModel {
    pub version: String,
    pub metadata: Metadata,
    pub alternatives: Vec<AlternativeDecl>,
    pub goal: Node,
}

impl DecisionModel {
    pub fn alternative_names(&self) -> Vec<&str> {
        self.alternatives.iter().map(|a| a.name.as_str()).collect()
    }

    /// Looks up a node by path; the first segment must name the goal.
    pub fn node_at(&self, path: &NodePath) -> Result<&Node, ModelError> {
        let (first, rest) = path.0.split_first().ok_or(ModelError::EmptyPath)?;
        if *first != self.goal.name {
            return Err(ModelError::UnknownPath {
                parent: String::new(),
                segment: first.clone(),
            });
        }
        let mut node = &self.goal;
        for segment in rest {
            node = node.child(segment).ok_or_else(|| ModelError::UnknownPath {
                parent: node.name.clone(),
                segment: segment.clone(),
            })?;
        }
        Ok(node)
    }

    pub fn node_at_mut(&mut self, path: &NodePath) -> Result<&mut Node, ModelError> {
        let (first, rest) = path.0.split_first().ok_or(ModelError::EmptyPath)?;
        if *first != self.goal.name {
            return Err(ModelError::UnknownPath {
                parent: String::new(),
                segment: first.clone(),
            });
        }
        let mut node = &mut self.goal;
        for segment in rest {
            let parent = node.name.clone();
            node = node.child_mut(segment).ok_or_else(|| ModelError::UnknownPath {
                parent,
                segment: segment.clone(),
            })?;
        }
        Ok(node)
    }

    /// Visits every node depth-first in declaration order.
    pub fn walk<'a>(&'a self, mut visit: impl FnMut(&NodePath, &'a Node)) {
        fn go<'a>(node: &'a Node, path: &mut NodePath, visit: &mut impl FnMut(&NodePath, &'a Node)) {
            path.0.push(node.name.clone());
            visit(path, node);
            for child in node.child_nodes() {
                go(child, path, visit);
            }
            path.0.pop();
        }
        go(&self.goal, &mut NodePath(Vec::new()), &mut visit);
    }

    /// Paths of all leaf criteria, depth-first in declaration order.
    pub fn leaf_paths(&self) -> Vec<NodePath> {
        let mut out = Vec::new();
        self.walk(|path, node| {
            if node.is_leaf() {
                out.push(path.clone());
            }
        });
        out
    }
}

/// Slash-separated address of a node, starting at the goal
/// (`Goal/Performance/Escalation`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NodePath(pub Vec<String>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(vec![GOAL_NODE_NAME.to_string()])
    }

    pub fn child(&self, name: &str) -> Self {
        let mut segments = self.0.clone();
        segments.push(name.to_string());
        NodePath(segments)
    }

    pub fn segments(&self) -> &[String] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn last(&self) -> &str {
        self.0.last().map(String::as_str).unwrap_or("")
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join("/"))
    }
}

impl FromStr for NodePath {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let segments: Vec<String> = s
            .split('/')
            .map(str::trim)
            .filter(|seg| !seg.is_empty())
            .map(String::from)
            .collect();
        if segments.is_empty() {
            return Err(ModelError::EmptyPath);
        }
        Ok(NodePath(segments))
    }
}

impl From<Vec<&str>> for NodePath {
    fn from(segments: Vec<&str>) -> Self {
        NodePath(segments.into_iter().map(String::from).collect())
    }
}

impl Serialize for NodePath {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NodePath {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Text(String),
            Segments(Vec<String>),
        }
        match Wire::deserialize(deserializer)? {
            Wire::Text(s) => s.parse().map_err(de::Error::custom),
            Wire::Segments(v) if v.is_empty() => Err(de::Error::custom("empty node path")),
            Wire::Segments(v) => Ok(NodePath(v)),
        }
    }
}
