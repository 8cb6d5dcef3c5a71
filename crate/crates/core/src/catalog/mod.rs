//! Built-in taxonomy of chatbot quality attributes, measured-evidence records,
//! and scaffolding of new decision models from a selection of attributes.

mod table;

use std::fmt;
use std::io;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    AlternativeDecl, DecisionModel, Metadata, Node, NodePath, PairwiseJudgment, GOAL_NODE_NAME, SUPPORTED_VERSION,
};
use crate::ratio::Ratio;

pub use table::{example_metric_records, SUGGESTED_METRICS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("EMPTY_SELECTION: select at least one attribute")]
    EmptySelection,
    #[error("TOO_FEW_ALTERNATIVES: {0} alternative(s) given, at least 2 required")]
    TooFewAlternatives(usize),
    #[error("EMPTY_NAME: {0} name must not be empty")]
    EmptyName(&'static str),
    #[error("DUPLICATE_ALTERNATIVE: `{0}` listed more than once")]
    DuplicateAlternative(String),
    #[error("UNKNOWN_ATTRIBUTE: no leaf criterion named `{0}`")]
    UnknownAttribute(String),
    #[error("AMBIGUOUS_ATTRIBUTE: `{0}` names several leaf criteria; use its full path")]
    AmbiguousAttribute(String),
    #[error("UNKNOWN_ALTERNATIVE: record for `{attribute}` mentions unknown alternative `{alternative}`")]
    UnknownAlternative { attribute: String, alternative: String },
    #[error("INVALID_METRIC: record for `{attribute}`: {reason}")]
    InvalidMetric { attribute: String, reason: String },
    #[error("BAD_FILTER: {0}")]
    BadFilter(String),
    #[error("BAD_CSV: line {line}: {message}")]
    Csv { line: u64, message: String },
}

impl CatalogError {
    pub fn code(&self) -> &'static str {
        match self {
            CatalogError::EmptySelection => "EMPTY_SELECTION",
            CatalogError::TooFewAlternatives(_) => "TOO_FEW_ALTERNATIVES",
            CatalogError::EmptyName(_) => "EMPTY_NAME",
            CatalogError::DuplicateAlternative(_) => "DUPLICATE_ALTERNATIVE",
            CatalogError::UnknownAttribute(_) => "UNKNOWN_ATTRIBUTE",
            CatalogError::AmbiguousAttribute(_) => "AMBIGUOUS_ATTRIBUTE",
            CatalogError::UnknownAlternative { .. } => "UNKNOWN_ALTERNATIVE",
            CatalogError::InvalidMetric { .. } => "INVALID_METRIC",
            CatalogError::BadFilter(_) => "BAD_FILTER",
            CatalogError::Csv { .. } => "BAD_CSV",
        }
    }
}

/// ISO 9241 usability dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum UsabilityDimension {
    Efficiency,
    Effectiveness,
    Satisfaction,
}

impl FromStr for UsabilityDimension {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "EFFICIENCY" => Ok(UsabilityDimension::Efficiency),
            "EFFECTIVENESS" => Ok(UsabilityDimension::Effectiveness),
            "SATISFACTION" => Ok(UsabilityDimension::Satisfaction),
            _ => Err(CatalogError::BadFilter(format!("unknown dimension `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    Performance,
    Functionality,
    Humanity,
    Affect,
    EthicsBehavior,
    Accessibility,
}

impl Category {
    pub const ALL: [Category; 6] = [
        Category::Performance,
        Category::Functionality,
        Category::Humanity,
        Category::Affect,
        Category::EthicsBehavior,
        Category::Accessibility,
    ];

    pub const fn dimension(self) -> UsabilityDimension {
        match self {
            Category::Performance => UsabilityDimension::Efficiency,
            Category::Functionality | Category::Humanity => UsabilityDimension::Effectiveness,
            Category::Affect | Category::EthicsBehavior | Category::Accessibility => UsabilityDimension::Satisfaction,
        }
    }

    /// Heading as printed in the attribute table.
    pub fn label(self) -> &'static str {
        match self {
            Category::Performance => "Performance",
            Category::Functionality => "Functionality",
            Category::Humanity => "Humanity",
            Category::Affect => "Affect",
            Category::EthicsBehavior => "Ethics & Behavior",
            Category::Accessibility => "Accessibility",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Category {
    type Err = CatalogError;

    /// Case-insensitive; accepts both `Ethics & Behavior` and `EthicsBehavior`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let folded: String = s
            .chars()
            .filter(|c| c.is_alphanumeric())
            .flat_map(char::to_lowercase)
            .collect();
        Category::ALL
            .into_iter()
            .find(|c| {
                let label: String = c
                    .label()
                    .chars()
                    .filter(|ch| ch.is_alphanumeric())
                    .flat_map(char::to_lowercase)
                    .collect();
                label == folded || (folded == "ethicsandbehavior" && *c == Category::EthicsBehavior)
            })
            .ok_or_else(|| CatalogError::BadFilter(format!("unknown category `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AttributeCatalogEntry {
    pub usability_dimension: UsabilityDimension,
    pub category: Category,
    pub attribute: &'static str,
    pub sources: &'static [&'static str],
    /// Another entry in the table that takes the opposite position.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conflicts_with: Option<&'static str>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CatalogFilter {
    pub dimension: Option<UsabilityDimension>,
    pub category: Option<Category>,
    /// Case-insensitive substring of the attribute text or its sources.
    pub keyword: Option<String>,
}

impl CatalogFilter {
    fn matches(&self, entry: &AttributeCatalogEntry) -> bool {
        if self.dimension.is_some_and(|d| d != entry.usability_dimension) {
            return false;
        }
        if self.category.is_some_and(|c| c != entry.category) {
            return false;
        }
        match &self.keyword {
            None => true,
            Some(keyword) => {
                let needle = keyword.to_lowercase();
                entry.attribute.to_lowercase().contains(&needle)
                    || entry.sources.iter().any(|s| s.to_lowercase().contains(&needle))
            }
        }
    }
}

pub fn all_entries() -> &'static [AttributeCatalogEntry] {
    table::ENTRIES
}

pub fn catalog_entries(filter: &CatalogFilter) -> Vec<AttributeCatalogEntry> {
    table::ENTRIES.iter().filter(|e| filter.matches(e)).copied().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MetricKind {
    SuccessRate,
    RangeRate,
    ScaledScore,
}

impl MetricKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MetricKind::SuccessRate => "SUCCESS_RATE",
            MetricKind::RangeRate => "RANGE_RATE",
            MetricKind::ScaledScore => "SCALED_SCORE",
        }
    }
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "SUCCESS_RATE" => Ok(MetricKind::SuccessRate),
            "RANGE_RATE" => Ok(MetricKind::RangeRate),
            "SCALED_SCORE" => Ok(MetricKind::ScaledScore),
            other => Err(format!("unknown metric kind `{other}`")),
        }
    }
}

/// One measured value: a success rate, a range of rates, or a 0..100 score
/// with its spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricValue {
    Rate(f64),
    RateRange { low: f64, high: f64 },
    Scored { mean: f64, stddev: f64 },
}

impl MetricValue {
    fn kind(&self) -> MetricKind {
        match self {
            MetricValue::Rate(_) => MetricKind::SuccessRate,
            MetricValue::RateRange { .. } => MetricKind::RangeRate,
            MetricValue::Scored { .. } => MetricKind::ScaledScore,
        }
    }

    fn check(&self) -> Result<(), String> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        match *self {
            MetricValue::Rate(v) if !unit(v) => Err(format!("rate {v} outside [0, 1]")),
            MetricValue::RateRange { low, high } if !unit(low) || !unit(high) => {
                Err(format!("range {low}..{high} outside [0, 1]"))
            }
            MetricValue::RateRange { low, high } if low > high => Err(format!("range low {low} exceeds high {high}")),
            MetricValue::Scored { mean, .. } if !(0.0..=100.0).contains(&mean) => {
                Err(format!("mean {mean} outside [0, 100]"))
            }
            MetricValue::Scored { stddev, .. } if stddev.is_nan() || stddev < 0.0 => {
                Err(format!("standard deviation {stddev} is negative"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    /// Leaf criterion name, or its full slash path when names repeat.
    pub attribute: String,
    pub metric_name: String,
    pub kind: MetricKind,
    pub values: IndexMap<String, MetricValue>,
}

impl MetricRecord {
    pub fn check(&self) -> Result<(), CatalogError> {
        let invalid = |reason: String| CatalogError::InvalidMetric {
            attribute: self.attribute.clone(),
            reason,
        };
        for (alt, value) in &self.values {
            if value.kind() != self.kind {
                return Err(invalid(format!(
                    "value for `{alt}` is a {} but the record kind is {}",
                    value.kind().as_str(),
                    self.kind.as_str()
                )));
            }
            value.check().map_err(|e| invalid(format!("`{alt}`: {e}")))?;
        }
        Ok(())
    }
}

/// A model plus measured evidence attached to its leaf criteria. Evidence is
/// for display next to judgment entry and never enters the priority math.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatedModel {
    pub model: DecisionModel,
    /// Leaf path (`Goal/Performance/Escalation`) → records.
    pub evidence: IndexMap<String, Vec<MetricRecord>>,
}

pub fn attach_metrics(model: &DecisionModel, records: &[MetricRecord]) -> Result<AnnotatedModel, CatalogError> {
    let leaves = model.leaf_paths();
    let alternatives = model.alternative_names();
    let mut evidence: IndexMap<String, Vec<MetricRecord>> = IndexMap::new();
    for record in records {
        let target = resolve_leaf(&leaves, &record.attribute)?;
        if let Some(alt) = record.values.keys().find(|a| !alternatives.contains(&a.as_str())) {
            return Err(CatalogError::UnknownAlternative {
                attribute: record.attribute.clone(),
                alternative: alt.clone(),
            });
        }
        record.check()?;
        evidence.entry(target.to_string()).or_default().push(record.clone());
    }
    Ok(AnnotatedModel {
        model: model.clone(),
        evidence,
    })
}

fn resolve_leaf<'a>(leaves: &'a [NodePath], attribute: &str) -> Result<&'a NodePath, CatalogError> {
    let attribute = attribute.trim();
    let mut found = leaves.iter().filter(|p| {
        if attribute.contains('/') {
            p.to_string() == attribute
        } else {
            p.last() == attribute
        }
    });
    let first = found
        .next()
        .ok_or_else(|| CatalogError::UnknownAttribute(attribute.to_string()))?;
    if found.next().is_some() {
        return Err(CatalogError::AmbiguousAttribute(attribute.to_string()));
    }
    Ok(first)
}

pub const DEFAULT_SCAFFOLD_TITLE: &str = "Chatbot quality assessment";

/// Builds goal → category → attribute → alternatives with every judgment set
/// to 1 and flagged as a placeholder. `selection` pairs are
/// `(category, attribute)`; categories appear in first-mention order.
pub fn scaffold_model(
    selection: &[(impl AsRef<str>, impl AsRef<str>)],
    alternatives: &[impl AsRef<str>],
) -> Result<DecisionModel, CatalogError> {
    if selection.is_empty() {
        return Err(CatalogError::EmptySelection);
    }
    if alternatives.len() < 2 {
        return Err(CatalogError::TooFewAlternatives(alternatives.len()));
    }
    let mut alt_names: Vec<String> = Vec::with_capacity(alternatives.len());
    for alt in alternatives {
        let name = alt.as_ref().trim();
        if name.is_empty() {
            return Err(CatalogError::EmptyName("alternative"));
        }
        if alt_names.iter().any(|a| a == name) {
            return Err(CatalogError::DuplicateAlternative(name.to_string()));
        }
        alt_names.push(name.to_string());
    }

    let mut groups: IndexMap<String, Vec<String>> = IndexMap::new();
    for (category, attribute) in selection {
        let (category, attribute) = (category.as_ref().trim(), attribute.as_ref().trim());
        if category.is_empty() {
            return Err(CatalogError::EmptyName("category"));
        }
        if attribute.is_empty() {
            return Err(CatalogError::EmptyName("attribute"));
        }
        let leaves = groups.entry(category.to_string()).or_default();
        if !leaves.iter().any(|a| a == attribute) {
            leaves.push(attribute.to_string());
        }
    }

    let categories = groups
        .iter()
        .map(|(category, attributes)| {
            let leaves = attributes
                .iter()
                .map(|a| placeholder(Node::leaf(a.as_str(), unit_judgments(&alt_names))))
                .collect();
            placeholder(Node::criteria(category.as_str(), unit_judgments(attributes), leaves))
        })
        .collect();
    let category_names: Vec<String> = groups.keys().cloned().collect();

    Ok(DecisionModel {
        version: SUPPORTED_VERSION.to_string(),
        metadata: Metadata {
            name: DEFAULT_SCAFFOLD_TITLE.to_string(),
            description: String::new(),
            author: String::new(),
        },
        alternatives: alt_names.into_iter().map(AlternativeDecl::new).collect(),
        goal: placeholder(Node::criteria(
            GOAL_NODE_NAME,
            unit_judgments(&category_names),
            categories,
        )),
    })
}

fn placeholder(mut node: Node) -> Node {
    node.placeholder = !node.judgments.is_empty();
    node
}

fn unit_judgments(names: &[String]) -> Vec<PairwiseJudgment> {
    let mut out = Vec::new();
    for (i, left) in names.iter().enumerate() {
        for right in &names[i + 1..] {
            out.push(PairwiseJudgment::new(left.as_str(), right.as_str(), Ratio::ONE));
        }
    }
    out
}

const CSV_HEADER: [&str; 9] = [
    "attribute",
    "metric_name",
    "kind",
    "alternative",
    "rate",
    "low",
    "high",
    "mean",
    "stddev",
];

/// Writes records as one CSV row per (record, alternative); unused value
/// columns stay empty.
pub fn write_metrics_csv<W: io::Write>(records: &[MetricRecord], out: W) -> Result<(), CatalogError> {
    let csv_err = |e: csv::Error| CatalogError::Csv {
        line: e.position().map_or(0, |p| p.line()),
        message: e.to_string(),
    };
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER).map_err(csv_err)?;
    for record in records {
        for (alt, value) in &record.values {
            let (rate, low, high, mean, stddev) = match *value {
                MetricValue::Rate(v) => (Some(v), None, None, None, None),
                MetricValue::RateRange { low, high } => (None, Some(low), Some(high), None, None),
                MetricValue::Scored { mean, stddev } => (None, None, None, Some(mean), Some(stddev)),
            };
            let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            writer
                .write_record([
                    record.attribute.as_str(),
                    record.metric_name.as_str(),
                    record.kind.as_str(),
                    alt.as_str(),
                    &cell(rate),
                    &cell(low),
                    &cell(high),
                    &cell(mean),
                    &cell(stddev),
                ])
                .map_err(csv_err)?;
        }
    }
    writer.flush().map_err(|e| CatalogError::Csv {
        line: 0,
        message: e.to_string(),
    })
}

/// Reads the CSV written by [`write_metrics_csv`]. Consecutive rows sharing
/// attribute, metric name and kind form one record.
pub fn read_metrics_csv<R: io::Read>(input: R) -> Result<Vec<MetricRecord>, CatalogError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers().map_err(|e| CatalogError::Csv {
        line: 1,
        message: e.to_string(),
    })?;
    if headers.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(CatalogError::Csv {
            line: 1,
            message: format!("header must be `{}`", CSV_HEADER.join(",")),
        });
    }

    let mut records: Vec<MetricRecord> = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| CatalogError::Csv {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |message: String| CatalogError::Csv { line, message };
        let num = |idx: usize| -> Result<Option<f64>, CatalogError> {
            let cell = &row[idx];
            if cell.is_empty() {
                return Ok(None);
            }
            cell.parse::<f64>()
                .map(Some)
                .map_err(|_| bad(format!("`{cell}` in column {} is not a number", CSV_HEADER[idx])))
        };
        let kind: MetricKind = row[2].parse().map_err(bad)?;
        let value = match kind {
            MetricKind::SuccessRate => MetricValue::Rate(num(4)?.ok_or_else(|| bad("missing rate".into()))?),
            MetricKind::RangeRate => MetricValue::RateRange {
                low: num(5)?.ok_or_else(|| bad("missing low".into()))?,
                high: num(6)?.ok_or_else(|| bad("missing high".into()))?,
            },
            MetricKind::ScaledScore => MetricValue::Scored {
                mean: num(7)?.ok_or_else(|| bad("missing mean".into()))?,
                stddev: num(8)?.ok_or_else(|| bad("missing stddev".into()))?,
            },
        };
        let (attribute, metric_name, alternative) = (&row[0], &row[1], &row[3]);
        match records.last_mut() {
            Some(last) if last.attribute == attribute && last.metric_name == metric_name && last.kind == kind => {
                if last.values.insert(alternative.to_string(), value).is_some() {
                    return Err(bad(format!("alternative `{alternative}` repeated for `{attribute}`")));
                }
            }
            _ => records.push(MetricRecord {
                attribute: attribute.to_string(),
                metric_name: metric_name.to_string(),
                kind,
                values: [(alternative.to_string(), value)].into_iter().collect(),
            }),
        }
    }
    Ok(records)
}
