//! Text renderings of analysis results and model hierarchies.

use std::fmt::Write as _;

use serde::Serialize;

use crate::model::{DecisionModel, Node};
use crate::synthesis::{rank_alternatives, AnalysisDelta, AnalysisResult, ResultRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalysisFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeFormat {
    Ascii,
    Dot,
}

pub fn render_report(result: &AnalysisResult, format: AnalysisFormat) -> String {
    match format {
        AnalysisFormat::Table => render_table(result),
        AnalysisFormat::Json => {
            let mut text =
                serde_json::to_string_pretty(&AnalysisDocument::new(result)).expect("analysis results serialize");
            text.push('\n');
            text
        }
        AnalysisFormat::Csv => render_csv(result),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedAlternative {
    pub name: String,
    pub weight: f64,
}

/// JSON shape shared by the CLI and the HTTP API.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisDocument<'a> {
    #[serde(flatten)]
    pub result: &'a AnalysisResult,
    pub ranking: Vec<RankedAlternative>,
}

impl<'a> AnalysisDocument<'a> {
    pub fn new(result: &'a AnalysisResult) -> Self {
        AnalysisDocument {
            result,
            ranking: rank_alternatives(result)
                .into_iter()
                .map(|(name, weight)| RankedAlternative { name, weight })
                .collect(),
        }
    }
}

/// Percent with one decimal; values that round to zero print as `0.0%`
/// regardless of sign.
pub fn percent(value: f64) -> String {
    let pct = value * 100.0;
    let pct = if pct.abs() < 0.05 { 0.0 } else { pct };
    format!("{pct:.1}%")
}

fn signed_percent(value: f64) -> String {
    let pct = value * 100.0;
    let pct = if pct.abs() < 0.05 { 0.0 } else { pct };
    format!("{pct:+.1}%")
}

const SEP: &str = "  ";

fn render_table(result: &AnalysisResult) -> String {
    let mut out = String::new();
    let alternatives: Vec<&str> = result.alternative_totals.keys().map(String::as_str).collect();
    let mut header = vec!["Node", "Weight"];
    header.extend(&alternatives);
    header.push("Consistency");
    out.push_str(&header.join(SEP));
    out.push('\n');
    for (i, row) in result.rows.iter().enumerate() {
        let label = if i == 0 {
            result.title.as_str()
        } else {
            row.name.as_str()
        };
        out.push_str(&"  ".repeat(row.depth.saturating_sub(1)));
        out.push_str(label);
        for cell in table_cells(row) {
            out.push_str(SEP);
            out.push_str(&cell);
        }
        out.push('\n');
    }
    out
}

fn table_cells(row: &ResultRow) -> Vec<String> {
    let mut cells = vec![percent(row.global_weight)];
    cells.extend(row.per_alternative_weight.values().map(|w| percent(*w)));
    cells.push(percent(row.consistency_ratio));
    cells
}

fn render_csv(result: &AnalysisResult) -> String {
    let mut writer = csv_writer();
    let mut header = vec![
        "path".to_string(),
        "name".into(),
        "depth".into(),
        "global_weight".into(),
        "global_percent".into(),
        "local_weight".into(),
    ];
    header.extend(result.alternative_totals.keys().cloned());
    header.extend(["consistency_ratio".into(), "consistency_status".into()]);
    writer.write_record(&header).expect("in-memory csv");
    for row in &result.rows {
        let mut record = vec![
            row.path.to_string(),
            row.name.clone(),
            row.depth.to_string(),
            row.global_weight.to_string(),
            percent(row.global_weight),
            row.local_weight.to_string(),
        ];
        record.extend(row.per_alternative_weight.values().map(|w| w.to_string()));
        record.push(row.consistency_ratio.to_string());
        record.push(row.consistency_status.as_str().to_string());
        writer.write_record(&record).expect("in-memory csv");
    }
    String::from_utf8(writer.into_inner().expect("in-memory csv")).expect("utf-8 input")
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().from_writer(Vec::new())
}

/// Before/after totals for a what-if edit.
pub fn render_whatif(delta: &AnalysisDelta) -> String {
    let mut out = String::new();
    let c = &delta.changed;
    let _ = writeln!(
        out,
        "{} [{}, {}]: {} -> {}",
        c.path, c.pair.0, c.pair.1, c.old_value, c.new_value
    );
    out.push_str(&["Alternative", "Before", "After", "Shift"].join(SEP));
    out.push('\n');
    for (alt, before) in &delta.before.alternative_totals {
        let after = delta.after.alternative_totals[alt];
        let _ = writeln!(
            out,
            "{alt}{SEP}{}{SEP}{}{SEP}{}",
            percent(*before),
            percent(after),
            signed_percent(delta.total_shift[alt])
        );
    }
    let before_top = rank_alternatives(&delta.before).first().map(|(n, _)| n.clone());
    let after_top = rank_alternatives(&delta.after).first().map(|(n, _)| n.clone());
    if before_top != after_top {
        let _ = writeln!(
            out,
            "Preferred alternative changes from {} to {}",
            before_top.unwrap_or_default(),
            after_top.unwrap_or_default()
        );
    }
    out
}

pub fn render_tree(model: &DecisionModel, format: TreeFormat) -> String {
    match format {
        TreeFormat::Ascii => render_ascii(model),
        TreeFormat::Dot => render_dot(model),
    }
}

fn render_ascii(model: &DecisionModel) -> String {
    let mut out = String::new();
    out.push_str(&model.metadata.name);
    out.push('\n');
    ascii_children(model, &model.goal, "", &mut out);
    out
}

fn ascii_children(model: &DecisionModel, node: &Node, prefix: &str, out: &mut String) {
    let labels: Vec<(&str, Option<&Node>)> = if node.is_leaf() {
        model.alternatives.iter().map(|a| (a.name.as_str(), None)).collect()
    } else {
        node.child_nodes().iter().map(|n| (n.name.as_str(), Some(n))).collect()
    };
    let count = labels.len();
    for (i, (label, child)) in labels.into_iter().enumerate() {
        let last = i + 1 == count;
        let _ = writeln!(out, "{prefix}{}{label}", if last { "`-- " } else { "|-- " });
        if let Some(child) = child {
            let nested = format!("{prefix}{}", if last { "    " } else { "|   " });
            ascii_children(model, child, &nested, out);
        }
    }
}

fn render_dot(model: &DecisionModel) -> String {
    let mut out = String::from("digraph hierarchy {\n  rankdir=TB;\n  node [shape=ellipse];\n");
    let mut next_id = 0usize;
    let mut edges = Vec::new();
    let mut leaves = Vec::new();
    dot_node(
        &model.goal,
        Some(&model.metadata.name),
        &mut next_id,
        &mut out,
        &mut edges,
        &mut leaves,
    );
    for (i, alt) in model.alternatives.iter().enumerate() {
        let _ = writeln!(out, "  a{i} [label=\"{}\", shape=box];", dot_escape(&alt.name));
    }
    for (from, to) in edges {
        let _ = writeln!(out, "  n{from} -> n{to};");
    }
    for leaf in leaves {
        for i in 0..model.alternatives.len() {
            let _ = writeln!(out, "  n{leaf} -> a{i};");
        }
    }
    out.push_str("}\n");
    out
}

fn dot_node(
    node: &Node,
    label: Option<&str>,
    next_id: &mut usize,
    out: &mut String,
    edges: &mut Vec<(usize, usize)>,
    leaves: &mut Vec<usize>,
) -> usize {
    let id = *next_id;
    *next_id += 1;
    let _ = writeln!(out, "  n{id} [label=\"{}\"];", dot_escape(label.unwrap_or(&node.name)));
    if node.is_leaf() {
        leaves.push(id);
    }
    for child in node.child_nodes() {
        let child_id = dot_node(child, None, next_id, out, edges, leaves);
        edges.push((id, child_id));
    }
    id
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
}
