use std::fmt::Write as _;

use crate::model::{Children, DecisionModel, Node};

const ANCHOR: &str = "alternatives";

/// Renders a model in the 2.0 file format with two-space indentation.
pub fn serialize_model(model: &DecisionModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Version: {}", model.version);
    out.push('\n');

    let _ = writeln!(out, "Alternatives: &{ANCHOR}");
    for alt in &model.alternatives {
        let _ = writeln!(out, "  {}:", scalar(&alt.name));
        for (key, value) in &alt.attributes {
            if value.is_empty() {
                let _ = writeln!(out, "    {}:", scalar(key));
            } else {
                let _ = writeln!(out, "    {}: {}", scalar(key), scalar(value));
            }
        }
    }
    out.push('\n');

    out.push_str("Goal:\n");
    let _ = writeln!(out, "  name: {}", scalar(&model.metadata.name));
    let description = &model.metadata.description;
    if !description.is_empty() {
        if !description.contains(['\n', '\r']) && description.trim() == description {
            let _ = writeln!(out, "  description: >\n    {description}");
        } else {
            let _ = writeln!(out, "  description: {}", quoted(description));
        }
    }
    if !model.metadata.author.is_empty() {
        let _ = writeln!(out, "  author: {}", scalar(&model.metadata.author));
    }
    write_node_body(&mut out, &model.goal, 1);
    out
}

fn write_node_body(out: &mut String, node: &Node, depth: usize) {
    let pad = "  ".repeat(depth);
    if !node.judgments.is_empty() {
        let _ = writeln!(out, "{pad}preferences:");
        let _ = writeln!(out, "{pad}  pairwise:");
        for j in &node.judgments {
            let _ = writeln!(
                out,
                "{pad}    - [{}, {}, {}]",
                scalar(&j.left),
                scalar(&j.right),
                j.value
            );
        }
    }
    if node.placeholder {
        let _ = writeln!(out, "{pad}placeholder: true");
    }
    match &node.children {
        Children::Alternatives => {
            let _ = writeln!(out, "{pad}children: *{ANCHOR}");
        }
        Children::Criteria(children) => {
            let _ = writeln!(out, "{pad}children:");
            for child in children {
                let _ = writeln!(out, "{pad}  {}:", scalar(&child.name));
                write_node_body(out, child, depth + 2);
            }
        }
    }
}

/// Emits `text` bare when the reader would give it back unchanged, and
/// double-quoted otherwise.
fn scalar(text: &str) -> String {
    if is_plain_safe(text) {
        text.to_string()
    } else {
        quoted(text)
    }
}

fn is_plain_safe(text: &str) -> bool {
    const SPECIAL: &[char] = &[
        '#', ':', ',', '[', ']', '{', '}', '&', '*', '!', '|', '>', '\'', '"', '%', '@', '`', '\\',
    ];
    !text.is_empty()
        && text.trim() == text
        && !text.starts_with(['-', '?'])
        && !text.contains(SPECIAL)
        && !text.chars().any(char::is_control)
}

fn quoted(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '\0' => out.push_str("\\0"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
