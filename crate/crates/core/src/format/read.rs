use indexmap::IndexMap;

use super::yaml::{self, Entry, Value};
use super::{ParseError, ParseErrorKind, SourceSpan};
use crate::model::{
    AlternativeDecl, Children, DecisionModel, Metadata, Node, PairwiseJudgment, GOAL_NODE_NAME, SUPPORTED_VERSION,
};
use crate::ratio::Ratio;

/// A parsed model together with non-fatal diagnostics (unknown keys).
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedModel {
    pub model: DecisionModel,
    pub warnings: Vec<ParseError>,
}

pub fn parse_model(text: &str) -> Result<DecisionModel, ParseError> {
    parse_model_with_warnings(text).map(|parsed| parsed.model)
}

pub fn parse_model_with_warnings(text: &str) -> Result<ParsedModel, ParseError> {
    let doc = yaml::parse_document(text)?;
    let Value::Map(entries, _) = &doc else {
        unreachable!("parse_document only returns mappings");
    };
    let mut reader = Reader::default();
    let model = reader.document(entries)?;
    Ok(ParsedModel {
        model,
        warnings: reader.warnings,
    })
}

#[derive(Default)]
struct Reader {
    warnings: Vec<ParseError>,
    anchor: Option<(String, SourceSpan)>,
}

impl Reader {
    fn unknown_key(&mut self, entry: &Entry, context: &str) {
        self.warnings.push(ParseError::new(
            entry.key.span,
            ParseErrorKind::UnknownKey,
            format!("unknown key `{}` in {context} (ignored)", entry.key.text),
        ));
    }

    fn document(&mut self, entries: &[Entry]) -> Result<DecisionModel, ParseError> {
        let mut version = None;
        let mut alternatives = None;
        let mut goal = None;
        for entry in entries {
            let slot = match entry.key.text.as_str() {
                "Version" => &mut version,
                "Alternatives" => &mut alternatives,
                "Goal" => &mut goal,
                _ => {
                    reject_anchor(entry)?;
                    self.unknown_key(entry, "document");
                    continue;
                }
            };
            if slot.is_some() {
                return Err(duplicate_key(entry));
            }
            *slot = Some(entry);
        }

        let version = version.ok_or_else(|| missing("Version", SourceSpan::new(1, 1)))?;
        reject_anchor(version)?;
        let version_text = match &version.value {
            Value::Scalar(s) => s.text.clone(),
            other => {
                return Err(ParseError::new(
                    other.span(),
                    ParseErrorKind::BadVersion,
                    "Version must be a scalar",
                ))
            }
        };
        if version_text != SUPPORTED_VERSION {
            return Err(ParseError::new(
                version.value.span(),
                ParseErrorKind::BadVersion,
                format!("unsupported version `{version_text}`, expected {SUPPORTED_VERSION}"),
            ));
        }

        let alternatives_entry = alternatives.ok_or_else(|| missing("Alternatives", SourceSpan::new(1, 1)))?;
        if let Some(anchor) = &alternatives_entry.anchor {
            self.anchor = Some((anchor.name.clone(), anchor.span));
        }
        let alternatives = self.alternatives(&alternatives_entry.value)?;

        let goal_entry = goal.ok_or_else(|| missing("Goal", SourceSpan::new(1, 1)))?;
        reject_anchor(goal_entry)?;
        let (metadata, goal) = self.goal(goal_entry)?;

        Ok(DecisionModel {
            version: version_text,
            metadata,
            alternatives,
            goal,
        })
    }

    fn alternatives(&mut self, value: &Value) -> Result<Vec<AlternativeDecl>, ParseError> {
        match value {
            Value::Null(_) => Ok(Vec::new()),
            Value::Map(entries, _) => entries
                .iter()
                .map(|entry| {
                    reject_anchor(entry)?;
                    let attributes = match &entry.value {
                        Value::Null(_) => IndexMap::new(),
                        Value::Map(attrs, _) => attrs
                            .iter()
                            .map(|attr| {
                                reject_anchor(attr)?;
                                let text = match &attr.value {
                                    Value::Null(_) => String::new(),
                                    Value::Scalar(s) => s.text.clone(),
                                    other => {
                                        return Err(ParseError::new(
                                            other.span(),
                                            ParseErrorKind::Syntax,
                                            "alternative attributes must be plain values",
                                        ))
                                    }
                                };
                                Ok((attr.key.text.clone(), text))
                            })
                            .collect::<Result<_, _>>()?,
                        other => {
                            return Err(ParseError::new(
                                other.span(),
                                ParseErrorKind::Syntax,
                                format!(
                                    "alternative `{}` must be followed by attributes or nothing",
                                    entry.key.text
                                ),
                            ))
                        }
                    };
                    Ok(AlternativeDecl {
                        name: entry.key.text.clone(),
                        attributes,
                    })
                })
                .collect(),
            Value::Seq(items, _) => items
                .iter()
                .map(|item| match item {
                    Value::Scalar(s) => Ok(AlternativeDecl::new(s.text.clone())),
                    other => Err(ParseError::new(
                        other.span(),
                        ParseErrorKind::Syntax,
                        "alternatives list must contain names",
                    )),
                })
                .collect(),
            other => Err(ParseError::new(
                other.span(),
                ParseErrorKind::Syntax,
                "Alternatives must be a mapping of alternative names",
            )),
        }
    }

    fn goal(&mut self, entry: &Entry) -> Result<(Metadata, Node), ParseError> {
        let Value::Map(entries, span) = &entry.value else {
            return Err(missing("Goal children", entry.value.span()));
        };
        let mut metadata = Metadata::default();
        let mut name = None;
        for e in entries {
            match e.key.text.as_str() {
                "name" => name = Some(scalar_text(e)?),
                "description" => metadata.description = scalar_text(e)?.trim().to_string(),
                "author" => metadata.author = scalar_text(e)?,
                _ => {}
            }
        }
        metadata.name = name.ok_or_else(|| missing("Goal name", *span))?;
        let node = self.node(GOAL_NODE_NAME, &entry.value, entry.key.span, true)?;
        Ok((metadata, node))
    }

    fn node(&mut self, name: &str, value: &Value, key_span: SourceSpan, is_goal: bool) -> Result<Node, ParseError> {
        let entries = match value {
            Value::Map(entries, _) => entries,
            Value::Null(_) => {
                return Err(missing(&format!("children of `{name}`"), key_span));
            }
            other => {
                return Err(ParseError::new(
                    other.span(),
                    ParseErrorKind::Syntax,
                    format!("node `{name}` must be a mapping"),
                ))
            }
        };

        let mut judgments = None;
        let mut children = None;
        let mut placeholder = None;
        for entry in entries {
            match entry.key.text.as_str() {
                "preferences" => {
                    reject_anchor(entry)?;
                    if judgments.is_some() {
                        return Err(duplicate_key(entry));
                    }
                    judgments = Some(self.preferences(&entry.value)?);
                }
                "children" => {
                    reject_anchor(entry)?;
                    if children.is_some() {
                        return Err(duplicate_key(entry));
                    }
                    children = Some(self.children(&entry.value, entry.key.span, name)?);
                }
                "placeholder" => {
                    if placeholder.is_some() {
                        return Err(duplicate_key(entry));
                    }
                    placeholder = Some(match scalar_text(entry)?.as_str() {
                        "true" => true,
                        "false" => false,
                        other => {
                            return Err(ParseError::new(
                                entry.value.span(),
                                ParseErrorKind::Syntax,
                                format!("placeholder must be true or false, got `{other}`"),
                            ))
                        }
                    });
                }
                "name" | "description" | "author" if is_goal => {}
                _ => {
                    reject_anchor(entry)?;
                    self.unknown_key(entry, &format!("node `{name}`"));
                }
            }
        }
        let children = children.ok_or_else(|| missing(&format!("children of `{name}`"), key_span))?;
        Ok(Node {
            name: name.to_string(),
            judgments: judgments.unwrap_or_default(),
            children,
            placeholder: placeholder.unwrap_or(false),
        })
    }

    fn preferences(&mut self, value: &Value) -> Result<Vec<PairwiseJudgment>, ParseError> {
        let entries = match value {
            Value::Null(_) => return Ok(Vec::new()),
            Value::Map(entries, _) => entries,
            other => {
                return Err(ParseError::new(
                    other.span(),
                    ParseErrorKind::Syntax,
                    "preferences must be a mapping",
                ))
            }
        };
        let mut judgments = None;
        for entry in entries {
            if entry.key.text != "pairwise" {
                self.unknown_key(entry, "preferences");
                continue;
            }
            reject_anchor(entry)?;
            if judgments.is_some() {
                return Err(duplicate_key(entry));
            }
            let items = match &entry.value {
                Value::Null(_) => Vec::new(),
                Value::Seq(items, _) => items.iter().map(triplet).collect::<Result<_, _>>()?,
                other => {
                    return Err(ParseError::new(
                        other.span(),
                        ParseErrorKind::Syntax,
                        "pairwise must be a list of [A, B, ratio] triplets",
                    ))
                }
            };
            judgments = Some(items);
        }
        Ok(judgments.unwrap_or_default())
    }

    fn children(&mut self, value: &Value, key_span: SourceSpan, parent: &str) -> Result<Children, ParseError> {
        match value {
            Value::Alias(alias) => match &self.anchor {
                Some((anchor, anchor_span)) if *anchor == alias.text && anchor_span.line < alias.span.line => {
                    Ok(Children::Alternatives)
                }
                _ => Err(ParseError::new(
                    alias.span,
                    ParseErrorKind::UnresolvedAlias,
                    format!(
                        "alias `*{}` does not refer to an anchor defined earlier on Alternatives",
                        alias.text
                    ),
                )),
            },
            Value::Map(entries, _) => entries
                .iter()
                .map(|entry| {
                    reject_anchor(entry)?;
                    self.node(&entry.key.text, &entry.value, entry.key.span, false)
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Children::Criteria),
            Value::Null(_) => Err(missing(&format!("children of `{parent}`"), key_span)),
            other => Err(ParseError::new(
                other.span(),
                ParseErrorKind::Syntax,
                "children must be a mapping of nodes or an alias to the alternatives",
            )),
        }
    }
}

fn triplet(item: &Value) -> Result<PairwiseJudgment, ParseError> {
    let shape_error = || {
        ParseError::new(
            item.span(),
            ParseErrorKind::Syntax,
            "pairwise entries must be [A, B, ratio] triplets",
        )
    };
    let Value::Seq(parts, _) = item else {
        return Err(shape_error());
    };
    let [Value::Scalar(left), Value::Scalar(right), Value::Scalar(ratio)] = parts.as_slice() else {
        return Err(shape_error());
    };
    let value: Ratio = ratio
        .text
        .parse()
        .map_err(|e| ParseError::new(ratio.span, ParseErrorKind::BadRatio, format!("bad ratio: {e}")))?;
    if left.text.is_empty() || right.text.is_empty() {
        return Err(shape_error());
    }
    Ok(PairwiseJudgment::new(left.text.clone(), right.text.clone(), value))
}

fn scalar_text(entry: &Entry) -> Result<String, ParseError> {
    reject_anchor(entry)?;
    match &entry.value {
        Value::Scalar(s) => Ok(s.text.clone()),
        Value::Null(_) => Ok(String::new()),
        other => Err(ParseError::new(
            other.span(),
            ParseErrorKind::Syntax,
            format!("`{}` must be a plain value", entry.key.text),
        )),
    }
}

fn reject_anchor(entry: &Entry) -> Result<(), ParseError> {
    match &entry.anchor {
        Some(anchor) => Err(ParseError::new(
            anchor.span,
            ParseErrorKind::Syntax,
            format!(
                "anchor `&{}` is only supported on the Alternatives section",
                anchor.name
            ),
        )),
        None => Ok(()),
    }
}

fn duplicate_key(entry: &Entry) -> ParseError {
    ParseError::new(
        entry.key.span,
        ParseErrorKind::Syntax,
        format!("duplicate key `{}`", entry.key.text),
    )
}

fn missing(what: &str, span: SourceSpan) -> ParseError {
    ParseError::new(span, ParseErrorKind::MissingSection, format!("missing {what}"))
}
