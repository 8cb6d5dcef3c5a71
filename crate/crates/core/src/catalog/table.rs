use super::{AttributeCatalogEntry, Category, MetricKind, MetricRecord, MetricValue};

use Category::*;

const fn entry(category: Category, attribute: &'static str, sources: &'static [&'static str]) -> AttributeCatalogEntry {
    AttributeCatalogEntry {
        usability_dimension: category.dimension(),
        category,
        attribute,
        sources,
        conflicts_with: None,
    }
}

// Where a category's reference column lists fewer citations than it has
// attributes, each attribute carries the whole column.
const FUNCTIONALITY_SOURCES: &[&str] = &[
    "Kuligowska (2015)",
    "Eeuwen (2017)",
    "Morrissey & Kirakowski (2013)",
    "Wallace (2003)",
    "Ramos (2017)",
    "Eeuwen (2017)",
    "Solomon (2017)",
    "Cohen & Lane (2016)",
];

const HUMANITY_SOURCES: &[&str] = &[
    "Ramos (2017)",
    "Bostrom & Yudkowski (2014)",
    "Coniam (2014)",
    "Morrissey & Kirakowski (2013)",
];

const AFFECT_SOURCES: &[&str] = &[
    "Morrissey & Kirakowski (2013)",
    "Pauletto et al. (2013)",
    "Solomon (2017)",
    "Eeuwen (2017)",
    "Ramos (2017)",
    "Meira & Canuto (2015)",
];

pub(super) const PASSES_TURING: &str = "Passes the Turing test";
pub(super) const NOT_TURING: &str = "Does not have to pass the Turing Test";

pub(super) static ENTRIES: &[AttributeCatalogEntry] = &[
    entry(Performance, "Graceful degradation", &["Cohen & Lane (2016)"]),
    entry(Performance, "Robustness to manipulation", &["Thieltges (2016)"]),
    entry(Performance, "Robustness to unexpected input", &["Kluwer (2011)"]),
    entry(
        Performance,
        "Avoid inappropriate utterances and be able to perform damage control",
        &["Morrissey and Kirakowski (2013)"],
    ),
    entry(
        Performance,
        "Effective function allocation, provides appropriate escalation channels to humans",
        &["Staven (2017)"],
    ),
    entry(Functionality, "Accurate speech synthesis", FUNCTIONALITY_SOURCES),
    entry(Functionality, "Interprets commands accurately", FUNCTIONALITY_SOURCES),
    entry(
        Functionality,
        "Use appropriate degrees of formality, linguistic register",
        FUNCTIONALITY_SOURCES,
    ),
    entry(Functionality, "Linguistic accuracy of outputs", FUNCTIONALITY_SOURCES),
    entry(Functionality, "Execute requested tasks", FUNCTIONALITY_SOURCES),
    entry(
        Functionality,
        "Facilitate transactions and follows up with status reports",
        FUNCTIONALITY_SOURCES,
    ),
    entry(Functionality, "General ease of use", FUNCTIONALITY_SOURCES),
    entry(
        Functionality,
        "Engage in on-the-fly problem solving",
        FUNCTIONALITY_SOURCES,
    ),
    entry(
        Functionality,
        "Contains breadth of knowledge, is flexible in interpreting it",
        FUNCTIONALITY_SOURCES,
    ),
    AttributeCatalogEntry {
        conflicts_with: Some(NOT_TURING),
        ..entry(Humanity, PASSES_TURING, &["Weizenbaum (1966)", "Wallace (2003)"])
    },
    AttributeCatalogEntry {
        conflicts_with: Some(PASSES_TURING),
        ..entry(Humanity, NOT_TURING, HUMANITY_SOURCES)
    },
    entry(
        Humanity,
        "Transparent to inspection, discloses its chatbot identity",
        HUMANITY_SOURCES,
    ),
    entry(Humanity, "Include errors to increase realism", HUMANITY_SOURCES),
    entry(
        Humanity,
        "Convincing, satisfying, & natural interaction",
        HUMANITY_SOURCES,
    ),
    entry(Humanity, "Able to respond to specific questions", HUMANITY_SOURCES),
    entry(Humanity, "Able to maintain themed discussion", HUMANITY_SOURCES),
    entry(Affect, "Provide greetings, convey personality", AFFECT_SOURCES),
    entry(Affect, "Give conversational cues", AFFECT_SOURCES),
    entry(
        Affect,
        "Provide emotional information through tone, inflection, and expressivity",
        AFFECT_SOURCES,
    ),
    entry(Affect, "Exude warmth and authenticity", AFFECT_SOURCES),
    entry(Affect, "Make tasks more fun and interesting", AFFECT_SOURCES),
    entry(
        Affect,
        "Entertain and/or enable participant to enjoy the interaction",
        AFFECT_SOURCES,
    ),
    entry(Affect, "Read and respond to moods of human participant", AFFECT_SOURCES),
    entry(
        EthicsBehavior,
        "Respect, inclusion, and preservation of dignity (linked to choice of training set)",
        &["Neff & Nagy (2016)"],
    ),
    entry(
        EthicsBehavior,
        "Ethics and cultural knowledge of users",
        &["Applin & Fischer (2015)"],
    ),
    entry(EthicsBehavior, "Protect and respect privacy", &["Eeuwen (2017)"]),
    entry(EthicsBehavior, "Nondeception", &["Isaac & Bridewell (2014)"]),
    entry(
        EthicsBehavior,
        "Sensitivity to safety and social concerns",
        &["Miner et al. (2016)"],
    ),
    entry(
        EthicsBehavior,
        "Trustworthiness (linked to perceived quality)",
        &["Herzum et al. (2002)"],
    ),
    entry(
        EthicsBehavior,
        "Awareness of trends and social context",
        &["Vetter (2002)"],
    ),
    entry(
        Accessibility,
        "Responds to social cues or lack thereof",
        &["Morrissey and Kirakowski (2013)"],
    ),
    entry(Accessibility, "Can detect meaning or intent", &["Wilson et al. (2017)"]),
    entry(
        Accessibility,
        "Meets neurodiverse needs such as extra response time and text interface",
        &["Radziwill & Benton (2017)"],
    ),
];

/// Metric ideas drawn from earlier chatbot quality studies, keyed by source.
/// Documentation only; none of these are computed here.
pub const SUGGESTED_METRICS: &[(&str, &str)] = &[
    (
        "Vetter (2002)",
        "PARADISE performance function: task success against dialogue costs",
    ),
    ("Goh et al. (2007)", "Precision, recall and F1 of answered questions"),
    ("Košir (2013)", "Iterated subjective ratings from multiple evaluators"),
    ("Coniam (2014)", "Grammatical fit and meaning fit of responses"),
    ("Kuligowska (2015)", "Ordinal 1..5 rating per quality attribute"),
    (
        "Meira & Canuto (2015)",
        "Cooperation, likeability, enjoyment, trust, naturalness, believability, interestingness",
    ),
    (
        "Kaleem et al. (2016)",
        "Goal-Question-Metric: pre/post test scores, correct/incorrect responses, time in system",
    ),
];

fn rate(v: f64) -> MetricValue {
    MetricValue::Rate(v)
}

fn range(low: f64, high: f64) -> MetricValue {
    MetricValue::RateRange { low, high }
}

fn scored(mean: f64, stddev: f64) -> MetricValue {
    MetricValue::Scored { mean, stddev }
}

fn record(attribute: &str, metric: &str, kind: MetricKind, old: MetricValue, new: MetricValue) -> MetricRecord {
    MetricRecord {
        attribute: attribute.to_string(),
        metric_name: metric.to_string(),
        kind,
        values: [("OLD".to_string(), old), ("NEW".to_string(), new)]
            .into_iter()
            .collect(),
    }
}

/// The nine measurements collected for the OLD/NEW chatbot comparison,
/// keyed by the leaf names used in the example hierarchy.
pub fn example_metric_records() -> Vec<MetricRecord> {
    use MetricKind::*;
    const SUCCESSES: &str = "% of successes";
    const SCORE: &str = "0 (low) .. 100 (high)";
    vec![
        record(
            "UnexpectedInput",
            SUCCESSES,
            RangeRate,
            range(0.86, 0.92),
            range(0.91, 0.93),
        ),
        record("Escalation", SUCCESSES, SuccessRate, rate(0.80), rate(1.00)),
        record(
            "Transparent",
            "% of users who correctly classify",
            SuccessRate,
            rate(1.00),
            rate(1.00),
        ),
        record(
            "ThemedDiscussion",
            SCORE,
            ScaledScore,
            scored(72.0, 8.0),
            scored(85.0, 12.0),
        ),
        record("SpecificQs", SUCCESSES, RangeRate, range(0.68, 0.82), range(0.80, 0.85)),
        record("Personality", SCORE, ScaledScore, scored(89.0, 3.0), scored(96.0, 3.0)),
        record(
            "Entertaining",
            SCORE,
            ScaledScore,
            scored(50.0, 21.0),
            scored(66.0, 4.0),
        ),
        record(
            "MeaningIntent",
            SUCCESSES,
            RangeRate,
            range(0.85, 0.90),
            range(0.82, 0.86),
        ),
        record("SocialCues", SUCCESSES, SuccessRate, rate(0.78), rate(0.77)),
    ]
}
