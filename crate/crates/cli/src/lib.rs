//! `ahp` command line: validate, visualize and analyze model files, preview
//! judgment changes, scaffold new models and serve the HTTP API.

use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use ahp_core::catalog::{self, CatalogFilter, Category};
use ahp_core::format::parse_model_with_warnings;
use ahp_core::priority::ACCEPTABLE_CR_LIMIT;
use ahp_core::report::{self, AnalysisFormat, TreeFormat};
use ahp_core::{
    evaluate, serialize_model, validate_model, whatif, AnalysisError, DecisionModel, NodePath, Ratio, ValidationReport,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    ValidationErrors = 1,
    ParseError = 2,
    StrictConsistency = 3,
    Usage = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ahp",
    version,
    about = "Analytic Hierarchy Process decisions from model files"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a model file and list errors and warnings.
    Validate(FileArg),
    /// Draw the decision hierarchy.
    Visualize {
        #[command(flatten)]
        file: FileArg,
        #[arg(long, value_enum, default_value_t = TreeChoice::Ascii)]
        format: TreeChoice,
    },
    /// Compute weights, alternative totals and consistency.
    Analyze {
        #[command(flatten)]
        file: FileArg,
        #[arg(long, value_enum, default_value_t = ReportChoice::Table)]
        format: ReportChoice,
        /// Exit with status 3 when any node's consistency ratio exceeds 20%.
        #[arg(long)]
        strict: bool,
        /// Warn about nodes whose consistency ratio exceeds this percentage.
        #[arg(long, value_name = "PCT", default_value_t = 10.0)]
        warn_threshold: f64,
    },
    /// Preview the effect of changing one judgment.
    Whatif {
        #[command(flatten)]
        file: FileArg,
        /// Slash-separated node path, e.g. `Goal/Performance/Escalation`.
        #[arg(long)]
        node: String,
        /// The judged pair as `A,B`.
        #[arg(long)]
        pair: String,
        /// New value for A over B: `3`, `1/7` or a decimal.
        #[arg(long)]
        value: String,
        #[arg(long, value_enum, default_value_t = WhatIfChoice::Text)]
        format: WhatIfChoice,
    },
    /// Scaffold a model from selected quality attributes.
    Init {
        /// `<category>:<name>`; repeat for every attribute.
        #[arg(long = "attribute", value_name = "CATEGORY:NAME")]
        attributes: Vec<String>,
        /// Comma-separated alternative names.
        #[arg(long, value_name = "A,B,...")]
        alternatives: String,
        /// Title of the decision.
        #[arg(long)]
        name: Option<String>,
        /// Write here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List the built-in quality attribute catalog.
    Catalog {
        #[arg(long)]
        category: Option<String>,
        #[arg(long)]
        dimension: Option<String>,
        #[arg(long)]
        keyword: Option<String>,
    },
    /// Serve the HTTP API (and optionally a UI directory).
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
struct FileArg {
    /// Model file, or `-` for standard input.
    file: PathBuf,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long, env = "AHP_PORT", default_value_t = ahp_server::DEFAULT_PORT)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: IpAddr,
    /// Directory of static UI assets to serve at `/`.
    #[arg(long)]
    ui: Option<PathBuf>,
    /// Restore sessions from this JSON file at startup and save them on exit.
    #[arg(long)]
    snapshot: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TreeChoice {
    Ascii,
    Dot,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportChoice {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WhatIfChoice {
    Text,
    Json,
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
                ExitStatus::Usage
            } else {
                let _ = out.write_all(rendered.as_bytes());
                ExitStatus::Success
            };
        }
    };
    let mut ctx = Ctx { out, err };
    let outcome = match cli.command {
        Command::Validate(file) => ctx.validate(&file.file),
        Command::Visualize { file, format } => ctx.visualize(&file.file, format),
        Command::Analyze {
            file,
            format,
            strict,
            warn_threshold,
        } => ctx.analyze(&file.file, format, strict, warn_threshold),
        Command::Whatif {
            file,
            node,
            pair,
            value,
            format,
        } => ctx.whatif(&file.file, &node, &pair, &value, format),
        Command::Init {
            attributes,
            alternatives,
            name,
            output,
        } => ctx.init(&attributes, &alternatives, name, output.as_deref()),
        Command::Catalog {
            category,
            dimension,
            keyword,
        } => ctx.catalog(category, dimension, keyword),
        Command::Serve(args) => ctx.serve(args),
    };
    match outcome {
        Ok(status) => status,
        Err(Failure(status, message)) => {
            let _ = writeln!(ctx.err, "error: {message}");
            status
        }
    }
}

struct Failure(ExitStatus, String);

fn usage(message: impl Into<String>) -> Failure {
    Failure(ExitStatus::Usage, message.into())
}

type Outcome = Result<ExitStatus, Failure>;

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, text: &str) -> Result<(), Failure> {
        self.out
            .write_all(text.as_bytes())
            .map_err(|e| usage(format!("cannot write output: {e}")))
    }

    fn note(&mut self, line: impl std::fmt::Display) {
        let _ = writeln!(self.err, "{line}");
    }

    /// Reads and parses a model file; parse warnings go to the error stream.
    fn load(&mut self, path: &Path) -> Result<DecisionModel, Failure> {
        let text = read_input(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        match parse_model_with_warnings(&text) {
            Ok(parsed) => {
                for w in &parsed.warnings {
                    self.note(format!(
                        "{}:{}: warning: {}: {}",
                        path.display(),
                        w.span,
                        w.kind,
                        w.message
                    ));
                }
                Ok(parsed.model)
            }
            Err(e) => Err(Failure(
                ExitStatus::ParseError,
                format!("{}:{}: {}: {}", path.display(), e.span, e.kind, e.message),
            )),
        }
    }

    fn warnings(&mut self, report: &ValidationReport) {
        for w in &report.warnings {
            self.note(format!("warning: {w}"));
        }
    }

    fn errors(&mut self, report: &ValidationReport) -> ExitStatus {
        for e in &report.errors {
            self.note(format!("error: {e}"));
        }
        ExitStatus::ValidationErrors
    }

    fn validate(&mut self, path: &Path) -> Outcome {
        let model = self.load(path)?;
        let report = validate_model(&model);
        let mut text = String::new();
        for issue in report.errors.iter() {
            text.push_str(&format!("error: {issue}\n"));
        }
        for issue in report.warnings.iter() {
            text.push_str(&format!("warning: {issue}\n"));
        }
        if report.is_ok() {
            let leaves = model.leaf_paths().len();
            text.push_str(&format!(
                "ok: {} nodes, {leaves} leaf criteria, {} alternatives\n",
                model.goal.subtree_len(),
                model.alternatives.len()
            ));
        }
        self.emit(&text)?;
        Ok(if report.is_ok() {
            ExitStatus::Success
        } else {
            ExitStatus::ValidationErrors
        })
    }

    fn visualize(&mut self, path: &Path, format: TreeChoice) -> Outcome {
        let model = self.load(path)?;
        let report = validate_model(&model);
        if !report.is_ok() {
            return Ok(self.errors(&report));
        }
        self.warnings(&report);
        let format = match format {
            TreeChoice::Ascii => TreeFormat::Ascii,
            TreeChoice::Dot => TreeFormat::Dot,
        };
        self.emit(&report::render_tree(&model, format))?;
        Ok(ExitStatus::Success)
    }

    fn evaluate(&mut self, model: &DecisionModel) -> Result<ahp_core::AnalysisResult, ExitStatus> {
        let report = validate_model(model);
        if !report.is_ok() {
            return Err(self.errors(&report));
        }
        self.warnings(&report);
        evaluate(model).map_err(|e| {
            self.note(format!("error: {} {e}", e.code()));
            ExitStatus::ValidationErrors
        })
    }

    fn analyze(&mut self, path: &Path, format: ReportChoice, strict: bool, warn_threshold: f64) -> Outcome {
        if warn_threshold.is_nan() || warn_threshold < 0.0 {
            return Err(usage("--warn-threshold must be a non-negative percentage"));
        }
        let model = self.load(path)?;
        let result = match self.evaluate(&model) {
            Ok(result) => result,
            Err(status) => return Ok(status),
        };
        let format = match format {
            ReportChoice::Table => AnalysisFormat::Table,
            ReportChoice::Json => AnalysisFormat::Json,
            ReportChoice::Csv => AnalysisFormat::Csv,
        };
        self.emit(&report::render_report(&result, format))?;

        let mut over_limit = false;
        for row in &result.rows {
            if row.consistency_ratio * 100.0 > warn_threshold {
                self.note(format!(
                    "warning: {} consistency ratio {} exceeds {warn_threshold}%",
                    row.path,
                    report::percent(row.consistency_ratio)
                ));
            }
            over_limit |= row.consistency_ratio > ACCEPTABLE_CR_LIMIT;
        }
        if strict && over_limit {
            self.note("error: --strict: at least one node's consistency ratio exceeds 20%");
            return Ok(ExitStatus::StrictConsistency);
        }
        Ok(ExitStatus::Success)
    }

    fn whatif(&mut self, path: &Path, node: &str, pair: &str, value: &str, format: WhatIfChoice) -> Outcome {
        let node_path: NodePath = node.parse().map_err(|_| usage(format!("bad node path `{node}`")))?;
        let (left, right) = pair
            .split_once(',')
            .map(|(a, b)| (a.trim(), b.trim()))
            .filter(|(a, b)| !a.is_empty() && !b.is_empty() && !b.contains(','))
            .ok_or_else(|| usage(format!("--pair expects `A,B`, got `{pair}`")))?;
        let value: Ratio = value.parse().map_err(|e| usage(format!("--value: {e}")))?;
        let model = self.load(path)?;
        if let Err(status) = self.evaluate(&model) {
            return Ok(status);
        }
        let delta = match whatif(&model, &node_path, (left, right), value) {
            Ok(delta) => delta,
            Err(
                e @ (AnalysisError::UnknownPath(_) | AnalysisError::UnknownPair { .. } | AnalysisError::BadValue(_)),
            ) => return Err(usage(e.to_string())),
            Err(e) => return Err(Failure(ExitStatus::ValidationErrors, format!("{} {e}", e.code()))),
        };
        let text = match format {
            WhatIfChoice::Text => report::render_whatif(&delta),
            WhatIfChoice::Json => {
                let mut s = serde_json::to_string_pretty(&delta).expect("delta serializes");
                s.push('\n');
                s
            }
        };
        self.emit(&text)?;
        Ok(ExitStatus::Success)
    }

    fn init(
        &mut self,
        attributes: &[String],
        alternatives: &str,
        name: Option<String>,
        output: Option<&Path>,
    ) -> Outcome {
        let mut selection = Vec::new();
        for spec in attributes {
            let (category, attribute) = spec
                .split_once(':')
                .ok_or_else(|| usage(format!("--attribute expects `category:name`, got `{spec}`")))?;
            if category.trim().parse::<Category>().is_err() {
                self.note(format!("warning: `{}` is not a catalog category", category.trim()));
            }
            selection.push((category.to_string(), attribute.to_string()));
        }
        let alternatives: Vec<&str> = alternatives.split(',').map(str::trim).collect();
        let mut model = catalog::scaffold_model(&selection, &alternatives).map_err(|e| usage(e.to_string()))?;
        if let Some(name) = name {
            model.metadata.name = name;
        }
        let text = serialize_model(&model);
        match output {
            Some(path) => {
                std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
                self.note(format!("wrote {}", path.display()));
            }
            None => self.emit(&text)?,
        }
        Ok(ExitStatus::Success)
    }

    fn catalog(&mut self, category: Option<String>, dimension: Option<String>, keyword: Option<String>) -> Outcome {
        let filter = CatalogFilter {
            category: category
                .map(|c| c.parse())
                .transpose()
                .map_err(|e: catalog::CatalogError| usage(e.to_string()))?,
            dimension: dimension
                .map(|d| d.parse())
                .transpose()
                .map_err(|e: catalog::CatalogError| usage(e.to_string()))?,
            keyword,
        };
        let mut text = String::new();
        for entry in catalog::catalog_entries(&filter) {
            text.push_str(&format!(
                "{:?}\t{}\t{}\t{}\n",
                entry.usability_dimension,
                entry.category,
                entry.attribute,
                entry.sources.join("; ")
            ));
        }
        self.emit(&text)?;
        Ok(ExitStatus::Success)
    }

    fn serve(&mut self, args: ServeArgs) -> Outcome {
        let config = ahp_server::ServeConfig {
            addr: SocketAddr::new(args.host, args.port),
            ui_dir: args.ui,
            snapshot: args.snapshot,
        };
        let runtime = tokio::runtime::Runtime::new().map_err(|e| usage(format!("cannot start runtime: {e}")))?;
        runtime
            .block_on(ahp_server::serve(config))
            .map_err(|e| usage(format!("server: {e}")))?;
        Ok(ExitStatus::Success)
    }
}

fn read_input(path: &Path) -> io::Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path)
    }
}
