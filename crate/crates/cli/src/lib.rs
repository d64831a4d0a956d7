//! Request parsing, dispatch and rendering for the `gwa` binary.

mod commands;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};
use thiserror::Error;

pub use commands::run;

/// Default bit precision for numeric root isolation.
pub const DEFAULT_PRECISION_BITS: u32 = 128;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input: grammar errors, missing operands, bad config.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] gwa_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Domain(gwa_core::Error::Parse { .. }) => 2,
            CliError::Domain(_) => 1,
        }
    }

    /// Variant name of the underlying error.
    pub fn kind(&self) -> String {
        match self {
            CliError::Usage(_) => "Usage".into(),
            CliError::Domain(e) => {
                let dbg = format!("{e:?}");
                dbg.split(|c: char| !c.is_alphanumeric())
                    .next()
                    .unwrap_or("")
                    .to_string()
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let mut err = Map::new();
        err.insert("kind".into(), Value::String(self.kind()));
        err.insert("message".into(), Value::String(self.to_string()));
        if let CliError::Domain(gwa_core::Error::Parse { start, end, .. }) = self {
            err.insert("span".into(), Value::from(vec![*start, *end]));
        }
        let mut out = Map::new();
        out.insert("error".into(), Value::Object(err));
        Value::Object(out)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "gwa",
    version,
    about = "Computations in classical generalized Weyl algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Flat TOML file with defaults such as `a = "z^2"` and `output = "json"`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Operands {
    /// Defining polynomial `a(z)`.
    #[arg(long)]
    pub a: Option<String>,
    /// Automorphism word; repeat for several.
    #[arg(long = "g")]
    pub g: Vec<String>,
    #[arg(long)]
    pub lhs: Option<String>,
    #[arg(long)]
    pub rhs: Option<String>,
    #[arg(long)]
    pub elem: Option<String>,
    /// Group order `ℓ`.
    #[arg(long)]
    pub order: Option<i64>,
    /// Prime for `charp-check`.
    #[arg(long)]
    pub p: Option<u64>,
    /// Certificate file to check instead of building one.
    #[arg(long)]
    pub verify: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Move a root of `a` to 0 and make `a` monic.
    Normalize(Operands),
    /// Product `lhs * rhs`.
    Mul(Operands),
    /// Image of `elem` under `g`.
    Apply(Operands),
    /// Composite of the given maps, outermost first.
    Compose(Operands),
    /// Order of `g`.
    Order(Operands),
    /// Canonical form of a filtered `g`.
    Canonical(Operands),
    /// Whether `g` preserves the standard filtration.
    IsFiltered(Operands),
    /// Reflection point of `a`, if any.
    Reflective(Operands),
    /// Homological determinant of a filtered `g`.
    Hdet(Operands),
    /// Relations among the generating automorphisms on sample parameters.
    CheckRelations(Operands),
    /// Finite group generated by the given maps (`deg a >= 3`).
    ClassifyGroup(Operands),
    /// Basis on which `g` acts diagonally (`deg a <= 2`).
    Diagonalize(Operands),
    /// Fixed ring of `<g>`, or of `<theta(zeta(order))>` with `--order`.
    FixedRing(Operands),
    /// Global dimension of `R`.
    Gldim(Operands),
    /// Global dimension of the fixed ring for a group of order `--order`.
    GldimFixed(Operands),
    /// Calabi-Yau property, of the fixed ring when `--order` is given.
    CalabiYau(Operands),
    /// Pertinency certificate for `<g>`, or check one with `--verify`.
    AuslanderWitness(Operands),
    /// Centrality of `x^p`, `y^p` over the prime field.
    CharpCheck(Operands),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Normalize(_) => "normalize",
            Command::Mul(_) => "mul",
            Command::Apply(_) => "apply",
            Command::Compose(_) => "compose",
            Command::Order(_) => "order",
            Command::Canonical(_) => "canonical",
            Command::IsFiltered(_) => "is-filtered",
            Command::Reflective(_) => "reflective",
            Command::Hdet(_) => "hdet",
            Command::CheckRelations(_) => "check-relations",
            Command::ClassifyGroup(_) => "classify-group",
            Command::Diagonalize(_) => "diagonalize",
            Command::FixedRing(_) => "fixed-ring",
            Command::Gldim(_) => "gldim",
            Command::GldimFixed(_) => "gldim-fixed",
            Command::CalabiYau(_) => "calabi-yau",
            Command::AuslanderWitness(_) => "auslander-witness",
            Command::CharpCheck(_) => "charp-check",
        }
    }

    pub fn operands(&self) -> &Operands {
        match self {
            Command::Normalize(o)
            | Command::Mul(o)
            | Command::Apply(o)
            | Command::Compose(o)
            | Command::Order(o)
            | Command::Canonical(o)
            | Command::IsFiltered(o)
            | Command::Reflective(o)
            | Command::Hdet(o)
            | Command::CheckRelations(o)
            | Command::ClassifyGroup(o)
            | Command::Diagonalize(o)
            | Command::FixedRing(o)
            | Command::Gldim(o)
            | Command::GldimFixed(o)
            | Command::CalabiYau(o)
            | Command::AuslanderWitness(o)
            | Command::CharpCheck(o) => o,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    Text,
    Json,
}

/// A fully resolved invocation.
#[derive(Debug, Clone)]
pub struct Request {
    pub command: Command,
    /// Defining polynomial source, after config defaults.
    pub a: Option<String>,
    pub mode: OutputMode,
    pub precision_bits: u32,
}

/// Merges flags with an optional config document; inline flags win.
pub fn parse_request(cli: Cli, config: Option<&str>) -> Result<Request, CliError> {
    let mut a = None;
    let mut mode = OutputMode::Text;
    if let Some(src) = config {
        let table: toml::Table = src
            .parse()
            .map_err(|e| CliError::Usage(format!("config: {e}")))?;
        for (key, value) in &table {
            match (key.as_str(), value) {
                ("a", toml::Value::String(s)) => a = Some(s.clone()),
                ("output", toml::Value::String(s)) if s == "json" => mode = OutputMode::Json,
                ("output", toml::Value::String(s)) if s == "text" => mode = OutputMode::Text,
                ("json", toml::Value::Boolean(b)) => {
                    mode = if *b {
                        OutputMode::Json
                    } else {
                        OutputMode::Text
                    }
                }
                _ => {
                    return Err(CliError::Usage(format!(
                        "config: unsupported entry `{key}`"
                    )))
                }
            }
        }
    }
    if let Some(s) = &cli.command.operands().a {
        a = Some(s.clone());
    }
    if cli.json {
        mode = OutputMode::Json;
    }
    let precision_bits = match std::env::var("GWA_PRECISION_BITS") {
        Ok(s) => s.parse().map_err(|_| {
            CliError::Usage(format!(
                "GWA_PRECISION_BITS must be a positive integer, got `{s}`"
            ))
        })?,
        Err(_) => DEFAULT_PRECISION_BITS,
    };
    Ok(Request {
        command: cli.command,
        a,
        mode,
        precision_bits,
    })
}

/// Outcome of a command in both renderings.
#[derive(Debug, Clone)]
pub struct Response {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub result: Value,
    pub text: String,
}

/// Text, or pretty JSON with sorted keys.
pub fn render(resp: &Response, mode: OutputMode) -> String {
    match mode {
        OutputMode::Text => {
            let mut s = resp.text.clone();
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
        OutputMode::Json => {
            let mut doc = Map::new();
            doc.insert("command".into(), Value::String(resp.command.clone()));
            doc.insert("inputs".into(), Value::Object(resp.inputs.clone()));
            doc.insert("result".into(), resp.result.clone());
            let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
            s.push('\n');
            s
        }
    }
}
