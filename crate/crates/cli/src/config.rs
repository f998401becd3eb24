//! Run configuration: a JSON file, command-line flags, or both.
//!
//! Flags override file values field by field. A JSON report written by a
//! previous run is itself a valid configuration file, since it carries the
//! `command`, `params` and `output` keys and unknown top-level keys are
//! ignored.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    ConeSolve,
    ModelTable,
    InterpError,
    Newton,
    Coercivity,
    SpinVerify,
    Bounds,
    Distance,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::ConeSolve => "cone-solve",
            Command::ModelTable => "model-table",
            Command::InterpError => "interp-error",
            Command::Newton => "newton",
            Command::Coercivity => "coercivity",
            Command::SpinVerify => "spin-verify",
            Command::Bounds => "bounds",
            Command::Distance => "distance",
        }
    }

    pub const ALL: [Command; 8] = [
        Command::ConeSolve,
        Command::ModelTable,
        Command::InterpError,
        Command::Newton,
        Command::Coercivity,
        Command::SpinVerify,
        Command::Bounds,
        Command::Distance,
    ];
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Accepts either a scalar or a list in JSON; always written as a list.
mod one_or_many {
    use serde::{Deserialize, Deserializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany<T> {
        One(T),
        Many(Vec<T>),
    }

    pub fn deserialize<'de, D, T>(d: D) -> Result<Option<Vec<T>>, D::Error>
    where
        D: Deserializer<'de>,
        T: Deserialize<'de>,
    {
        Ok(Option::<OneOrMany<T>>::deserialize(d)?.map(|v| match v {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(xs) => xs,
        }))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        deserialize_with = "one_or_many::deserialize"
    )]
    pub l: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(
        rename = "U",
        skip_serializing_if = "Option::is_none",
        deserialize_with = "one_or_many::deserialize"
    )]
    pub u: Option<Vec<f64>>,
    #[serde(
        rename = "U_max",
        skip_serializing_if = "Option::is_none",
        deserialize_with = "one_or_many::deserialize"
    )]
    pub u_max: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        deserialize_with = "one_or_many::deserialize"
    )]
    pub nodes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub guard: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin_cases: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
    #[serde(rename = "iM", skip_serializing_if = "Option::is_none")]
    pub i_m: Option<f64>,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub big_a: Option<f64>,
    #[serde(rename = "A1", skip_serializing_if = "Option::is_none")]
    pub a1: Option<f64>,
    #[serde(rename = "A2", skip_serializing_if = "Option::is_none")]
    pub a2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<bool>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($field:ident),*) => {
        $(if $src.$field.is_some() { $dst.$field = $src.$field.clone(); })*
    };
}

impl Params {
    /// Fields set in `over` replace those in `self`.
    pub fn overlay(&mut self, over: &Params) {
        overlay!(self, over; n, l, a, u, u_max, alpha, nodes, scheme, guard, tol, seed, cases,
            spin_cases, pairs, cutoff, i_m, big_a, a1, a2, grid);
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OutputSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub output: OutputSpec,
}

/// File contents before the command is known to be present.
#[derive(Clone, Debug, Default, Deserialize)]
pub struct PartialConfig {
    pub command: Option<Command>,
    #[serde(default)]
    pub params: Params,
    pub output: Option<OutputSpec>,
}

pub fn load_config(path: &Path) -> Result<PartialConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}
