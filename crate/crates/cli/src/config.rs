//! Run configurations, one TOML schema per subcommand.
//!
//! Every file is a flat table of keys. Keys that the chosen command (and,
//! for sweeps, the chosen observable) does not use are rejected.

use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantizeConfig {
    pub poly: String,
    #[serde(default = "one")]
    pub sites: usize,
    pub two_j: u32,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Dgr,
    Product,
    NormGap,
    CwDefect,
    NormLimit,
    ClassicalLimit,
}

impl SweepKind {
    /// Keys accepted alongside `observable` and the shared sweep keys.
    fn keys(self) -> &'static [&'static str] {
        match self {
            SweepKind::Dgr | SweepKind::Product => &["f", "g", "sites"],
            SweepKind::NormGap => &["f", "sites"],
            SweepKind::CwDefect => &["b"],
            SweepKind::NormLimit => &["model", "d", "b"],
            SweepKind::ClassicalLimit => &["family", "f", "theta", "phi", "symbol", "beta"],
        }
    }
}

const SWEEP_SHARED: [&str; 8] =
    ["observable", "range", "step", "fit", "fit_expect", "fit_tolerance", "out", "format"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    Ising,
    Heisenberg,
    CurieWeiss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Coherent,
    Gibbs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub observable: SweepKind,
    /// Inclusive `[first, last]` of `two_j` (or of `d` for Curie–Weiss).
    pub range: [u32; 2],
    pub step: Option<u32>,
    pub f: Option<String>,
    pub g: Option<String>,
    pub sites: Option<usize>,
    pub b: Option<f64>,
    pub model: Option<ModelName>,
    pub d: Option<usize>,
    pub family: Option<FamilyName>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub symbol: Option<String>,
    pub beta: Option<f64>,
    /// Column to fit; defect observables fit their main column by default.
    pub fit: Option<String>,
    /// With `--check`, fail unless `|exponent - fit_expect| <= fit_tolerance`.
    pub fit_expect: Option<f64>,
    pub fit_tolerance: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl SweepConfig {
    pub fn values(&self) -> Result<Vec<u32>, CliError> {
        let [first, last] = self.range;
        let step = self.step.unwrap_or(1);
        if step == 0 {
            return Err(CliError::Input("step must be positive".into()));
        }
        let values: Vec<u32> = (first..=last).step_by(step as usize).collect();
        if values.is_empty() {
            return Err(CliError::Input(format!("range [{first}, {last}] is empty")));
        }
        Ok(values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KmsMode {
    /// Gibbs state of one random Hamiltonian.
    Gibbs,
    /// Product of two Gibbs states under the diagonal flow.
    Product,
    /// Maximally mixed state against a random Hamiltonian; not KMS.
    Mixed,
}

fn default_samples() -> usize {
    20
}

fn default_times() -> Vec<f64> {
    vec![0.0, 0.5, 1.0]
}

fn default_kms_tolerance() -> f64 {
    1e-9
}

fn default_factorization_tolerance() -> f64 {
    1e-12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KmsConfig {
    pub mode: KmsMode,
    /// One dimension, or two for `product`.
    pub dims: Vec<usize>,
    pub beta: f64,
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_times")]
    pub times: Vec<f64>,
    #[serde(default = "default_kms_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_factorization_tolerance")]
    pub factorization_tolerance: f64,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

fn default_resolvent_tolerance() -> f64 {
    1e-8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolventConfig {
    /// Diagonal of `H1`; exclusive with `h1` and `random_dims`.
    pub h1_diag: Option<Vec<f64>>,
    pub h2_diag: Option<Vec<f64>>,
    /// Real symmetric `H1` by rows.
    pub h1: Option<Vec<Vec<f64>>>,
    pub h2: Option<Vec<Vec<f64>>>,
    /// Random Hermitian pair of these sizes, drawn from `seed`.
    pub random_dims: Option<[usize; 2]>,
    pub seed: Option<u64>,
    pub lambda: f64,
    pub nodes: Vec<usize>,
    #[serde(default = "default_resolvent_tolerance")]
    pub tolerance: f64,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

fn parse_table(text: &str) -> Result<toml::Table, CliError> {
    text.parse::<toml::Table>().map_err(|e| CliError::Input(format!("invalid config: {e}")))
}

fn from_table<T: DeserializeOwned>(table: toml::Table) -> Result<T, CliError> {
    T::deserialize(toml::Value::Table(table)).map_err(|e| CliError::Input(format!("invalid config: {e}")))
}

pub fn parse_config<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    from_table(parse_table(text)?)
}

/// Sweep configs are validated against the key set of their observable.
pub fn parse_sweep_config(text: &str) -> Result<SweepConfig, CliError> {
    let table = parse_table(text)?;
    let kind: SweepKind = match table.get("observable") {
        Some(v) => v.clone().try_into().map_err(|_| {
            CliError::Input(format!(
                "invalid observable {v}; expected one of dgr, product, norm_gap, cw_defect, norm_limit, classical_limit"
            ))
        })?,
        None => return Err(CliError::Input("invalid config: missing key `observable`".into())),
    };
    let allowed: BTreeSet<&str> = SWEEP_SHARED.iter().chain(kind.keys()).copied().collect();
    if let Some(key) = table.keys().find(|k| !allowed.contains(k.as_str())) {
        return Err(CliError::Input(format!("invalid config: key `{key}` does not apply to observable {kind:?}")));
    }
    from_table(table)
}
