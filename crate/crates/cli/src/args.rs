use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sbo_core::SizeFunction;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "sbo", version, about = "Size-biased random orders: sampling, classification, verification, statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample finite prefixes of the size-biased order.
    Sample(SampleArgs),
    /// Report the order type of the infinite order.
    Classify(ClassifyArgs),
    /// Run the exact-identity suite.
    Verify(VerifyArgs),
    /// Records, inversions and the normalized size profile.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sampler {
    Exponential,
    Picks,
    Insertion,
    Scatter,
}

#[derive(Debug, Args)]
pub struct DescriptorArgs {
    /// Descriptor JSON file; excludes --family, --param and --table.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Family name, e.g. geometric, power, karamata_stirling.
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameter, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    pub params: Vec<(String, f64)>,
    /// Comma-separated sizes for the explicit_table family.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub table: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub descriptor: DescriptorArgs,
    /// Prefix length; defaults to the descriptor's truncation default.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "exponential")]
    pub sampler: Sampler,
    /// Emit relative ranks instead of arrangements.
    #[arg(long)]
    pub lehmer: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub descriptor: DescriptorArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random size tuples per identity.
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub descriptor: DescriptorArgs,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_param(raw: &str) -> Result<(String, f64), String> {
    let (key, value) = raw.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got `{raw}`"))?;
    let value: f64 = value.trim().parse().map_err(|_| format!("parameter `{key}` is not a number: `{value}`"))?;
    Ok((key.trim().to_string(), value))
}

impl DescriptorArgs {
    pub fn resolve(&self) -> Result<SizeFunction, CliError> {
        if let Some(path) = &self.config {
            if self.family.is_some() || !self.params.is_empty() || self.table.is_some() {
                return Err(CliError::config("--config excludes --family, --param and --table"));
            }
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
            return SizeFunction::from_json(&text).map_err(|e| CliError::config(format!("invalid descriptor: {e}")));
        }
        let family = self.family.as_deref().ok_or_else(|| CliError::config("one of --family or --config is required"))?;
        let mut params = BTreeMap::new();
        for (key, value) in &self.params {
            if params.insert(key.clone(), *value).is_some() {
                return Err(CliError::config(format!("parameter `{key}` given twice")));
            }
        }
        Ok(SizeFunction::from_parts(family, &params, self.table.clone(), None)?)
    }
}

/// Requested prefix length, checked against finite tables.
pub fn prefix_length(requested: Option<usize>, desc: &SizeFunction) -> Result<usize, CliError> {
    let n = requested.unwrap_or_else(|| desc.truncation_default());
    if n == 0 {
        return Err(CliError::config("--n must be >= 1"));
    }
    if let Some(len) = desc.table_len() {
        if n > len {
            return Err(CliError::config(format!("--n {n} exceeds the table length {len}")));
        }
    }
    Ok(n)
}

pub fn check_replicates(replicates: usize) -> Result<(), CliError> {
    if replicates == 0 {
        Err(CliError::config("--replicates must be >= 1"))
    } else {
        Ok(())
    }
}
