use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Deserializer};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Noise {
    /// Re-read both operands on every comparison.
    Fresh,
    /// Read each element once per trial.
    PerElement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// Every experiment parameter. Flags and config-file keys share names;
/// whichever commands ignore a parameter simply never read it.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Params {
    /// Built-in function: be, xor, or, and, majority, threshold:<t>, dictator[:<i>], const:<c>
    #[arg(long = "fn", value_name = "NAME")]
    #[serde(rename = "fn")]
    pub function: Option<String>,
    /// Truth-table JSON file, instead of --fn
    #[arg(long, value_name = "PATH")]
    pub table: Option<PathBuf>,
    /// Bit width; a comma-separated list for sweeps
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    #[serde(default, deserialize_with = "one_or_many")]
    pub n: Option<Vec<usize>>,
    /// Array length for sorting experiments
    #[arg(long = "N", value_name = "N")]
    #[serde(rename = "N")]
    pub len: Option<usize>,
    /// Energy budget
    #[arg(long)]
    pub budget: Option<f64>,
    /// Influence estimation mode
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Monte Carlo samples for influence estimation
    #[arg(long)]
    pub samples: Option<u64>,
    /// aware, oblivious, truncated:<k> or uniform:<e>
    #[arg(long)]
    pub scheme: Option<String>,
    /// Trials per instance
    #[arg(long)]
    pub trials: Option<u64>,
    /// Random instances per experiment
    #[arg(long)]
    pub instances: Option<u64>,
    /// Instance JSON file for sort-sim
    #[arg(long, value_name = "PATH")]
    pub instance: Option<PathBuf>,
    /// Truncation factors, or degree caps for learn and fourier
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    #[serde(default, deserialize_with = "one_or_many")]
    pub k: Option<Vec<f64>>,
    /// Training set sizes
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    #[serde(default, deserialize_with = "one_or_many")]
    pub m: Option<Vec<usize>>,
    /// Held-out examples for learn
    #[arg(long)]
    pub test_size: Option<usize>,
    /// Concentration threshold
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Influence ratio bound used to derive k when --k is absent
    #[arg(long)]
    pub beta: Option<f64>,
    /// Influence bound used to derive k when --k is absent
    #[arg(long)]
    pub inf_bound: Option<f64>,
    /// Constant in the good-input thresholds
    #[arg(long)]
    pub c: Option<f64>,
    /// Comparator noise model
    #[arg(long, value_enum)]
    pub noise: Option<Noise>,
    /// RNG seed; drawn at random and reported when absent
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// TOML file with default values for any of these flags
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Config files may name the subcommand they were written for.
    #[arg(skip)]
    pub command: Option<String>,
}

fn one_or_many<'de, D, T>(d: D) -> Result<Option<Vec<T>>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany<T> {
        One(T),
        Many(Vec<T>),
    }
    Ok(match Option::<OneOrMany<T>>::deserialize(d)? {
        None => None,
        Some(OneOrMany::One(v)) => Some(vec![v]),
        Some(OneOrMany::Many(v)) => Some(v),
    })
}

macro_rules! overlay {
    ($top:ident, $base:ident; $($field:ident),*) => {
        Params { $($field: $top.$field.or($base.$field),)* }
    };
}

impl Params {
    /// Loads the `--config` file, if any, underneath the flags.
    pub fn resolve(self, command: &str) -> Result<Params, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = load_config(&path)?;
        if let Some(c) = &file.command {
            if c != command {
                return Err(CliError::Usage(format!(
                    "{}: field `command`: file is for `{c}`, not `{command}`",
                    path.display()
                )));
            }
        }
        Ok(self.over(file))
    }

    fn over(self, base: Params) -> Params {
        overlay!(self, base; function, table, n, len, budget, mode, samples, scheme, trials, instances,
            instance, k, m, test_size, epsilon, beta, inf_bound, c, noise, seed, threads, format, output,
            config, command)
    }
}

pub fn load_config(path: &Path) -> Result<Params, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: cannot read config: {e}", path.display())))?;
    let de = toml::Deserializer::new(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        let msg = inner.message().trim().to_string();
        if field == "." || field.is_empty() {
            CliError::Usage(format!("{}: {msg}", path.display()))
        } else {
            CliError::Usage(format!("{}: field `{field}`: {msg}", path.display()))
        }
    })
}
