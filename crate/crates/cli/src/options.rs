//! Flags and the JSON config file share one schema; flags win.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Deserializer};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Options {
    /// Channel transmissivity; repeat for several values
    #[arg(long = "T", global = true, value_name = "T")]
    #[serde(rename = "T", deserialize_with = "one_or_many")]
    pub t: Vec<f64>,

    /// Thermal variance of Eve's ancillas (SNU)
    #[arg(long, global = true)]
    pub omega: Option<f64>,

    /// Custom q-quadrature correlation
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub g: Option<f64>,

    /// Custom p-quadrature correlation
    #[arg(long = "g-prime", global = true, allow_hyphen_values = true)]
    pub g_prime: Option<f64>,

    /// Attack class (collective, epr+, epr-, sep-sym+, sep-sym-, sep-anti+, sep-anti-, a-d); repeatable or comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    #[serde(deserialize_with = "one_or_many")]
    pub attack: Vec<String>,

    /// Gaussian modulation variance [default: 1e6]
    #[arg(long, global = true)]
    pub mu: Option<f64>,

    /// Grid step of the (g, g') scan [default: 0.05]
    #[arg(long, global = true)]
    pub step: Option<f64>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// JSON file with default settings
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Add the one-way baseline to the threshold curves
    #[arg(long = "with-oneway", global = true)]
    pub with_oneway: bool,

    /// Emit every scanned grid point, not only the minimiser
    #[arg(long = "full-grid", global = true)]
    pub full_grid: bool,

    /// [default: 0.3]
    #[arg(long = "t-min", global = true)]
    pub t_min: Option<f64>,

    /// [default: 0.99]
    #[arg(long = "t-max", global = true)]
    pub t_max: Option<f64>,

    /// [default: 0.01]
    #[arg(long = "t-step", global = true)]
    pub t_step: Option<f64>,

    /// [default: 1]
    #[arg(long = "omega-min", global = true)]
    pub omega_min: Option<f64>,

    /// [default: 5]
    #[arg(long = "omega-max", global = true)]
    pub omega_max: Option<f64>,

    /// [default: 0.5]
    #[arg(long = "omega-step", global = true)]
    pub omega_step: Option<f64>,
}

impl Options {
    /// Fills every unset flag from `file`.
    pub fn merged_with(self, file: Options) -> Options {
        fn list<T>(flag: Vec<T>, file: Vec<T>) -> Vec<T> {
            if flag.is_empty() {
                file
            } else {
                flag
            }
        }
        Options {
            t: list(self.t, file.t),
            omega: self.omega.or(file.omega),
            g: self.g.or(file.g),
            g_prime: self.g_prime.or(file.g_prime),
            attack: list(self.attack, file.attack),
            mu: self.mu.or(file.mu),
            step: self.step.or(file.step),
            format: self.format.or(file.format),
            output: self.output.or(file.output),
            config: self.config,
            with_oneway: self.with_oneway || file.with_oneway,
            full_grid: self.full_grid || file.full_grid,
            t_min: self.t_min.or(file.t_min),
            t_max: self.t_max.or(file.t_max),
            t_step: self.t_step.or(file.t_step),
            omega_min: self.omega_min.or(file.omega_min),
            omega_max: self.omega_max.or(file.omega_max),
            omega_step: self.omega_step.or(file.omega_step),
        }
    }

    pub fn resolve(self) -> Result<Options, CliError> {
        match self.config.clone() {
            Some(path) => Ok(self.merged_with(load_config(&path)?)),
            None => Ok(self),
        }
    }
}

pub fn load_config(path: &Path) -> Result<Options, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

fn one_or_many<'de, D, T>(deserializer: D) -> Result<Vec<T>, D::Error>
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
    Ok(match OneOrMany::deserialize(deserializer)? {
        OneOrMany::One(x) => vec![x],
        OneOrMany::Many(v) => v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_accepts_scalars_and_lists() {
        let o: Options = serde_json::from_str(
            r#"{"T": 0.9, "attack": ["a", "d"], "g-prime": -1, "with-oneway": true}"#,
        )
        .unwrap();
        assert_eq!(o.t, vec![0.9]);
        assert_eq!(o.attack, vec!["a", "d"]);
        assert_eq!(o.g_prime, Some(-1.0));
        assert!(o.with_oneway);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        assert!(serde_json::from_str::<Options>(r#"{"temperature": 1}"#).is_err());
    }

    #[test]
    fn flags_override_file() {
        let flags = Options {
            omega: Some(2.0),
            ..Default::default()
        };
        let file = Options {
            omega: Some(3.0),
            mu: Some(1e5),
            t: vec![0.5],
            ..Default::default()
        };
        let o = flags.merged_with(file);
        assert_eq!((o.omega, o.mu, o.t), (Some(2.0), Some(1e5), vec![0.5]));
    }
}
