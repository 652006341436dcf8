//! Flags shared by several subcommands and their value parsers.

use std::f64::consts::FRAC_PI_4;

use clap::{Args, ValueEnum};
use ipower_core::estimation::{NoiseSpec, DEFAULT_NU};
use ipower_core::probes::ProbeFamily;

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

/// Ensemble size, noise and seed of a simulated experiment.
#[derive(Args, Debug, Clone)]
pub struct RunOptions {
    /// True phase φ₀ in radians.
    #[arg(long, default_value_t = FRAC_PI_4, allow_hyphen_values = true)]
    pub phi_true: f64,
    /// Ensemble size ν; accepts integer or scientific notation.
    #[arg(long, default_value_t = DEFAULT_NU, value_parser = parse_count)]
    pub nu: u64,
    /// Relative width of the Gaussian population noise; 0 is exact mode.
    #[arg(long, default_value_t = 0.0, value_parser = parse_non_negative)]
    pub noise: f64,
    /// Root seed of the noise generator.
    #[arg(long, env = "IPOWER_SEED", default_value_t = 0)]
    pub seed: u64,
}

impl RunOptions {
    pub fn noise(&self, seed: u64) -> NoiseSpec {
        NoiseSpec::gaussian(self.noise, seed)
    }
}

/// A probe label with its parameters.
#[derive(Args, Debug, Clone)]
pub struct ProbeOptions {
    /// Probe family: Q, C, werner, belldiag, sep or bell.
    #[arg(long, default_value = "Q")]
    pub probe: String,
    /// Family parameters (p, f or c1,c2,c3).
    #[arg(long = "param", alias = "p", value_delimiter = ',', allow_hyphen_values = true, default_values_t = [1.0])]
    pub params: Vec<f64>,
    /// Black-box setting k.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub setting: u8,
}

impl ProbeOptions {
    pub fn family(&self) -> CliResult<ProbeFamily> {
        ProbeFamily::from_label(&self.probe, &self.params).map_err(|e| CliError::config("--probe", e))
    }
}

pub fn parse_count(s: &str) -> Result<u64, String> {
    let v = match s.parse::<u64>() {
        Ok(v) => v,
        Err(_) => {
            let x: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
            if !x.is_finite() || x.fract() != 0.0 || x < 0.0 || x > u64::MAX as f64 {
                return Err(format!("'{s}' is not a whole number"));
            }
            x as u64
        }
    };
    if v == 0 {
        return Err("must be at least 1".into());
    }
    Ok(v)
}

pub fn parse_non_negative(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if x.is_finite() && x >= 0.0 {
        Ok(x)
    } else {
        Err("must be a finite number >= 0".into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("1e15"), Ok(1_000_000_000_000_000));
        assert_eq!(parse_count("42"), Ok(42));
        assert!(parse_count("0").is_err());
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn noise_width() {
        assert_eq!(parse_non_negative("0.05"), Ok(0.05));
        assert!(parse_non_negative("-0.1").is_err());
        assert!(parse_non_negative("nan").is_err());
    }
}
