//! Tolerances and numeric defaults. Every field can be overridden from a
//! curve spec's `config` object.

use serde::{Deserialize, Serialize};

/// Numeric precision tier, selected by `HYPROOTS_PRECISION`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    /// Plain binary64.
    #[default]
    Binary64,
    /// Binary64 roots polished by Newton steps with exact rational residuals.
    Extended,
}

impl Precision {
    pub const ENV: &'static str = "HYPROOTS_PRECISION";

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "binary64" | "double" | "f64" => Some(Precision::Binary64),
            "extended" | "high" => Some(Precision::Extended),
            _ => None,
        }
    }

    pub fn from_env() -> Self {
        std::env::var(Self::ENV).ok().and_then(|v| Self::parse(&v)).unwrap_or_default()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Zero tolerance for numeric discriminant and eigenvalue tests,
    /// relative to the matrix scale.
    pub tau_disc: f64,
    /// Root clustering radius relative to `1 + max|root|`.
    pub eps_cluster: f64,
    /// Relative residual accepted for lifted factorizations.
    pub tau_lift: f64,
    /// Relative residual accepted for solved roots.
    pub tau_root: f64,
    /// Initial ladder step for order estimation, relative to local scale.
    pub ladder_h0: f64,
    pub ladder_rho: f64,
    pub ladder_len: usize,
    /// Values below this (relative) are treated as zero on ladders.
    pub underflow_guard: f64,
    /// Maximal log-log residual accepted by order fits.
    pub tau_fit: f64,
    /// Relative Cauchy defect accepted by the smoothness probe.
    pub tau_probe: f64,
    pub probe_h0: f64,
    pub probe_rho: f64,
    pub probe_len: usize,
    pub q_max: usize,
    /// Relative tolerance under which two matchings count as tied.
    pub tie_tol: f64,
    /// Width of certified critical-point enclosures.
    pub tau_loc: f64,
    pub grid: usize,
    /// Series truncation order for lifting; derived when absent.
    pub truncation: Option<u32>,
    pub precision: Precision,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tau_disc: 2f64.powi(-40),
            eps_cluster: 2f64.powi(-20),
            tau_lift: 2f64.powi(-40),
            tau_root: 1e-10,
            ladder_h0: 2f64.powi(-4),
            ladder_rho: 0.5,
            ladder_len: 24,
            underflow_guard: 2f64.powi(-48),
            tau_fit: 0.05,
            tau_probe: 1e-3,
            probe_h0: 2f64.powi(-3),
            probe_rho: 0.5,
            probe_len: 20,
            q_max: 4,
            tie_tol: 1e-6,
            tau_loc: 2f64.powi(-40),
            grid: 401,
            truncation: None,
            precision: Precision::Binary64,
        }
    }
}

impl Config {
    /// Defaults with the precision tier taken from the environment.
    pub fn from_env() -> Self {
        Config { precision: Precision::from_env(), ..Config::default() }
    }
}
