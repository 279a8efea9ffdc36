//! Optional TOML configuration, overridden by command-line flags.
//!
//! ```toml
//! seed = 42                 # random-sample seed (fixed default otherwise)
//! budget_degree = 2000      # largest level-action degree n^m
//! precision_digits = 50     # decimal digits for logarithms
//! n = "3..8"                # default n-range for range commands
//! levels = 2                # default quotient levels
//!
//! [verify]                  # sample sizes for the verification suite
//! contraction_words = 10000
//! parity_words = 10000
//! ```

use std::path::Path;

use gngroup::verify::VerifyOptions;
use serde::Deserialize;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: Option<u64>,
    pub budget_degree: Option<usize>,
    pub precision_digits: Option<usize>,
    pub n: Option<String>,
    pub levels: Option<usize>,
    pub verify: Option<VerifyOptions>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

/// Parses `6`, `3..8` (inclusive), `3..=8` or `3,5,7`.
pub fn parse_range(text: &str) -> Result<Vec<usize>, String> {
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid n value {s:?}"))
    };
    let ns: Vec<usize> = if let Some((a, b)) = text.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        (num(a)?..=num(b)?).collect()
    } else {
        text.split(',').map(num).collect::<Result<_, _>>()?
    };
    match ns.iter().find(|&&n| n < 3) {
        _ if ns.is_empty() => Err(format!("empty n range {text:?}")),
        Some(n) => Err(format!("n must be at least 3, got {n}")),
        None => Ok(ns),
    }
}
