//! Run settings shared by the config file and the command-line flags.
//!
//! A config file is flat `key = value` text; `#` starts a comment. Every key
//! is also a flag (`row_sample` is `--row-sample`) and flags win.

use std::path::{Path, PathBuf};

use advmatch_core::adversary::StrategyKind;
use advmatch_core::AlphabetDistribution;

use crate::error::{CliError, Result};
use crate::grid::{Grid, List};

macro_rules! settings {
    ($( $(#[doc = $doc:literal])* $field:ident : $ty:ty ),* $(,)?) => {
        #[derive(Debug, Default, Clone, clap::Args)]
        pub struct Settings {
            $( $(#[doc = $doc])* #[arg(long)] pub $field: Option<$ty>, )*
        }

        impl Settings {
            pub const KEYS: &'static [&'static str] = &[$(stringify!($field)),*];

            /// Parses `value` into the field named `key`.
            pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
                match key {
                    $(stringify!($field) => {
                        self.$field = Some(
                            value.parse::<$ty>().map_err(|e| CliError::config(key, e.to_string()))?,
                        );
                    })*
                    _ => return Err(CliError::config(key, "unknown key")),
                }
                Ok(())
            }

            /// Fields of `self`, falling back to `base` where unset.
            pub fn or(self, base: Settings) -> Settings {
                Settings { $( $field: self.$field.or(base.$field), )* }
            }

            pub fn present(&self) -> Vec<&'static str> {
                let mut keys = Vec::new();
                $( if self.$field.is_some() { keys.push(stringify!($field)); } )*
                keys
            }
        }
    };
}

settings! {
    /// Symbol law: `uniform:k` or comma-separated probabilities
    dist: AlphabetDistribution,
    /// Column count(s)
    n: Grid,
    /// Growth rate(s) R in bits per column; rows = ceil(2^(nR))
    rate: Grid,
    /// Explicit row count(s), instead of a rate
    rows: Grid,
    /// Deletion budget(s) as a fraction of columns
    delta: Grid,
    /// Adversary: random, min_pair, greedy_cover or exhaustive (comma list in sweeps)
    strategy: List<StrategyKind>,
    /// Trials per cell
    trials: u64,
    /// Master seed
    seed: u64,
    /// Estimate the vulnerable fraction from this many sampled rows
    row_sample: usize,
    /// Largest database, in entries
    memory_cap: u64,
    /// Largest number of patterns the exhaustive adversary may evaluate
    exhaustive_budget: u128,
    /// Row count above which min-pair search samples pairs
    pair_scan_limit: usize,
    /// Pairs drawn by sampled min-pair search
    sampled_pairs: u64,
    /// Worker threads (default: ADVMATCH_WORKERS, else one per core)
    workers: usize,
    /// Write the CSV here instead of stdout
    output: PathBuf,
    /// Directory to persist each trial's databases and ground truth
    save_db: PathBuf,
    /// CSV file to estimate a symbol law from
    input: PathBuf,
    /// Comma list of column names to pool
    columns: List<String>,
    /// Largest number of distinct values accepted by ingest
    max_distinct: usize,
}

impl Settings {
    pub fn parse_config(text: &str, path: &Path) -> Result<Settings> {
        let mut out = Settings::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CliError::ConfigFile {
                path: path.to_owned(),
                line: idx + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found `{line}`")))?;
            let key = key.trim().replace('-', "_");
            if out.present().contains(&key.as_str()) {
                return Err(err(format!("`{key}` given twice")));
            }
            out.set(&key, value.trim())
                .map_err(|e| err(e.to_string()))?;
        }
        Ok(out)
    }

    pub fn load_config(path: &Path) -> Result<Settings> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse_config(&text, path)
    }

    /// Rejects keys the command does not use, naming the first one.
    pub fn only(&self, command: &str, allowed: &[&str]) -> Result<()> {
        match self.present().into_iter().find(|k| !allowed.contains(k)) {
            Some(k) => Err(CliError::config(k, format!("not used by `{command}`"))),
            None => Ok(()),
        }
    }

    pub fn require<'a, T>(field: &'a Option<T>, key: &str) -> Result<&'a T> {
        field
            .as_ref()
            .ok_or_else(|| CliError::config(key, "required but not given"))
    }
}
