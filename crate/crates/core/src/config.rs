//! Pipeline configuration, stored as flat `key = value` text.
//!
//! ```text
//! # kgx.conf
//! stopwords_path = data/stopwords.txt
//! similarity_threshold = 0.8
//! expansion_prepositions = in, at, on
//! literal_leftright_mapping = false
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::enricher::DEFAULT_SIMILARITY_THRESHOLD;
use crate::extractor::DEFAULT_PREPOSITIONS;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("invalid value for `{key}`: {message}")]
    InvalidValue { key: String, message: String },
    #[error("cannot read config {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Replacement stop-word list, one lowercase entry per line.
    pub stopwords_path: Option<PathBuf>,
    pub similarity_threshold: f64,
    /// `relation_phrase<TAB>label` table for the relation typer.
    pub relation_table_path: Option<PathBuf>,
    pub expansion_prepositions: Vec<String>,
    pub literal_leftright_mapping: bool,
    pub adv_in_verb_chunks: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            stopwords_path: None,
            similarity_threshold: DEFAULT_SIMILARITY_THRESHOLD,
            relation_table_path: None,
            expansion_prepositions: DEFAULT_PREPOSITIONS.iter().map(|p| p.to_string()).collect(),
            literal_leftright_mapping: false,
            adv_in_verb_chunks: false,
        }
    }
}

const KEYS: [&str; 6] = [
    "stopwords_path",
    "similarity_threshold",
    "relation_table_path",
    "expansion_prepositions",
    "literal_leftright_mapping",
    "adv_in_verb_chunks",
];

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.to_string(),
        message: message.into(),
    }
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(invalid(key, format!("expected true or false, found `{other}`"))),
    }
}

impl PipelineConfig {
    /// Parses config text. Missing keys keep their defaults; `#` starts a
    /// comment line.
    pub fn parse(content: &str) -> Result<Self, ConfigError> {
        let mut config = PipelineConfig::default();
        let mut seen = HashSet::new();
        for (i, raw) in content.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                });
            }
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::DuplicateKey {
                    line,
                    key: key.to_string(),
                });
            }
            match key {
                "stopwords_path" => config.stopwords_path = Some(PathBuf::from(value)),
                "relation_table_path" => config.relation_table_path = Some(PathBuf::from(value)),
                "similarity_threshold" => {
                    config.similarity_threshold = value
                        .parse()
                        .map_err(|_| invalid(key, format!("`{value}` is not a number")))?;
                }
                "expansion_prepositions" => {
                    config.expansion_prepositions = value
                        .split(',')
                        .map(|p| p.trim().to_string())
                        .filter(|p| !p.is_empty())
                        .collect();
                }
                "literal_leftright_mapping" => config.literal_leftright_mapping = parse_bool(key, value)?,
                "adv_in_verb_chunks" => config.adv_in_verb_chunks = parse_bool(key, value)?,
                _ => unreachable!(),
            }
        }
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let content = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&content)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let t = self.similarity_threshold;
        if !(t > 0.0 && t <= 1.0) {
            return Err(invalid("similarity_threshold", format!("{t} is outside (0, 1]")));
        }
        if self.expansion_prepositions.is_empty() {
            return Err(invalid("expansion_prepositions", "list is empty"));
        }
        for p in &self.expansion_prepositions {
            if p.is_empty() || !p.chars().all(|c| c.is_lowercase() && c.is_alphabetic()) {
                return Err(invalid(
                    "expansion_prepositions",
                    format!("`{p}` is not a lowercase word"),
                ));
            }
        }
        Ok(())
    }

    /// Canonical text form: every key in fixed order, unset paths omitted.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        if let Some(p) = &self.stopwords_path {
            writeln!(out, "stopwords_path = {}", p.display()).unwrap();
        }
        writeln!(out, "similarity_threshold = {}", self.similarity_threshold).unwrap();
        if let Some(p) = &self.relation_table_path {
            writeln!(out, "relation_table_path = {}", p.display()).unwrap();
        }
        writeln!(out, "expansion_prepositions = {}", self.expansion_prepositions.join(", ")).unwrap();
        writeln!(out, "literal_leftright_mapping = {}", self.literal_leftright_mapping).unwrap();
        writeln!(out, "adv_in_verb_chunks = {}", self.adv_in_verb_chunks).unwrap();
        out
    }
}
