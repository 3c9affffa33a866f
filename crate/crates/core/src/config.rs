//! Run configuration: `key = value` files with command-line overrides.

use std::fs;
use std::path::{Path, PathBuf};

use crate::compose::{ComposeOptions, Fallback, Mode, Relevance};
use crate::space::PpmiParams;
use crate::triples::RelationFilter;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config line {line}: {reason}")]
    Line { line: usize, reason: String },
    #[error("invalid {key}: {reason}")]
    Value { key: &'static str, reason: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub corpus: Vec<PathBuf>,
    pub counts: PathBuf,
    pub spaces: PathBuf,
    pub embeddings: Option<PathBuf>,
    pub dataset: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub mode: Mode,
    pub k: usize,
    pub relevance: Relevance,
    pub fallback: Fallback,
    pub weighted: bool,
    pub relations: RelationFilter,
    pub min_count: u64,
    pub max_dims: usize,
    pub seed: u64,
    pub dim_model: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let compose = ComposeOptions::default();
        let ppmi = PpmiParams::default();
        RunConfig {
            corpus: Vec::new(),
            counts: PathBuf::from("counts.tsv"),
            spaces: PathBuf::from("spaces"),
            embeddings: None,
            dataset: None,
            report: None,
            mode: compose.mode,
            k: compose.k,
            relevance: compose.relevance,
            fallback: compose.fallback,
            weighted: compose.weighted,
            relations: compose.relations,
            min_count: ppmi.min_count,
            max_dims: ppmi.max_dims,
            seed: 0,
            dim_model: 32,
        }
    }
}

fn parse_bool(value: &str) -> Result<bool, String> {
    match value.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        other => Err(format!("`{other}` is not a boolean")),
    }
}

fn parse_num<T: std::str::FromStr>(value: &str) -> Result<T, String> {
    value.parse().map_err(|_| format!("`{value}` is not a valid number"))
}

impl RunConfig {
    /// Sets one key. Unknown keys are rejected.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "corpus" => {
                self.corpus = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(PathBuf::from)
                    .collect()
            }
            "counts" => self.counts = value.into(),
            "spaces" => self.spaces = value.into(),
            "embeddings" => self.embeddings = Some(value.into()),
            "dataset" => self.dataset = Some(value.into()),
            "report" => self.report = Some(value.into()),
            "mode" => self.mode = value.parse()?,
            "k" => self.k = parse_num(value)?,
            "relevance" => self.relevance = value.parse()?,
            "fallback" => self.fallback = value.parse()?,
            "weighted" => self.weighted = parse_bool(value)?,
            "relations" => self.relations = RelationFilter::parse_list(value),
            "min_count" => self.min_count = parse_num(value)?,
            "max_dims" => self.max_dims = parse_num(value)?,
            "seed" => self.seed = parse_num(value)?,
            "dim_model" => self.dim_model = parse_num(value)?,
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    /// Applies a `key = value` file on top of the current values. Blank
    /// lines and `#` comments are ignored; relative paths stay relative to
    /// the working directory.
    pub fn apply_str(&mut self, text: &str) -> Result<(), ConfigError> {
        for (offset, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| ConfigError::Line {
                line: offset + 1,
                reason,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected `key = value`".into()))?;
            self.set(key, value).map_err(err)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        self.apply_str(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.k == 0 {
            return Err(ConfigError::Value {
                key: "k",
                reason: "must be at least 1".into(),
            });
        }
        if self.min_count == 0 {
            return Err(ConfigError::Value {
                key: "min_count",
                reason: "must be at least 1".into(),
            });
        }
        if self.max_dims == 0 {
            return Err(ConfigError::Value {
                key: "max_dims",
                reason: "must be at least 1".into(),
            });
        }
        if self.relations.is_empty() {
            return Err(ConfigError::Value {
                key: "relations",
                reason: "no relations given".into(),
            });
        }
        if self.dim_model == 0 || !self.dim_model.is_multiple_of(2) {
            return Err(ConfigError::Value {
                key: "dim_model",
                reason: "must be a positive even number".into(),
            });
        }
        Ok(())
    }

    pub fn compose_options(&self) -> ComposeOptions {
        ComposeOptions {
            mode: self.mode,
            k: self.k,
            relevance: self.relevance,
            fallback: self.fallback,
            weighted: self.weighted,
            relations: self.relations.clone(),
        }
    }

    pub fn ppmi_params(&self) -> PpmiParams {
        PpmiParams {
            min_count: self.min_count,
            max_dims: self.max_dims,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_override() {
        let mut cfg = RunConfig::default();
        cfg.apply_str("# run\nmode = add\nk=3\nrelations = nsubj, obj\ncorpus = a.conllu,b.conllu\n")
            .unwrap();
        assert_eq!(cfg.mode, Mode::Add);
        assert_eq!(cfg.k, 3);
        assert_eq!(cfg.corpus.len(), 2);
        assert_eq!(cfg.relations.to_string(), "nsubj,obj");
        cfg.set("k", "5").unwrap();
        assert_eq!(cfg.k, 5);
        cfg.validate().unwrap();
    }

    #[test]
    fn bad_lines() {
        let mut cfg = RunConfig::default();
        match cfg.apply_str("k = 2\nmode = sideways\n") {
            Err(ConfigError::Line { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(cfg.apply_str("colour = blue").is_err());
        assert!(cfg.apply_str("just words").is_err());
    }

    #[test]
    fn invariants() {
        let mut cfg = RunConfig::default();
        cfg.validate().unwrap();
        cfg.k = 0;
        assert!(cfg.validate().is_err());
        cfg.k = 1;
        cfg.min_count = 0;
        assert!(cfg.validate().is_err());
    }
}
