use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use geosent::preprocess::{LexiconPaths, Steps};
use geosent::regional::EventDay;
use geosent::sentiment::ModelKind;
use geosent::stats::{Direction, Start};
use serde::{Deserialize, Serialize};

/// Problems with the configuration or command line; exit code 1.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

fn default_event_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2019, 10, 13).unwrap()
}

fn default_language() -> String {
    "pl".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_event_date")]
    pub event_date: NaiveDate,
    /// Language tag posts must carry to be analysed.
    #[serde(default = "default_language")]
    pub language: String,
    #[serde(default)]
    pub paths: Paths,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default)]
    pub clean: Steps,
    #[serde(default)]
    pub classifier: ClassifierSettings,
    #[serde(default)]
    pub regression: RegressionSettings,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    pub posts: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub region_table: Option<PathBuf>,
    pub training: Option<PathBuf>,
    /// Pre-trained model; when absent `pipeline` trains one.
    pub model: Option<PathBuf>,
    /// External `id,label` predictions; when present `pipeline` imports
    /// them instead of classifying.
    pub predictions: Option<PathBuf>,
    pub dictionary: Option<PathBuf>,
    pub lemmas: Option<PathBuf>,
    pub stop_words: Option<PathBuf>,
    pub conjunctions: Option<PathBuf>,
    pub emoji_polarity: Option<PathBuf>,
}

impl Paths {
    fn all_mut(&mut self) -> [&mut Option<PathBuf>; 11] {
        [
            &mut self.posts,
            &mut self.gazetteer,
            &mut self.region_table,
            &mut self.training,
            &mut self.model,
            &mut self.predictions,
            &mut self.dictionary,
            &mut self.lemmas,
            &mut self.stop_words,
            &mut self.conjunctions,
            &mut self.emoji_polarity,
        ]
    }

    pub fn lexicons(&self) -> LexiconPaths {
        LexiconPaths {
            dictionary: self.dictionary.clone(),
            lemmas: self.lemmas.clone(),
            stop_words: self.stop_words.clone(),
            conjunctions: self.conjunctions.clone(),
            emoji_polarity: self.emoji_polarity.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    pub min_region_posts: usize,
    pub emoji_min_share: f64,
    pub alpha: f64,
    pub max_short_words: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            min_region_posts: 100,
            emoji_min_share: 0.01,
            alpha: 0.05,
            max_short_words: 3,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierSettings {
    pub kind: ModelKind,
    pub smoothing: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
    /// Train negative/positive only; neutral examples become the
    /// pseudo-labelling pool.
    pub binary: bool,
    pub pseudo_label: bool,
    pub pseudo_fraction: f64,
    pub min_confidence: Option<f64>,
    pub test_fraction: f64,
}

impl Default for ClassifierSettings {
    fn default() -> Self {
        let t = geosent::sentiment::TrainConfig::default();
        Self {
            kind: t.kind,
            smoothing: t.smoothing,
            learning_rate: t.learning_rate,
            epochs: t.epochs,
            l2: t.l2,
            binary: true,
            pseudo_label: true,
            pseudo_fraction: 1.0,
            min_confidence: None,
            test_fraction: 0.2,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegressionSettings {
    /// Predictors in order; all available ones when absent.
    pub features: Option<Vec<String>>,
    pub standardize: bool,
    pub direction: Direction,
    pub start: Start,
    pub event_day: EventDay,
}

impl Default for RegressionSettings {
    fn default() -> Self {
        Self {
            features: None,
            standardize: true,
            direction: Direction::Both,
            start: Start::Full,
            event_day: EventDay::Before,
        }
    }
}

fn parse_override(raw: &str) -> Result<(Vec<String>, toml::Value), ConfigError> {
    let (key, value) = raw
        .split_once('=')
        .ok_or_else(|| ConfigError(format!("--set expects key=value, got `{raw}`")))?;
    let path: Vec<String> = key.trim().split('.').map(String::from).collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(ConfigError(format!("bad --set key `{key}`")));
    }
    let value = value.trim();
    // Parse as a TOML literal where possible, otherwise keep the raw string.
    let parsed = toml::from_str::<toml::Table>(&format!("v = {value}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(value.to_string()));
    Ok((path, parsed))
}

fn apply_override(
    root: &mut toml::Table,
    path: &[String],
    value: toml::Value,
) -> Result<(), ConfigError> {
    let (last, parents) = path.split_last().unwrap();
    let mut table = root;
    for p in parents {
        table = table
            .entry(p.clone())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| ConfigError(format!("--set: `{p}` is not a table")))?;
    }
    table.insert(last.clone(), value);
    Ok(())
}

impl PipelineConfig {
    /// Reads the config file, applies `--set` overrides and resolves
    /// relative paths against the config file's directory.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, ConfigError> {
        let (mut root, base) = match path {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| ConfigError(format!("cannot read config {}: {e}", p.display())))?;
                let table: toml::Table = toml::from_str(&text)
                    .map_err(|e| ConfigError(format!("config {}: {}", p.display(), e.message())))?;
                (table, p.parent().map(Path::to_path_buf).unwrap_or_default())
            }
            None => (toml::Table::new(), PathBuf::new()),
        };
        for raw in overrides {
            let (key, value) = parse_override(raw)?;
            apply_override(&mut root, &key, value)?;
        }
        let mut cfg: PipelineConfig = root
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError(format!("config: {}", e.message())))?;
        for p in cfg.paths.all_mut().into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut paths = self.paths.clone();
        for p in paths.all_mut().into_iter().flatten() {
            if !p.is_file() {
                return Err(ConfigError(format!(
                    "referenced file {} does not exist",
                    p.display()
                )));
            }
        }
        let t = &self.thresholds;
        if !(0.0..=1.0).contains(&t.emoji_min_share) {
            return Err(ConfigError(
                "thresholds.emoji_min_share must lie in [0, 1]".into(),
            ));
        }
        if !(t.alpha > 0.0 && t.alpha < 1.0) {
            return Err(ConfigError("thresholds.alpha must lie in (0, 1)".into()));
        }
        let c = &self.classifier;
        if !(0.0..1.0).contains(&c.test_fraction) {
            return Err(ConfigError(
                "classifier.test_fraction must lie in [0, 1)".into(),
            ));
        }
        if !(c.pseudo_fraction > 0.0 && c.pseudo_fraction <= 1.0) {
            return Err(ConfigError(
                "classifier.pseudo_fraction must lie in (0, 1]".into(),
            ));
        }
        Ok(())
    }

    pub fn require<'a>(&self, p: &'a Option<PathBuf>, key: &str) -> Result<&'a Path, ConfigError> {
        p.as_deref()
            .ok_or_else(|| ConfigError(format!("paths.{key} is not configured")))
    }
}
