//! Runtime configuration.
//!
//! Every tunable constant in the engine lives in one tree so that a single
//! TOML file (plus dotted-path overrides from the command line) pins an
//! entire run. Defaults reproduce the engine's reference parameterization;
//! precedence is overrides > config file > defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Directory holding (or receiving) the corpus files.
    pub corpus_dir: String,
    pub output: OutputConfig,
    pub embedding: EmbeddingConfig,
    pub query: QueryConfig,
    pub matching: MatchingConfig,
    pub propagation: PropagationConfig,
    pub ranking: RankingConfig,
    pub ingest: IngestConfig,
    pub synth: SynthConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus_dir: "corpus".to_string(),
            output: OutputConfig::default(),
            embedding: EmbeddingConfig::default(),
            query: QueryConfig::default(),
            matching: MatchingConfig::default(),
            propagation: PropagationConfig::default(),
            ranking: RankingConfig::default(),
            ingest: IngestConfig::default(),
            synth: SynthConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: OutputFormat,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            format: OutputFormat::Human,
        }
    }
}

/// `human` prints an aligned table with per-result breakdowns; `machine`
/// emits one JSON record per line for downstream tooling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Human,
    Machine,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "human" => Ok(OutputFormat::Human),
            "machine" => Ok(OutputFormat::Machine),
            other => Err(Error::InvalidParameter(format!(
                "unknown output format `{other}` (expected `human` or `machine`)"
            ))),
        }
    }
}

/// Embedding provider selection. `provider = "hash-ngram"` is the bundled
/// offline encoder; remote providers are configured under `[embedding.remote]`
/// and authenticate through the environment variable named by `auth_env`
/// (credentials never appear in config files).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmbeddingConfig {
    pub provider: String,
    pub dimension: usize,
    pub remote: RemoteProviderConfig,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        EmbeddingConfig {
            provider: "hash-ngram".to_string(),
            dimension: 1024,
            remote: RemoteProviderConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RemoteProviderConfig {
    pub endpoint: String,
    pub model: String,
    /// Name of the environment variable holding the auth token.
    pub auth_env: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QueryConfig {
    /// `"heuristic"` uses the bundled frequency-based extractor.
    pub keyword_provider: String,
    /// `"heuristic"` uses the bundled pattern-based extractor.
    pub title_provider: String,
    /// Maximum keywords kept per query.
    pub max_keywords: usize,
    /// Maximum candidate titles kept per query.
    pub max_titles: usize,
}

impl Default for QueryConfig {
    fn default() -> Self {
        QueryConfig {
            keyword_provider: "heuristic".to_string(),
            title_provider: "heuristic".to_string(),
            max_keywords: 8,
            max_titles: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatchingConfig {
    /// Cosine gate for keyword vector matches.
    pub theta_kw: f64,
    /// Vector hits kept per input keyword.
    pub keyword_vector_top_k: usize,
    /// Acceptance gate for fuzzy title scores.
    pub theta_title: f64,
    /// Weight of the character-sequence component of the fuzzy title score.
    pub seq_weight: f64,
    /// Weight of the token-overlap component of the fuzzy title score.
    pub token_weight: f64,
    /// Papers kept per extracted title.
    pub papers_per_title: usize,
    /// Cap on the token-overlap candidate pool per title (exact hits are
    /// always kept on top of this).
    pub fuzzy_pool_cap: usize,
    /// Candidates retrieved per embedding channel before reranking.
    pub vector_top_k: usize,
    /// Candidates kept per embedding channel after reranking.
    pub rerank_top_k: usize,
    /// Title-channel weight when combining the two semantic channels.
    pub title_channel_weight: f64,
    /// Abstract-channel weight when combining the two semantic channels.
    pub abstract_channel_weight: f64,
    /// Weight of the normalized semantic score in the pre-graph score.
    pub lambda_emb: f64,
    /// Weight of the normalized title score in the pre-graph score.
    pub lambda_title: f64,
    /// Pre-graph bonus for papers hit by an exact title match.
    pub bonus_exact: f64,
    /// Pre-graph bonus for papers hit only by fuzzy title matches.
    pub bonus_fuzzy: f64,
    /// `"embedding-cosine"` reranks by query/abstract embedding similarity.
    pub reranker_provider: String,
}

impl Default for MatchingConfig {
    fn default() -> Self {
        MatchingConfig {
            theta_kw: 0.7,
            keyword_vector_top_k: 3,
            theta_title: 0.88,
            seq_weight: 0.65,
            token_weight: 0.35,
            papers_per_title: 5,
            fuzzy_pool_cap: 200,
            vector_top_k: 60,
            rerank_top_k: 15,
            title_channel_weight: 0.4,
            abstract_channel_weight: 0.6,
            lambda_emb: 0.3,
            lambda_title: 0.8,
            bonus_exact: 0.35,
            bonus_fuzzy: 0.10,
            reranker_provider: "embedding-cosine".to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImportanceMode {
    /// Citation-derived importance (log-scaled against the pool total).
    Quality,
    /// Importance pinned to 1 for every paper; citations stop mattering.
    Relevance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropagationConfig {
    /// Restart probability of the random walk.
    pub alpha: f64,
    /// L1 convergence threshold.
    pub epsilon: f64,
    /// Iteration cap for the walk.
    pub max_iterations: usize,
    /// Maximum nodes admitted per hop per node kind during expansion.
    pub hop_node_cap: usize,
    /// Strength of the importance boost on paper seed teleport weights.
    pub gamma: f64,
    pub importance_mode: ImportanceMode,
    pub edge_weights: EdgeWeightConfig,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        PropagationConfig {
            alpha: 0.15,
            epsilon: 1e-6,
            max_iterations: 50,
            hop_node_cap: 500,
            gamma: 0.5,
            importance_mode: ImportanceMode::Quality,
            edge_weights: EdgeWeightConfig::default(),
        }
    }
}

/// Base weights per relation type. Relation kinds not listed here fall back
/// to `default_weight`; a weight of zero excludes the edge from the walk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EdgeWeightConfig {
    pub has_keyword: f64,
    pub cites: f64,
    pub related_to: f64,
    pub authored: f64,
    pub coauthor: f64,
    pub cooccur: f64,
    /// Keyword-side multiplier for HAS_KEYWORD edges whose keyword is not a
    /// seed (seed keywords use their own matched weight instead).
    pub keyword_floor: f64,
    /// Upper clamp on the log-scaled count multiplier of COAUTHOR/COOCCUR.
    pub count_log_cap: f64,
    /// Weight for relation kinds without an explicit entry (0 = excluded).
    pub default_weight: f64,
}

impl Default for EdgeWeightConfig {
    fn default() -> Self {
        EdgeWeightConfig {
            has_keyword: 1.20,
            cites: 1.00,
            related_to: 0.90,
            authored: 0.80,
            coauthor: 0.60,
            cooccur: 0.60,
            keyword_floor: 0.25,
            count_log_cap: 2.0,
            default_weight: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RankingConfig {
    /// Weight of the normalized pre-graph score.
    pub lambda_pre: f64,
    /// Weight of the normalized walk score.
    pub lambda_graph: f64,
    /// Weight of the recomputed citation importance.
    pub lambda_imp: f64,
    /// Floor of the seed-support gate applied to the walk score.
    pub support_floor: f64,
    /// Results returned by default.
    pub top_k: usize,
}

impl Default for RankingConfig {
    fn default() -> Self {
        RankingConfig {
            lambda_pre: 0.35,
            lambda_graph: 0.45,
            lambda_imp: 0.20,
            support_floor: 0.25,
            top_k: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestConfig {
    /// Papers with fewer abstract characters than this are dropped.
    pub min_abstract_chars: usize,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            min_abstract_chars: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub paper_count: usize,
    pub author_count: usize,
    pub keyword_vocab: usize,
    /// Pareto exponent of the citation-count distribution (must be > 1).
    pub citation_exponent: f64,
    pub keywords_per_paper_min: usize,
    pub keywords_per_paper_max: usize,
    pub rng_seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            paper_count: 200,
            author_count: 80,
            keyword_vocab: 120,
            citation_exponent: 2.5,
            keywords_per_paper_min: 3,
            keywords_per_paper_max: 8,
            rng_seed: 42,
        }
    }
}

impl RunConfig {
    /// Parse a TOML document into a full config, filling gaps with defaults.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Load a config file, apply `key.path=value` overrides, validate.
    /// `path = None` starts from built-in defaults.
    pub fn load(path: Option<&Path>, overrides: &[(String, String)]) -> Result<Self> {
        let mut root = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                text.parse::<toml::Table>()
                    .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
            }
            None => toml::Table::new(),
        };
        for (key, raw) in overrides {
            apply_override(&mut root, key, raw)?;
        }
        let cfg: RunConfig = toml::Value::Table(root)
            .try_into()
            .map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes to TOML")
    }

    pub fn validate(&self) -> Result<()> {
        fn check(ok: bool, msg: &str) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::Config(msg.to_string()))
            }
        }
        check(
            self.embedding.dimension >= 1,
            "embedding.dimension must be >= 1",
        )?;
        check(
            self.query.max_keywords >= 1,
            "query.max_keywords must be >= 1",
        )?;
        check(self.query.max_titles >= 1, "query.max_titles must be >= 1")?;
        let m = &self.matching;
        check(
            (0.0..=1.0).contains(&m.theta_kw),
            "matching.theta_kw must be in [0, 1]",
        )?;
        check(
            (0.0..=1.0).contains(&m.theta_title),
            "matching.theta_title must be in [0, 1]",
        )?;
        check(
            m.seq_weight >= 0.0 && m.token_weight >= 0.0,
            "fuzzy component weights must be >= 0",
        )?;
        check(
            m.title_channel_weight > 0.0 && m.abstract_channel_weight > 0.0,
            "semantic channel weights must be > 0",
        )?;
        check(m.vector_top_k >= 1, "matching.vector_top_k must be >= 1")?;
        check(m.rerank_top_k >= 1, "matching.rerank_top_k must be >= 1")?;
        check(
            m.papers_per_title >= 1,
            "matching.papers_per_title must be >= 1",
        )?;
        check(
            m.keyword_vector_top_k >= 1,
            "matching.keyword_vector_top_k must be >= 1",
        )?;
        let p = &self.propagation;
        check(
            p.alpha > 0.0 && p.alpha < 1.0,
            "propagation.alpha must be in (0, 1)",
        )?;
        check(p.epsilon > 0.0, "propagation.epsilon must be > 0")?;
        check(
            p.max_iterations >= 1,
            "propagation.max_iterations must be >= 1",
        )?;
        check(p.hop_node_cap >= 1, "propagation.hop_node_cap must be >= 1")?;
        check(p.gamma >= 0.0, "propagation.gamma must be >= 0")?;
        let w = &p.edge_weights;
        for (name, v) in [
            ("has_keyword", w.has_keyword),
            ("cites", w.cites),
            ("related_to", w.related_to),
            ("authored", w.authored),
            ("coauthor", w.coauthor),
            ("cooccur", w.cooccur),
            ("keyword_floor", w.keyword_floor),
            ("default_weight", w.default_weight),
        ] {
            check(
                v >= 0.0 && v.is_finite(),
                &format!("edge_weights.{name} must be >= 0"),
            )?;
        }
        check(
            w.count_log_cap >= 1.0,
            "edge_weights.count_log_cap must be >= 1",
        )?;
        let r = &self.ranking;
        check(
            r.lambda_pre >= 0.0 && r.lambda_graph >= 0.0 && r.lambda_imp >= 0.0,
            "ranking lambdas must be >= 0",
        )?;
        check(
            (0.0..=1.0).contains(&r.support_floor),
            "ranking.support_floor must be in [0, 1]",
        )?;
        check(r.top_k >= 1, "ranking.top_k must be >= 1")?;
        let s = &self.synth;
        check(s.paper_count >= 1, "synth.paper_count must be >= 1")?;
        check(s.author_count >= 1, "synth.author_count must be >= 1")?;
        check(
            s.citation_exponent > 1.0,
            "synth.citation_exponent must be > 1",
        )?;
        check(
            (3..=8).contains(&s.keywords_per_paper_min)
                && (3..=8).contains(&s.keywords_per_paper_max)
                && s.keywords_per_paper_min <= s.keywords_per_paper_max,
            "synth keywords-per-paper bounds must satisfy 3 <= min <= max <= 8",
        )?;
        check(
            s.keyword_vocab >= s.keywords_per_paper_max,
            "synth.keyword_vocab must be >= keywords_per_paper_max",
        )?;
        Ok(())
    }
}

/// Apply one `a.b.c=value` override onto a TOML table. The raw value is
/// parsed as TOML first (numbers, booleans, strings with quotes) and falls
/// back to a bare string, so `--set propagation.alpha=0.3` and
/// `--set embedding.provider=hash-ngram` both behave as expected.
fn apply_override(root: &mut toml::Table, key: &str, raw: &str) -> Result<()> {
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::Config(format!("bad override key `{key}`")));
    }
    let value = parse_override_value(raw);
    let mut table = root;
    for part in &parts[..parts.len() - 1] {
        table = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| {
                Error::Config(format!("override key `{key}` crosses a non-table value"))
            })?;
    }
    table.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

fn parse_override_value(raw: &str) -> toml::Value {
    let probe = format!("v = {raw}");
    if let Ok(table) = probe.parse::<toml::Table>() {
        if let Some(v) = table.get("v") {
            return v.clone();
        }
    }
    toml::Value::String(raw.to_string())
}
