//! Query analysis: turn free-form query text into weighted keywords,
//! candidate titles, and a query embedding.
//!
//! Extraction is pluggable. A provider (for instance a remote model behind
//! the packaged prompt contract) may supply keywords on a 1–10 integer scale
//! or titles with confidences; when no provider is configured, or a provider
//! fails or returns nothing, deterministic local extractors take over so the
//! pipeline always works offline.

use serde::{Deserialize, Serialize};

use crate::config::QueryConfig;
use crate::embed::{Embedder, EmbeddingVector};
use crate::error::{Error, Result};
use crate::score::min_max_normalize;
use crate::text::{normalize_text, normalize_title_for_match, tokens};

/// What shape of text the query is. Title extraction only runs for idea and
/// full-paper queries (or when reference titles are supplied): keyword-style
/// and question-style queries do not contain paper titles of their own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryKind {
    Keywords,
    Question,
    Abstract,
    Idea,
    FullPaper,
}

impl QueryKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            QueryKind::Keywords => "keywords",
            QueryKind::Question => "question",
            QueryKind::Abstract => "abstract",
            QueryKind::Idea => "idea",
            QueryKind::FullPaper => "full_paper",
        }
    }
}

impl std::str::FromStr for QueryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "keywords" => Ok(QueryKind::Keywords),
            "question" => Ok(QueryKind::Question),
            "abstract" => Ok(QueryKind::Abstract),
            "idea" => Ok(QueryKind::Idea),
            "full_paper" | "full-paper" => Ok(QueryKind::FullPaper),
            other => Err(Error::InvalidParameter(format!(
                "unknown query kind `{other}` (expected keywords, question, abstract, idea or full_paper)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct QueryInput {
    pub kind: QueryKind,
    pub text: String,
    /// Titles already known to the caller (e.g. parsed out of a reference
    /// list by an external tool). Trusted: they carry confidence 1.0.
    pub reference_titles: Vec<String>,
}

impl QueryInput {
    pub fn new(kind: QueryKind, text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        if text.trim().is_empty() {
            return Err(Error::EmptyText);
        }
        Ok(QueryInput {
            kind,
            text,
            reference_titles: Vec::new(),
        })
    }

    pub fn with_reference_titles(mut self, titles: Vec<String>) -> Self {
        self.reference_titles = titles;
        self
    }
}

/// A keyword with its importance on [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractedKeyword {
    pub text: String,
    pub importance: f64,
}

/// A candidate title, normalized for matching (non-alphabetic characters
/// removed, lowercased), with extraction confidence on [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractedTitle {
    pub text_normalized: String,
    pub confidence: f64,
}

/// A term scored by a keyword provider on the 1–10 integer scale.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ScoredTerm {
    pub text: String,
    pub score: u8,
}

/// Instruction text shipped for remote keyword providers. Implementations
/// that wrap a language model substitute the query for `{query}` and parse
/// the strict-JSON reply into [`ScoredTerm`]s (text plus a 1–10 integer
/// score). Packaged here so every deployment sends the same contract.
pub const KEYWORD_PROMPT: &str = include_str!("../assets/keyword_prompt.txt");

/// External keyword extraction. Implementations may call out to anything;
/// the pipeline treats errors and empty output as "use the local extractor".
pub trait KeywordProvider: Send + Sync {
    fn name(&self) -> &str;
    fn extract(&self, text: &str) -> Result<Vec<ScoredTerm>>;
}

/// A title candidate from a provider, unnormalized, confidence on [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct TitleCandidate {
    pub text: String,
    pub confidence: f64,
}

pub trait TitleProvider: Send + Sync {
    fn name(&self) -> &str;
    fn extract(&self, text: &str) -> Result<Vec<TitleCandidate>>;
}

/// Resolve the configured keyword provider name. `heuristic` means "no
/// external provider": the local extractor runs directly.
pub fn resolve_keyword_provider(config: &QueryConfig) -> Result<Option<Box<dyn KeywordProvider>>> {
    match config.keyword_provider.as_str() {
        "heuristic" => Ok(None),
        other => Err(Error::Provider {
            provider: other.to_string(),
            message: "no such keyword provider is available in this build; use `heuristic`".into(),
        }),
    }
}

pub fn resolve_title_provider(config: &QueryConfig) -> Result<Option<Box<dyn TitleProvider>>> {
    match config.title_provider.as_str() {
        "heuristic" => Ok(None),
        other => Err(Error::Provider {
            provider: other.to_string(),
            message: "no such title provider is available in this build; use `heuristic`".into(),
        }),
    }
}

#[derive(Debug, Clone)]
pub struct KeywordExtraction {
    pub keywords: Vec<ExtractedKeyword>,
    /// True when a configured provider failed (or returned nothing) and the
    /// local extractor supplied the result instead.
    pub used_fallback: bool,
}

/// Extract at most `config.max_keywords` weighted keywords from the query.
/// Provider scores (1–10 integers) map to importance by dividing by 10;
/// duplicates under text normalization keep the highest importance.
pub fn extract_keywords(
    query: &QueryInput,
    config: &QueryConfig,
    provider: Option<&dyn KeywordProvider>,
) -> Result<KeywordExtraction> {
    if query.text.trim().is_empty() {
        return Err(Error::EmptyText);
    }
    let mut used_fallback = false;
    let raw: Vec<ExtractedKeyword> = match provider {
        Some(p) => match p.extract(&query.text) {
            Ok(terms) if !terms.is_empty() => terms
                .into_iter()
                .map(|t| ExtractedKeyword {
                    text: normalize_text(&t.text),
                    importance: f64::from(t.score.clamp(1, 10)) / 10.0,
                })
                .collect(),
            Ok(_) => {
                log::warn!(
                    "keyword provider `{}` returned nothing; using local extractor",
                    p.name()
                );
                used_fallback = true;
                local_keywords(&query.text, config.max_keywords)
            }
            Err(e) => {
                log::warn!(
                    "keyword provider `{}` failed ({e}); using local extractor",
                    p.name()
                );
                used_fallback = true;
                local_keywords(&query.text, config.max_keywords)
            }
        },
        None => local_keywords(&query.text, config.max_keywords),
    };

    let mut deduped: Vec<ExtractedKeyword> = Vec::new();
    for kw in raw {
        if kw.text.is_empty() {
            continue;
        }
        match deduped.iter_mut().find(|k| k.text == kw.text) {
            Some(existing) => existing.importance = existing.importance.max(kw.importance),
            None => deduped.push(kw),
        }
    }
    deduped.sort_by(|a, b| {
        b.importance
            .partial_cmp(&a.importance)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.text.cmp(&b.text))
    });
    deduped.truncate(config.max_keywords);
    Ok(KeywordExtraction {
        keywords: deduped,
        used_fallback,
    })
}

/// Common English words that never make useful keywords on their own.
const STOPWORDS: [&str; 64] = [
    "a", "an", "the", "and", "or", "but", "if", "then", "else", "of", "in", "on", "at", "to",
    "for", "from", "by", "with", "without", "about", "into", "over", "under", "between", "is",
    "are", "was", "were", "be", "been", "being", "it", "its", "this", "that", "these", "those",
    "we", "our", "they", "their", "i", "you", "he", "she", "them", "his", "her", "as", "such",
    "can", "could", "may", "might", "will", "would", "shall", "should", "do", "does", "did", "not",
    "no", "how",
];

fn is_stopword(word: &str) -> bool {
    STOPWORDS.contains(&word)
}

/// Strip non-alphanumeric edges, e.g. "networks," -> "networks".
fn word_core(token: &str) -> &str {
    token.trim_matches(|c: char| !c.is_alphanumeric())
}

/// Local keyword extractor: term frequency over stopword-filtered unigrams
/// and adjacent bigrams, top-`max` by (frequency, text), importance mapped
/// onto [0.3, 1.0] by min-max over the kept terms.
fn local_keywords(text: &str, max: usize) -> Vec<ExtractedKeyword> {
    let normalized = normalize_text(text);
    let words: Vec<&str> = tokens(&normalized)
        .map(word_core)
        .filter(|w| !w.is_empty())
        .collect();

    let mut counts: std::collections::BTreeMap<String, u64> = std::collections::BTreeMap::new();
    let content = |w: &str| !is_stopword(w) && w.len() >= 3 && !w.chars().all(|c| c.is_numeric());
    for (i, &w) in words.iter().enumerate() {
        if content(w) {
            *counts.entry(w.to_string()).or_insert(0) += 1;
            if let Some(&next) = words.get(i + 1) {
                if content(next) {
                    *counts.entry(format!("{w} {next}")).or_insert(0) += 1;
                }
            }
        }
    }
    // No content words at all (pure stopwords/symbols): fall back to raw
    // tokens, then to the whole normalized string, so nonempty text always
    // yields at least one keyword.
    if counts.is_empty() {
        for &w in &words {
            *counts.entry(w.to_string()).or_insert(0) += 1;
        }
    }
    if counts.is_empty() {
        return vec![ExtractedKeyword {
            text: normalized,
            importance: 1.0,
        }];
    }

    let mut ranked: Vec<(String, u64)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(max);
    let tfs: Vec<f64> = ranked.iter().map(|(_, c)| *c as f64).collect();
    let scaled = min_max_normalize(&tfs);
    ranked
        .into_iter()
        .zip(scaled)
        .map(|((text, _), s)| ExtractedKeyword {
            text,
            importance: 0.3 + 0.7 * s,
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct TitleExtraction {
    pub titles: Vec<ExtractedTitle>,
    pub used_fallback: bool,
}

/// Extract at most `config.max_titles` candidate titles. Runs only for idea
/// and full-paper queries or when reference titles were supplied; other
/// query kinds return an empty list. Reference titles carry confidence 1.0;
/// the local line/quote scanner assigns 0.5. Duplicates under title
/// normalization keep the highest confidence.
pub fn extract_titles(
    query: &QueryInput,
    config: &QueryConfig,
    provider: Option<&dyn TitleProvider>,
) -> Result<TitleExtraction> {
    let gated = matches!(query.kind, QueryKind::Idea | QueryKind::FullPaper)
        || !query.reference_titles.is_empty();
    if !gated {
        return Ok(TitleExtraction {
            titles: Vec::new(),
            used_fallback: false,
        });
    }

    let mut used_fallback = false;
    let mut candidates: Vec<TitleCandidate> = query
        .reference_titles
        .iter()
        .map(|t| TitleCandidate {
            text: t.clone(),
            confidence: 1.0,
        })
        .collect();

    if matches!(query.kind, QueryKind::Idea | QueryKind::FullPaper) {
        let extracted = match provider {
            Some(p) => match p.extract(&query.text) {
                Ok(list) if !list.is_empty() => list,
                Ok(_) => {
                    log::warn!(
                        "title provider `{}` returned nothing; using local scanner",
                        p.name()
                    );
                    used_fallback = true;
                    local_titles(&query.text)
                }
                Err(e) => {
                    log::warn!(
                        "title provider `{}` failed ({e}); using local scanner",
                        p.name()
                    );
                    used_fallback = true;
                    local_titles(&query.text)
                }
            },
            None => local_titles(&query.text),
        };
        candidates.extend(extracted);
    }

    let mut deduped: Vec<ExtractedTitle> = Vec::new();
    for c in candidates {
        let text_normalized = normalize_title_for_match(&c.text);
        if text_normalized.is_empty() {
            continue;
        }
        let confidence = c.confidence.clamp(0.0, 1.0);
        match deduped
            .iter_mut()
            .find(|t| t.text_normalized == text_normalized)
        {
            Some(existing) => existing.confidence = existing.confidence.max(confidence),
            None => deduped.push(ExtractedTitle {
                text_normalized,
                confidence,
            }),
        }
    }
    deduped.sort_by(|a, b| {
        b.confidence
            .partial_cmp(&a.confidence)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.text_normalized.cmp(&b.text_normalized))
    });
    deduped.truncate(config.max_titles);
    Ok(TitleExtraction {
        titles: deduped,
        used_fallback,
    })
}

/// Words that stay lowercase inside an English title.
const TITLE_SMALL_WORDS: [&str; 14] = [
    "a", "an", "the", "and", "or", "of", "for", "to", "in", "on", "at", "with", "via", "by",
];

/// Local title scanner: every quoted span plus every line that reads like a
/// Title Case heading becomes a candidate with confidence 0.5.
fn local_titles(text: &str) -> Vec<TitleCandidate> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim().trim_start_matches(['-', '*', '•']).trim();
        // quoted spans may sit anywhere in a line
        let mut parts = line.split('"');
        let _prefix = parts.next();
        let mut quoted = true;
        for part in parts {
            if quoted {
                let words = part.split_whitespace().count();
                if (2..=25).contains(&words) {
                    out.push(TitleCandidate {
                        text: part.to_string(),
                        confidence: 0.5,
                    });
                }
            }
            quoted = !quoted;
        }
        if looks_like_title_line(line) {
            out.push(TitleCandidate {
                text: line.to_string(),
                confidence: 0.5,
            });
        }
    }
    out
}

fn looks_like_title_line(line: &str) -> bool {
    if line.len() > 150 || line.ends_with('.') {
        return false;
    }
    let words: Vec<&str> = line.split_whitespace().collect();
    if !(3..=25).contains(&words.len()) {
        return false;
    }
    let first_upper = words[0]
        .chars()
        .next()
        .map(|c| c.is_uppercase())
        .unwrap_or(false);
    if !first_upper {
        return false;
    }
    let mut considered = 0usize;
    let mut capitalized = 0usize;
    for w in &words {
        let Some(first) = w.chars().next() else {
            continue;
        };
        if !first.is_alphabetic() {
            continue;
        }
        if TITLE_SMALL_WORDS.contains(&w.to_lowercase().as_str()) {
            continue;
        }
        considered += 1;
        if first.is_uppercase() {
            capitalized += 1;
        }
    }
    considered >= 2 && (capitalized as f64) / (considered as f64) >= 0.75
}

#[derive(Debug, Clone)]
pub struct QueryEmbedding {
    pub vector: EmbeddingVector,
    /// The exact text that was embedded (the abstract block for full-paper
    /// queries); downstream rerankers should score against this.
    pub embedded_text: String,
    /// True when a full-paper query had no locatable abstract and the
    /// leading 2,000 characters were embedded instead.
    pub used_leading_text: bool,
}

/// Embed the query. Full-paper queries embed only their abstract — the first
/// text block after a line equal (case-insensitively) to "abstract" — or,
/// when no such block exists, the leading 2,000 characters (flagged). Every
/// other query kind embeds the whole text.
pub fn query_embedding(query: &QueryInput, embedder: &dyn Embedder) -> Result<QueryEmbedding> {
    if query.kind != QueryKind::FullPaper {
        return Ok(QueryEmbedding {
            vector: embedder.embed(&query.text)?,
            embedded_text: query.text.clone(),
            used_leading_text: false,
        });
    }
    if let Some(abstract_block) = find_abstract_block(&query.text) {
        return Ok(QueryEmbedding {
            vector: embedder.embed(&abstract_block)?,
            embedded_text: abstract_block,
            used_leading_text: false,
        });
    }
    log::warn!(
        "full-paper query has no locatable abstract; embedding the leading 2,000 characters"
    );
    let leading: String = query.text.chars().take(2000).collect();
    Ok(QueryEmbedding {
        vector: embedder.embed(&leading)?,
        embedded_text: leading,
        used_leading_text: true,
    })
}

/// The first nonempty block after a line that says just "abstract".
pub fn find_abstract_block(text: &str) -> Option<String> {
    let mut lines = text.lines();
    for line in lines.by_ref() {
        if line.trim().eq_ignore_ascii_case("abstract") {
            break;
        }
    }
    let mut block: Vec<&str> = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            if block.is_empty() {
                continue; // blank lines between the marker and the block
            }
            break;
        }
        block.push(line.trim());
    }
    if block.is_empty() {
        None
    } else {
        Some(block.join(" "))
    }
}
