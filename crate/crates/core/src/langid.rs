//! Character n-gram language identification (rank-order profiles compared by
//! out-of-place distance).

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangIdError {
    #[error("no language profiles configured")]
    NoProfiles,
    #[error("profile line {line}: {reason}")]
    Profile { line: usize, reason: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NgramConfig {
    pub min_n: usize,
    pub max_n: usize,
    /// Profile length.
    pub top_k: usize,
    /// Texts with fewer words are not classified.
    pub min_words: usize,
}

impl Default for NgramConfig {
    fn default() -> Self {
        NgramConfig { min_n: 1, max_n: 5, top_k: 400, min_words: 25 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Language {
    Known(String),
    Unknown,
}

impl Language {
    pub fn code(&self) -> &str {
        match self {
            Language::Known(c) => c,
            Language::Unknown => "unknown",
        }
    }

    pub fn is(&self, code: &str) -> bool {
        matches!(self, Language::Known(c) if c == code)
    }
}

/// Most frequent n-grams of a language, ranked from 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageProfile {
    label: String,
    ranks: BTreeMap<String, usize>,
}

impl LanguageProfile {
    pub fn from_text(label: &str, text: &str, cfg: &NgramConfig) -> Self {
        LanguageProfile { label: label.to_string(), ranks: ranked_ngrams(text, cfg) }
    }

    /// Parses `ngram<TAB>rank` lines. Ranks must be consecutive from 0 (in
    /// any line order).
    pub fn parse(label: &str, src: &str) -> Result<Self, LangIdError> {
        let mut ranks = BTreeMap::new();
        for (i, line) in src.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (gram, rank) = line
                .split_once('\t')
                .ok_or(LangIdError::Profile { line: i + 1, reason: "missing tab" })?;
            let rank: usize = rank
                .trim()
                .parse()
                .map_err(|_| LangIdError::Profile { line: i + 1, reason: "bad rank" })?;
            if gram.is_empty() {
                return Err(LangIdError::Profile { line: i + 1, reason: "empty n-gram" });
            }
            if ranks.insert(gram.to_string(), rank).is_some() {
                return Err(LangIdError::Profile { line: i + 1, reason: "duplicate n-gram" });
            }
        }
        let mut seen: Vec<usize> = ranks.values().copied().collect();
        seen.sort_unstable();
        if seen.iter().enumerate().any(|(i, &r)| i != r) {
            return Err(LangIdError::Profile { line: 0, reason: "ranks not consecutive from 0" });
        }
        Ok(LanguageProfile { label: label.to_string(), ranks })
    }

    /// Serializes in rank order.
    pub fn to_tsv(&self) -> String {
        let mut by_rank: Vec<(&usize, &String)> = self.ranks.iter().map(|(g, r)| (r, g)).collect();
        by_rank.sort();
        let mut out = String::new();
        for (rank, gram) in by_rank {
            let _ = writeln!(out, "{gram}\t{rank}");
        }
        out
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn rank(&self, gram: &str) -> Option<usize> {
        self.ranks.get(gram).copied()
    }

    /// Out-of-place distance of a document profile (n-grams in rank order)
    /// to this profile. Missing n-grams cost the profile length.
    pub fn distance(&self, doc: &[String]) -> usize {
        let penalty = self.ranks.len().max(1);
        doc.iter()
            .enumerate()
            .map(|(r, g)| match self.ranks.get(g) {
                Some(&pr) => r.abs_diff(pr),
                None => penalty,
            })
            .sum()
    }
}

/// N-grams of letter-only words padded with `_`, most frequent first; ties
/// sorted lexicographically.
pub fn document_ngrams(text: &str, cfg: &NgramConfig) -> Vec<String> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut padded = String::new();
    for word in text.split(|c: char| !c.is_alphabetic()).filter(|w| !w.is_empty()) {
        padded.clear();
        padded.push('_');
        padded.extend(word.chars().flat_map(char::to_lowercase));
        padded.push('_');
        let chars: Vec<(usize, char)> = padded.char_indices().collect();
        for n in cfg.min_n..=cfg.max_n {
            if n > chars.len() {
                break;
            }
            for start in 0..=chars.len() - n {
                let from = chars[start].0;
                let to = chars.get(start + n).map_or(padded.len(), |c| c.0);
                let gram = &padded[from..to];
                if gram == "_" {
                    continue;
                }
                *counts.entry(gram.to_string()).or_default() += 1;
            }
        }
    }
    let mut grams: Vec<(String, usize)> = counts.into_iter().collect();
    grams.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    grams.truncate(cfg.top_k);
    grams.into_iter().map(|(g, _)| g).collect()
}

fn ranked_ngrams(text: &str, cfg: &NgramConfig) -> BTreeMap<String, usize> {
    document_ngrams(text, cfg).into_iter().enumerate().map(|(r, g)| (g, r)).collect()
}

/// Label of the profile closest to `text`, or `Unknown` when the text has
/// fewer than `cfg.min_words` words. Ties go to the smaller label.
pub fn identify_language(
    text: &str,
    profiles: &[LanguageProfile],
    cfg: &NgramConfig,
) -> Result<Language, LangIdError> {
    if profiles.is_empty() {
        return Err(LangIdError::NoProfiles);
    }
    let words = text.split_whitespace().count();
    if words == 0 || words < cfg.min_words {
        return Ok(Language::Unknown);
    }
    let doc = document_ngrams(text, cfg);
    if doc.is_empty() {
        return Ok(Language::Unknown);
    }
    let best = profiles
        .iter()
        .map(|p| (p.distance(&doc), p.label()))
        .min()
        .map(|(_, l)| l.to_string());
    Ok(best.map_or(Language::Unknown, Language::Known))
}
