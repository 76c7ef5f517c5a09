use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::TopicError;

/// Dense word index with per-word document frequency. Words are sorted, so
/// ids are stable for a given corpus and filter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    words: Vec<String>,
    doc_freq: Vec<u32>,
}

impl Vocabulary {
    pub fn from_parts(words: Vec<String>, doc_freq: Vec<u32>) -> Self {
        assert_eq!(words.len(), doc_freq.len());
        debug_assert!(words.windows(2).all(|w| w[0] < w[1]));
        Vocabulary { words, doc_freq }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn word(&self, id: u32) -> &str {
        &self.words[id as usize]
    }

    pub fn doc_freq(&self, id: u32) -> u32 {
        self.doc_freq[id as usize]
    }

    pub fn id(&self, word: &str) -> Option<u32> {
        self.words.binary_search_by(|w| w.as_str().cmp(word)).ok().map(|i| i as u32)
    }

    /// Maps tokens to ids, dropping out-of-vocabulary tokens.
    pub fn encode<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<u32> {
        tokens.iter().filter_map(|t| self.id(&t.as_ref().to_lowercase())).collect()
    }
}

/// Lowercased tokens occurring in at least `min_df` documents, minus
/// stopwords.
pub fn build_vocabulary<S: AsRef<str>>(
    docs: &[Vec<S>],
    min_df: usize,
    stopwords: &BTreeSet<String>,
) -> Result<Vocabulary, TopicError> {
    if docs.is_empty() {
        return Err(TopicError::NoDocuments);
    }
    let mut df: BTreeMap<String, u32> = BTreeMap::new();
    for doc in docs {
        let distinct: BTreeSet<String> = doc.iter().map(|t| t.as_ref().to_lowercase()).collect();
        for w in distinct {
            *df.entry(w).or_default() += 1;
        }
    }
    let (words, doc_freq): (Vec<String>, Vec<u32>) = df
        .into_iter()
        .filter(|(w, n)| *n as usize >= min_df && !w.is_empty() && !stopwords.contains(w))
        .unzip();
    if words.is_empty() {
        return Err(TopicError::EmptyVocabulary);
    }
    Ok(Vocabulary { words, doc_freq })
}
