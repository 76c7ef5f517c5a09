//! LDA topic modeling: vocabulary, collapsed Gibbs sampling, UMass-style
//! coherence, and coherence-driven selection of the topic count.

mod coherence;
mod lda;
mod select;
mod vocab;

pub use coherence::{coherence, CooccurrenceIndex};
pub use lda::{fit_lda, LdaConfig, TopicModel};
pub use select::{
    choose_topic_count, score_candidate, select_topic_count, CandidateScore, Selection,
};
pub use vocab::{build_vocabulary, Vocabulary};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopicError {
    #[error("no documents")]
    NoDocuments,
    #[error("vocabulary is empty after filtering")]
    EmptyVocabulary,
    #[error("topic count must be at least 2, got {0}")]
    TooFewTopics(usize),
    #[error("at least one iteration is required")]
    NoIterations,
    #[error("token id {token} outside vocabulary of size {vocab_size}")]
    TokenOutOfRange { token: u32, vocab_size: usize },
    #[error("word {word} does not occur in any document")]
    AbsentWord { word: u32 },
    #[error("document is empty")]
    EmptyDocument,
    #[error("no candidate topic counts")]
    NoCandidates,
}
