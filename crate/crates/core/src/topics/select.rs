use alloc::vec::Vec;

use super::{coherence, fit_lda, CooccurrenceIndex, LdaConfig, TopicError, TopicModel};

/// Coherence summary of one fitted candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateScore {
    pub topics: usize,
    pub per_topic: Vec<f64>,
    pub mean: f64,
}

impl CandidateScore {
    /// Selection criterion `|mean coherence|`, smaller is better.
    pub fn objective(&self) -> f64 {
        self.mean.abs()
    }
}

#[derive(Debug, Clone)]
pub struct Selection {
    pub topics: usize,
    pub scores: Vec<CandidateScore>,
    pub model: TopicModel,
}

/// Fits one candidate and scores its top-`top_n` words per topic.
pub fn score_candidate(
    docs: &[Vec<u32>],
    vocab_size: usize,
    index: &CooccurrenceIndex,
    cfg: &LdaConfig,
    top_n: usize,
) -> Result<(CandidateScore, TopicModel), TopicError> {
    let model = fit_lda(docs, vocab_size, cfg)?;
    let per_topic = (0..model.topics)
        .map(|t| coherence(&model.top_words(t, top_n), index))
        .collect::<Result<Vec<f64>, _>>()?;
    let mean = per_topic.iter().sum::<f64>() / per_topic.len() as f64;
    Ok((CandidateScore { topics: cfg.topics, per_topic, mean }, model))
}

/// Index of the candidate with the smallest objective; ties go to fewer topics.
pub fn choose_topic_count(scores: &[CandidateScore]) -> Option<usize> {
    (0..scores.len()).min_by(|&a, &b| {
        scores[a]
            .objective()
            .total_cmp(&scores[b].objective())
            .then(scores[a].topics.cmp(&scores[b].topics))
    })
}

/// Fits a model per candidate topic count on documents longer than
/// `min_len` tokens and keeps the one whose mean coherence is closest to 0.
/// `make_cfg` supplies the sampler settings for each topic count.
pub fn select_topic_count(
    docs: &[Vec<u32>],
    vocab_size: usize,
    candidates: &[usize],
    min_len: usize,
    top_n: usize,
    make_cfg: impl Fn(usize) -> LdaConfig,
) -> Result<Selection, TopicError> {
    if candidates.is_empty() {
        return Err(TopicError::NoCandidates);
    }
    let kept: Vec<Vec<u32>> = docs.iter().filter(|d| d.len() > min_len).cloned().collect();
    if kept.is_empty() {
        return Err(TopicError::NoDocuments);
    }
    let index = CooccurrenceIndex::new(&kept, vocab_size);
    let mut scores = Vec::with_capacity(candidates.len());
    let mut models = Vec::with_capacity(candidates.len());
    for &t in candidates {
        let (score, model) = score_candidate(&kept, vocab_size, &index, &make_cfg(t), top_n)?;
        scores.push(score);
        models.push(model);
    }
    let best = choose_topic_count(&scores).ok_or(TopicError::NoCandidates)?;
    let model = models.swap_remove(best);
    Ok(Selection { topics: scores[best].topics, scores, model })
}
