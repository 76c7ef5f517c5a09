//! Knowledge-graph topic labeling: a topic's top words are matched to
//! concepts, the two-hop candidate neighborhood is extracted, and the concept
//! carrying the most random-walk current between word concepts names the
//! topic.

mod flow;
mod kg;

pub use flow::{FlowBetweenness, Ground};
pub use kg::{normalize_label, CandidateSubgraph, Concept, KnowledgeGraph, LoadReport, Relation};

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("knowledge graph has no usable triples")]
    NoTriples,
    #[error("no concept matches any of the words {0:?}")]
    NoMatchingConcept(Vec<String>),
    #[error("need at least two anchor concepts, found {0}")]
    TooFewAnchors(usize),
}

/// Suitability of one candidate concept.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelScore {
    /// Index in the knowledge graph.
    pub concept: usize,
    pub label: String,
    pub gamma: f64,
}

/// Suitability of every vertex of a candidate subgraph, in vertex order.
pub fn frwbc_scores(kg: &KnowledgeGraph, g: &CandidateSubgraph) -> Result<Vec<LabelScore>, LabelError> {
    let scorer = FlowBetweenness::new(g.vertices.len(), &g.edges, Ground::First);
    let gamma = scorer.scores(&g.anchors)?;
    Ok(g.vertices
        .iter()
        .zip(gamma)
        .map(|(&concept, gamma)| LabelScore { concept, label: kg.concept(concept).label.clone(), gamma })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopicLabel {
    pub best: LabelScore,
    pub runner_ups: Vec<LabelScore>,
}

/// Best-scoring concept for a topic plus up to five runner-ups. Ties are
/// broken by label, then by concept id.
pub fn label_topic<S: AsRef<str>>(kg: &KnowledgeGraph, top_words: &[S]) -> Result<TopicLabel, LabelError> {
    let g = kg.candidate_subgraph(top_words)?;
    let mut scores = frwbc_scores(kg, &g)?;
    scores.sort_by(|a, b| {
        b.gamma
            .total_cmp(&a.gamma)
            .then_with(|| a.label.cmp(&b.label))
            .then_with(|| kg.concept(a.concept).id.cmp(&kg.concept(b.concept).id))
    });
    let mut it = scores.into_iter();
    let best = it.next().expect("candidate subgraph has at least one vertex");
    Ok(TopicLabel { best, runner_ups: it.take(5).collect() })
}
