use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::TopicError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub topics: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl LdaConfig {
    /// Symmetric priors alpha = 50/T and beta = 0.01, 1000 sweeps.
    pub fn new(topics: usize, seed: u64) -> Self {
        LdaConfig { topics, alpha: 50.0 / topics as f64, beta: 0.01, iterations: 1000, seed }
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }
}

/// Posterior-mean word-topic (`phi`, T×M) and topic-document (`theta`, N×T)
/// estimates taken from the final sampler state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicModel {
    pub topics: usize,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
    pub iterations: usize,
    pub vocab_size: usize,
    phi: Vec<f64>,
    theta: Vec<f64>,
    assignments: Vec<Vec<u16>>,
}

struct Counts {
    topics: usize,
    // word-major: word_topic[w * T + t]
    word_topic: Vec<u32>,
    topic_total: Vec<u32>,
    doc_topic: Vec<u32>,
}

pub fn fit_lda(
    docs: &[Vec<u32>],
    vocab_size: usize,
    cfg: &LdaConfig,
) -> Result<TopicModel, TopicError> {
    if docs.is_empty() {
        return Err(TopicError::NoDocuments);
    }
    if cfg.topics < 2 {
        return Err(TopicError::TooFewTopics(cfg.topics));
    }
    if cfg.iterations == 0 {
        return Err(TopicError::NoIterations);
    }
    if vocab_size == 0 {
        return Err(TopicError::EmptyVocabulary);
    }
    if let Some(&token) = docs.iter().flatten().find(|&&w| w as usize >= vocab_size) {
        return Err(TopicError::TokenOutOfRange { token, vocab_size });
    }
    let t_count = cfg.topics;
    assert!(t_count <= u16::MAX as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut counts = Counts {
        topics: t_count,
        word_topic: vec![0; vocab_size * t_count],
        topic_total: vec![0; t_count],
        doc_topic: vec![0; docs.len() * t_count],
    };
    let mut z: Vec<Vec<u16>> = docs
        .iter()
        .enumerate()
        .map(|(d, doc)| {
            doc.iter()
                .map(|&w| {
                    let t = rng.random_range(0..t_count);
                    counts.add(d, w, t);
                    t as u16
                })
                .collect()
        })
        .collect();

    let beta_sum = cfg.beta * vocab_size as f64;
    // 1 / (topic total + V beta), refreshed for the topics that change.
    let mut inv: Vec<f64> = counts.topic_total.iter().map(|&n| 1.0 / (n as f64 + beta_sum)).collect();
    let mut weights = vec![0.0f64; t_count];
    for _ in 0..cfg.iterations {
        for (d, (doc, zd)) in docs.iter().zip(z.iter_mut()).enumerate() {
            for (&w, zi) in doc.iter().zip(zd.iter_mut()) {
                let old = *zi as usize;
                counts.remove(d, w, old);
                inv[old] = 1.0 / (counts.topic_total[old] as f64 + beta_sum);
                let wt = &counts.word_topic[w as usize * t_count..(w as usize + 1) * t_count];
                let dt = &counts.doc_topic[d * t_count..(d + 1) * t_count];
                let mut total = 0.0;
                for (((slot, &nd), &nw), &r) in weights.iter_mut().zip(dt).zip(wt).zip(&inv) {
                    total += (nd as f64 + cfg.alpha) * (nw as f64 + cfg.beta) * r;
                    *slot = total;
                }
                let u = rng.random::<f64>() * total;
                let new = weights.iter().position(|&c| u < c).unwrap_or(t_count - 1);
                counts.add(d, w, new);
                inv[new] = 1.0 / (counts.topic_total[new] as f64 + beta_sum);
                *zi = new as u16;
            }
        }
    }

    let mut phi = vec![0.0; t_count * vocab_size];
    for t in 0..t_count {
        let denom = counts.topic_total[t] as f64 + beta_sum;
        for w in 0..vocab_size {
            phi[t * vocab_size + w] = (counts.word_topic[w * t_count + t] as f64 + cfg.beta) / denom;
        }
    }
    let alpha_sum = cfg.alpha * t_count as f64;
    let mut theta = vec![0.0; docs.len() * t_count];
    for (d, doc) in docs.iter().enumerate() {
        let denom = doc.len() as f64 + alpha_sum;
        for t in 0..t_count {
            theta[d * t_count + t] = (counts.doc_topic[d * t_count + t] as f64 + cfg.alpha) / denom;
        }
    }
    Ok(TopicModel {
        topics: t_count,
        alpha: cfg.alpha,
        beta: cfg.beta,
        seed: cfg.seed,
        iterations: cfg.iterations,
        vocab_size,
        phi,
        theta,
        assignments: z,
    })
}

impl Counts {
    #[inline]
    fn add(&mut self, d: usize, w: u32, t: usize) {
        self.word_topic[w as usize * self.topics + t] += 1;
        self.topic_total[t] += 1;
        self.doc_topic[d * self.topics + t] += 1;
    }

    #[inline]
    fn remove(&mut self, d: usize, w: u32, t: usize) {
        self.word_topic[w as usize * self.topics + t] -= 1;
        self.topic_total[t] -= 1;
        self.doc_topic[d * self.topics + t] -= 1;
    }
}

impl TopicModel {
    /// Rebuilds a model from stored distributions (no sampler state).
    pub fn from_distributions(
        cfg: &LdaConfig,
        vocab_size: usize,
        phi: Vec<f64>,
        theta: Vec<f64>,
    ) -> Self {
        assert_eq!(phi.len(), cfg.topics * vocab_size);
        assert_eq!(theta.len() % cfg.topics, 0);
        TopicModel {
            topics: cfg.topics,
            alpha: cfg.alpha,
            beta: cfg.beta,
            seed: cfg.seed,
            iterations: cfg.iterations,
            vocab_size,
            phi,
            theta,
            assignments: Vec::new(),
        }
    }

    pub fn documents(&self) -> usize {
        self.theta.len() / self.topics
    }

    /// p(w | t) for every word.
    pub fn phi(&self, topic: usize) -> &[f64] {
        &self.phi[topic * self.vocab_size..(topic + 1) * self.vocab_size]
    }

    /// p(t | d) for every topic.
    pub fn theta(&self, doc: usize) -> &[f64] {
        &self.theta[doc * self.topics..(doc + 1) * self.topics]
    }

    pub fn assignments(&self) -> &[Vec<u16>] {
        &self.assignments
    }

    /// The `n` most probable words of a topic, by descending probability
    /// (ties to the lower id).
    pub fn top_words(&self, topic: usize, n: usize) -> Vec<u32> {
        let row = self.phi(topic);
        let mut ids: Vec<u32> = (0..row.len() as u32).collect();
        ids.sort_by(|&a, &b| row[b as usize].total_cmp(&row[a as usize]).then(a.cmp(&b)));
        ids.truncate(n);
        ids
    }

    /// Topic distribution of an unseen document by Gibbs sampling with
    /// `phi` held fixed, averaged over the second half of the sweeps.
    pub fn infer(&self, doc: &[u32], iterations: usize, seed: u64) -> Result<Vec<f64>, TopicError> {
        if doc.is_empty() {
            return Err(TopicError::EmptyDocument);
        }
        if let Some(&token) = doc.iter().find(|&&w| w as usize >= self.vocab_size) {
            return Err(TopicError::TokenOutOfRange { token, vocab_size: self.vocab_size });
        }
        let iterations = iterations.max(2);
        let t_count = self.topics;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut dt = vec![0u32; t_count];
        let mut z: Vec<usize> = doc
            .iter()
            .map(|_| {
                let t = rng.random_range(0..t_count);
                dt[t] += 1;
                t
            })
            .collect();
        let mut weights = vec![0.0; t_count];
        let mut acc = vec![0.0; t_count];
        let burn_in = iterations / 2;
        let denom = doc.len() as f64 + self.alpha * t_count as f64;
        for it in 0..iterations {
            for (i, &w) in doc.iter().enumerate() {
                dt[z[i]] -= 1;
                let mut total = 0.0;
                for t in 0..t_count {
                    total += self.phi[t * self.vocab_size + w as usize] * (dt[t] as f64 + self.alpha);
                    weights[t] = total;
                }
                let u = rng.random::<f64>() * total;
                let new = weights.iter().position(|&c| u < c).unwrap_or(t_count - 1);
                dt[new] += 1;
                z[i] = new;
            }
            if it >= burn_in {
                for t in 0..t_count {
                    acc[t] += (dt[t] as f64 + self.alpha) / denom;
                }
            }
        }
        let kept = (iterations - burn_in) as f64;
        acc.iter_mut().for_each(|a| *a /= kept);
        Ok(acc)
    }

    /// Most prevalent topic of a document under fold-in inference.
    ///
    /// Topics whose `phi` agrees on every word of the document cannot be told
    /// apart by the sampler, so their mass is pooled onto the lowest id before
    /// taking the argmax. Remaining ties go to the lower id.
    pub fn dominant_topic(&self, doc: &[u32], iterations: usize, seed: u64) -> Result<usize, TopicError> {
        let theta = self.infer(doc, iterations, seed)?;
        let mut class_of: Vec<usize> = (0..self.topics).collect();
        for t in 1..self.topics {
            if let Some(rep) = (0..t).find(|&r| {
                class_of[r] == r
                    && doc.iter().all(|&w| {
                        self.phi[r * self.vocab_size + w as usize]
                            == self.phi[t * self.vocab_size + w as usize]
                    })
            }) {
                class_of[t] = rep;
            }
        }
        let mut pooled = vec![0.0; self.topics];
        for (t, &c) in class_of.iter().enumerate() {
            pooled[c] += theta[t];
        }
        let mut best = 0;
        for t in 1..self.topics {
            if pooled[t] > pooled[best] {
                best = t;
            }
        }
        Ok(best)
    }
}
