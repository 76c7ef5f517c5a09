use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torcontent_core::topics::{select_topic_count, LdaConfig};

use crate::{within, Verdict};

const DOCS: usize = 500;
const WORDS_PER_CLUSTER: usize = 20;
const SEEDS: u64 = 5;
const MIN_CORRECT: usize = 4;
const MIN_PURITY: f64 = 0.9;

/// Each document draws all its words from one of `k` disjoint clusters,
/// with Zipf weights inside the cluster. Word `w` belongs to cluster
/// `w / WORDS_PER_CLUSTER`.
fn corpus(k: usize, seed: u64) -> Vec<Vec<u32>> {
    let weights: Vec<f64> = (0..WORDS_PER_CLUSTER).map(|r| 1.0 / (r as f64 + 1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..DOCS)
        .map(|_| {
            let c = rng.random_range(0..k);
            let len = rng.random_range(60..100);
            (0..len)
                .map(|_| {
                    let mut u = rng.random::<f64>() * total;
                    let mut r = 0;
                    while r + 1 < WORDS_PER_CLUSTER && u >= weights[r] {
                        u -= weights[r];
                        r += 1;
                    }
                    (c * WORDS_PER_CLUSTER + r) as u32
                })
                .collect()
        })
        .collect()
}

pub fn check() -> Verdict {
    let t = Instant::now();
    let grid: Vec<usize> = (2..=8).collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for k in [2usize, 3] {
        let mut picks = Vec::new();
        let mut purity_sum = 0.0;
        for seed in 0..SEEDS {
            let docs = corpus(k, seed);
            let sel = match select_topic_count(&docs, k * WORDS_PER_CLUSTER, &grid, 50, 10, |t| LdaConfig::new(t, seed)) {
                Ok(s) => s,
                Err(e) => return Verdict::fail(format!("K={k} seed {seed}: {e}")),
            };
            picks.push(sel.topics);
            let purity: f64 = (0..sel.model.topics)
                .map(|topic| {
                    let top = sel.model.top_words(topic, 5);
                    let mut per = vec![0usize; k];
                    for w in &top {
                        per[*w as usize / WORDS_PER_CLUSTER] += 1;
                    }
                    *per.iter().max().unwrap() as f64 / top.len() as f64
                })
                .sum::<f64>()
                / sel.model.topics as f64;
            purity_sum += purity;
        }
        let correct = picks.iter().filter(|&&p| p == k).count();
        let purity = purity_sum / SEEDS as f64;
        pass &= correct >= MIN_CORRECT && purity >= MIN_PURITY;
        parts.push(format!("K={k}: picked {picks:?}, mean top-5 purity {purity:.3}"));
    }
    within(Verdict::new(pass, parts.join("; ")), t.elapsed(), Duration::from_secs(120))
}
