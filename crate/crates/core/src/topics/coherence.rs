use alloc::vec;
use alloc::vec::Vec;

use super::TopicError;

/// Per-word posting lists for document and co-document frequencies.
#[derive(Debug, Clone)]
pub struct CooccurrenceIndex {
    postings: Vec<Vec<u32>>,
}

impl CooccurrenceIndex {
    pub fn new(docs: &[Vec<u32>], vocab_size: usize) -> Self {
        let mut postings = vec![Vec::new(); vocab_size];
        for (d, doc) in docs.iter().enumerate() {
            for &w in doc {
                let list: &mut Vec<u32> = &mut postings[w as usize];
                if list.last() != Some(&(d as u32)) {
                    list.push(d as u32);
                }
            }
        }
        CooccurrenceIndex { postings }
    }

    /// Number of documents containing `w`.
    pub fn doc_freq(&self, w: u32) -> usize {
        self.postings.get(w as usize).map_or(0, Vec::len)
    }

    /// Number of documents containing both `a` and `b`.
    pub fn co_doc_freq(&self, a: u32, b: u32) -> usize {
        let (Some(x), Some(y)) = (self.postings.get(a as usize), self.postings.get(b as usize)) else {
            return 0;
        };
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < x.len() && j < y.len() {
            match x[i].cmp(&y[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }
}

/// `sum_{i>=2} sum_{j<i} ln((F(w_i, w_j) + 1) / F(w_j))` over the words in
/// the given order.
pub fn coherence(top_words: &[u32], index: &CooccurrenceIndex) -> Result<f64, TopicError> {
    if let Some(&word) = top_words.iter().find(|&&w| index.doc_freq(w) == 0) {
        return Err(TopicError::AbsentWord { word });
    }
    let mut c = 0.0;
    for i in 1..top_words.len() {
        for j in 0..i {
            let joint = index.co_doc_freq(top_words[i], top_words[j]) as f64;
            c += libm::log((joint + 1.0) / index.doc_freq(top_words[j]) as f64);
        }
    }
    Ok(c)
}
