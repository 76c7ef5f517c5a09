//! On-disk formats of the pipeline artifacts.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use torcontent_core::graph::{DomainGraph, DomainGraphBuilder};
use torcontent_core::labeling::{KnowledgeGraph, LoadReport};
use torcontent_core::topics::{TopicModel, Vocabulary};

use crate::{Error, Result};

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path.display(), e))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display(), e))?;
    }
    std::fs::write(path, bytes).map_err(|e| Error::io(path.display(), e))
}

/// Hex SHA-256 of `bytes`, shortened to 16 characters.
pub fn fingerprint(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// `src dst` pairs separated by whitespace; `#` comments and blank lines
/// are ignored, extra columns too.
pub fn parse_edge_list(src: &str, source: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        match (it.next(), it.next()) {
            (Some(a), Some(b)) => out.push((a.to_string(), b.to_string())),
            _ => return Err(Error::Data(format!("{source}:{}: expected two domains", i + 1))),
        }
    }
    Ok(out)
}

pub fn write_edge_list<'a, W: Write>(
    mut out: W,
    edges: impl IntoIterator<Item = (&'a str, &'a str)>,
) -> std::io::Result<()> {
    for (a, b) in edges {
        writeln!(out, "{a} {b}")?;
    }
    Ok(())
}

/// `domain,label` rows. A first row of exactly `domain,label` is a header;
/// `#` lines are comments. Later rows override earlier ones.
pub fn parse_labels(src: &str, source: &str) -> Result<BTreeMap<String, String>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(src.as_bytes());
    let mut out = BTreeMap::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| Error::Data(format!("{source}: {e}")))?;
        if row.len() == 1 && row[0].is_empty() {
            continue;
        }
        if row.len() != 2 {
            let line = row.position().map_or(i + 1, |p| p.line() as usize);
            return Err(Error::Data(format!("{source}:{line}: expected domain,label")));
        }
        if i == 0 && &row[0] == "domain" && &row[1] == "label" {
            continue;
        }
        out.insert(row[0].to_string(), row[1].to_string());
    }
    Ok(out)
}

pub fn write_labels<W: Write>(out: W, labels: &BTreeMap<String, String>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Data(e.to_string());
    w.write_record(["domain", "label"]).map_err(csv_err)?;
    for (d, l) in labels {
        w.write_record([d, l]).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Data(e.to_string()))
}

/// Vertices are the edge endpoints plus every labeled domain.
pub fn build_graph(edges: &[(String, String)], labels: &BTreeMap<String, String>) -> DomainGraph {
    let mut b = DomainGraphBuilder::new();
    for d in labels.keys() {
        b.add_vertex(d);
    }
    for (s, t) in edges {
        b.add_edge(s, t);
    }
    b.build(labels)
}

/// Loads an edge list and labels file; the fingerprint covers both inputs.
pub fn load_graph(edges: &Path, labels: &Path) -> Result<(DomainGraph, String)> {
    let e_src = read_text(edges)?;
    let l_src = read_text(labels)?;
    let e = parse_edge_list(&e_src, &edges.display().to_string())?;
    let l = parse_labels(&l_src, &labels.display().to_string())?;
    if e.is_empty() && l.is_empty() {
        return Err(Error::Data(format!("{}: empty graph", edges.display())));
    }
    let g = build_graph(&e, &l);
    let mut canon = Vec::new();
    write_edge_list(&mut canon, g.edges().map(|(a, b)| (g.name(a), g.name(b)))).unwrap();
    for v in 0..g.len() {
        writeln!(canon, "{}\t{}", g.name(v), g.community_of(v)).unwrap();
    }
    Ok((g, fingerprint(&canon)))
}

pub fn load_kg(path: &Path) -> Result<(KnowledgeGraph, LoadReport)> {
    let src = read_text(path)?;
    KnowledgeGraph::parse_tsv(&src).map_err(|e| Error::Data(format!("{}: {e}", path.display())))
}

pub const MODEL_FORMAT: &str = "torcontent-model/1";

/// Fitted topic model with everything needed to interpret it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub vocab_fingerprint: String,
    pub min_words: usize,
    pub top_n: usize,
    pub vocabulary: Vocabulary,
    /// Page addresses in document order.
    pub documents: Vec<String>,
    pub model: TopicModel,
    /// Coherence of each topic's top words.
    pub coherence: Vec<f64>,
}

pub fn vocab_fingerprint(v: &Vocabulary) -> String {
    let mut buf = Vec::new();
    for (i, w) in v.words().iter().enumerate() {
        writeln!(buf, "{w}\t{}", v.doc_freq(i as u32)).unwrap();
    }
    fingerprint(&buf)
}

impl ModelFile {
    pub fn new(vocabulary: Vocabulary, documents: Vec<String>, model: TopicModel, min_words: usize, top_n: usize) -> Self {
        ModelFile {
            format: MODEL_FORMAT.into(),
            vocab_fingerprint: vocab_fingerprint(&vocabulary),
            min_words,
            top_n,
            vocabulary,
            documents,
            model,
            coherence: Vec::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let src = read_text(path)?;
        let m: ModelFile =
            serde_json::from_str(&src).map_err(|e| Error::Data(format!("{}: bad model file: {e}", path.display())))?;
        if m.format != MODEL_FORMAT {
            return Err(Error::Data(format!("{}: unsupported model format {:?}", path.display(), m.format)));
        }
        if vocab_fingerprint(&m.vocabulary) != m.vocab_fingerprint {
            return Err(Error::Data(format!("{}: vocabulary does not match its fingerprint", path.display())));
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn top_words(&self, topic: usize, n: usize) -> Vec<String> {
        self.model.top_words(topic, n).into_iter().map(|w| self.vocabulary.word(w).to_string()).collect()
    }
}

/// Dominant topic per domain, tagged with the model it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainTopics {
    pub vocab_fingerprint: String,
    pub topics: BTreeMap<String, usize>,
}

/// Knowledge-graph label of each topic, tagged with its model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicLabels {
    pub vocab_fingerprint: String,
    pub topics: BTreeMap<usize, TopicLabelEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicLabelEntry {
    pub label: String,
    pub gamma: f64,
    pub runner_ups: Vec<(String, f64)>,
    pub top_words: Vec<String>,
}

pub fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let src = read_text(path)?;
    serde_json::from_str(&src).map_err(|e| Error::Data(format!("{}: {e}", path.display())))
}

pub fn to_json_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
