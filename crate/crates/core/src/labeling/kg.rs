use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::LabelError;

/// Relation types kept when loading a snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Type,
    Subject,
    Broader,
    BroaderOf,
    SubClassOf,
}

impl Relation {
    /// Recognizes prefixed names and full IRIs of the five categorical
    /// relations; everything else is `None`.
    pub fn parse(predicate: &str) -> Option<Relation> {
        let p = predicate.trim().trim_start_matches('<').trim_end_matches('>');
        Some(match p {
            "rdfs:type" | "rdf:type" | "http://www.w3.org/1999/02/22-rdf-syntax-ns#type" => Relation::Type,
            "dcterms:subject" | "http://purl.org/dc/terms/subject" => Relation::Subject,
            "skos:broader" | "http://www.w3.org/2004/02/skos/core#broader" => Relation::Broader,
            "skos:broaderOf" | "http://www.w3.org/2004/02/skos/core#broaderOf" => Relation::BroaderOf,
            "rdfs:subClassOf" | "http://www.w3.org/2000/01/rdf-schema#subClassOf" => Relation::SubClassOf,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Type => "rdfs:type",
            Relation::Subject => "dcterms:subject",
            Relation::Broader => "skos:broader",
            Relation::BroaderOf => "skos:broaderOf",
            Relation::SubClassOf => "rdfs:subClassOf",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Human-readable label of a term: the local name after the last `/`, `#`
/// or `:`, lowercased, with underscores as spaces.
pub fn normalize_label(term: &str) -> String {
    let t = term.trim().trim_start_matches('<').trim_end_matches('>');
    let local = t.rsplit(['/', '#']).next().unwrap_or(t);
    let local = local.rsplit(':').next().unwrap_or(local);
    local.replace('_', " ").to_lowercase().trim().to_string()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concept {
    /// Term as written in the snapshot, without angle brackets.
    pub id: String,
    pub label: String,
}

/// Counts of lines dropped while loading.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub triples: usize,
    pub malformed: usize,
    pub other_predicates: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeGraph {
    concepts: Vec<Concept>,
    by_id: BTreeMap<String, usize>,
    by_label: BTreeMap<String, Vec<usize>>,
    relations: Vec<(usize, Relation, usize)>,
    out: Vec<Vec<usize>>,
}

impl KnowledgeGraph {
    /// Parses `subject<TAB>predicate<TAB>object` lines. Blank lines and `#`
    /// comments are ignored; lines without exactly three non-empty fields are
    /// counted as malformed and skipped.
    pub fn parse_tsv(src: &str) -> Result<(KnowledgeGraph, LoadReport), LabelError> {
        let mut kg = KnowledgeGraph {
            concepts: Vec::new(),
            by_id: BTreeMap::new(),
            by_label: BTreeMap::new(),
            relations: Vec::new(),
            out: Vec::new(),
        };
        let mut report = LoadReport::default();
        let mut seen = BTreeSet::new();
        for line in src.lines() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            if fields.len() != 3 || fields.iter().any(|f| f.is_empty()) {
                report.malformed += 1;
                continue;
            }
            let Some(rel) = Relation::parse(fields[1]) else {
                report.other_predicates += 1;
                continue;
            };
            let s = kg.intern(fields[0]);
            let o = kg.intern(fields[2]);
            if seen.insert((s, rel, o)) {
                kg.relations.push((s, rel, o));
                report.triples += 1;
            }
        }
        if kg.relations.is_empty() {
            return Err(LabelError::NoTriples);
        }
        kg.out = vec![Vec::new(); kg.concepts.len()];
        for &(s, _, o) in &kg.relations {
            kg.out[s].push(o);
        }
        for list in &mut kg.out {
            list.sort_unstable();
            list.dedup();
        }
        Ok((kg, report))
    }

    fn intern(&mut self, term: &str) -> usize {
        let id = term.trim_start_matches('<').trim_end_matches('>');
        if let Some(&i) = self.by_id.get(id) {
            return i;
        }
        let i = self.concepts.len();
        let label = normalize_label(id);
        self.by_label.entry(label.clone()).or_default().push(i);
        self.concepts.push(Concept { id: id.to_string(), label });
        self.by_id.insert(id.to_string(), i);
        i
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concept(&self, i: usize) -> &Concept {
        &self.concepts[i]
    }

    pub fn relations(&self) -> &[(usize, Relation, usize)] {
        &self.relations
    }

    /// Concepts whose normalized label equals the normalized word.
    pub fn matching(&self, word: &str) -> &[usize] {
        self.by_label.get(&normalize_label(word)).map_or(&[], Vec::as_slice)
    }

    /// Sorted `subject<TAB>predicate<TAB>object` lines of the retained
    /// relations, by concept id.
    pub fn dump(&self) -> String {
        let mut lines: Vec<String> = self
            .relations
            .iter()
            .map(|&(s, r, o)| {
                let mut l = self.concepts[s].id.clone();
                l.push('\t');
                l.push_str(r.as_str());
                l.push('\t');
                l.push_str(&self.concepts[o].id);
                l
            })
            .collect();
        lines.sort();
        let mut out = String::new();
        for l in lines {
            out.push_str(&l);
            out.push('\n');
        }
        out
    }

    /// Anchors matching `words` plus everything reachable from them in at
    /// most two directed hops, with all relations among those concepts.
    /// Words without a matching concept are ignored.
    pub fn candidate_subgraph<S: AsRef<str>>(&self, words: &[S]) -> Result<CandidateSubgraph, LabelError> {
        let mut anchors: Vec<usize> = words.iter().flat_map(|w| self.matching(w.as_ref()).iter().copied()).collect();
        anchors.sort_unstable();
        anchors.dedup();
        if anchors.is_empty() {
            return Err(LabelError::NoMatchingConcept(
                words.iter().map(|w| w.as_ref().to_string()).collect(),
            ));
        }
        let mut depth = vec![u8::MAX; self.concepts.len()];
        let mut frontier = anchors.clone();
        for &a in &anchors {
            depth[a] = 0;
        }
        for hop in 1..=2u8 {
            let mut next = Vec::new();
            for &v in &frontier {
                for &u in &self.out[v] {
                    if depth[u] == u8::MAX {
                        depth[u] = hop;
                        next.push(u);
                    }
                }
            }
            frontier = next;
        }
        let vertices: Vec<usize> = (0..self.concepts.len()).filter(|&v| depth[v] != u8::MAX).collect();
        let local = |v: usize| vertices.binary_search(&v).ok();
        let mut edges = Vec::new();
        for &(s, _, o) in &self.relations {
            if let (Some(a), Some(b)) = (local(s), local(o)) {
                if a != b {
                    edges.push((a, b));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let anchors = anchors.iter().filter_map(|&a| local(a)).collect();
        Ok(CandidateSubgraph { vertices, anchors, edges })
    }
}

/// Restricted neighborhood of a topic's words; vertex indices are local,
/// `vertices[i]` is the concept index in the knowledge graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSubgraph {
    pub vertices: Vec<usize>,
    pub anchors: Vec<usize>,
    /// Directed, deduplicated, without self-loops.
    pub edges: Vec<(usize, usize)>,
}
