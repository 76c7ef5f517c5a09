//! Page records, corpus union and filtering, and per-domain documents.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use torcontent_core::html::{extract_text, word_count};
use torcontent_core::langid::{identify_language, LanguageProfile, NgramConfig};

use crate::address::{self, Kind};
use crate::crawler::extract_links;
use crate::records::CrawlRecord;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageRecord {
    pub address: String,
    pub domain: String,
    pub kind: Kind,
    /// ISO 639-1 code or `unknown`.
    pub language: String,
    pub word_count: usize,
    pub crawl_id: u32,
    pub text: String,
    /// Normalized absolute http(s) link targets.
    pub links: Vec<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub failed: bool,
    /// Raw page; not part of the corpus file.
    #[serde(skip)]
    pub html: Vec<u8>,
}

impl PageRecord {
    pub fn from_record(rec: &CrawlRecord, profiles: &[LanguageProfile], cfg: &NgramConfig) -> Result<Self> {
        let url = address::normalize(&rec.url).map_err(|e| Error::Data(e.to_string()))?;
        let text = extract_text(&rec.html);
        let language = identify_language(&text, profiles, cfg)
            .map_err(|e| Error::Usage(format!("language profiles: {e}")))?
            .code()
            .to_string();
        Ok(PageRecord {
            address: url.to_string(),
            domain: address::domain(&url),
            kind: address::classify(&url),
            language,
            word_count: word_count(&text),
            crawl_id: rec.crawl_id,
            links: extract_links(&rec.html, &url).iter().map(|u| u.to_string()).collect(),
            text,
            failed: rec.error.is_some(),
            html: rec.html.clone(),
        })
    }

    /// Whether `self` should replace `other` for the same address: working
    /// fetches beat failed ones, then the later crawl wins.
    fn supersedes(&self, other: &PageRecord) -> bool {
        (!self.failed, self.crawl_id) >= (!other.failed, other.crawl_id)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pages: BTreeMap<String, PageRecord>,
}

/// Counts from building a corpus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub records: usize,
    pub bad_addresses: usize,
    pub duplicates: usize,
}

impl Corpus {
    pub fn new() -> Self {
        Corpus::default()
    }

    /// Adds a page, resolving address collisions as in [`union_crawls`].
    /// Returns whether the address was already present.
    pub fn insert(&mut self, page: PageRecord) -> bool {
        match self.pages.get(&page.address) {
            Some(old) => {
                if page.supersedes(old) {
                    self.pages.insert(page.address.clone(), page);
                }
                true
            }
            None => {
                self.pages.insert(page.address.clone(), page);
                false
            }
        }
    }

    pub fn from_records(
        records: &[CrawlRecord],
        profiles: &[LanguageProfile],
        cfg: &NgramConfig,
    ) -> Result<(Corpus, IngestReport)> {
        if profiles.is_empty() {
            return Err(Error::Usage("no language profiles".into()));
        }
        let mut corpus = Corpus::new();
        let mut report = IngestReport { records: records.len(), ..Default::default() };
        for rec in records {
            match PageRecord::from_record(rec, profiles, cfg) {
                Ok(page) => report.duplicates += corpus.insert(page) as usize,
                Err(Error::Data(msg)) => {
                    log::warn!("skipping record: {msg}");
                    report.bad_addresses += 1;
                }
                Err(e) => return Err(e),
            }
        }
        Ok((corpus, report))
    }

    pub fn len(&self) -> usize {
        self.pages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pages.is_empty()
    }

    /// Pages in ascending address order.
    pub fn pages(&self) -> impl Iterator<Item = &PageRecord> {
        self.pages.values()
    }

    pub fn get(&self, address: &str) -> Option<&PageRecord> {
        self.pages.get(address)
    }

    /// Crawl ids present among the pages.
    pub fn provenance(&self) -> BTreeSet<u32> {
        self.pages.values().map(|p| p.crawl_id).collect()
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for p in self.pages.values() {
            serde_json::to_writer(&mut out, p)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn read_jsonl<R: BufRead>(input: R, source: &str) -> Result<Corpus> {
        let mut corpus = Corpus::new();
        for (i, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::io(source, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let page: PageRecord = serde_json::from_str(&line)
                .map_err(|e| Error::Data(format!("{source}:{}: bad page: {e}", i + 1)))?;
            corpus.insert(page);
        }
        Ok(corpus)
    }
}

/// Address-keyed union. On a shared address the page from the later crawl
/// is kept, unless it is a failed fetch and the other is not.
pub fn union_crawls(a: Corpus, b: Corpus) -> Corpus {
    let mut out = a;
    for page in b.pages.into_values() {
        out.insert(page);
    }
    out
}

/// Selection applied by [`filter_corpus`]; `None` fields match anything.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PageFilter {
    /// Pages must have strictly more words.
    pub min_words: usize,
    pub language: Option<String>,
    pub kind: Option<Kind>,
}

impl PageFilter {
    pub fn matches(&self, p: &PageRecord) -> bool {
        p.word_count > self.min_words
            && self.language.as_ref().is_none_or(|l| &p.language == l)
            && self.kind.is_none_or(|k| p.kind == k)
    }
}

pub fn filter_corpus(corpus: &Corpus, filter: &PageFilter) -> Corpus {
    Corpus {
        pages: corpus
            .pages
            .iter()
            .filter(|(_, p)| filter.matches(p))
            .map(|(a, p)| (a.clone(), p.clone()))
            .collect(),
    }
}

/// Each domain's page texts joined by spaces in ascending address order.
pub fn group_by_domain(corpus: &Corpus) -> BTreeMap<String, String> {
    let mut out: BTreeMap<String, String> = BTreeMap::new();
    for p in corpus.pages() {
        if p.text.is_empty() {
            out.entry(p.domain.clone()).or_default();
            continue;
        }
        let doc = out.entry(p.domain.clone()).or_default();
        if !doc.is_empty() {
            doc.push(' ');
        }
        doc.push_str(&p.text);
    }
    out
}

/// Cross-domain hyperlinks between domains of `corpus` that point to other
/// onion domains of `corpus`, collapsed to one edge per ordered pair.
pub fn domain_edges(corpus: &Corpus) -> BTreeSet<(String, String)> {
    let domains: BTreeSet<&str> = corpus.pages().map(|p| p.domain.as_str()).collect();
    let mut edges = BTreeSet::new();
    for p in corpus.pages() {
        for link in &p.links {
            let Ok(url) = address::normalize(link) else { continue };
            if address::classify(&url) != Kind::Onion {
                continue;
            }
            let d = address::domain(&url);
            if d != p.domain && domains.contains(d.as_str()) {
                edges.insert((p.domain.clone(), d));
            }
        }
    }
    edges
}
