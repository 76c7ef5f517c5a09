//! Pipeline stages. Each stage reads files, writes files, and marks its
//! output incomplete until it finishes. Timestamps go only to `run.log`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::AtomicBool;
use std::sync::Mutex;

use rayon::prelude::*;
use torcontent_core::graph::{summary_stats, DomainGraph};
use torcontent_core::labeling::{label_topic, LabelError};
use torcontent_core::langid::NgramConfig;
use torcontent_core::powerlaw::{community_tail_report_with, Bootstrap, TailRow};
use torcontent_core::text::tokenize;
use torcontent_core::topics::{
    build_vocabulary, choose_topic_count, score_candidate, CooccurrenceIndex, LdaConfig, TopicError,
};

use crate::address::Kind;
use crate::corpus::{domain_edges, filter_corpus, group_by_domain, Corpus, IngestReport, PageFilter};
use crate::crawler::{crawl, read_seeds, CrawlConfig, CrawlSummary, Fetcher, FixtureFetcher, HttpFetcher};
use crate::formats::{
    load_graph, load_json, load_kg, parse_labels, read_text, to_json_pretty, write_bytes,
    write_edge_list, write_labels, DomainTopics, ModelFile, TopicLabelEntry, TopicLabels,
};
use crate::records::{read_records, write_record, CrawlRecord};
use crate::report::{self, num, Table};
use crate::{profiles, Error, Result};

pub const MARKER: &str = "INCOMPLETE";
pub const RUN_LOG: &str = "run.log";

/// Output of one stage run. The marker stays behind unless [`finish`] is
/// called, so an interrupted or failed stage is visible on disk.
///
/// [`finish`]: Output::finish
pub struct Output {
    stage: &'static str,
    marker: PathBuf,
    log: PathBuf,
    started: String,
}

impl Output {
    /// Output directory `dir`.
    pub fn dir(stage: &'static str, dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display(), e))?;
        Self::start(stage, dir.join(MARKER), dir.join(RUN_LOG))
    }

    /// Single output file `path`; the marker is `path.incomplete`.
    pub fn file(stage: &'static str, path: &Path) -> Result<Self> {
        let mut marker = path.as_os_str().to_owned();
        marker.push(".incomplete");
        let log = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new(".")).join(RUN_LOG);
        Self::start(stage, PathBuf::from(marker), log)
    }

    fn start(stage: &'static str, marker: PathBuf, log: PathBuf) -> Result<Self> {
        write_bytes(&marker, format!("{stage}\n").as_bytes())?;
        Ok(Output { stage, marker, log, started: now() })
    }

    pub fn finish(self, detail: &str) -> Result<()> {
        std::fs::remove_file(&self.marker).map_err(|e| Error::io(self.marker.display(), e))?;
        let line = format!("{} {} {} ok {detail}\n", self.started, now(), self.stage);
        let mut f = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.log)
            .map_err(|e| Error::io(self.log.display(), e))?;
        f.write_all(line.as_bytes()).map_err(|e| Error::io(self.log.display(), e))
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

fn require(path: &Path) -> Result<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(Error::Usage(format!("{}: no such file", path.display())))
    }
}

// ---------------------------------------------------------------- crawl

pub struct CrawlArgs {
    pub seeds: PathBuf,
    pub out: PathBuf,
    /// Serve pages from a directory tree instead of the network.
    pub fixture: Option<PathBuf>,
    pub timeout: std::time::Duration,
    pub config: CrawlConfig,
}

pub fn run_crawl(args: &CrawlArgs, cancel: &AtomicBool) -> Result<CrawlSummary> {
    require(&args.seeds)?;
    let seeds = read_seeds(&args.seeds)?;
    let out = Output::file("crawl", &args.out)?;
    let file = std::fs::File::create(&args.out).map_err(|e| Error::io(args.out.display(), e))?;
    let writer = Mutex::new((std::io::BufWriter::new(file), None::<std::io::Error>));
    let sink = |rec: CrawlRecord| {
        let mut w = writer.lock().unwrap();
        if w.1.is_none() {
            if let Err(e) = write_record(&mut w.0, &rec) {
                w.1 = Some(e);
            }
        }
    };
    let fetcher: Box<dyn Fetcher> = match &args.fixture {
        Some(root) => Box::new(FixtureFetcher::new(root)),
        None => Box::new(HttpFetcher::new(args.timeout)),
    };
    let summary = crawl(&seeds, &args.config, &*fetcher, cancel, sink);
    let (mut w, err) = writer.into_inner().unwrap();
    if let Some(e) = err.or_else(|| w.flush().err()) {
        return Err(Error::io(args.out.display(), e));
    }
    if summary.cancelled {
        return Err(Error::Data(format!("crawl: cancelled after {} pages", summary.fetched + summary.failed)));
    }
    out.finish(&format!("fetched={} failed={}", summary.fetched, summary.failed))?;
    Ok(summary)
}

// ---------------------------------------------------------------- ingest

pub struct IngestArgs {
    pub records: Vec<PathBuf>,
    pub out: PathBuf,
    pub profiles: Option<PathBuf>,
    pub filter: PageFilter,
}

pub const CORPUS_FILE: &str = "corpus.jsonl";
pub const FILTERED_FILE: &str = "filtered.jsonl";
pub const EDGES_FILE: &str = "edges.txt";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestSummary {
    pub report: IngestReport,
    pub pages: usize,
    pub kept: usize,
    pub domains: usize,
    pub edges: usize,
}

/// Crawl records to `corpus.jsonl` (every page), `filtered.jsonl` (pages
/// passing the filter), `edges.txt` (domain graph of the filtered pages),
/// and `pages.csv`.
pub fn run_ingest(args: &IngestArgs) -> Result<IngestSummary> {
    if args.records.is_empty() {
        return Err(Error::Usage("ingest: no record files".into()));
    }
    for r in &args.records {
        require(r)?;
    }
    let profiles = match &args.profiles {
        Some(dir) => profiles::load_dir(dir)?,
        None => profiles::bundled(),
    };
    let out = Output::dir("ingest", &args.out)?;
    let mut records = Vec::new();
    for path in &args.records {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path.display(), e))?;
        records.extend(read_records(BufReader::new(f), &path.display().to_string())?);
    }
    let (corpus, report) = Corpus::from_records(&records, &profiles, &NgramConfig::default())?;
    let kept = filter_corpus(&corpus, &args.filter);
    let edges = domain_edges(&kept);

    let mut buf = Vec::new();
    corpus.write_jsonl(&mut buf).unwrap();
    write_bytes(&args.out.join(CORPUS_FILE), &buf)?;
    buf.clear();
    kept.write_jsonl(&mut buf).unwrap();
    write_bytes(&args.out.join(FILTERED_FILE), &buf)?;
    buf.clear();
    write_edge_list(&mut buf, edges.iter().map(|(a, b)| (a.as_str(), b.as_str()))).unwrap();
    write_bytes(&args.out.join(EDGES_FILE), &buf)?;

    let mut t = Table::new(&["address", "domain", "kind", "language", "words", "crawl_id", "failed", "kept"]);
    for p in corpus.pages() {
        t.push(vec![
            p.address.clone(),
            p.domain.clone(),
            match p.kind {
                Kind::Onion => "onion",
                Kind::Surface => "surface",
            }
            .into(),
            p.language.clone(),
            p.word_count.to_string(),
            p.crawl_id.to_string(),
            p.failed.to_string(),
            kept.get(&p.address).is_some().to_string(),
        ]);
    }
    t.write(&args.out.join("pages.csv"))?;

    let domains = kept.pages().map(|p| p.domain.as_str()).collect::<BTreeSet<_>>().len();
    let summary = IngestSummary { report, pages: corpus.len(), kept: kept.len(), domains, edges: edges.len() };
    out.finish(&format!(
        "records={} pages={} kept={} domains={} edges={}",
        report.records, summary.pages, summary.kept, summary.domains, summary.edges
    ))?;
    Ok(summary)
}

fn read_corpus(path: &Path) -> Result<Corpus> {
    require(path)?;
    let f = std::fs::File::open(path).map_err(|e| Error::io(path.display(), e))?;
    Corpus::read_jsonl(BufReader::new(f), &path.display().to_string())
}

// ---------------------------------------------------------------- topics

pub struct TopicsArgs {
    pub corpus: PathBuf,
    pub out: PathBuf,
    pub t_min: usize,
    pub t_max: usize,
    pub min_words: usize,
    pub top_n: usize,
    pub min_df: usize,
    pub iterations: usize,
    /// Gibbs sweeps when inferring a domain's topic mixture.
    pub infer_iterations: usize,
    pub seed: u64,
}

pub const MODEL_FILE: &str = "model.json";
pub const DOMAIN_TOPICS_FILE: &str = "domain_topics.json";

fn topic_error(stage: &str, e: TopicError) -> Error {
    match e {
        TopicError::NoDocuments | TopicError::EmptyVocabulary => Error::Data(format!("{stage}: {e}")),
        TopicError::TooFewTopics(_) | TopicError::NoIterations | TopicError::NoCandidates => {
            Error::Usage(format!("{stage}: {e}"))
        }
        _ => Error::Numeric(format!("{stage}: {e}")),
    }
}

/// Fits one model per topic count in `t_min..=t_max` on pages with more than
/// `min_words` words and keeps the most coherent. Writes `model.json`,
/// `coherence.csv`, `topics.csv`, and each domain's dominant topic.
pub fn run_topics(args: &TopicsArgs) -> Result<usize> {
    if args.t_min < 2 || args.t_max < args.t_min {
        return Err(Error::Usage(format!("topics: bad topic range {}..={}", args.t_min, args.t_max)));
    }
    let corpus = read_corpus(&args.corpus)?;
    let out = Output::dir("topics", &args.out)?;
    let pages: Vec<_> = corpus.pages().filter(|p| p.word_count > args.min_words).collect();
    let tokens: Vec<Vec<String>> = pages.iter().map(|p| tokenize(&p.text)).collect();
    let vocab = build_vocabulary(&tokens, args.min_df, &BTreeSet::new()).map_err(|e| topic_error("topics", e))?;
    let mut docs = Vec::new();
    let mut addresses = Vec::new();
    for (p, t) in pages.iter().zip(&tokens) {
        let d = vocab.encode(t);
        if !d.is_empty() {
            docs.push(d);
            addresses.push(p.address.clone());
        }
    }
    if docs.is_empty() {
        return Err(Error::Data("topics: no document has an in-vocabulary word".into()));
    }
    let index = CooccurrenceIndex::new(&docs, vocab.len());
    let candidates: Vec<usize> = (args.t_min..=args.t_max).collect();
    let fits = candidates
        .par_iter()
        .map(|&t| {
            let cfg = LdaConfig::new(t, args.seed).with_iterations(args.iterations);
            score_candidate(&docs, vocab.len(), &index, &cfg, args.top_n)
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| topic_error("topics", e))?;
    let (scores, mut models): (Vec<_>, Vec<_>) = fits.into_iter().unzip();
    let best = choose_topic_count(&scores).expect("at least one candidate");
    let model = models.swap_remove(best);

    let mut t = Table::new(&["topics", "mean_coherence", "objective", "selected"]);
    for (i, s) in scores.iter().enumerate() {
        t.push(vec![s.topics.to_string(), num(s.mean, 6), num(s.objective(), 6), (i == best).to_string()]);
    }
    t.write(&args.out.join("coherence.csv"))?;

    let mut file = ModelFile::new(vocab, addresses, model, args.min_words, args.top_n);
    file.coherence = scores[best].per_topic.clone();
    let mut t = Table::new(&["topic", "coherence", "top_words"]);
    for (k, c) in file.coherence.iter().enumerate() {
        t.push(vec![k.to_string(), num(*c, 6), file.top_words(k, args.top_n).join(" ")]);
    }
    t.write(&args.out.join("topics.csv"))?;

    let dt = domain_topics(&corpus, &file, args.min_words, args.infer_iterations, args.seed)?;
    write_bytes(&args.out.join(MODEL_FILE), file.to_json().as_bytes())?;
    write_bytes(&args.out.join(DOMAIN_TOPICS_FILE), to_json_pretty(&dt).as_bytes())?;
    let chosen = scores[best].topics;
    out.finish(&format!("documents={} vocabulary={} topics={chosen} seed={}", docs.len(), file.vocabulary.len(), args.seed))?;
    Ok(chosen)
}

/// Dominant topic of each domain's concatenated pages. Domains with no
/// in-vocabulary word are left out.
pub fn domain_topics(corpus: &Corpus, file: &ModelFile, min_words: usize, iterations: usize, seed: u64) -> Result<DomainTopics> {
    let kept = filter_corpus(corpus, &PageFilter { min_words, ..Default::default() });
    let mut topics = BTreeMap::new();
    for (i, (domain, text)) in group_by_domain(&kept).into_iter().enumerate() {
        let doc = file.vocabulary.encode(&tokenize(&text));
        match file.model.dominant_topic(&doc, iterations, seed.wrapping_add(i as u64)) {
            Ok(t) => {
                topics.insert(domain, t);
            }
            Err(TopicError::EmptyDocument) => log::warn!("{domain}: no in-vocabulary words, left unlabeled"),
            Err(e) => return Err(topic_error("topics", e)),
        }
    }
    Ok(DomainTopics { vocab_fingerprint: file.vocab_fingerprint.clone(), topics })
}

// ---------------------------------------------------------------- label

pub struct LabelArgs {
    pub model: PathBuf,
    pub kg: PathBuf,
    pub out: PathBuf,
    pub top_n: usize,
    /// Dominant topics; when given, `labels.csv` is written too.
    pub domain_topics: Option<PathBuf>,
}

pub const TOPIC_LABELS_FILE: &str = "topic_labels.json";
pub const LABELS_FILE: &str = "labels.csv";

/// Name used for a topic the knowledge graph cannot label.
pub fn fallback_label(topic: usize) -> String {
    format!("topic-{topic}")
}

pub fn run_label(args: &LabelArgs) -> Result<TopicLabels> {
    require(&args.model)?;
    require(&args.kg)?;
    if let Some(p) = &args.domain_topics {
        require(p)?;
    }
    let model = ModelFile::load(&args.model)?;
    let (kg, load) = load_kg(&args.kg)?;
    if load.malformed > 0 {
        log::warn!("{}: {} malformed lines skipped", args.kg.display(), load.malformed);
    }
    let out = Output::dir("label", &args.out)?;
    let mut topics = BTreeMap::new();
    for k in 0..model.model.topics {
        let words = model.top_words(k, args.top_n);
        let entry = match label_topic(&kg, &words) {
            Ok(l) => TopicLabelEntry {
                label: l.best.label,
                gamma: l.best.gamma,
                runner_ups: l.runner_ups.into_iter().map(|s| (s.label, s.gamma)).collect(),
                top_words: words,
            },
            Err(e @ (LabelError::NoMatchingConcept(_) | LabelError::TooFewAnchors(_))) => {
                log::warn!("topic {k}: {e}; using {}", fallback_label(k));
                TopicLabelEntry { label: fallback_label(k), gamma: 0.0, runner_ups: vec![], top_words: words }
            }
            Err(e) => return Err(Error::Data(format!("label: {}: {e}", args.kg.display()))),
        };
        topics.insert(k, entry);
    }
    let labels = TopicLabels { vocab_fingerprint: model.vocab_fingerprint.clone(), topics };
    write_bytes(&args.out.join(TOPIC_LABELS_FILE), to_json_pretty(&labels).as_bytes())?;
    if let Some(p) = &args.domain_topics {
        let dt: DomainTopics = load_json(p)?;
        check_version(&model.vocab_fingerprint, &dt.vocab_fingerprint, p)?;
        let map = domain_labels(&dt, &labels)?;
        let mut buf = Vec::new();
        write_labels(&mut buf, &map)?;
        write_bytes(&args.out.join(LABELS_FILE), &buf)?;
    }
    out.finish(&format!("topics={} kg_triples={}", labels.topics.len(), load.triples))?;
    Ok(labels)
}

fn check_version(expected: &str, found: &str, path: &Path) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Data(format!("{}: built from vocabulary {found}, expected {expected}", path.display())))
    }
}

pub fn domain_labels(dt: &DomainTopics, labels: &TopicLabels) -> Result<BTreeMap<String, String>> {
    dt.topics
        .iter()
        .map(|(d, t)| match labels.topics.get(t) {
            Some(e) => Ok((d.clone(), e.label.clone())),
            None => Err(Error::Data(format!("{d}: topic {t} has no label"))),
        })
        .collect()
}

// ---------------------------------------------------------------- graph

pub struct GraphArgs {
    pub edges: PathBuf,
    pub labels: Option<PathBuf>,
    pub out: PathBuf,
}

fn load_inputs(edges: &Path, labels: Option<&Path>) -> Result<(DomainGraph, String)> {
    require(edges)?;
    match labels {
        Some(l) => {
            require(l)?;
            load_graph(edges, l)
        }
        None => {
            let empty = std::env::temp_dir().join(format!("torcontent-empty-{}.csv", std::process::id()));
            write_bytes(&empty, b"")?;
            let r = load_graph(edges, &empty);
            let _ = std::fs::remove_file(&empty);
            r
        }
    }
}

fn check_finite(stage: &str, t: &Table) -> Result<()> {
    for r in t.rows() {
        if r.iter().any(|c| c == "inf" || c == "-inf") {
            return Err(Error::Numeric(format!("{stage}: non-finite value in row {}", r[0])));
        }
    }
    Ok(())
}

/// Structural tables of the domain graph.
pub fn write_graph_tables(g: &DomainGraph, dir: &Path) -> Result<()> {
    report::summary_table(&summary_stats(g)).write(&dir.join("summary.csv"))?;
    let r = report::robustness_table(g);
    check_finite("graph", &r)?;
    r.write(&dir.join("robustness.csv"))?;
    report::modularity_table(g)?.write(&dir.join("modularity.csv"))?;
    let vectors = report::centrality_vectors(g);
    if vectors.iter().any(|(_, v)| v.iter().any(|x| !x.is_finite())) {
        return Err(Error::Numeric("graph: centrality did not converge".into()));
    }
    report::centrality_table(g, &vectors).write(&dir.join("centrality.csv"))?;
    report::centrality_cdf_table(&vectors).write(&dir.join("centrality_cdf.csv"))?;
    report::centrality_hist_table(&vectors, 20).write(&dir.join("centrality_hist.csv"))?;
    report::community_matrix_table(g).write(&dir.join("community_matrix.csv"))?;
    let labels: BTreeMap<String, String> =
        (0..g.len()).map(|v| (g.name(v).to_string(), g.community_of(v).to_string())).collect();
    report::label_distribution_table(&labels).write(&dir.join("label_distribution.csv"))
}

pub fn run_graph(args: &GraphArgs) -> Result<String> {
    let (g, fp) = load_inputs(&args.edges, args.labels.as_deref())?;
    if g.edge_count() == 0 {
        return Err(Error::Data(format!("graph: {}: no edges", args.edges.display())));
    }
    let out = Output::dir("graph", &args.out)?;
    write_graph_tables(&g, &args.out)?;
    out.finish(&format!("graph={fp} vertices={} edges={}", g.len(), g.edge_count()))?;
    Ok(fp)
}

// ---------------------------------------------------------------- powerlaw

pub struct PowerlawArgs {
    pub edges: PathBuf,
    pub labels: PathBuf,
    pub out: PathBuf,
    pub boot: usize,
    pub seed: u64,
    pub threshold: f64,
}

/// Power-tail tests of every community and of the whole network, each
/// bootstrap run in parallel.
pub fn tail_report(g: &DomainGraph, boot: usize, seed: u64) -> Vec<TailRow> {
    community_tail_report_with(g, |data, fit| {
        let b = Bootstrap::new(data, fit);
        let ks: Vec<f64> = (0..boot).into_par_iter().map(|i| b.replicate_ks(seed, i)).collect();
        b.result(&ks, seed)
    })
}

pub fn run_powerlaw(args: &PowerlawArgs) -> Result<Vec<TailRow>> {
    if args.boot == 0 {
        return Err(Error::Usage("powerlaw: --boot must be positive".into()));
    }
    let (g, fp) = load_inputs(&args.edges, Some(&args.labels))?;
    let out = Output::file("powerlaw", &args.out)?;
    let rows = tail_report(&g, args.boot, args.seed);
    report::powerlaw_table(&rows, args.threshold).write(&args.out)?;
    out.finish(&format!("graph={fp} boot={} seed={}", args.boot, args.seed))?;
    Ok(rows)
}

// ---------------------------------------------------------------- report

pub struct ReportArgs {
    pub edges: PathBuf,
    pub labels: PathBuf,
    pub out: PathBuf,
    pub model: Option<PathBuf>,
    pub topic_labels: Option<PathBuf>,
    pub domain_topics: Option<PathBuf>,
    pub boot: usize,
    pub seed: u64,
    pub threshold: f64,
}

/// Every table and figure file in one directory, after checking that the
/// topic artifacts come from the same model and that the labels agree with
/// the dominant topics.
pub fn run_report(args: &ReportArgs) -> Result<()> {
    for p in [&args.model, &args.topic_labels, &args.domain_topics].into_iter().flatten() {
        require(p)?;
    }
    let model = args.model.as_deref().map(ModelFile::load).transpose()?;
    let topic_labels: Option<TopicLabels> = args.topic_labels.as_deref().map(load_json).transpose()?;
    let domain_topics: Option<DomainTopics> = args.domain_topics.as_deref().map(load_json).transpose()?;
    if let Some(m) = &model {
        for (fp, p) in [
            (topic_labels.as_ref().map(|t| &t.vocab_fingerprint), &args.topic_labels),
            (domain_topics.as_ref().map(|t| &t.vocab_fingerprint), &args.domain_topics),
        ] {
            if let (Some(fp), Some(p)) = (fp, p) {
                check_version(&m.vocab_fingerprint, fp, p)?;
            }
        }
    }
    if let (Some(tl), Some(dt)) = (&topic_labels, &domain_topics) {
        check_version(&tl.vocab_fingerprint, &dt.vocab_fingerprint, args.domain_topics.as_ref().unwrap())?;
        require(&args.labels)?;
        let expected = domain_labels(dt, tl)?;
        let found = parse_labels(&read_text(&args.labels)?, &args.labels.display().to_string())?;
        if expected != found {
            return Err(Error::Data(format!(
                "{}: labels disagree with the topic artifacts; rerun label",
                args.labels.display()
            )));
        }
    }
    let (g, fp) = load_inputs(&args.edges, Some(&args.labels))?;
    if g.edge_count() == 0 {
        return Err(Error::Data(format!("report: {}: no edges", args.edges.display())));
    }
    let out = Output::dir("report", &args.out)?;
    if let Some(tl) = &topic_labels {
        let mut t = Table::new(&["topic", "label", "gamma", "coherence", "top_words"]);
        for (k, e) in &tl.topics {
            t.push(vec![
                k.to_string(),
                e.label.clone(),
                num(e.gamma, 6),
                model.as_ref().and_then(|m| m.coherence.get(*k)).map_or(String::new(), |c| num(*c, 6)),
                e.top_words.join(" "),
            ]);
        }
        t.write(&args.out.join("topics.csv"))?;
    }
    write_graph_tables(&g, &args.out)?;
    let rows = tail_report(&g, args.boot, args.seed);
    report::powerlaw_table(&rows, args.threshold).write(&args.out.join("powerlaw.csv"))?;
    let mut versions = format!("graph\t{fp}\n");
    if let Some(m) = &model {
        versions.push_str(&format!("vocabulary\t{}\n", m.vocab_fingerprint));
    }
    write_bytes(&args.out.join("versions.tsv"), versions.as_bytes())?;
    out.finish(&format!("graph={fp} boot={} seed={}", args.boot, args.seed))
}
