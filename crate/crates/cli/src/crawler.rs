//! Multi-threaded, depth-limited crawler over a pluggable fetcher.
//!
//! Workers share one LIFO frontier, so recently discovered (deeper) pages are
//! fetched before their siblings. Every URL is fetched at most once. When a
//! page is rediscovered at a smaller depth after it was fetched, its cached
//! links are re-expanded, so the fetched set is exactly the set of pages
//! within `max_depth` hops of a seed regardless of thread timing.

use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Condvar, Mutex};
use std::time::{Duration, Instant};

use thiserror::Error;
use url::Url;

use crate::address;
use crate::records::{now_rfc3339, CrawlRecord};
use torcontent_core::html::anchor_hrefs;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct FetchError(pub String);

pub trait Fetcher: Sync {
    fn fetch(&self, url: &Url) -> Result<Vec<u8>, FetchError>;
}

impl<F: Fetcher + ?Sized> Fetcher for &F {
    fn fetch(&self, url: &Url) -> Result<Vec<u8>, FetchError> {
        (**self).fetch(url)
    }
}

/// Serves `root/<host>/<path>`; paths ending in `/` map to `index.html`.
/// Query strings are ignored.
#[derive(Debug, Clone)]
pub struct FixtureFetcher {
    root: PathBuf,
}

impl FixtureFetcher {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        FixtureFetcher { root: root.into() }
    }

    pub fn path_for(&self, url: &Url) -> Option<PathBuf> {
        let mut p = self.root.join(address::domain(url));
        for seg in url.path_segments()? {
            if seg == ".." {
                return None;
            }
            if !seg.is_empty() {
                p.push(seg);
            }
        }
        if url.path().ends_with('/') {
            p.push("index.html");
        }
        Some(p)
    }
}

impl Fetcher for FixtureFetcher {
    fn fetch(&self, url: &Url) -> Result<Vec<u8>, FetchError> {
        let p = self.path_for(url).ok_or_else(|| FetchError(format!("{url}: unmappable path")))?;
        std::fs::read(&p).map_err(|e| FetchError(format!("{url}: {e}")))
    }
}

/// Plain HTTP fetcher. Takes its proxy from `ALL_PROXY` / `HTTP_PROXY`;
/// onion services need a Tor SOCKS proxy such as `socks5://127.0.0.1:9050`.
pub struct HttpFetcher {
    agent: ureq::Agent,
    max_bytes: u64,
}

impl HttpFetcher {
    pub fn new(timeout: Duration) -> Self {
        HttpFetcher {
            agent: ureq::AgentBuilder::new().timeout(timeout).try_proxy_from_env(true).build(),
            max_bytes: 16 << 20,
        }
    }
}

impl Fetcher for HttpFetcher {
    fn fetch(&self, url: &Url) -> Result<Vec<u8>, FetchError> {
        let resp = self.agent.get(url.as_str()).call().map_err(|e| FetchError(e.to_string()))?;
        let mut body = Vec::new();
        std::io::Read::read_to_end(&mut std::io::Read::take(resp.into_reader(), self.max_bytes), &mut body)
            .map_err(|e| FetchError(format!("{url}: {e}")))?;
        Ok(body)
    }
}

/// Normalized absolute http(s) links of a page in document order, without
/// duplicates.
pub fn extract_links(html: &[u8], base: &Url) -> Vec<Url> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for href in anchor_hrefs(html) {
        let Ok(mut u) = base.join(href.trim()) else { continue };
        if !address::is_followable(&u) || u.host_str().is_none() {
            continue;
        }
        u.set_fragment(None);
        if seen.insert(u.to_string()) {
            out.push(u);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrawlConfig {
    pub max_depth: usize,
    pub workers: usize,
    /// Minimum spacing between request starts to one host.
    pub per_host_delay: Duration,
    pub crawl_id: u32,
    /// Extra attempts after a failed fetch.
    pub retries: usize,
}

impl Default for CrawlConfig {
    fn default() -> Self {
        CrawlConfig { max_depth: 4, workers: 4, per_host_delay: Duration::from_millis(500), crawl_id: 1, retries: 1 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CrawlSummary {
    pub fetched: usize,
    pub failed: usize,
    pub cancelled: bool,
}

enum Status {
    Queued,
    InFlight,
    Done(Vec<Url>),
}

struct Frontier {
    stack: Vec<Url>,
    depth: HashMap<String, usize>,
    status: HashMap<String, Status>,
    in_flight: usize,
}

impl Frontier {
    fn discover(&mut self, url: Url, depth: usize, max_depth: usize) {
        let key = url.to_string();
        if self.depth.get(&key).is_some_and(|&d| d <= depth) {
            return;
        }
        self.depth.insert(key.clone(), depth);
        match self.status.get(&key) {
            None | Some(Status::Queued) => {
                self.status.insert(key, Status::Queued);
                self.stack.push(url);
            }
            // Expanded with the improved depth once the fetch finishes.
            Some(Status::InFlight) => {}
            Some(Status::Done(links)) => {
                if depth < max_depth {
                    for l in links.clone() {
                        self.discover(l, depth + 1, max_depth);
                    }
                }
            }
        }
    }
}

/// Crawls from `seeds`, handing each fetched page to `sink` as soon as it
/// is available. Setting `cancel` stops workers from taking new pages;
/// fetches in progress still complete and are emitted.
pub fn crawl<F, S>(seeds: &[Url], cfg: &CrawlConfig, fetcher: &F, cancel: &AtomicBool, sink: S) -> CrawlSummary
where
    F: Fetcher + ?Sized,
    S: FnMut(CrawlRecord) + Send,
{
    let frontier = Mutex::new(Frontier {
        stack: Vec::new(),
        depth: HashMap::new(),
        status: HashMap::new(),
        in_flight: 0,
    });
    {
        let mut f = frontier.lock().unwrap();
        // Reverse so the first seed is taken first.
        for s in seeds.iter().rev() {
            let mut s = s.clone();
            s.set_fragment(None);
            if address::is_followable(&s) {
                f.discover(s, 0, cfg.max_depth);
            }
        }
    }
    let wake = Condvar::new();
    let next_slot: Mutex<HashMap<String, Instant>> = Mutex::new(HashMap::new());
    let sink = Mutex::new(sink);
    let summary = Mutex::new(CrawlSummary::default());

    let reserve = |host: &str| {
        let at = {
            let mut slots = next_slot.lock().unwrap();
            let now = Instant::now();
            let at = slots.get(host).map_or(now, |&t| t.max(now));
            slots.insert(host.to_string(), at + cfg.per_host_delay);
            at
        };
        let now = Instant::now();
        if at > now {
            std::thread::sleep(at - now);
        }
    };

    let worker = || loop {
        let url = {
            let mut f = frontier.lock().unwrap();
            loop {
                if cancel.load(Ordering::SeqCst) {
                    wake.notify_all();
                    return;
                }
                if let Some(u) = f.stack.pop() {
                    let key = u.to_string();
                    if matches!(f.status.get(&key), Some(Status::Queued)) {
                        f.status.insert(key, Status::InFlight);
                        f.in_flight += 1;
                        break u;
                    }
                    continue;
                }
                if f.in_flight == 0 {
                    wake.notify_all();
                    return;
                }
                f = wake.wait_timeout(f, Duration::from_millis(50)).unwrap().0;
            }
        };
        let host = address::domain(&url);
        let mut result = Err(FetchError(String::new()));
        for attempt in 0..=cfg.retries {
            reserve(&host);
            result = fetcher.fetch(&url);
            match &result {
                Ok(_) => break,
                Err(e) => log::debug!("fetch {url} attempt {}: {e}", attempt + 1),
            }
        }
        let (html, error) = match result {
            Ok(b) => (b, None),
            Err(e) => (Vec::new(), Some(e.0)),
        };
        let links = if error.is_none() { extract_links(&html, &url) } else { Vec::new() };
        {
            let mut s = summary.lock().unwrap();
            if error.is_some() {
                s.failed += 1;
            } else {
                s.fetched += 1;
            }
        }
        (sink.lock().unwrap())(CrawlRecord {
            url: url.to_string(),
            html,
            fetched_at: now_rfc3339(),
            crawl_id: cfg.crawl_id,
            error,
        });
        let mut f = frontier.lock().unwrap();
        let key = url.to_string();
        let depth = f.depth[&key];
        f.status.insert(key, Status::Done(links.clone()));
        if depth < cfg.max_depth {
            for l in links {
                f.discover(l, depth + 1, cfg.max_depth);
            }
        }
        f.in_flight -= 1;
        wake.notify_all();
    };

    std::thread::scope(|scope| {
        for _ in 0..cfg.workers.max(1) {
            scope.spawn(|| worker());
        }
    });
    let mut s = summary.into_inner().unwrap();
    s.cancelled = cancel.load(Ordering::SeqCst);
    s
}

/// Reads one seed URL per line; blank lines and `#` comments are skipped.
pub fn read_seeds(path: &Path) -> crate::Result<Vec<Url>> {
    let src = std::fs::read_to_string(path).map_err(|e| crate::Error::io(path.display(), e))?;
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let url = address::normalize(line)
            .map_err(|e| crate::Error::Data(format!("{}:{}: {e}", path.display(), i + 1)))?;
        out.push(url);
    }
    if out.is_empty() {
        return Err(crate::Error::Data(format!("{}: no seeds", path.display())));
    }
    Ok(out)
}
