use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::{Path, PathBuf};
use std::sync::atomic::AtomicBool;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use torcontent::crawler::{crawl, read_seeds, CrawlConfig, FetchError, Fetcher, FixtureFetcher};
use url::Url;

use crate::Verdict;

const MAX_DEPTH: usize = 4;
const DELAY: Duration = Duration::from_millis(60);
const SLACK: Duration = Duration::from_millis(5);

fn site() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/site")
}

/// Pages within `MAX_DEPTH` hops of the seeds, from the site manifest.
fn bfs_oracle(seeds: &[String]) -> BTreeSet<String> {
    let src = std::fs::read_to_string(site().join("manifest.tsv")).unwrap();
    let mut graph: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for line in src.lines().filter(|l| !l.starts_with('#')) {
        let (page, links) = line.split_once('\t').unwrap();
        let links = links
            .split(' ')
            .filter(|l| l.starts_with("http://") || l.starts_with("https://"))
            .map(|l| l.split('#').next().unwrap())
            .collect();
        graph.insert(page, links);
    }
    let mut depth: BTreeMap<String, usize> = seeds.iter().map(|s| (s.clone(), 0)).collect();
    let mut queue: VecDeque<String> = seeds.iter().cloned().collect();
    while let Some(u) = queue.pop_front() {
        let d = depth[&u];
        if d == MAX_DEPTH {
            continue;
        }
        for &l in graph.get(u.as_str()).into_iter().flatten() {
            if !depth.contains_key(l) {
                depth.insert(l.to_string(), d + 1);
                queue.push_back(l.to_string());
            }
        }
    }
    depth.into_keys().collect()
}

struct Timed {
    inner: FixtureFetcher,
    starts: Mutex<Vec<(String, String, Instant)>>,
}

impl Fetcher for Timed {
    fn fetch(&self, url: &Url) -> Result<Vec<u8>, FetchError> {
        let host = url.host_str().unwrap_or_default().to_string();
        self.starts.lock().unwrap().push((host, url.to_string(), Instant::now()));
        self.inner.fetch(url)
    }
}

pub fn check() -> Verdict {
    let seeds = match read_seeds(&site().join("seeds.txt")) {
        Ok(s) => s,
        Err(e) => return Verdict::fail(e.to_string()),
    };
    let cfg = CrawlConfig { max_depth: MAX_DEPTH, workers: 4, per_host_delay: DELAY, retries: 0, ..CrawlConfig::default() };
    let fetcher = Timed { inner: FixtureFetcher::new(site()), starts: Mutex::new(Vec::new()) };
    let mut emitted = Vec::new();
    let t0 = Instant::now();
    crawl(&seeds, &cfg, &fetcher, &AtomicBool::new(false), |r| emitted.push(r.url));
    let elapsed = t0.elapsed();

    let seed_urls: Vec<String> = seeds.iter().map(|s| s.to_string()).collect();
    let want = bfs_oracle(&seed_urls);
    let got: BTreeSet<String> = emitted.iter().cloned().collect();
    let starts = fetcher.starts.into_inner().unwrap();
    let fetched: BTreeSet<&str> = starts.iter().map(|(_, u, _)| u.as_str()).collect();
    let dedup = got.len() == emitted.len() && fetched.len() == starts.len();

    let mut by_host: BTreeMap<&str, Vec<Instant>> = BTreeMap::new();
    for (h, _, t) in &starts {
        by_host.entry(h).or_default().push(*t);
    }
    let mut min_gap = Duration::MAX;
    let mut longest = 0;
    for ts in by_host.values_mut() {
        ts.sort();
        longest = longest.max(ts.len());
        for w in ts.windows(2) {
            min_gap = min_gap.min(w[1] - w[0]);
        }
    }
    let polite = min_gap + SLACK >= DELAY
        && elapsed >= DELAY * (longest.max(1) as u32 - 1)
        && elapsed < Duration::from_secs(10);
    let set_ok = got == want;
    Verdict::new(
        set_ok && dedup && polite,
        format!(
            "{} pages emitted, oracle {} ({}), duplicates {}, min same-host gap {min_gap:.1?} for {DELAY:?} delay",
            got.len(),
            want.len(),
            if set_ok { "same set" } else { "sets differ" },
            if dedup { "none" } else { "present" },
        ),
    )
}
