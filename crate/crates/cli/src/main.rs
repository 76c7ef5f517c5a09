use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Duration;

use clap::{Parser, Subcommand};
use torcontent::address::Kind;
use torcontent::corpus::PageFilter;
use torcontent::crawler::CrawlConfig;
use torcontent::pipeline::{self, *};
use torcontent::Error;

/// Crawl, model, label, and analyze a dark-web content ecosystem.
#[derive(Parser)]
#[command(name = "torcontent", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Crawl from seed URLs into a JSONL record file.
    Crawl {
        #[arg(long)]
        seeds: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_depth: usize,
        #[arg(long, default_value_t = 4)]
        workers: usize,
        #[arg(long, default_value_t = 500)]
        delay_ms: u64,
        #[arg(long, default_value_t = 1)]
        crawl_id: u32,
        #[arg(long, default_value_t = 1)]
        retries: usize,
        #[arg(long, default_value_t = 30_000)]
        timeout_ms: u64,
        /// Serve pages from `DIR/<host>/<path>` instead of the network.
        #[arg(long, value_name = "DIR")]
        fixture: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build the page corpus and domain edge list from crawl records.
    Ingest {
        #[arg(long, required = true, num_args = 1..)]
        records: Vec<PathBuf>,
        /// Directory of `<code>.tsv` language profiles.
        #[arg(long)]
        profiles: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        min_words: usize,
        #[arg(long, default_value = "en")]
        language: String,
        /// Keep onion pages only.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        onion_only: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Topic modeling.
    Topics {
        #[command(subcommand)]
        command: TopicsCommand,
    },
    /// Name each topic from a knowledge graph.
    Label {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        kg: PathBuf,
        #[arg(long, default_value_t = 10)]
        top_n: usize,
        /// Also write `labels.csv` for these dominant topics.
        #[arg(long)]
        domain_topics: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Structural tables of the domain graph.
    Graph {
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Power-tail tests of the degree distributions.
    Powerlaw {
        #[arg(long = "graph", value_name = "FILE")]
        edges: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long, default_value_t = 2500)]
        boot: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.05)]
        threshold: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Every table and figure file in one directory.
    Report {
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        topic_labels: Option<PathBuf>,
        #[arg(long)]
        domain_topics: Option<PathBuf>,
        #[arg(long, default_value_t = 2500)]
        boot: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.05)]
        threshold: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum TopicsCommand {
    /// Fit LDA over a range of topic counts and keep the most coherent.
    Fit {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 3)]
        t_min: usize,
        #[arg(long, default_value_t = 15)]
        t_max: usize,
        #[arg(long, default_value_t = 50)]
        min_words: usize,
        #[arg(long, default_value_t = 10)]
        top_n: usize,
        #[arg(long, default_value_t = 2)]
        min_df: usize,
        #[arg(long, default_value_t = 1000)]
        iterations: usize,
        #[arg(long, default_value_t = 200)]
        infer_iterations: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn stage_name(c: &Command) -> &'static str {
    match c {
        Command::Crawl { .. } => "crawl",
        Command::Ingest { .. } => "ingest",
        Command::Topics { .. } => "topics",
        Command::Label { .. } => "label",
        Command::Graph { .. } => "graph",
        Command::Powerlaw { .. } => "powerlaw",
        Command::Report { .. } => "report",
    }
}

fn run(command: Command) -> torcontent::Result<()> {
    match command {
        Command::Crawl { seeds, max_depth, workers, delay_ms, crawl_id, retries, timeout_ms, fixture, out } => {
            if workers == 0 {
                return Err(Error::Usage("--workers must be positive".into()));
            }
            let cancel = Arc::new(AtomicBool::new(false));
            let flag = cancel.clone();
            if let Err(e) = ctrlc::set_handler(move || flag.store(true, Ordering::SeqCst)) {
                log::warn!("cannot install interrupt handler: {e}");
            }
            let args = CrawlArgs {
                seeds,
                out,
                fixture,
                timeout: Duration::from_millis(timeout_ms),
                config: CrawlConfig {
                    max_depth,
                    workers,
                    per_host_delay: Duration::from_millis(delay_ms),
                    crawl_id,
                    retries,
                },
            };
            let s = run_crawl(&args, &cancel)?;
            log::info!("fetched {} pages, {} failed", s.fetched, s.failed);
        }
        Command::Ingest { records, profiles, min_words, language, onion_only, out } => {
            let filter = PageFilter {
                min_words,
                language: Some(language).filter(|l| l != "any"),
                kind: onion_only.then_some(Kind::Onion),
            };
            let s = run_ingest(&IngestArgs { records, out, profiles, filter })?;
            log::info!("{} pages, {} kept, {} domains, {} edges", s.pages, s.kept, s.domains, s.edges);
        }
        Command::Topics {
            command:
                TopicsCommand::Fit { corpus, t_min, t_max, min_words, top_n, min_df, iterations, infer_iterations, seed, out },
        } => {
            let t = run_topics(&TopicsArgs {
                corpus,
                out,
                t_min,
                t_max,
                min_words,
                top_n,
                min_df,
                iterations,
                infer_iterations,
                seed,
            })?;
            log::info!("selected {t} topics");
        }
        Command::Label { model, kg, top_n, domain_topics, out } => {
            run_label(&LabelArgs { model, kg, out, top_n, domain_topics })?;
        }
        Command::Graph { edges, labels, out } => {
            run_graph(&GraphArgs { edges, labels, out })?;
        }
        Command::Powerlaw { edges, labels, boot, seed, threshold, out } => {
            run_powerlaw(&PowerlawArgs { edges, labels, out, boot, seed, threshold })?;
        }
        Command::Report { edges, labels, model, topic_labels, domain_topics, boot, seed, threshold, out } => {
            pipeline::run_report(&ReportArgs {
                edges,
                labels,
                out,
                model,
                topic_labels,
                domain_topics,
                boot,
                seed,
                threshold,
            })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TORCONTENT_LOG", "info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let stage = stage_name(&cli.command);
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("torcontent {stage}: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
