//! `gtcnet`: counts, tables, reports, samples and the acceptance checks.
//!
//! Exit codes: 0 success, 1 verification or runtime failure, 2 usage error.

mod config;
mod output;
mod report;

use std::fmt::Write as _;
use std::hash::{BuildHasher, Hasher};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gtc::engine::{self, EngineConfig, EngineError};
use gtc::sampler::{self, draw_rng, sample_gtc, Format, SampleHeader};
use gtc::verify::{self, Level, VerifyOptions};

use config::RunConfig;
use output::{cache_version, emit, CacheKey, TableCache};

#[derive(Parser, Debug)]
#[command(name = "gtcnet", version, about = "Galled tree-child network counts, checks and samples")]
struct Cli {
    /// JSON run configuration; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum By {
    K,
    #[value(name = "k_i")]
    KI,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportKind {
    Asymptotics,
    Bounds,
    Limits,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print GTC_n.
    Count {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Write the table of GTC_{n,k} (or GTC_{n,k,i}) for n ≤ max-n.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_n: u64,
        #[arg(long, value_enum, default_value = "k")]
        by: By,
        #[arg(long, value_enum)]
        format: Option<TableFormat>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the acceptance checks and print a JSON verdict.
    Verify {
        #[arg(long, default_value = "fast")]
        level: Level,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Draws per size for the uniformity check.
        #[arg(long)]
        draws: Option<u64>,
        #[arg(long, hide = true)]
        tamper: bool,
    },
    /// Draw uniform networks of size n.
    Sample {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        format: Option<Format>,
        /// The file starts with a `# {json}` header line.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// CSV report over a grid of sizes (a:b, a:b:step or a comma list).
    Report {
        #[arg(long, value_enum)]
        kind: ReportKind,
        #[arg(long)]
        grid: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Count { .. } => "count",
            Command::Table { .. } => "table",
            Command::Verify { .. } => "verify",
            Command::Sample { .. } => "sample",
            Command::Report { .. } => "report",
        }
    }
}

enum Failure {
    Usage(String),
    Failed(String),
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Cap { .. } | EngineError::Empty => Failure::Usage(e.to_string()),
            other => Failure::Failed(other.to_string()),
        }
    }
}

impl From<gtc::analysis::AnalysisError> for Failure {
    fn from(e: gtc::analysis::AnalysisError) -> Self {
        match e {
            gtc::analysis::AnalysisError::Engine(inner) => inner.into(),
            gtc::analysis::AnalysisError::BadArgument(_) => Failure::Usage(e.to_string()),
            other => Failure::Failed(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Failed(format!("i/o error: {e}"))
    }
}

fn engine_config(cfg: &RunConfig) -> EngineConfig {
    let mut e = EngineConfig::default();
    if let Some(m) = cfg.max_n {
        e.bivariate_cap = m;
        e.column_cap = e.column_cap.min(m);
    }
    if let Some(t) = cfg.trivariate_cap {
        e.trivariate_cap = t;
    }
    e
}

fn cap_check(what: &'static str, n: usize, cap: usize) -> Result<(), Failure> {
    if n > cap {
        return Err(EngineError::Cap {
            what,
            n,
            cap,
            advice: "raise max_n in the config (within the library limits)",
        }
        .into());
    }
    Ok(())
}

fn entropy_seed() -> u64 {
    std::collections::hash_map::RandomState::new().build_hasher().finish()
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p).map_err(Failure::Usage)?,
        None => RunConfig::default(),
    };
    cfg.check_command(cli.command.name()).map_err(Failure::Usage)?;
    let ecfg = engine_config(&cfg);
    match cli.command {
        Command::Count { n } => {
            let n = n as usize;
            cap_check("count", n, ecfg.column_cap)?;
            println!("{}", engine::gtc_total(n)?);
        }
        Command::Table {
            max_n,
            by,
            format,
            output,
        } => {
            let n = max_n as usize;
            let format = match (format, cfg.format.as_deref()) {
                (Some(f), _) => f,
                (None, None | Some("csv")) => TableFormat::Csv,
                (None, Some("json")) => TableFormat::Json,
                (None, Some(other)) => return Err(Failure::Usage(format!("table format must be csv or json, not {other:?}"))),
            };
            let with_i = matches!(by, By::KI);
            let key = CacheKey {
                version: cache_version(),
                max_n: n,
                marker: if with_i { "k_i" } else { "k" }.into(),
                format: match format {
                    TableFormat::Csv => "csv",
                    TableFormat::Json => "json",
                }
                .into(),
            };
            let cache = TableCache::from_env();
            let body = match cache.as_ref().and_then(|c| c.get(&key)) {
                Some(b) => b,
                None => {
                    let t = engine::gtc_table_with(n, with_i, &ecfg)?;
                    let b = match format {
                        TableFormat::Csv => t.to_csv(),
                        TableFormat::Json => format!("{}\n", t.to_json()),
                    };
                    if let Some(c) = &cache {
                        c.put(&key, &b)?;
                    }
                    b
                }
            };
            emit(output.or(cfg.output).as_deref(), &body)?;
        }
        Command::Verify {
            level,
            output,
            draws,
            tamper,
        } => {
            let mut opts = VerifyOptions {
                tamper,
                tolerances: cfg.tolerances,
                ..VerifyOptions::default()
            };
            if let Some(d) = draws {
                opts.draws = d;
            }
            if let Some(s) = cfg.seed {
                opts.seed = s;
            }
            let report = verify::verify(level, &opts);
            for c in &report.criteria {
                eprintln!("{}", c.line());
            }
            let text = format!("{}\n", serde_json::to_string_pretty(&report).expect("plain data"));
            emit(output.or(cfg.output).as_deref(), &text)?;
            if !report.passed {
                return Err(Failure::Failed(format!("verification failed: {}", report.failing().join(", "))));
            }
        }
        Command::Sample {
            n,
            count,
            seed,
            format,
            output,
        } => {
            let n = n as usize;
            cap_check("sample", n, ecfg.column_cap)?;
            let format = match (format, cfg.format.as_deref()) {
                (Some(f), _) => f,
                (None, None) => Format::Newick,
                (None, Some(s)) => s.parse().map_err(Failure::Usage)?,
            };
            let seed = seed.or(cfg.seed).unwrap_or_else(entropy_seed);
            let output = output.or(cfg.output);
            let mut text = String::new();
            if output.is_some() {
                let name = match format {
                    Format::Newick => "newick",
                    Format::EdgeJson => "edge-json",
                };
                let _ = writeln!(text, "{}", SampleHeader::new(n, seed, count, name).to_line());
            }
            for d in 0..count {
                let net = sample_gtc(n, &mut draw_rng(seed, d)).map_err(|e| Failure::Failed(e.to_string()))?;
                let _ = writeln!(text, "{}", sampler::serialize(&net, format));
            }
            emit(output.as_deref(), &text)?;
        }
        Command::Report { kind, grid, output } => {
            let grid = report::parse_grid(&grid).map_err(Failure::Usage)?;
            let top = *grid.iter().max().expect("non-empty grid");
            cap_check("report", top, ecfg.column_cap)?;
            let body = match kind {
                ReportKind::Asymptotics => report::asymptotics(&grid)?,
                ReportKind::Bounds => report::bounds(&grid)?,
                ReportKind::Limits => report::limits(&grid, ecfg.trivariate_cap)?,
            };
            emit(output.or(cfg.output).as_deref(), &body)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed(msg)) => {
            eprintln!("gtcnet: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("gtcnet: {msg}");
            ExitCode::from(2)
        }
    }
}
