use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ddos_sim::config::{DetectorSet, ScenarioConfig};
use ddos_sim::error::ConfigError;
use ddos_sim::harness::{self, report, RunOutcome};
use ddos_sim::Error;

#[derive(Parser)]
#[command(name = "ddos-sim", version, about = "Simulate DDoS attacks against an interface-module defense")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario.
    Run {
        #[command(flatten)]
        common: Common,
        /// Write the event log here.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Run many seeds and summarize.
    Batch {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        runs: usize,
    },
    /// Vary the short window length.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated window lengths.
        #[arg(long, value_delimiter = ',', default_value = "5,10,20")]
        ws: Vec<usize>,
    },
}

#[derive(Args)]
struct Common {
    /// Scenario file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in scenario (sim1, sim2) used when no file is given.
    #[arg(long, default_value = "sim1")]
    preset: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated subset of buffer,jump,stat.
    #[arg(long)]
    detectors: Option<DetectorSet>,
    /// CSV output path; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn scenario(&self) -> Result<ScenarioConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => ScenarioConfig::from_path(path)?,
            None => ScenarioConfig::preset(&self.preset)
                .ok_or_else(|| ConfigError::Invalid(format!("unknown preset {:?}", self.preset)))?,
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(d) = self.detectors {
            cfg.detectors = d;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn print_outcome(out: &RunOutcome) {
    let m = &out.metrics;
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    eprintln!("seed {}  t* {}", out.seed, out.t_star);
    eprintln!("  detection after t*   {}", opt(m.detection_time_after_tstar.map(|v| v.to_string())));
    eprintln!("  buffer reached L1    {}", opt(out.l1_fill_after_tstar.map(|v| format!("+{v}"))));
    eprintln!("  buffer reached L     {}", opt(out.full_fill_after_tstar.map(|v| format!("+{v}"))));
    eprintln!("  attackers identified {}", m.correctly_identified_attackers);
    eprintln!("  legal filtered       {}", m.filtered_legal_clients);
    eprintln!("  dropped packets      {}", m.dropped_packets);
    eprintln!("  max buffer           {} at slot {}", m.max_buffer_level, m.max_buffer_slot);
    eprintln!("  restored after t*    {}", opt(m.restore_time_after_tstar.map(|v| v.to_string())));
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run { common, log } => {
            let cfg = common.scenario()?;
            let out = harness::run_simulation(&cfg)?;
            print_outcome(&out);
            if let Some(path) = log {
                std::fs::write(&path, out.log.to_text()).map_err(|source| Error::Io { path, source })?;
            }
            let rows = [(Some(out.seed), &out.metrics)];
            match &common.out {
                Some(path) => report::emit_metrics(path, Some("seed"), &rows),
                None => stdout_csv(|w| report::write_metrics(w, Some("seed"), &rows)),
            }
        }
        Command::Batch { common, runs } => {
            let cfg = common.scenario()?;
            let batch = harness::run_batch(&cfg, runs, cfg.seed)?;
            let rows: Vec<_> = batch.runs.iter().map(|r| (Some(r.seed), &r.metrics)).collect();
            let detected = batch.runs.iter().filter(|r| r.detected()).count();
            eprintln!("{} runs, {} detected", batch.runs.len(), detected);
            for m in &batch.summary.metrics {
                eprintln!(
                    "  {:32} mean {:>12.3} ± {:<10.3} [{}, {}] n={}",
                    m.name, m.mean, m.ci95_halfwidth, m.min, m.max, m.count
                );
            }
            match &common.out {
                Some(path) => {
                    report::emit_metrics(path, Some("seed"), &rows)?;
                    let mut summary_path = path.clone().into_os_string();
                    summary_path.push(".summary.csv");
                    report::emit_summary(&PathBuf::from(summary_path), &batch.summary)
                }
                None => stdout_csv(|w| report::write_metrics(w, Some("seed"), &rows)),
            }
        }
        Command::Sweep { common, ws } => {
            let cfg = common.scenario()?;
            let sweep = harness::sweep_window(&cfg, &ws)?;
            for row in &sweep {
                if let Some(w) = &row.warning {
                    eprintln!("warning: w_s={}: {w}", row.w_s);
                }
                eprintln!(
                    "w_s {:>4}: identified {:>6}  legal {:>6}  dropped {:>8}  max buffer {:>8}",
                    row.w_s,
                    row.outcome.metrics.correctly_identified_attackers,
                    row.outcome.metrics.filtered_legal_clients,
                    row.outcome.metrics.dropped_packets,
                    row.outcome.metrics.max_buffer_level,
                );
            }
            let rows: Vec<_> = sweep.iter().map(|r| (Some(r.w_s as u64), &r.outcome.metrics)).collect();
            match &common.out {
                Some(path) => report::emit_metrics(path, Some("w_s"), &rows),
                None => stdout_csv(|w| report::write_metrics(w, Some("w_s"), &rows)),
            }
        }
    }
}

fn stdout_csv(f: impl FnOnce(std::io::StdoutLock<'static>) -> Result<(), csv::Error>) -> Result<(), Error> {
    f(std::io::stdout().lock()).map_err(|source| Error::Csv { path: PathBuf::from("<stdout>"), source })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
