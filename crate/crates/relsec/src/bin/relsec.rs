//! Thin command-line front end over the `relsec` library.
//!
//! Verbs: `eval` (single point), `sweep` (grid to CSV), `compare`
//! (three-method agreement table), `sample` (raw SNR draws to CSV).
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure,
//! 3 tolerance failure in `compare`.

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relsec::config::{load_config, MethodKind, RunConfig};
use relsec::error::Error;
use relsec::metrics::{esmc, pnsmc, sopm, Method};
use relsec::montecarlo::HopSampler;
use relsec::sweep::{render_compare, rows_to_csv, run_compare, run_config_sweep};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "relsec",
    about = "Secrecy metrics for dual-hop multicast relay networks over \
             kappa-mu shadowed fading",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON configuration file (schema documented in the README).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Write output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Override the configured RNG seed.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Suppress the timestamp header line and zero the wall_ms column, so
    /// repeated runs are byte-identical.
    #[arg(long)]
    no_header_timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate all three metrics at the configured network point.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Evaluation path: closed_form, quadrature, or monte_carlo.
        #[arg(long, value_name = "M", default_value = "quadrature")]
        method: MethodKind,
    },
    /// Run the configured parameter sweep and emit CSV.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate by all three methods and check their agreement.
    Compare {
        #[command(flatten)]
        common: Common,
    },
    /// Draw raw per-hop SNR samples to CSV for external histogramming.
    Sample {
        #[command(flatten)]
        common: Common,
        /// Number of draws (default: the configured trial count).
        #[arg(long, value_name = "N")]
        count: Option<u64>,
    },
}

fn timestamp(suppress: bool) -> Option<String> {
    if suppress {
        return None;
    }
    let t = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0);
    Some(format!("unix_ms {t}"))
}

fn emit(common: &Common, text: &str) -> Result<(), Error> {
    match &common.out {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(common: &Common) -> Result<RunConfig, Error> {
    let mut cfg = load_config(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.sim.seed = seed;
    }
    Ok(cfg)
}

fn cmd_eval(common: &Common, method_kind: MethodKind) -> Result<(), Error> {
    let cfg = load(common)?;
    let method = match method_kind {
        MethodKind::ClosedForm => Method::ClosedForm,
        MethodKind::Quadrature => Method::Quadrature,
        MethodKind::MonteCarlo => Method::MonteCarlo {
            trials: cfg.sim.trials,
            seed: cfg.sim.seed,
        },
    };
    let rows = [
        ("pnsmc", pnsmc(&cfg.network, &cfg.series, &method)?),
        (
            "sopm",
            sopm(&cfg.network, cfg.target_rate, &cfg.series, &method)?,
        ),
        ("esmc", esmc(&cfg.network, &cfg.series, &method)?),
    ];
    let mut out = String::new();
    if let Some(ts) = timestamp(common.no_header_timestamp) {
        let _ = writeln!(out, "# generated: {ts}");
    }
    // esmc_floor is max(value, 0): the signed definition can go negative.
    out.push_str("metric,method,value,esmc_floor,stderr_or_tail,terms_used\r\n");
    for (name, r) in &rows {
        let floor = if *name == "esmc" {
            format!("{}", r.value.max(0.0))
        } else {
            String::new()
        };
        let _ = write!(
            out,
            "{},{},{},{},{},{}\r\n",
            name,
            r.method.name(),
            r.value,
            floor,
            r.tail_estimate,
            r.terms_used
        );
        for w in &r.warnings {
            eprintln!("warning ({name}): {w}");
        }
    }
    emit(common, &out)
}

fn cmd_sweep(common: &Common) -> Result<(), Error> {
    let cfg = load(common)?;
    let rows = run_config_sweep(&cfg, !common.no_header_timestamp)?;
    let csv = rows_to_csv(&rows, timestamp(common.no_header_timestamp).as_deref());
    emit(common, &csv)
}

fn cmd_compare(common: &Common) -> Result<(), Error> {
    let cfg = load(common)?;
    let report = run_compare(&cfg)?;
    emit(common, &render_compare(&report))?;
    if !report.pass {
        // Signals exit code 3 to main.
        return Err(Error::Convergence("compare tolerance failure".into()));
    }
    Ok(())
}

fn cmd_sample(common: &Common, count: Option<u64>) -> Result<(), Error> {
    let cfg = load(common)?;
    let n = count.unwrap_or(cfg.sim.trials);
    let net = &cfg.network;
    let samplers = [
        ("hop_sp", HopSampler::new(&net.hop_sp, 1)?),
        ("hop_pq", HopSampler::new(&net.hop_pq, net.antennas_rx)?),
        ("hop_pw", HopSampler::new(&net.hop_pw, net.antennas_eve)?),
    ];
    let mut out = String::new();
    if let Some(ts) = timestamp(common.no_header_timestamp) {
        let _ = writeln!(out, "# generated: {ts}");
    }
    out.push_str("draw,hop_sp,hop_pq,hop_pw\r\n");
    for t in 0..n {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.sim.seed);
        rng.set_stream(t);
        let _ = write!(out, "{t}");
        for (_, s) in &samplers {
            let _ = write!(out, ",{}", s.draw(&mut rng));
        }
        out.push_str("\r\n");
    }
    emit(common, &out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, is_compare) = match &cli.command {
        Command::Eval { common, method } => (cmd_eval(common, *method), false),
        Command::Sweep { common } => (cmd_sweep(common), false),
        Command::Compare { common } => (cmd_compare(common), true),
        Command::Sample { common, count } => (cmd_sample(common, *count), false),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match &e {
                Error::Config(_) | Error::Io(_) | Error::Domain(_) => 1u8,
                Error::Convergence(_) if is_compare => 3,
                Error::BudgetExceeded { .. }
                | Error::Convergence(_)
                | Error::ShapeIntegrality(_) => 2,
            };
            ExitCode::from(code)
        }
    }
}
