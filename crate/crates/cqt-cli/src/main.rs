//! Command-line harness: noise sweeps over the depolarized GHZ family,
//! certification bound demos, single-point teleportation reports and the
//! discrimination-solver self-test.
//!
//! Exit codes: 0 success, 1 invalid arguments, 2 numerical failure.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use cqt_core::error::Error;
use cqt_core::sweep::{
    demo_bounds, emit_csv, emit_plot_data, format_sig12, povm_selftest, SweepConfig,
};
use cqt_core::teleport::{ecp_pipeline, NoiseChannel};

#[derive(Parser)]
#[command(
    name = "cqt",
    about = "Controlled quantum teleportation laboratory",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep noise strength p and write one CSV row per (channel, p).
    Sweep(SweepArgs),
    /// Print the classical broadcast bounds next to the GHZ quantum maxima.
    DemoBounds {
        /// Random restarts for the settings search.
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Fidelity report for a single (channel, p) point.
    Teleport {
        /// Noise channel: total or qubit.
        #[arg(long)]
        channel: String,
        /// Depolarizing strength in [0, 1].
        #[arg(long)]
        p: f64,
        /// Certified duality-gap tolerance for the eavesdropper's POVM.
        #[arg(long, default_value_t = 1e-7)]
        sdp_tol: f64,
    },
    /// Solve discrimination instances with known optima and report gaps.
    PovmSelftest {
        #[arg(long, default_value_t = 1e-7)]
        sdp_tol: f64,
    },
}

#[derive(Args, Default)]
struct SweepArgs {
    /// total, qubit or both.
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    p_min: Option<f64>,
    #[arg(long)]
    p_max: Option<f64>,
    #[arg(long)]
    p_step: Option<f64>,
    #[arg(long)]
    sdp_tol: Option<f64>,
    /// Random restarts per grid point for the Svetlichny search.
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat key=value config file; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads for grid evaluation (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Additionally write a two-column `s ecp` file per channel.
    #[arg(long, default_value_t = false)]
    plot_data: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Let help/version print normally; argument errors exit 1.
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };

    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::NotConverged { .. }
        | Error::NotPositiveSemidefinite { .. }
        | Error::NotHermitian { .. }
        | Error::NotUnitTrace { .. }
        | Error::NotNormalized { .. } => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Sweep(args) => run_sweep_command(args),
        Command::DemoBounds { restarts, seed } => run_demo_bounds(restarts, seed),
        Command::Teleport {
            channel,
            p,
            sdp_tol,
        } => run_teleport(&channel, p, sdp_tol),
        Command::PovmSelftest { sdp_tol } => run_selftest(sdp_tol),
    }
}

/// Values from a flat key=value file; unknown keys are rejected.
fn parse_config_file(path: &Path) -> Result<HashMap<String, String>, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidArgument(format!(
                "{}:{}: expected key=value, got '{line}'",
                path.display(),
                lineno + 1
            ))
        })?;
        let key = key.trim().to_string();
        match key.as_str() {
            "channel" | "p_min" | "p_max" | "p_step" | "sdp_tol" | "restarts" | "seed"
            | "out" | "jobs" | "plot_data" => {
                map.insert(key, value.trim().to_string());
            }
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown config key '{other}'"
                )))
            }
        }
    }
    Ok(map)
}

fn parsed<T: FromStr>(map: &HashMap<String, String>, key: &str) -> Result<Option<T>, Error>
where
    T::Err: std::fmt::Display,
{
    match map.get(key) {
        None => Ok(None),
        Some(raw) => raw.parse::<T>().map(Some).map_err(|e| {
            Error::InvalidArgument(format!("config key '{key}': {e}"))
        }),
    }
}

fn channels_from(name: &str) -> Result<Vec<NoiseChannel>, Error> {
    match name {
        "both" => Ok(vec![NoiseChannel::Total, NoiseChannel::Qubit]),
        other => Ok(vec![other.parse::<NoiseChannel>()?]),
    }
}

fn run_sweep_command(args: SweepArgs) -> Result<ExitCode, Error> {
    let file = match &args.config {
        Some(path) => parse_config_file(path)?,
        None => HashMap::new(),
    };

    // Flags override the config file, which overrides the defaults.
    let defaults = SweepConfig::default();
    let channel_name = args
        .channel
        .or_else(|| file.get("channel").cloned())
        .unwrap_or_else(|| "both".to_string());
    let config = SweepConfig {
        channels: channels_from(&channel_name)?,
        p_min: args.p_min.or(parsed(&file, "p_min")?).unwrap_or(defaults.p_min),
        p_max: args.p_max.or(parsed(&file, "p_max")?).unwrap_or(defaults.p_max),
        p_step: args
            .p_step
            .or(parsed(&file, "p_step")?)
            .unwrap_or(defaults.p_step),
        sdp_tol: args
            .sdp_tol
            .or(parsed(&file, "sdp_tol")?)
            .unwrap_or(defaults.sdp_tol),
        optimizer_restarts: args
            .restarts
            .or(parsed(&file, "restarts")?)
            .unwrap_or(defaults.optimizer_restarts),
        seed: args.seed.or(parsed(&file, "seed")?).unwrap_or(defaults.seed),
    };
    let out = args
        .out
        .or_else(|| file.get("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("sweep.csv"));
    let jobs: Option<usize> = args.jobs.or(parsed(&file, "jobs")?);
    let plot_data = args.plot_data || parsed::<bool>(&file, "plot_data")?.unwrap_or(false);

    let result = match jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            pool.install(|| cqt_core::sweep::run_sweep(&config))?
        }
        None => cqt_core::sweep::run_sweep(&config)?,
    };

    emit_csv(&result.rows, &out)?;
    println!("wrote {} rows to {}", result.rows.len(), out.display());

    if plot_data {
        for &channel in &config.channels {
            let path = plot_path(&out, channel);
            emit_plot_data(&result.rows, channel, &path)?;
            println!("wrote plot data to {}", path.display());
        }
    }

    for &channel in &config.channels {
        if let Some((s_lo, s_hi)) = ecp_zero_crossing(&result.rows, channel) {
            println!(
                "{}: ECP changes sign between s = {} and s = {}",
                channel.name(),
                format_sig12(s_lo),
                format_sig12(s_hi)
            );
        }
    }

    if result.failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for f in &result.failures {
            eprintln!("failed: channel={} p={}: {}", f.channel.name(), f.p, f.reason);
        }
        Ok(ExitCode::from(2))
    }
}

fn plot_path(out: &Path, channel: NoiseChannel) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "sweep".to_string());
    let name = format!("{stem}.{}.dat", channel.name());
    out.with_file_name(name)
}

/// Bracket where the channel's ECP crosses zero, in s_closed_form.
fn ecp_zero_crossing(
    rows: &[cqt_core::sweep::SweepRow],
    channel: NoiseChannel,
) -> Option<(f64, f64)> {
    let channel_rows: Vec<_> = rows.iter().filter(|r| r.channel == channel).collect();
    for pair in channel_rows.windows(2) {
        if pair[0].ecp.signum() != pair[1].ecp.signum() {
            let mut s = [pair[0].s_closed_form, pair[1].s_closed_form];
            s.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
            return Some((s[0], s[1]));
        }
    }
    None
}

fn run_demo_bounds(restarts: usize, seed: u64) -> Result<ExitCode, Error> {
    let report = demo_bounds(restarts, seed)?;
    println!("classical broadcast bound, svetlichny: {}", format_sig12(report.broadcast_svetlichny));
    println!("classical broadcast bound, mermin:     {}", format_sig12(report.broadcast_mermin));
    println!("ghz quantum maximum, svetlichny:       {}", format_sig12(report.ghz_svetlichny));
    println!("ghz quantum maximum, mermin:           {}", format_sig12(report.ghz_mermin));
    println!();
    println!(
        "svetlichny separates the quantum device from broadcast-classical boxes \
         ({} > {}); mermin does not ({} = {})",
        format_sig12(report.ghz_svetlichny),
        format_sig12(report.broadcast_svetlichny),
        format_sig12(report.ghz_mermin),
        format_sig12(report.broadcast_mermin),
    );
    print_settings("svetlichny settings", &report.svetlichny_settings);
    print_settings("mermin settings", &report.mermin_settings);
    Ok(ExitCode::SUCCESS)
}

fn print_settings(label: &str, s: &cqt_core::nonlocality::SettingsTriple) {
    let fmt = |v: &cqt_core::states::BlochVector| {
        format!("({:+.4}, {:+.4}, {:+.4})", v.x, v.y, v.z)
    };
    println!("{label}:");
    println!("  alice:   {}  {}", fmt(&s.alice[0]), fmt(&s.alice[1]));
    println!("  bob:     {}  {}", fmt(&s.bob[0]), fmt(&s.bob[1]));
    println!("  charlie: {}  {}", fmt(&s.charlie[0]), fmt(&s.charlie[1]));
}

fn run_teleport(channel: &str, p: f64, sdp_tol: f64) -> Result<ExitCode, Error> {
    let channel: NoiseChannel = channel.parse()?;
    let comp = ecp_pipeline(channel, p, sdp_tol, 5000)?;
    println!("channel:    {}", channel.name());
    println!("p:          {}", format_sig12(p));
    println!("f_c_ne:     {}", format_sig12(comp.report.f_c_ne));
    println!("f_nc_e:     {}", format_sig12(comp.report.f_nc_e));
    println!("f_nc_guess: {}", format_sig12(comp.report.f_nc_guess));
    println!("ecp:        {}", format_sig12(comp.report.ecp));
    println!("sdp_gap:    {}", format_sig12(comp.solve.gap));
    Ok(ExitCode::SUCCESS)
}

fn run_selftest(sdp_tol: f64) -> Result<ExitCode, Error> {
    if sdp_tol <= 0.0 {
        return Err(Error::InvalidArgument("sdp_tol must be positive".into()));
    }
    let results = povm_selftest(sdp_tol)?;
    let mut ok = true;
    for (name, value, expected, gap) in &results {
        let pass = (value - expected).abs() <= sdp_tol.max(1e-7) && *gap <= sdp_tol;
        ok &= pass;
        println!(
            "{name}: value {} expected {} gap {} [{}]",
            format_sig12(*value),
            format_sig12(*expected),
            format_sig12(*gap),
            if pass { "ok" } else { "FAIL" }
        );
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}
