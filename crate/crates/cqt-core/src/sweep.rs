//! The noise sweep: one row per (channel, p) grid point, combining the
//! closed-form and variational Svetlichny values with the ECP pipeline.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::nonlocality::{classical_broadcast_bound, closed_form_max_s, optimize_settings, Objective};
use crate::povm::verify_result;
use crate::teleport::{ecp_pipeline, NoiseChannel};

/// Everything one sweep run needs to know.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub channels: Vec<NoiseChannel>,
    pub p_min: f64,
    pub p_max: f64,
    pub p_step: f64,
    pub sdp_tol: f64,
    pub optimizer_restarts: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            channels: vec![NoiseChannel::Total, NoiseChannel::Qubit],
            p_min: 0.0,
            p_max: 1.0,
            p_step: 0.02,
            sdp_tol: 1e-7,
            optimizer_restarts: 20,
            seed: 42,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p_min)
            || !(0.0..=1.0).contains(&self.p_max)
            || self.p_min > self.p_max
        {
            return Err(Error::InvalidArgument(format!(
                "p range [{}, {}] must sit inside [0, 1]",
                self.p_min, self.p_max
            )));
        }
        if self.p_step <= 0.0 {
            return Err(Error::InvalidArgument("p_step must be positive".into()));
        }
        if self.sdp_tol <= 0.0 {
            return Err(Error::InvalidArgument("sdp_tol must be positive".into()));
        }
        if self.optimizer_restarts == 0 {
            return Err(Error::InvalidArgument("restarts must be ≥ 1".into()));
        }
        if self.channels.is_empty() {
            return Err(Error::InvalidArgument("no channel selected".into()));
        }
        Ok(())
    }

    /// Grid points p_min, p_min + step, …, truncated at p_max (the endpoint
    /// is included when it lies on the grid up to rounding).
    pub fn grid(&self) -> Vec<f64> {
        let n = ((self.p_max - self.p_min) / self.p_step + 1e-9).floor() as usize;
        (0..=n)
            .map(|k| (self.p_min + k as f64 * self.p_step).min(self.p_max))
            .collect()
    }
}

/// One grid point of the sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub channel: NoiseChannel,
    pub p: f64,
    pub s_closed_form: f64,
    pub s_optimized: f64,
    pub f_c_ne: f64,
    pub f_nc_e: f64,
    pub ecp: f64,
    pub sdp_gap: f64,
}

/// A grid point that could not be completed.
#[derive(Debug, Clone)]
pub struct SweepFailure {
    pub channel: NoiseChannel,
    pub p: f64,
    pub reason: String,
}

/// Sweep output: completed rows sorted by (channel, p) plus any failures.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub failures: Vec<SweepFailure>,
}

fn row_for_point(config: &SweepConfig, channel: NoiseChannel, index: usize, p: f64) -> Result<SweepRow> {
    let comp = ecp_pipeline(channel, p, config.sdp_tol, 5000)?;
    let rho = channel.apply_to_ghz(p)?;
    // Per-point seed: decorrelates restarts across grid points while staying
    // reproducible for a fixed config seed.
    let channel_offset = match channel {
        NoiseChannel::Total => 0u64,
        NoiseChannel::Qubit => 1 << 32,
    };
    let seed = config
        .seed
        .wrapping_add(channel_offset)
        .wrapping_add(1000 * index as u64);
    let (_, s_optimized) = optimize_settings(
        &rho,
        Objective::Svetlichny,
        config.optimizer_restarts,
        seed,
    )?;
    let s_closed_form = closed_form_max_s(channel, p)?;
    Ok(SweepRow {
        channel,
        p,
        s_closed_form,
        s_optimized,
        f_c_ne: comp.report.f_c_ne,
        f_nc_e: comp.report.f_nc_e,
        ecp: comp.report.ecp,
        sdp_gap: comp.solve.gap,
    })
}

/// Run the sweep. Grid points are evaluated concurrently (bounded by the
/// ambient rayon pool) and the output is sorted deterministically, so the
/// emitted rows are byte-stable for a fixed config.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let grid = config.grid();
    let points: Vec<(NoiseChannel, usize, f64)> = config
        .channels
        .iter()
        .flat_map(|&c| grid.iter().enumerate().map(move |(i, &p)| (c, i, p)))
        .collect();

    let outcomes: Vec<std::result::Result<SweepRow, SweepFailure>> = points
        .par_iter()
        .map(|&(channel, index, p)| {
            row_for_point(config, channel, index, p).map_err(|e| SweepFailure {
                channel,
                p,
                reason: e.to_string(),
            })
        })
        .collect();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(row) => {
                if row.sdp_gap > config.sdp_tol {
                    failures.push(SweepFailure {
                        channel: row.channel,
                        p: row.p,
                        reason: format!("sdp gap {:.3e} above tolerance", row.sdp_gap),
                    });
                } else {
                    rows.push(row);
                }
            }
            Err(f) => failures.push(f),
        }
    }
    rows.sort_by(|a, b| {
        (a.channel.name(), a.p)
            .partial_cmp(&(b.channel.name(), b.p))
            .expect("finite keys")
    });
    failures.sort_by(|a, b| {
        (a.channel.name(), a.p)
            .partial_cmp(&(b.channel.name(), b.p))
            .expect("finite keys")
    });
    Ok(SweepResult { rows, failures })
}

/// Format with 12 significant digits, trimming trailing zeros the way %g
/// does; round-trips through f64 parsing at that precision.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let formatted = format!("{x:.11e}");
    let (mantissa, exponent) = formatted.split_once('e').expect("scientific form");
    let exp: i32 = exponent.parse().expect("valid exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        let trimmed = if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        };
        trimmed
    } else {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{m}e{exp}")
    }
}

pub const CSV_HEADER: &str = "channel,p,s_closed_form,s_optimized,f_c_ne,f_nc_e,ecp,sdp_gap";

/// Render rows as CSV text: the fixed header, one line per row, reals at 12
/// significant digits, newline-terminated.
pub fn render_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.channel.name(),
            format_sig12(row.p),
            format_sig12(row.s_closed_form),
            format_sig12(row.s_optimized),
            format_sig12(row.f_c_ne),
            format_sig12(row.f_nc_e),
            format_sig12(row.ecp),
            format_sig12(row.sdp_gap),
        ));
    }
    out
}

/// Write the CSV to a file (UTF-8).
pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidArgument("no rows to emit".into()));
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(render_csv(rows).as_bytes())?;
    Ok(())
}

/// Two-column whitespace-separated `s ecp` file for one channel, for
/// external plotting.
pub fn emit_plot_data(rows: &[SweepRow], channel: NoiseChannel, path: &Path) -> Result<()> {
    let mut out = String::new();
    for row in rows.iter().filter(|r| r.channel == channel) {
        out.push_str(&format!(
            "{} {}\n",
            format_sig12(row.s_closed_form),
            format_sig12(row.ecp)
        ));
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no rows for channel {}",
            channel.name()
        )));
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}

/// The certification landmark values, computed fresh.
#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub broadcast_svetlichny: f64,
    pub broadcast_mermin: f64,
    pub ghz_svetlichny: f64,
    pub ghz_mermin: f64,
    pub svetlichny_settings: crate::nonlocality::SettingsTriple,
    pub mermin_settings: crate::nonlocality::SettingsTriple,
}

/// Classical broadcast maxima (both 4) against the GHZ quantum maxima
/// (4√2 for Svetlichny, 4 for Mermin): Svetlichny separates the quantum
/// device from broadcast-classical boxes, Mermin does not.
pub fn demo_bounds(restarts: usize, seed: u64) -> Result<BoundsReport> {
    let ghz = crate::density::DensityMatrix::from_pure(&crate::states::make_ghz())?;
    let (svetlichny_settings, ghz_svetlichny) =
        optimize_settings(&ghz, Objective::Svetlichny, restarts, seed)?;
    let (mermin_settings, ghz_mermin) = optimize_settings(&ghz, Objective::Mermin, restarts, seed)?;
    Ok(BoundsReport {
        broadcast_svetlichny: classical_broadcast_bound(Objective::Svetlichny)?,
        broadcast_mermin: classical_broadcast_bound(Objective::Mermin)?,
        ghz_svetlichny,
        ghz_mermin,
        svetlichny_settings,
        mermin_settings,
    })
}

/// Self-test of the discrimination solver on instances with known optima:
/// the two-state qubit instance (closed-form optimum (1 + Tr|ρ̃₁−ρ̃₂|)/2)
/// and an orthogonal-support instance (perfect discrimination).
pub fn povm_selftest(tol: f64) -> Result<Vec<(String, f64, f64, f64)>> {
    use crate::linalg::PureState;
    use crate::povm::{solve_discrimination, DiscriminationInstance};
    use num_complex::Complex64;

    let mut results = Vec::new();

    let s = 1.0 / 2f64.sqrt();
    let zero = PureState::basis(2, 0).projector();
    let one = PureState::basis(2, 1).projector();
    let plus = PureState::new(vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)])
        .expect("normalized")
        .projector();

    let helstrom = DiscriminationInstance::new(
        vec![zero.scale_re(0.5), plus.scale_re(0.5)],
        vec!["zero".into(), "plus".into()],
    );
    let expected = 0.5 * (1.0 + s);
    let solved = solve_discrimination(&helstrom, tol, 5000)?;
    let report = verify_result(&helstrom, &solved);
    results.push((
        "helstrom".to_string(),
        solved.primal_value,
        expected,
        report.gap,
    ));

    let orthogonal = DiscriminationInstance::new(
        vec![zero.scale_re(0.5), one.scale_re(0.5)],
        vec!["zero".into(), "one".into()],
    );
    let solved = solve_discrimination(&orthogonal, tol, 5000)?;
    let report = verify_result(&orthogonal, &solved);
    results.push((
        "orthogonal".to_string(),
        solved.primal_value,
        1.0,
        report.gap,
    ));

    Ok(results)
}
