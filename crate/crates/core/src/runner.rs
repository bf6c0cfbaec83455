//! The four run modes behind the command line: `scan`, `check`,
//! `spectrum` and `snapshot`.

use crate::dynamics::{autocorrelation, Propagator};
use crate::error::{Error, Result};
use crate::measures::{check_bounds, measure, AlphaPair, BoundReport};
use crate::output;
use crate::revival::{scan_with, RevivalTimeline};
use crate::scenario::{OutputFormat, Prepared, ScenarioConfig};
use serde_json::{json, Value};
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn unix_seconds() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Manifest contents shared by every run mode.
pub fn manifest(prepared: &Prepared, command: &str, started: u64, files: &[String]) -> Value {
    let basis = &prepared.basis;
    let scales = &prepared.scales;
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "started_unix": started,
        "finished_unix": unix_seconds(),
        "threads": rayon::current_num_threads(),
        "config": prepared.config,
        "resolved": prepared.resolved,
        "basis": {
            "n_max": basis.n_max(),
            "sum_c2": basis.norm_sum(),
            "completeness_deficit": 1.0 - basis.norm_sum(),
            "peak_n": basis.peak_index(),
            "central_n": basis.central_index(),
            "mean_energy": basis.mean_energy(),
            "tail_max_last10": basis.tail_max(10),
        },
        "time_scales": {
            "n0": scales.n0,
            "t_cl_fd": scales.t_cl,
            "t_cl_analytic": crate::basis::classical_period(basis.z0()),
            "t_rev": scales.t_rev,
            "t_rev_fd": scales.t_rev_fd,
            "t_rev_fd_over_t_rev": scales.t_rev_fd / scales.t_rev,
            "note": "t_rev = 4 z0^2/pi labels fractional revivals; the second difference of the spectrum gives t_rev_fd, close to 8 z0^2/pi",
        },
        "files": files,
    })
}

fn write_manifest(
    prepared: &Prepared,
    dir: &Path,
    command: &str,
    started: u64,
    files: &[String],
) -> Result<()> {
    let value = manifest(prepared, command, started, files);
    output::write_json(&value, create(dir, "manifest.json")?)
}

/// Output of [`run_scan`].
pub struct ScanRun {
    pub timeline: RevivalTimeline,
    pub files: Vec<PathBuf>,
}

/// Full time scan: writes `timeline.csv`, `minima.json` and `manifest.json`.
pub fn run_scan(config: &ScenarioConfig, out_dir: &Path) -> Result<ScanRun> {
    let started = unix_seconds();
    let prepared = config.prepare()?;
    let r = &prepared.resolved;
    let propagator = Propagator::new(&prepared.basis, prepared.grid)?;
    let mut timeline = scan_with(
        &propagator,
        &prepared.basis,
        r.t_start,
        r.t_end,
        r.num_samples,
        &prepared.alphas,
    )?;
    timeline.analyze(&r.detector)?;

    fs::create_dir_all(out_dir)?;
    let mut names = Vec::new();
    if config.output.formats.contains(&OutputFormat::Csv) {
        output::write_timeline_csv(&timeline, create(out_dir, "timeline.csv")?)?;
        names.push("timeline.csv".to_string());
    }
    if config.output.formats.contains(&OutputFormat::Json) {
        output::write_json(
            &output::minima_json(&timeline),
            create(out_dir, "minima.json")?,
        )?;
        names.push("minima.json".to_string());
    }
    names.push("manifest.json".to_string());
    write_manifest(&prepared, out_dir, "scan", started, &names)?;
    Ok(ScanRun {
        timeline,
        files: names.iter().map(|n| out_dir.join(n)).collect(),
    })
}

/// Bound reports at the configured check times. Index one is always
/// included so the Shannon-limit entropy-power rows are present.
pub fn run_check(config: &ScenarioConfig) -> Result<Vec<BoundReport>> {
    let prepared = config.prepare()?;
    let mut alphas = prepared.alphas.clone();
    if !alphas.iter().any(|a| a.is_shannon()) {
        alphas.push(AlphaPair::new(1.0)?);
    }
    let propagator = Propagator::new(&prepared.basis, prepared.grid)?;
    prepared
        .resolved
        .check_times
        .iter()
        .map(|&t| {
            let state = propagator.evolve_to(t)?;
            let sample = measure(&state, &alphas, autocorrelation(&prepared.basis, t).norm())
                .map_err(|e| e.at_time(t))?;
            Ok(check_bounds(&sample))
        })
        .collect()
}

/// Renders bound reports as an aligned text table.
pub fn format_bound_table(reports: &[BoundReport]) -> String {
    let mut out = format!(
        "{:>14}  {:<28} {:>7}  {:>16}  {:>16}  {:>12}\n",
        "t", "relation", "alpha", "value", "bound", "slack"
    );
    for report in reports {
        for row in &report.rows {
            let alpha = row
                .alpha
                .map(|a| format!("{a:.4}"))
                .unwrap_or_else(|| "-".into());
            let flag = if row.slack < -crate::measures::BOUND_TOL {
                "  VIOLATED"
            } else {
                ""
            };
            out.push_str(&format!(
                "{:>14}  {:<28} {:>7}  {:>16.10}  {:>16.10}  {:>12.4e}{flag}\n",
                output::format_number(report.time),
                row.relation.label(),
                alpha,
                row.value,
                row.bound,
                row.slack
            ));
        }
    }
    out
}

/// Writes `spectrum.json` and `manifest.json`.
pub fn run_spectrum(config: &ScenarioConfig, out_dir: &Path) -> Result<PathBuf> {
    let started = unix_seconds();
    let prepared = config.prepare()?;
    fs::create_dir_all(out_dir)?;
    output::write_spectrum_json(&prepared.basis, create(out_dir, "spectrum.json")?)?;
    write_manifest(
        &prepared,
        out_dir,
        "spectrum",
        started,
        &["spectrum.json".into(), "manifest.json".into()],
    )?;
    Ok(out_dir.join("spectrum.json"))
}

/// File stem for a snapshot at time `t`.
pub fn snapshot_name(t: f64) -> String {
    format!("snapshot_{}", output::format_number(t))
}

/// Writes `snapshot_<t>.csv` (position) and `snapshot_<t>_momentum.csv` for
/// every configured time, overridden by `times` when given.
pub fn run_snapshot(
    config: &ScenarioConfig,
    out_dir: &Path,
    times: Option<&[f64]>,
) -> Result<Vec<PathBuf>> {
    let started = unix_seconds();
    let prepared = config.prepare()?;
    let times = times.unwrap_or(&prepared.resolved.snapshot_times);
    if times.is_empty() {
        return Err(Error::Config("no snapshot times requested".into()));
    }
    let propagator = Propagator::new(&prepared.basis, prepared.grid)?;
    fs::create_dir_all(out_dir)?;
    let mut names = Vec::new();
    for &t in times {
        let state = propagator.evolve_to(t)?;
        let stem = snapshot_name(t);
        let pos = format!("{stem}.csv");
        let mom = format!("{stem}_momentum.csv");
        output::write_position_csv(&state, create(out_dir, &pos)?)?;
        output::write_momentum_csv(&state, create(out_dir, &mom)?)?;
        names.push(pos);
        names.push(mom);
    }
    let mut all = names.clone();
    all.push("manifest.json".into());
    write_manifest(&prepared, out_dir, "snapshot", started, &all)?;
    Ok(names.iter().map(|n| out_dir.join(n)).collect())
}
