//! CSV and summary writers. Floats use `{:.16e}` (17 significant digits),
//! so every value round-trips exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use cauchy_ls_core::data::l2_norm_trace;
use cauchy_ls_core::RunRecord;

use crate::config::RunConfig;
use crate::runner::{Outcome, Spectrum};
use crate::CliError;

pub const HISTORY_HEADER: &str = "iter,residual,error,components";
pub const SNAPSHOT_HEADER: &str = "x,phi,q,true_q";
pub const SIGMA_HEADER: &str = "k,sigma";

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn history_csv(record: &RunRecord) -> String {
    let mut s = String::with_capacity(64 * record.history.len());
    s.push_str(HISTORY_HEADER);
    s.push('\n');
    for h in &record.history {
        let err = h.error.map(num).unwrap_or_default();
        let _ = writeln!(s, "{},{},{},{}", h.iter, num(h.residual), err, h.components);
    }
    s
}

/// Writes `history.csv`, one `snapshot_<iter>.csv` per snapshot,
/// `summary.txt` and `config.txt` into `dir`.
pub fn write_run(dir: &Path, cfg: &RunConfig, outcome: &Outcome) -> Result<(), CliError> {
    create_dir(dir)?;
    let record = &outcome.record;
    write(&dir.join("history.csv"), &history_csv(record))?;
    let x = outcome.problem.grid.x_coords();
    let truth = outcome.problem.truth.values();
    for snap in &record.snapshots {
        let mut s = String::from(SNAPSHOT_HEADER);
        s.push('\n');
        for (i, xi) in x.iter().enumerate() {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                num(*xi),
                num(snap.phi.values()[i]),
                num(snap.q.values()[i]),
                num(truth[i])
            );
        }
        write(&dir.join(format!("snapshot_{}.csv", snap.iter)), &s)?;
    }
    write(&dir.join("summary.txt"), &summary(cfg, outcome))?;
    write(&dir.join("config.txt"), &cfg.to_string())
}

pub fn summary(cfg: &RunConfig, outcome: &Outcome) -> String {
    let record = &outcome.record;
    let last = record.last();
    let data = &outcome.problem.data;
    let mut s = String::new();
    let _ = writeln!(s, "stop_reason = {}", record.stop_reason.as_str());
    let _ = writeln!(s, "stop_iter = {}", last.iter);
    let _ = writeln!(s, "final_residual = {}", num(last.residual));
    if let Some(e) = last.error {
        let _ = writeln!(s, "final_error = {}", num(e));
    }
    let _ = writeln!(s, "final_components = {}", last.components);
    let _ = writeln!(s, "rhs_norm = {}", num(l2_norm_trace(&data.rhs)));
    let _ = writeln!(s, "delta = {}", num(data.delta));
    if data.delta > 0.0 {
        let _ = writeln!(s, "discrepancy_threshold = {}", num(cfg.tau * data.delta));
    }
    let _ = writeln!(s, "eps = {}", num(outcome.eps));
    let _ = writeln!(s, "wall_time_s = {:.6}", outcome.wall_time.as_secs_f64());
    let _ = writeln!(s, "seed = {}", cfg.seed);
    s.push_str(&cfg.to_string());
    s
}

pub fn write_spectrum(dir: &Path, cfg: &RunConfig, spec: &Spectrum) -> Result<PathBuf, CliError> {
    create_dir(dir)?;
    let mut s = String::from(SIGMA_HEADER);
    s.push('\n');
    for (k, v) in spec.sigma.iter().enumerate() {
        let _ = writeln!(s, "{},{}", k + 1, num(*v));
    }
    let path = dir.join("sigma.csv");
    write(&path, &s)?;
    let summary = format!(
        "slope = {}\nfit_from = {}\nfit_to = {}\nreference_slope = {}\nheight = {}\nnx = {}\nny = {}\n",
        num(spec.slope),
        spec.fit_range.0,
        spec.fit_range.1,
        num(-std::f64::consts::PI * cfg.height),
        cfg.height,
        cfg.nx,
        cfg.ny
    );
    write(&dir.join("sigma_summary.txt"), &summary)?;
    Ok(path)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    write(path, text)
}
