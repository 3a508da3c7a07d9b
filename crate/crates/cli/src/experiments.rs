//! Built-in experiment configurations.
//!
//! * `exp1`: two separated inclusions recovered from one initial interval.
//! * `exp2`: one inclusion at heights 1.0 and 0.5, iterations to a common
//!   relative residual.
//! * `exp3`: the height-0.5 problem with 10% noise and discrepancy stopping.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::thread;

use crate::config::RunConfig;
use crate::output::{num, write_run, write_text};
use crate::runner::{residual_threshold, run, Outcome};
use crate::CliError;

/// Residual threshold of the exp2 comparison, relative to `‖g2 - z‖`.
pub const EXP2_RELATIVE_RESIDUAL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Exp1,
    Exp2,
    Exp3,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Exp1 => "exp1",
            Experiment::Exp2 => "exp2",
            Experiment::Exp3 => "exp3",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "exp1" => Some(Experiment::Exp1),
            "exp2" => Some(Experiment::Exp2),
            "exp3" => Some(Experiment::Exp3),
            _ => None,
        }
    }

    /// Labelled sub-run configurations; output directories are relative.
    pub fn configs(self) -> Vec<(String, RunConfig)> {
        let base = RunConfig {
            height: 0.5,
            nx: 64,
            ny: 32,
            ..RunConfig::default()
        };
        match self {
            Experiment::Exp1 => vec![(
                "exp1".into(),
                RunConfig {
                    alpha: 300.0,
                    beta: 0.0,
                    max_iters: 20000,
                    truth: vec![(0.2, 0.4), (0.6, 0.8)],
                    init: vec![(0.1, 0.9)],
                    output_dir: PathBuf::from("exp1"),
                    snapshot_iters: vec![0, 1000, 5000, 10000, 15000, 20000],
                    ..base
                },
            )],
            Experiment::Exp2 => [1.0, 0.5]
                .into_iter()
                .map(|height| {
                    let label = format!("height_{height:.1}");
                    let cfg = RunConfig {
                        height,
                        ny: (64.0 * height) as usize,
                        alpha: 5.0,
                        max_iters: 60000,
                        truth: vec![(0.4, 0.6)],
                        init: vec![(0.35, 0.6)],
                        output_dir: Path::new("exp2").join(&label),
                        snapshot_iters: vec![0, 500, 3000, 10000, 60000],
                        ..base.clone()
                    };
                    (label, cfg)
                })
                .collect(),
            Experiment::Exp3 => vec![(
                "exp3".into(),
                RunConfig {
                    truth: vec![(0.4, 0.6)],
                    init: vec![(0.35, 0.65)],
                    noise_level: 0.1,
                    seed: 1,
                    output_dir: PathBuf::from("exp3"),
                    snapshot_iters: vec![0, 10, 20],
                    ..base
                },
            )],
        }
    }
}

pub struct SubRun {
    pub label: String,
    pub config: RunConfig,
    pub outcome: Outcome,
    pub dir: PathBuf,
}

pub struct Report {
    pub experiment: Experiment,
    pub runs: Vec<SubRun>,
    /// `key = value` comparison text (exp2 only).
    pub comparison: Option<String>,
}

/// First iteration at which each exp2 run reaches the relative residual.
pub fn iterations_to_threshold(run: &SubRun) -> Option<usize> {
    let threshold = residual_threshold(&run.outcome.problem, EXP2_RELATIVE_RESIDUAL);
    run.outcome.record.first_iter_below(threshold)
}

fn comparison(runs: &[SubRun]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "relative_residual = {}", num(EXP2_RELATIVE_RESIDUAL));
    let mut iters = Vec::new();
    for r in runs {
        let it = iterations_to_threshold(r);
        match it {
            Some(k) => {
                let _ = writeln!(s, "iterations_{} = {k}", r.label);
            }
            None => {
                let _ = writeln!(s, "iterations_{} = not_reached", r.label);
            }
        }
        iters.push(it);
    }
    if let [Some(deep), Some(shallow)] = iters[..] {
        let _ = writeln!(s, "ratio = {}", num(deep as f64 / shallow as f64));
    }
    s
}

/// Runs every sub-run of `exp` concurrently and writes its artifacts under
/// `root`.
pub fn run_experiment(exp: Experiment, root: &Path) -> Result<Report, CliError> {
    let configs = exp.configs();
    let results: Vec<Result<SubRun, CliError>> = thread::scope(|scope| {
        let handles: Vec<_> = configs
            .into_iter()
            .map(|(label, config)| {
                scope.spawn(move || {
                    let outcome = run(&config)?;
                    let dir = root.join(&config.output_dir);
                    write_run(&dir, &config, &outcome)?;
                    Ok(SubRun {
                        label,
                        config,
                        outcome,
                        dir,
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("experiment worker panicked"))
            .collect()
    });
    let runs = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let comparison = (exp == Experiment::Exp2).then(|| comparison(&runs));
    if let Some(text) = &comparison {
        write_text(&root.join("exp2").join("comparison.txt"), text)?;
    }
    Ok(Report {
        experiment: exp,
        runs,
        comparison,
    })
}
