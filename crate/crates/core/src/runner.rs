//! Executes a [`RunConfig`]: optimize, filter, write CSVs, report.
//!
//! Every method sweeps the configured weight pairs (the grid method
//! answers each weight from one shared lattice enumeration). Two files per
//! method: the non-dominated frontier at the configured output path and
//! every swept point in a sibling `*.all.csv`. With `method = "all"` the
//! files are tagged per method and a text summary compares the three
//! frontiers pairwise.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use crate::config::{MethodChoice, RunConfig};
use crate::pareto::{self, ParetoPoint};
use crate::solvers::{self, SweepMethod};
use crate::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct MethodReport {
    pub method: MethodChoice,
    pub frontier_path: PathBuf,
    pub all_path: PathBuf,
    pub frontier_size: usize,
    pub points_swept: usize,
    pub wall: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub reports: Vec<MethodReport>,
    /// Directed frontier distances for every ordered method pair
    /// (`method = "all"` only).
    pub comparisons: Vec<(MethodChoice, MethodChoice, f64)>,
    pub summary_path: Option<PathBuf>,
}

/// Runs the configured method(s), writing CSVs next to `config.out`.
/// Output bytes are a pure function of the config (incl. seed).
pub fn run(config: &RunConfig) -> Result<RunSummary, Error> {
    let methods: &[MethodChoice] = match config.method {
        MethodChoice::All => &[MethodChoice::Grid, MethodChoice::Local, MethodChoice::Ga],
        single => &[single],
    };
    let tagged = config.method == MethodChoice::All;
    if let Some(parent) = config.out.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }

    let n = config.model.station_count();
    let mut reports = Vec::new();
    let mut frontiers: Vec<(MethodChoice, Vec<ParetoPoint>)> = Vec::new();
    for &method in methods {
        let started = Instant::now();
        let points: Vec<ParetoPoint> = match method {
            MethodChoice::Grid => sweep_points(config, &SweepMethod::Grid(config.grid.clone()))?,
            MethodChoice::Local => sweep_points(
                config,
                &SweepMethod::Local(config.local.clone()),
            )?,
            MethodChoice::Ga => sweep_points(config, &SweepMethod::Ga(config.ga.clone()))?,
            MethodChoice::All => unreachable!("expanded above"),
        };
        let frontier = pareto::non_dominated_filter(points.clone());
        let wall = started.elapsed();

        let frontier_path = if tagged {
            tag_path(&config.out, &method.to_string())
        } else {
            config.out.clone()
        };
        let all_path = if tagged {
            tag_path(&config.out, &format!("{method}.all"))
        } else {
            tag_path(&config.out, "all")
        };
        write_csv(&frontier_path, n, &frontier)?;
        write_csv(&all_path, n, &points)?;

        println!(
            "{method}: frontier {} of {} swept points in {:.2}s -> {}",
            frontier.len(),
            points.len(),
            wall.as_secs_f64(),
            frontier_path.display()
        );
        reports.push(MethodReport {
            method,
            frontier_path,
            all_path,
            frontier_size: frontier.len(),
            points_swept: points.len(),
            wall,
        });
        frontiers.push((method, frontier));
    }

    let mut comparisons = Vec::new();
    let mut summary_path = None;
    if tagged {
        let mut text = String::from("directed frontier distance (normalized)\n");
        for (from, from_frontier) in &frontiers {
            for (to, to_frontier) in &frontiers {
                if from == to {
                    continue;
                }
                let d = pareto::frontier_distance(from_frontier, to_frontier)?;
                text.push_str(&format!("{from} -> {to}: {d:.6}\n"));
                comparisons.push((*from, *to, d));
            }
        }
        let path = tag_path(&config.out, "summary");
        let path = path.with_extension("txt");
        fs::write(&path, &text)?;
        print!("{text}");
        println!("summary -> {}", path.display());
        summary_path = Some(path);
    }

    Ok(RunSummary {
        reports,
        comparisons,
        summary_path,
    })
}

fn sweep_points(config: &RunConfig, method: &SweepMethod) -> Result<Vec<ParetoPoint>, Error> {
    let points = solvers::weight_sweep(&config.model, method, &config.weights)?;
    Ok(points
        .into_iter()
        .map(|p| ParetoPoint::new(p.policy, &p.evaluation, Some(p.weight)))
        .collect())
}

/// `dir/frontier.csv` + `grid` -> `dir/frontier.grid.csv`.
fn tag_path(out: &Path, tag: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    let ext = out
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".to_string());
    out.with_file_name(format!("{stem}.{tag}.{ext}"))
}

/// Header `w1,w2,cost,time,sequence,T1..Tn`. Weights and thresholds print
/// with shortest round-trip formatting (thresholds re-parse bit-exactly);
/// cost and time print with 6 significant digits. Sequences are dash-joined
/// 1-based station numbers in visit order.
fn write_csv(path: &Path, n: usize, points: &[ParetoPoint]) -> Result<(), Error> {
    let mut text = String::from("w1,w2,cost,time,sequence");
    for i in 1..=n {
        text.push_str(&format!(",T{i}"));
    }
    text.push('\n');
    for point in points {
        let (w1, w2) = match point.weight {
            Some(w) => (w.w1().to_string(), w.w2().to_string()),
            None => (String::new(), String::new()),
        };
        let sequence = point
            .policy
            .sequence
            .iter()
            .map(|&i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join("-");
        text.push_str(&format!(
            "{w1},{w2},{},{},{sequence}",
            format_sig(point.cost, 6),
            format_sig(point.time, 6)
        ));
        for &t in &point.policy.thresholds {
            text.push_str(&format!(",{t}"));
        }
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}

/// Rounds to `digits` significant digits, then prints the shortest
/// representation of the rounded value.
fn format_sig(x: f64, digits: i32) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits - 1 - exponent);
    ((x * scale).round() / scale).to_string()
}
