//! Batch experiments: per-run rows, aggregated tables, and timing.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use epsnet::dataio::Dataset;
use epsnet::eps::Epsilon;
use epsnet::netbuilder::{compute_net, Config, Mode};
use epsnet::Result;

/// One net computation.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentRow {
    pub dataset: String,
    pub n: u64,
    pub epsilon: f64,
    pub c1: f64,
    pub seed: u64,
    pub net_size: usize,
    pub size_times_eps: f64,
    pub restarts: u64,
    pub depth: usize,
    pub wall_ms: f64,
}

pub const RUN_HEADER: &str = "dataset,n,epsilon,c1,seed,net_size,size_times_eps,restarts,depth,wall_ms";

impl ExperimentRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.4},{},{},{:.3}",
            self.dataset,
            self.n,
            self.epsilon,
            self.c1,
            self.seed,
            self.net_size,
            self.size_times_eps,
            self.restarts,
            self.depth,
            self.wall_ms
        )
    }
}

pub fn run_one(label: &str, d: &Dataset, eps: Epsilon, c1: f64, seed: u64, mode: Mode) -> Result<ExperimentRow> {
    let cfg = Config::new(eps).with_c1(c1).with_seed(seed).with_mode(mode);
    let start = Instant::now();
    let res = compute_net(&d.points, &cfg)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(ExperimentRow {
        dataset: label.to_string(),
        n: d.total_weight(),
        epsilon: eps.value(),
        c1,
        seed,
        net_size: res.net.len(),
        size_times_eps: res.net.len() as f64 * eps.value(),
        restarts: res.stats.total_restarts(),
        depth: res.stats.depth,
        wall_ms,
    })
}

/// A cell of work: which dataset, ε and c₁, repeated over `trials` seeds.
#[derive(Debug, Clone, Copy)]
pub struct Cell {
    pub dataset: usize,
    pub eps: Epsilon,
    pub c1: f64,
}

/// Runs every cell over seeds `seed..seed+trials`, in parallel. Rows come
/// back in cell order, then seed order.
pub fn run_cells(
    data: &[(String, Dataset)],
    cells: &[Cell],
    trials: u64,
    seed: u64,
    mode: Mode,
) -> Result<Vec<Vec<ExperimentRow>>> {
    cells
        .par_iter()
        .map(|c| {
            let (label, d) = &data[c.dataset];
            (0..trials)
                .into_par_iter()
                .map(|t| run_one(label, d, c.eps, c.c1, seed + t, mode))
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

pub fn mean_std(xs: impl IntoIterator<Item = f64>) -> (f64, f64) {
    let xs: Vec<f64> = xs.into_iter().collect();
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    if xs.len() < 2 {
        return (m, 0.0);
    }
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64;
    (m, var.sqrt())
}

pub fn runs_csv(groups: &[Vec<ExperimentRow>]) -> String {
    let mut s = String::from(RUN_HEADER);
    s.push('\n');
    for r in groups.iter().flatten() {
        let _ = writeln!(s, "{}", r.csv());
    }
    s
}

pub const SWEEP_HEADER: &str = "dataset,n,epsilon,c1,trials,mean_size,mean_size_times_eps,std_size_times_eps";

pub fn sweep_csv(groups: &[Vec<ExperimentRow>]) -> String {
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    for g in groups {
        let Some(r) = g.first() else { continue };
        let (ms, _) = mean_std(g.iter().map(|r| r.net_size as f64));
        let (m, sd) = mean_std(g.iter().map(|r| r.size_times_eps));
        let _ = writeln!(s, "{},{},{},{},{},{:.2},{:.4},{:.4}", r.dataset, r.n, r.epsilon, r.c1, g.len(), ms, m, sd);
    }
    s
}

/// Plot data: one row per c₁, one column per dataset.
pub fn sweep_dat(labels: &[String], c1s: &[f64], groups: &[Vec<ExperimentRow>]) -> String {
    let mut s = String::from("# c1");
    for l in labels {
        let _ = write!(s, " {l}");
    }
    s.push('\n');
    for (j, c1) in c1s.iter().enumerate() {
        let _ = write!(s, "{c1}");
        for i in 0..labels.len() {
            let (m, _) = mean_std(groups[i * c1s.len() + j].iter().map(|r| r.size_times_eps));
            let _ = write!(s, " {m:.4}");
        }
        s.push('\n');
    }
    s
}

pub const TABLE_HEADER: &str = "dataset,n,epsilon,c1,trials,mean_size,std_size,mean_size_times_eps";

pub fn table_csv(groups: &[Vec<ExperimentRow>]) -> String {
    let mut s = String::from(TABLE_HEADER);
    s.push('\n');
    for g in groups {
        let Some(r) = g.first() else { continue };
        let (m, sd) = mean_std(g.iter().map(|r| r.net_size as f64));
        let _ = writeln!(s, "{},{},{},{},{},{:.2},{:.2},{:.4}", r.dataset, r.n, r.epsilon, r.c1, g.len(), m, sd, m * r.epsilon);
    }
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub wall_ms: f64,
    pub runs: usize,
    pub min_ms: f64,
    /// Median time over the previous size's median.
    pub ratio: Option<f64>,
}

pub const BENCH_HEADER: &str = "n,wall_ms,runs,min_ms,ratio";

pub fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) / 2.0
    }
}

/// Times `compute_net` on uniform data, sequentially so runs do not
/// contend for cores.
pub fn bench(sizes: &[usize], eps: Epsilon, c1: f64, runs: usize, seed: u64) -> Result<Vec<BenchRow>> {
    let mut out: Vec<BenchRow> = Vec::new();
    for &n in sizes {
        let d = epsnet::dataio::gen_uniform(n, seed);
        let times: Vec<f64> = (0..runs as u64)
            .map(|r| run_one("uniform", &d, eps, c1, seed + r, Mode::Recursive).map(|row| row.wall_ms))
            .collect::<Result<_>>()?;
        let wall_ms = median(times.clone());
        let ratio = out.last().map(|p| wall_ms / p.wall_ms);
        out.push(BenchRow {
            n,
            wall_ms,
            runs,
            min_ms: times.iter().copied().fold(f64::INFINITY, f64::min),
            ratio,
        });
    }
    Ok(out)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from(BENCH_HEADER);
    s.push('\n');
    for r in rows {
        let ratio = r.ratio.map(|x| format!("{x:.3}")).unwrap_or_default();
        let _ = writeln!(s, "{},{:.3},{},{:.3},{}", r.n, r.wall_ms, r.runs, r.min_ms, ratio);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats_helpers() {
        assert_eq!(mean_std([2.0, 4.0]), (3.0, 2f64.sqrt()));
        assert_eq!(mean_std([5.0]), (5.0, 0.0));
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
