//! `epsnet`: compute, verify and measure ε-nets for disk ranges.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage, 3 IO.

mod experiments;
mod input;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use epsnet::csstats::{bound_rows, jitter, rows_to_csv, subproblem_histogram};
use epsnet::dataio::{Dataset, Gauss9Params};
use epsnet::eps::Epsilon;
use epsnet::netbuilder::{compute_net, Config, Mode};
use epsnet::oracle::{verify_net, Verdict};
use epsnet::Error;

use experiments::{bench, bench_csv, run_cells, runs_csv, sweep_csv, sweep_dat, table_csv, Cell};
use input::{net_text, read_net, DataRef};

#[derive(Parser)]
#[command(name = "epsnet", version, about = "Small epsilon-nets for disk ranges")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute a net and print its statistics as JSON.
    Net(NetArgs),
    /// Check a net against every disk and halfplane.
    Verify(VerifyArgs),
    /// Mean size·ε over a range of c1 values.
    SweepC1(SweepArgs),
    /// Mean net sizes per dataset and ε.
    Table1(TableArgs),
    /// Counting checks for low-weight Delaunay configurations.
    Stats(StatsArgs),
    /// Wall time over growing uniform inputs.
    Bench(BenchArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Point file: whitespace-separated, or comma-separated for .csv.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generator spec kind:n, kind one of uniform, gauss9, collinear, duplicates.
    #[arg(long)]
    gen: Option<String>,
}

#[derive(Args)]
struct GenOpts {
    /// Dataset seed for generators; defaults to --seed.
    #[arg(long)]
    data_seed: Option<u64>,
    /// Gauss9 covariance factor range.
    #[arg(long, default_value_t = 0.05)]
    sigma: f64,
    /// Gauss9 covariance ridge.
    #[arg(long, default_value_t = 1e-4)]
    delta: f64,
}

impl GenOpts {
    fn params(&self) -> Gauss9Params {
        Gauss9Params {
            sigma: self.sigma,
            delta: self.delta,
        }
    }
}

#[derive(Args)]
struct NetArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    epsilon: Epsilon,
    #[arg(long, default_value_t = 12.0)]
    c1: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Recursive)]
    mode: ModeArg,
    /// Net file to write; without it the net goes to stdout and the
    /// statistics to stderr.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    gen: GenOpts,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    Recursive,
    Hybrid,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Recursive => Mode::Recursive,
            ModeArg::Hybrid => Mode::Hybrid,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: Source,
    /// Net file: rows `id x y weight`, `x y`, or `id`.
    #[arg(long)]
    net: PathBuf,
    #[arg(long)]
    epsilon: Epsilon,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest number of distinct points the oracle accepts.
    #[arg(long, env = "EPSNET_ORACLE_CAP", default_value_t = 1000)]
    oracle_cap: usize,
    #[command(flatten)]
    gen: GenOpts,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated generator specs or point files.
    #[arg(long, default_value = "uniform:50000,gauss9:90000")]
    dataset_list: String,
    #[arg(long, default_value = "0.01")]
    epsilon: Epsilon,
    /// `lo:hi` or `lo:hi:step`, inclusive.
    #[arg(long, default_value = "2:16")]
    c1_range: String,
    #[arg(long, default_value_t = 10)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV path; a .dat file for plotting is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write one CSV row per run here.
    #[arg(long)]
    runs: Option<PathBuf>,
    #[command(flatten)]
    gen: GenOpts,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, default_value = "uniform:50000,gauss9:90000")]
    datasets: String,
    #[arg(long, default_value = "0.2,0.1,0.01,0.001")]
    epsilons: String,
    #[arg(long, default_value_t = 12.0)]
    c1: f64,
    #[arg(long, default_value_t = 10)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    runs: Option<PathBuf>,
    #[command(flatten)]
    gen: GenOpts,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long, default_value = "uniform:30")]
    gen: String,
    /// `lo:hi`, inclusive.
    #[arg(long, default_value = "13:20")]
    k_range: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Perturb coordinates by up to this much before counting.
    #[arg(long, default_value_t = 0.0)]
    jitter: f64,
    /// Run the sampled edge-size histogram instead of exhaustive counts.
    #[arg(long)]
    histogram: bool,
    #[arg(long, default_value = "0.01")]
    epsilon: Epsilon,
    #[arg(long, default_value_t = 12.0)]
    c1: f64,
    /// Sample seeds for the histogram.
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Number of size bands in the histogram.
    #[arg(long, default_value_t = 6)]
    bands: usize,
    /// Output directory; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value = "100000,200000,400000,800000")]
    sizes: String,
    #[arg(long, default_value = "0.01")]
    epsilon: Epsilon,
    #[arg(long, default_value_t = 12.0)]
    c1: f64,
    #[arg(long, default_value_t = 5)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Fail {
    Usage(String),
    Io(String),
    Verify,
    Other(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        match e {
            Error::Io(_) | Error::Parse { .. } | Error::EmptyDataset => Fail::Io(e.to_string()),
            Error::InvalidConfig(_) | Error::DegenerateInput | Error::TooFewPoints { .. } => Fail::Usage(e.to_string()),
            _ => Fail::Other(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Net(a) => cmd_net(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::SweepC1(a) => cmd_sweep(a),
        Cmd::Table1(a) => cmd_table1(a),
        Cmd::Stats(a) => cmd_stats(a),
        Cmd::Bench(a) => cmd_bench(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Verify) => ExitCode::from(1),
        Err(Fail::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn say(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn write_out(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Fail::Io(format!("{}: {e}", p.display()))),
        None => {
            say(text);
            Ok(())
        }
    }
}

fn load(source: &Source, seed: u64, gen: &GenOpts) -> Result<(DataRef, Dataset), Fail> {
    let r = match (&source.input, &source.gen) {
        (Some(p), _) => DataRef::File(p.clone()),
        (None, Some(g)) => DataRef::Gen(g.clone()),
        (None, None) => return Err(Fail::Usage("need --input or --gen".into())),
    };
    let d = r.load(gen.data_seed.unwrap_or(seed), gen.params())?;
    Ok((r, d))
}

fn load_list(list: &str, seed: u64, gen: &GenOpts) -> Result<Vec<(String, Dataset)>, Fail> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let r = DataRef::parse(s);
            Ok((r.label(), r.load(gen.data_seed.unwrap_or(seed), gen.params())?))
        })
        .collect()
}

fn cmd_net(a: NetArgs) -> CmdResult {
    let (r, d) = load(&a.source, a.seed, &a.gen)?;
    let cfg = Config::new(a.epsilon).with_c1(a.c1).with_seed(a.seed).with_mode(a.mode.into());
    let res = compute_net(&d.points, &cfg)?;
    let n = d.total_weight();
    let stats = json!({
        "dataset": r.label(),
        "n": n,
        "distinct": d.len(),
        "epsilon": a.epsilon.value(),
        "threshold": a.epsilon.threshold(n).value(),
        "c1": a.c1,
        "seed": a.seed,
        "mode": cfg.mode,
        "net_size": res.net.len(),
        "size_times_eps": res.net.len() as f64 * a.epsilon.value(),
        "restarts": res.stats.total_restarts(),
        "depth": res.stats.depth,
        "base_case": res.stats.base_case,
        "restart_rule": res.stats.restart_rule,
        "levels": res.stats.levels,
    });
    let stats = serde_json::to_string_pretty(&stats).map_err(|e| Fail::Other(e.to_string()))?;
    let net = net_text(&d, &res.net);
    match &a.out {
        Some(p) => {
            write_out(Some(p), &net)?;
            say(&format!("{stats}\n"));
        }
        None => {
            say(&net);
            eprintln!("{stats}");
        }
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let (_, d) = load(&a.source, a.seed, &a.gen)?;
    if d.len() > a.oracle_cap {
        return Err(Fail::Usage(format!(
            "{} distinct points exceed the oracle cap of {}; raise it with --oracle-cap or EPSNET_ORACLE_CAP",
            d.len(),
            a.oracle_cap
        )));
    }
    let net = read_net(&a.net, &d)?;
    match verify_net(&d.points, &net, a.epsilon) {
        Verdict::Ok => {
            say("OK\n");
            Ok(())
        }
        Verdict::Violation(v) => {
            let n = d.total_weight();
            let mut r = String::from("VIOLATION\n");
            let _ = writeln!(r, "depth {} >= threshold {}", v.depth, a.epsilon.threshold(n).value());
            let support: Vec<String> = v.witnesses.iter().map(|id| id.to_string()).collect();
            let _ = writeln!(r, "support ids: {}", support.join(" "));
            for &id in &v.witnesses {
                let p = d.points[id as usize];
                let _ = writeln!(r, "  {} {} {}", id, p.x, p.y);
            }
            // The range is the anchor disk nudged so that exactly the
            // members remain; support points in the net sit on its boundary.
            let disk = serde_json::to_string(&v.disk).map_err(|e| Fail::Other(e.to_string()))?;
            let _ = writeln!(r, "anchor disk: {disk}");
            let members: Vec<String> = v.members.iter().map(|id| id.to_string()).collect();
            let _ = writeln!(r, "range members: {}", members.join(" "));
            say(&r);
            Err(Fail::Verify)
        }
    }
}

fn parse_range(s: &str) -> Result<Vec<f64>, Fail> {
    let bad = || Fail::Usage(format!("range must be lo:hi or lo:hi:step, got {s:?}"));
    let parts: Vec<f64> = s.split(':').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let (lo, hi, step) = match parts.as_slice() {
        [lo, hi] => (*lo, *hi, 1.0),
        [lo, hi, step] => (*lo, *hi, *step),
        _ => return Err(bad()),
    };
    if !(step > 0.0 && lo <= hi) {
        return Err(bad());
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Fail> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| Fail::Usage(format!("bad {what} {x:?}"))))
        .collect()
}

fn check_config(eps: Epsilon, c1: f64) -> CmdResult {
    Config::new(eps).with_c1(c1).validate().map_err(Fail::from)
}

fn cmd_sweep(a: SweepArgs) -> CmdResult {
    let c1s = parse_range(&a.c1_range)?;
    for &c1 in &c1s {
        check_config(a.epsilon, c1)?;
    }
    let data = load_list(&a.dataset_list, a.seed, &a.gen)?;
    let cells: Vec<Cell> = (0..data.len())
        .flat_map(|i| c1s.iter().map(move |&c1| (i, c1)))
        .map(|(dataset, c1)| Cell {
            dataset,
            eps: a.epsilon,
            c1,
        })
        .collect();
    let groups = run_cells(&data, &cells, a.trials, a.seed, Mode::Recursive)?;
    write_out(a.out.as_deref(), &sweep_csv(&groups))?;
    if let Some(out) = &a.out {
        let labels: Vec<String> = data.iter().map(|(l, _)| l.clone()).collect();
        write_out(Some(&out.with_extension("dat")), &sweep_dat(&labels, &c1s, &groups))?;
    }
    if let Some(runs) = &a.runs {
        write_out(Some(runs), &runs_csv(&groups))?;
    }
    Ok(())
}

fn cmd_table1(a: TableArgs) -> CmdResult {
    let eps: Vec<Epsilon> = parse_list(&a.epsilons, "epsilon")?;
    for &e in &eps {
        check_config(e, a.c1)?;
    }
    let data = load_list(&a.datasets, a.seed, &a.gen)?;
    let cells: Vec<Cell> = (0..data.len())
        .flat_map(|i| eps.iter().map(move |&e| (i, e)))
        .map(|(dataset, eps)| Cell { dataset, eps, c1: a.c1 })
        .collect();
    let groups = run_cells(&data, &cells, a.trials, a.seed, Mode::Recursive)?;
    write_out(a.out.as_deref(), &table_csv(&groups))?;
    if let Some(runs) = &a.runs {
        write_out(Some(runs), &runs_csv(&groups))?;
    }
    Ok(())
}

fn cmd_stats(a: StatsArgs) -> CmdResult {
    let data = DataRef::parse(&a.gen).load(a.seed, Gauss9Params::default())?;
    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir).map_err(|e| Fail::Io(format!("{}: {e}", dir.display())))?;
    }
    let file = |name: &str| a.out.as_ref().map(|d| d.join(name));
    if a.histogram {
        check_config(a.epsilon, a.c1)?;
        let seeds: Vec<u64> = (a.seed..a.seed + a.trials).collect();
        let h = subproblem_histogram(&data.points, a.epsilon, a.c1, &seeds, a.bands)?;
        write_out(file("histogram.csv").as_deref(), &h.to_csv())?;
        eprintln!("mean edges per sample {:.1}; partition conserved: {}", h.mean_edges, h.conserved);
        return if h.conserved && h.bands.iter().all(|b| b.ok) {
            Ok(())
        } else {
            Err(Fail::Verify)
        };
    }
    let ks: Vec<u64> = parse_range(&a.k_range)?.into_iter().map(|k| k as u64).collect();
    let mut coords = data.coords();
    if a.jitter > 0.0 {
        coords = jitter(&coords, a.jitter, a.seed);
    }
    let (quad, tri) = bound_rows(&coords, &ks)?;
    write_out(file("quadruples.csv").as_deref(), &rows_to_csv(&quad))?;
    write_out(file("triples.csv").as_deref(), &rows_to_csv(&tri))?;
    if quad.iter().chain(&tri).all(|r| r.ok) {
        Ok(())
    } else {
        Err(Fail::Verify)
    }
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    check_config(a.epsilon, a.c1)?;
    let sizes: Vec<usize> = parse_list(&a.sizes, "size")?;
    if a.runs == 0 || sizes.is_empty() {
        return Err(Fail::Usage("need at least one size and one run".into()));
    }
    let rows = bench(&sizes, a.epsilon, a.c1, a.runs, a.seed)?;
    write_out(a.out.as_deref(), &bench_csv(&rows))
}
