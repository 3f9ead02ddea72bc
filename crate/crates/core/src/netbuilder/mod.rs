//! Sample-and-refine ε-net construction.
//!
//! Each invocation keeps every point with probability `c1/τ` (τ = εn stays
//! fixed down the recursion), triangulates the sample `R`, and for every
//! Delaunay edge whose two face disks still hold at least τ weight of
//! unsampled points solves the edge subproblem with `ε' = τ/|P_e|`. The net
//! is `R` plus all subproblem nets.

mod small;

use std::cmp::Ordering;

use rand::Rng;
use rand_distr::Binomial;
use serde::{Deserialize, Serialize};

use crate::delaunay::Triangulation;
use crate::depth::{assemble_subproblems, EdgeSubproblem};
use crate::eps::{Epsilon, Threshold};
use crate::error::{Error, Result};
use crate::geom::{orient_sign, Coord, Point};
use crate::rng::{derive_seed, stream, unit_f64};

pub use small::{ten_point_net, two_point_net, TEN_POINT_CAP};

/// Below this threshold the whole input is returned.
pub const BASE_THRESHOLD: u64 = 13;

pub const RESTART_RULE: &str = "restart when |R| <= c1/(2 eps'), i.e. at most half the expected sample size";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Recurse on every heavy subproblem.
    Recursive,
    /// Use the two- and ten-point constructions when ε' > 1/2.
    Hybrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub epsilon: Epsilon,
    pub c1: f64,
    pub seed: u64,
    pub mode: Mode,
    pub max_depth: u32,
    pub restart_cap: u32,
}

impl Config {
    pub fn new(epsilon: Epsilon) -> Self {
        Config {
            epsilon,
            c1: 12.0,
            seed: 0,
            mode: Mode::Recursive,
            max_depth: 64,
            restart_cap: 1000,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_c1(mut self, c1: f64) -> Self {
        self.c1 = c1;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon.numer() > self.epsilon.denom() {
            return Err(Error::InvalidConfig(format!("epsilon must be in (0, 1], got {}", self.epsilon)));
        }
        if !(self.c1.is_finite() && self.c1 > 0.0) {
            return Err(Error::InvalidConfig(format!("c1 must be positive, got {}", self.c1)));
        }
        if self.max_depth == 0 || self.restart_cap == 0 {
            return Err(Error::InvalidConfig("max_depth and restart_cap must be positive".into()));
        }
        Ok(())
    }
}

/// Counters for one recursion level; level 0 is the top call.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    pub invocations: u64,
    pub input_weight: u64,
    pub sample_points: u64,
    pub restarts: u64,
    /// Heavy edge subproblems produced (`|P_e| ≥ εn`).
    pub subproblems: u64,
    /// Heavy subproblems by `|P_e|/εn`: `[1,1.5)`, `[1.5,2)`, `[2,4)`,
    /// `[4,8)`, ...; the last slot collects everything larger.
    pub size_bands: Vec<u64>,
    /// Subproblems with `|P_e| = εn`, answered by one point.
    pub single_point: u64,
    /// Invocations answered by returning every member.
    pub whole_set: u64,
    /// Collinear invocations answered by a greedy scan.
    pub line_nets: u64,
    /// Degenerate samples completed with extra members.
    pub augmented_samples: u64,
    pub two_point: u64,
    pub ten_point: u64,
    pub hybrid_fallbacks: u64,
    pub depth_fallbacks: u64,
}

pub const SIZE_BANDS: usize = 12;

pub fn size_band_label(i: usize) -> String {
    match i {
        0 => "[1,1.5)".into(),
        1 => "[1.5,2)".into(),
        _ if i + 1 == SIZE_BANDS => format!("[{},inf)", 1u64 << (i - 1)),
        _ => format!("[{},{})", 1u64 << (i - 1), 1u64 << i),
    }
}

fn size_band(tau: Threshold, w: u64) -> usize {
    if tau.cmp_scaled(3, 2, w) == Ordering::Greater {
        return 0;
    }
    if tau.cmp_scaled(2, 1, w) == Ordering::Greater {
        return 1;
    }
    let mut band = 2;
    while band + 1 < SIZE_BANDS && tau.cmp_scaled(1 << band, 1, w) != Ordering::Greater {
        band += 1;
    }
    band
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetStats {
    pub levels: Vec<LevelStats>,
    /// Deepest level reached.
    pub depth: usize,
    /// `εn < 13`: the input was returned unchanged.
    pub base_case: bool,
    pub restart_rule: String,
}

impl NetStats {
    pub fn total_restarts(&self) -> u64 {
        self.levels.iter().map(|l| l.restarts).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetResult {
    /// Point ids, sorted and distinct.
    pub net: Vec<u32>,
    pub stats: NetStats,
    pub config: Config,
}

/// Computes an ε-net of `points` for closed disks and halfplanes; `n` is the
/// total weight.
pub fn compute_net(points: &[Point], cfg: &Config) -> Result<NetResult> {
    cfg.validate()?;
    if points.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n: u64 = points.iter().map(|p| u64::from(p.weight)).sum();
    let tau = cfg.epsilon.threshold(n);
    let mut b = Builder {
        points,
        cfg,
        tau,
        levels: Vec::new(),
        chosen: vec![false; points.len()],
    };
    let base_case = tau.below(BASE_THRESHOLD);
    if base_case {
        b.level(0).whole_set += 1;
        b.chosen.iter_mut().for_each(|c| *c = true);
    } else {
        let members: Vec<u32> = (0..points.len() as u32).collect();
        b.solve(&members, n, 0)?;
    }
    let mut net: Vec<u32> = (0..points.len()).filter(|&i| b.chosen[i]).map(|i| points[i].id).collect();
    net.sort_unstable();
    net.dedup();
    let depth = b.levels.len().saturating_sub(1);
    Ok(NetResult {
        net,
        stats: NetStats {
            levels: b.levels,
            depth,
            base_case,
            restart_rule: RESTART_RULE.into(),
        },
        config: *cfg,
    })
}

/// A random sample of a weighted point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    /// Members with at least one selected unit.
    pub points: Vec<u32>,
    /// Selected units of multiplicity, `|R|` as a multiset.
    pub units: u64,
}

/// One Bernoulli trial with probability `p_keep` per unit of weight; a
/// member is kept if any of its units is selected. Coins are a function of
/// `(key, point id)`, so overlapping subproblems drawn with the same key
/// agree on their common points.
pub fn draw_sample(points: &[Point], members: &[u32], p_keep: f64, key: u64) -> Sample {
    let p = p_keep.clamp(0.0, 1.0);
    let mut units = 0u64;
    let points = members
        .iter()
        .copied()
        .filter(|&m| {
            let pt = points[m as usize];
            let k = if pt.weight == 1 {
                u64::from(unit_f64(key, u64::from(pt.id)) < p)
            } else {
                let mut rng = stream(derive_seed(key, &[u64::from(pt.id)]));
                rng.sample(Binomial::new(u64::from(pt.weight), p).expect("p is clamped to [0, 1]"))
            };
            units += k;
            k > 0
        })
        .collect();
    Sample { points, units }
}

/// `|R| ≤ c1/(2ε')` with `ε' = τ/W`; `sample_len` counts units.
pub fn should_restart(sample_len: u64, c1: f64, weight: u64, tau: Threshold) -> bool {
    2.0 * sample_len as f64 * tau.value() <= c1 * weight as f64
}

/// Minimum-size net for collinear points: scanning in order, take a point
/// whenever the weight since the last taken point reaches τ.
pub fn line_net(points: &[Point], members: &[u32], tau: Threshold) -> Vec<u32> {
    let mut order = members.to_vec();
    order.sort_by(|&a, &b| {
        let (p, q) = (points[a as usize], points[b as usize]);
        p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
    });
    let mut out = Vec::new();
    let mut run = 0u64;
    for m in order {
        run += u64::from(points[m as usize].weight);
        if tau.reached_by(run) {
            out.push(m);
            run = 0;
        }
    }
    out
}

fn collinear(points: &[Point], idx: &[u32]) -> bool {
    let c = |i: u32| points[i as usize].xy();
    let Some(&a) = idx.first() else { return true };
    let Some(&b) = idx.iter().find(|&&i| c(i) != c(a)) else { return true };
    idx.iter().all(|&i| orient_sign(c(a), c(b), c(i)) == 0.0)
}

struct Builder<'a> {
    points: &'a [Point],
    cfg: &'a Config,
    tau: Threshold,
    levels: Vec<LevelStats>,
    chosen: Vec<bool>,
}

impl Builder<'_> {
    fn level(&mut self, depth: usize) -> &mut LevelStats {
        while self.levels.len() <= depth {
            self.levels.push(LevelStats {
                size_bands: vec![0; SIZE_BANDS],
                ..LevelStats::default()
            });
        }
        &mut self.levels[depth]
    }

    fn take(&mut self, members: &[u32]) {
        for &m in members {
            self.chosen[m as usize] = true;
        }
    }

    /// Marks a τ-net of `members` (total weight `weight`).
    fn solve(&mut self, members: &[u32], weight: u64, depth: usize) -> Result<()> {
        let (c1, tau) = (self.cfg.c1, self.tau);
        {
            let stats = self.level(depth);
            stats.invocations += 1;
            stats.input_weight += weight;
        }
        if depth > self.cfg.max_depth as usize {
            self.level(depth).depth_fallbacks += 1;
            self.take(members);
            return Ok(());
        }
        let p_keep = c1 / tau.value();
        if p_keep >= 1.0 {
            self.level(depth).whole_set += 1;
            self.take(members);
            return Ok(());
        }

        let mut attempt = 0u32;
        let mut sample = loop {
            let key = derive_seed(self.cfg.seed, &[depth as u64, u64::from(attempt)]);
            let sample = draw_sample(self.points, members, p_keep, key);
            if !should_restart(sample.units, c1, weight, tau) {
                break sample.points;
            }
            self.level(depth).restarts += 1;
            attempt += 1;
            if attempt > self.cfg.restart_cap {
                return Err(Error::SamplingUndersized { restarts: attempt - 1 });
            }
        };
        self.level(depth).sample_points += sample.len() as u64;

        if sample.len() < 3 || collinear(self.points, &sample) {
            if collinear(self.points, members) {
                self.level(depth).line_nets += 1;
                let net = line_net(self.points, members, tau);
                self.take(&net);
                return Ok(());
            }
            self.level(depth).augmented_samples += 1;
            augment(self.points, members, &mut sample);
        }
        self.take(&sample);

        let coords: Vec<Coord> = sample.iter().map(|&i| self.points[i as usize].xy()).collect();
        let t = Triangulation::build(&coords)?;
        // A range avoiding the sample never holds a sample point, so sample
        // points are left out of the subproblems.
        let mut in_sample = std::collections::HashSet::with_capacity(sample.len());
        in_sample.extend(sample.iter().copied());
        let rest: Vec<u32> = members.iter().copied().filter(|m| !in_sample.contains(m)).collect();
        let subproblems = assemble_subproblems(&t, self.points, &rest, tau);
        for sp in subproblems {
            self.dispatch(sp, depth)?;
        }
        Ok(())
    }

    fn dispatch(&mut self, sp: EdgeSubproblem, depth: usize) -> Result<()> {
        let tau = self.tau;
        debug_assert!((sp.eps_prime(tau) * sp.weight as f64 - tau.value()).abs() <= 1e-9 * tau.value());
        match tau.cmp_scaled(1, 1, sp.weight) {
            Ordering::Greater => return Ok(()),
            Ordering::Equal => {
                let stats = self.level(depth);
                stats.subproblems += 1;
                stats.size_bands[0] += 1;
                stats.single_point += 1;
                self.take(&sp.members[..1]);
                return Ok(());
            }
            Ordering::Less => {}
        }
        {
            let stats = self.level(depth);
            stats.subproblems += 1;
            stats.size_bands[size_band(tau, sp.weight)] += 1;
        }
        if self.cfg.mode == Mode::Hybrid && tau.cmp_scaled(2, 1, sp.weight) == Ordering::Greater {
            let local: Vec<Point> = sp.members.iter().map(|&m| self.points[m as usize]).collect();
            let small = if tau.cmp_scaled(3, 2, sp.weight) == Ordering::Greater {
                two_point_net(&local).map(|net| (net, true))
            } else {
                ten_point_net(&local).map(|net| (net, false))
            };
            match small {
                Some((net, two)) => {
                    let stats = self.level(depth);
                    if two {
                        stats.two_point += 1;
                    } else {
                        stats.ten_point += 1;
                    }
                    let global: Vec<u32> = net.iter().map(|&i| sp.members[i]).collect();
                    self.take(&global);
                    return Ok(());
                }
                None => self.level(depth).hybrid_fallbacks += 1,
            }
        }
        self.solve(&sp.members, sp.weight, depth + 1)
    }
}

/// Makes a degenerate sample triangulable by adding members in order: first
/// until it has two distinct points, then the first member off their line.
fn augment(points: &[Point], members: &[u32], sample: &mut Vec<u32>) {
    let c = |i: u32| points[i as usize].xy();
    let a = match sample.first() {
        Some(&a) => a,
        None => {
            sample.push(members[0]);
            members[0]
        }
    };
    let b = match sample.iter().copied().find(|&i| c(i) != c(a)) {
        Some(b) => b,
        None => {
            let b = *members.iter().find(|&&i| c(i) != c(a)).expect("members are not collinear");
            sample.push(b);
            b
        }
    };
    if sample.iter().all(|&i| orient_sign(c(a), c(b), c(i)) == 0.0) {
        let off = *members
            .iter()
            .find(|&&i| orient_sign(c(a), c(b), c(i)) != 0.0)
            .expect("members are not collinear");
        sample.push(off);
    }
}
