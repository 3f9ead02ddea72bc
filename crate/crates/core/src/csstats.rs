//! Exhaustive counts of Delaunay quadruples and triples by weight, and the
//! edge-size histogram of sampled triangulations.
//!
//! A quadruple `({p,q},{r,s})` has `r` and `s` strictly on opposite sides of
//! line `pq`, so the triangles `pqr` and `pqs` have disjoint interiors; its
//! weight is the number of points in the closed disk union `D_pqr ∪ D_pqs`.
//! A triple `({p,q},{r})` weighs `D_pqr` together with the closed halfplane
//! of `pq` away from `r`. Inputs must be in general position.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::delaunay::Triangulation;
use crate::depth::edge_weights;
use crate::eps::Epsilon;
use crate::error::{Error, Result};
use crate::geom::{in_circumdisk, orient_sign, Coord, Point};
use crate::netbuilder::{draw_sample, should_restart};
use crate::rng::{derive_seed, stream};

/// Fails with [`Error::DegenerateInput`] on three collinear or four
/// cocircular points (duplicates count as collinear).
pub fn check_general_position(pts: &[Coord]) -> Result<()> {
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orient_sign(pts[i], pts[j], pts[k]) == 0.0 {
                    return Err(Error::DegenerateInput);
                }
                for l in k + 1..n {
                    if in_circumdisk(pts[i], pts[j], pts[k], pts[l])? == crate::geom::Side::Boundary {
                        return Err(Error::DegenerateInput);
                    }
                }
            }
        }
    }
    Ok(())
}

/// Adds independent uniform noise in `[-scale, scale]` to each coordinate.
pub fn jitter(pts: &[Coord], scale: f64, seed: u64) -> Vec<Coord> {
    let mut rng = stream(derive_seed(seed, &[0x6a69_7474]));
    pts.iter()
        .map(|p| Coord::new(p.x + rng.gen_range(-scale..=scale), p.y + rng.gen_range(-scale..=scale)))
        .collect()
}

type Bits = Vec<u64>;

fn disk_bits(pts: &[Coord], p: usize, q: usize, r: usize) -> Result<Bits> {
    let mut bits = vec![0u64; pts.len().div_ceil(64)];
    for (t, &c) in pts.iter().enumerate() {
        if in_circumdisk(pts[p], pts[q], pts[r], c)?.in_closed() {
            bits[t / 64] |= 1 << (t % 64);
        }
    }
    Ok(bits)
}

fn union_count(a: &Bits, b: &Bits) -> u64 {
    a.iter().zip(b).map(|(x, y)| u64::from((x | y).count_ones())).sum()
}

/// Weights of all Delaunay quadruples, in enumeration order.
pub fn quadruple_weights(pts: &[Coord]) -> Result<Vec<u64>> {
    check_general_position(pts)?;
    let n = pts.len();
    let mut out = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            let others: Vec<usize> = (0..n).filter(|&r| r != p && r != q).collect();
            let disks: Vec<Bits> = others.iter().map(|&r| disk_bits(pts, p, q, r)).collect::<Result<_>>()?;
            let side: Vec<f64> = others.iter().map(|&r| orient_sign(pts[p], pts[q], pts[r])).collect();
            for a in 0..others.len() {
                for b in a + 1..others.len() {
                    if side[a] * side[b] < 0.0 {
                        out.push(union_count(&disks[a], &disks[b]));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Weights of all Delaunay triples, in enumeration order.
pub fn triple_weights(pts: &[Coord]) -> Result<Vec<u64>> {
    check_general_position(pts)?;
    let n = pts.len();
    let mut out = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            for r in (0..n).filter(|&r| r != p && r != q) {
                let disk = disk_bits(pts, p, q, r)?;
                let r_side = orient_sign(pts[p], pts[q], pts[r]);
                let mut half = vec![0u64; disk.len()];
                for (t, &c) in pts.iter().enumerate() {
                    if orient_sign(pts[p], pts[q], c) * r_side <= 0.0 {
                        half[t / 64] |= 1 << (t % 64);
                    }
                }
                out.push(union_count(&disk, &half));
            }
        }
    }
    Ok(out)
}

pub fn count_quadruples_leq(pts: &[Coord], k: u64) -> Result<u64> {
    Ok(quadruple_weights(pts)?.into_iter().filter(|&w| w <= k).count() as u64)
}

pub fn count_triples_leq(pts: &[Coord], k: u64) -> Result<u64> {
    Ok(triple_weights(pts)?.into_iter().filter(|&w| w <= k).count() as u64)
}

/// `3.1·n·k³`, valid for `k ≥ 13`.
pub fn quadruple_bound(n: usize, k: u64) -> f64 {
    3.1 * n as f64 * (k as f64).powi(3)
}

/// `2.14·n·k²`, valid for `k ≥ 13`.
pub fn triple_bound(n: usize, k: u64) -> f64 {
    2.14 * n as f64 * (k as f64).powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub n: usize,
    pub k: u64,
    pub count: u64,
    pub bound: f64,
    pub ok: bool,
}

pub const BOUND_CSV_HEADER: &str = "n,k,count,bound,ok";

impl BoundRow {
    pub fn csv(&self) -> String {
        format!("{},{},{},{:.1},{}", self.n, self.k, self.count, self.bound, self.ok)
    }
}

/// Rows for both counting bounds over `ks`: `(quadruples, triples)`.
pub fn bound_rows(pts: &[Coord], ks: &[u64]) -> Result<(Vec<BoundRow>, Vec<BoundRow>)> {
    let n = pts.len();
    let quad = quadruple_weights(pts)?;
    let tri = triple_weights(pts)?;
    let rows = |weights: &[u64], bound: fn(usize, u64) -> f64| -> Vec<BoundRow> {
        ks.iter()
            .map(|&k| {
                let count = weights.iter().filter(|&&w| w <= k).count() as u64;
                let bound = bound(n, k);
                BoundRow {
                    n,
                    k,
                    count,
                    bound,
                    ok: count as f64 <= bound,
                }
            })
            .collect()
    };
    Ok((rows(&quad, quadruple_bound), rows(&tri, triple_bound)))
}

pub fn rows_to_csv(rows: &[BoundRow]) -> String {
    let mut s = String::from(BOUND_CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(s, "{}", r.csv());
    }
    s
}

/// Ceiling on the expected number of sample edges with
/// `k1·εn ≤ |P_e| ≤ k2·εn`:
/// `3.1·c1³ / (ε·e^{k1·c1}) · (k1³·c1 + 3.7·k2²)`.
pub fn band_ceiling(eps: f64, c1: f64, k1: f64, k2: f64) -> f64 {
    3.1 * c1.powi(3) / (eps * (k1 * c1).exp()) * (k1.powi(3) * c1 + 3.7 * k2 * k2)
}

/// `(1, 1.5)`, `(1.5, 2)`, then `(2^i, 2^{i+1})` for `i = 1..`; `count`
/// bands in all.
pub fn weight_bands(count: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(1.0, 1.5), (1.5, 2.0)];
    let mut lo = 2.0;
    while out.len() < count {
        out.push((lo, 2.0 * lo));
        lo *= 2.0;
    }
    out.truncate(count);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandEstimate {
    pub k1: f64,
    pub k2: f64,
    /// Mean over seeds of the number of edges with `|P_e|/εn ∈ [k1, k2]`.
    pub mean: f64,
    pub ceiling: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bands: Vec<BandEstimate>,
    pub seeds: usize,
    pub mean_edges: f64,
    /// Per seed, the half-open bands `[0,1)`, `[1,1.5)`, `[1.5,2)`, `[2,4)`,
    /// ... (last band unbounded) summed to the edge count.
    pub conserved: bool,
}

pub const HISTOGRAM_CSV_HEADER: &str = "k1,k2,mean,ceiling,ok";

impl Histogram {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(HISTOGRAM_CSV_HEADER);
        s.push('\n');
        for b in &self.bands {
            let _ = writeln!(s, "{},{},{:.4},{:.4},{}", b.k1, b.k2, b.mean, b.ceiling, b.ok);
        }
        s
    }
}

/// Monte-Carlo estimate of the edge-size histogram of the top-level sample.
/// `|P_e|` counts every point in the two face disks, sample points included.
pub fn subproblem_histogram(points: &[Point], eps: Epsilon, c1: f64, seeds: &[u64], bands: usize) -> Result<Histogram> {
    let n: u64 = points.iter().map(|p| u64::from(p.weight)).sum();
    let tau = eps.threshold(n);
    if tau.below(13) {
        return Err(Error::InvalidConfig("histogram needs eps*n >= 13".into()));
    }
    let p_keep = c1 / tau.value();
    let ranges = weight_bands(bands);
    let members: Vec<u32> = (0..points.len() as u32).collect();
    let mut sums = vec![0u64; ranges.len()];
    let mut edges = 0u64;
    let mut conserved = true;
    for &seed in seeds {
        let sample = (0..1000u64)
            .map(|attempt| draw_sample(points, &members, p_keep, derive_seed(seed, &[0, attempt])))
            .find(|s| !should_restart(s.units, c1, n, tau))
            .ok_or(Error::SamplingUndersized { restarts: 1000 })?;
        let coords: Vec<Coord> = sample.points.iter().map(|&i| points[i as usize].xy()).collect();
        let t = Triangulation::build(&coords)?;
        let weights = edge_weights(&t, points, &members);
        edges += weights.len() as u64;
        let ratio = |w: u64| w as f64 / tau.value();
        for (slot, &(k1, k2)) in sums.iter_mut().zip(&ranges) {
            *slot += weights.iter().filter(|&&w| (k1..=k2).contains(&ratio(w))).count() as u64;
        }
        // Half-open partition for the conservation check.
        let mut partition = vec![0u64; ranges.len() + 1];
        for &w in &weights {
            let r = ratio(w);
            let slot = if r < 1.0 { 0 } else { 1 + ranges.iter().position(|&(_, k2)| r < k2).unwrap_or(ranges.len() - 1) };
            partition[slot] += 1;
        }
        conserved &= partition.iter().sum::<u64>() == weights.len() as u64;
    }
    let s = seeds.len().max(1) as f64;
    Ok(Histogram {
        bands: ranges
            .iter()
            .zip(&sums)
            .map(|(&(k1, k2), &sum)| {
                let mean = sum as f64 / s;
                let ceiling = band_ceiling(eps.value(), c1, k1, k2);
                BandEstimate {
                    k1,
                    k2,
                    mean,
                    ceiling,
                    ok: mean <= ceiling,
                }
            })
            .collect(),
        seeds: seeds.len(),
        mean_edges: edges as f64 / s,
        conserved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::gen_uniform;

    fn c(v: &[(f64, f64)]) -> Vec<Coord> {
        v.iter().map(|&(x, y)| Coord::new(x, y)).collect()
    }

    #[test]
    fn four_points_in_convex_position() {
        // Not cocircular: (0,0), (4,0), (5,3), (0,2).
        let pts = c(&[(0., 0.), (4., 0.), (5., 3.), (0., 2.)]);
        // Only the two diagonals separate the remaining pair.
        assert_eq!(quadruple_weights(&pts).unwrap(), vec![4, 4]);
        assert_eq!(count_quadruples_leq(&pts, 3).unwrap(), 0);
        assert_eq!(count_quadruples_leq(&pts, 4).unwrap(), 2);
        assert_eq!(triple_weights(&pts).unwrap().len(), 12);
    }

    #[test]
    fn three_points() {
        let pts = c(&[(0., 0.), (2., 0.), (1., 3.)]);
        assert_eq!(triple_weights(&pts).unwrap(), vec![3, 3, 3]);
        assert!(quadruple_weights(&pts).unwrap().is_empty());
    }

    #[test]
    fn degenerate_inputs_need_jitter() {
        let square = c(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]);
        assert_eq!(count_quadruples_leq(&square, 4), Err(Error::DegenerateInput));
        let line = c(&[(0., 0.), (1., 1.), (2., 2.)]);
        assert_eq!(count_triples_leq(&line, 3), Err(Error::DegenerateInput));
        let j = jitter(&square, 1e-6, 1);
        assert_eq!(count_quadruples_leq(&j, 4).unwrap(), 2);
    }

    #[test]
    fn counts_are_monotone_and_saturate() {
        let pts = gen_uniform(14, 3).coords();
        let quad = quadruple_weights(&pts).unwrap();
        let tri = triple_weights(&pts).unwrap();
        let mut last = (0, 0);
        for k in 0..=14 {
            let now = (
                quad.iter().filter(|&&w| w <= k).count(),
                tri.iter().filter(|&&w| w <= k).count(),
            );
            assert!(now.0 >= last.0 && now.1 >= last.1);
            last = now;
        }
        assert_eq!(last, (quad.len(), tri.len()));
        assert_eq!(tri.len(), 14 * 13 / 2 * 12);
    }

    #[test]
    fn bounds_hold_at_thirteen() {
        let pts = gen_uniform(13, 5).coords();
        let (q, t) = bound_rows(&pts, &[13]).unwrap();
        assert!(q[0].ok && t[0].ok);
        assert!(rows_to_csv(&q).starts_with("n,k,count,bound,ok\n13,13,"));
    }

    #[test]
    fn band_ceiling_by_hand() {
        // Band i = 3: k1 = 8, k2 = 16, c1 = 12, eps = 0.01.
        let hand = 3.1 * 1728.0 / (0.01 * (96.0f64).exp()) * (512.0 * 12.0 + 3.7 * 256.0);
        assert_eq!(band_ceiling(0.01, 12.0, 8.0, 16.0), hand);
        let first = 3.1 * 1728.0 / (0.01 * (12.0f64).exp()) * (12.0 + 3.7 * 2.25);
        assert!((band_ceiling(0.01, 12.0, 1.0, 1.5) - first).abs() < 1e-9 * first);
        assert_eq!(weight_bands(5), vec![(1.0, 1.5), (1.5, 2.0), (2.0, 4.0), (4.0, 8.0), (8.0, 16.0)]);
    }

    #[test]
    fn histogram_small_run() {
        let d = gen_uniform(2000, 1);
        let h = subproblem_histogram(&d.points, "0.01".parse().unwrap(), 12.0, &[1, 2, 3], 6).unwrap();
        assert!(h.conserved);
        assert!(h.mean_edges > 0.0);
        assert!(h.bands.iter().all(|b| b.ok), "{h:?}");
    }
}
