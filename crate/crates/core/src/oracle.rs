//! Brute-force ε-net verification.
//!
//! A set `X ⊆ P` is a disk range when some closed disk or halfplane cuts
//! exactly `X` out of `P`. For non-collinear `P`, every disk range lies
//! inside some circle `C` through three points of `P`: it consists of the
//! points strictly inside `C` plus a set of points on `C` that a second
//! circle cuts off as one arc. So to find the heaviest range avoiding
//! `S`, skip every circle with a point of `S` strictly inside. For each
//! remaining circle, add the heaviest run of boundary points between
//! consecutive `S` points (in cyclic order) to its interior weight. Every
//! such region is itself a range. For collinear `P` the ranges are the
//! contiguous runs along the line.
//!
//! Cost is `O(m⁴)` for `m` points; meant for `m` up to a few hundred.

use std::cmp::Ordering;
use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eps::{Epsilon, Threshold};
use crate::geom::{incircle_sign, orient_sign, Coord, GeneralizedDisk, LineSide, Point};
use crate::rng::{derive_seed, stream};

/// A heavy range that avoids the candidate net.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub disk: GeneralizedDisk,
    /// Weighted number of points in the range.
    pub depth: u64,
    /// Ids of the (at most three) points the disk is anchored on.
    pub witnesses: Vec<u32>,
    /// Ids of every point in the range, sorted.
    pub members: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    Ok,
    Violation(Violation),
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            Verdict::Ok => None,
            Verdict::Violation(v) => Some(v),
        }
    }
}

/// The heaviest range avoiding a set, with its witness. `disk` is `None`
/// only when every range avoiding the set is empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Uncovered {
    pub depth: u64,
    pub disk: Option<GeneralizedDisk>,
    pub witnesses: Vec<u32>,
    pub members: Vec<u32>,
}

/// A canonical disk with the indices of its defining points.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalDisk {
    pub disk: GeneralizedDisk,
    pub support: Vec<usize>,
}

/// All circumdisks of non-collinear triples, diametral disks of pairs and
/// both closed halfplanes of each pair. Coincident pairs are skipped.
pub fn canonical_disks(m: &[Coord]) -> impl Iterator<Item = CanonicalDisk> + '_ {
    let n = m.len();
    (0..n).flat_map(move |i| {
        (i + 1..n).flat_map(move |j| {
            let pair = (m[i] != m[j])
                .then(|| {
                    [
                        CanonicalDisk {
                            disk: GeneralizedDisk::diametral(m[i], m[j]),
                            support: vec![i, j],
                        },
                        CanonicalDisk {
                            disk: GeneralizedDisk::Halfplane { a: m[i], b: m[j], side: LineSide::Left },
                            support: vec![i, j],
                        },
                        CanonicalDisk {
                            disk: GeneralizedDisk::Halfplane { a: m[i], b: m[j], side: LineSide::Right },
                            support: vec![i, j],
                        },
                    ]
                })
                .into_iter()
                .flatten();
            let triples = (j + 1..n).filter_map(move |k| {
                GeneralizedDisk::by_support(m[i], m[j], m[k]).ok().map(|disk| CanonicalDisk {
                    disk,
                    support: vec![i, j, k],
                })
            });
            pair.chain(triples)
        })
    })
}

/// Best region found for one anchor, ordered by weight and then by
/// preferring the lexicographically smallest anchor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Anchor {
    Circle([usize; 3]),
    /// Positions `lo..=hi` in the sorted order of collinear points.
    Run(usize, usize),
}

#[derive(Debug, Clone, Copy)]
struct Best {
    weight: u64,
    anchor: Anchor,
}

fn better(a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            let key = |b: &Best| match b.anchor {
                Anchor::Circle(t) => (0, t),
                Anchor::Run(lo, hi) => (1, [lo, hi, 0]),
            };
            match x.weight.cmp(&y.weight).then_with(|| key(&y).cmp(&key(&x))) {
                Ordering::Less => Some(y),
                _ => Some(x),
            }
        }
    }
}

struct Scan<'a> {
    points: &'a [Point],
    coords: Vec<Coord>,
    in_s: Vec<bool>,
    s_list: Vec<usize>,
    /// Sorted order when all points are collinear.
    line_order: Option<Vec<usize>>,
}

impl<'a> Scan<'a> {
    fn new(points: &'a [Point], net: &[u32]) -> Self {
        let coords: Vec<Coord> = points.iter().map(Point::xy).collect();
        let index: HashMap<u32, usize> = points.iter().enumerate().map(|(i, p)| (p.id, i)).collect();
        let mut in_s = vec![false; points.len()];
        for id in net {
            if let Some(&i) = index.get(id) {
                in_s[i] = true;
            }
        }
        let s_list = (0..points.len()).filter(|&i| in_s[i]).collect();
        let line_order = all_collinear(&coords).then(|| {
            let mut order: Vec<usize> = (0..coords.len()).collect();
            order.sort_by(|&a, &b| coords[a].x.total_cmp(&coords[b].x).then(coords[a].y.total_cmp(&coords[b].y)));
            order
        });
        Scan {
            points,
            coords,
            in_s,
            s_list,
            line_order,
        }
    }

    fn weight(&self, i: usize) -> u64 {
        u64::from(self.points[i].weight)
    }

    fn total(&self) -> u64 {
        self.points.iter().map(|p| u64::from(p.weight)).sum()
    }

    /// Heaviest region on the circle through `i, j, k` that avoids `S`.
    /// With `collect`, the region's indices are written out. `cutoff` lets
    /// callers skip the arc step for circles that cannot beat it.
    fn circle(&self, [i, j, k]: [usize; 3], cutoff: u64, mut collect: Option<&mut Vec<usize>>) -> Option<u64> {
        let c = &self.coords;
        let o = orient_sign(c[i], c[j], c[k]);
        if o == 0.0 {
            return None;
        }
        let (a, b, d) = if o > 0.0 { (c[i], c[j], c[k]) } else { (c[i], c[k], c[j]) };
        let mut s_boundary: Vec<usize> = Vec::new();
        for &s in &self.s_list {
            let v = incircle_sign(a, b, d, c[s]);
            if v > 0.0 {
                return None;
            }
            if v == 0.0 {
                s_boundary.push(s);
            }
        }
        let mut inside = 0u64;
        let mut boundary: Vec<usize> = Vec::new();
        for t in 0..c.len() {
            if self.in_s[t] {
                continue;
            }
            let v = incircle_sign(a, b, d, c[t]);
            if v > 0.0 {
                inside += self.weight(t);
                if let Some(out) = collect.as_deref_mut() {
                    out.push(t);
                }
            } else if v == 0.0 {
                boundary.push(t);
            }
        }
        let full: u64 = boundary.iter().map(|&t| self.weight(t)).sum();
        if s_boundary.is_empty() || inside + full < cutoff {
            if let Some(out) = collect {
                out.extend(&boundary);
            }
            return Some(inside + full);
        }
        // Cyclic order starting after the first boundary point of S.
        let s0 = c[s_boundary[0]];
        let mut seq: Vec<usize> = boundary.iter().chain(&s_boundary[1..]).copied().collect();
        seq.sort_by(|&u, &v| {
            if u == v {
                Ordering::Equal
            } else if orient_sign(s0, c[u], c[v]) > 0.0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        });
        let (mut best, mut best_range) = (0u64, (0, 0));
        let (mut run, mut start) = (0u64, 0);
        for (pos, &t) in seq.iter().enumerate() {
            if self.in_s[t] {
                run = 0;
                start = pos + 1;
                continue;
            }
            run += self.weight(t);
            if run > best {
                best = run;
                best_range = (start, pos + 1);
            }
        }
        if let Some(out) = collect {
            out.extend(&seq[best_range.0..best_range.1]);
        }
        Some(inside + best)
    }

    fn best_run(&self, order: &[usize]) -> Option<Best> {
        let mut best: Option<Best> = None;
        let (mut run, mut start) = (0u64, 0);
        for (pos, &t) in order.iter().enumerate() {
            if self.in_s[t] {
                run = 0;
                start = pos + 1;
                continue;
            }
            run += self.weight(t);
            best = better(
                best,
                Some(Best {
                    weight: run,
                    anchor: Anchor::Run(start, pos),
                }),
            );
        }
        best
    }

    /// Heaviest region with first anchor index `i`.
    fn best_from(&self, i: usize) -> Option<Best> {
        let n = self.coords.len();
        let mut best = None;
        for j in i + 1..n {
            for k in j + 1..n {
                let cutoff = best.map_or(0, |b: Best| b.weight);
                if let Some(w) = self.circle([i, j, k], cutoff, None) {
                    best = better(
                        best,
                        Some(Best {
                            weight: w,
                            anchor: Anchor::Circle([i, j, k]),
                        }),
                    );
                }
            }
        }
        best
    }

    fn first_heavy_from(&self, i: usize, tau: Threshold) -> Option<Best> {
        let n = self.coords.len();
        let cutoff = (tau.value().ceil() as u64).saturating_sub(1);
        for j in i + 1..n {
            for k in j + 1..n {
                if let Some(w) = self.circle([i, j, k], cutoff, None) {
                    if tau.reached_by(w) {
                        return Some(Best {
                            weight: w,
                            anchor: Anchor::Circle([i, j, k]),
                        });
                    }
                }
            }
        }
        None
    }

    fn deepest(&self) -> Option<Best> {
        match &self.line_order {
            Some(order) => self.best_run(order),
            None => (0..self.coords.len())
                .into_par_iter()
                .map(|i| self.best_from(i))
                .reduce(|| None, better),
        }
    }

    fn first_heavy(&self, tau: Threshold) -> Option<Best> {
        match &self.line_order {
            Some(order) => self.best_run(order).filter(|b| tau.reached_by(b.weight)),
            None => (0..self.coords.len())
                .into_par_iter()
                .find_map_first(|i| self.first_heavy_from(i, tau)),
        }
    }

    fn describe(&self, best: Best) -> Uncovered {
        let ids = |v: &[usize]| -> Vec<u32> {
            let mut out: Vec<u32> = v.iter().map(|&t| self.points[t].id).collect();
            out.sort_unstable();
            out
        };
        match best.anchor {
            Anchor::Circle(t) => {
                let mut region = Vec::new();
                let w = self.circle(t, 0, Some(&mut region));
                debug_assert_eq!(w, Some(best.weight));
                let c = &self.coords;
                Uncovered {
                    depth: best.weight,
                    disk: Some(GeneralizedDisk::CircleBySupport {
                        p: c[t[0]],
                        q: c[t[1]],
                        r: c[t[2]],
                    }),
                    witnesses: t.iter().map(|&x| self.points[x].id).collect(),
                    members: ids(&region),
                }
            }
            Anchor::Run(lo, hi) => {
                let order = self.line_order.as_ref().expect("runs only arise on collinear input");
                let (a, b) = (order[lo], order[hi]);
                Uncovered {
                    depth: best.weight,
                    disk: Some(GeneralizedDisk::diametral(self.coords[a], self.coords[b])),
                    witnesses: if a == b {
                        vec![self.points[a].id]
                    } else {
                        vec![self.points[a].id, self.points[b].id]
                    },
                    members: ids(&order[lo..=hi]),
                }
            }
        }
    }
}

fn all_collinear(c: &[Coord]) -> bool {
    let Some(&a) = c.first() else { return true };
    let Some(&b) = c.iter().find(|&&p| p != a) else { return true };
    c.iter().all(|&p| orient_sign(a, b, p) == 0.0)
}

fn to_violation(u: Uncovered) -> Violation {
    Violation {
        disk: u.disk.expect("a heavy range is nonempty"),
        depth: u.depth,
        witnesses: u.witnesses,
        members: u.members,
    }
}

/// Checks that every range of weight at least `tau` contains a point of
/// `net` (given by point id).
pub fn verify_threshold(points: &[Point], net: &[u32], tau: Threshold) -> Verdict {
    let scan = Scan::new(points, net);
    if !tau.reached_by(scan.total()) {
        return Verdict::Ok;
    }
    match scan.first_heavy(tau) {
        None => Verdict::Ok,
        Some(best) => Verdict::Violation(to_violation(scan.describe(best))),
    }
}

/// Checks the ε-net property with `n` the total weight of `points`.
pub fn verify_net(points: &[Point], net: &[u32], eps: Epsilon) -> Verdict {
    let n: u64 = points.iter().map(|p| u64::from(p.weight)).sum();
    verify_threshold(points, net, eps.threshold(n))
}

/// Weight of the heaviest range containing no point of `net`.
pub fn max_uncovered_depth(points: &[Point], net: &[u32]) -> Uncovered {
    let scan = Scan::new(points, net);
    match scan.deepest() {
        Some(best) if best.weight > 0 => scan.describe(best),
        _ => Uncovered {
            depth: 0,
            disk: None,
            witnesses: Vec::new(),
            members: Vec::new(),
        },
    }
}

/// Members of every range of weight accepted by `heavy`, as bitmasks over
/// point indices. `None` when there are more than 64 points.
pub(crate) fn heavy_region_masks(points: &[Point], heavy: impl Fn(u64) -> bool + Sync) -> Option<Vec<u64>> {
    if points.len() > 64 {
        return None;
    }
    let scan = Scan::new(points, &[]);
    let weight_of = |mask: u64| -> u64 {
        (0..points.len()).filter(|&t| mask >> t & 1 == 1).map(|t| scan.weight(t)).sum()
    };
    let mut masks: Vec<u64> = Vec::new();
    if let Some(order) = &scan.line_order {
        for lo in 0..order.len() {
            let mut mask = 0u64;
            for &t in &order[lo..] {
                mask |= 1 << t;
                masks.push(mask);
            }
        }
    } else {
        let c = &scan.coords;
        let n = c.len();
        let per_i: Vec<Vec<u64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut out = Vec::new();
                for j in i + 1..n {
                    for k in j + 1..n {
                        let o = orient_sign(c[i], c[j], c[k]);
                        if o == 0.0 {
                            continue;
                        }
                        let (a, b, d) = if o > 0.0 { (c[i], c[j], c[k]) } else { (c[i], c[k], c[j]) };
                        let mut inside = 0u64;
                        let mut boundary = Vec::new();
                        for t in 0..n {
                            let v = incircle_sign(a, b, d, c[t]);
                            if v > 0.0 {
                                inside |= 1 << t;
                            } else if v == 0.0 {
                                boundary.push(t);
                            }
                        }
                        // Boundary points in cyclic order around the circle.
                        let s0 = c[boundary[0]];
                        boundary[1..].sort_by(|&u, &v| {
                            if orient_sign(s0, c[u], c[v]) > 0.0 {
                                Ordering::Less
                            } else {
                                Ordering::Greater
                            }
                        });
                        let m = boundary.len();
                        out.push(inside);
                        for start in 0..m {
                            let mut mask = inside;
                            for len in 1..=m {
                                mask |= 1 << boundary[(start + len - 1) % m];
                                out.push(mask);
                                if len == m {
                                    break;
                                }
                            }
                        }
                    }
                }
                out
            })
            .collect();
        masks = per_i.into_iter().flatten().collect();
    }
    masks.retain(|&m| heavy(weight_of(m)));
    masks.sort_unstable();
    masks.dedup();
    Some(masks)
}

/// Randomized search for a heavy range avoiding `net`: disks with centers in
/// a dilated bounding box and log-uniform radii, plus random halfplanes.
/// Disk membership is evaluated in floating point, so a reported range is
/// exactly the set that the reported disk contains under that evaluation.
pub fn random_probe(points: &[Point], net: &[u32], eps: Epsilon, trials: u64, seed: u64) -> Verdict {
    let n: u64 = points.iter().map(|p| u64::from(p.weight)).sum();
    let tau = eps.threshold(n);
    if points.is_empty() || !tau.reached_by(n) {
        return Verdict::Ok;
    }
    let scan = Scan::new(points, net);
    let c = &scan.coords;
    let (mut lo, mut hi) = (c[0], c[0]);
    for p in c {
        lo = Coord::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Coord::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y);
    let span = if span > 0.0 { span } else { 1.0 };
    let mut rng = stream(derive_seed(seed, &[0x7072_6f62]));
    let mut members = Vec::new();
    for _ in 0..trials {
        let center = Coord::new(
            rng.gen_range(lo.x - span..=hi.x + span),
            rng.gen_range(lo.y - span..=hi.y + span),
        );
        let disk = if rng.gen_bool(0.25) {
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let b = Coord::new(center.x + span * theta.cos(), center.y + span * theta.sin());
            if b == center {
                continue;
            }
            GeneralizedDisk::Halfplane {
                a: center,
                b,
                side: LineSide::Left,
            }
        } else {
            let r = span * 10f64.powf(rng.gen_range(-3.0..2.0));
            GeneralizedDisk::Circle {
                center,
                squared_radius: r * r,
            }
        };
        if scan.s_list.iter().any(|&s| disk.contains(c[s])) {
            continue;
        }
        members.clear();
        let mut weight = 0u64;
        for (t, &q) in c.iter().enumerate() {
            if disk.contains(q) {
                weight += scan.weight(t);
                members.push(points[t].id);
            }
        }
        if tau.reached_by(weight) {
            members.sort_unstable();
            return Verdict::Violation(Violation {
                disk,
                depth: weight,
                witnesses: Vec::new(),
                members: members.clone(),
            });
        }
    }
    Verdict::Ok
}
