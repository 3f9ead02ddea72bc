//! Constant-size nets for large ε'.
//!
//! `two_point_net` searches pairs against the explicit list of heavy ranges.
//! `ten_point_net` splits the set into four quadrants around a common point,
//! takes a two-point net of each quadrant and adds points for ranges through
//! the center. Both return `None` when they cannot certify a result; the
//! caller then recurses instead.

use crate::delaunay::{Face, Triangulation};
use crate::eps::Threshold;
use crate::geom::{quadrant_partition, Coord, Point};
use crate::oracle::{heavy_region_masks, verify_threshold};

/// Largest set `ten_point_net` handles; beyond this the final certification
/// is too slow and the caller recurses.
pub const TEN_POINT_CAP: usize = 160;

/// At most two indices into `q` hitting every range holding more than two
/// thirds of the weight of `q`. `None` if no pair is found or `q` has more
/// than 64 points.
pub fn two_point_net(q: &[Point]) -> Option<Vec<usize>> {
    if q.len() <= 2 {
        return Some((0..q.len()).collect());
    }
    let total: u64 = q.iter().map(|p| u64::from(p.weight)).sum();
    let masks = heavy_region_masks(q, |w| 3 * w > 2 * total)?;
    if masks.is_empty() {
        return Some(Vec::new());
    }
    // Deepest points first.
    let mut order: Vec<usize> = (0..q.len()).collect();
    let depth = |i: usize| masks.iter().filter(|&&m| m >> i & 1 == 1).count();
    let depths: Vec<usize> = order.iter().map(|&i| depth(i)).collect();
    order.sort_by(|&a, &b| depths[b].cmp(&depths[a]).then(a.cmp(&b)));
    for (x, &a) in order.iter().enumerate() {
        if depths[a] == masks.len() {
            return Some(vec![a]);
        }
        for &b in &order[x + 1..] {
            let pair = 1u64 << a | 1u64 << b;
            if masks.iter().all(|&m| m & pair != 0) {
                let mut out = vec![a, b];
                out.sort_unstable();
                return Some(out);
            }
        }
    }
    None
}

/// At most ten indices into `q` hitting every range with at least
/// `⌊|q|/2⌋ + 1` weight. Unit weights only.
pub fn ten_point_net(q: &[Point]) -> Option<Vec<usize>> {
    if q.len() <= 10 {
        return Some((0..q.len()).collect());
    }
    if q.len() > TEN_POINT_CAP || q.iter().any(|p| p.weight != 1) {
        return None;
    }
    let n = q.len();
    let coords: Vec<Coord> = q.iter().map(Point::xy).collect();
    let part = quadrant_partition(&coords).ok()?;

    // Points on a dividing line go to the smallest eligible quadrant.
    let mut classes: [Vec<usize>; 4] = Default::default();
    let mut on_lines = Vec::new();
    for (i, &c) in coords.iter().enumerate() {
        let eligible: Vec<usize> = (0..4).filter(|&k| part.in_quadrant(c, k)).collect();
        match eligible.as_slice() {
            [k] => classes[*k].push(i),
            _ => on_lines.push((i, eligible)),
        }
    }
    for (i, eligible) in on_lines {
        let k = *eligible.iter().min_by_key(|&&k| (classes[k].len(), k))?;
        classes[k].push(i);
    }
    // A range missing the center misses one closed quadrant; if it avoids
    // every quadrant net it holds at most ⌊2|Q_k|/3⌋ of each other class.
    let cap: Vec<usize> = classes.iter().map(|c| 2 * c.len() / 3).collect();
    let all: usize = cap.iter().sum();
    if cap.iter().any(|&c| all - c > n / 2) {
        return None;
    }

    let mut out: Vec<usize> = Vec::new();
    for class in &classes {
        let sub: Vec<Point> = class.iter().map(|&i| q[i]).collect();
        let net = two_point_net(&sub)?;
        out.extend(net.iter().map(|&j| class[j]));
    }
    match coords.iter().position(|&c| c == part.center) {
        Some(i) => out.push(i),
        None => {
            let t = Triangulation::build(&coords).ok()?;
            let Face::Triangle(tri) = t.face(t.locate(part.center)) else {
                return None;
            };
            let vs: Vec<usize> = tri.iter().map(|&v| t.vertex_source(v) as usize).collect();
            let quadrant = |i: usize| (0..4).find(|&k| part.in_quadrant(coords[i], k));
            let pair = (0..3)
                .flat_map(|a| (a + 1..3).map(move |b| (a, b)))
                .find(|&(a, b)| matches!((quadrant(vs[a]), quadrant(vs[b])), (Some(x), Some(y)) if x ^ 3 == y));
            match pair {
                Some((a, b)) => out.extend([vs[a], vs[b]]),
                None => out.extend(&vs),
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.len() > 10 {
        return None;
    }
    let ids: Vec<u32> = out.iter().map(|&i| q[i].id).collect();
    verify_threshold(q, &ids, Threshold::integer(n as u64 / 2 + 1))
        .is_ok()
        .then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::gen_uniform;
    use crate::oracle::max_uncovered_depth;

    #[test]
    fn two_point_small_cases() {
        let two = vec![Point::new(0, 0.0, 0.0), Point::new(1, 1.0, 0.0)];
        assert_eq!(two_point_net(&two), Some(vec![0, 1]));
        let three: Vec<Point> = (0..3).map(|i| Point::new(i, i as f64, 0.0)).collect();
        let net = two_point_net(&three).unwrap();
        let ids: Vec<u32> = net.iter().map(|&i| i as u32).collect();
        assert!(verify_threshold(&three, &ids, Threshold::integer(3)).is_ok());
    }

    #[test]
    fn two_point_random_sets() {
        let mut found = 0;
        for seed in 0..20 {
            let q = gen_uniform(30, seed).points;
            if let Some(net) = two_point_net(&q) {
                found += 1;
                assert!(net.len() <= 2);
                let ids: Vec<u32> = net.iter().map(|&i| q[i].id).collect();
                assert!(max_uncovered_depth(&q, &ids).depth <= 20);
            }
        }
        assert!(found >= 15, "{found}");
    }

    #[test]
    fn ten_point_small_sets() {
        let q = gen_uniform(10, 1).points;
        assert_eq!(ten_point_net(&q).unwrap().len(), 10);
    }

    #[test]
    fn ten_point_square_and_cluster() {
        let mut q = vec![
            Point::new(0, 0.0, 0.0),
            Point::new(1, 10.0, 0.0),
            Point::new(2, 0.0, 10.0),
            Point::new(3, 10.0, 10.0),
        ];
        let cluster = gen_uniform(96, 7).points;
        q.extend(cluster.iter().enumerate().map(|(i, p)| Point::new(4 + i as u32, 4.5 + p.x, 4.5 + p.y)));
        if let Some(net) = ten_point_net(&q) {
            assert!(net.len() <= 10);
            assert!(net.iter().any(|&i| i >= 4));
            let ids: Vec<u32> = net.iter().map(|&i| q[i].id).collect();
            assert!(max_uncovered_depth(&q, &ids).depth <= 50);
        }
    }
}
