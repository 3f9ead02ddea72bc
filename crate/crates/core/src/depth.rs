//! Edge subproblems of a triangulated sample.
//!
//! A point `p` is covered by face `f` when the closed circumdisk (or outer
//! halfplane) of `f` contains `p`. Covering faces form a connected set in the
//! dual graph that contains the face located under `p`, so a BFS pruned on
//! disk membership finds all of them. The subproblem of edge `e` with faces
//! `f` and `g` holds every point covered by `f` or `g`.

use serde::{Deserialize, Serialize};

use crate::delaunay::{FaceId, Triangulation};
use crate::eps::Threshold;
use crate::geom::{Coord, Point};

/// Reusable BFS state; faces are marked with an epoch stamp so clearing is
/// free.
#[derive(Debug, Clone, Default)]
pub struct BfsScratch {
    stamp: Vec<u32>,
    epoch: u32,
    queue: Vec<FaceId>,
}

impl BfsScratch {
    pub fn new(num_faces: usize) -> Self {
        BfsScratch {
            stamp: vec![0; num_faces],
            epoch: 0,
            queue: Vec::new(),
        }
    }

    fn next_epoch(&mut self, num_faces: usize) -> u32 {
        if self.stamp.len() < num_faces {
            self.stamp.resize(num_faces, 0);
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.epoch
    }
}

/// Appends to `out` every face whose closed disk contains `p`. Returns the
/// face `p` was located in, a good hint for a nearby next query.
pub fn covering_faces_from(
    t: &Triangulation,
    p: Coord,
    hint: FaceId,
    scratch: &mut BfsScratch,
    out: &mut Vec<FaceId>,
) -> FaceId {
    let start = t.locate_from(p, hint);
    let epoch = scratch.next_epoch(t.num_faces());
    scratch.queue.clear();
    scratch.queue.push(start);
    scratch.stamp[start] = epoch;
    let mut head = 0;
    while head < scratch.queue.len() {
        let f = scratch.queue[head];
        head += 1;
        if !t.face_disk_contains(f, p) {
            continue;
        }
        out.push(f);
        for g in t.neighbors(f) {
            if scratch.stamp[g] != epoch {
                scratch.stamp[g] = epoch;
                scratch.queue.push(g);
            }
        }
    }
    start
}

pub fn covering_faces(t: &Triangulation, p: Coord) -> Vec<FaceId> {
    let mut out = Vec::new();
    covering_faces_from(t, p, 0, &mut BfsScratch::new(t.num_faces()), &mut out);
    out.sort_unstable();
    out
}

/// Reference implementation: tests every face.
pub fn covering_faces_scan(t: &Triangulation, p: Coord) -> Vec<FaceId> {
    (0..t.num_faces()).filter(|&f| t.face_disk_contains(f, p)).collect()
}

/// Per-face lists of covered points, stored contiguously. Entries are
/// positions into the member list the lists were built from.
#[derive(Debug, Clone)]
pub struct FaceLists {
    offsets: Vec<usize>,
    items: Vec<u32>,
}

impl FaceLists {
    pub fn build(t: &Triangulation, points: &[Point], members: &[u32]) -> Self {
        let mut scratch = BfsScratch::new(t.num_faces());
        let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(members.len() * 6);
        let mut buf = Vec::new();
        let mut hint = 0;
        for (pos, &m) in members.iter().enumerate() {
            buf.clear();
            hint = covering_faces_from(t, points[m as usize].xy(), hint, &mut scratch, &mut buf);
            pairs.extend(buf.iter().map(|&f| (f as u32, pos as u32)));
        }
        let mut offsets = vec![0usize; t.num_faces() + 1];
        for &(f, _) in &pairs {
            offsets[f as usize + 1] += 1;
        }
        for i in 0..t.num_faces() {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut items = vec![0u32; pairs.len()];
        for &(f, pos) in &pairs {
            items[fill[f as usize]] = pos;
            fill[f as usize] += 1;
        }
        FaceLists { offsets, items }
    }

    pub fn face(&self, f: FaceId) -> &[u32] {
        &self.items[self.offsets[f]..self.offsets[f + 1]]
    }

    /// Total number of (face, point) incidences.
    pub fn incidences(&self) -> usize {
        self.items.len()
    }
}

/// The points of one edge subproblem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSubproblem {
    /// Index into [`Triangulation::edges`].
    pub edge: usize,
    /// Indices into the point slice.
    pub members: Vec<u32>,
    /// Sum of member weights, `|P_e|`.
    pub weight: u64,
}

impl EdgeSubproblem {
    pub fn eps_prime(&self, tau: Threshold) -> f64 {
        tau.relative_to(self.weight)
    }
}

/// Visits the union of the two face lists of every edge. `f(edge, union)`
/// receives positions into the member list.
fn for_each_edge_union(t: &Triangulation, lists: &FaceLists, len: usize, mut f: impl FnMut(usize, &[u32])) {
    let mut mark = vec![u32::MAX; len];
    let mut buf: Vec<u32> = Vec::new();
    for (e, edge) in t.edges().iter().enumerate() {
        buf.clear();
        for &face in &edge.faces {
            for &pos in lists.face(face) {
                if mark[pos as usize] != e as u32 {
                    mark[pos as usize] = e as u32;
                    buf.push(pos);
                }
            }
        }
        f(e, &buf);
    }
}

/// `|P_e|` for every edge, including light ones.
pub fn edge_weights(t: &Triangulation, points: &[Point], members: &[u32]) -> Vec<u64> {
    let lists = FaceLists::build(t, points, members);
    let mut out = Vec::with_capacity(t.edges().len());
    for_each_edge_union(t, &lists, members.len(), |_, union| {
        out.push(union.iter().map(|&pos| u64::from(points[members[pos as usize] as usize].weight)).sum());
    });
    out
}

/// Subproblems of all edges with `|P_e| ≥ τ`; lighter edges need no net
/// points.
pub fn assemble_subproblems(t: &Triangulation, points: &[Point], members: &[u32], tau: Threshold) -> Vec<EdgeSubproblem> {
    let lists = FaceLists::build(t, points, members);
    let mut out = Vec::new();
    for_each_edge_union(t, &lists, members.len(), |e, union| {
        let weight: u64 = union.iter().map(|&pos| u64::from(points[members[pos as usize] as usize].weight)).sum();
        if tau.reached_by(weight) {
            out.push(EdgeSubproblem {
                edge: e,
                members: union.iter().map(|&pos| members[pos as usize]).collect(),
                weight,
            });
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eps::Epsilon;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_points(n: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|i| Point::new(i as u32, rng.gen(), rng.gen())).collect()
    }

    fn sample_of(points: &[Point], k: usize) -> Triangulation {
        let coords: Vec<Coord> = points[..k].iter().map(Point::xy).collect();
        Triangulation::build(&coords).unwrap()
    }

    #[test]
    fn bfs_matches_scan() {
        let points = random_points(2000, 1);
        let t = sample_of(&points, 60);
        let mut scratch = BfsScratch::new(t.num_faces());
        let mut hint = 0;
        for p in &points {
            let mut got = Vec::new();
            hint = covering_faces_from(&t, p.xy(), hint, &mut scratch, &mut got);
            got.sort_unstable();
            assert_eq!(got, covering_faces_scan(&t, p.xy()));
            assert!(!got.is_empty());
        }
    }

    #[test]
    fn bfs_matches_scan_on_grid_with_cocircular_faces() {
        let points: Vec<Point> = (0..400)
            .map(|i| Point::new(i, (i % 20) as f64 * 0.5, (i / 20) as f64 * 0.5))
            .collect();
        let coords: Vec<Coord> = points.iter().step_by(7).map(Point::xy).collect();
        let t = Triangulation::build(&coords).unwrap();
        for p in &points {
            assert_eq!(covering_faces(&t, p.xy()), covering_faces_scan(&t, p.xy()));
        }
        // Far away and on hull extensions.
        for q in [Coord::new(-3.0, -3.0), Coord::new(100.0, 0.0), Coord::new(0.0, 1e6)] {
            assert_eq!(covering_faces(&t, q), covering_faces_scan(&t, q));
        }
    }

    #[test]
    fn subproblems_match_brute_force() {
        let points = random_points(1500, 2);
        let t = sample_of(&points, 40);
        let members: Vec<u32> = (0..points.len() as u32).collect();
        let tau = Epsilon::new(1, 100).unwrap().threshold(1500);
        let subs = assemble_subproblems(&t, &points, &members, tau);
        let weights = edge_weights(&t, &points, &members);
        assert_eq!(weights.len(), t.edges().len());
        for (e, edge) in t.edges().iter().enumerate() {
            let mut brute: Vec<u32> = members
                .iter()
                .copied()
                .filter(|&m| edge.faces.iter().any(|&f| t.face_disk_contains(f, points[m as usize].xy())))
                .collect();
            brute.sort_unstable();
            assert_eq!(weights[e], brute.len() as u64);
            match subs.iter().find(|s| s.edge == e) {
                Some(s) => {
                    let mut got = s.members.clone();
                    got.sort_unstable();
                    assert_eq!(got, brute);
                    assert_eq!(s.weight, brute.len() as u64);
                    assert!(tau.reached_by(s.weight));
                }
                None => assert!(!tau.reached_by(brute.len() as u64)),
            }
        }
    }

    #[test]
    fn face_lists_conserve_incidences() {
        let points = random_points(1000, 3);
        let t = sample_of(&points, 30);
        let members: Vec<u32> = (0..1000).collect();
        let lists = FaceLists::build(&t, &points, &members);
        let per_point: usize = points.iter().map(|p| covering_faces_scan(&t, p.xy()).len()).sum();
        let per_face: usize = (0..t.num_faces()).map(|f| lists.face(f).len()).sum();
        assert_eq!(per_point, per_face);
        assert_eq!(per_face, lists.incidences());
    }

    #[test]
    fn weights_count_multiplicity() {
        let mut points = random_points(300, 4);
        points[200].weight = 50;
        let t = sample_of(&points, 20);
        let members: Vec<u32> = (0..300).collect();
        let w = edge_weights(&t, &points, &members);
        let covering = covering_faces(&t, points[200].xy());
        for (e, edge) in t.edges().iter().enumerate() {
            if edge.faces.iter().any(|f| covering.contains(f)) {
                assert!(w[e] >= 50);
            }
        }
    }

    #[test]
    fn relative_epsilon_identity() {
        let points = random_points(2000, 5);
        let t = sample_of(&points, 50);
        let members: Vec<u32> = (0..2000).collect();
        let tau = Epsilon::new(1, 100).unwrap().threshold(2000);
        for s in assemble_subproblems(&t, &points, &members, tau) {
            assert!((s.eps_prime(tau) * s.weight as f64 - 20.0).abs() < 1e-9);
            assert!(s.eps_prime(tau) <= 1.0);
        }
    }
}
