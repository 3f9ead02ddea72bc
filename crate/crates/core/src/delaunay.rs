//! Delaunay triangulation with first-class hull faces.
//!
//! Every convex-hull edge `a -> b` (sample on its right) carries a hull face:
//! the closed halfplane left of `a -> b`. Hull faces take part in the dual
//! graph; consecutive hull faces are adjacent across their shared hull vertex.
//! Internally a hull face is a triangle whose third vertex is the point at
//! infinity ([`INFINITE`]).
//!
//! Construction is Bowyer–Watson over a Hilbert-ordered insertion sequence,
//! with walking point location. Exact cocircularity is broken by a symbolic
//! perturbation keyed on vertex index, so the result is unique for a given
//! input order.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geom::{incircle_sign, orient_sign, Coord};

/// Vertex slot of the point at infinity in hull faces.
pub const INFINITE: u32 = u32::MAX;

const NONE: u32 = u32::MAX;

pub type FaceId = usize;

/// A face of the triangulation, by vertex index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Face {
    /// Counter-clockwise triangle.
    Triangle([u32; 3]),
    /// Hull edge `a -> b`; the face is the closed halfplane left of it.
    Hull { a: u32, b: u32 },
}

impl Face {
    pub fn is_hull(&self) -> bool {
        matches!(self, Face::Hull { .. })
    }
}

/// An undirected edge between two sample vertices and its two faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub a: u32,
    pub b: u32,
    pub faces: [FaceId; 2],
}

#[derive(Debug, Clone)]
pub struct Triangulation {
    coords: Vec<Coord>,
    /// Input index of each vertex (duplicates are merged into the first).
    source: Vec<u32>,
    /// Vertex triples, counter-clockwise; hull faces hold [`INFINITE`] last.
    faces: Vec<[u32; 3]>,
    /// `adjacent[f][i]` is the face across the edge opposite `faces[f][i]`.
    adjacent: Vec<[u32; 3]>,
    num_triangles: usize,
    edges: Vec<Edge>,
}

impl Triangulation {
    /// Triangulates `points`. Duplicate coordinates are merged.
    pub fn build(points: &[Coord]) -> Result<Self> {
        let mut seen = std::collections::HashMap::with_capacity(points.len());
        let mut coords = Vec::with_capacity(points.len());
        let mut source = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            let key = (canonical_bits(p.x), canonical_bits(p.y));
            if seen.insert(key, ()).is_none() {
                coords.push(*p);
                source.push(i as u32);
            }
        }
        if coords.len() < 3 {
            return Err(Error::SampleTooSmall(coords.len()));
        }
        let mut builder = Builder::new(coords);
        builder.run()?;
        Ok(builder.finish(source))
    }

    pub fn num_vertices(&self) -> usize {
        self.coords.len()
    }

    pub fn vertex(&self, v: u32) -> Coord {
        self.coords[v as usize]
    }

    /// Index into the slice passed to [`Triangulation::build`].
    pub fn vertex_source(&self, v: u32) -> u32 {
        self.source[v as usize]
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.num_triangles
    }

    pub fn num_hull_faces(&self) -> usize {
        self.faces.len() - self.num_triangles
    }

    pub fn face(&self, f: FaceId) -> Face {
        let [a, b, c] = self.faces[f];
        if c == INFINITE {
            Face::Hull { a, b }
        } else {
            Face::Triangle([a, b, c])
        }
    }

    pub fn faces(&self) -> impl Iterator<Item = (FaceId, Face)> + '_ {
        (0..self.faces.len()).map(move |f| (f, self.face(f)))
    }

    /// Dual-graph neighbors of `f`; always three (hull faces border their
    /// triangle and the two adjacent hull faces).
    pub fn neighbors(&self, f: FaceId) -> [FaceId; 3] {
        self.adjacent[f].map(|g| g as usize)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Closed-disk membership of `q` in the face's circumdisk or outer
    /// halfplane.
    #[inline]
    pub fn face_disk_contains(&self, f: FaceId, q: Coord) -> bool {
        let [a, b, c] = self.faces[f];
        if c == INFINITE {
            orient_sign(self.vertex(a), self.vertex(b), q) >= 0.0
        } else {
            incircle_sign(self.vertex(a), self.vertex(b), self.vertex(c), q) >= 0.0
        }
    }

    /// Closed containment of `q` in the face itself (triangle or halfplane).
    pub fn face_contains_point(&self, f: FaceId, q: Coord) -> bool {
        let [a, b, c] = self.faces[f];
        if c == INFINITE {
            return orient_sign(self.vertex(a), self.vertex(b), q) >= 0.0;
        }
        let (pa, pb, pc) = (self.vertex(a), self.vertex(b), self.vertex(c));
        orient_sign(pa, pb, q) >= 0.0 && orient_sign(pb, pc, q) >= 0.0 && orient_sign(pc, pa, q) >= 0.0
    }

    /// Locates `p` by walking from `hint`. Returns the triangle containing
    /// `p`, or a hull face whose closed halfplane contains `p` when `p` lies
    /// outside the hull.
    pub fn locate_from(&self, p: Coord, hint: FaceId) -> FaceId {
        let mut f = if hint < self.num_triangles { hint } else { 0 };
        let cap = 4 * self.faces.len() + 16;
        let mut step = 0usize;
        'walk: while step < cap {
            let tri = self.faces[f];
            let offset = step % 3;
            for k in 0..3 {
                let i = (offset + k) % 3;
                let u = self.coords[tri[(i + 1) % 3] as usize];
                let w = self.coords[tri[(i + 2) % 3] as usize];
                if orient_sign(u, w, p) < 0.0 {
                    let g = self.adjacent[f][i] as usize;
                    if g >= self.num_triangles {
                        return g;
                    }
                    f = g;
                    step += 1;
                    continue 'walk;
                }
            }
            return f;
        }
        self.locate_exhaustive(p)
    }

    pub fn locate(&self, p: Coord) -> FaceId {
        self.locate_from(p, 0)
    }

    fn locate_exhaustive(&self, p: Coord) -> FaceId {
        (0..self.faces.len())
            .find(|&f| self.face_contains_point(f, p))
            .expect("triangles and hull halfplanes cover the plane")
    }

    /// OFF-style text: vertex and triangle counts, vertices, then triangles.
    pub fn to_off(&self) -> String {
        let mut s = String::from("OFF\n");
        let _ = writeln!(s, "{} {} 0", self.coords.len(), self.num_triangles);
        for c in &self.coords {
            let _ = writeln!(s, "{} {} 0", c.x, c.y);
        }
        for t in &self.faces[..self.num_triangles] {
            let _ = writeln!(s, "3 {} {} {}", t[0], t[1], t[2]);
        }
        s
    }
}

fn canonical_bits(v: f64) -> u64 {
    if v == 0.0 {
        0
    } else {
        v.to_bits()
    }
}

/// Incircle sign with ties broken by a symbolic lift perturbation ordered by
/// vertex index. `a, b, c` must be counter-clockwise. Never returns zero for
/// four distinct points.
fn incircle_perturbed(coords: &[Coord], a: u32, b: u32, c: u32, p: u32) -> f64 {
    let (pa, pb, pc, pp) = (
        coords[a as usize],
        coords[b as usize],
        coords[c as usize],
        coords[p as usize],
    );
    let d = incircle_sign(pa, pb, pc, pp);
    if d != 0.0 {
        return d;
    }
    let mut order = [a, b, c, p];
    order.sort_unstable();
    for &v in order[1..].iter().rev() {
        let o = if v == p {
            return -1.0;
        } else if v == c {
            orient_sign(pa, pb, pp)
        } else if v == b {
            orient_sign(pa, pp, pc)
        } else {
            orient_sign(pp, pb, pc)
        };
        if o != 0.0 {
            return o;
        }
    }
    -1.0
}

/// Strict betweenness of `p` on segment `a b`, for collinear input.
fn strictly_between(a: Coord, b: Coord, p: Coord) -> bool {
    if a.x != b.x {
        (a.x < p.x && p.x < b.x) || (b.x < p.x && p.x < a.x)
    } else {
        (a.y < p.y && p.y < b.y) || (b.y < p.y && p.y < a.y)
    }
}

fn hilbert_order(coords: &[Coord]) -> Vec<u32> {
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for c in coords {
        x0 = x0.min(c.x);
        y0 = y0.min(c.y);
        x1 = x1.max(c.x);
        y1 = y1.max(c.y);
    }
    let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    const SIDE: u32 = 1 << 16;
    let scale = (SIDE - 1) as f64 / span;
    let mut keyed: Vec<(u64, u32)> = coords
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let hx = ((c.x - x0) * scale) as u32;
            let hy = ((c.y - y0) * scale) as u32;
            (hilbert_index(SIDE, hx, hy), i as u32)
        })
        .collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, i)| i).collect()
}

fn hilbert_index(side: u32, mut x: u32, mut y: u32) -> u64 {
    let mut d = 0u64;
    let mut s = side / 2;
    while s > 0 {
        let rx = u32::from(x & s > 0);
        let ry = u32::from(y & s > 0);
        d += u64::from(s) * u64::from(s) * u64::from((3 * rx) ^ ry);
        if ry == 0 {
            if rx == 1 {
                x = side - 1 - x;
                y = side - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        s /= 2;
    }
    d
}

struct Builder {
    coords: Vec<Coord>,
    faces: Vec<[u32; 3]>,
    adjacent: Vec<[u32; 3]>,
    alive: Vec<bool>,
    free: Vec<u32>,
    last: u32,
    // Scratch for cavity search.
    mark: Vec<u32>,
    stamp: u32,
}

impl Builder {
    fn new(coords: Vec<Coord>) -> Self {
        let cap = 2 * coords.len() + 4;
        Builder {
            coords,
            faces: Vec::with_capacity(cap),
            adjacent: Vec::with_capacity(cap),
            alive: Vec::with_capacity(cap),
            free: Vec::new(),
            last: 0,
            mark: Vec::with_capacity(cap),
            stamp: 0,
        }
    }

    fn pt(&self, v: u32) -> Coord {
        self.coords[v as usize]
    }

    fn run(&mut self) -> Result<()> {
        let mut order = hilbert_order(&self.coords);
        let a = order[0];
        let b = order[1];
        let Some(k) = (2..order.len()).find(|&k| orient_sign(self.pt(a), self.pt(b), self.pt(order[k])) != 0.0)
        else {
            return Err(Error::DegenerateSample);
        };
        let c = order.remove(k);
        self.init(a, b, c);
        for &v in &order[2..] {
            self.insert(v);
        }
        Ok(())
    }

    fn init(&mut self, a: u32, b: u32, c: u32) {
        let (a, b, c) = if orient_sign(self.pt(a), self.pt(b), self.pt(c)) > 0.0 {
            (a, b, c)
        } else {
            (a, c, b)
        };
        // Face 0 is the triangle; 1..4 are hull faces across its edges.
        self.faces = vec![[a, b, c], [c, b, INFINITE], [a, c, INFINITE], [b, a, INFINITE]];
        // Edge opposite a is (b, c) -> hull face (c, b); opposite b is (c, a)
        // -> (a, c); opposite c is (a, b) -> (b, a).
        self.adjacent = vec![
            [1, 2, 3],
            // (c, b, inf): opposite c is (b, inf) shared with (b, a, inf);
            // opposite b is (inf, c) shared with (a, c, inf).
            [3, 2, 0],
            // (a, c, inf): opposite a -> (c, inf) shared with (c, b, inf);
            // opposite c -> (inf, a) shared with (b, a, inf).
            [1, 3, 0],
            // (b, a, inf): opposite b -> (a, inf) with (a, c, inf);
            // opposite a -> (inf, b) with (c, b, inf).
            [2, 1, 0],
        ];
        self.alive = vec![true; 4];
        self.mark = vec![0; 4];
        self.last = 0;
    }

    fn in_conflict(&self, f: u32, p: u32) -> bool {
        let [a, b, c] = self.faces[f as usize];
        if c == INFINITE {
            let (pa, pb, pp) = (self.pt(a), self.pt(b), self.pt(p));
            let o = orient_sign(pa, pb, pp);
            o > 0.0 || (o == 0.0 && strictly_between(pa, pb, pp))
        } else {
            incircle_perturbed(&self.coords, a, b, c, p) > 0.0
        }
    }

    /// Finds a face in conflict with `p` by walking from the last new face.
    fn locate_conflict(&self, p: u32) -> u32 {
        let pp = self.pt(p);
        let mut f = self.last;
        if self.faces[f as usize][2] == INFINITE {
            if self.in_conflict(f, p) {
                return f;
            }
            f = self.adjacent[f as usize][2];
        }
        let mut step = 0usize;
        let cap = 4 * self.faces.len() + 16;
        'walk: while step < cap {
            let tri = self.faces[f as usize];
            let offset = step % 3;
            for k in 0..3 {
                let i = (offset + k) % 3;
                let u = self.pt(tri[(i + 1) % 3]);
                let w = self.pt(tri[(i + 2) % 3]);
                if orient_sign(u, w, pp) < 0.0 {
                    let g = self.adjacent[f as usize][i];
                    if self.faces[g as usize][2] == INFINITE {
                        return g;
                    }
                    f = g;
                    step += 1;
                    continue 'walk;
                }
            }
            return f;
        }
        (0..self.faces.len() as u32)
            .find(|&g| self.alive[g as usize] && self.in_conflict(g, p))
            .expect("some face conflicts with a new point")
    }

    fn new_face(&mut self, v: [u32; 3]) -> u32 {
        if let Some(f) = self.free.pop() {
            self.faces[f as usize] = v;
            self.adjacent[f as usize] = [NONE; 3];
            self.alive[f as usize] = true;
            f
        } else {
            self.faces.push(v);
            self.adjacent.push([NONE; 3]);
            self.alive.push(true);
            self.mark.push(0);
            (self.faces.len() - 1) as u32
        }
    }

    fn insert(&mut self, p: u32) {
        let start = self.locate_conflict(p);
        self.stamp += 1;
        let stamp = self.stamp;

        let mut cavity = vec![start];
        self.mark[start as usize] = stamp;
        // (u, w, outside face) with u -> w counter-clockwise around the cavity.
        let mut boundary: Vec<(u32, u32, u32)> = Vec::new();
        let mut k = 0;
        while k < cavity.len() {
            let f = cavity[k];
            k += 1;
            let tri = self.faces[f as usize];
            for i in 0..3 {
                let g = self.adjacent[f as usize][i];
                if self.mark[g as usize] == stamp {
                    continue;
                }
                if self.in_conflict(g, p) {
                    self.mark[g as usize] = stamp;
                    cavity.push(g);
                } else {
                    boundary.push((tri[(i + 1) % 3], tri[(i + 2) % 3], g));
                }
            }
        }
        // A neighbor rejected from one cavity face may be accepted later via
        // another; drop boundary entries that ended up inside.
        boundary.retain(|&(_, _, g)| self.mark[g as usize] != stamp);

        for &f in &cavity {
            self.alive[f as usize] = false;
            self.free.push(f);
        }

        let mut created: Vec<(u32, u32, u32)> = Vec::with_capacity(boundary.len());
        for &(u, w, outside) in &boundary {
            let f = self.new_face([u, w, p]);
            self.adjacent[f as usize][2] = outside;
            // Freed cavity slots are reused right away, so match the shared
            // edge (w, u) rather than the old face id.
            let out_tri = self.faces[outside as usize];
            let slot = (0..3)
                .find(|&j| out_tri[(j + 1) % 3] == w && out_tri[(j + 2) % 3] == u)
                .expect("outside face shares the boundary edge");
            self.adjacent[outside as usize][slot] = f;
            created.push((u, w, f));
        }
        // Link new faces around p: face (u, w, p) has (w, p) opposite u,
        // shared with the face starting at w.
        for &(u, w, f) in &created {
            let next = created.iter().find(|&&(s, _, _)| s == w).expect("closed cavity").2;
            let prev = created.iter().find(|&&(_, e, _)| e == u).expect("closed cavity").2;
            self.adjacent[f as usize][0] = next;
            self.adjacent[f as usize][1] = prev;
        }
        // Canonical hull faces keep the infinite vertex last.
        for &(_, _, f) in &created {
            self.canonicalize(f);
        }
        self.last = created
            .iter()
            .map(|&(_, _, f)| f)
            .find(|&f| self.faces[f as usize][2] != INFINITE)
            .unwrap_or(created[0].2);
    }

    fn canonicalize(&mut self, f: u32) {
        let v = self.faces[f as usize];
        let Some(k) = v.iter().position(|&x| x == INFINITE) else {
            return;
        };
        if k == 2 {
            return;
        }
        let shift = k + 1; // rotate left so that INFINITE lands at index 2
        let a = self.adjacent[f as usize];
        self.faces[f as usize] = [v[shift % 3], v[(shift + 1) % 3], v[(shift + 2) % 3]];
        self.adjacent[f as usize] = [a[shift % 3], a[(shift + 1) % 3], a[(shift + 2) % 3]];
    }

    fn finish(self, source: Vec<u32>) -> Triangulation {
        let coords = self.coords;
        let n = self.faces.len();
        let mut remap = vec![NONE; n];
        let mut next = 0u32;
        for f in 0..n {
            if self.alive[f] && self.faces[f][2] != INFINITE {
                remap[f] = next;
                next += 1;
            }
        }
        let num_triangles = next as usize;
        for f in 0..n {
            if self.alive[f] && self.faces[f][2] == INFINITE {
                remap[f] = next;
                next += 1;
            }
        }
        let total = next as usize;
        let mut faces = vec![[0u32; 3]; total];
        let mut adjacent = vec![[0u32; 3]; total];
        for f in 0..n {
            if remap[f] != NONE {
                faces[remap[f] as usize] = self.faces[f];
                adjacent[remap[f] as usize] = self.adjacent[f].map(|g| remap[g as usize]);
            }
        }
        let mut edges = Vec::with_capacity(3 * coords.len());
        for (f, tri) in faces.iter().enumerate() {
            for i in 0..3 {
                let (u, w) = (tri[(i + 1) % 3], tri[(i + 2) % 3]);
                if u == INFINITE || w == INFINITE {
                    continue;
                }
                let g = adjacent[f][i] as usize;
                if f < g {
                    edges.push(Edge {
                        a: u.min(w),
                        b: u.max(w),
                        faces: [f, g],
                    });
                }
            }
        }
        Triangulation {
            coords,
            source,
            faces,
            adjacent,
            num_triangles,
            edges,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Side;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64, y: f64) -> Coord {
        Coord::new(x, y)
    }

    fn random_coords(n: usize, seed: u64) -> Vec<Coord> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| c(rng.gen(), rng.gen())).collect()
    }

    /// Structural and Delaunay invariants, checked exhaustively.
    fn check(t: &Triangulation) {
        let nv = t.num_vertices();
        // Empty-circumdisk property.
        for f in 0..t.num_triangles() {
            let Face::Triangle([a, b, cc]) = t.face(f) else {
                panic!("triangle range holds a hull face");
            };
            assert!(orient_sign(t.vertex(a), t.vertex(b), t.vertex(cc)) > 0.0);
            for v in 0..nv as u32 {
                if v == a || v == b || v == cc {
                    continue;
                }
                let s = crate::geom::in_circumdisk(t.vertex(a), t.vertex(b), t.vertex(cc), t.vertex(v)).unwrap();
                assert_ne!(s, Side::Inside, "vertex {v} inside face {f}");
            }
        }
        // Hull faces keep every vertex in the closed complement of their
        // open halfplane.
        for f in t.num_triangles()..t.num_faces() {
            let Face::Hull { a, b } = t.face(f) else {
                panic!("hull range holds a triangle");
            };
            for v in 0..nv as u32 {
                assert!(orient_sign(t.vertex(a), t.vertex(b), t.vertex(v)) <= 0.0);
            }
        }
        // Adjacency symmetry.
        for f in 0..t.num_faces() {
            for g in t.neighbors(f) {
                assert!(t.neighbors(g).contains(&f), "asymmetric adjacency {f} {g}");
            }
        }
        // Euler: T = 2n - 2 - h, E = 3n - 3 - h.
        let h = t.num_hull_faces();
        assert_eq!(t.num_triangles(), 2 * nv - 2 - h);
        assert_eq!(t.edges().len(), 3 * nv - 3 - h);
        // Edge incidences.
        let mut incident = vec![0usize; t.num_faces()];
        for e in t.edges() {
            let kinds = e.faces.map(|f| t.face(f).is_hull());
            assert!(!(kinds[0] && kinds[1]));
            for f in e.faces {
                incident[f] += 1;
            }
        }
        for f in 0..t.num_faces() {
            let want = if t.face(f).is_hull() { 1 } else { 3 };
            assert_eq!(incident[f], want);
        }
        // Dual connectivity.
        let mut seen = vec![false; t.num_faces()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(f) = stack.pop() {
            for g in t.neighbors(f) {
                if !seen[g] {
                    seen[g] = true;
                    stack.push(g);
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn single_triangle() {
        let t = Triangulation::build(&[c(0., 0.), c(1., 0.), c(0., 1.)]).unwrap();
        assert_eq!(t.num_triangles(), 1);
        assert_eq!(t.num_hull_faces(), 3);
        check(&t);
    }

    #[test]
    fn cocircular_square_is_deterministic() {
        let sq = [c(0., 0.), c(1., 0.), c(1., 1.), c(0., 1.)];
        let t = Triangulation::build(&sq).unwrap();
        assert_eq!(t.num_triangles(), 2);
        check(&t);
        let first: Vec<Face> = t.faces().map(|(_, f)| f).collect();
        for _ in 0..5 {
            let u = Triangulation::build(&sq).unwrap();
            assert_eq!(first, u.faces().map(|(_, f)| f).collect::<Vec<_>>());
        }
    }

    #[test]
    fn random_sets_are_delaunay() {
        for (n, seed) in [(4, 1), (10, 2), (50, 3), (200, 4), (500, 5)] {
            check(&Triangulation::build(&random_coords(n, seed)).unwrap());
        }
    }

    #[test]
    fn grid_with_many_cocircular_quads() {
        let pts: Vec<Coord> = (0..12).flat_map(|i| (0..9).map(move |j| c(i as f64, j as f64))).collect();
        check(&Triangulation::build(&pts).unwrap());
    }

    #[test]
    fn collinear_runs_and_hull_points() {
        let mut pts: Vec<Coord> = (0..20).map(|i| c(i as f64 * 0.5, 0.0)).collect();
        pts.extend((0..10).map(|i| c(0.0, 1.0 + i as f64)));
        pts.push(c(3.0, 2.5));
        pts.extend((0..15).map(|i| c(i as f64 * 0.25, i as f64 * 0.25)));
        check(&Triangulation::build(&pts).unwrap());
    }

    #[test]
    fn duplicates_are_merged() {
        let pts = [c(0., 0.), c(1., 0.), c(0., 0.), c(0., 1.), c(-0.0, 0.0)];
        let t = Triangulation::build(&pts).unwrap();
        assert_eq!(t.num_vertices(), 3);
        assert_eq!(t.vertex_source(2), 3);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(
            Triangulation::build(&[c(0., 0.), c(1., 0.)]).unwrap_err(),
            Error::SampleTooSmall(2)
        );
        assert_eq!(
            Triangulation::build(&[c(0., 0.), c(1., 1.), c(2., 2.), c(3., 3.)]).unwrap_err(),
            Error::DegenerateSample
        );
    }

    #[test]
    fn locate_examples() {
        let t = Triangulation::build(&[c(0., 0.), c(1., 0.), c(0., 1.)]).unwrap();
        assert_eq!(t.locate(c(0.2, 0.2)), 0);
        let far = c(-50.0, -70.0);
        let f = t.locate(far);
        assert!(t.face(f).is_hull());
        assert!(t.face_contains_point(f, far));
    }

    #[test]
    fn locate_matches_exhaustive_scan() {
        let t = Triangulation::build(&random_coords(300, 9)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut hint = 0;
        for _ in 0..1000 {
            let p = c(rng.gen_range(-0.5..1.5), rng.gen_range(-0.5..1.5));
            let f = t.locate_from(p, hint);
            hint = f;
            assert!(t.face_contains_point(f, p));
            // The exhaustive scan's containing set includes the answer.
            let containing: Vec<FaceId> = (0..t.num_faces()).filter(|&g| t.face_contains_point(g, p)).collect();
            assert!(containing.contains(&f));
            if f < t.num_triangles() {
                assert!(containing.iter().all(|&g| g < t.num_triangles() || !t.face_contains_point(g, p) || t.face_disk_contains(g, p)));
            }
        }
    }

    #[test]
    fn face_disk_examples() {
        let t = Triangulation::build(&[c(1., 0.), c(0., 1.), c(-1., 0.)]).unwrap();
        assert!(t.face_disk_contains(0, c(0., 0.)));

        let t = Triangulation::build(&[c(0., 0.), c(1., 0.), c(0.5, 1.)]).unwrap();
        let lower = (0..t.num_faces())
            .find(|&f| matches!(t.face(f), Face::Hull { a, b } if t.vertex(a).y == 0.0 && t.vertex(b).y == 0.0))
            .unwrap();
        assert!(t.face_disk_contains(lower, c(0.5, -1.)));
        assert!(!t.face_disk_contains(lower, c(0.5, 1.)));
    }

    #[test]
    fn off_dump_lists_vertices_and_triangles() {
        let t = Triangulation::build(&[c(0., 0.), c(1., 0.), c(0., 1.)]).unwrap();
        let off = t.to_off();
        let lines: Vec<&str> = off.lines().collect();
        assert_eq!(lines[0], "OFF");
        assert_eq!(lines[1], "3 1 0");
        assert_eq!(lines.len(), 2 + 3 + 1);
    }
}
