//! Planar kernel: exact orientation and incircle decisions, generalized disks,
//! and the four-quadrant partition used by the ten-point net.
//!
//! All sign decisions go through adaptive-precision predicates, so they are
//! exact for any finite `f64` input. Computed centers and radii exist only for
//! reporting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bare planar coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coord {
    pub x: f64,
    pub y: f64,
}

impl Coord {
    pub const fn new(x: f64, y: f64) -> Self {
        Coord { x, y }
    }

    fn robust(self) -> robust::Coord<f64> {
        robust::Coord { x: self.x, y: self.y }
    }
}

impl From<(f64, f64)> for Coord {
    fn from((x, y): (f64, f64)) -> Self {
        Coord { x, y }
    }
}

/// An input point with an integer multiplicity.
///
/// `id` is the point's index in the owning [`crate::dataio::Dataset`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub weight: u32,
    pub id: u32,
}

impl Point {
    pub fn new(id: u32, x: f64, y: f64) -> Self {
        Point { x, y, weight: 1, id }
    }

    pub fn weighted(id: u32, x: f64, y: f64, weight: u32) -> Self {
        Point { x, y, weight, id }
    }

    #[inline]
    pub fn xy(&self) -> Coord {
        Coord { x: self.x, y: self.y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Ccw,
    Cw,
    Collinear,
}

/// Position of a query relative to a closed region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Inside,
    Boundary,
    Outside,
}

impl Side {
    /// Closed-region membership: the boundary counts as inside.
    #[inline]
    pub fn in_closed(self) -> bool {
        self != Side::Outside
    }

    fn from_sign(v: f64) -> Side {
        if v > 0.0 {
            Side::Inside
        } else if v < 0.0 {
            Side::Outside
        } else {
            Side::Boundary
        }
    }
}

/// Which side of the directed line `a -> b` a halfplane occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LineSide {
    Left,
    Right,
}

/// Exact sign of the orientation determinant of `(a, b, c)`; positive for a
/// counter-clockwise turn.
#[inline]
pub fn orient_sign(a: Coord, b: Coord, c: Coord) -> f64 {
    robust::orient2d(a.robust(), b.robust(), c.robust())
}

pub fn orient(a: Coord, b: Coord, c: Coord) -> Orientation {
    let d = orient_sign(a, b, c);
    if d > 0.0 {
        Orientation::Ccw
    } else if d < 0.0 {
        Orientation::Cw
    } else {
        Orientation::Collinear
    }
}

/// Exact incircle sign for a counter-clockwise triangle `(a, b, c)`: positive
/// when `q` is strictly inside the circumcircle.
#[inline]
pub fn incircle_sign(a: Coord, b: Coord, c: Coord, q: Coord) -> f64 {
    robust::incircle(a.robust(), b.robust(), c.robust(), q.robust())
}

/// Classifies `q` against the closed disk through `a`, `b`, `c`, whatever
/// their cyclic order.
pub fn in_circumdisk(a: Coord, b: Coord, c: Coord, q: Coord) -> Result<Side> {
    let o = orient_sign(a, b, c);
    if o == 0.0 {
        return Err(Error::DegenerateCircumdisk);
    }
    let d = incircle_sign(a, b, c, q);
    Ok(Side::from_sign(if o > 0.0 { d } else { -d }))
}

/// Classifies `q` against the closed halfplane on `side` of the line `a -> b`.
pub fn in_halfplane(a: Coord, b: Coord, side: LineSide, q: Coord) -> Result<Side> {
    if a == b {
        return Err(Error::DegenerateHalfplane);
    }
    let d = orient_sign(a, b, q);
    Ok(Side::from_sign(match side {
        LineSide::Left => d,
        LineSide::Right => -d,
    }))
}

/// A closed disk or a closed halfplane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GeneralizedDisk {
    /// Explicit center and squared radius. Membership is evaluated in floating
    /// point; use it for reporting, not for decisions.
    Circle { center: Coord, squared_radius: f64 },
    Halfplane { a: Coord, b: Coord, side: LineSide },
    /// The disk through three non-collinear points, decided exactly.
    CircleBySupport { p: Coord, q: Coord, r: Coord },
}

impl GeneralizedDisk {
    pub fn halfplane(a: Coord, b: Coord, side: LineSide) -> Result<Self> {
        if a == b {
            return Err(Error::DegenerateHalfplane);
        }
        Ok(GeneralizedDisk::Halfplane { a, b, side })
    }

    pub fn by_support(p: Coord, q: Coord, r: Coord) -> Result<Self> {
        if orient_sign(p, q, r) == 0.0 {
            return Err(Error::DegenerateCircumdisk);
        }
        Ok(GeneralizedDisk::CircleBySupport { p, q, r })
    }

    /// The closed disk with segment `a b` as diameter.
    pub fn diametral(a: Coord, b: Coord) -> Self {
        let center = Coord::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
        let (dx, dy) = (a.x - center.x, a.y - center.y);
        GeneralizedDisk::Circle {
            center,
            squared_radius: dx * dx + dy * dy,
        }
    }

    pub fn classify(&self, q: Coord) -> Side {
        match *self {
            GeneralizedDisk::Circle {
                center,
                squared_radius,
            } => {
                let (dx, dy) = (q.x - center.x, q.y - center.y);
                let d2 = dx * dx + dy * dy;
                if d2 < squared_radius {
                    Side::Inside
                } else if d2 > squared_radius {
                    Side::Outside
                } else {
                    Side::Boundary
                }
            }
            GeneralizedDisk::Halfplane { a, b, side } => {
                in_halfplane(a, b, side, q).expect("validated at construction")
            }
            GeneralizedDisk::CircleBySupport { p, q: s, r } => {
                in_circumdisk(p, s, r, q).expect("validated at construction")
            }
        }
    }

    #[inline]
    pub fn contains(&self, q: Coord) -> bool {
        self.classify(q).in_closed()
    }
}

/// Center and squared radius of the circle through `a`, `b`, `c`.
pub fn circumdisk(a: Coord, b: Coord, c: Coord) -> Result<GeneralizedDisk> {
    if orient_sign(a, b, c) == 0.0 {
        return Err(Error::DegenerateCircumdisk);
    }
    // Translate to `a` to limit cancellation.
    let (bx, by) = (b.x - a.x, b.y - a.y);
    let (cx, cy) = (c.x - a.x, c.y - a.y);
    let d = 2.0 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    Ok(GeneralizedDisk::Circle {
        center: Coord::new(a.x + ux, a.y + uy),
        squared_radius: ux * ux + uy * uy,
    })
}

/// Two lines splitting the plane into four closed quadrants.
///
/// The first line is vertical at `x = vertical_x`; the second is directed
/// from `line_a` to `line_b` with `line_a.x < line_b.x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadrantPartition {
    pub center: Coord,
    pub vertical_x: f64,
    pub line_a: Coord,
    pub line_b: Coord,
}

impl QuadrantPartition {
    /// Signs of `q` relative to the two lines: (`+1` right of the vertical
    /// line, `+1` above the second line), zero on a line.
    pub fn signs(&self, q: Coord) -> (i8, i8) {
        let s1 = if q.x > self.vertical_x {
            1
        } else if q.x < self.vertical_x {
            -1
        } else {
            0
        };
        let o = orient_sign(self.line_a, self.line_b, q);
        let s2 = if o > 0.0 {
            1
        } else if o < 0.0 {
            -1
        } else {
            0
        };
        (s1, s2)
    }

    /// Closed quadrant membership. Quadrants are numbered so that `i ^ 3` is
    /// opposite to `i`: bit 0 set means left of the vertical line, bit 1 set
    /// means below the second line.
    pub fn in_quadrant(&self, q: Coord, quadrant: usize) -> bool {
        let (s1, s2) = self.signs(q);
        let want1 = if quadrant & 1 == 0 { 1 } else { -1 };
        let want2 = if quadrant & 2 == 0 { 1 } else { -1 };
        (s1 == 0 || s1 == want1) && (s2 == 0 || s2 == want2)
    }

    pub fn quadrant_counts(&self, pts: &[Coord]) -> [usize; 4] {
        let mut counts = [0usize; 4];
        for &p in pts {
            for (k, c) in counts.iter_mut().enumerate() {
                if self.in_quadrant(p, k) {
                    *c += 1;
                }
            }
        }
        counts
    }
}

/// Splits `pts` by a vertical median line and a second line bisecting both
/// closed sides, so that each closed quadrant holds at least `⌊n/4⌋` points.
///
/// The slope of the second line is found by binary search over the slopes of
/// cross pairs; the line sits in the middle of the common bisecting band when
/// one exists, else through two input points. Every result is certified by
/// exact counting, with an exhaustive pair scan as the last resort for small
/// inputs.
pub fn quadrant_partition(pts: &[Coord]) -> Result<QuadrantPartition> {
    let n = pts.len();
    if n < 4 {
        return Err(Error::TooFewPoints { needed: 4, got: n });
    }
    let mut xs: Vec<f64> = pts.iter().map(|p| p.x).collect();
    xs.sort_by(f64::total_cmp);
    let m = n / 2;
    let mut vertical_x = xs[m];
    if n.is_multiple_of(2) && xs[m - 1] < xs[m] {
        let mid = 0.5 * (xs[m - 1] + xs[m]);
        if mid > xs[m - 1] && mid < xs[m] {
            vertical_x = mid;
        }
    }

    let left: Vec<Coord> = pts.iter().copied().filter(|p| p.x <= vertical_x).collect();
    let right: Vec<Coord> = pts.iter().copied().filter(|p| p.x >= vertical_x).collect();
    let need = n / 4;

    let certify = |a: Coord, b: Coord| -> Option<QuadrantPartition> {
        if a.x >= b.x {
            return None;
        }
        let y = a.y + (vertical_x - a.x) * (b.y - a.y) / (b.x - a.x);
        let part = QuadrantPartition {
            center: Coord::new(vertical_x, y),
            vertical_x,
            line_a: a,
            line_b: b,
        };
        let counts = part.quadrant_counts(pts);
        counts.iter().all(|&c| c >= need).then_some(part)
    };
    // Line of slope `s` through (vertical_x, y).
    let certify_slope = |s: f64, y: f64| -> Option<QuadrantPartition> {
        let a = Coord::new(vertical_x, y);
        let b = Coord::new(vertical_x + 1.0, y + s);
        let mut part = certify(a, b)?;
        part.center = a;
        Some(part)
    };

    // Cross pairs strictly separated in x define non-vertical candidate lines.
    let mut slopes: Vec<(f64, usize, usize)> = Vec::with_capacity(left.len() * right.len());
    for (i, a) in left.iter().enumerate() {
        for (j, b) in right.iter().enumerate() {
            if a.x < b.x {
                slopes.push(((b.y - a.y) / (b.x - a.x), i, j));
            }
        }
    }
    if slopes.is_empty() {
        return Err(Error::DegeneratePartition);
    }
    slopes.sort_by(|u, v| u.0.total_cmp(&v.0));

    let k_left = left.len().div_ceil(2) - 1;
    let k_right = right.len().div_ceil(2) - 1;
    let order_stat = |set: &[Coord], k: usize, s: f64| -> (f64, Coord) {
        let mut v: Vec<(f64, Coord)> = set.iter().map(|p| (p.y - s * p.x, *p)).collect();
        let (_, kth, _) = v.select_nth_unstable_by(k, |u, w| u.0.total_cmp(&w.0));
        *kth
    };
    let gap = |s: f64| -> (f64, Coord, Coord) {
        let (il, a) = order_stat(&left, k_left, s);
        let (ir, b) = order_stat(&right, k_right, s);
        (il - ir, a, b)
    };
    // Intercepts bisecting a closed side form an interval; aim for the
    // middle of the common part.
    let central = |s: f64| -> Option<f64> {
        let lo_l = order_stat(&left, k_left, s).0;
        let hi_l = order_stat(&left, left.len() - 1 - k_left, s).0;
        let lo_r = order_stat(&right, k_right, s).0;
        let hi_r = order_stat(&right, right.len() - 1 - k_right, s).0;
        let (lo, hi) = (lo_l.max(lo_r), hi_l.min(hi_r));
        (lo <= hi).then_some(0.5 * (lo + hi) + s * vertical_x)
    };

    // gap(s) runs from negative (steep negative slope) to positive; find the
    // first candidate slope where it is non-negative.
    let (mut lo, mut hi) = (0usize, slopes.len() - 1);
    if gap(slopes[lo].0).0 >= 0.0 {
        hi = lo;
    } else if gap(slopes[hi].0).0 < 0.0 {
        lo = hi;
    } else {
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if gap(slopes[mid].0).0 >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    for idx in [hi, lo] {
        let (s, i, j) = slopes[idx];
        if let Some(part) = central(s).and_then(|y| certify_slope(s, y)) {
            return Ok(part);
        }
        let (_, a, b) = gap(s);
        for (u, v) in [(a, b), (left[i], right[j])] {
            if let Some(part) = certify(u, v) {
                return Ok(part);
            }
        }
        // Every pair sharing this slope.
        let first = slopes.partition_point(|t| t.0 < s);
        for &(t, i, j) in slopes[first..].iter().take_while(|t| t.0 == s) {
            debug_assert_eq!(t, s);
            if let Some(part) = certify(left[i], right[j]) {
                return Ok(part);
            }
        }
    }

    if n <= 200 {
        for &(_, i, j) in &slopes {
            if let Some(part) = certify(left[i], right[j]) {
                return Ok(part);
            }
        }
    }
    Err(Error::DegeneratePartition)
}
