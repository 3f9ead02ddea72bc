//! Exactness of the orientation and incircle decisions against rational
//! arithmetic, on inputs a few ulps away from degeneracy.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use epsnet::geom::{in_circumdisk, orient_sign, Coord, Side};

fn q(v: f64) -> BigRational {
    BigRational::from_float(v).unwrap()
}

fn exact_orient(a: Coord, b: Coord, c: Coord) -> i32 {
    let d = (q(b.x) - q(a.x)) * (q(c.y) - q(a.y)) - (q(b.y) - q(a.y)) * (q(c.x) - q(a.x));
    sign(&d)
}

fn sign(d: &BigRational) -> i32 {
    if d.is_zero() {
        0
    } else if d.is_positive() {
        1
    } else {
        -1
    }
}

fn exact_incircle(a: Coord, b: Coord, c: Coord, p: Coord) -> i32 {
    let row = |u: Coord| {
        let x = q(u.x) - q(p.x);
        let y = q(u.y) - q(p.y);
        let l = &x * &x + &y * &y;
        (x, y, l)
    };
    let (ax, ay, al) = row(a);
    let (bx, by, bl) = row(b);
    let (cx, cy, cl) = row(c);
    let det = &ax * (&by * &cl - &bl * &cy) - &ay * (&bx * &cl - &bl * &cx) + &al * (&bx * &cy - &by * &cx);
    sign(&det)
}

fn nudge(v: f64, ulps: i64) -> f64 {
    f64::from_bits((v.to_bits() as i64 + ulps) as u64)
}

fn signum(v: f64) -> i32 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

#[test]
fn orientation_near_lines_matches_rationals() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut zero = 0;
    for i in 0..100_000 {
        if i % 4 == 0 {
            let mut g = || rng.gen_range(-8..=8) as f64;
            let (a, d) = (Coord::new(g(), g()), Coord::new(g(), g()));
            let k = g();
            let c = Coord::new(a.x + k * d.x, a.y + k * d.y);
            let b = Coord::new(a.x + d.x, a.y + d.y);
            assert_eq!(signum(orient_sign(a, b, c)), exact_orient(a, b, c));
            zero += (exact_orient(a, b, c) == 0) as u32;
            continue;
        }
        let a = Coord::new(rng.gen(), rng.gen());
        let b = Coord::new(rng.gen(), rng.gen());
        let t: f64 = rng.gen_range(-2.0..3.0);
        let c = Coord::new(
            nudge(a.x + t * (b.x - a.x), rng.gen_range(-3..=3)),
            nudge(a.y + t * (b.y - a.y), rng.gen_range(-3..=3)),
        );
        let want = exact_orient(a, b, c);
        zero += (want == 0) as u32;
        assert_eq!(signum(orient_sign(a, b, c)), want, "{a:?} {b:?} {c:?}");
    }
    assert!(zero > 0);
}

#[test]
fn incircle_near_circles_matches_rationals() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut boundary = 0;
    for i in 0..100_000 {
        // Grid points make exact cocircularity common.
        let grid = i % 4 == 0;
        let mut pt = || {
            if grid {
                Coord::new(rng.gen_range(-4..=4) as f64, rng.gen_range(-4..=4) as f64)
            } else {
                let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                if i % 4 == 1 {
                    let r = 1.0 + rng.gen_range(-1e-12..1e-12);
                    Coord::new(r * th.cos(), r * th.sin())
                } else {
                    Coord::new(nudge(th.cos(), rng.gen_range(-2..=2)), nudge(th.sin(), rng.gen_range(-2..=2)))
                }
            }
        };
        let (a, b, c, p) = (pt(), pt(), pt(), pt());
        let o = exact_orient(a, b, c);
        if o == 0 {
            continue;
        }
        let want = o * exact_incircle(a, b, c, p);
        boundary += (want == 0) as u32;
        let got = match in_circumdisk(a, b, c, p).unwrap() {
            Side::Inside => 1,
            Side::Boundary => 0,
            Side::Outside => -1,
        };
        assert_eq!(got, want, "{a:?} {b:?} {c:?} {p:?}");
    }
    assert!(boundary > 0);
}

fn coord() -> impl Strategy<Value = Coord> {
    (-1000i32..1000, -1000i32..1000).prop_map(|(x, y)| Coord::new(x as f64 / 64.0, y as f64 / 64.0))
}

proptest! {
    #[test]
    fn circumdisk_ignores_vertex_order(a in coord(), b in coord(), c in coord(), p in coord()) {
        prop_assume!(orient_sign(a, b, c) != 0.0);
        let base = in_circumdisk(a, b, c, p).unwrap();
        for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            prop_assert_eq!(in_circumdisk(x, y, z, p).unwrap(), base);
        }
        for v in [a, b, c] {
            prop_assert_eq!(in_circumdisk(a, b, c, v).unwrap(), Side::Boundary);
        }
    }
}
