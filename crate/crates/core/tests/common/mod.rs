#![allow(dead_code)]

use fermat_geocast::geometry::{AnchorSet, Point2D};
use fermat_geocast::topology::{Arena, Network, Node};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ARENA_W: f64 = 1800.0;
pub const ARENA_H: f64 = 1100.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn arena_point(rng: &mut ChaCha8Rng) -> Point2D {
    Point2D::new(
        rng.random_range(0.0..ARENA_W),
        rng.random_range(0.0..ARENA_H),
    )
}

/// `count` anchors (source first) uniform in the 1800 x 1100 arena.
pub fn random_anchors(rng: &mut ChaCha8Rng, count: usize) -> AnchorSet {
    let source = arena_point(rng);
    let dests = (1..count).map(|_| arena_point(rng)).collect();
    AnchorSet::new(source, dests).unwrap()
}

/// Interior angles (radians) at a, b, c.
pub fn angles(a: Point2D, b: Point2D, c: Point2D) -> [f64; 3] {
    let at = |v: Point2D, p: Point2D, q: Point2D| {
        let (u, w) = (p - v, q - v);
        (u.dot(w) / (u.norm() * w.norm())).clamp(-1.0, 1.0).acos()
    };
    [at(a, b, c), at(b, c, a), at(c, a, b)]
}

/// Nodes 1, 2, 3 at x = 0, 8, 9.5 on a line with radius 10. Node 0 sits
/// out of range of all of them so the ids match the usual labelling.
pub fn overshoot_network() -> Network {
    let pts = [(150.0, 150.0), (0.0, 50.0), (8.0, 50.0), (9.5, 50.0)];
    let nodes = pts
        .iter()
        .enumerate()
        .map(|(id, &(x, y))| Node {
            id,
            position: Point2D::new(x, y),
        })
        .collect();
    Network::new(nodes, 10.0, Arena::new(200.0, 200.0).unwrap()).unwrap()
}

/// Brute-force minimum of `f` over a square window, for oracle checks.
pub fn fine_scan(
    center: Point2D,
    half_width: f64,
    step: f64,
    f: impl Fn(Point2D) -> f64,
) -> Point2D {
    let n = (2.0 * half_width / step).round() as i64;
    let mut best = (f64::INFINITY, center);
    for i in 0..=n {
        for j in 0..=n {
            let p = Point2D::new(
                center.x - half_width + i as f64 * step,
                center.y - half_width + j as f64 * step,
            );
            let v = f(p);
            if v < best.0 {
                best = (v, p);
            }
        }
    }
    best.1
}
