#![allow(dead_code)]

use rand::Rng;

use hingeset::cone::{normalize_cone, Arc, PolytopalCone};
use hingeset::exact::{rat, AffineForm, Direction, Point2, Rational, Vec2};
use hingeset::hinge::HingeFunction;

pub fn small_rat<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

pub fn nonzero_form<R: Rng>(rng: &mut R) -> AffineForm {
    loop {
        let f = AffineForm::new(small_rat(rng), small_rat(rng), small_rat(rng));
        if !f.is_constant() {
            return f;
        }
    }
}

/// At most six absolute-value terms, entries p/q with p, q in [-3, 3].
pub fn random_hinge<R: Rng>(rng: &mut R) -> HingeFunction {
    let base = AffineForm::new(small_rat(rng), small_rat(rng), small_rat(rng));
    let k = rng.gen_range(1..=6);
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for _ in 0..k {
        let f = nonzero_form(rng);
        if rng.gen_bool(0.5) {
            plus.push(f);
        } else {
            minus.push(f);
        }
    }
    HingeFunction::new(base, plus, minus)
}

pub fn random_direction<R: Rng>(rng: &mut R, bound: i64) -> Direction {
    loop {
        let (x, y) = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
        if let Ok(d) = Direction::new(x, y) {
            return d;
        }
    }
}

/// Canonical cones with at most six arcs, direction entries in [-9, 9].
pub fn random_cone<R: Rng>(rng: &mut R) -> PolytopalCone {
    loop {
        let n = rng.gen_range(1..=8);
        let mut rays: Vec<Direction> = (0..n).map(|_| random_direction(rng, 9)).collect();
        rays.sort();
        rays.dedup();
        let m = rays.len();
        let arcs: Vec<Arc> = (0..m)
            .filter(|_| rng.gen_bool(0.5))
            .map(|k| Arc::new(rays[k], rays[(k + 1) % m]))
            .collect();
        let c = normalize_cone(&arcs);
        if c.arcs().len() <= 6 {
            return c;
        }
    }
}

pub fn random_point<R: Rng>(rng: &mut R) -> Point2 {
    Vec2::new(rat(rng.gen_range(-40..=40), rng.gen_range(1..=8)), rat(rng.gen_range(-40..=40), rng.gen_range(1..=8)))
}

/// Convex hull of integer points, counterclockwise, collinear points dropped.
pub fn convex_hull(mut pts: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (i64, i64), a: (i64, i64), b: (i64, i64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub fn random_pentagon<R: Rng>(rng: &mut R) -> Vec<Point2> {
    loop {
        let pts: Vec<(i64, i64)> = (0..7).map(|_| (rng.gen_range(-5..=5), rng.gen_range(-5..=5))).collect();
        let hull = convex_hull(pts);
        if hull.len() == 5 {
            return hull.into_iter().map(|(x, y)| Vec2::ints(x, y)).collect();
        }
    }
}

pub fn triangle_lines() -> Vec<AffineForm> {
    vec![
        AffineForm::ints(1, -1, 0),
        AffineForm::ints(1, 2, -2),
        AffineForm::ints(2, 1, -2),
        AffineForm::ints(1, 0, -1),
        AffineForm::ints(0, 1, -1),
    ]
}

pub fn triangle_hinge() -> HingeFunction {
    hingeset::synth::reference_triangle()
}

pub fn four_fan_hinge() -> HingeFunction {
    let f = AffineForm::ints;
    HingeFunction::new(
        f(0, 0, -1),
        vec![f(1, 0, 0), f(0, 1, 0), f(-2, 1, 0), f(-1, 2, 0)],
        vec![f(-3, 1, 0), f(-1, 3, 0)],
    )
}

pub fn h1() -> HingeFunction {
    let f = AffineForm::ints;
    HingeFunction::new(f(1, 0, -1), vec![f(1, 0, -1), f(0, 1, 0)], vec![f(-1, 1, 0)])
}

pub fn three_fan() -> PolytopalCone {
    hingeset::cone::alternating_fan(&[Direction::of(1, 0), Direction::of(1, 1), Direction::of(-1, 1)])
}

pub fn even_fan(m: i64) -> PolytopalCone {
    let lines: Vec<Direction> = (0..2 * m).map(|k| Direction::of(1, k - 2)).collect();
    hingeset::cone::alternating_fan(&lines)
}
