//! Polytopal cones as sets of directions, and the realizability criterion for them.

use std::cmp::Ordering;

use crate::exact::{sample_inside_arc, strictly_between, Direction};

/// A subset of the direction circle described by finitely many critical rays.
/// Gap k is the open arc from `rays[k]` to `rays[k + 1]` (cyclically); with no
/// rays there is a single gap covering the circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionSet {
    rays: Vec<Direction>,
    ray_in: Vec<bool>,
    gap_in: Vec<bool>,
}

impl DirectionSet {
    pub fn empty() -> Self {
        DirectionSet { rays: vec![], ray_in: vec![], gap_in: vec![false] }
    }

    pub fn full() -> Self {
        DirectionSet { rays: vec![], ray_in: vec![], gap_in: vec![true] }
    }

    /// Evaluates `pred` on each candidate ray and on one sample per gap.
    pub fn from_predicate(candidates: &[Direction], pred: impl Fn(Direction) -> bool) -> Self {
        let mut rays = candidates.to_vec();
        rays.sort();
        rays.dedup();
        if rays.is_empty() {
            let v = pred(Direction::of(1, 0));
            return DirectionSet { rays, ray_in: vec![], gap_in: vec![v] };
        }
        let ray_in = rays.iter().map(|&r| pred(r)).collect();
        let gap_in = gap_samples(&rays).into_iter().map(&pred).collect();
        DirectionSet { rays, ray_in, gap_in }.normalized()
    }

    /// The open CCW arc from `start` to `end` (circle minus `start` if equal).
    pub fn arc(start: Direction, end: Direction) -> Self {
        if start == end {
            return DirectionSet { rays: vec![start], ray_in: vec![false], gap_in: vec![true] };
        }
        DirectionSet::from_predicate(&[start, end], |d| strictly_between(start, end, d))
    }

    pub fn contains(&self, d: Direction) -> bool {
        if self.rays.is_empty() {
            return self.gap_in[0];
        }
        match self.rays.binary_search(&d) {
            Ok(k) => self.ray_in[k],
            Err(0) => *self.gap_in.last().unwrap(),
            Err(k) => self.gap_in[k - 1],
        }
    }

    /// Critical rays after normalization, in angular order.
    pub fn critical_rays(&self) -> &[Direction] {
        &self.rays
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty() && !self.gap_in[0]
    }

    pub fn is_full(&self) -> bool {
        self.rays.is_empty() && self.gap_in[0]
    }

    /// Open arcs contained in the set, as (start, end) pairs.
    pub fn included_gaps(&self) -> Vec<(Direction, Direction)> {
        let n = self.rays.len();
        (0..n).filter(|&k| self.gap_in[k]).map(|k| (self.rays[k], self.rays[(k + 1) % n])).collect()
    }

    pub fn included_rays(&self) -> Vec<Direction> {
        self.rays.iter().zip(&self.ray_in).filter(|(_, &i)| i).map(|(r, _)| *r).collect()
    }

    /// One direction per member piece: every included ray and a sample of every included gap.
    pub fn representatives(&self) -> Vec<Direction> {
        if self.rays.is_empty() {
            return if self.gap_in[0] { vec![Direction::of(1, 0)] } else { vec![] };
        }
        let mut out = self.included_rays();
        let samples = gap_samples(&self.rays);
        out.extend(samples.iter().zip(&self.gap_in).filter(|(_, &i)| i).map(|(s, _)| *s));
        out.sort();
        out
    }

    fn combine(&self, other: &DirectionSet, op: impl Fn(bool, bool) -> bool) -> DirectionSet {
        let mut cand = self.rays.clone();
        cand.extend_from_slice(&other.rays);
        DirectionSet::from_predicate(&cand, |d| op(self.contains(d), other.contains(d)))
    }

    pub fn union(&self, o: &DirectionSet) -> DirectionSet {
        self.combine(o, |a, b| a || b)
    }

    pub fn intersection(&self, o: &DirectionSet) -> DirectionSet {
        self.combine(o, |a, b| a && b)
    }

    pub fn difference(&self, o: &DirectionSet) -> DirectionSet {
        self.combine(o, |a, b| a && !b)
    }

    pub fn complement(&self) -> DirectionSet {
        DirectionSet::from_predicate(&self.rays, |d| !self.contains(d))
    }

    /// Point reflection d -> -d.
    pub fn antipode(&self) -> DirectionSet {
        let cand: Vec<Direction> = self.rays.iter().map(|r| r.neg()).collect();
        DirectionSet::from_predicate(&cand, |d| self.contains(d.neg()))
    }

    /// Drops rays across which membership does not change.
    fn normalized(self) -> DirectionSet {
        let n = self.rays.len();
        if n == 0 {
            return self;
        }
        let keep: Vec<bool> = (0..n)
            .map(|k| {
                let before = self.gap_in[(k + n - 1) % n];
                !(before == self.ray_in[k] && self.ray_in[k] == self.gap_in[k])
            })
            .collect();
        if !keep.iter().any(|&k| k) {
            return DirectionSet { rays: vec![], ray_in: vec![], gap_in: vec![self.gap_in[0]] };
        }
        // a dropped ray merges its two gaps, which share membership
        let mut rays = Vec::new();
        let mut ray_in = Vec::new();
        let mut gap_in = Vec::new();
        for k in 0..n {
            if keep[k] {
                rays.push(self.rays[k]);
                ray_in.push(self.ray_in[k]);
                gap_in.push(self.gap_in[k]);
            }
        }
        DirectionSet { rays, ray_in, gap_in }
    }

    /// True iff every member d satisfies n . d > 0 for the normal n = perp(t0),
    /// i.e. the set lies in the open CCW half-circle from t0 to -t0.
    pub fn inside_open_half(&self, t0: Direction) -> bool {
        let end = t0.neg();
        let in_half = |d: Direction| strictly_between(t0, end, d);
        if self.is_full() {
            return false;
        }
        if self.is_empty() {
            return true;
        }
        for r in self.included_rays() {
            if !in_half(r) {
                return false;
            }
        }
        for (a, b) in self.included_gaps() {
            if a == b {
                return false;
            }
            // closure of the gap inside the closed half-circle, traversed in order
            let ok_a = a == t0 || in_half(a);
            let ok_b = b == end || in_half(b);
            if !(ok_a && ok_b && Direction::cmp_from(t0, a, b) == Ordering::Less) {
                return false;
            }
        }
        true
    }

    /// A start ray t0 such that the set lies in the open half-circle (t0, -t0), if any.
    pub fn open_half_witness(&self) -> Option<Direction> {
        let mut cand: Vec<Direction> = self.rays.iter().flat_map(|r| [*r, r.neg()]).collect();
        cand.sort();
        cand.dedup();
        if cand.is_empty() {
            return if self.is_empty() { Some(Direction::of(1, 0)) } else { None };
        }
        let mut tries = cand.clone();
        tries.extend(gap_samples(&cand));
        tries.sort();
        tries.into_iter().find(|&t| self.inside_open_half(t))
    }
}

/// One interior direction of every gap between consecutive sorted rays.
pub(crate) fn gap_samples(rays: &[Direction]) -> Vec<Direction> {
    let n = rays.len();
    if n == 1 {
        return vec![rays[0].neg()];
    }
    (0..n).map(|k| sample_inside_arc(rays[k], rays[(k + 1) % n]).expect("distinct rays")).collect()
}

/// The open CCW arc strictly between `start` and `end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub start: Direction,
    pub end: Direction,
}

impl Arc {
    pub fn new(start: Direction, end: Direction) -> Self {
        Arc { start, end }
    }

    pub fn contains(&self, d: Direction) -> bool {
        strictly_between(self.start, self.end, d)
    }

    /// Sign of the arc's angle relative to π: -1 below, 0 equal, 1 above.
    pub fn vs_pi(&self) -> i32 {
        if self.start == self.end {
            return 1;
        }
        -(self.start.cross(self.end).signum() as i32)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PolytopalCone {
    Empty,
    Full,
    /// Canonical: maximal open arcs sorted by start angle. Arcs may share an
    /// excluded endpoint; an arc with start == end is the circle minus one ray.
    Arcs(Vec<Arc>),
}

impl PolytopalCone {
    pub fn arcs(&self) -> &[Arc] {
        match self {
            PolytopalCone::Arcs(a) => a,
            _ => &[],
        }
    }

    pub fn to_direction_set(&self) -> DirectionSet {
        match self {
            PolytopalCone::Empty => DirectionSet::empty(),
            PolytopalCone::Full => DirectionSet::full(),
            PolytopalCone::Arcs(arcs) => arcs
                .iter()
                .fold(DirectionSet::empty(), |acc, a| acc.union(&DirectionSet::arc(a.start, a.end))),
        }
    }

    /// The open part of a direction set as a cone.
    pub fn from_open_part(s: &DirectionSet) -> PolytopalCone {
        // drop isolated member rays, keep gaps
        let open = DirectionSet::from_predicate(s.critical_rays(), |d| {
            let k = s.rays.binary_search(&d);
            match k {
                Ok(k) => {
                    let n = s.rays.len();
                    s.gap_in[k] && s.gap_in[(k + n - 1) % n] && s.ray_in[k]
                }
                Err(_) => s.contains(d),
            }
        });
        if open.is_full() {
            return PolytopalCone::Full;
        }
        if open.is_empty() {
            return PolytopalCone::Empty;
        }
        let mut arcs: Vec<Arc> = open.included_gaps().into_iter().map(|(a, b)| Arc::new(a, b)).collect();
        arcs.sort_by(|x, y| x.start.cmp(&y.start));
        PolytopalCone::Arcs(arcs)
    }

    pub fn contains_direction(&self, d: Direction) -> bool {
        match self {
            PolytopalCone::Empty => false,
            PolytopalCone::Full => true,
            PolytopalCone::Arcs(arcs) => arcs.iter().any(|a| a.contains(d)),
        }
    }

    /// Rays of the topological boundary, in angular order.
    pub fn boundary_rays(&self) -> Vec<Direction> {
        self.to_direction_set().critical_rays().to_vec()
    }

    pub fn on_boundary(&self, d: Direction) -> bool {
        self.boundary_rays().contains(&d)
    }

    pub fn neg(&self) -> PolytopalCone {
        PolytopalCone::from_open_part(&self.to_direction_set().antipode())
    }

    pub fn is_centrally_symmetric(&self) -> bool {
        *self == self.neg()
    }
}

pub fn normalize_cone(raw: &[Arc]) -> PolytopalCone {
    PolytopalCone::from_open_part(&PolytopalCone::Arcs(raw.to_vec()).to_direction_set())
}

pub fn contains_direction(c: &PolytopalCone, d: Direction) -> bool {
    c.contains_direction(d)
}

/// C minus (-C), keeping rays of C whose antipode is on the boundary.
pub fn r_set(c: &PolytopalCone) -> DirectionSet {
    let s = c.to_direction_set();
    s.difference(&s.antipode())
}

pub fn compute_r(c: &PolytopalCone) -> PolytopalCone {
    PolytopalCone::from_open_part(&r_set(c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GSpan {
    Dim0,
    /// The line, as its canonical direction.
    Dim1(Direction),
    /// Two non-parallel boundary lines.
    Dim2(Direction, Direction),
}

/// Boundary lines of C whose both rays lie on the boundary, canonical and sorted.
pub fn g_lines(c: &PolytopalCone) -> Vec<Direction> {
    let b = c.boundary_rays();
    let mut lines: Vec<Direction> =
        b.iter().filter(|d| b.contains(&d.neg())).map(|d| d.line_canonical()).collect();
    lines.sort();
    lines.dedup();
    lines
}

pub fn compute_g_span(c: &PolytopalCone) -> GSpan {
    let lines = g_lines(c);
    match lines.len() {
        0 => GSpan::Dim0,
        1 => GSpan::Dim1(lines[0]),
        _ => GSpan::Dim2(lines[0], lines[1]),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Nothing to separate (Full, Empty, or R empty).
    Trivial,
    /// Every direction of R has positive dot product with this normal.
    Normal(Direction),
    /// Directions of R whose positive combinations reach the span of G.
    Violation(Vec<Direction>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizabilityVerdict {
    pub realizable: bool,
    pub g_span: GSpan,
    pub r_cone: PolytopalCone,
    pub r_nonempty: bool,
    pub witness: Witness,
}

pub fn check_cone_condition(c: &PolytopalCone) -> RealizabilityVerdict {
    if matches!(c, PolytopalCone::Full | PolytopalCone::Empty) {
        return RealizabilityVerdict {
            realizable: true,
            g_span: GSpan::Dim0,
            r_cone: PolytopalCone::Empty,
            r_nonempty: false,
            witness: Witness::Trivial,
        };
    }
    let g_span = compute_g_span(c);
    let r = r_set(c);
    let r_cone = PolytopalCone::from_open_part(&r);
    let r_nonempty = !r.is_empty();
    let verdict = |realizable, witness| RealizabilityVerdict {
        realizable,
        g_span,
        r_cone: r_cone.clone(),
        r_nonempty,
        witness,
    };
    if !r_nonempty {
        return verdict(true, Witness::Trivial);
    }
    let starts: Vec<Direction> = match g_span {
        GSpan::Dim2(..) => vec![],
        GSpan::Dim1(g) => vec![g, g.neg()],
        GSpan::Dim0 => match r.open_half_witness() {
            Some(t) => vec![t],
            None => vec![],
        },
    };
    match starts.into_iter().find(|&t| r.inside_open_half(t)) {
        Some(t) => verdict(true, Witness::Normal(t.perp())),
        None => verdict(false, Witness::Violation(r.representatives())),
    }
}

/// Every direction except the boundary rays of C.
pub fn complement_of_boundary(c: &PolytopalCone) -> PolytopalCone {
    let b = c.boundary_rays();
    PolytopalCone::from_open_part(&DirectionSet::from_predicate(&b, |d| !b.contains(&d)))
}

/// The alternating fan: wedges between consecutive rays of `lines` (as full
/// lines through the origin), every other wedge taken, starting with the first.
pub fn alternating_fan(lines: &[Direction]) -> PolytopalCone {
    let mut rays: Vec<Direction> = lines.iter().flat_map(|d| [*d, d.neg()]).collect();
    rays.sort();
    rays.dedup();
    let n = rays.len();
    let arcs: Vec<Arc> = (0..n).step_by(2).map(|k| Arc::new(rays[k], rays[(k + 1) % n])).collect();
    normalize_cone(&arcs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: i64, y: i64) -> Direction {
        Direction::of(x, y)
    }

    fn arc(a: (i64, i64), b: (i64, i64)) -> Arc {
        Arc::new(d(a.0, a.1), d(b.0, b.1))
    }

    fn quadrant() -> PolytopalCone {
        normalize_cone(&[arc((1, 0), (0, 1))])
    }

    fn half_x() -> PolytopalCone {
        normalize_cone(&[arc((0, -1), (0, 1))])
    }

    pub(crate) fn three_fan() -> PolytopalCone {
        alternating_fan(&[d(1, 0), d(1, 1), d(-1, 1)])
    }

    #[test]
    fn normalize_examples() {
        let c = normalize_cone(&[arc((1, 0), (0, 1)), arc((0, 1), (-1, 0))]);
        assert_eq!(c.arcs().len(), 2);
        assert!(!c.contains_direction(d(0, 1)));
        let c = normalize_cone(&[arc((1, 0), (-1, 0)), arc((-1, 0), (1, 0))]);
        assert_eq!(c, PolytopalCone::Arcs(vec![arc((1, 0), (-1, 0)), arc((-1, 0), (1, 0))]));
        assert_eq!(normalize_cone(&[arc((1, 0), (0, 1)), arc((1, 0), (0, 1))]), quadrant());
        let merged = normalize_cone(&[arc((1, 0), (0, 1)), arc((1, 1), (-1, 0))]);
        assert_eq!(merged, PolytopalCone::Arcs(vec![arc((1, 0), (-1, 0))]));
        let full = normalize_cone(&[arc((1, 0), (-1, 1)), arc((0, 1), (1, 1))]);
        assert_eq!(full, PolytopalCone::Full);
    }

    #[test]
    fn contains_examples() {
        assert!(quadrant().contains_direction(d(1, 1)));
        assert!(!quadrant().contains_direction(d(1, 0)));
        assert!(PolytopalCone::Full.contains_direction(d(-3, 7)));
    }

    #[test]
    fn r_examples() {
        assert_eq!(compute_r(&quadrant()), quadrant());
        let cross = normalize_cone(&[arc((1, -1), (1, 1)), arc((-1, 1), (-1, -1))]);
        assert_eq!(compute_r(&cross), PolytopalCone::Empty);
        assert_eq!(compute_r(&half_x()), half_x());
    }

    #[test]
    fn g_span_examples() {
        assert_eq!(compute_g_span(&half_x()), GSpan::Dim1(d(0, 1)));
        assert!(matches!(compute_g_span(&three_fan()), GSpan::Dim2(..)));
        assert_eq!(g_lines(&three_fan()).len(), 3);
        assert_eq!(compute_g_span(&quadrant()), GSpan::Dim0);
    }

    #[test]
    fn checker_examples() {
        let v = check_cone_condition(&three_fan());
        assert!(!v.realizable);
        assert!(v.r_nonempty);
        assert!(matches!(v.witness, Witness::Violation(ref w) if !w.is_empty()));
        for m in 1..=3 {
            let lines: Vec<Direction> = (0..2 * m).map(|k| d(1, k - 2)).collect();
            let fan = alternating_fan(&lines);
            assert_eq!(fan.arcs().len(), 2 * m as usize);
            assert!(fan.is_centrally_symmetric(), "{m}");
            assert!(check_cone_condition(&fan).realizable, "{m}-fan");
        }
        let v = check_cone_condition(&half_x());
        assert!(v.realizable);
        assert_eq!(v.witness, Witness::Normal(d(1, 0)));
        assert!(check_cone_condition(&quadrant()).realizable);
    }

    #[test]
    fn complement_of_boundary_examples() {
        let c = complement_of_boundary(&quadrant());
        assert_eq!(c, PolytopalCone::Arcs(vec![arc((1, 0), (0, 1)), arc((0, 1), (1, 0))]));
        assert_eq!(complement_of_boundary(&PolytopalCone::Full), PolytopalCone::Full);
        assert_eq!(complement_of_boundary(&PolytopalCone::Empty), PolytopalCone::Full);
    }

    #[test]
    fn punctured_circle() {
        let c = normalize_cone(&[arc((1, 0), (1, 0))]);
        assert!(c.contains_direction(d(-1, 0)));
        assert!(!c.contains_direction(d(1, 0)));
        let v = check_cone_condition(&c);
        // R = the ray (-1, 0): realizable
        assert!(v.realizable);
    }

    #[test]
    fn reflex_arc_not_realizable_without_g() {
        // three quarters of the plane: R is the open quadrant x<0,y<0 plus ... R = C \ -C
        let c = normalize_cone(&[arc((1, 0), (0, -1))]);
        let v = check_cone_condition(&c);
        assert_eq!(v.g_span, GSpan::Dim0);
        assert!(v.realizable);
    }
}
