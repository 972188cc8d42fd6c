//! Constructing hinge functions with a prescribed positivity set: cones via the
//! symmetric-profile machinery, triangles, convex polygons and complements of
//! polygon boundaries. Every result is checked against the exact oracle.

use std::collections::BTreeSet;

use num::{FromPrimitive, One, Signed, Zero};
use thiserror::Error;

use crate::cone::{check_cone_condition, gap_samples, GSpan, PolytopalCone};
use crate::exact::{
    int, nullspace, rat, sample_inside_arc, strictly_between, AffineForm, Direction, Point2, RatMatrix,
    Rational, Vec2,
};
use crate::hinge::{decompose_symmetric, peel_to_hinge, HingeError, HingeFunction, PosHomCPWL};
use crate::planar::{
    build_arrangement, classify_point, cone_to_set, local_cone, positivity_set, set_equal, Arrangement,
    ConvexCell, Endpoint, PlanarError, PointClass, PolytopalSet,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("the set is not a positivity set")]
    NotRealizable,
    #[error("triangle vertices are collinear")]
    DegenerateTriangle,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("no epsilon found after {0} halvings")]
    EpsilonSearchExhausted(usize),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Hinge(#[from] HingeError),
}

impl From<PlanarError> for SynthError {
    fn from(e: PlanarError) -> Self {
        SynthError::DegenerateInput(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SegmentCase {
    /// p and -p both in C.
    BothIn,
    /// Neither p nor -p in C.
    BothOut,
    /// p in C, -p not.
    OneSided,
}

impl SegmentCase {
    pub fn number(self) -> u8 {
        match self {
            SegmentCase::BothIn => 1,
            SegmentCase::BothOut => 2,
            SegmentCase::OneSided => 3,
        }
    }

    /// The formula for s on the inserted ray r.
    pub fn value_rule(self) -> &'static str {
        match self {
            SegmentCase::BothIn => "(v+e).r",
            SegmentCase::BothOut => "(v-e).r",
            SegmentCase::OneSided => "0",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCase {
    /// p on the boundary of C, -p not: s = -e.p
    A,
    /// p in C, -p on the boundary: s = e.p
    B,
    /// Both on the boundary: s = 0
    C,
}

impl BoundaryCase {
    pub fn letter(self) -> char {
        match self {
            BoundaryCase::A => 'A',
            BoundaryCase::B => 'B',
            BoundaryCase::C => 'C',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub start_ray: Direction,
    pub end_ray: Direction,
    pub case: Option<SegmentCase>,
    pub inserted_ray: Direction,
}

/// pi is the open half-plane swept counterclockwise from `boundary_line` to its
/// negation; its inward normal is perp(boundary_line).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisFrame {
    pub g_span: GSpan,
    pub pi_normal: Direction,
    pub e: Vec2,
    pub boundary_line: Direction,
    pub segments: Vec<Segment>,
    pub segment_boundary_rays: Vec<(Direction, Option<BoundaryCase>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricProfile {
    /// s at the primitive point of each ray, sorted by angle.
    pub rays: Vec<(Direction, Rational)>,
}

impl SymmetricProfile {
    pub fn to_poshom(&self) -> Result<PosHomCPWL, HingeError> {
        PosHomCPWL::from_ray_values(&self.rays)
    }
}

/// Frame, cases and profile behind a synthesized cone function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeTrace {
    pub frame: SynthesisFrame,
    pub profile: SymmetricProfile,
}

pub fn choose_frame(c: &PolytopalCone) -> Result<SynthesisFrame, SynthError> {
    if matches!(c, PolytopalCone::Full | PolytopalCone::Empty) {
        return Err(SynthError::DegenerateInput("frame of the full or empty cone".into()));
    }
    let verdict = check_cone_condition(c);
    if !verdict.realizable {
        return Err(SynthError::NotRealizable);
    }
    let r = crate::cone::r_set(c);
    let (u, e_zero) = match verdict.g_span {
        GSpan::Dim2(g, _) => (g, true),
        GSpan::Dim1(g) => {
            let u = if r.inside_open_half(g) { g } else { g.neg() };
            (u, false)
        }
        GSpan::Dim0 => {
            let mut k: Vec<Direction> = c.boundary_rays().iter().flat_map(|d| [*d, d.neg()]).collect();
            k.sort();
            k.dedup();
            let u = gap_samples(&k)
                .into_iter()
                .find(|&t| r.inside_open_half(t))
                .ok_or_else(|| SynthError::InternalInconsistency("no frame line avoids the boundary".into()))?;
            (u, false)
        }
    };
    if !r.inside_open_half(u) {
        return Err(SynthError::InternalInconsistency("R does not fit in the chosen half-plane".into()));
    }
    let normal = u.perp();
    let e = if e_zero { Vec2::zero() } else { normal.to_vec() };
    Ok(SynthesisFrame {
        g_span: verdict.g_span,
        pi_normal: normal,
        e,
        boundary_line: u,
        segments: vec![],
        segment_boundary_rays: vec![],
    })
}

pub fn classify_segments(c: &PolytopalCone, frame: &SynthesisFrame) -> Result<SynthesisFrame, SynthError> {
    let u = frame.boundary_line;
    let end = u.neg();
    let boundary = c.boundary_rays();
    let on_b = |d: Direction| boundary.contains(&d);
    let inside = |d: Direction| c.contains_direction(d);
    let mut splits: Vec<Direction> = boundary
        .iter()
        .flat_map(|d| [*d, d.neg()])
        .filter(|&d| strictly_between(u, end, d))
        .collect();
    splits.sort_by(|a, b| Direction::cmp_from(u, *a, *b));
    splits.dedup();

    let mut rays = vec![u];
    rays.extend(splits.iter().copied());
    rays.push(end);
    let mut segments = Vec::new();
    for w in rays.windows(2) {
        let p = sample_inside_arc(w[0], w[1]).map_err(|e| SynthError::InternalInconsistency(e.to_string()))?;
        let case = match (inside(p), inside(p.neg())) {
            (true, true) => SegmentCase::BothIn,
            (false, false) => SegmentCase::BothOut,
            (true, false) => SegmentCase::OneSided,
            (false, true) => {
                return Err(SynthError::InternalInconsistency(format!("segment at {p} leaves C while -p is in C")))
            }
        };
        if case == SegmentCase::OneSided && frame.e.is_zero() {
            return Err(SynthError::InternalInconsistency("one-sided segment with e = 0".into()));
        }
        segments.push(Segment { start_ray: w[0], end_ray: w[1], case: Some(case), inserted_ray: p });
    }

    let mut boundary_rays = Vec::new();
    for (i, &d) in splits.iter().enumerate() {
        let case = match (on_b(d), on_b(d.neg())) {
            (true, false) => BoundaryCase::A,
            (true, true) => BoundaryCase::C,
            (false, true) if inside(d) => BoundaryCase::B,
            _ => return Err(SynthError::InternalInconsistency(format!("ray {d} has no boundary case"))),
        };
        let forbidden = match case {
            BoundaryCase::A => SegmentCase::BothIn,
            BoundaryCase::B => SegmentCase::BothOut,
            BoundaryCase::C => SegmentCase::OneSided,
        };
        if segments[i].case == Some(forbidden) || segments[i + 1].case == Some(forbidden) {
            return Err(SynthError::InternalInconsistency(format!(
                "forbidden combination {}{} at {d}",
                forbidden.number(),
                case.letter()
            )));
        }
        boundary_rays.push((d, Some(case)));
    }

    if frame.g_span == GSpan::Dim0 {
        let first = segments[0].case;
        let last = segments[segments.len() - 1].case;
        if first != last || first == Some(SegmentCase::OneSided) {
            return Err(SynthError::InternalInconsistency("extremal segments disagree".into()));
        }
    }
    Ok(SynthesisFrame { segments, segment_boundary_rays: boundary_rays, ..frame.clone() })
}

pub fn build_symmetric_profile(frame: &SynthesisFrame) -> Result<SymmetricProfile, SynthError> {
    let e = &frame.e;
    let mut half: Vec<(Direction, Rational)> = Vec::new();
    let u = frame.boundary_line;
    let pi_value = match frame.g_span {
        GSpan::Dim0 => {
            let uu = u.to_vec().dot(&u.to_vec());
            match frame.segments.first().and_then(|s| s.case) {
                Some(SegmentCase::BothIn) => uu,
                Some(SegmentCase::BothOut) => -uu,
                _ => return Err(SynthError::InternalInconsistency("unclassified extremal segment".into())),
            }
        }
        _ => Rational::zero(),
    };
    half.push((u, pi_value.clone()));
    half.push((u.neg(), pi_value));
    for (d, case) in &frame.segment_boundary_rays {
        let p = d.to_vec();
        let v = match case {
            Some(BoundaryCase::A) => -e.dot(&p),
            Some(BoundaryCase::B) => e.dot(&p),
            Some(BoundaryCase::C) => Rational::zero(),
            None => return Err(SynthError::InternalInconsistency(format!("ray {d} unclassified"))),
        };
        half.push((*d, v));
    }
    for s in &frame.segments {
        let r = s.inserted_ray.to_vec();
        let v = match s.case {
            Some(SegmentCase::BothIn) => {
                let v = if e.is_zero() { r.clone() } else { e.clone() };
                v.add(e).dot(&r)
            }
            Some(SegmentCase::BothOut) => {
                let v = if e.is_zero() { r.neg() } else { e.neg() };
                v.sub(e).dot(&r)
            }
            Some(SegmentCase::OneSided) => Rational::zero(),
            None => return Err(SynthError::InternalInconsistency("segment unclassified".into())),
        };
        half.push((s.inserted_ray, v));
    }
    let mut rays: Vec<(Direction, Rational)> = Vec::new();
    for (d, v) in half {
        rays.push((d, v.clone()));
        if d != u && d != u.neg() {
            rays.push((d.neg(), v));
        }
    }
    rays.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(SymmetricProfile { rays })
}

/// Checks each segment's inequality between s and e.p at its rays and at
/// midpoints between consecutive rays.
pub fn profile_satisfies_cases(frame: &SynthesisFrame, profile: &SymmetricProfile) -> bool {
    let Ok(s) = profile.to_poshom() else { return false };
    let e = &frame.e;
    for seg in &frame.segments {
        let mut dirs = vec![seg.inserted_ray];
        for (a, b) in [(seg.start_ray, seg.inserted_ray), (seg.inserted_ray, seg.end_ray)] {
            let m = a.to_vec().add(&b.to_vec());
            if let Ok(d) = Direction::from_vec(&m) {
                dirs.push(d);
            }
        }
        for d in dirs {
            let p = d.to_vec();
            let sv = s.evaluate(&p);
            let ep = e.dot(&p);
            let ok = match seg.case {
                Some(SegmentCase::BothIn) => sv > ep,
                Some(SegmentCase::BothOut) => sv <= -ep,
                Some(SegmentCase::OneSided) => -ep.clone() < sv && sv <= ep,
                None => false,
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

pub fn synthesize_cone(c: &PolytopalCone) -> Result<HingeFunction, SynthError> {
    synthesize_cone_traced(c).map(|(h, _)| h)
}

pub fn synthesize_cone_traced(c: &PolytopalCone) -> Result<(HingeFunction, Option<ConeTrace>), SynthError> {
    match c {
        PolytopalCone::Full => return Ok((HingeFunction::affine(AffineForm::constant(int(1))), None)),
        PolytopalCone::Empty => return Ok((HingeFunction::affine(AffineForm::constant(int(-1))), None)),
        _ => {}
    }
    let frame = choose_frame(c)?;
    let frame = classify_segments(c, &frame)?;
    let profile = build_symmetric_profile(&frame)?;
    let f = profile.to_poshom()?.add_linear(&frame.e);
    let dec = decompose_symmetric(&f)?;
    let h = peel_to_hinge(&dec)?;
    if !set_equal(&positivity_set(&h), &cone_to_set(c)).is_equal() {
        return Err(SynthError::InternalInconsistency("synthesized function misses the cone".into()));
    }
    Ok((h, Some(ConeTrace { frame, profile })))
}

/// Rows of the evaluation matrix over the basis (1, x, y, |L1|, ..., |Lk|).
fn basis_row(lines: &[AffineForm], p: &Point2) -> Vec<Rational> {
    let mut row = vec![int(1), p.x.clone(), p.y.clone()];
    row.extend(lines.iter().map(|l| l.eval(p).abs()));
    row
}

fn hinge_from_coefficients(lines: &[AffineForm], v: &[Rational]) -> HingeFunction {
    let base = AffineForm::new(v[1].clone(), v[2].clone(), v[0].clone());
    let terms = lines.iter().zip(&v[3..]).map(|(l, c)| (c.clone(), l.clone())).collect();
    HingeFunction::from_weighted(base, terms)
}

/// A basis of coefficient vectors (c0, cx, cy, c1, ..., ck) whose combination
/// c0 + cx x + cy y + sum ci |Li| vanishes at every zero point.
pub fn coefficient_space(lines: &[AffineForm], zero_points: &[Point2]) -> Vec<Vec<Rational>> {
    let cols = 3 + lines.len();
    if zero_points.is_empty() {
        let id = RatMatrix::identity(cols);
        return (0..cols).map(|r| id.row(r).to_vec()).collect();
    }
    let m = RatMatrix::from_rows(zero_points.iter().map(|p| basis_row(lines, p)).collect(), cols);
    nullspace(&m)
}

pub fn solve_hinge_coefficients(lines: &[AffineForm], zero_points: &[Point2]) -> Vec<HingeFunction> {
    coefficient_space(lines, zero_points).iter().map(|v| hinge_from_coefficients(lines, v)).collect()
}

/// x + y - 2|x - y| - |x + 2y - 2| - |2x + y - 2| + 2|x - 1| + 2|y - 1|, positive
/// exactly on the open triangle (0,0), (2,0), (0,2).
pub fn reference_triangle() -> HingeFunction {
    let f = AffineForm::ints;
    HingeFunction::from_weighted(
        f(1, 1, 0),
        vec![
            (int(-2), f(1, -1, 0)),
            (int(-1), f(1, 2, -2)),
            (int(-1), f(2, 1, -2)),
            (int(2), f(1, 0, -1)),
            (int(2), f(0, 1, -1)),
        ],
    )
}

pub fn synthesize_triangle(v1: &Point2, v2: &Point2, v3: &Point2) -> Result<HingeFunction, SynthError> {
    let a = v2.sub(v1).scale(&rat(1, 2));
    let b = v3.sub(v1).scale(&rat(1, 2));
    let det = a.cross(&b);
    if det.is_zero() {
        return Err(SynthError::DegenerateTriangle);
    }
    // T(x) = v1 + [a b] x; compose with T^-1(y) = M^-1 (y - v1)
    let inv = [b.y.clone() / &det, -b.x.clone() / &det, -a.y.clone() / &det, a.x.clone() / &det];
    let t = Vec2::new(
        -(inv[0].clone() * &v1.x + inv[1].clone() * &v1.y),
        -(inv[2].clone() * &v1.x + inv[3].clone() * &v1.y),
    );
    let h = reference_triangle().compose(&inv, &t);
    let cell = ConvexCell::new(vec![
        AffineForm::through(v1, &v2.sub(v1)),
        AffineForm::through(v2, &v3.sub(v2)),
        AffineForm::through(v3, &v1.sub(v3)),
    ]
    .into_iter()
    .map(|l| if det.is_positive() { l } else { l.neg() })
    .collect())?;
    verify(&h, &PolytopalSet::new(vec![cell]))?;
    Ok(h)
}

fn verify(h: &HingeFunction, target: &PolytopalSet) -> Result<(), SynthError> {
    if set_equal(&positivity_set(h), target).is_equal() {
        Ok(())
    } else {
        Err(SynthError::InternalInconsistency(format!("positivity set of {h} differs from the target")))
    }
}

/// The corners and edge lines of a convex cell, read off the arrangement of its
/// own constraint lines.
#[derive(Debug, Clone)]
pub struct PolygonShape {
    /// Counterclockwise corners.
    pub corners: Vec<Point2>,
    /// Edge lines, positive inside.
    pub edges: Vec<AffineForm>,
    pub bounded: bool,
}

pub fn polygon_shape(p: &ConvexCell) -> Result<PolygonShape, SynthError> {
    let arr = build_arrangement(p.constraints());
    let fi = arr
        .faces
        .iter()
        .position(|f| p.contains(&f.sample))
        .ok_or_else(|| SynthError::DegenerateInput("cell has no interior face".into()))?;
    let face = &arr.faces[fi];
    let corner_pts: BTreeSet<Point2> = face.vertices.iter().map(|&v| arr.vertices[v].point.clone()).collect();
    // start right after the frame so consecutive corners share an edge
    let poly = &face.polygon;
    let n = poly.len();
    let start = (0..n)
        .find(|&i| corner_pts.contains(&poly[i]) && !corner_pts.contains(&poly[(i + n - 1) % n]))
        .unwrap_or(0);
    let corners: Vec<Point2> =
        (0..n).map(|k| &poly[(start + k) % n]).filter(|q| corner_pts.contains(q)).cloned().collect();
    let edges = arr.face_constraints(fi);
    Ok(PolygonShape { corners, edges, bounded: !face.unbounded })
}

/// Positivity-set synthesis for an open convex polygon, bounded or not.
pub fn synthesize_convex_polygon(p: &ConvexCell) -> Result<HingeFunction, SynthError> {
    let shape = polygon_shape(p)?;
    let target = PolytopalSet::new(vec![p.clone()]);
    let h = match (shape.corners.len(), shape.bounded) {
        (3, true) => return synthesize_triangle(&shape.corners[0], &shape.corners[1], &shape.corners[2]),
        (0, _) => match shape.edges.as_slice() {
            [l] => HingeFunction::affine(l.clone()),
            [l1, l2] => HingeFunction::from_weighted(
                l1.add(l2).scale(&rat(1, 2)),
                vec![(rat(-1, 2), l1.sub(l2))],
            ),
            _ => return Err(SynthError::DegenerateInput("unexpected cell without corners".into())),
        },
        (1, false) => {
            let v = &shape.corners[0];
            let c = local_cone(&target, v);
            synthesize_cone(&c)?.compose(&[int(1), int(0), int(0), int(1)], &v.neg())
        }
        _ => lp_polygon(&shape, &target)?,
    };
    verify(&h, &target)?;
    Ok(h)
}

fn dedup_lines(lines: Vec<AffineForm>) -> Vec<AffineForm> {
    let mut seen = BTreeSet::new();
    lines.into_iter().filter(|l| !l.is_constant() && seen.insert(l.line_key())).map(|l| l.line_key()).collect()
}

fn candidate_lines(shape: &PolygonShape, round: usize) -> Vec<AffineForm> {
    let mut lines: Vec<AffineForm> = shape.edges.clone();
    let cs = &shape.corners;
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            lines.push(AffineForm::through(&cs[i], &cs[j].sub(&cs[i])));
        }
    }
    for (i, a) in shape.edges.iter().enumerate() {
        for b in &shape.edges[i + 1..] {
            if a.gradient().cross(&b.gradient()).is_zero() {
                lines.push(a.line_key().sub(&b.line_key()).line_key());
                lines.push(a.line_key().add(&b.line_key()).line_key());
            }
        }
    }
    if !shape.bounded {
        for e in &shape.edges {
            let d = e.gradient().perp();
            for c in cs {
                lines.push(AffineForm::through(c, &d));
            }
        }
    }
    let dirs: &[(i64, i64)] = match round {
        0 => &[],
        1 => &[(1, 0), (0, 1), (1, 1), (1, -1)],
        _ => &[(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1)],
    };
    let mut anchors = cs.clone();
    if round > 0 {
        let n = cs.len();
        let closed = if shape.bounded { n } else { n.saturating_sub(1) };
        anchors.extend((0..closed).map(|i| cs[i].midpoint(&cs[(i + 1) % n])));
    }
    for c in &anchors {
        for &(dx, dy) in dirs {
            lines.push(AffineForm::through(c, &Vec2::ints(dx, dy)));
        }
    }
    dedup_lines(lines)
}

fn lp_polygon(shape: &PolygonShape, target: &PolytopalSet) -> Result<HingeFunction, SynthError> {
    for round in 0..3 {
        let lines = candidate_lines(shape, round);
        let arr = build_arrangement(&lines);
        let rows = sign_rows(&arr, target);
        if let Some(v) = solve_feasibility(&rows, 3 + lines.len()) {
            let h = hinge_from_coefficients(&arr.lines, &v);
            if set_equal(&positivity_set(&h), target).is_equal() {
                return Ok(h);
            }
        }
    }
    Err(SynthError::ConstructionFailed("no sign-feasible combination of the candidate lines".into()))
}

/// row . y >= rhs (`ge`) or row . y <= rhs.
#[derive(Debug, Clone)]
struct LinRow {
    coef: Vec<Rational>,
    ge: bool,
    rhs: Rational,
}

/// Linear conditions on the coefficients making the hinge function positive
/// exactly on the cells of the arrangement inside `target`.
fn sign_rows(arr: &Arrangement, target: &PolytopalSet) -> Vec<LinRow> {
    let lines = &arr.lines;
    let mut rows = Vec::new();
    let at_least = |coef, rhs: i64| LinRow { coef, ge: true, rhs: int(rhs) };
    let at_most = |coef| LinRow { coef, ge: false, rhs: int(0) };
    let face_in: Vec<bool> =
        arr.faces.iter().map(|f| classify_point(target, &f.sample) == PointClass::Interior).collect();
    for v in &arr.vertices {
        let row = basis_row(lines, &v.point);
        if classify_point(target, &v.point) == PointClass::Interior {
            rows.push(at_least(row, 1));
        } else {
            if v.faces.iter().any(|&f| face_in[f]) {
                rows.push(at_least(row.clone(), 0));
            }
            rows.push(at_most(row));
        }
    }
    for e in &arr.edges {
        let row = basis_row(lines, &e.sample);
        if classify_point(target, &e.sample) == PointClass::Interior {
            rows.push(at_least(row, 1));
        } else {
            if e.faces.iter().any(|&f| face_in[f]) {
                rows.push(at_least(row.clone(), 0));
            }
            rows.push(at_most(row));
        }
    }
    for (fi, f) in arr.faces.iter().enumerate() {
        let sample_row = basis_row(lines, &f.sample);
        let signs: Vec<Rational> =
            lines.iter().map(|l| if l.eval(&f.sample).is_positive() { int(1) } else { int(-1) }).collect();
        let mut dirs: Vec<Vec2> = Vec::new();
        for &ei in &f.edges {
            let e = &arr.edges[ei];
            let pt = |end: &Endpoint| match end {
                Endpoint::Vertex(v) => arr.vertices[*v].point.clone(),
                Endpoint::Frame(q) => q.clone(),
            };
            match (&e.ends[0], &e.ends[1]) {
                (Endpoint::Vertex(_), Endpoint::Frame(q)) => dirs.push(q.sub(&pt(&e.ends[0]))),
                (Endpoint::Frame(q), Endpoint::Vertex(_)) => dirs.push(q.sub(&pt(&e.ends[1]))),
                (Endpoint::Frame(a), Endpoint::Frame(b)) => {
                    dirs.push(a.sub(b));
                    dirs.push(b.sub(a));
                }
                _ => {}
            }
        }
        if f.lines.len() == 1 {
            let l = &lines[f.lines[0]];
            dirs.push(if l.eval(&f.sample).is_positive() { l.gradient() } else { l.gradient().neg() });
        }
        for d in dirs {
            let mut row = vec![int(0), d.x.clone(), d.y.clone()];
            row.extend(lines.iter().zip(&signs).map(|(l, s)| s * (&l.a * &d.x + &l.b * &d.y)));
            if face_in[fi] {
                rows.push(at_least(row, 0));
            } else {
                rows.push(at_most(row));
            }
        }
        if face_in[fi] {
            rows.push(at_least(sample_row, 1));
        } else {
            rows.push(at_most(sample_row));
        }
    }
    rows
}

fn to_f64(r: &Rational) -> f64 {
    crate::exact::to_f64(r)
}

fn approx_rational(x: f64) -> Rational {
    let scale = 1i64 << 24;
    Rational::new(num::BigInt::from_f64((x * scale as f64).round()).unwrap_or_default(), num::BigInt::from(scale))
}

/// An exact solution of the rows, located with a floating-point LP and then
/// recomputed exactly from the constraints the float solution makes tight.
fn solve_feasibility(rows: &[LinRow], n: usize) -> Option<Vec<Rational>> {
    let mut lp = minilp::Problem::new(minilp::OptimizationDirection::Minimize);
    let vars: Vec<minilp::Variable> = (0..n).map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY))).collect();
    for r in rows {
        let expr: Vec<(minilp::Variable, f64)> =
            vars.iter().zip(&r.coef).filter(|(_, c)| !c.is_zero()).map(|(v, c)| (*v, to_f64(c))).collect();
        let op = if r.ge { minilp::ComparisonOp::Ge } else { minilp::ComparisonOp::Le };
        lp.add_constraint(expr.as_slice(), op, to_f64(&r.rhs));
    }
    let sol = lp.solve().ok()?;
    let y: Vec<f64> = vars.iter().map(|v| sol[*v]).collect();
    let holds = |v: &[Rational]| {
        rows.iter().all(|r| {
            let lhs: Rational = r.coef.iter().zip(v).map(|(a, b)| a * b).sum();
            if r.ge {
                lhs >= r.rhs
            } else {
                lhs <= r.rhs
            }
        })
    };
    for tol in [1e-9, 1e-7, 1e-5, 1e-3] {
        let tight: Vec<&LinRow> = rows
            .iter()
            .filter(|r| {
                let lhs: f64 = r.coef.iter().zip(&y).map(|(a, b)| to_f64(a) * b).sum();
                let scale = 1.0 + r.coef.iter().map(|a| to_f64(a).abs()).fold(0.0, f64::max);
                (lhs - to_f64(&r.rhs)).abs() <= tol * scale * (1.0 + y.iter().fold(0.0f64, |m, v| m.max(v.abs())))
            })
            .collect();
        if let Some(v) = solve_pinned(&tight, &y, n) {
            if holds(&v) {
                return Some(v);
            }
        }
    }
    let rounded: Vec<Rational> = y.iter().map(|v| approx_rational(*v)).collect();
    holds(&rounded).then_some(rounded)
}

/// Solves the tight rows as equalities; variables left free take rounded values
/// of the float solution.
fn solve_pinned(tight: &[&LinRow], y: &[f64], n: usize) -> Option<Vec<Rational>> {
    let mut aug: Vec<Vec<Rational>> = tight
        .iter()
        .map(|r| {
            let mut row = r.coef.clone();
            row.push(r.rhs.clone());
            row
        })
        .collect();
    if aug.is_empty() {
        aug.push(vec![Rational::zero(); n + 1]);
    }
    let (m, pivots) = RatMatrix::from_rows(aug, n + 1).rref();
    if pivots.contains(&n) {
        return None;
    }
    let mut v: Vec<Rational> = vec![Rational::zero(); n];
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    for &c in &free {
        v[c] = approx_rational(y[c]);
    }
    for (r, &pc) in pivots.iter().enumerate() {
        let mut val = m.get(r, n).clone();
        for &c in &free {
            val -= m.get(r, c) * &v[c];
        }
        v[pc] = val;
    }
    Some(v)
}

/// The complement of the polygon's boundary as a polytopal set.
pub fn boundary_complement_set(p: &ConvexCell) -> Result<PolytopalSet, SynthError> {
    let shape = polygon_shape(p)?;
    let mut cells = vec![p.clone()];
    for e in &shape.edges {
        cells.push(ConvexCell::new(vec![e.neg()])?);
    }
    Ok(PolytopalSet::new(cells))
}

/// f + eps g with f the sum of ramps outside each edge and g a polygon witness.
pub fn synthesize_boundary_complement(p: &ConvexCell) -> Result<HingeFunction, SynthError> {
    const MAX_HALVINGS: usize = 64;
    let shape = polygon_shape(p)?;
    let target = boundary_complement_set(p)?;
    // (|H| - H)/2 vanishes on the polygon side and grows linearly outside
    let ramps = shape
        .edges
        .iter()
        .fold(HingeFunction::affine(AffineForm::zero()), |acc, h| {
            acc.add(&HingeFunction::from_weighted(h.scale(&rat(-1, 2)), vec![(rat(1, 2), h.clone())]))
        });
    let g = synthesize_convex_polygon(p)?;
    let mut eps = Rational::one();
    for _ in 0..=MAX_HALVINGS {
        let h = ramps.add(&g.scale(&eps));
        if set_equal(&positivity_set(&h), &target).is_equal() {
            return Ok(h);
        }
        eps /= int(2);
    }
    Err(SynthError::EpsilonSearchExhausted(MAX_HALVINGS))
}

/// Convex polygon from counterclockwise or clockwise vertices.
pub fn polygon_from_vertices(vs: &[Point2]) -> Result<ConvexCell, SynthError> {
    if vs.len() < 3 {
        return Err(SynthError::DegenerateInput("a polygon needs three vertices".into()));
    }
    let area: Rational = (0..vs.len()).map(|i| vs[i].cross(&vs[(i + 1) % vs.len()])).sum();
    if area.is_zero() {
        return Err(SynthError::DegenerateInput("vertices are collinear".into()));
    }
    let mut vs = vs.to_vec();
    if area.is_negative() {
        vs.reverse();
    }
    Ok(crate::planar::polygon_cell(&vs)?)
}
