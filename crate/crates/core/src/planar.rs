//! Open polytopal sets in the plane and the exact line-arrangement oracle.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num::{Signed, Zero};
use thiserror::Error;

use crate::cone::{check_cone_condition, DirectionSet, PolytopalCone, RealizabilityVerdict};
use crate::exact::{int, line_intersection, rat, sign, AffineForm, Direction, Point2, Rational, Vec2};
use crate::hinge::HingeFunction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanarError {
    #[error("cell has empty interior")]
    EmptyCell,
    #[error("zero form given as a line")]
    ZeroLine,
}

/// {p : every constraint is positive at p}, with nonempty interior.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConvexCell {
    constraints: Vec<AffineForm>,
}

impl ConvexCell {
    /// Drops always-true constant constraints and positive multiples of repeats;
    /// rejects cells with empty interior.
    pub fn new(constraints: Vec<AffineForm>) -> Result<ConvexCell, PlanarError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for c in constraints {
            if c.is_constant() {
                if c.c.is_positive() {
                    continue;
                }
                return Err(PlanarError::EmptyCell);
            }
            if seen.insert(c.half_plane_key()) {
                out.push(c);
            }
        }
        if !has_interior(&out) {
            return Err(PlanarError::EmptyCell);
        }
        Ok(ConvexCell { constraints: out })
    }

    /// The whole plane.
    pub fn plane() -> ConvexCell {
        ConvexCell { constraints: vec![] }
    }

    pub fn constraints(&self) -> &[AffineForm] {
        &self.constraints
    }

    pub fn contains(&self, p: &Point2) -> bool {
        self.constraints.iter().all(|c| c.eval(p).is_positive())
    }

    pub fn closure_contains(&self, p: &Point2) -> bool {
        self.constraints.iter().all(|c| !c.eval(p).is_negative())
    }
}

/// Frame half-width enclosing all pairwise intersections and every line's point
/// nearest the origin.
fn frame_size(lines: &[AffineForm]) -> Rational {
    let mut m = Rational::zero();
    let mut bump = |p: &Point2| {
        for v in [&p.x, &p.y] {
            if v.abs() > m {
                m = v.abs();
            }
        }
    };
    for (i, l) in lines.iter().enumerate() {
        bump(&nearest_point(l));
        for l2 in &lines[i + 1..] {
            if let Some(p) = line_intersection(l, l2) {
                bump(&p);
            }
        }
    }
    m * int(2) + int(1)
}

fn nearest_point(l: &AffineForm) -> Point2 {
    let n2 = &l.a * &l.a + &l.b * &l.b;
    Vec2::new(-&l.a * &l.c / &n2, -&l.b * &l.c / &n2)
}

fn square(m: &Rational) -> Vec<Point2> {
    vec![
        Vec2::new(-m.clone(), -m.clone()),
        Vec2::new(m.clone(), -m.clone()),
        Vec2::new(m.clone(), m.clone()),
        Vec2::new(-m.clone(), m.clone()),
    ]
}

/// Keeps the part of a convex polygon where `f >= 0`.
fn clip(poly: &[Point2], f: &AffineForm) -> Vec<Point2> {
    let n = poly.len();
    let mut out = Vec::new();
    for i in 0..n {
        let p = &poly[i];
        let q = &poly[(i + 1) % n];
        let fp = f.eval(p);
        let fq = f.eval(q);
        if !fp.is_negative() {
            out.push(p.clone());
        }
        if (fp.is_positive() && fq.is_negative()) || (fp.is_negative() && fq.is_positive()) {
            let t = &fp / (&fp - &fq);
            out.push(p.add(&q.sub(p).scale(&t)));
        }
    }
    out
}

fn twice_area(poly: &[Point2]) -> Rational {
    let n = poly.len();
    (0..n).map(|i| poly[i].cross(&poly[(i + 1) % n])).sum()
}

fn has_interior(constraints: &[AffineForm]) -> bool {
    let m = frame_size(constraints);
    let mut poly = square(&m);
    for c in constraints {
        poly = clip(&poly, c);
        if poly.len() < 3 {
            return false;
        }
    }
    twice_area(&poly).is_positive()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PolytopalSet {
    cells: Vec<ConvexCell>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointClass {
    Interior,
    Boundary,
    Exterior,
}

/// Cells rewritten over a shared list of distinct lines, for fast classification.
#[derive(Debug, Clone)]
pub struct SetIndex {
    pub lines: Vec<AffineForm>,
    /// (line index, required sign) per constraint.
    pub cells: Vec<Vec<(usize, i8)>>,
}

impl SetIndex {
    pub fn line_signs(&self, p: &Point2) -> Vec<i8> {
        self.lines.iter().map(|l| sign(&l.eval(p)) as i8).collect()
    }

    pub fn classify_signs(&self, s: &[i8]) -> PointClass {
        if self.cells.iter().any(|c| c.iter().all(|&(i, r)| s[i] == r)) {
            PointClass::Interior
        } else if self.cells.iter().any(|c| c.iter().all(|&(i, r)| s[i] == r || s[i] == 0)) {
            PointClass::Boundary
        } else {
            PointClass::Exterior
        }
    }

    pub fn classify(&self, p: &Point2) -> PointClass {
        self.classify_signs(&self.line_signs(p))
    }
}

impl PolytopalSet {
    pub fn new(cells: Vec<ConvexCell>) -> Self {
        PolytopalSet { cells }
    }

    pub fn empty() -> Self {
        PolytopalSet { cells: vec![] }
    }

    pub fn plane() -> Self {
        PolytopalSet { cells: vec![ConvexCell::plane()] }
    }

    pub fn cells(&self) -> &[ConvexCell] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Distinct lines of all constraints, canonical and sorted.
    pub fn lines(&self) -> Vec<AffineForm> {
        let set: BTreeSet<AffineForm> =
            self.cells.iter().flat_map(|c| c.constraints.iter().map(|f| f.line_key())).collect();
        set.into_iter().collect()
    }

    pub fn index(&self) -> SetIndex {
        let lines = self.lines();
        let cells = self
            .cells
            .iter()
            .map(|c| {
                c.constraints
                    .iter()
                    .map(|f| {
                        let k = f.line_key();
                        let i = lines.binary_search(&k).expect("line present");
                        let s = if f.half_plane_key() == k { 1 } else { -1 };
                        (i, s)
                    })
                    .collect()
            })
            .collect();
        SetIndex { lines, cells }
    }

    /// Image under x -> m x + t for invertible m (row-major).
    pub fn transform(&self, m: &[Rational; 4], t: &Vec2) -> PolytopalSet {
        // constraint f(x) > 0 becomes f(T^-1 y) > 0
        let det = &m[0] * &m[3] - &m[1] * &m[2];
        let inv = [&m[3] / &det, -&m[1] / &det, -&m[2] / &det, &m[0] / &det];
        let tinv = Vec2::new(-(&inv[0] * &t.x + &inv[1] * &t.y), -(&inv[2] * &t.x + &inv[3] * &t.y));
        PolytopalSet {
            cells: self
                .cells
                .iter()
                .map(|c| ConvexCell { constraints: c.constraints.iter().map(|f| f.compose(&inv, &tinv)).collect() })
                .collect(),
        }
    }
}

pub fn classify_point(p_set: &PolytopalSet, p: &Point2) -> PointClass {
    p_set.index().classify(p)
}

/// One endpoint of an arrangement edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Endpoint {
    Vertex(usize),
    /// The edge continues to infinity; the point is where it leaves the frame.
    Frame(Point2),
}

#[derive(Debug, Clone)]
pub struct ArrVertex {
    pub point: Point2,
    pub lines: Vec<usize>,
    pub faces: Vec<usize>,
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ArrEdge {
    pub line: usize,
    pub ends: [Endpoint; 2],
    pub sample: Point2,
    /// Face left of ends[0] -> ends[1], then face on the right.
    pub faces: [usize; 2],
}

impl ArrEdge {
    pub fn unbounded(&self) -> bool {
        self.ends.iter().any(|e| matches!(e, Endpoint::Frame(_)))
    }
}

#[derive(Debug, Clone)]
pub struct ArrFace {
    pub sample: Point2,
    /// Counterclockwise boundary of the face clipped to the frame.
    pub polygon: Vec<Point2>,
    pub lines: Vec<usize>,
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub unbounded: bool,
}

/// Exact arrangement of distinct lines, clipped to a square frame [-M, M]^2 that
/// strictly contains every vertex.
#[derive(Debug, Clone)]
pub struct Arrangement {
    pub lines: Vec<AffineForm>,
    pub vertices: Vec<ArrVertex>,
    pub edges: Vec<ArrEdge>,
    pub faces: Vec<ArrFace>,
    pub frame: Rational,
    /// Node, segment and face counts including frame points, frame segments and
    /// the outer face.
    pub euler_counts: (usize, usize, usize),
}

enum SegKind {
    Line(usize),
    Frame,
}

fn vec_half(v: &Vec2) -> u8 {
    if v.y.is_positive() || (v.y.is_zero() && v.x.is_positive()) {
        0
    } else {
        1
    }
}

fn cmp_vec_angle(a: &Vec2, b: &Vec2) -> Ordering {
    vec_half(a).cmp(&vec_half(b)).then_with(|| Rational::zero().cmp(&a.cross(b)))
}

fn frame_key(p: &Point2, m: &Rational) -> (u8, Rational) {
    let mm = -m.clone();
    if p.y == mm && p.x < *m {
        (0, p.x.clone())
    } else if p.x == *m && p.y < *m {
        (1, p.y.clone())
    } else if p.y == *m && p.x > mm {
        (2, -p.x.clone())
    } else {
        (3, -p.y.clone())
    }
}

pub fn build_arrangement(lines: &[AffineForm]) -> Arrangement {
    let mut keys: Vec<AffineForm> = lines.iter().filter(|l| !l.is_constant()).map(|l| l.line_key()).collect();
    keys.sort();
    keys.dedup();
    let lines = keys;
    let m = frame_size(&lines);

    // vertices
    let mut vmap: BTreeMap<Point2, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let Some(p) = line_intersection(&lines[i], &lines[j]) {
                let e = vmap.entry(p).or_default();
                e.insert(i);
                e.insert(j);
            }
        }
    }
    let mut vertices: Vec<ArrVertex> = vmap
        .iter()
        .map(|(p, ls)| ArrVertex { point: p.clone(), lines: ls.iter().copied().collect(), faces: vec![], edges: vec![] })
        .collect();
    let mut node_of: BTreeMap<Point2, usize> = vmap.keys().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let mut nodes: Vec<Point2> = vmap.keys().cloned().collect();
    let nv = nodes.len();

    let mut add_node = |p: Point2, nodes: &mut Vec<Point2>| -> usize {
        *node_of.entry(p.clone()).or_insert_with(|| {
            nodes.push(p);
            nodes.len() - 1
        })
    };

    // line segments
    let mut segs: Vec<(usize, usize, SegKind)> = Vec::new();
    let mut frame_pts: Vec<usize> = Vec::new();
    for (li, l) in lines.iter().enumerate() {
        let p0 = nearest_point(l);
        let dir = Vec2::new(-l.b.clone(), l.a.clone());
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for (d, p) in [(&dir.x, &p0.x), (&dir.y, &p0.y)] {
            if d.is_zero() {
                continue;
            }
            let t1 = (-m.clone() - p) / d;
            let t2 = (m.clone() - p) / d;
            let (a, b) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
            if lo.as_ref().is_none_or(|x| a > *x) {
                lo = Some(a);
            }
            if hi.as_ref().is_none_or(|x| b < *x) {
                hi = Some(b);
            }
        }
        let e1 = p0.add(&dir.scale(&lo.unwrap()));
        let e2 = p0.add(&dir.scale(&hi.unwrap()));
        let mut on: Vec<(Rational, usize)> = vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| v.lines.contains(&li))
            .map(|(i, v)| (v.point.sub(&p0).dot(&dir), i))
            .collect();
        let a = add_node(e1.clone(), &mut nodes);
        let b = add_node(e2.clone(), &mut nodes);
        frame_pts.push(a);
        frame_pts.push(b);
        on.push((e1.sub(&p0).dot(&dir), a));
        on.push((e2.sub(&p0).dot(&dir), b));
        on.sort();
        for w in on.windows(2) {
            segs.push((w[0].1, w[1].1, SegKind::Line(li)));
        }
    }
    for c in square(&m) {
        let i = add_node(c, &mut nodes);
        frame_pts.push(i);
    }
    frame_pts.sort();
    frame_pts.dedup();
    frame_pts.sort_by(|&a, &b| frame_key(&nodes[a], &m).cmp(&frame_key(&nodes[b], &m)));
    let nf = frame_pts.len();
    for k in 0..nf {
        segs.push((frame_pts[k], frame_pts[(k + 1) % nf], SegKind::Frame));
    }

    // half-edges: 2s is u->v, 2s+1 is v->u
    let nh = segs.len() * 2;
    let origin = |h: usize| if h % 2 == 0 { segs[h / 2].0 } else { segs[h / 2].1 };
    let head = |h: usize| if h % 2 == 0 { segs[h / 2].1 } else { segs[h / 2].0 };
    let mut out: Vec<Vec<usize>> = vec![vec![]; nodes.len()];
    for h in 0..nh {
        out[origin(h)].push(h);
    }
    let mut pos = vec![0usize; nh];
    for (u, hs) in out.iter_mut().enumerate() {
        hs.sort_by(|&a, &b| {
            let da = nodes[head(a)].sub(&nodes[u]);
            let db = nodes[head(b)].sub(&nodes[u]);
            cmp_vec_angle(&da, &db)
        });
        for (i, &h) in hs.iter().enumerate() {
            pos[h] = i;
        }
    }
    let next = |h: usize| {
        let v = head(h);
        let twin = h ^ 1;
        let k = out[v].len();
        out[v][(pos[twin] + k - 1) % k]
    };
    let mut face_of = vec![usize::MAX; nh];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for h in 0..nh {
        if face_of[h] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut cyc = Vec::new();
        let mut cur = h;
        while face_of[cur] == usize::MAX {
            face_of[cur] = id;
            cyc.push(cur);
            cur = next(cur);
        }
        cycles.push(cyc);
    }
    let areas: Vec<Rational> =
        cycles.iter().map(|c| twice_area(&c.iter().map(|&h| nodes[origin(h)].clone()).collect::<Vec<_>>())).collect();
    let outer: Vec<usize> = (0..cycles.len()).filter(|&i| !areas[i].is_positive()).collect();
    assert_eq!(outer.len(), 1, "exactly one outer cycle");
    let outer = outer[0];
    let mut remap = vec![usize::MAX; cycles.len()];
    let mut faces = Vec::new();
    for (ci, cyc) in cycles.iter().enumerate() {
        if ci == outer {
            continue;
        }
        remap[ci] = faces.len();
        let polygon: Vec<Point2> = cyc.iter().map(|&h| nodes[origin(h)].clone()).collect();
        let n = polygon.len();
        let sum = polygon.iter().fold(Vec2::zero(), |acc, p| acc.add(p));
        let sample = sum.scale(&rat(1, n as i64));
        let mut flines = BTreeSet::new();
        let mut fverts = BTreeSet::new();
        let mut unbounded = false;
        for &h in cyc {
            match segs[h / 2].2 {
                SegKind::Line(l) => {
                    flines.insert(l);
                }
                SegKind::Frame => unbounded = true,
            }
            if origin(h) < nv {
                fverts.insert(origin(h));
            }
        }
        faces.push(ArrFace {
            sample,
            polygon,
            lines: flines.into_iter().collect(),
            vertices: fverts.into_iter().collect(),
            edges: vec![],
            unbounded,
        });
    }
    let mut edges = Vec::new();
    for (s, (u, v, kind)) in segs.iter().enumerate() {
        let SegKind::Line(l) = kind else { continue };
        let end = |n: usize| if n < nv { Endpoint::Vertex(n) } else { Endpoint::Frame(nodes[n].clone()) };
        let fl = remap[face_of[2 * s]];
        let fr = remap[face_of[2 * s + 1]];
        let ei = edges.len();
        edges.push(ArrEdge {
            line: *l,
            ends: [end(*u), end(*v)],
            sample: nodes[*u].midpoint(&nodes[*v]),
            faces: [fl, fr],
        });
        faces[fl].edges.push(ei);
        faces[fr].edges.push(ei);
        for n in [*u, *v] {
            if n < nv {
                vertices[n].edges.push(ei);
            }
        }
    }
    for (fi, f) in faces.iter().enumerate() {
        for &v in &f.vertices {
            vertices[v].faces.push(fi);
        }
    }
    let euler_counts = (nodes.len(), segs.len(), cycles.len());
    Arrangement { lines, vertices, edges, faces, frame: m, euler_counts }
}

impl Arrangement {
    /// Vertex points, edge samples and face samples: one point per relatively open piece.
    pub fn sample_points(&self) -> Vec<Point2> {
        let mut pts: Vec<Point2> = self.vertices.iter().map(|v| v.point.clone()).collect();
        pts.extend(self.edges.iter().map(|e| e.sample.clone()));
        pts.extend(self.faces.iter().map(|f| f.sample.clone()));
        pts
    }

    /// Constraints cutting out face `fi`: its bounding lines, oriented toward `p`.
    fn oriented(&self, line_ids: impl Iterator<Item = usize>, p: &Point2) -> Vec<AffineForm> {
        line_ids
            .map(|l| {
                let f = &self.lines[l];
                if f.eval(p).is_negative() {
                    f.neg()
                } else {
                    f.clone()
                }
            })
            .collect()
    }

    pub fn face_constraints(&self, fi: usize) -> Vec<AffineForm> {
        let f = &self.faces[fi];
        self.oriented(f.lines.iter().copied(), &f.sample)
    }

    /// Constraints of the union of the two faces and the open edge between them.
    pub fn edge_constraints(&self, ei: usize) -> Vec<AffineForm> {
        let e = &self.edges[ei];
        let ids: BTreeSet<usize> = e
            .faces
            .iter()
            .flat_map(|&f| self.faces[f].lines.iter().copied())
            .filter(|&l| l != e.line)
            .collect();
        self.oriented(ids.into_iter(), &e.sample)
    }

    /// Constraints of the open star of vertex `vi`.
    pub fn vertex_constraints(&self, vi: usize) -> Vec<AffineForm> {
        let v = &self.vertices[vi];
        let ids: BTreeSet<usize> = v
            .faces
            .iter()
            .flat_map(|&f| self.faces[f].lines.iter().copied())
            .filter(|l| !v.lines.contains(l))
            .collect();
        self.oriented(ids.into_iter(), &v.point)
    }
}

/// The open set {h > 0} as a union of convex cells.
pub fn positivity_set(h: &HingeFunction) -> PolytopalSet {
    let arr = build_arrangement(&h.break_lines());
    let local = |p: &Point2| h.local_affine(&h.sign_vector(p).expect("face sample avoids break lines")).unwrap();
    let face_forms: Vec<AffineForm> = arr.faces.iter().map(|f| local(&f.sample)).collect();
    let mut cells = Vec::new();
    let mut push = |mut cons: Vec<AffineForm>, forms: &[&AffineForm]| {
        for f in forms {
            if f.is_constant() {
                if !f.c.is_positive() {
                    return;
                }
            } else {
                cons.push((*f).clone());
            }
        }
        if let Ok(c) = ConvexCell::new(cons) {
            cells.push(c);
        }
    };
    for (vi, v) in arr.vertices.iter().enumerate() {
        if h.evaluate(&v.point).is_positive() {
            let forms: Vec<&AffineForm> = v.faces.iter().map(|&f| &face_forms[f]).collect();
            push(arr.vertex_constraints(vi), &forms);
        }
    }
    for (ei, e) in arr.edges.iter().enumerate() {
        let forms = [&face_forms[e.faces[0]], &face_forms[e.faces[1]]];
        push(arr.edge_constraints(ei), &forms);
    }
    for (fi, _) in arr.faces.iter().enumerate() {
        push(arr.face_constraints(fi), &[&face_forms[fi]]);
    }
    let mut seen = BTreeSet::new();
    cells.retain(|c| {
        let mut k: Vec<AffineForm> = c.constraints.iter().map(|f| f.half_plane_key()).collect();
        k.sort();
        seen.insert(k)
    });
    PolytopalSet::new(cells)
}

/// Sign of a hinge function on each piece of the arrangement refined so that
/// the function has constant sign on every open face and edge.
#[derive(Debug, Clone)]
pub struct LabeledArrangement {
    pub arrangement: Arrangement,
    /// Which refined lines are break lines of the function.
    pub is_break: Vec<bool>,
    pub vertex_signs: Vec<i8>,
    pub edge_signs: Vec<i8>,
    pub face_signs: Vec<i8>,
}

pub fn label_arrangement(h: &HingeFunction) -> LabeledArrangement {
    let breaks = h.break_lines();
    let coarse = build_arrangement(&breaks);
    let mut lines = breaks.clone();
    for f in &coarse.faces {
        let form = h.local_affine(&h.sign_vector(&f.sample).expect("face sample")).unwrap();
        if !form.is_constant() {
            lines.push(form);
        }
    }
    let arrangement = build_arrangement(&lines);
    let is_break = arrangement.lines.iter().map(|l| breaks.binary_search(l).is_ok()).collect();
    let sg = |p: &Point2| sign(&h.evaluate(p)) as i8;
    LabeledArrangement {
        vertex_signs: arrangement.vertices.iter().map(|v| sg(&v.point)).collect(),
        edge_signs: arrangement.edges.iter().map(|e| sg(&e.sample)).collect(),
        face_signs: arrangement.faces.iter().map(|f| sg(&f.sample)).collect(),
        is_break,
        arrangement,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetEquality {
    Equal,
    /// A point classified differently by the two sets.
    Differ(Point2),
}

impl SetEquality {
    pub fn is_equal(&self) -> bool {
        matches!(self, SetEquality::Equal)
    }
}

pub fn set_equal(p1: &PolytopalSet, p2: &PolytopalSet) -> SetEquality {
    let mut lines = p1.lines();
    lines.extend(p2.lines());
    let arr = build_arrangement(&lines);
    let (i1, i2) = (p1.index(), p2.index());
    for p in arr.sample_points() {
        if i1.classify(&p) != i2.classify(&p) {
            return SetEquality::Differ(p);
        }
    }
    SetEquality::Equal
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    pub bounded: Vec<bool>,
    /// Indices of the cells of the input lying in each component.
    pub cells: Vec<Vec<usize>>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = x;
    while parent[c] != r {
        let n = parent[c];
        parent[c] = r;
        c = n;
    }
    r
}

pub fn connected_components(p_set: &PolytopalSet) -> Components {
    let arr = build_arrangement(&p_set.lines());
    let idx = p_set.index();
    let inside: Vec<bool> = arr.faces.iter().map(|f| idx.classify(&f.sample) == PointClass::Interior).collect();
    let mut parent: Vec<usize> = (0..arr.faces.len()).collect();
    for e in &arr.edges {
        if idx.classify(&e.sample) == PointClass::Interior {
            let (a, b) = (find(&mut parent, e.faces[0]), find(&mut parent, e.faces[1]));
            parent[a] = b;
        }
    }
    let mut comp_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut bounded = Vec::new();
    let mut face_comp = vec![usize::MAX; arr.faces.len()];
    for fi in 0..arr.faces.len() {
        if !inside[fi] {
            continue;
        }
        let r = find(&mut parent, fi);
        let c = *comp_of_root.entry(r).or_insert_with(|| {
            bounded.push(true);
            bounded.len() - 1
        });
        face_comp[fi] = c;
        if arr.faces[fi].unbounded {
            bounded[c] = false;
        }
    }
    let count = bounded.len();
    let mut cells = vec![vec![]; count];
    for (ci, cell) in p_set.cells.iter().enumerate() {
        if let Some(fi) = (0..arr.faces.len()).find(|&f| inside[f] && cell.contains(&arr.faces[f].sample)) {
            cells[face_comp[fi]].push(ci);
        }
    }
    Components { count, bounded, cells }
}

/// Directions along which `q` enters the set.
pub fn local_cone(p_set: &PolytopalSet, q: &Point2) -> PolytopalCone {
    let mut acc = DirectionSet::empty();
    for cell in &p_set.cells {
        let vals: Vec<Rational> = cell.constraints.iter().map(|c| c.eval(q)).collect();
        if vals.iter().any(|v| v.is_negative()) {
            continue;
        }
        let active: Vec<Vec2> =
            cell.constraints.iter().zip(&vals).filter(|(_, v)| v.is_zero()).map(|(c, _)| c.gradient()).collect();
        if active.is_empty() {
            return PolytopalCone::Full;
        }
        let cand: Vec<Direction> = active
            .iter()
            .flat_map(|n| {
                let d = Direction::from_vec(&n.perp()).expect("nonconstant constraint");
                [d, d.neg()]
            })
            .collect();
        let sector = DirectionSet::from_predicate(&cand, |d| active.iter().all(|n| n.dot_dir(d).is_positive()));
        acc = acc.union(&sector);
    }
    PolytopalCone::from_open_part(&acc)
}

pub fn boundary_vertices(p_set: &PolytopalSet) -> Vec<Point2> {
    let arr = build_arrangement(&p_set.lines());
    let idx = p_set.index();
    let mut v: Vec<Point2> = arr
        .vertices
        .iter()
        .filter(|v| idx.classify(&v.point) == PointClass::Boundary)
        .map(|v| v.point.clone())
        .collect();
    v.sort();
    v
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalCheck {
    Pass,
    Fail { q: Point2, verdict: RealizabilityVerdict },
}

impl LocalCheck {
    pub fn passed(&self) -> bool {
        matches!(self, LocalCheck::Pass)
    }
}

pub fn check_local_condition(p_set: &PolytopalSet) -> LocalCheck {
    for q in boundary_vertices(p_set) {
        let verdict = check_cone_condition(&local_cone(p_set, &q));
        if !verdict.realizable {
            return LocalCheck::Fail { q, verdict };
        }
    }
    LocalCheck::Pass
}

/// The cone as a union of open convex cells with apex at the origin.
pub fn cone_to_set(c: &PolytopalCone) -> PolytopalSet {
    let left = |d: Direction| AffineForm::ints(-d.dy(), d.dx(), 0);
    let half = |d: Direction| ConvexCell { constraints: vec![left(d)] };
    match c {
        PolytopalCone::Empty => PolytopalSet::empty(),
        PolytopalCone::Full => PolytopalSet::plane(),
        PolytopalCone::Arcs(arcs) => {
            let mut cells = Vec::new();
            for a in arcs {
                match a.vs_pi() {
                    -1 => cells.push(ConvexCell { constraints: vec![left(a.start), left(a.end).neg()] }),
                    0 => cells.push(half(a.start)),
                    _ => {
                        cells.push(half(a.start));
                        cells.push(half(a.end.neg()));
                        if a.start == a.end {
                            let m = a.start.neg();
                            cells.push(ConvexCell { constraints: vec![AffineForm::ints(m.dx(), m.dy(), 0)] });
                        }
                    }
                }
            }
            PolytopalSet::new(cells)
        }
    }
}

/// Open convex polygon with the given counterclockwise vertices, as a cell.
pub fn polygon_cell(vertices: &[Point2]) -> Result<ConvexCell, PlanarError> {
    let n = vertices.len();
    let cons = (0..n).map(|i| AffineForm::through(&vertices[i], &vertices[(i + 1) % n].sub(&vertices[i]))).collect();
    ConvexCell::new(cons)
}
