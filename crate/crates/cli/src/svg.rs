//! SVG pictures of hinge functions, positivity sets and cones. Geometry is
//! clipped exactly; only the emitted coordinates are decimal.

use std::fmt::Write as _;

use num::{Signed, Zero};

use hingeset::cone::PolytopalCone;
use hingeset::exact::{to_f64, AffineForm, Point2, Rational, Vec2};
use hingeset::hinge::HingeFunction;
use hingeset::planar::{cone_to_set, positivity_set, PolytopalSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewBox {
    pub xmin: Rational,
    pub ymin: Rational,
    pub xmax: Rational,
    pub ymax: Rational,
}

impl ViewBox {
    pub fn new(xmin: Rational, ymin: Rational, xmax: Rational, ymax: Rational) -> Option<ViewBox> {
        (xmin < xmax && ymin < ymax).then_some(ViewBox { xmin, ymin, xmax, ymax })
    }

    /// "xmin,ymin,xmax,ymax" with rational entries.
    pub fn parse(s: &str) -> Option<ViewBox> {
        let parts: Vec<Rational> =
            s.split(',').map(|p| hingeset::exact::parse_rational(p.trim())).collect::<Option<_>>()?;
        match parts.as_slice() {
            [a, b, c, d] => ViewBox::new(a.clone(), b.clone(), c.clone(), d.clone()),
            _ => None,
        }
    }

    fn corners(&self) -> Vec<Point2> {
        vec![
            Vec2::new(self.xmin.clone(), self.ymin.clone()),
            Vec2::new(self.xmax.clone(), self.ymin.clone()),
            Vec2::new(self.xmax.clone(), self.ymax.clone()),
            Vec2::new(self.xmin.clone(), self.ymax.clone()),
        ]
    }
}

impl Default for ViewBox {
    fn default() -> Self {
        let r = |n: i64| Rational::from_integer(n.into());
        ViewBox { xmin: r(-4), ymin: r(-4), xmax: r(4), ymax: r(4) }
    }
}

/// Keeps the part of a convex polygon where `f >= 0`.
fn clip(poly: &[Point2], f: &AffineForm) -> Vec<Point2> {
    let n = poly.len();
    let mut out = Vec::new();
    for i in 0..n {
        let (p, q) = (&poly[i], &poly[(i + 1) % n]);
        let (fp, fq) = (f.eval(p), f.eval(q));
        if !fp.is_negative() {
            out.push(p.clone());
        }
        if (fp.is_negative() && fq.is_positive()) || (fp.is_positive() && fq.is_negative()) {
            let t = fp.clone() / (fp - fq);
            out.push(p.add(&q.sub(p).scale(&t)));
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

fn twice_area(poly: &[Point2]) -> Rational {
    (0..poly.len()).map(|i| poly[i].cross(&poly[(i + 1) % poly.len()])).sum()
}

/// Closed polygons covering the set inside the view box, one per cell.
pub fn fill_polygons(set: &PolytopalSet, vb: &ViewBox) -> Vec<Vec<Point2>> {
    set.cells()
        .iter()
        .filter_map(|cell| {
            let poly = cell.constraints().iter().fold(vb.corners(), |acc, c| clip(&acc, c));
            (poly.len() >= 3 && !twice_area(&poly).is_zero()).then_some(poly)
        })
        .collect()
}

/// The part of the zero line of `f` inside the view box.
pub fn line_segment(f: &AffineForm, vb: &ViewBox) -> Option<(Point2, Point2)> {
    let mut pts: Vec<Point2> = Vec::new();
    let c = vb.corners();
    for i in 0..4 {
        let (p, q) = (&c[i], &c[(i + 1) % 4]);
        let (fp, fq) = (f.eval(p), f.eval(q));
        if fp.is_zero() {
            pts.push(p.clone());
        } else if (fp.is_negative() && fq.is_positive()) || (fp.is_positive() && fq.is_negative()) {
            let t = fp.clone() / (fp - fq);
            pts.push(p.add(&q.sub(p).scale(&t)));
        }
    }
    pts.sort();
    pts.dedup();
    match pts.as_slice() {
        [a, b] => Some((a.clone(), b.clone())),
        _ => None,
    }
}

/// 12 significant digits, no trailing zeros.
pub fn fmt_num(r: &Rational) -> String {
    let x = to_f64(r);
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (11 - mag).clamp(0, 20) as usize;
    let mut s = format!("{:.*}", decimals, x);
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn xy(p: &Point2) -> String {
    format!("{},{}", fmt_num(&p.x), fmt_num(&-p.y.clone()))
}

struct Doc {
    body: String,
    vb: ViewBox,
}

impl Doc {
    fn new(vb: &ViewBox) -> Doc {
        Doc { body: String::new(), vb: vb.clone() }
    }

    fn fill(&mut self, set: &PolytopalSet) {
        for poly in fill_polygons(set, &self.vb) {
            let pts: Vec<String> = poly.iter().map(xy).collect();
            let _ = writeln!(self.body, "  <polygon class=\"positive\" points=\"{}\"/>", pts.join(" "));
        }
    }

    fn line(&mut self, f: &AffineForm, class: &str) {
        if let Some((a, b)) = line_segment(f, &self.vb) {
            let (a, b) = (xy(&a), xy(&b));
            let (x1, y1) = a.split_once(',').expect("pair");
            let (x2, y2) = b.split_once(',').expect("pair");
            let _ = writeln!(
                self.body,
                "  <line class=\"{class}\" x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\"/>"
            );
        }
    }

    fn finish(self) -> String {
        let vb = &self.vb;
        let w = vb.xmax.clone() - &vb.xmin;
        let h = vb.ymax.clone() - &vb.ymin;
        let stroke = fmt_num(&(w.clone().max(h.clone()) / Rational::from_integer(200.into())));
        let mut s = String::new();
        let _ = writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">",
            fmt_num(&vb.xmin),
            fmt_num(&-vb.ymax.clone()),
            fmt_num(&w),
            fmt_num(&h)
        );
        let _ = writeln!(
            s,
            "  <style>.positive{{fill:#f2c14e;fill-opacity:0.6;stroke:none}} \
             .valley{{stroke:#2e8b57;stroke-width:{stroke}}} \
             .mountain{{stroke:#8b4513;stroke-width:{stroke}}} \
             .boundary{{stroke:#333;stroke-width:{stroke};stroke-dasharray:{d},{d};fill:none}}</style>",
            d = fmt_num(&(w.max(h) / Rational::from_integer(50.into())))
        );
        s.push_str(&self.body);
        s.push_str("</svg>\n");
        s
    }
}

/// Positive region filled, valleys and mountains in their own stroke classes.
pub fn render_hinge(h: &HingeFunction, vb: &ViewBox) -> String {
    let mut doc = Doc::new(vb);
    doc.fill(&positivity_set(h));
    // repeated terms share one stroke
    let mut seen = std::collections::BTreeSet::new();
    for (l, class) in h.plus().iter().map(|l| (l, "valley")).chain(h.minus().iter().map(|l| (l, "mountain"))) {
        if seen.insert((l.line_key(), class)) {
            doc.line(l, class);
        }
    }
    doc.finish()
}

pub fn render_set(set: &PolytopalSet, vb: &ViewBox) -> String {
    let mut doc = Doc::new(vb);
    doc.fill(set);
    doc.finish()
}

/// Cone filled from the origin with its boundary rays dashed.
pub fn render_cone(c: &PolytopalCone, vb: &ViewBox) -> String {
    let mut doc = Doc::new(vb);
    doc.fill(&cone_to_set(c));
    for d in c.boundary_rays() {
        let f = AffineForm::new(-Rational::from_integer(d.dy().into()), Rational::from_integer(d.dx().into()), Rational::zero());
        if let Some((a, b)) = line_segment(&f, vb) {
            // keep the half of the line pointing along d
            let end = if a.dot_dir(d) > b.dot_dir(d) { a } else { b };
            if end.dot_dir(d).is_positive() {
                let _ = writeln!(
                    doc.body,
                    "  <path class=\"boundary\" d=\"M 0,0 L {}\"/>",
                    xy(&end)
                );
            }
        }
    }
    doc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use hingeset::exact::{int, rat};

    fn f(a: i64, b: i64, c: i64) -> AffineForm {
        AffineForm::ints(a, b, c)
    }

    fn inside_closed(poly: &[Point2], p: &Point2) -> bool {
        let n = poly.len();
        (0..n).all(|i| !poly[(i + 1) % n].sub(&poly[i]).cross(&p.sub(&poly[i])).is_negative())
    }

    #[test]
    fn fill_matches_signs_on_grid() {
        let h1 = HingeFunction::new(f(1, 0, -1), vec![f(1, 0, -1), f(0, 1, 0)], vec![f(-1, 1, 0)]);
        let vb = ViewBox::default();
        let polys = fill_polygons(&positivity_set(&h1), &vb);
        for i in 0..100 {
            for j in 0..100 {
                let p = Vec2::new(rat(-4, 1) + rat(8 * i + 3, 101), rat(-4, 1) + rat(8 * j + 5, 103));
                let v = h1.evaluate(&p);
                let covered = polys.iter().any(|poly| inside_closed(poly, &p));
                if v.is_positive() {
                    assert!(covered, "{p:?}");
                } else if v.is_negative() {
                    assert!(!covered, "{p:?}");
                }
            }
        }
    }

    #[test]
    fn empty_set_has_no_fill() {
        let h = HingeFunction::affine(AffineForm::constant(int(-1)));
        assert!(!render_hinge(&h, &ViewBox::default()).contains("<polygon"));
    }

    #[test]
    fn triangle_picture() {
        let h = hingeset::synth::reference_triangle();
        let s = render_hinge(&h, &ViewBox::default());
        assert_eq!(s.matches("<line").count(), 5);
        assert_eq!(s.matches("class=\"mountain\"").count(), 3);
        let polys = fill_polygons(&positivity_set(&h), &ViewBox::default());
        // cells overlap, but each lies in the closed triangle
        assert!(!polys.is_empty());
        for poly in &polys {
            for p in poly {
                assert!(!p.x.is_negative() && !p.y.is_negative() && p.x.clone() + &p.y <= int(2));
            }
        }
    }

    #[test]
    fn numbers() {
        assert_eq!(fmt_num(&rat(1, 3)), "0.333333333333");
        assert_eq!(fmt_num(&int(-2)), "-2");
        assert_eq!(fmt_num(&rat(2000, 3)), "666.666666667");
        assert!(ViewBox::parse("0,0,1").is_none());
        assert!(ViewBox::parse("1,0,0,1").is_none());
        assert_eq!(ViewBox::parse("-1/2,0,1,2").unwrap().xmin, rat(-1, 2));
    }

    #[test]
    fn cone_rays_dashed() {
        let c = hingeset::cone::normalize_cone(&[hingeset::cone::Arc::new(
            hingeset::exact::Direction::of(1, 0),
            hingeset::exact::Direction::of(0, 1),
        )]);
        let s = render_cone(&c, &ViewBox::default());
        assert_eq!(s.matches("class=\"boundary\"").count(), 2);
    }
}
