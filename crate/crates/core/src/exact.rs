//! Exact scalars, vectors, integer directions and a rational linear solver.

use std::cmp::Ordering;
use std::fmt;

use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("zero vector has no direction")]
    ZeroDirection,
    #[error("degenerate arc: start and end coincide")]
    DegenerateArc,
    #[error("direction component does not fit in 32 bits")]
    Overflow,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// "p/q" in lowest terms, or "p" for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Lossy conversion, for display only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec2 {
    pub x: Rational,
    pub y: Rational,
}

pub type Point2 = Vec2;

impl Vec2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Vec2 { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Vec2 { x: int(x), y: int(y) }
    }

    pub fn zero() -> Self {
        Vec2::ints(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn dot(&self, o: &Vec2) -> Rational {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Vec2) -> Rational {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn add(&self, o: &Vec2) -> Vec2 {
        Vec2::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Vec2) -> Vec2 {
        Vec2::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn scale(&self, k: &Rational) -> Vec2 {
        Vec2::new(&self.x * k, &self.y * k)
    }

    pub fn neg(&self) -> Vec2 {
        Vec2::new(-&self.x, -&self.y)
    }

    /// Counterclockwise perpendicular (-y, x).
    pub fn perp(&self) -> Vec2 {
        Vec2::new(-&self.y, self.x.clone())
    }

    pub fn midpoint(&self, o: &Vec2) -> Vec2 {
        self.add(o).scale(&rat(1, 2))
    }

    pub fn dot_dir(&self, d: Direction) -> Rational {
        &self.x * int(d.dx) + &self.y * int(d.dy)
    }
}

impl fmt::Debug for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.x), format_rational(&self.y))
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

const DIR_LIMIT: i64 = 1 << 31;

/// A ray from the origin, stored as a primitive integer vector.
/// Components are bounded by 2^31 so every predicate fits in i128.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Direction {
    dx: i64,
    dy: i64,
}

impl Direction {
    /// Reduces to primitive form. Rejects the zero vector.
    pub fn new(dx: i64, dy: i64) -> Result<Direction, GeometryError> {
        if dx == 0 && dy == 0 {
            return Err(GeometryError::ZeroDirection);
        }
        let g = dx.gcd(&dy);
        let (dx, dy) = (dx / g, dy / g);
        if dx.abs() >= DIR_LIMIT || dy.abs() >= DIR_LIMIT {
            return Err(GeometryError::Overflow);
        }
        Ok(Direction { dx, dy })
    }

    /// Panicking constructor for literals.
    pub fn of(dx: i64, dy: i64) -> Direction {
        Direction::new(dx, dy).expect("valid direction literal")
    }

    /// Direction of a nonzero rational vector.
    pub fn from_vec(v: &Vec2) -> Result<Direction, GeometryError> {
        if v.is_zero() {
            return Err(GeometryError::ZeroDirection);
        }
        let l = v.x.denom().lcm(v.y.denom());
        let x = (&v.x * Rational::from_integer(l.clone())).to_integer();
        let y = (&v.y * Rational::from_integer(l)).to_integer();
        let g = x.gcd(&y);
        let x = (x / &g).to_i64().ok_or(GeometryError::Overflow)?;
        let y = (y / &g).to_i64().ok_or(GeometryError::Overflow)?;
        Direction::new(x, y)
    }

    pub fn dx(self) -> i64 {
        self.dx
    }

    pub fn dy(self) -> i64 {
        self.dy
    }

    pub fn neg(self) -> Direction {
        Direction { dx: -self.dx, dy: -self.dy }
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Direction {
        Direction { dx: -self.dy, dy: self.dx }
    }

    /// Clockwise quarter turn.
    pub fn perp_cw(self) -> Direction {
        Direction { dx: self.dy, dy: -self.dx }
    }

    pub fn to_vec(self) -> Vec2 {
        Vec2::ints(self.dx, self.dy)
    }

    pub fn cross(self, o: Direction) -> i128 {
        self.dx as i128 * o.dy as i128 - self.dy as i128 * o.dx as i128
    }

    pub fn dot(self, o: Direction) -> i128 {
        self.dx as i128 * o.dx as i128 + self.dy as i128 * o.dy as i128
    }

    /// Same line through the origin (equal or antipodal).
    pub fn parallel(self, o: Direction) -> bool {
        self.cross(o) == 0
    }

    /// Representative of the line with first nonzero component positive.
    pub fn line_canonical(self) -> Direction {
        if self.dx > 0 || (self.dx == 0 && self.dy > 0) {
            self
        } else {
            self.neg()
        }
    }

    /// Reduced componentwise sum.
    pub fn mediant(self, o: Direction) -> Result<Direction, GeometryError> {
        Direction::new(self.dx + o.dx, self.dy + o.dy)
    }

    /// 0 for angles in [0, π) measured from `base`, 1 for [π, 2π).
    fn half_from(base: Direction, d: Direction) -> u8 {
        let c = base.cross(d);
        if c > 0 || (c == 0 && base.dot(d) > 0) {
            0
        } else {
            1
        }
    }

    /// Compare `a` and `b` by CCW angle measured from `base`; `base` itself is smallest.
    pub fn cmp_from(base: Direction, a: Direction, b: Direction) -> Ordering {
        let ha = Direction::half_from(base, a);
        let hb = Direction::half_from(base, b);
        ha.cmp(&hb).then_with(|| 0.cmp(&a.cross(b)))
    }
}

impl Ord for Direction {
    /// Angular order starting at (1, 0).
    fn cmp(&self, other: &Self) -> Ordering {
        Direction::cmp_from(Direction { dx: 1, dy: 0 }, *self, *other)
    }
}

impl PartialOrd for Direction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.dx, self.dy)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Orientation of the pair: sign of d1 x d2.
pub fn direction_ccw(d1: Direction, d2: Direction) -> i32 {
    d1.cross(d2).signum() as i32
}

/// True iff `d` lies on the open CCW arc from `start` to `end`.
/// With `start == end` the arc is the circle minus that ray.
pub fn strictly_between(start: Direction, end: Direction, d: Direction) -> bool {
    if d == start {
        return false;
    }
    if start == end {
        return true;
    }
    Direction::cmp_from(start, d, end) == Ordering::Less
}

/// A direction strictly inside the open CCW arc from `start` to `end`.
pub fn sample_inside_arc(start: Direction, end: Direction) -> Result<Direction, GeometryError> {
    if start == end {
        return Err(GeometryError::DegenerateArc);
    }
    if start.cross(end) > 0 {
        start.mediant(end)
    } else {
        // arcs of angle >= π contain the quarter turn of the start
        Ok(start.perp())
    }
}

/// The affine form (x, y) -> a x + b y + c.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineForm {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl AffineForm {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        AffineForm { a, b, c }
    }

    pub fn ints(a: i64, b: i64, c: i64) -> Self {
        AffineForm::new(int(a), int(b), int(c))
    }

    pub fn zero() -> Self {
        AffineForm::ints(0, 0, 0)
    }

    pub fn constant(c: Rational) -> Self {
        AffineForm::new(Rational::zero(), Rational::zero(), c)
    }

    /// Linear form with the given gradient.
    pub fn linear(g: &Vec2) -> Self {
        AffineForm::new(g.x.clone(), g.y.clone(), Rational::zero())
    }

    /// Form vanishing on the line through `p` with direction `d`, positive on its left.
    pub fn through(p: &Point2, d: &Vec2) -> Self {
        let n = d.perp();
        let c = -n.dot(p);
        AffineForm::new(n.x, n.y, c)
    }

    pub fn eval(&self, p: &Point2) -> Rational {
        &self.a * &p.x + &self.b * &p.y + &self.c
    }

    pub fn gradient(&self) -> Vec2 {
        Vec2::new(self.a.clone(), self.b.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.is_constant() && self.c.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &AffineForm) -> AffineForm {
        AffineForm::new(&self.a + &o.a, &self.b + &o.b, &self.c + &o.c)
    }

    pub fn sub(&self, o: &AffineForm) -> AffineForm {
        AffineForm::new(&self.a - &o.a, &self.b - &o.b, &self.c - &o.c)
    }

    pub fn scale(&self, k: &Rational) -> AffineForm {
        AffineForm::new(&self.a * k, &self.b * k, &self.c * k)
    }

    pub fn neg(&self) -> AffineForm {
        AffineForm::new(-&self.a, -&self.b, -&self.c)
    }

    /// Sign of the first nonzero coefficient among (a, b, c).
    pub fn leading_sign(&self) -> i32 {
        for v in [&self.a, &self.b, &self.c] {
            if !v.is_zero() {
                return sign(v);
            }
        }
        0
    }

    /// The form with first nonzero coefficient made positive.
    pub fn sign_normalized(&self) -> AffineForm {
        if self.leading_sign() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Coprime integer coefficients with first nonzero positive; equal for proportional forms.
    pub fn line_key(&self) -> AffineForm {
        let l = self.a.denom().lcm(self.b.denom()).lcm(self.c.denom());
        let lr = Rational::from_integer(l);
        let ia = (&self.a * &lr).to_integer();
        let ib = (&self.b * &lr).to_integer();
        let ic = (&self.c * &lr).to_integer();
        let g = ia.gcd(&ib).gcd(&ic);
        if g.is_zero() {
            return AffineForm::zero();
        }
        let f = AffineForm::new(
            Rational::from_integer(ia / &g),
            Rational::from_integer(ib / &g),
            Rational::from_integer(ic / &g),
        );
        f.sign_normalized()
    }

    /// Coprime integer form with the same zero line and the same positive side.
    pub fn half_plane_key(&self) -> AffineForm {
        let k = self.line_key();
        if self.leading_sign() < 0 {
            k.neg()
        } else {
            k
        }
    }

    /// The composition x -> self(T x) with T x = m x + t (m row-major 2x2).
    pub fn compose(&self, m: &[Rational; 4], t: &Vec2) -> AffineForm {
        AffineForm::new(
            &self.a * &m[0] + &self.b * &m[2],
            &self.a * &m[1] + &self.b * &m[3],
            &self.a * &t.x + &self.b * &t.y + &self.c,
        )
    }
}

impl fmt::Debug for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}x + {}y + {}]",
            format_rational(&self.a),
            format_rational(&self.b),
            format_rational(&self.c)
        )
    }
}

/// Intersection point of two zero lines, if they are not parallel.
pub fn line_intersection(l1: &AffineForm, l2: &AffineForm) -> Option<Point2> {
    solve2(&l1.a, &l1.b, &l2.a, &l2.b, &-&l1.c, &-&l2.c)
}

/// Solves [a11 a12; a21 a22] v = (b1, b2).
pub fn solve2(
    a11: &Rational,
    a12: &Rational,
    a21: &Rational,
    a22: &Rational,
    b1: &Rational,
    b2: &Rational,
) -> Option<Vec2> {
    let det = a11 * a22 - a12 * a21;
    if det.is_zero() {
        return None;
    }
    let x = (b1 * a22 - a12 * b2) / &det;
    let y = (a11 * b2 - b1 * a21) / &det;
    Some(Vec2::new(x, y))
}

#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Panics if rows have unequal length.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        let r = rows.len();
        let mut entries = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix row");
            entries.extend(row);
        }
        RatMatrix { rows: r, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_rational).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Basis of the right nullspace: one vector per free column, with a 1 in that
/// column and zeros in the other free columns.
pub fn nullspace(m: &RatMatrix) -> Vec<Vec<Rational>> {
    let (r, pivots) = m.rref();
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); m.cols()];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f).clone();
            }
            v
        })
        .collect()
}
