//! Hinge functions L0 + sum |Li| - sum |Lj| in the plane and their
//! positively homogeneous sector representation.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{
    format_rational, int, sample_inside_arc, sign, AffineForm, Direction, GeometryError, Point2,
    Rational, Vec2,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HingeError {
    #[error("point lies on the zero line of term {0}")]
    OnBreakLocus(usize),
    #[error("sign vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("not syntactically homogeneous (term {0:?} has a constant; None is the base)")]
    NotHomogeneous(Option<usize>),
    #[error("gradient jumps at {0} and at its antipode differ")]
    NotDecomposable(Direction),
    #[error("malformed sector function: {0}")]
    MalformedPosHom(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// L0 + sum over `plus` of |L| - sum over `minus` of |L|.
/// Plus terms are valleys, minus terms mountains.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HingeFunction {
    base: AffineForm,
    plus: Vec<AffineForm>,
    minus: Vec<AffineForm>,
}

/// Signs of the terms at a point, plus terms first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(pub Vec<i8>);

impl HingeFunction {
    /// Canonicalizes: drops zero terms, folds constant terms into the base,
    /// sign-normalizes and sorts the rest.
    pub fn new(base: AffineForm, plus: Vec<AffineForm>, minus: Vec<AffineForm>) -> Self {
        let mut base = base;
        let mut fold = |terms: Vec<AffineForm>, s: i64| -> Vec<AffineForm> {
            let mut out = Vec::new();
            for t in terms {
                if t.is_constant() {
                    base.c += int(s) * t.c.abs();
                } else {
                    out.push(t.sign_normalized());
                }
            }
            out.sort();
            out
        };
        let plus = fold(plus, 1);
        let minus = fold(minus, -1);
        HingeFunction { base, plus, minus }
    }

    /// Affine function with no absolute-value terms.
    pub fn affine(base: AffineForm) -> Self {
        HingeFunction::new(base, vec![], vec![])
    }

    /// base + sum w |L|, merging proportional terms; a positive net weight
    /// becomes a plus term, a negative one a minus term.
    pub fn from_weighted(base: AffineForm, terms: Vec<(Rational, AffineForm)>) -> Self {
        let mut acc: BTreeMap<AffineForm, Rational> = BTreeMap::new();
        let mut base = base;
        for (w, l) in terms {
            if w.is_zero() || l.is_zero() {
                continue;
            }
            if l.is_constant() {
                base.c += w * l.c.abs();
                continue;
            }
            let key = l.line_key();
            // |l| = |ratio| |key|
            let ratio = if !key.a.is_zero() { &l.a / &key.a } else { &l.b / &key.b };
            *acc.entry(key).or_insert_with(Rational::zero) += w * ratio.abs();
        }
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (k, w) in acc {
            match sign(&w) {
                1 => plus.push(k.scale(&w)),
                -1 => minus.push(k.scale(&-w)),
                _ => {}
            }
        }
        HingeFunction::new(base, plus, minus)
    }

    pub fn base(&self) -> &AffineForm {
        &self.base
    }

    pub fn plus(&self) -> &[AffineForm] {
        &self.plus
    }

    pub fn minus(&self) -> &[AffineForm] {
        &self.minus
    }

    pub fn num_terms(&self) -> usize {
        self.plus.len() + self.minus.len()
    }

    /// (+1 or -1, form) for each term, plus terms first.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &AffineForm)> {
        self.plus.iter().map(|t| (1, t)).chain(self.minus.iter().map(|t| (-1, t)))
    }

    pub fn weighted_terms(&self) -> Vec<(Rational, AffineForm)> {
        self.terms().map(|(s, t)| (int(s), t.clone())).collect()
    }

    /// Distinct zero lines of the terms, as canonical integer forms.
    pub fn break_lines(&self) -> Vec<AffineForm> {
        let mut v: Vec<AffineForm> = self.terms().map(|(_, t)| t.line_key()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn evaluate(&self, p: &Point2) -> Rational {
        let mut v = self.base.eval(p);
        for (s, t) in self.terms() {
            let a = t.eval(p).abs();
            if s > 0 {
                v += a;
            } else {
                v -= a;
            }
        }
        v
    }

    pub fn sign_vector(&self, p: &Point2) -> Result<SignVector, HingeError> {
        self.terms()
            .enumerate()
            .map(|(i, (_, t))| match sign(&t.eval(p)) {
                0 => Err(HingeError::OnBreakLocus(i)),
                s => Ok(s as i8),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(SignVector)
    }

    pub fn local_affine(&self, sigma: &SignVector) -> Result<AffineForm, HingeError> {
        if sigma.0.len() != self.num_terms() {
            return Err(HingeError::LengthMismatch { expected: self.num_terms(), got: sigma.0.len() });
        }
        let mut f = self.base.clone();
        for ((s, t), &si) in self.terms().zip(&sigma.0) {
            f = f.add(&t.scale(&int(s * si as i64)));
        }
        Ok(f)
    }

    /// Local affine form at `p`, where a term vanishing at `p` counts with sign `tie`
    /// (useful only when the caller knows which side is meant).
    pub fn local_affine_with(&self, p: &Point2, tie: impl Fn(usize, &AffineForm) -> i8) -> AffineForm {
        let sigma = SignVector(
            self.terms()
                .enumerate()
                .map(|(i, (_, t))| match sign(&t.eval(p)) {
                    0 => tie(i, t),
                    s => s as i8,
                })
                .collect(),
        );
        self.local_affine(&sigma).expect("length matches")
    }

    pub fn gradient_at(&self, p: &Point2) -> Result<Vec2, HingeError> {
        let sigma = self.sign_vector(p)?;
        Ok(self.local_affine(&sigma)?.gradient())
    }

    /// Half the smallest scaled distance from `p` to a term line missing `p`; 1 if
    /// every line passes through `p`. Any q with max(|q - p|) below this value
    /// only meets lines through `p`.
    pub fn admissible_radius(&self, p: &Point2) -> Rational {
        let mut best: Option<Rational> = None;
        for (_, t) in self.terms() {
            let v = t.eval(p);
            if v.is_zero() {
                continue;
            }
            let r = v.abs() / (t.a.abs() + t.b.abs());
            if best.as_ref().is_none_or(|b| r < *b) {
                best = Some(r);
            }
        }
        best.map(|b| b / int(2)).unwrap_or_else(Rational::one)
    }

    /// The point p + delta/(1+k) (1, k) used as the admissible q for `p`.
    pub fn admissible_point(&self, p: &Point2) -> Point2 {
        let delta = self.admissible_radius(p);
        let through: Vec<&AffineForm> = self.terms().map(|(_, t)| t).filter(|t| t.eval(p).is_zero()).collect();
        let mut k: i64 = 0;
        while through.iter().any(|t| (&t.a + &t.b * int(k)).is_zero()) {
            k += 1;
        }
        let step = delta / int(1 + k);
        p.add(&Vec2::ints(1, k).scale(&step))
    }

    /// grad h(q) + grad h(2p - q) for an admissible q near p.
    pub fn central_gradient_sum(&self, p: &Point2) -> Vec2 {
        let q = self.admissible_point(p);
        let q2 = p.scale(&int(2)).sub(&q);
        let g1 = self.gradient_at(&q).expect("admissible point avoids break lines");
        let g2 = self.gradient_at(&q2).expect("reflected admissible point avoids break lines");
        g1.add(&g2)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.base.c.is_zero() && self.terms().all(|(_, t)| t.c.is_zero())
    }

    pub fn to_poshom(&self) -> Result<PosHomCPWL, HingeError> {
        if !self.base.c.is_zero() {
            return Err(HingeError::NotHomogeneous(None));
        }
        if let Some(i) = self.terms().position(|(_, t)| !t.c.is_zero()) {
            return Err(HingeError::NotHomogeneous(Some(i)));
        }
        let mut breaks = Vec::new();
        for (_, t) in self.terms() {
            let d = Direction::from_vec(&Vec2::new(-&t.b, t.a.clone()))?;
            breaks.push(d);
            breaks.push(d.neg());
        }
        breaks.sort();
        breaks.dedup();
        if breaks.is_empty() {
            return Ok(PosHomCPWL::linear(self.base.gradient()));
        }
        let n = breaks.len();
        let mut grads = Vec::with_capacity(n);
        for k in 0..n {
            let s = sample_inside_arc(breaks[k], breaks[(k + 1) % n])?;
            grads.push(self.gradient_at(&s.to_vec())?);
        }
        PosHomCPWL::from_sectors(breaks, grads)
    }

    pub fn neg(&self) -> HingeFunction {
        HingeFunction::new(self.base.neg(), self.minus.clone(), self.plus.clone())
    }

    /// k h for any rational k.
    pub fn scale(&self, k: &Rational) -> HingeFunction {
        let terms = self.weighted_terms().into_iter().map(|(w, t)| (w * k, t)).collect();
        HingeFunction::from_weighted(self.base.scale(k), terms)
    }

    pub fn add(&self, o: &HingeFunction) -> HingeFunction {
        let mut terms = self.weighted_terms();
        terms.extend(o.weighted_terms());
        HingeFunction::from_weighted(self.base.add(&o.base), terms)
    }

    /// x -> h(m x + t), m row-major.
    pub fn compose(&self, m: &[Rational; 4], t: &Vec2) -> HingeFunction {
        HingeFunction::new(
            self.base.compose(m, t),
            self.plus.iter().map(|l| l.compose(m, t)).collect(),
            self.minus.iter().map(|l| l.compose(m, t)).collect(),
        )
    }
}

fn fmt_linear(f: &AffineForm) -> String {
    let mut s = String::new();
    for (coef, var) in [(&f.a, "x"), (&f.b, "y"), (&f.c, "")] {
        if coef.is_zero() {
            continue;
        }
        let neg = coef.is_negative();
        let mag = coef.abs();
        let body = if var.is_empty() {
            format_rational(&mag)
        } else if mag.is_one() {
            var.to_string()
        } else {
            format!("{}{}", format_rational(&mag), var)
        };
        if s.is_empty() {
            s = if neg { format!("-{body}") } else { body };
        } else {
            s.push_str(if neg { " - " } else { " + " });
            s.push_str(&body);
        }
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

impl fmt::Display for HingeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = if self.base.is_zero() && self.num_terms() > 0 { String::new() } else { fmt_linear(&self.base) };
        for (sg, t) in self.terms() {
            let term = format!("|{}|", fmt_linear(t));
            if s.is_empty() {
                s = if sg > 0 { term } else { format!("-{term}") };
            } else {
                s.push_str(if sg > 0 { " + " } else { " - " });
                s.push_str(&term);
            }
        }
        write!(f, "{s}")
    }
}

impl fmt::Debug for HingeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HingeFunction({self})")
    }
}

/// Positively homogeneous continuous piecewise-linear function given by its
/// gradient on each open sector between consecutive break rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosHomCPWL {
    breaks: Vec<Direction>,
    gradients: Vec<Vec2>,
}

impl PosHomCPWL {
    pub fn linear(g: Vec2) -> Self {
        PosHomCPWL { breaks: vec![], gradients: vec![g] }
    }

    /// Validates the invariants: strictly increasing angular order, one gradient
    /// per sector, consecutive gradients distinct, jumps orthogonal to breaks.
    pub fn new(breaks: Vec<Direction>, gradients: Vec<Vec2>) -> Result<Self, HingeError> {
        let bad = |m: &str| Err(HingeError::MalformedPosHom(m.to_string()));
        if breaks.is_empty() {
            if gradients.len() != 1 {
                return bad("a linear function has exactly one gradient");
            }
            return Ok(PosHomCPWL { breaks, gradients });
        }
        if gradients.len() != breaks.len() {
            return bad("one gradient per sector");
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return bad("breaks must be in strict counterclockwise order");
        }
        let n = breaks.len();
        for k in 0..n {
            let before = &gradients[(k + n - 1) % n];
            let after = &gradients[k];
            if before == after {
                return bad("consecutive gradients must differ");
            }
            if !after.sub(before).dot_dir(breaks[k]).is_zero() {
                return bad("gradient jump is not orthogonal to its break");
            }
        }
        Ok(PosHomCPWL { breaks, gradients })
    }

    /// Like `new`, but sorts the sectors and drops breaks with no jump.
    pub fn from_sectors(breaks: Vec<Direction>, gradients: Vec<Vec2>) -> Result<Self, HingeError> {
        if breaks.len() != gradients.len() {
            return Err(HingeError::MalformedPosHom("one gradient per sector".into()));
        }
        let mut pairs: Vec<(Direction, Vec2)> = breaks.into_iter().zip(gradients).collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(HingeError::MalformedPosHom("duplicate break".into()));
        }
        let n = pairs.len();
        let keep: Vec<bool> = (0..n).map(|k| pairs[(k + n - 1) % n].1 != pairs[k].1).collect();
        let kept: Vec<(Direction, Vec2)> =
            pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(p, _)| p.clone()).collect();
        if kept.is_empty() {
            let g = pairs.first().map(|p| p.1.clone()).unwrap_or_else(Vec2::zero);
            return Ok(PosHomCPWL::linear(g));
        }
        let (b, g) = kept.into_iter().unzip();
        PosHomCPWL::new(b, g)
    }

    /// The function interpolating `values` (value at the primitive point of each
    /// ray) linearly on every sector. Consecutive rays must span less than π.
    pub fn from_ray_values(rays: &[(Direction, Rational)]) -> Result<Self, HingeError> {
        let mut rays = rays.to_vec();
        rays.sort_by(|a, b| a.0.cmp(&b.0));
        let n = rays.len();
        if n < 3 {
            return Err(HingeError::MalformedPosHom("need at least three rays".into()));
        }
        let mut breaks = Vec::new();
        let mut grads = Vec::new();
        for k in 0..n {
            let (d1, v1) = &rays[k];
            let (d2, v2) = &rays[(k + 1) % n];
            if d1.cross(*d2) <= 0 {
                return Err(HingeError::MalformedPosHom("consecutive rays must span less than π".into()));
            }
            let g = crate::exact::solve2(
                &int(d1.dx()),
                &int(d1.dy()),
                &int(d2.dx()),
                &int(d2.dy()),
                v1,
                v2,
            )
            .expect("independent rays");
            breaks.push(*d1);
            grads.push(g);
        }
        PosHomCPWL::from_sectors(breaks, grads)
    }

    pub fn breaks(&self) -> &[Direction] {
        &self.breaks
    }

    pub fn gradients(&self) -> &[Vec2] {
        &self.gradients
    }

    pub fn is_linear(&self) -> bool {
        self.breaks.is_empty()
    }

    /// Index of the sector [breaks[k], breaks[k+1]) holding `d`.
    pub fn sector_of(&self, d: Direction) -> usize {
        if self.breaks.is_empty() {
            return 0;
        }
        let n = self.breaks.len();
        match self.breaks.binary_search(&d) {
            Ok(k) => k,
            Err(0) => n - 1,
            Err(k) => k - 1,
        }
    }

    pub fn gradient_toward(&self, d: Direction) -> &Vec2 {
        &self.gradients[self.sector_of(d)]
    }

    pub fn evaluate(&self, p: &Point2) -> Rational {
        match Direction::from_vec(p) {
            Err(_) => Rational::zero(),
            Ok(d) => self.gradient_toward(d).dot(p),
        }
    }

    /// One interior direction per sector.
    pub fn sector_samples(&self) -> Vec<Direction> {
        if self.breaks.is_empty() {
            return vec![Direction::of(1, 0)];
        }
        let n = self.breaks.len();
        (0..n)
            .map(|k| {
                let (a, b) = (self.breaks[k], self.breaks[(k + 1) % n]);
                if n == 1 {
                    a.neg()
                } else {
                    sample_inside_arc(a, b).expect("distinct breaks")
                }
            })
            .collect()
    }

    /// Jump scalar at break k: gradient(after) - gradient(before) = lambda * perp(d).
    pub fn jump(&self, k: usize) -> Rational {
        let n = self.breaks.len();
        let d = self.breaks[k];
        let j = self.gradients[k].sub(&self.gradients[(k + n - 1) % n]);
        let p = d.perp();
        j.dot_dir(p) / int(p.dx() * p.dx() + p.dy() * p.dy())
    }

    /// Jump scalar at any direction (zero off the breaks).
    pub fn jump_at(&self, d: Direction) -> Rational {
        match self.breaks.binary_search(&d) {
            Ok(k) => self.jump(k),
            Err(_) => Rational::zero(),
        }
    }

    pub fn add_linear(&self, e: &Vec2) -> PosHomCPWL {
        PosHomCPWL {
            breaks: self.breaks.clone(),
            gradients: self.gradients.iter().map(|g| g.add(e)).collect(),
        }
    }

    /// True iff the function takes equal values at antipodal points.
    pub fn is_symmetric(&self) -> bool {
        self.sector_samples().iter().all(|d| {
            let p = d.to_vec();
            self.evaluate(&p) == self.evaluate(&p.neg())
        }) && self.breaks.iter().all(|d| {
            let p = d.to_vec();
            self.evaluate(&p) == self.evaluate(&p.neg())
        })
    }
}

/// f = s + e . x with s centrally symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricDecomposition {
    pub s_part: PosHomCPWL,
    pub e: Vec2,
}

impl SymmetricDecomposition {
    pub fn evaluate(&self, p: &Point2) -> Rational {
        self.s_part.evaluate(p) + self.e.dot(p)
    }
}

pub fn decompose_symmetric(f: &PosHomCPWL) -> Result<SymmetricDecomposition, HingeError> {
    if f.is_linear() {
        return Ok(SymmetricDecomposition { s_part: PosHomCPWL::linear(Vec2::zero()), e: f.gradients[0].clone() });
    }
    for (k, d) in f.breaks.iter().enumerate() {
        if f.jump(k) != f.jump_at(d.neg()) {
            return Err(HingeError::NotDecomposable(*d));
        }
    }
    let mut e: Option<Vec2> = None;
    for u in f.sector_samples() {
        let sum = f.gradient_toward(u).add(f.gradient_toward(u.neg()));
        let cand = sum.scale(&crate::exact::rat(1, 2));
        match &e {
            None => e = Some(cand),
            Some(prev) if *prev != cand => {
                return Err(HingeError::InternalInconsistency("antipodal gradient averages disagree".into()))
            }
            _ => {}
        }
    }
    let e = e.expect("at least one sector");
    let s_part = f.add_linear(&e.neg());
    Ok(SymmetricDecomposition { s_part, e })
}

/// Rebuilds a homogeneous hinge function from a decomposition by removing one
/// line of non-differentiability at a time.
pub fn peel_to_hinge(dec: &SymmetricDecomposition) -> Result<HingeFunction, HingeError> {
    let s = &dec.s_part;
    let mut terms: Vec<(Rational, AffineForm)> = Vec::new();
    for (k, d) in s.breaks.iter().enumerate() {
        // one representative per line: angle in [0, π)
        if !(d.dy() > 0 || (d.dy() == 0 && d.dx() > 0)) {
            continue;
        }
        let n = d.perp();
        terms.push((s.jump(k) / int(2), AffineForm::ints(n.dx(), n.dy(), 0)));
    }
    let peeled = HingeFunction::from_weighted(AffineForm::zero(), terms);
    let mut residual: Option<Vec2> = None;
    let samples = s.sector_samples();
    for u in &samples {
        let g = s.gradient_toward(*u).sub(&peeled.gradient_at(&u.to_vec())?);
        match &residual {
            None => residual = Some(g),
            Some(r) if *r != g => {
                return Err(HingeError::InternalInconsistency("residual after peeling is not linear".into()))
            }
            _ => {}
        }
    }
    let r = residual.unwrap_or_else(Vec2::zero);
    let h = HingeFunction::from_weighted(AffineForm::linear(&dec.e.add(&r)), peeled.weighted_terms());
    for u in s.breaks.iter().chain(samples.iter()) {
        let p = u.to_vec();
        if h.evaluate(&p) != dec.evaluate(&p) {
            return Err(HingeError::InternalInconsistency(format!("peeled function differs at {u}")));
        }
    }
    Ok(h)
}
