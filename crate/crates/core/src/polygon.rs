//! Convex polygons as state spaces, in exact rational arithmetic.
//!
//! Pure states are the vertices. Two states are orthogonal when some test
//! separates them perfectly inside the smallest face containing both, and a
//! decomposition is orthogonal when its vertices are pairwise orthogonal.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::spectral::{majorize_compare_with, Majorization};

pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q`, an integer, or a finite decimal such as `-0.125`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: {text:?}"));
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let (sign, int) = match int.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int.strip_prefix('+').unwrap_or(int)),
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{}{frac}", if int.is_empty() { "0" } else { int });
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(n * sign, d));
    }
    Ok(Rational::from_integer(t.parse().map_err(|_| bad())?))
}

/// `p/q` with `q > 1`, or the integer itself.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn from_ratios(x: (i64, i64), y: (i64, i64)) -> Self {
        Self::new(rational(x.0, x.1), rational(y.0, y.1))
    }

    /// Parses `x,y` with each coordinate as in [`parse_rational`].
    pub fn parse(text: &str) -> Result<Self> {
        let (x, y) = text
            .split_once(',')
            .ok_or_else(|| Error::InvalidArgument(format!("expected x,y but got {text:?}")))?;
        Ok(Self::new(parse_rational(x)?, parse_rational(y)?))
    }

    fn sub(&self, o: &Point) -> (Rational, Rational) {
        (&self.x - &o.x, &self.y - &o.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

fn cross(u: &(Rational, Rational), v: &(Rational, Rational)) -> Rational {
    &u.0 * &v.1 - &u.1 * &v.0
}

/// `φ(x, y) = a·x + b·y + c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineTest {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl AffineTest {
    pub fn eval(&self, p: &Point) -> Rational {
        &self.a * &p.x + &self.b * &p.y + &self.c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Face {
    Vertex(usize),
    /// Edge from vertex `i` to vertex `i + 1` (cyclically).
    Edge(usize),
    Whole,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionKind {
    /// Unique weights on an affinely independent vertex set; these are also the
    /// extreme points of every larger clique's weight polytope.
    Basic,
    /// Barycenter of the extreme points of a dependent clique's weight polytope,
    /// reported when it has all weights positive.
    FamilyCenter,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoDecomposition {
    /// Vertices with strictly positive weights.
    pub parts: Vec<(Point, Rational)>,
    /// Weights in descending order.
    pub spectrum: Vec<Rational>,
    pub kind: DecompositionKind,
}

impl OrthoDecomposition {
    fn new(parts: Vec<(Point, Rational)>, kind: DecompositionKind) -> Self {
        let mut spectrum: Vec<Rational> = parts.iter().map(|(_, w)| w.clone()).collect();
        spectrum.sort_by(|a, b| b.cmp(a));
        Self {
            parts,
            spectrum,
            kind,
        }
    }

    pub fn entropy(&self) -> f64 {
        spectrum_entropy(&self.spectrum)
    }

    pub fn reconstruct(&self) -> Point {
        let mut x = Rational::zero();
        let mut y = Rational::zero();
        for (p, w) in &self.parts {
            x += w * &p.x;
            y += w * &p.y;
        }
        Point::new(x, y)
    }
}

pub fn spectrum_entropy(spectrum: &[Rational]) -> f64 {
    spectrum
        .iter()
        .map(|w| w.to_f64().unwrap_or(0.0))
        .filter(|w| *w > 0.0)
        .map(|w| -w * w.ln())
        .sum()
}

/// Strictly convex polygon with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonSpace {
    vertices: Vec<Point>,
    orthogonal: Vec<Vec<bool>>,
}

impl PolygonSpace {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidPolygon(format!("{n} vertices, need at least 3")));
        }
        for i in 0..n {
            let (a, b, c) = (&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
            if !cross(&b.sub(a), &c.sub(b)).is_positive() {
                return Err(Error::InvalidPolygon(format!(
                    "vertices {a}, {b}, {c} do not turn strictly counterclockwise"
                )));
            }
        }
        // a cycle can turn left at every vertex and still wind more than once
        for i in 1..n - 1 {
            let u = vertices[i].sub(&vertices[0]);
            let v = vertices[i + 1].sub(&vertices[0]);
            if !cross(&u, &v).is_positive() {
                return Err(Error::InvalidPolygon("vertex cycle is not simple".into()));
            }
        }
        let mut space = Self {
            vertices,
            orthogonal: Vec::new(),
        };
        space.orthogonal = (0..n)
            .map(|i| (0..n).map(|j| space.orthogonal(&space.vertices[i], &space.vertices[j])).collect())
            .collect();
        Ok(space)
    }

    pub fn unit_square() -> Self {
        Self::new(vec![
            Point::from_ratios((0, 1), (0, 1)),
            Point::from_ratios((1, 1), (0, 1)),
            Point::from_ratios((1, 1), (1, 1)),
            Point::from_ratios((0, 1), (1, 1)),
        ])
        .expect("unit square is convex")
    }

    pub fn triangle() -> Self {
        Self::new(vec![
            Point::from_ratios((0, 1), (0, 1)),
            Point::from_ratios((1, 1), (0, 1)),
            Point::from_ratios((0, 1), (1, 1)),
        ])
        .expect("triangle is convex")
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    fn edge(&self, i: usize) -> (&Point, &Point) {
        (&self.vertices[i], &self.vertices[(i + 1) % self.vertices.len()])
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0..self.vertices.len()).all(|i| {
            let (a, b) = self.edge(i);
            !cross(&b.sub(a), &p.sub(a)).is_negative()
        })
    }

    fn check_inside(&self, p: &Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OutsidePolygon(p.x.to_string(), p.y.to_string()))
        }
    }

    fn on_edge(&self, i: usize, p: &Point) -> bool {
        let (a, b) = self.edge(i);
        cross(&b.sub(a), &p.sub(a)).is_zero()
    }

    /// Maximal number of pairwise orthogonal vertices.
    pub fn rank(&self) -> usize {
        self.cliques(self.vertices.len())
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(1)
    }

    pub fn vertices_orthogonal(&self, i: usize, j: usize) -> bool {
        self.orthogonal[i][j]
    }

    /// All cliques of the vertex-orthogonality graph with at most `max` members.
    pub fn cliques(&self, max: usize) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        while let Some(c) = stack.pop() {
            if c.len() < max {
                let last = *c.last().unwrap();
                for j in last + 1..n {
                    if c.iter().all(|&i| self.orthogonal[i][j]) {
                        let mut next = c.clone();
                        next.push(j);
                        stack.push(next);
                    }
                }
            }
            out.push(c);
        }
        out.sort();
        out
    }
}

/// `coef·z ≤ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Ineq {
    coef: Vec<Rational>,
    rhs: Rational,
}

impl Ineq {
    fn normalized(mut self) -> Self {
        let scale = self
            .coef
            .iter()
            .chain(std::iter::once(&self.rhs))
            .find(|c| !c.is_zero())
            .map(Rational::abs);
        if let Some(s) = scale {
            for c in self.coef.iter_mut() {
                *c /= &s;
            }
            self.rhs /= &s;
        }
        self
    }
}

/// Feasibility of a small linear system by Fourier–Motzkin elimination, with
/// a witness recovered by back-substitution.
fn fourier_motzkin(constraints: Vec<Ineq>, n: usize) -> Option<Vec<Rational>> {
    let mut stages = vec![constraints];
    for k in 0..n {
        let cur = &stages[k];
        let mut next = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for c in cur {
            match c.coef[k].cmp(&Rational::zero()) {
                Ordering::Greater => pos.push(c),
                Ordering::Less => neg.push(c),
                Ordering::Equal => next.push(c.clone()),
            }
        }
        for p in &pos {
            for q in &neg {
                let (wp, wq) = (-&q.coef[k], p.coef[k].clone());
                let coef = p
                    .coef
                    .iter()
                    .zip(&q.coef)
                    .map(|(a, b)| &wp * a + &wq * b)
                    .collect();
                next.push(
                    Ineq {
                        coef,
                        rhs: &wp * &p.rhs + &wq * &q.rhs,
                    }
                    .normalized(),
                );
            }
        }
        next.sort();
        next.dedup();
        stages.push(next);
    }
    if stages[n].iter().any(|c| c.rhs.is_negative()) {
        return None;
    }
    let mut z = vec![Rational::zero(); n];
    for k in (0..n).rev() {
        let (mut lo, mut hi): (Option<Rational>, Option<Rational>) = (None, None);
        for c in &stages[k] {
            let ck = &c.coef[k];
            if ck.is_zero() {
                continue;
            }
            let rest: Rational = (k + 1..n).map(|j| &c.coef[j] * &z[j]).sum();
            let bound = (&c.rhs - rest) / ck;
            if ck.is_positive() {
                hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
            } else {
                lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
            }
        }
        let zero = Rational::zero();
        z[k] = match (lo, hi) {
            (Some(l), Some(h)) if l <= zero && zero <= h => zero,
            (Some(l), Some(h)) => {
                debug_assert!(l <= h);
                if l > zero {
                    l
                } else {
                    h
                }
            }
            (Some(l), None) => l.max(zero),
            (None, Some(h)) => h.min(zero),
            (None, None) => zero,
        };
    }
    Some(z)
}

fn test_constraints(bounds: &[&Point], s1: &Point, s0: &Point) -> Vec<Ineq> {
    let row = |p: &Point| vec![p.x.clone(), p.y.clone(), Rational::one()];
    let neg = |v: Vec<Rational>| v.into_iter().map(|c| -c).collect::<Vec<_>>();
    let mut cons = vec![
        Ineq {
            coef: row(s1),
            rhs: Rational::one(),
        },
        Ineq {
            coef: neg(row(s1)),
            rhs: -Rational::one(),
        },
        Ineq {
            coef: row(s0),
            rhs: Rational::zero(),
        },
        Ineq {
            coef: neg(row(s0)),
            rhs: Rational::zero(),
        },
    ];
    for v in bounds {
        cons.push(Ineq {
            coef: row(v),
            rhs: Rational::one(),
        });
        cons.push(Ineq {
            coef: neg(row(v)),
            rhs: Rational::zero(),
        });
    }
    cons
}

fn find_test_on(bounds: &[&Point], s1: &Point, s0: &Point) -> Option<AffineTest> {
    let z = fourier_motzkin(test_constraints(bounds, s1, s0), 3)?;
    let [a, b, c]: [Rational; 3] = z.try_into().ok()?;
    Some(AffineTest { a, b, c })
}

impl PolygonSpace {
    /// A test with `φ(σ₁) = 1`, `φ(σ₀) = 0` and `0 ≤ φ ≤ 1` on the polygon.
    pub fn find_test(&self, s1: &Point, s0: &Point) -> Result<Option<AffineTest>> {
        self.check_inside(s1)?;
        self.check_inside(s0)?;
        let bounds: Vec<&Point> = self.vertices.iter().collect();
        Ok(find_test_on(&bounds, s1, s0))
    }

    pub fn smallest_face(&self, points: &[Point]) -> Result<Face> {
        for p in points {
            self.check_inside(p)?;
        }
        let Some(first) = points.first() else {
            return Ok(Face::Whole);
        };
        if let Some(i) = self.vertices.iter().position(|v| v == first) {
            if points.iter().all(|p| p == first) {
                return Ok(Face::Vertex(i));
            }
        }
        for i in 0..self.vertices.len() {
            if points.iter().all(|p| self.on_edge(i, p)) {
                return Ok(Face::Edge(i));
            }
        }
        Ok(Face::Whole)
    }

    fn face_vertices(&self, face: Face) -> Vec<&Point> {
        match face {
            Face::Vertex(i) => vec![&self.vertices[i]],
            Face::Edge(i) => {
                let (a, b) = self.edge(i);
                vec![a, b]
            }
            Face::Whole => self.vertices.iter().collect(),
        }
    }

    /// Perfect distinguishability in both directions inside the smallest face.
    pub fn orthogonal(&self, s1: &Point, s2: &Point) -> bool {
        if s1 == s2 {
            return false;
        }
        let Ok(face) = self.smallest_face(&[s1.clone(), s2.clone()]) else {
            return false;
        };
        let bounds = self.face_vertices(face);
        find_test_on(&bounds, s1, s2).is_some() && find_test_on(&bounds, s2, s1).is_some()
    }

    /// Weights of `point` over an affinely independent vertex subset (1 to 3
    /// vertices), or `None` if `point` is not in its affine hull.
    fn affine_weights(&self, subset: &[usize], p: &Point) -> Option<Vec<Rational>> {
        let v = |i: usize| &self.vertices[subset[i]];
        match subset.len() {
            1 => (v(0) == p).then(|| vec![Rational::one()]),
            2 => {
                let d = v(1).sub(v(0));
                let r = p.sub(v(0));
                if !cross(&d, &r).is_zero() {
                    return None;
                }
                let t = (&d.0 * &r.0 + &d.1 * &r.1) / (&d.0 * &d.0 + &d.1 * &d.1);
                Some(vec![Rational::one() - &t, t])
            }
            3 => {
                let (e1, e2, r) = (v(1).sub(v(0)), v(2).sub(v(0)), p.sub(v(0)));
                let det = cross(&e1, &e2);
                let l1 = cross(&r, &e2) / &det;
                let l2 = cross(&e1, &r) / &det;
                Some(vec![Rational::one() - &l1 - &l2, l1, l2])
            }
            _ => None,
        }
    }

    /// Orthogonal decompositions of `point` over cliques of at most `max_terms`
    /// vertices: every basic one, plus the center of each dependent clique's
    /// weight polytope when that center has all weights positive.
    pub fn orthogonal_decompositions(
        &self,
        point: &Point,
        max_terms: usize,
    ) -> Result<Vec<OrthoDecomposition>> {
        self.check_inside(point)?;
        let cliques = self.cliques(max_terms);
        let mut out: Vec<OrthoDecomposition> = Vec::new();
        let positive = |w: &[Rational]| w.iter().all(Rational::is_positive);
        for c in cliques.iter().filter(|c| c.len() <= 3) {
            if let Some(w) = self.affine_weights(c, point).filter(|w| positive(w)) {
                let parts = c.iter().map(|&i| self.vertices[i].clone()).zip(w).collect();
                out.push(OrthoDecomposition::new(parts, DecompositionKind::Basic));
            }
        }
        for c in cliques.iter().filter(|c| c.len() > 3) {
            // extreme points of {λ ≥ 0 : Σλᵢvᵢ = point, Σλᵢ = 1}
            let mut extremes: Vec<Vec<Rational>> = Vec::new();
            for sub in cliques.iter().filter(|s| s.len() <= 3 && s.iter().all(|i| c.contains(i))) {
                if let Some(w) = self
                    .affine_weights(sub, point)
                    .filter(|w| w.iter().all(|x| !x.is_negative()))
                {
                    let mut full = vec![Rational::zero(); c.len()];
                    for (i, wi) in sub.iter().zip(w) {
                        full[c.iter().position(|j| j == i).unwrap()] = wi;
                    }
                    if !extremes.contains(&full) {
                        extremes.push(full);
                    }
                }
            }
            if extremes.is_empty() {
                continue;
            }
            let count = Rational::from_integer(BigInt::from(extremes.len()));
            let center: Vec<Rational> = (0..c.len())
                .map(|k| extremes.iter().map(|e| e[k].clone()).sum::<Rational>() / &count)
                .collect();
            if positive(&center) {
                let parts = c.iter().map(|&i| self.vertices[i].clone()).zip(center).collect();
                out.push(OrthoDecomposition::new(parts, DecompositionKind::FamilyCenter));
            }
        }
        Ok(out)
    }

    /// `inf −Σλ ln λ` over orthogonal decompositions, with a minimizing witness.
    ///
    /// Entropy is concave along each weight family, so the infimum is attained
    /// at a basic decomposition.
    pub fn entropy(&self, point: &Point) -> Result<(f64, OrthoDecomposition)> {
        let decs = self.orthogonal_decompositions(point, 4)?;
        decs.into_iter()
            .map(|d| (d.entropy(), d))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .ok_or_else(|| {
                Error::InvalidPolygon(format!("no orthogonal decomposition of {point}"))
            })
    }
}

/// Regular grid of `(n+1)²` points over the bounding box, restricted to the polygon.
pub fn grid_points(space: &PolygonSpace, n: usize) -> Vec<Point> {
    let n = n.max(1);
    let v = space.vertices();
    let min_x = v.iter().map(|p| &p.x).min().unwrap();
    let max_x = v.iter().map(|p| &p.x).max().unwrap();
    let min_y = v.iter().map(|p| &p.y).min().unwrap();
    let max_y = v.iter().map(|p| &p.y).max().unwrap();
    let step = |lo: &Rational, hi: &Rational, i: usize| {
        lo + (hi - lo) * rational(i as i64, n as i64)
    };
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            let p = Point::new(step(min_x, max_x, i), step(min_y, max_y, j));
            if space.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointReport {
    pub point: Point,
    /// Distinct spectra among the orthogonal decompositions, sorted.
    pub spectra: Vec<Vec<Rational>>,
    /// Fewest terms in any orthogonal decomposition.
    pub min_terms: Option<usize>,
    pub entropy: f64,
}

impl PointReport {
    pub fn is_spectral(&self) -> bool {
        self.spectra.len() <= 1
    }

    /// Largest entropy difference between two of the point's spectra.
    pub fn entropy_gap(&self) -> f64 {
        let h: Vec<f64> = self.spectra.iter().map(|s| spectrum_entropy(s)).collect();
        let max = h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = h.iter().copied().fold(f64::INFINITY, f64::min);
        if h.is_empty() {
            0.0
        } else {
            max - min
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralityWitness {
    pub point: Point,
    /// Spectra of least and greatest entropy at the point.
    pub low: Vec<Rational>,
    pub high: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub points: Vec<PointReport>,
    pub rank: usize,
    pub max_terms: usize,
    /// No sampled point has two distinct spectra.
    pub spectral: bool,
    /// Every sampled point has an orthogonal decomposition with at most 3 terms.
    pub caratheodory: bool,
    /// Non-spectral point with the largest entropy gap (earliest on ties).
    pub witness: Option<SpectralityWitness>,
}

/// Spectra of orthogonal decompositions at each point. Only orthogonal
/// decompositions are enumerated.
pub fn spectrality_probe(
    space: &PolygonSpace,
    points: &[Point],
    exec: Execution,
) -> Result<ProbeReport> {
    const MAX_TERMS: usize = 4;
    let reports = map_indexed(exec, points.len(), |k| -> Result<PointReport> {
        let p = &points[k];
        let decs = space.orthogonal_decompositions(p, MAX_TERMS)?;
        let mut spectra: Vec<Vec<Rational>> = decs.iter().map(|d| d.spectrum.clone()).collect();
        spectra.sort();
        spectra.dedup();
        let entropy = decs
            .iter()
            .map(OrthoDecomposition::entropy)
            .fold(f64::INFINITY, f64::min);
        Ok(PointReport {
            point: p.clone(),
            spectra,
            min_terms: decs.iter().map(|d| d.parts.len()).min(),
            entropy,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut witness: Option<(f64, &PointReport)> = None;
    for r in reports.iter().filter(|r| !r.is_spectral()) {
        let gap = r.entropy_gap();
        if witness.is_none_or(|(g, _)| gap > g + 1e-12) {
            witness = Some((gap, r));
        }
    }
    let witness = witness.map(|(_, r)| {
        let by_entropy = |s: &&Vec<Rational>| spectrum_entropy(s);
        let low = r
            .spectra
            .iter()
            .min_by(|a, b| by_entropy(a).total_cmp(&by_entropy(b)))
            .unwrap();
        let high = r
            .spectra
            .iter()
            .max_by(|a, b| by_entropy(a).total_cmp(&by_entropy(b)))
            .unwrap();
        SpectralityWitness {
            point: r.point.clone(),
            low: low.clone(),
            high: high.clone(),
        }
    });
    Ok(ProbeReport {
        spectral: reports.iter().all(PointReport::is_spectral),
        caratheodory: reports.iter().all(|r| r.min_terms.is_some_and(|t| t <= 3)),
        rank: space.rank(),
        max_terms: MAX_TERMS,
        points: reports,
        witness,
    })
}

/// Exact majorization comparison of two rational spectra.
pub fn majorize_rational(a: &[Rational], b: &[Rational]) -> Result<Majorization> {
    majorize_compare_with(a, b, Rational::zero())
}
