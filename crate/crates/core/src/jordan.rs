//! Elements of the five simple formally real Jordan algebras.
//!
//! Spin factors store `(s, v)` with product `(s,u)∘(t,v) = (st + u·v, sv + tu)`
//! and trace `tr(s, u) = 2s`, so the unit has trace equal to the rank.
//! Hermitian matrix algebras (including the Albert algebra) store a row-major
//! `n × n` array of [`Coefficient`]s and use `x∘y = ½(xy + yx)`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::division::{Coefficient, Ring};
use crate::error::{Error, Result};

/// Tolerance for accepting near-Hermitian input before symmetrizing.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Identifies a simple Euclidean Jordan algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algebra {
    /// Spin factor `ℝ ⊕ ℝ^d`.
    Spin(usize),
    /// Hermitian `n × n` matrices over ℝ, ℂ or ℍ.
    Herm(Ring, usize),
    /// Hermitian `3 × 3` octonionic matrices.
    Albert,
}

impl Algebra {
    pub fn spin(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidAlgebra("spin factor needs d >= 1".into()));
        }
        Ok(Algebra::Spin(d))
    }

    pub fn herm(ring: Ring, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAlgebra("matrix size must be >= 1".into()));
        }
        if ring == Ring::O {
            return Err(Error::InvalidAlgebra(
                "octonionic matrices are only supported as the 3x3 Albert algebra".into(),
            ));
        }
        Ok(Algebra::Herm(ring, n))
    }

    pub fn validate(self) -> Result<Self> {
        match self {
            Algebra::Spin(d) => Algebra::spin(d),
            Algebra::Herm(ring, n) => Algebra::herm(ring, n),
            Algebra::Albert => Ok(self),
        }
    }

    pub fn rank(self) -> usize {
        match self {
            Algebra::Spin(_) => 2,
            Algebra::Herm(_, n) => n,
            Algebra::Albert => 3,
        }
    }

    /// `(ring, n)` for matrix algebras.
    pub fn matrix_shape(self) -> Option<(Ring, usize)> {
        match self {
            Algebra::Spin(_) => None,
            Algebra::Herm(ring, n) => Some((ring, n)),
            Algebra::Albert => Some((Ring::O, 3)),
        }
    }

    /// Dimension as a real vector space.
    pub fn real_dim(self) -> usize {
        match self {
            Algebra::Spin(d) => d + 1,
            _ => {
                let (ring, n) = self.matrix_shape().unwrap();
                n + ring.dim() * n * (n - 1) / 2
            }
        }
    }

    /// Special (embeddable in an associative algebra) — everything except Albert.
    pub fn is_special(self) -> bool {
        !matches!(self, Algebra::Albert)
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algebra::Spin(d) => write!(f, "Spin({d})"),
            Algebra::Herm(r, n) => write!(f, "Herm({r},{n})"),
            Algebra::Albert => f.write_str("Albert"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Data {
    Spin { s: f64, v: Vec<f64> },
    Matrix(Vec<Coefficient>),
}

/// An element of a simple Jordan algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    algebra: Algebra,
    data: Data,
}

impl Element {
    pub fn spin(s: f64, v: Vec<f64>) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::InvalidAlgebra("spin factor needs d >= 1".into()));
        }
        if !s.is_finite() || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidElement("non-finite spin coordinate".into()));
        }
        Ok(Self {
            algebra: Algebra::Spin(v.len()),
            data: Data::Spin { s, v },
        })
    }

    /// Builds a Hermitian matrix element from row-major entries.
    ///
    /// Entries must be conjugate-symmetric within [`HERMITIAN_TOL`] (scaled by the
    /// largest entry); the stored value is the symmetrized `½(x + x†)`.
    pub fn hermitian(algebra: Algebra, entries: Vec<Coefficient>) -> Result<Self> {
        let algebra = algebra.validate()?;
        let (ring, n) = algebra.matrix_shape().ok_or_else(|| {
            Error::InvalidElement(format!("{algebra} is not a matrix algebra"))
        })?;
        if entries.len() != n * n {
            return Err(Error::InvalidElement(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        if let Some(c) = entries.iter().find(|c| c.ring() != ring) {
            return Err(Error::RingMismatch(ring, c.ring()));
        }
        if entries.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidElement("non-finite matrix entry".into()));
        }
        let scale = entries.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let a = entries[i * n + j];
                let b = entries[j * n + i].conj();
                worst = worst.max(a.max_abs_diff(&b));
            }
        }
        if worst > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(worst));
        }
        Ok(Self::symmetrized(algebra, entries))
    }

    pub(crate) fn symmetrized(algebra: Algebra, mut entries: Vec<Coefficient>) -> Self {
        let n = algebra.matrix_shape().expect("matrix algebra").1;
        for i in 0..n {
            let d = entries[i * n + i];
            entries[i * n + i] = Coefficient::real(d.ring(), d.re());
            for j in (i + 1)..n {
                let avg = (entries[i * n + j] + entries[j * n + i].conj()).scale(0.5);
                entries[i * n + j] = avg;
                entries[j * n + i] = avg.conj();
            }
        }
        Self {
            algebra,
            data: Data::Matrix(entries),
        }
    }

    pub fn diagonal(algebra: Algebra, diag: &[f64]) -> Result<Self> {
        let (ring, n) = algebra
            .validate()?
            .matrix_shape()
            .ok_or_else(|| Error::InvalidElement(format!("{algebra} has no diagonal form")))?;
        if diag.len() != n {
            return Err(Error::InvalidElement(format!(
                "expected {n} diagonal entries, got {}",
                diag.len()
            )));
        }
        let mut entries = vec![Coefficient::zero(ring); n * n];
        for (i, d) in diag.iter().enumerate() {
            entries[i * n + i] = Coefficient::real(ring, *d);
        }
        Self::hermitian(algebra, entries)
    }

    pub fn zero(algebra: Algebra) -> Self {
        match algebra {
            Algebra::Spin(d) => Self {
                algebra,
                data: Data::Spin {
                    s: 0.0,
                    v: vec![0.0; d],
                },
            },
            _ => {
                let (ring, n) = algebra.matrix_shape().unwrap();
                Self {
                    algebra,
                    data: Data::Matrix(vec![Coefficient::zero(ring); n * n]),
                }
            }
        }
    }

    pub fn unit(algebra: Algebra) -> Self {
        Self::zero(algebra).add_scaled_unit(1.0)
    }

    /// The primitive diagonal idempotent `E_kk` (matrix algebras) or
    /// `½(1, ±e₁)` for spin factors (`k = 0` gives `+`).
    pub fn diagonal_unit(algebra: Algebra, k: usize) -> Self {
        match algebra {
            Algebra::Spin(d) => {
                assert!(k < 2);
                let mut v = vec![0.0; d];
                v[0] = if k == 0 { 0.5 } else { -0.5 };
                Self {
                    algebra,
                    data: Data::Spin { s: 0.5, v },
                }
            }
            _ => {
                let (ring, n) = algebra.matrix_shape().unwrap();
                assert!(k < n);
                let mut entries = vec![Coefficient::zero(ring); n * n];
                entries[k * n + k] = Coefficient::one(ring);
                Self {
                    algebra,
                    data: Data::Matrix(entries),
                }
            }
        }
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    /// `(s, v)` for spin-factor elements.
    pub fn spin_parts(&self) -> Option<(f64, &[f64])> {
        match &self.data {
            Data::Spin { s, v } => Some((*s, v)),
            Data::Matrix(_) => None,
        }
    }

    /// Row-major entries for matrix elements.
    pub fn entries(&self) -> Option<&[Coefficient]> {
        match &self.data {
            Data::Matrix(m) => Some(m),
            Data::Spin { .. } => None,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<Coefficient> {
        let n = self.algebra.matrix_shape()?.1;
        self.entries().map(|m| m[i * n + j])
    }

    fn check_same(&self, other: &Element) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch(self.algebra, other.algebra));
        }
        Ok(())
    }

    /// Jordan product `x∘y`.
    pub fn jordan(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(self.circ(other))
    }

    /// Unchecked Jordan product; panics on algebra mismatch.
    pub(crate) fn circ(&self, other: &Element) -> Element {
        match (&self.data, &other.data) {
            (Data::Spin { s, v: u }, Data::Spin { s: t, v }) => {
                assert_eq!(u.len(), v.len(), "algebra mismatch");
                let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
                let w = u.iter().zip(v).map(|(ui, vi)| s * vi + t * ui).collect();
                Element {
                    algebra: self.algebra,
                    data: Data::Spin {
                        s: s * t + dot,
                        v: w,
                    },
                }
            }
            (Data::Matrix(x), Data::Matrix(y)) => {
                assert_eq!(self.algebra, other.algebra, "algebra mismatch");
                let n = self.algebra.matrix_shape().unwrap().1;
                let ring = self.algebra.matrix_shape().unwrap().0;
                let mut out = vec![Coefficient::zero(ring); n * n];
                for i in 0..n {
                    for j in i..n {
                        let mut acc = Coefficient::zero(ring);
                        for k in 0..n {
                            acc += x[i * n + k] * y[k * n + j];
                            acc += y[i * n + k] * x[k * n + j];
                        }
                        let half = acc.scale(0.5);
                        out[i * n + j] = half;
                        if i != j {
                            out[j * n + i] = half.conj();
                        }
                    }
                }
                for i in 0..n {
                    out[i * n + i] = Coefficient::real(ring, out[i * n + i].re());
                }
                Element {
                    algebra: self.algebra,
                    data: Data::Matrix(out),
                }
            }
            _ => panic!("algebra mismatch"),
        }
    }

    pub fn square(&self) -> Element {
        self.circ(self)
    }

    pub fn trace(&self) -> f64 {
        match &self.data {
            Data::Spin { s, .. } => 2.0 * s,
            Data::Matrix(m) => {
                let n = self.algebra.matrix_shape().unwrap().1;
                (0..n).map(|i| m[i * n + i].re()).sum()
            }
        }
    }

    /// Trace inner product `⟨x, y⟩ = tr[x∘y]`.
    pub fn inner(&self, other: &Element) -> Result<f64> {
        self.check_same(other)?;
        Ok(self.dot(other))
    }

    pub(crate) fn dot(&self, other: &Element) -> f64 {
        match (&self.data, &other.data) {
            (Data::Spin { s, v: u }, Data::Spin { s: t, v }) => {
                2.0 * (s * t + u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>())
            }
            // tr[x∘y] = Σ_ij Re(x_ij · y_ji) = Σ_ij ⟨x_ij, y_ij⟩ for Hermitian y.
            (Data::Matrix(x), Data::Matrix(y)) => x.iter().zip(y).map(|(a, b)| a.dot(b)).sum(),
            _ => panic!("algebra mismatch"),
        }
    }

    /// Norm induced by the trace inner product.
    pub fn norm(&self) -> f64 {
        self.dot(self).max(0.0).sqrt()
    }

    pub fn distance(&self, other: &Element) -> f64 {
        (self - other).norm()
    }

    /// `xᵏ` with `x⁰ = 1` and `xᵏ = x∘xᵏ⁻¹`.
    pub fn power(&self, k: i64) -> Result<Element> {
        if k < 0 {
            return Err(Error::NegativePower(k));
        }
        let mut acc = Element::unit(self.algebra);
        for _ in 0..k {
            acc = self.circ(&acc);
        }
        Ok(acc)
    }

    /// `Σ cᵢ xᵢ` over a nonempty list of same-algebra elements.
    pub fn linear_combine(terms: &[(f64, &Element)]) -> Result<Element> {
        let (_, first) = terms.first().ok_or(Error::EmptyCombination)?;
        let mut acc = Element::zero(first.algebra);
        for (c, x) in terms {
            first.check_same(x)?;
            acc.axpy(*c, x);
        }
        Ok(acc)
    }

    /// `self += c · x`.
    pub(crate) fn axpy(&mut self, c: f64, x: &Element) {
        match (&mut self.data, &x.data) {
            (Data::Spin { s, v }, Data::Spin { s: t, v: w }) => {
                *s += c * t;
                for (a, b) in v.iter_mut().zip(w) {
                    *a += c * b;
                }
            }
            (Data::Matrix(a), Data::Matrix(b)) => {
                assert_eq!(a.len(), b.len(), "algebra mismatch");
                for (p, q) in a.iter_mut().zip(b) {
                    *p += q.scale(c);
                }
            }
            _ => panic!("algebra mismatch"),
        }
    }

    pub fn scale(&self, c: f64) -> Element {
        let mut out = Element::zero(self.algebra);
        out.axpy(c, self);
        out
    }

    pub fn add_scaled_unit(mut self, c: f64) -> Element {
        match &mut self.data {
            Data::Spin { s, .. } => *s += c,
            Data::Matrix(m) => {
                let (ring, n) = self.algebra.matrix_shape().unwrap();
                for i in 0..n {
                    m[i * n + i] += Coefficient::real(ring, c);
                }
            }
        }
        self
    }

    pub fn is_finite(&self) -> bool {
        match &self.data {
            Data::Spin { s, v } => s.is_finite() && v.iter().all(|x| x.is_finite()),
            Data::Matrix(m) => m.iter().all(|c| c.is_finite()),
        }
    }

    /// Coordinates in the orthonormal basis returned by [`orthonormal_basis`].
    pub fn real_coords(&self) -> Vec<f64> {
        let r2 = std::f64::consts::SQRT_2;
        match &self.data {
            Data::Spin { s, v } => {
                let mut out = Vec::with_capacity(v.len() + 1);
                out.push(s * r2);
                out.extend(v.iter().map(|x| x * r2));
                out
            }
            Data::Matrix(m) => {
                let (ring, n) = self.algebra.matrix_shape().unwrap();
                let mut out = Vec::with_capacity(self.algebra.real_dim());
                for i in 0..n {
                    out.push(m[i * n + i].re());
                }
                for i in 0..n {
                    for j in (i + 1)..n {
                        for k in 0..ring.dim() {
                            out.push(m[i * n + j].coords()[k] * r2);
                        }
                    }
                }
                out
            }
        }
    }

    pub fn from_real_coords(algebra: Algebra, coords: &[f64]) -> Result<Element> {
        let algebra = algebra.validate()?;
        if coords.len() != algebra.real_dim() {
            return Err(Error::InvalidElement(format!(
                "expected {} coordinates, got {}",
                algebra.real_dim(),
                coords.len()
            )));
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match algebra {
            Algebra::Spin(_) => {
                Element::spin(coords[0] * h, coords[1..].iter().map(|x| x * h).collect())
            }
            _ => {
                let (ring, n) = algebra.matrix_shape().unwrap();
                let mut entries = vec![Coefficient::zero(ring); n * n];
                for i in 0..n {
                    entries[i * n + i] = Coefficient::real(ring, coords[i]);
                }
                let mut pos = n;
                let d = ring.dim();
                for i in 0..n {
                    for j in (i + 1)..n {
                        let c: Vec<f64> = coords[pos..pos + d].iter().map(|x| x * h).collect();
                        pos += d;
                        let q = Coefficient::new(ring, &c)?;
                        entries[i * n + j] = q;
                        entries[j * n + i] = q.conj();
                    }
                }
                Ok(Element {
                    algebra,
                    data: Data::Matrix(entries),
                })
            }
        }
    }
}

/// An orthonormal basis of the algebra for the trace inner product.
pub fn orthonormal_basis(algebra: Algebra) -> Vec<Element> {
    let dim = algebra.real_dim();
    (0..dim)
        .map(|k| {
            let mut c = vec![0.0; dim];
            c[k] = 1.0;
            Element::from_real_coords(algebra, &c).expect("valid basis coordinates")
        })
        .collect()
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

impl Mul<&Element> for f64 {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        rhs.scale(self)
    }
}

/// A positive element of trace one.
#[derive(Clone, Debug, PartialEq)]
pub struct StateElement(Element);

impl StateElement {
    pub const TRACE_TOL: f64 = 1e-10;

    /// Validates trace and positivity.
    pub fn new(x: Element) -> Result<Self> {
        let tr = x.trace();
        if (tr - 1.0).abs() > Self::TRACE_TOL {
            return Err(Error::NotState(format!("trace {tr} differs from 1")));
        }
        if !crate::spectral::is_positive(&x)? {
            let min = crate::spectral::min_eigenvalue(&x)?;
            return Err(Error::NotPositive(min));
        }
        Ok(Self(x))
    }

    pub(crate) fn new_unchecked(x: Element) -> Self {
        Self(x)
    }

    pub fn element(&self) -> &Element {
        &self.0
    }

    pub fn into_element(self) -> Element {
        self.0
    }

    pub fn algebra(&self) -> Algebra {
        self.0.algebra()
    }
}

impl AsRef<Element> for StateElement {
    fn as_ref(&self) -> &Element {
        &self.0
    }
}

/// Maps a `Spin(d)` element with `d ≤ 3` to `s·I + Σ uₖσₖ` in `Herm(C,2)`.
pub fn spin_to_pauli(x: &Element) -> Result<Element> {
    let (s, v) = x
        .spin_parts()
        .ok_or_else(|| Error::Unsupported(format!("{} is not a spin factor", x.algebra())))?;
    if v.len() > 3 {
        return Err(Error::Unsupported(format!(
            "Spin({}) has no 2x2 complex image",
            v.len()
        )));
    }
    let mut u = [0.0; 3];
    u[..v.len()].copy_from_slice(v);
    let c = |re: f64, im: f64| Coefficient::new(Ring::C, &[re, im]).unwrap();
    let entries = vec![
        c(s + u[2], 0.0),
        c(u[0], -u[1]),
        c(u[0], u[1]),
        c(s - u[2], 0.0),
    ];
    Element::hermitian(Algebra::Herm(Ring::C, 2), entries)
}

/// Inverse of [`spin_to_pauli`] into `Spin(3)`.
pub fn pauli_to_spin(x: &Element) -> Result<Element> {
    if x.algebra() != Algebra::Herm(Ring::C, 2) {
        return Err(Error::Unsupported(format!(
            "{} is not Herm(C,2)",
            x.algebra()
        )));
    }
    let a = x.entry(0, 0).unwrap().re();
    let d = x.entry(1, 1).unwrap().re();
    let b = x.entry(1, 0).unwrap();
    Element::spin(
        0.5 * (a + d),
        vec![b.coords()[0], b.coords()[1], 0.5 * (a - d)],
    )
}
