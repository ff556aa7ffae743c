//! Coefficients in the four normed division algebras ℝ, ℂ, ℍ and 𝕆.
//!
//! Basis conventions: quaternions use `(1, i, j, k)` with `ij = k`. Octonions
//! are pairs of quaternions `(a, b) = a + bℓ` with basis
//! `(1, e1..e7) = (1, i, j, k, ℓ, iℓ, jℓ, kℓ)` and product
//! `(a, b)(c, d) = (ac − d̄b, da + bc̄)`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// One of the four normed division algebras over the reals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    R,
    C,
    H,
    O,
}

impl Ring {
    /// Real dimension: 1, 2, 4 or 8.
    pub const fn dim(self) -> usize {
        match self {
            Ring::R => 1,
            Ring::C => 2,
            Ring::H => 4,
            Ring::O => 8,
        }
    }

    pub const fn is_associative(self) -> bool {
        !matches!(self, Ring::O)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Ring::R => "R",
            Ring::C => "C",
            Ring::H => "H",
            Ring::O => "O",
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A scalar entry of a Hermitian matrix. Unused trailing coordinates are zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coefficient {
    ring: Ring,
    coords: [f64; 8],
}

impl Coefficient {
    pub fn new(ring: Ring, coords: &[f64]) -> Result<Self> {
        if coords.len() != ring.dim() {
            return Err(Error::InvalidCoefficient(format!(
                "ring {ring} needs {} coordinates, got {}",
                ring.dim(),
                coords.len()
            )));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidCoefficient(format!(
                "non-finite coordinate {bad}"
            )));
        }
        let mut out = [0.0; 8];
        out[..coords.len()].copy_from_slice(coords);
        Ok(Self { ring, coords: out })
    }

    pub const fn zero(ring: Ring) -> Self {
        Self {
            ring,
            coords: [0.0; 8],
        }
    }

    pub fn real(ring: Ring, x: f64) -> Self {
        let mut coords = [0.0; 8];
        coords[0] = x;
        Self { ring, coords }
    }

    pub fn one(ring: Ring) -> Self {
        Self::real(ring, 1.0)
    }

    /// The `k`-th basis unit of `ring` (`k = 0` is the real unit).
    pub fn basis(ring: Ring, k: usize) -> Self {
        assert!(k < ring.dim(), "basis index {k} out of range for {ring}");
        let mut coords = [0.0; 8];
        coords[k] = 1.0;
        Self { ring, coords }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.ring.dim()]
    }

    pub fn re(&self) -> f64 {
        self.coords[0]
    }

    pub fn is_real(&self) -> bool {
        self.coords[1..].iter().all(|&c| c == 0.0)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords().iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Real part of `self · conj(other)`, i.e. the Euclidean dot product of coordinates.
    pub fn dot(&self, other: &Self) -> f64 {
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn conj(&self) -> Self {
        let mut coords = self.coords;
        for c in &mut coords[1..] {
            *c = -*c;
        }
        Self {
            ring: self.ring,
            coords,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut coords = self.coords;
        for c in &mut coords {
            *c *= s;
        }
        Self {
            ring: self.ring,
            coords,
        }
    }

    /// Division-algebra product; fails when the rings differ.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring, other.ring));
        }
        Ok(self.mul_same(other))
    }

    fn mul_same(&self, other: &Self) -> Self {
        let a = &self.coords;
        let b = &other.coords;
        let coords = match self.ring {
            Ring::R => {
                let mut c = [0.0; 8];
                c[0] = a[0] * b[0];
                c
            }
            Ring::C => {
                let mut c = [0.0; 8];
                c[0] = a[0] * b[0] - a[1] * b[1];
                c[1] = a[0] * b[1] + a[1] * b[0];
                c
            }
            Ring::H => {
                let q = quat_mul(&[a[0], a[1], a[2], a[3]], &[b[0], b[1], b[2], b[3]]);
                let mut c = [0.0; 8];
                c[..4].copy_from_slice(&q);
                c
            }
            Ring::O => octonion_mul(a, b),
        };
        Self {
            ring: self.ring,
            coords,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl Add for Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.ring, rhs.ring, "ring mismatch");
        let mut coords = self.coords;
        for (c, r) in coords.iter_mut().zip(rhs.coords.iter()) {
            *c += r;
        }
        Self {
            ring: self.ring,
            coords,
        }
    }
}

impl AddAssign for Coefficient {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

/// Panics on ring mismatch; use [`Coefficient::try_mul`] for a checked product.
impl Mul for Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.ring, rhs.ring, "ring mismatch");
        self.mul_same(&rhs)
    }
}

impl Mul<f64> for Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

pub(crate) fn quat_mul(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn quat_conj(a: &[f64; 4]) -> [f64; 4] {
    [a[0], -a[1], -a[2], -a[3]]
}

/// Cayley–Dickson doubling `(a, b)(c, d) = (ac − d̄b, da + bc̄)` over quaternion pairs.
pub fn cayley_dickson_mul(x: &[f64; 8], y: &[f64; 8]) -> [f64; 8] {
    let a = [x[0], x[1], x[2], x[3]];
    let b = [x[4], x[5], x[6], x[7]];
    let c = [y[0], y[1], y[2], y[3]];
    let d = [y[4], y[5], y[6], y[7]];
    let ac = quat_mul(&a, &c);
    let dbar_b = quat_mul(&quat_conj(&d), &b);
    let da = quat_mul(&d, &a);
    let b_cbar = quat_mul(&b, &quat_conj(&c));
    let mut out = [0.0; 8];
    for k in 0..4 {
        out[k] = ac[k] - dbar_b[k];
        out[k + 4] = da[k] + b_cbar[k];
    }
    out
}

/// Structure constants `e_p e_q = sign · e_index` for the octonion basis.
#[derive(Debug)]
pub struct OctonionTable {
    entries: [[(f64, usize); 8]; 8],
}

impl OctonionTable {
    fn generate() -> Self {
        let mut entries = [[(0.0, 0); 8]; 8];
        for (p, row) in entries.iter_mut().enumerate() {
            for (q, slot) in row.iter_mut().enumerate() {
                let mut ep = [0.0; 8];
                let mut eq = [0.0; 8];
                ep[p] = 1.0;
                eq[q] = 1.0;
                let prod = cayley_dickson_mul(&ep, &eq);
                let (index, sign) = prod
                    .iter()
                    .enumerate()
                    .find(|(_, v)| **v != 0.0)
                    .map(|(i, v)| (i, *v))
                    .expect("basis product is a signed basis unit");
                *slot = (sign, index);
            }
        }
        let table = Self { entries };
        table.verify_alternative();
        table
    }

    /// Checks the polarized alternative laws on basis elements and pairwise sums.
    fn verify_alternative(&self) {
        for p in 0..8 {
            for r in p..8 {
                let mut x = [0.0; 8];
                x[p] += 1.0;
                x[r] += 1.0;
                for q in 0..8 {
                    let mut y = [0.0; 8];
                    y[q] = 1.0;
                    let xx = self.mul(&x, &x);
                    let left = self.mul(&self.mul(&x, &x), &y);
                    let right = self.mul(&x, &self.mul(&x, &y));
                    let yx_x = self.mul(&self.mul(&y, &x), &x);
                    let y_xx = self.mul(&y, &xx);
                    for k in 0..8 {
                        assert!(
                            left[k] == right[k] && yx_x[k] == y_xx[k],
                            "octonion table violates the alternative laws"
                        );
                    }
                }
            }
        }
    }

    pub fn get(&self, p: usize, q: usize) -> (f64, usize) {
        self.entries[p][q]
    }

    pub fn mul(&self, x: &[f64; 8], y: &[f64; 8]) -> [f64; 8] {
        let mut out = [0.0; 8];
        for (p, &xp) in x.iter().enumerate() {
            if xp == 0.0 {
                continue;
            }
            for (q, &yq) in y.iter().enumerate() {
                if yq == 0.0 {
                    continue;
                }
                let (sign, k) = self.entries[p][q];
                out[k] += sign * xp * yq;
            }
        }
        out
    }
}

/// The octonion multiplication table, generated on first use.
pub fn octonion_table() -> &'static OctonionTable {
    static TABLE: OnceLock<OctonionTable> = OnceLock::new();
    TABLE.get_or_init(OctonionTable::generate)
}

fn octonion_mul(x: &[f64; 8], y: &[f64; 8]) -> [f64; 8] {
    octonion_table().mul(x, y)
}
