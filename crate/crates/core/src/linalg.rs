//! Dense complex matrices and a cyclic Jacobi eigensolver for Hermitian input.

use num_complex::Complex64;

use crate::division::{Coefficient, Ring};
use crate::error::{Error, Result};
use crate::jordan::{Algebra, Element};

pub const JACOBI_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 64;

/// Pivot visiting order for a Jacobi sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SweepOrder {
    /// `(0,1), (0,2), …, (1,2), …` row by row.
    #[default]
    RowCyclic,
    /// Column by column from the last column backwards.
    ReverseColumn,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, x) in d.iter().enumerate() {
            m.data[i * d.len() + i] = Complex64::new(*x, 0.0);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn trace_re(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i].re).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Replaces the matrix by `½(A + A†)`.
    pub fn hermitize(&mut self) {
        let n = self.n;
        for i in 0..n {
            self.data[i * n + i].im = 0.0;
            for j in (i + 1)..n {
                let avg = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
                self.data[i * n + j] = avg;
                self.data[j * n + i] = avg.conj();
            }
        }
    }

    fn off_diagonal_norm(&self) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += self.data[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    /// `Σ f(λ) v v†` over an eigendecomposition.
    pub fn from_eigen(eig: &HermitianEigen, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = eig.vectors.n;
        let mut out = CMatrix::zeros(n);
        for (k, &lam) in eig.values.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = eig.vectors.get(i, k) * w;
                for j in 0..n {
                    out.data[i * n + j] += vi * eig.vectors.get(j, k).conj();
                }
            }
        }
        out
    }
}

/// Eigenvalues in descending order with eigenvectors as the matching columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
    pub sweeps: usize,
}

fn pivots(n: usize, order: SweepOrder) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    match order {
        SweepOrder::RowCyclic => {
            for p in 0..n {
                for q in (p + 1)..n {
                    out.push((p, q));
                }
            }
        }
        SweepOrder::ReverseColumn => {
            for q in (0..n).rev() {
                for p in (0..q).rev() {
                    out.push((p, q));
                }
            }
        }
    }
    out
}

/// Cyclic complex Jacobi eigendecomposition of a Hermitian matrix.
pub fn jacobi_eigh(input: &CMatrix, order: SweepOrder) -> Result<HermitianEigen> {
    let n = input.n;
    let mut a = input.clone();
    a.hermitize();
    let mut v = CMatrix::identity(n);
    let target = JACOBI_TOL * a.frobenius().max(1.0);
    let plan = pivots(n, order);
    let mut sweeps = 0;
    while a.off_diagonal_norm() > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off: a.off_diagonal_norm(),
            });
        }
        sweeps += 1;
        for &(p, q) in &plan {
            rotate(&mut a, &mut v, p, q);
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a.get(j, j).re.total_cmp(&a.get(i, i).re));
    let values = idx.iter().map(|&i| a.get(i, i).re).collect();
    let mut vectors = CMatrix::zeros(n);
    for (col, &src) in idx.iter().enumerate() {
        for r in 0..n {
            vectors.set(r, col, v.get(r, src));
        }
    }
    Ok(HermitianEigen {
        values,
        vectors,
        sweeps,
    })
}

/// One Jacobi rotation zeroing `a[p][q]`. The unitary is `J = D·R` with
/// `D = diag(1, ē)` removing the phase of `a_pq` and `R` a real rotation.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let n = a.n;
    let apq = a.get(p, q);
    let b = apq.norm();
    if b < 1e-300 {
        return;
    }
    let e = apq / b;
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let theta = (aqq - app) / (2.0 * b);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let ebar = e.conj();

    // columns: A ← A J
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * c - akq * ebar * s);
        a.set(k, q, akp * s + akq * ebar * c);
    }
    // rows: A ← J† A
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk * c - aqk * e * s);
        a.set(q, k, apk * s + aqk * e * c);
    }
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    a.data[p * n + p].im = 0.0;
    a.data[q * n + q].im = 0.0;
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c - vkq * ebar * s);
        v.set(k, q, vkp * s + vkq * ebar * c);
    }
}

/// Complex image of a `Herm(R|C|H, n)` element. Quaternions use the block
/// `a+bi+cj+dk ↦ [[a+bi, c+di], [−c+di, a−bi]]`, doubling the size.
pub fn to_complex(x: &Element) -> Result<CMatrix> {
    let (ring, n) = match x.algebra() {
        Algebra::Herm(r, n) => (r, n),
        other => {
            return Err(Error::Unsupported(format!(
                "{other} has no associative complex image"
            )))
        }
    };
    let entries = x.entries().unwrap();
    match ring {
        Ring::R | Ring::C => {
            let mut m = CMatrix::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    let c = entries[i * n + j];
                    let im = if ring == Ring::C { c.coords()[1] } else { 0.0 };
                    m.set(i, j, Complex64::new(c.re(), im));
                }
            }
            Ok(m)
        }
        Ring::H => {
            let mut m = CMatrix::zeros(2 * n);
            for i in 0..n {
                for j in 0..n {
                    let q = entries[i * n + j].coords();
                    let (a, b, c, d) = (q[0], q[1], q[2], q[3]);
                    m.set(2 * i, 2 * j, Complex64::new(a, b));
                    m.set(2 * i, 2 * j + 1, Complex64::new(c, d));
                    m.set(2 * i + 1, 2 * j, Complex64::new(-c, d));
                    m.set(2 * i + 1, 2 * j + 1, Complex64::new(a, -b));
                }
            }
            Ok(m)
        }
        Ring::O => unreachable!("Herm(O, n) is rejected at construction"),
    }
}

/// Reads a Hermitian complex matrix back into `algebra`, averaging the
/// redundant entries of quaternion blocks.
pub fn from_complex(algebra: Algebra, m: &CMatrix) -> Result<Element> {
    let (ring, n) = match algebra {
        Algebra::Herm(r, n) => (r, n),
        other => {
            return Err(Error::Unsupported(format!(
                "{other} has no associative complex image"
            )))
        }
    };
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let c = match ring {
                Ring::R => Coefficient::real(Ring::R, m.get(i, j).re),
                Ring::C => {
                    let z = m.get(i, j);
                    Coefficient::new(Ring::C, &[z.re, z.im])?
                }
                Ring::H => {
                    let z00 = m.get(2 * i, 2 * j);
                    let z01 = m.get(2 * i, 2 * j + 1);
                    let z10 = m.get(2 * i + 1, 2 * j);
                    let z11 = m.get(2 * i + 1, 2 * j + 1);
                    let a = 0.5 * (z00.re + z11.re);
                    let b = 0.5 * (z00.im - z11.im);
                    let c = 0.5 * (z01.re - z10.re);
                    let d = 0.5 * (z01.im + z10.im);
                    Coefficient::new(Ring::H, &[a, b, c, d])?
                }
                Ring::O => unreachable!(),
            };
            entries.push(c);
        }
    }
    Ok(Element::symmetrized(algebra, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::random_element;

    fn reconstruct(eig: &HermitianEigen) -> CMatrix {
        CMatrix::from_eigen(eig, |x| x)
    }

    fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        a.data
            .iter()
            .zip(&b.data)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn diagonal_input_is_fixed() {
        let m = CMatrix::from_diag(&[1.0, 3.0, 2.0]);
        let eig = jacobi_eigh(&m, SweepOrder::RowCyclic).unwrap();
        assert_eq!(eig.values, vec![3.0, 2.0, 1.0]);
        assert_eq!(eig.sweeps, 0);
    }

    #[test]
    fn complex_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 3 and 1.
        let mut m = CMatrix::from_diag(&[2.0, 2.0]);
        m.set(0, 1, Complex64::new(0.0, 1.0));
        m.set(1, 0, Complex64::new(0.0, -1.0));
        let eig = jacobi_eigh(&m, SweepOrder::RowCyclic).unwrap();
        assert!((eig.values[0] - 3.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstructs_in_both_orders() {
        for seed in 0..20 {
            let x = random_element(Algebra::Herm(Ring::C, 6), seed);
            let m = to_complex(&x).unwrap();
            for order in [SweepOrder::RowCyclic, SweepOrder::ReverseColumn] {
                let eig = jacobi_eigh(&m, order).unwrap();
                assert!(max_diff(&reconstruct(&eig), &m) < 1e-12);
                let vv = eig.vectors.adjoint().matmul(&eig.vectors);
                assert!(max_diff(&vv, &CMatrix::identity(6)) < 1e-12);
            }
        }
    }

    #[test]
    fn quaternion_embedding_round_trip_and_product() {
        let alg = Algebra::Herm(Ring::H, 3);
        let x = random_element(alg, 4);
        let y = random_element(alg, 5);
        let mx = to_complex(&x).unwrap();
        let my = to_complex(&y).unwrap();
        assert!(from_complex(alg, &mx).unwrap().distance(&x) < 1e-15);
        // The embedding is an algebra homomorphism, so it carries x∘y to ½(XY + YX).
        let mut sym = mx.matmul(&my);
        let other = my.matmul(&mx);
        for (a, b) in sym.data.iter_mut().zip(&other.data) {
            *a = (*a + b) * 0.5;
        }
        let back = from_complex(alg, &sym).unwrap();
        assert!(back.distance(&x.jordan(&y).unwrap()) < 1e-13);
        assert!((mx.trace_re() - 2.0 * x.trace()).abs() < 1e-13);
    }
}
