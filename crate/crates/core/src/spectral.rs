//! Spectral decomposition and functional calculus.
//!
//! Every element decomposes uniquely as `x = Σ λₖ Eₖ` over distinct eigenvalues
//! `λₖ` and orthogonal idempotents `Eₖ`. How the decomposition is found depends
//! on the algebra:
//!
//! * spin factors: `s ± |v|` with idempotents `½(1, ±v/|v|)`;
//! * `Herm(R|C)`: complex cyclic Jacobi;
//! * `Herm(H)`: Jacobi on the `2n × 2n` complex image, eigenvalues paired;
//! * Albert: roots of the characteristic cubic built from the power traces
//!   `tr[xᵏ]`, idempotents by Lagrange interpolation.
//!
//! Eigenvalues closer than `1e-8 · max(1, ‖x‖)` are merged.

use std::cmp::Ordering;

use num_traits::{ToPrimitive, Zero};

use crate::automorphism::Automorphism;
use crate::error::{Error, Result};
use crate::jordan::{Algebra, Element, StateElement};
use crate::linalg::{self, CMatrix, SweepOrder};
use crate::random;

pub const MERGE_REL: f64 = 1e-8;
pub const POSITIVITY_TOL: f64 = 1e-10;
pub const MAJORIZATION_TOL: f64 = 1e-9;

fn merge_threshold(x: &Element) -> f64 {
    MERGE_REL * x.norm().max(1.0)
}

/// Descending eigenvalue list with multiplicities expanded.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    /// Sorts the values into descending order.
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Zero-padded copy of length `len` (never truncates).
    pub fn padded(&self, len: usize) -> Spectrum {
        let mut v = self.0.clone();
        if v.len() < len {
            v.resize(len, 0.0);
        }
        Spectrum(v)
    }

    pub fn min(&self) -> f64 {
        self.0.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.0.first().copied().unwrap_or(0.0)
    }
}

/// `x = Σ λₖ Eₖ` with distinct descending eigenvalues.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub idempotents: Vec<Element>,
}

impl SpectralDecomposition {
    pub fn spectrum(&self) -> Spectrum {
        let mut v = Vec::new();
        for (lam, &m) in self.eigenvalues.iter().zip(&self.multiplicities) {
            v.extend(std::iter::repeat_n(*lam, m));
        }
        Spectrum::new(v)
    }

    pub fn reconstruct(&self) -> Element {
        let alg = self.idempotents[0].algebra();
        let mut out = Element::zero(alg);
        for (lam, e) in self.eigenvalues.iter().zip(&self.idempotents) {
            out.axpy(*lam, e);
        }
        out
    }

    /// `Σ f(λₖ) Eₖ`; `f` receives the eigenvalue and returns its image.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Element {
        let alg = self.idempotents[0].algebra();
        let mut out = Element::zero(alg);
        for (lam, e) in self.eigenvalues.iter().zip(&self.idempotents) {
            let w = f(*lam);
            if w != 0.0 {
                out.axpy(w, e);
            }
        }
        out
    }
}

/// Groups descending values whose consecutive gaps are within `thr`.
/// `weights` are the multiplicity units of each value.
fn group_sorted(values: &[f64], thr: f64) -> Vec<(f64, Vec<usize>)> {
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match groups.last_mut() {
            Some((_, members)) if (values[*members.last().unwrap()] - v).abs() <= thr => {
                members.push(i)
            }
            _ => groups.push((v, vec![i])),
        }
    }
    for (mean, members) in &mut groups {
        *mean = members.iter().map(|&i| values[i]).sum::<f64>() / members.len() as f64;
    }
    groups
}

pub fn eigendecompose(x: &Element) -> Result<SpectralDecomposition> {
    eigendecompose_with(x, SweepOrder::RowCyclic)
}

/// Decomposition with an explicit Jacobi sweep order (ignored outside `Herm`).
pub fn eigendecompose_with(x: &Element, order: SweepOrder) -> Result<SpectralDecomposition> {
    match x.algebra() {
        Algebra::Spin(_) => Ok(spin_decompose(x)),
        Algebra::Herm(..) => matrix_decompose(x, order),
        Algebra::Albert => albert_decompose(x),
    }
}

fn spin_decompose(x: &Element) -> SpectralDecomposition {
    let (s, v) = x.spin_parts().unwrap();
    let r = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if 2.0 * r <= merge_threshold(x) {
        return SpectralDecomposition {
            eigenvalues: vec![s],
            multiplicities: vec![2],
            idempotents: vec![Element::unit(x.algebra())],
        };
    }
    let dir: Vec<f64> = v.iter().map(|a| a / (2.0 * r)).collect();
    let plus = Element::spin(0.5, dir.clone()).unwrap();
    let minus = Element::spin(0.5, dir.iter().map(|a| -a).collect()).unwrap();
    SpectralDecomposition {
        eigenvalues: vec![s + r, s - r],
        multiplicities: vec![1, 1],
        idempotents: vec![plus, minus],
    }
}

/// Eigenvalues of the complex image, paired for quaternions.
struct MatrixEigen {
    eig: linalg::HermitianEigen,
    /// Eigenvalue per quaternionic/complex slot, descending.
    values: Vec<f64>,
    /// Columns of `eig.vectors` belonging to each slot.
    columns: Vec<Vec<usize>>,
    pairing_residual: f64,
}

fn matrix_eigen(x: &Element, order: SweepOrder) -> Result<MatrixEigen> {
    let m = linalg::to_complex(x)?;
    let eig = linalg::jacobi_eigh(&m, order)?;
    let quaternionic = matches!(x.algebra(), Algebra::Herm(crate::division::Ring::H, _));
    if quaternionic {
        let mut values = Vec::with_capacity(eig.values.len() / 2);
        let mut columns = Vec::with_capacity(eig.values.len() / 2);
        let mut residual: f64 = 0.0;
        for k in 0..eig.values.len() / 2 {
            let (a, b) = (eig.values[2 * k], eig.values[2 * k + 1]);
            residual = residual.max((a - b).abs());
            values.push(0.5 * (a + b));
            columns.push(vec![2 * k, 2 * k + 1]);
        }
        Ok(MatrixEigen {
            eig,
            values,
            columns,
            pairing_residual: residual,
        })
    } else {
        let values = eig.values.clone();
        let columns = (0..values.len()).map(|k| vec![k]).collect();
        Ok(MatrixEigen {
            eig,
            values,
            columns,
            pairing_residual: 0.0,
        })
    }
}

fn matrix_decompose(x: &Element, order: SweepOrder) -> Result<SpectralDecomposition> {
    let me = matrix_eigen(x, order)?;
    let groups = group_sorted(&me.values, merge_threshold(x));
    let size = me.eig.vectors.size();
    let mut eigenvalues = Vec::with_capacity(groups.len());
    let mut multiplicities = Vec::with_capacity(groups.len());
    let mut idempotents = Vec::with_capacity(groups.len());
    for (mean, members) in groups {
        let mut proj = CMatrix::zeros(size);
        for &slot in &members {
            for &col in &me.columns[slot] {
                for i in 0..size {
                    let vi = me.eig.vectors.get(i, col);
                    for j in 0..size {
                        let cur = proj.get(i, j);
                        proj.set(i, j, cur + vi * me.eig.vectors.get(j, col).conj());
                    }
                }
            }
        }
        eigenvalues.push(mean);
        multiplicities.push(members.len());
        idempotents.push(linalg::from_complex(x.algebra(), &proj)?);
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        multiplicities,
        idempotents,
    })
}

/// Maximum gap between paired eigenvalues of the complex image of a
/// quaternionic matrix (zero for other algebras).
pub fn quaternion_pairing_residual(x: &Element) -> Result<f64> {
    match x.algebra() {
        Algebra::Herm(crate::division::Ring::H, _) => {
            Ok(matrix_eigen(x, SweepOrder::RowCyclic)?.pairing_residual)
        }
        _ => Ok(0.0),
    }
}

/// Power traces `tr[x], tr[x²], tr[x³]`.
pub fn power_traces(x: &Element) -> [f64; 3] {
    let x2 = x.square();
    let x3 = x.circ(&x2);
    [x.trace(), x2.trace(), x3.trace()]
}

/// Roots of the Albert characteristic cubic, descending (with multiplicity).
fn albert_cubic_roots(x: &Element) -> Result<[f64; 3]> {
    let shift = x.trace() / 3.0;
    let y = x.clone().add_scaled_unit(-shift);
    let [_, q2, q3] = power_traces(&y);
    // y has zero trace: λ³ − (q2/2)λ − q3/3 = 0.
    let thr = merge_threshold(x);
    if q2 <= 0.0 || q2.sqrt() <= thr {
        return Ok([shift; 3]);
    }
    let r = (q2 / 6.0).sqrt();
    let arg = (q3 / q2) * (6.0 / q2).sqrt();
    let disc = 1.0 - arg * arg;
    if disc < -1e-8 {
        return Err(Error::CorruptedCubic(disc));
    }
    let phi = arg.clamp(-1.0, 1.0).acos();
    let tau = std::f64::consts::TAU;
    let (p, q) = (-q2 / 2.0, -q3 / 3.0);
    let mut roots = [0.0; 3];
    for (k, root) in roots.iter_mut().enumerate() {
        let mut t = 2.0 * r * ((phi - tau * k as f64) / 3.0).cos();
        for _ in 0..2 {
            let f = t * t * t + p * t + q;
            let df = 3.0 * t * t + p;
            if df.abs() > 1e-3 * r * r {
                t -= f / df;
            }
        }
        *root = t + shift;
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok(roots)
}

/// Close pair `λ₂ ≈ λ₃` next to an isolated root `λ₁`, resolved in the Peirce
/// space of `λ₁`'s idempotent.
///
/// A double root of the cubic is only determined to about √ε. The idempotent
/// of the isolated root depends on the pair through `λ₂ + λ₃` and `λ₂λ₃` alone,
/// which are accurate, and the pair splits as `m ± δ/2` with `δ = √2·‖z‖`,
/// `z` the traceless part of `x − λ₁E₁` in the complementary space.
struct ClusterSplit {
    isolated: f64,
    e1: Element,
    complement: Element,
    mean: f64,
    /// Traceless part of `x` in the complementary Peirce space.
    z: Element,
    delta: f64,
}

fn albert_cluster_split(x: &Element, roots: &[f64; 3]) -> Option<ClusterSplit> {
    // roots are descending: the pair is (0,1) or (1,2)
    let (g01, g12) = (roots[0] - roots[1], roots[1] - roots[2]);
    let (iso, gap, sep) = if g01 <= g12 {
        (roots[2], g01, g12)
    } else {
        (roots[0], g12, g01)
    };
    if !(gap < 0.1 * sep) || sep <= 10.0 * merge_threshold(x) {
        return None;
    }
    let [t1, t2, _] = power_traces(x);
    let s = t1 - iso;
    let e2 = 0.5 * (t1 * t1 - t2);
    let prod = e2 - iso * s;
    let denom = iso * iso - s * iso + prod;
    let mut e1 = x.square();
    e1.axpy(-s, x);
    let e1 = e1.add_scaled_unit(prod).scale(1.0 / denom);
    let complement = e1.scale(-1.0).add_scaled_unit(1.0);
    let mean = 0.5 * s;
    let mut z = x.clone();
    z.axpy(-iso, &e1);
    z.axpy(-mean, &complement);
    let delta = (2.0 * z.dot(&z)).max(0.0).sqrt();
    Some(ClusterSplit {
        isolated: iso,
        e1,
        complement,
        mean,
        z,
        delta,
    })
}

fn albert_eigenvalues(x: &Element) -> Result<[f64; 3]> {
    let roots = albert_cubic_roots(x)?;
    let Some(split) = albert_cluster_split(x, &roots) else {
        return Ok(roots);
    };
    let mut out = [
        split.isolated,
        split.mean + 0.5 * split.delta,
        split.mean - 0.5 * split.delta,
    ];
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

fn albert_decompose(x: &Element) -> Result<SpectralDecomposition> {
    let roots = albert_cubic_roots(x)?;
    let thr = merge_threshold(x);
    if let Some(split) = albert_cluster_split(x, &roots) {
        let mut parts = vec![(split.isolated, 1, split.e1.clone())];
        if split.delta <= thr {
            parts.push((split.mean, 2, split.complement.clone()));
        } else {
            let half = split.z.scale(1.0 / split.delta);
            let mut plus = split.complement.scale(0.5);
            plus.axpy(1.0, &half);
            let mut minus = split.complement.scale(0.5);
            minus.axpy(-1.0, &half);
            parts.push((split.mean + 0.5 * split.delta, 1, plus));
            parts.push((split.mean - 0.5 * split.delta, 1, minus));
        }
        parts.sort_by(|a, b| b.0.total_cmp(&a.0));
        return Ok(SpectralDecomposition {
            eigenvalues: parts.iter().map(|p| p.0).collect(),
            multiplicities: parts.iter().map(|p| p.1).collect(),
            idempotents: parts.into_iter().map(|p| p.2).collect(),
        });
    }
    let groups = group_sorted(&roots, thr);
    let unit = Element::unit(Algebra::Albert);
    let mus: Vec<f64> = groups.iter().map(|g| g.0).collect();
    let idempotents: Vec<Element> = match mus.len() {
        1 => vec![unit],
        _ => (0..mus.len())
            .map(|k| {
                let mut acc = unit.clone();
                for (j, &mu) in mus.iter().enumerate() {
                    if j == k {
                        continue;
                    }
                    let factor = x.clone().add_scaled_unit(-mu);
                    acc = acc.circ(&factor).scale(1.0 / (mus[k] - mu));
                }
                acc
            })
            .collect(),
    };
    Ok(SpectralDecomposition {
        eigenvalues: mus,
        multiplicities: groups.iter().map(|g| g.1.len()).collect(),
        idempotents,
    })
}

/// Eigenvalues with multiplicity, skipping idempotent construction where possible.
pub fn eigenvalues(x: &Element) -> Result<Spectrum> {
    match x.algebra() {
        Algebra::Spin(_) => Ok(spin_decompose(x).spectrum()),
        Algebra::Herm(..) => Ok(Spectrum::new(
            matrix_eigen(x, SweepOrder::RowCyclic)?.values,
        )),
        Algebra::Albert => Ok(Spectrum::new(albert_eigenvalues(x)?.to_vec())),
    }
}

pub fn min_eigenvalue(x: &Element) -> Result<f64> {
    Ok(eigenvalues(x)?.min())
}

/// `x ≥ 0` up to [`POSITIVITY_TOL`].
pub fn is_positive(x: &Element) -> Result<bool> {
    Ok(min_eigenvalue(x)? >= -POSITIVITY_TOL)
}

/// Where a scalar function may be evaluated on eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Any real eigenvalue.
    Real,
    /// Eigenvalues above the zero tolerance only.
    Positive,
    /// Nonnegative eigenvalues; eigenvalues within the zero tolerance map to
    /// `0` (the `0·ln 0 = 0` convention).
    ZeroGuarded,
}

/// Support tolerance relative to `max(1, |tr x|)`.
pub const SUPPORT_REL: f64 = 1e-12;

pub(crate) fn zero_tolerance(x: &Element) -> f64 {
    SUPPORT_REL * x.trace().abs().max(1.0)
}

pub(crate) fn check_domain(lam: f64, domain: Domain, zero_tol: f64) -> Result<Option<f64>> {
    match domain {
        Domain::Real => Ok(Some(lam)),
        Domain::Positive => {
            if lam > zero_tol {
                Ok(Some(lam))
            } else {
                Err(Error::DomainViolation(lam))
            }
        }
        Domain::ZeroGuarded => {
            if lam < -POSITIVITY_TOL {
                Err(Error::DomainViolation(lam))
            } else if lam <= zero_tol {
                Ok(None)
            } else {
                Ok(Some(lam))
            }
        }
    }
}

/// `f(x) = Σ f(λₖ) Eₖ`.
pub fn apply_function(x: &Element, f: impl Fn(f64) -> f64, domain: Domain) -> Result<Element> {
    apply_with(&eigendecompose(x)?, x, f, domain)
}

pub(crate) fn apply_with(
    dec: &SpectralDecomposition,
    x: &Element,
    f: impl Fn(f64) -> f64,
    domain: Domain,
) -> Result<Element> {
    let tol = zero_tolerance(x);
    let mut out = Element::zero(x.algebra());
    for (lam, e) in dec.eigenvalues.iter().zip(&dec.idempotents) {
        if let Some(l) = check_domain(*lam, domain, tol)? {
            out.axpy(f(l), e);
        }
    }
    Ok(out)
}

/// Outcome of comparing two spectra in the majorization order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Majorization {
    Dominates,
    DominatedBy,
    Equal,
    Incomparable,
}

/// Prefix-sum comparison with tolerance [`MAJORIZATION_TOL`].
pub fn majorize_compare(a: &Spectrum, b: &Spectrum) -> Result<Majorization> {
    majorize_compare_with(a.values(), b.values(), MAJORIZATION_TOL)
}

/// Generic prefix-sum comparison; inputs are sorted descending and zero-padded.
pub fn majorize_compare_with<T>(a: &[T], b: &[T], tol: T) -> Result<Majorization>
where
    T: Clone + PartialOrd + Zero + std::ops::Sub<Output = T> + std::ops::Neg<Output = T> + ToPrimitive,
{
    let desc = |v: &[T]| {
        let mut v = v.to_vec();
        v.sort_by(|x, y| y.partial_cmp(x).unwrap_or(Ordering::Equal));
        v
    };
    let mut a = desc(a);
    let mut b = desc(b);
    let len = a.len().max(b.len());
    a.resize(len, T::zero());
    b.resize(len, T::zero());
    let (mut sa, mut sb) = (T::zero(), T::zero());
    let mut diffs = Vec::with_capacity(len);
    for (x, y) in a.into_iter().zip(b) {
        sa = sa + x;
        sb = sb + y;
        diffs.push(sa.clone() - sb.clone());
    }
    let last = diffs.last().cloned().unwrap_or_else(T::zero);
    if last > tol.clone() || last < -tol.clone() {
        return Err(Error::TotalsDiffer(
            sa.to_f64().unwrap_or(f64::NAN),
            sb.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let all_zero = diffs.iter().all(|d| *d <= tol && *d >= -tol.clone());
    let all_ge = diffs.iter().all(|d| *d >= -tol.clone());
    let all_le = diffs.iter().all(|d| *d <= tol);
    Ok(if all_zero {
        Majorization::Equal
    } else if all_ge {
        Majorization::Dominates
    } else if all_le {
        Majorization::DominatedBy
    } else {
        Majorization::Incomparable
    })
}

/// Validates a state spectrum and pads it to `rank`.
fn checked_spectrum(spectrum: &[f64], rank: usize) -> Result<Vec<f64>> {
    if spectrum.len() > rank {
        return Err(Error::InvalidSpectrum(format!(
            "{} values exceed rank {rank}",
            spectrum.len()
        )));
    }
    if spectrum.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidSpectrum("values must be finite and nonnegative".into()));
    }
    let total: f64 = spectrum.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidSpectrum(format!("values sum to {total}, not 1")));
    }
    let mut out = spectrum.to_vec();
    out.resize(rank, 0.0);
    Ok(out)
}

/// A random Jordan frame: orthogonal primitive idempotents summing to the unit.
pub fn random_frame_with(algebra: Algebra, rng: &mut random::SeededRng) -> Vec<Element> {
    let phi = Automorphism::random(algebra, rng);
    (0..algebra.rank())
        .map(|k| {
            phi.apply(&Element::diagonal_unit(algebra, k))
                .expect("automorphism matches its algebra")
        })
        .collect()
}

pub fn random_frame(algebra: Algebra, seed: u64) -> Vec<Element> {
    random_frame_with(algebra, &mut random::rng(seed))
}

/// `Σ λₖ Fₖ` over a frame.
pub fn combine_frame(frame: &[Element], weights: &[f64]) -> Element {
    let mut out = Element::zero(frame[0].algebra());
    for (w, f) in weights.iter().zip(frame) {
        out.axpy(*w, f);
    }
    out
}

/// Seeded random state; the spectrum defaults to a uniform draw from the simplex.
pub fn random_state(
    algebra: Algebra,
    seed: u64,
    spectrum: Option<&[f64]>,
) -> Result<StateElement> {
    let algebra = algebra.validate()?;
    let mut rng = random::rng(seed);
    let rank = algebra.rank();
    let lambda = match spectrum {
        Some(s) => checked_spectrum(s, rank)?,
        None => random::random_simplex(rank, &mut rng),
    };
    let frame = random_frame_with(algebra, &mut rng);
    Ok(StateElement::new_unchecked(combine_frame(&frame, &lambda)))
}

/// Seeded full-rank state whose spectrum is a simplex draw mixed equally with
/// the uniform spectrum, so every eigenvalue is at least `1/(2·rank)`.
pub fn random_faithful_state(algebra: Algebra, seed: u64) -> Result<StateElement> {
    let algebra = algebra.validate()?;
    let rank = algebra.rank();
    let mut rng = random::rng(seed ^ 0x5eed_fa17);
    let spectrum: Vec<f64> = random::random_simplex(rank, &mut rng)
        .into_iter()
        .map(|p| 0.5 * p + 0.5 / rank as f64)
        .collect();
    random_state(algebra, seed, Some(&spectrum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division::{Coefficient, Ring};
    use crate::testing::{random_element, ALL_TEST_ALGEBRAS};

    fn check_decomposition(x: &Element, dec: &SpectralDecomposition, tol: f64) {
        let unit = Element::unit(x.algebra());
        let mut sum = Element::zero(x.algebra());
        for (i, e) in dec.idempotents.iter().enumerate() {
            sum.axpy(1.0, e);
            assert!(e.square().distance(e) < tol, "idempotent {i}");
            assert!(
                (e.trace() - dec.multiplicities[i] as f64).abs() < tol,
                "trace of idempotent {i}"
            );
            for f in dec.idempotents.iter().skip(i + 1) {
                assert!(e.circ(f).norm() < tol, "orthogonality");
            }
        }
        assert!(sum.distance(&unit) < tol);
        assert!(dec.reconstruct().distance(x) < tol * (1.0 + x.norm()));
        assert_eq!(dec.multiplicities.iter().sum::<usize>(), x.algebra().rank());
        let sp = dec.spectrum();
        assert!((sp.total() - x.trace()).abs() < tol * (1.0 + x.norm()));
        assert!(sp.values().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn decompositions_satisfy_frame_invariants() {
        for (i, alg) in ALL_TEST_ALGEBRAS.iter().enumerate() {
            for seed in 0..10u64 {
                let x = random_element(*alg, 1000 * i as u64 + seed);
                let dec = eigendecompose(&x).unwrap();
                check_decomposition(&x, &dec, 1e-9);
            }
        }
    }

    #[test]
    fn spin_examples() {
        let x = Element::spin(1.0, vec![0.0; 3]).unwrap();
        let dec = eigendecompose(&x).unwrap();
        assert_eq!(dec.eigenvalues, vec![1.0]);
        assert_eq!(dec.multiplicities, vec![2]);
        assert_eq!(dec.idempotents[0], Element::unit(Algebra::Spin(3)));

        let rho = Element::spin(0.5, vec![0.5, 0.0, 0.0]).unwrap();
        let dec = eigendecompose(&rho).unwrap();
        assert_eq!(dec.eigenvalues, vec![1.0, 0.0]);
        check_decomposition(&rho, &dec, 1e-12);
    }

    #[test]
    fn albert_diagonal() {
        let x = Element::diagonal(Algebra::Albert, &[2.0, 3.0, 1.0]).unwrap();
        let dec = eigendecompose(&x).unwrap();
        for (got, want) in dec.eigenvalues.iter().zip([3.0, 2.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(dec.idempotents[0].distance(&Element::diagonal_unit(Algebra::Albert, 1)) < 1e-12);
        assert!(dec.idempotents[2].distance(&Element::diagonal_unit(Algebra::Albert, 2)) < 1e-12);
    }

    #[test]
    fn albert_degenerate_cases() {
        let x = Element::unit(Algebra::Albert).scale(0.7);
        let dec = eigendecompose(&x).unwrap();
        assert_eq!(dec.multiplicities, vec![3]);
        assert!((dec.eigenvalues[0] - 0.7).abs() < 1e-15);
        let frame = random_frame(Algebra::Albert, 9);
        let y = combine_frame(&frame, &[0.5, 0.25, 0.25]);
        let dec = eigendecompose(&y).unwrap();
        assert_eq!(dec.multiplicities, vec![1, 2]);
        check_decomposition(&y, &dec, 1e-9);
    }

    #[test]
    fn albert_power_traces_match_eigenvalues() {
        for seed in 0..20 {
            let x = random_element(Algebra::Albert, seed);
            let sp = eigenvalues(&x).unwrap();
            let p = power_traces(&x);
            for k in 1..=3 {
                let s: f64 = sp.values().iter().map(|l| l.powi(k as i32)).sum();
                let want = p[k - 1];
                assert!((s - want).abs() <= 1e-8 * (1.0 + want.abs()), "k = {k}");
            }
            let x3 = x.power(3).unwrap().trace();
            assert!((x3 - p[2]).abs() < 1e-10 * (1.0 + x3.abs()));
        }
    }

    #[test]
    fn quaternion_eigenvalues_pair() {
        for seed in 0..20 {
            let x = random_element(Algebra::Herm(Ring::H, 3), seed);
            assert!(quaternion_pairing_residual(&x).unwrap() < 1e-8);
        }
    }

    #[test]
    fn functional_calculus_examples() {
        for (i, alg) in ALL_TEST_ALGEBRAS.iter().enumerate() {
            let x = random_element(*alg, 40 + i as u64);
            let id = apply_function(&x, |l| l, Domain::Real).unwrap();
            assert!(id.distance(&x) < 1e-9 * (1.0 + x.norm()));
            let sq = apply_function(&x, |l| l * l, Domain::Real).unwrap();
            assert!(sq.distance(&x.square()) < 1e-8 * (1.0 + sq.norm()), "{alg}");
            let rho = random_state(*alg, 7 + i as u64, None).unwrap();
            let ln = apply_function(rho.element(), f64::ln, Domain::Positive).unwrap();
            let back = apply_function(&ln, f64::exp, Domain::Real).unwrap();
            assert!(back.distance(rho.element()) < 1e-8, "{alg}");
        }
    }

    #[test]
    fn domain_violations() {
        let alg = Algebra::Herm(Ring::C, 2);
        let pure = random_state(alg, 1, Some(&[1.0])).unwrap();
        assert!(matches!(
            apply_function(pure.element(), f64::ln, Domain::Positive),
            Err(Error::DomainViolation(_))
        ));
        let guarded = apply_function(pure.element(), f64::ln, Domain::ZeroGuarded).unwrap();
        assert!(guarded.norm() < 1e-12);
        let neg = Element::diagonal(alg, &[1.0, -0.5]).unwrap();
        assert!(apply_function(&neg, f64::ln, Domain::ZeroGuarded).is_err());
    }

    #[test]
    fn strict_spectrality_across_sweep_orders() {
        let algs = [
            Algebra::Herm(Ring::R, 4),
            Algebra::Herm(Ring::C, 4),
            Algebra::Herm(Ring::H, 3),
        ];
        for alg in algs {
            for seed in 0..10 {
                let x = random_element(alg, seed);
                let a = eigendecompose_with(&x, SweepOrder::RowCyclic).unwrap();
                let b = eigendecompose_with(&x, SweepOrder::ReverseColumn).unwrap();
                let sp = a.spectrum();
                let median = sp.values()[sp.len() / 2];
                let fs: [&dyn Fn(f64) -> f64; 3] = [
                    &|l| l * l,
                    &|l: f64| l.abs(),
                    &|l| if l >= median - 1e-9 { 1.0 } else { 0.0 },
                ];
                for f in fs {
                    assert!(a.map(f).distance(&b.map(f)) < 1e-8, "{alg}");
                }
            }
        }
    }

    #[test]
    fn positivity_examples() {
        for (i, alg) in ALL_TEST_ALGEBRAS.iter().enumerate() {
            let x = random_element(*alg, 70 + i as u64);
            assert!(is_positive(&x.square()).unwrap());
            assert!(is_positive(&Element::unit(*alg)).unwrap());
        }
        let x = Element::spin(1.0, vec![2.0, 0.0, 0.0]).unwrap();
        assert!(!is_positive(&x).unwrap());
    }

    #[test]
    fn majorization_examples() {
        let s = |v: &[f64]| Spectrum::new(v.to_vec());
        assert_eq!(
            majorize_compare(&s(&[0.5, 0.5]), &s(&[0.25; 4])).unwrap(),
            Majorization::Dominates
        );
        assert_eq!(
            majorize_compare(&s(&[0.5, 0.25, 0.25]), &s(&[0.5, 0.25, 0.25])).unwrap(),
            Majorization::Equal
        );
        assert_eq!(
            majorize_compare(&s(&[0.5, 0.3, 0.2]), &s(&[0.6, 0.2, 0.2])).unwrap(),
            Majorization::DominatedBy
        );
        assert_eq!(
            majorize_compare(&s(&[0.5, 0.5, 0.0]), &s(&[0.6, 0.2, 0.2])).unwrap(),
            Majorization::Incomparable
        );
        assert!(majorize_compare(&s(&[0.5]), &s(&[0.6, 0.2])).is_err());
    }

    #[test]
    fn random_state_examples() {
        for (i, alg) in ALL_TEST_ALGEBRAS.iter().enumerate() {
            let r = alg.rank();
            let mut pure = vec![0.0; r];
            pure[0] = 1.0;
            let p = random_state(*alg, i as u64, Some(&pure)).unwrap();
            assert!(p.element().square().distance(p.element()) < 1e-10);
            let uniform = vec![1.0 / r as f64; r];
            let m = random_state(*alg, i as u64, Some(&uniform)).unwrap();
            let center = Element::unit(*alg).scale(1.0 / r as f64);
            assert!(m.element().distance(&center) < 1e-9, "{alg}");
            let a = random_state(*alg, 99, None).unwrap();
            let b = random_state(*alg, 99, None).unwrap();
            assert_eq!(a, b);
            assert!(StateElement::new(a.into_element()).is_ok());
        }
        assert!(random_state(Algebra::Spin(3), 0, Some(&[0.5, 0.3, 0.2])).is_err());
        assert!(random_state(Algebra::Spin(3), 0, Some(&[0.5, 0.6])).is_err());
        assert!(random_state(Algebra::Spin(3), 0, Some(&[1.5, -0.5])).is_err());
    }

    #[test]
    fn spectrum_invariant_under_automorphisms() {
        for (i, alg) in ALL_TEST_ALGEBRAS.iter().enumerate() {
            let x = random_element(*alg, 500 + i as u64);
            let phi = Automorphism::random(*alg, &mut random::rng(600 + i as u64));
            let a = eigenvalues(&x).unwrap();
            let b = eigenvalues(&phi.apply(&x).unwrap()).unwrap();
            for (p, q) in a.values().iter().zip(b.values()) {
                assert!((p - q).abs() < 1e-9, "{alg}");
            }
        }
    }

    #[test]
    fn uniform_mixture_of_frame_is_center() {
        for (i, alg) in ALL_TEST_ALGEBRAS.iter().enumerate() {
            let frame = random_frame(*alg, 300 + i as u64);
            let r = alg.rank() as f64;
            let mix = combine_frame(&frame, &vec![1.0 / r; alg.rank()]);
            assert!(mix.distance(&Element::unit(*alg).scale(1.0 / r)) < 1e-9, "{alg}");
        }
    }

    #[test]
    fn spectrum_padding() {
        let s = Spectrum::new(vec![0.25, 0.75]);
        assert_eq!(s.values(), &[0.75, 0.25]);
        assert_eq!(s.padded(4).values(), &[0.75, 0.25, 0.0, 0.0]);
        let c = Coefficient::one(Ring::R);
        assert_eq!(c.re(), 1.0);
    }

    #[test]
    fn albert_repeated_eigenvalues_are_accurate() {
        let frame = random_frame(Algebra::Albert, 31);
        // eigenvectors of a pair split by g are only determined to about ε/g
        let cases = [
            ([1.0, 0.0, 0.0], 1e-11),
            ([0.6, 0.4, 0.0], 1e-11),
            ([0.5, 0.25, 0.25], 1e-11),
            ([0.3, 0.3 + 1e-7, 0.4 - 1e-7], 1e-7),
        ];
        for (w, idem_tol) in cases {
            let x = combine_frame(&frame, &w);
            let mut want = w.to_vec();
            want.sort_by(|a, b| b.total_cmp(a));
            let got = eigenvalues(&x).unwrap();
            for (g, e) in got.values().iter().zip(&want) {
                assert!((g - e).abs() < 1e-13, "{w:?}: {g} vs {e}");
            }
            let d = eigendecompose(&x).unwrap();
            assert!(d.reconstruct().distance(&x) < 1e-12, "{w:?}");
            for e in &d.idempotents {
                assert!(e.square().distance(e) < idem_tol, "{w:?}");
            }
        }
    }
}
