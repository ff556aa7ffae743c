//! Entropy, information divergence, sandwiched Rényi divergence and the
//! trace-derivative formulas behind entropy concavity.

use std::fmt;

use crate::error::{Error, Result};
use crate::jordan::{spin_to_pauli, Algebra, Element, StateElement};
use crate::linalg::{self, CMatrix, SweepOrder};
use crate::spectral::{self, check_domain, zero_tolerance, Domain, POSITIVITY_TOL};

/// Weight of `P` on the kernel of `Q` above which the divergence is infinite.
pub const SUPPORT_WEIGHT_TOL: f64 = 1e-9;
/// Negative rounding residue clipped to zero.
pub const CLIP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DivergenceValue {
    Finite(f64),
    Infinite,
}

impl DivergenceValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            DivergenceValue::Finite(v) => Some(v),
            DivergenceValue::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, DivergenceValue::Infinite)
    }
}

impl fmt::Display for DivergenceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivergenceValue::Finite(v) => write!(f, "{v}"),
            DivergenceValue::Infinite => f.write_str("inf"),
        }
    }
}

fn clip(v: f64) -> f64 {
    if (-CLIP_TOL..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

fn ensure_positive(min: f64) -> Result<()> {
    if min < -POSITIVITY_TOL {
        Err(Error::NotPositive(min))
    } else {
        Ok(())
    }
}

/// `−Σ λ ln λ` over the spectrum, with `0·ln 0 = 0`.
pub fn entropy(x: &Element) -> Result<f64> {
    let sp = spectral::eigenvalues(x)?;
    ensure_positive(sp.min())?;
    let tol = zero_tolerance(x);
    Ok(sp
        .values()
        .iter()
        .filter(|&&l| l > tol)
        .map(|&l| -l * l.ln())
        .sum())
}

/// `ln(rank)`, attained by `unit/rank`.
pub fn max_entropy(algebra: Algebra) -> f64 {
    (algebra.rank() as f64).ln()
}

/// `tr[P∘ln P − P∘ln Q + Q − P]`, or `Infinite` when `P` has weight outside the
/// support of `Q`.
pub fn divergence(p: &Element, q: &Element) -> Result<DivergenceValue> {
    if p.algebra() != q.algebra() {
        return Err(Error::AlgebraMismatch(p.algebra(), q.algebra()));
    }
    let dp = spectral::eigendecompose(p)?;
    let dq = spectral::eigendecompose(q)?;
    ensure_positive(*dp.eigenvalues.last().unwrap())?;
    ensure_positive(*dq.eigenvalues.last().unwrap())?;

    let tol_p = zero_tolerance(p);
    let self_term: f64 = dp
        .eigenvalues
        .iter()
        .zip(&dp.multiplicities)
        .filter(|(l, _)| **l > tol_p)
        .map(|(l, m)| *m as f64 * l * l.ln())
        .sum();

    let tol_q = zero_tolerance(q);
    let mut kernel_weight = 0.0;
    let mut cross = 0.0;
    for (lam, e) in dq.eigenvalues.iter().zip(&dq.idempotents) {
        let w = p.dot(e);
        if *lam <= tol_q {
            kernel_weight += w;
        } else {
            cross += w * lam.ln();
        }
    }
    if kernel_weight > SUPPORT_WEIGHT_TOL {
        return Ok(DivergenceValue::Infinite);
    }
    let value = self_term - cross + q.trace() - p.trace();
    Ok(DivergenceValue::Finite(clip(value)))
}

/// `ln(1/(1−t))`, the divergence from `ρ` to `(1−t)ρ + tσ` whenever `ρ ⊥ σ`.
pub fn divergence_locality_value(t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidArgument(format!("t = {t} must lie in (0, 1)")));
    }
    Ok(-(-t).ln_1p())
}

/// Complex matrix image of a special algebra element and the factor converting
/// its trace to the Jordan trace.
fn associative_image(x: &Element) -> Result<(CMatrix, f64)> {
    match x.algebra() {
        Algebra::Albert => Err(Error::Unsupported("exceptional algebra".into())),
        Algebra::Spin(d) if d > 3 => Err(Error::Unsupported(format!(
            "Spin({d}) has no 2x2 complex image"
        ))),
        Algebra::Spin(_) => Ok((linalg::to_complex(&spin_to_pauli(x)?)?, 1.0)),
        Algebra::Herm(ring, _) => {
            let factor = if ring == crate::division::Ring::H { 0.5 } else { 1.0 };
            Ok((linalg::to_complex(x)?, factor))
        }
    }
}

/// `(α−1)⁻¹ ln tr[(σ^γ ρ σ^γ)^α]` with `γ = (1−α)/2α`, evaluated with the
/// associative matrix product.
pub fn renyi_sandwiched(
    rho: &StateElement,
    sigma: &StateElement,
    alpha: f64,
) -> Result<DivergenceValue> {
    if !(alpha > 0.0) || !alpha.is_finite() || alpha == 1.0 {
        return Err(Error::InvalidArgument(format!(
            "alpha = {alpha} must be positive, finite and different from 1"
        )));
    }
    if rho.algebra() != sigma.algebra() {
        return Err(Error::AlgebraMismatch(rho.algebra(), sigma.algebra()));
    }
    let (r, factor) = associative_image(rho.element())?;
    let (s, _) = associative_image(sigma.element())?;
    let es = linalg::jacobi_eigh(&s, SweepOrder::RowCyclic)?;
    let tol = zero_tolerance(sigma.element());
    if alpha > 1.0 {
        let kernel = CMatrix::from_eigen(&es, |l| if l <= tol { 1.0 } else { 0.0 });
        let weight = r.matmul(&kernel).trace_re() * factor;
        if weight > SUPPORT_WEIGHT_TOL {
            return Ok(DivergenceValue::Infinite);
        }
    }
    let gamma = (1.0 - alpha) / (2.0 * alpha);
    let sg = CMatrix::from_eigen(&es, |l| if l > tol { l.powf(gamma) } else { 0.0 });
    let mut x = sg.matmul(&r).matmul(&sg);
    x.hermitize();
    let ex = linalg::jacobi_eigh(&x, SweepOrder::RowCyclic)?;
    let q: f64 = ex.values.iter().map(|&m| m.max(0.0).powf(alpha)).sum::<f64>() * factor;
    if q <= 0.0 {
        return Ok(DivergenceValue::Infinite);
    }
    Ok(DivergenceValue::Finite(clip(q.ln() / (alpha - 1.0))))
}

/// Scalar function with the derivatives needed by the trace-derivative formulas.
pub trait TraceFunction: Sync {
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;
    fn second_derivative(&self, x: f64) -> f64;
    /// Where `value` may be evaluated.
    fn value_domain(&self) -> Domain;
    /// Where `derivative` and `second_derivative` may be evaluated.
    fn derivative_domain(&self) -> Domain;

    /// `(f′(a) − f′(b))/(a − b)`, or `f″(a)` when `a == b`.
    fn divided_difference(&self, a: f64, b: f64) -> f64 {
        if a == b {
            self.second_derivative(a)
        } else {
            (self.derivative(a) - self.derivative(b)) / (a - b)
        }
    }
}

/// `f(x) = −x ln x`, the entropy kernel.
#[derive(Clone, Copy, Debug, Default)]
pub struct NegXLnX;

impl TraceFunction for NegXLnX {
    fn value(&self, x: f64) -> f64 {
        if x == 0.0 {
            0.0
        } else {
            -x * x.ln()
        }
    }

    fn derivative(&self, x: f64) -> f64 {
        -x.ln() - 1.0
    }

    fn second_derivative(&self, x: f64) -> f64 {
        -1.0 / x
    }

    fn value_domain(&self) -> Domain {
        Domain::ZeroGuarded
    }

    fn derivative_domain(&self) -> Domain {
        Domain::Positive
    }

    fn divided_difference(&self, a: f64, b: f64) -> f64 {
        if a == b {
            return -1.0 / a;
        }
        // ln(a/b) = ln(1 + (a−b)/b) keeps precision for close eigenvalues
        -((a - b) / b).ln_1p() / (a - b)
    }
}

/// `f(x) = xⁿ` for `n ≥ 0`.
#[derive(Clone, Copy, Debug)]
pub struct Power(pub u32);

impl TraceFunction for Power {
    fn value(&self, x: f64) -> f64 {
        x.powi(self.0 as i32)
    }

    fn derivative(&self, x: f64) -> f64 {
        match self.0 {
            0 => 0.0,
            n => n as f64 * x.powi(n as i32 - 1),
        }
    }

    fn second_derivative(&self, x: f64) -> f64 {
        match self.0 {
            0 | 1 => 0.0,
            n => (n * (n - 1)) as f64 * x.powi(n as i32 - 2),
        }
    }

    fn value_domain(&self) -> Domain {
        Domain::Real
    }

    fn derivative_domain(&self) -> Domain {
        Domain::Real
    }
}

/// `tr[f(A)]`.
pub fn trace_of(a: &Element, f: &dyn TraceFunction) -> Result<f64> {
    let sp = spectral::eigenvalues(a)?;
    let tol = zero_tolerance(a);
    let mut total = 0.0;
    for &l in sp.values() {
        if let Some(l) = check_domain(l, f.value_domain(), tol)? {
            total += f.value(l);
        }
    }
    Ok(total)
}

fn check_pair(a: &Element, b: &Element) -> Result<()> {
    if a.algebra() != b.algebra() {
        return Err(Error::AlgebraMismatch(a.algebra(), b.algebra()));
    }
    Ok(())
}

/// `d/dt tr[f(A + tB)]` at `t = 0`, evaluated as `tr[f′(A)∘B]`.
pub fn trace_derivative(a: &Element, b: &Element, f: &dyn TraceFunction) -> Result<f64> {
    check_pair(a, b)?;
    let fa = spectral::apply_function(a, |l| f.derivative(l), f.derivative_domain())?;
    Ok(fa.dot(b))
}

fn checked_eigenvalues(
    dec: &spectral::SpectralDecomposition,
    a: &Element,
    f: &dyn TraceFunction,
) -> Result<()> {
    let tol = zero_tolerance(a);
    for &l in &dec.eigenvalues {
        check_domain(l, f.derivative_domain(), tol)?;
    }
    Ok(())
}

/// `d²/dt² tr[f(A + tB)]` at `t = 0`.
///
/// With `A = Σ λₖ Eₖ`, the Peirce components `Bₖₖ = U_{Eₖ}B` and
/// `Bₖₗ = 4 Eₖ∘(Eₗ∘B)` give `Σₖ f″(λₖ) tr[Bₖₖ²] + Σ_{k<l} aₖₗ tr[Bₖₗ²]` with
/// `aₖₗ` the divided differences of `f′`.
pub fn trace_second_derivative(a: &Element, b: &Element, f: &dyn TraceFunction) -> Result<f64> {
    check_pair(a, b)?;
    let dec = spectral::eigendecompose(a)?;
    checked_eigenvalues(&dec, a, f)?;
    let lam = &dec.eigenvalues;
    let es = &dec.idempotents;
    let eb: Vec<Element> = es.iter().map(|e| e.circ(b)).collect();
    let mut total = 0.0;
    for k in 0..es.len() {
        // U_E B = 2 E∘(E∘B) − E∘B
        let mut diag = es[k].circ(&eb[k]).scale(2.0);
        diag.axpy(-1.0, &eb[k]);
        total += f.second_derivative(lam[k]) * diag.dot(&diag);
        for l in k + 1..es.len() {
            let off = es[k].circ(&eb[l]).scale(4.0);
            total += f.divided_difference(lam[k], lam[l]) * off.dot(&off);
        }
    }
    Ok(total)
}

/// `Σₖₗ aₖₗ tr[(Eₖ∘B)∘(Eₗ∘B)]` as a literal double sum over the frame of `A`.
///
/// This is not the second derivative for general `f` (it agrees when `f′` is
/// a polynomial of degree at most two), but every term is a product of a
/// divided difference of `f′` and a nonnegative trace, so it certifies the
/// sign of the second derivative for concave `f`.
pub fn trace_second_derivative_double_sum(
    a: &Element,
    b: &Element,
    f: &dyn TraceFunction,
) -> Result<f64> {
    check_pair(a, b)?;
    let dec = spectral::eigendecompose(a)?;
    checked_eigenvalues(&dec, a, f)?;
    let eb: Vec<Element> = dec.idempotents.iter().map(|e| e.circ(b)).collect();
    let mut total = 0.0;
    for (k, lk) in dec.eigenvalues.iter().enumerate() {
        for (l, ll) in dec.eigenvalues.iter().enumerate() {
            total += f.divided_difference(*lk, *ll) * eb[k].dot(&eb[l]);
        }
    }
    Ok(total)
}

/// `tr[(E∘B)∘(F∘B)]`.
pub fn peirce_cross_term(e: &Element, f: &Element, b: &Element) -> Result<f64> {
    check_pair(e, b)?;
    check_pair(f, b)?;
    Ok(e.circ(b).dot(&f.circ(b)))
}
