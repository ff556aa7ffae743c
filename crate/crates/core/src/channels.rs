//! Positive trace-preserving maps of a Jordan algebra into itself.

use crate::automorphism::Automorphism;
use crate::division::{Coefficient, Ring};
use crate::error::{Error, Result};
use crate::info::{self, DivergenceValue};
use crate::jordan::{orthonormal_basis, Algebra, Element, StateElement};
use crate::random::{self, SeededRng};
use crate::spectral::{self, random_frame_with, Domain};

const FRAME_TOL: f64 = 1e-9;

/// Composition tree of positive trace-preserving primitives.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelMap {
    Identity(Algebra),
    Automorphism(Algebra, Automorphism),
    /// `x ↦ tr[x]·σ₀`.
    Replacer(StateElement),
    /// `x ↦ Σₖ U_{Pₖ} x` over orthogonal idempotents summing to the unit.
    Pinching(Vec<Element>),
    /// `x ↦ U_p x + tr[(1−p)∘x]·σ₀`: the compression by `p`, with the lost
    /// trace re-prepared as `σ₀`.
    Compression { p: Element, fallback: StateElement },
    /// Entry-wise conjugation on `Herm(R|C)`; positive but not completely positive.
    Transpose(Algebra),
    /// `x ↦ φ(x)·σ₁ + (tr[x] − φ(x))·σ₀` with `φ(x) = tr[test∘x]`, `0 ≤ test ≤ 1`.
    MeasurePrepare {
        test: Element,
        on_one: StateElement,
        on_zero: StateElement,
    },
    /// Convex combination.
    Mixture(Vec<(f64, ChannelMap)>),
    /// Applied left to right.
    Composition(Vec<ChannelMap>),
}

/// `U_a x = 2a∘(a∘x) − (a∘a)∘x`.
pub fn quadratic_representation(a: &Element, x: &Element) -> Result<Element> {
    if a.algebra() != x.algebra() {
        return Err(Error::AlgebraMismatch(a.algebra(), x.algebra()));
    }
    Ok(quad(a, x))
}

fn quad(a: &Element, x: &Element) -> Element {
    let mut out = a.circ(&a.circ(x)).scale(2.0);
    out.axpy(-1.0, &a.square().circ(x));
    out
}

fn is_idempotent(p: &Element) -> bool {
    p.square().distance(p) <= FRAME_TOL * (1.0 + p.norm())
}

impl ChannelMap {
    pub fn identity(algebra: Algebra) -> Self {
        ChannelMap::Identity(algebra)
    }

    pub fn automorphism(algebra: Algebra, phi: Automorphism) -> Result<Self> {
        if !phi.algebra_compatible(algebra) {
            return Err(Error::InvalidArgument(format!(
                "automorphism does not act on {algebra}"
            )));
        }
        Ok(ChannelMap::Automorphism(algebra, phi))
    }

    pub fn replacer(sigma: StateElement) -> Self {
        ChannelMap::Replacer(sigma)
    }

    pub fn pinching(frame: Vec<Element>) -> Result<Self> {
        let first = frame
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty pinching frame".into()))?;
        let alg = first.algebra();
        let mut sum = Element::zero(alg);
        for (i, p) in frame.iter().enumerate() {
            if p.algebra() != alg {
                return Err(Error::AlgebraMismatch(alg, p.algebra()));
            }
            if !is_idempotent(p) {
                return Err(Error::InvalidArgument(format!("frame element {i} is not idempotent")));
            }
            sum.axpy(1.0, p);
        }
        if sum.distance(&Element::unit(alg)) > FRAME_TOL {
            return Err(Error::InvalidArgument("frame does not sum to the unit".into()));
        }
        Ok(ChannelMap::Pinching(frame))
    }

    pub fn compression(p: Element, fallback: StateElement) -> Result<Self> {
        if p.algebra() != fallback.algebra() {
            return Err(Error::AlgebraMismatch(p.algebra(), fallback.algebra()));
        }
        if !is_idempotent(&p) {
            return Err(Error::InvalidArgument("compression needs an idempotent".into()));
        }
        Ok(ChannelMap::Compression { p, fallback })
    }

    pub fn transpose(algebra: Algebra) -> Result<Self> {
        match algebra {
            Algebra::Herm(Ring::R | Ring::C, _) => Ok(ChannelMap::Transpose(algebra)),
            _ => Err(Error::Unsupported(format!("transpose on {algebra}"))),
        }
    }

    pub fn measure_prepare(
        test: Element,
        on_one: StateElement,
        on_zero: StateElement,
    ) -> Result<Self> {
        let alg = test.algebra();
        for s in [&on_one, &on_zero] {
            if s.algebra() != alg {
                return Err(Error::AlgebraMismatch(alg, s.algebra()));
            }
        }
        let sp = spectral::eigenvalues(&test)?;
        if sp.min() < -FRAME_TOL || sp.max() > 1.0 + FRAME_TOL {
            return Err(Error::InvalidArgument(format!(
                "test eigenvalues must lie in [0, 1], found [{}, {}]",
                sp.min(),
                sp.max()
            )));
        }
        Ok(ChannelMap::MeasurePrepare {
            test,
            on_one,
            on_zero,
        })
    }

    pub fn mixture(parts: Vec<(f64, ChannelMap)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptyCombination);
        }
        if parts.iter().any(|(w, _)| !(*w >= 0.0)) {
            return Err(Error::InvalidArgument("mixture weights must be nonnegative".into()));
        }
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("mixture weights sum to {total}")));
        }
        let alg = parts[0].1.algebra();
        if let Some((_, c)) = parts.iter().find(|(_, c)| c.algebra() != alg) {
            return Err(Error::AlgebraMismatch(alg, c.algebra()));
        }
        Ok(ChannelMap::Mixture(parts))
    }

    pub fn composition(parts: Vec<ChannelMap>) -> Result<Self> {
        let first = parts.first().ok_or(Error::EmptyCombination)?;
        let alg = first.algebra();
        if let Some(c) = parts.iter().find(|c| c.algebra() != alg) {
            return Err(Error::AlgebraMismatch(alg, c.algebra()));
        }
        Ok(ChannelMap::Composition(parts))
    }

    pub fn algebra(&self) -> Algebra {
        match self {
            ChannelMap::Identity(a) | ChannelMap::Automorphism(a, _) | ChannelMap::Transpose(a) => {
                *a
            }
            ChannelMap::Replacer(s) => s.algebra(),
            ChannelMap::Pinching(f) => f[0].algebra(),
            ChannelMap::Compression { p, .. } => p.algebra(),
            ChannelMap::MeasurePrepare { test, .. } => test.algebra(),
            ChannelMap::Mixture(parts) => parts[0].1.algebra(),
            ChannelMap::Composition(parts) => parts[0].algebra(),
        }
    }

    /// Short name of the primitive or combinator at the root.
    pub fn kind(&self) -> &'static str {
        match self {
            ChannelMap::Identity(_) => "identity",
            ChannelMap::Automorphism(..) => "automorphism",
            ChannelMap::Replacer(_) => "replacer",
            ChannelMap::Pinching(_) => "pinching",
            ChannelMap::Compression { .. } => "compression",
            ChannelMap::Transpose(_) => "transpose",
            ChannelMap::MeasurePrepare { .. } => "measure-prepare",
            ChannelMap::Mixture(_) => "mixture",
            ChannelMap::Composition(_) => "composition",
        }
    }

    /// Whether a transpose occurs anywhere in the tree.
    pub fn contains_transpose(&self) -> bool {
        match self {
            ChannelMap::Transpose(_) => true,
            ChannelMap::Mixture(parts) => parts.iter().any(|(_, c)| c.contains_transpose()),
            ChannelMap::Composition(parts) => parts.iter().any(ChannelMap::contains_transpose),
            _ => false,
        }
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.algebra() != self.algebra() {
            return Err(Error::AlgebraMismatch(self.algebra(), x.algebra()));
        }
        Ok(self.apply_unchecked(x))
    }

    fn apply_unchecked(&self, x: &Element) -> Element {
        match self {
            ChannelMap::Identity(_) => x.clone(),
            ChannelMap::Automorphism(_, phi) => phi.apply(x).expect("checked at construction"),
            ChannelMap::Replacer(s) => s.element().scale(x.trace()),
            ChannelMap::Pinching(frame) => {
                let mut out = Element::zero(x.algebra());
                for p in frame {
                    out.axpy(1.0, &quad(p, x));
                }
                out
            }
            ChannelMap::Compression { p, fallback } => {
                let kept = quad(p, x);
                let lost = x.trace() - p.dot(x);
                let mut out = kept;
                out.axpy(lost, fallback.element());
                out
            }
            ChannelMap::Transpose(alg) => {
                let entries: Vec<Coefficient> =
                    x.entries().unwrap().iter().map(Coefficient::conj).collect();
                Element::hermitian(*alg, entries).expect("conjugate of a Hermitian matrix")
            }
            ChannelMap::MeasurePrepare {
                test,
                on_one,
                on_zero,
            } => {
                let phi = test.dot(x);
                let mut out = on_one.element().scale(phi);
                out.axpy(x.trace() - phi, on_zero.element());
                out
            }
            ChannelMap::Mixture(parts) => {
                let mut out = Element::zero(x.algebra());
                for (w, c) in parts {
                    out.axpy(*w, &c.apply_unchecked(x));
                }
                out
            }
            ChannelMap::Composition(parts) => parts
                .iter()
                .fold(x.clone(), |acc, c| c.apply_unchecked(&acc)),
        }
    }

    pub fn apply_state(&self, s: &StateElement) -> Result<StateElement> {
        Ok(StateElement::new_unchecked(self.apply(s.element())?))
    }

    /// The map `Φ*` with `tr[Φ*(g)∘x] = tr[g∘Φ(x)]`, evaluated at `g`.
    pub fn adjoint_apply(&self, g: &Element) -> Result<Element> {
        if g.algebra() != self.algebra() {
            return Err(Error::AlgebraMismatch(self.algebra(), g.algebra()));
        }
        let basis = orthonormal_basis(g.algebra());
        let mut out = Element::zero(g.algebra());
        for b in &basis {
            out.axpy(g.dot(&self.apply_unchecked(b)), b);
        }
        Ok(out)
    }
}

/// `x ↦ (1−f)·tr[x]·center + f·x`.
pub fn contraction(center: StateElement, factor: f64) -> Result<ChannelMap> {
    if !(0.0..=1.0).contains(&factor) {
        return Err(Error::InvalidArgument(format!(
            "contraction factor {factor} outside [0, 1]"
        )));
    }
    let alg = center.algebra();
    ChannelMap::mixture(vec![
        (factor, ChannelMap::identity(alg)),
        (1.0 - factor, ChannelMap::replacer(center)),
    ])
}

/// Primitive kinds produced by [`random_primitive`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    Identity,
    Automorphism,
    Replacer,
    Pinching,
    Compression,
    Transpose,
    MeasurePrepare,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 7] = [
        ChannelKind::Identity,
        ChannelKind::Automorphism,
        ChannelKind::Replacer,
        ChannelKind::Pinching,
        ChannelKind::Compression,
        ChannelKind::Transpose,
        ChannelKind::MeasurePrepare,
    ];

    /// Kinds whose channels fix the unit (the replacer prepares `unit/rank`).
    pub const UNITAL: [ChannelKind; 5] = [
        ChannelKind::Identity,
        ChannelKind::Automorphism,
        ChannelKind::Replacer,
        ChannelKind::Pinching,
        ChannelKind::Transpose,
    ];

    pub fn available(self, algebra: Algebra) -> bool {
        match self {
            ChannelKind::Transpose => matches!(algebra, Algebra::Herm(Ring::R | Ring::C, _)),
            _ => true,
        }
    }
}

/// Which channels [`random_ptp_channel_with`] may generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ChannelFamily {
    #[default]
    All,
    /// Unit-preserving channels only.
    Unital,
}

fn random_state_with(algebra: Algebra, rng: &mut SeededRng) -> StateElement {
    let w = random::random_simplex(algebra.rank(), rng);
    let frame = random_frame_with(algebra, rng);
    StateElement::new_unchecked(spectral::combine_frame(&frame, &w))
}

/// Random grouping of a random frame into 1 to `rank` orthogonal idempotents.
fn random_coarse_frame(algebra: Algebra, rng: &mut SeededRng) -> Vec<Element> {
    let frame = random_frame_with(algebra, rng);
    let groups = 1 + (random::uniform(rng, 0.0, frame.len() as f64) as usize).min(frame.len() - 1);
    let mut out = vec![Element::zero(algebra); groups];
    for (k, e) in frame.iter().enumerate() {
        let g = if k < groups {
            k
        } else {
            random::uniform(rng, 0.0, groups as f64) as usize % groups
        };
        out[g].axpy(1.0, e);
    }
    out
}

pub fn random_primitive(
    algebra: Algebra,
    kind: ChannelKind,
    family: ChannelFamily,
    rng: &mut SeededRng,
) -> Result<ChannelMap> {
    let algebra = algebra.validate()?;
    if !kind.available(algebra) {
        return Err(Error::Unsupported(format!("{kind:?} on {algebra}")));
    }
    match kind {
        ChannelKind::Identity => Ok(ChannelMap::identity(algebra)),
        ChannelKind::Automorphism => {
            ChannelMap::automorphism(algebra, Automorphism::random(algebra, rng))
        }
        ChannelKind::Replacer => Ok(ChannelMap::replacer(match family {
            ChannelFamily::All => random_state_with(algebra, rng),
            ChannelFamily::Unital => StateElement::new_unchecked(
                Element::unit(algebra).scale(1.0 / algebra.rank() as f64),
            ),
        })),
        ChannelKind::Pinching => ChannelMap::pinching(random_coarse_frame(algebra, rng)),
        ChannelKind::Compression => {
            let frame = random_frame_with(algebra, rng);
            let keep = 1 + random::uniform(rng, 0.0, (frame.len() - 1) as f64) as usize;
            let mut p = Element::zero(algebra);
            for e in &frame[..keep] {
                p.axpy(1.0, e);
            }
            ChannelMap::compression(p, random_state_with(algebra, rng))
        }
        ChannelKind::Transpose => ChannelMap::transpose(algebra),
        ChannelKind::MeasurePrepare => {
            let x = random::random_element_with(algebra, rng);
            // logistic map of a random element: eigenvalues in (0, 1)
            let test = spectral::apply_function(&x, |l| 1.0 / (1.0 + (-l).exp()), Domain::Real)?;
            let a = random_state_with(algebra, rng);
            let b = random_state_with(algebra, rng);
            ChannelMap::measure_prepare(test, a, b)
        }
    }
}

/// Random channel tree of the given depth, deterministic in `seed`.
pub fn random_ptp_channel(algebra: Algebra, seed: u64, depth: usize) -> Result<ChannelMap> {
    random_ptp_channel_with(algebra, seed, depth, ChannelFamily::All)
}

pub fn random_ptp_channel_with(
    algebra: Algebra,
    seed: u64,
    depth: usize,
    family: ChannelFamily,
) -> Result<ChannelMap> {
    if depth == 0 {
        return Err(Error::InvalidArgument("channel depth must be at least 1".into()));
    }
    let mut rng = random::rng(seed);
    random_tree(algebra, depth, family, &mut rng)
}

fn random_tree(
    algebra: Algebra,
    depth: usize,
    family: ChannelFamily,
    rng: &mut SeededRng,
) -> Result<ChannelMap> {
    let pool: Vec<ChannelKind> = match family {
        ChannelFamily::All => ChannelKind::ALL.to_vec(),
        ChannelFamily::Unital => ChannelKind::UNITAL.to_vec(),
    }
    .into_iter()
    .filter(|k| k.available(algebra))
    .collect();
    let leaf = |rng: &mut SeededRng| {
        let k = pool[random::uniform(rng, 0.0, pool.len() as f64) as usize % pool.len()];
        random_primitive(algebra, k, family, rng)
    };
    if depth == 1 {
        return leaf(rng);
    }
    let roll = random::uniform(rng, 0.0, 1.0);
    let transposable = matches!(algebra, Algebra::Herm(Ring::C, _));
    if transposable && roll < 0.3 {
        // transpose sandwiched between completely positive pieces
        let before = random_tree(algebra, depth - 1, family, rng)?;
        let after = random_tree(algebra, depth - 1, family, rng)?;
        return ChannelMap::composition(vec![before, ChannelMap::transpose(algebra)?, after]);
    }
    let arity = 2 + (random::uniform(rng, 0.0, 2.0) as usize).min(1);
    let children = (0..arity)
        .map(|_| random_tree(algebra, depth - 1, family, rng))
        .collect::<Result<Vec<_>>>()?;
    if roll < 0.65 {
        ChannelMap::composition(children)
    } else {
        let w = random::random_simplex(arity, rng);
        ChannelMap::mixture(w.into_iter().zip(children).collect())
    }
}

/// Outcome of one data-processing trial `D(ρ‖σ) − D(Φρ‖Φσ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DpiOutcome {
    Slack(f64),
    /// Input divergence infinite, output finite.
    InfiniteSlack,
    /// Both divergences infinite; the inequality says nothing.
    NonBinding,
    /// Output divergence infinite while the input one is finite.
    Violated,
}

impl DpiOutcome {
    /// Slack as a real number, `+∞`/`−∞` for the infinite cases, `None` when non-binding.
    pub fn slack(self) -> Option<f64> {
        match self {
            DpiOutcome::Slack(s) => Some(s),
            DpiOutcome::InfiniteSlack => Some(f64::INFINITY),
            DpiOutcome::Violated => Some(f64::NEG_INFINITY),
            DpiOutcome::NonBinding => None,
        }
    }
}

pub fn dpi_trial(phi: &ChannelMap, rho: &Element, sigma: &Element) -> Result<DpiOutcome> {
    let before = info::divergence(rho, sigma)?;
    let after = info::divergence(&phi.apply(rho)?, &phi.apply(sigma)?)?;
    Ok(match (before, after) {
        (DivergenceValue::Finite(a), DivergenceValue::Finite(b)) => DpiOutcome::Slack(a - b),
        (DivergenceValue::Infinite, DivergenceValue::Finite(_)) => DpiOutcome::InfiniteSlack,
        (DivergenceValue::Infinite, DivergenceValue::Infinite) => DpiOutcome::NonBinding,
        (DivergenceValue::Finite(_), DivergenceValue::Infinite) => DpiOutcome::Violated,
    })
}

fn check_pure_pair(sigma: &Element, rho: &Element, label: &str) -> Result<()> {
    if sigma.algebra() != rho.algebra() {
        return Err(Error::AlgebraMismatch(sigma.algebra(), rho.algebra()));
    }
    for (name, s) in [("first", sigma), ("second", rho)] {
        if (s.trace() - 1.0).abs() > FRAME_TOL || !is_idempotent(s) {
            return Err(Error::NonOrthogonal(format!(
                "{label}: {name} state is not a pure state"
            )));
        }
    }
    let overlap = sigma.dot(rho);
    if overlap.abs() > FRAME_TOL {
        return Err(Error::NonOrthogonal(format!(
            "{label}: states overlap with tr[σ∘ρ] = {overlap}"
        )));
    }
    Ok(())
}

/// Maps `Φ(π) = φ₁(π)σ₂ + (tr π − φ₁(π))ρ₂` and `Ψ(π) = φ₂(π)σ₁ + (tr π − φ₂(π))ρ₁`
/// with `φᵢ(π) = tr[σᵢ∘π]`; `Ψ∘Φ` fixes the segment `[ρ₁, σ₁]`.
pub fn sufficiency_pair(
    source: (&StateElement, &StateElement),
    target: (&StateElement, &StateElement),
) -> Result<(ChannelMap, ChannelMap)> {
    let (s1, r1) = source;
    let (s2, r2) = target;
    check_pure_pair(s1.element(), r1.element(), "source")?;
    check_pure_pair(s2.element(), r2.element(), "target")?;
    let phi = ChannelMap::measure_prepare(s1.element().clone(), s2.clone(), r2.clone())?;
    let psi = ChannelMap::measure_prepare(s2.element().clone(), s1.clone(), r1.clone())?;
    Ok((phi, psi))
}

/// Orthogonal pure pair `(σ₁, ρ₁) = ½(1 ± u)` of a spin factor, where `u` is the
/// unit vector along the Bloch difference `σ − ρ`.
///
/// A positive trace-preserving map that keeps `‖σ − ρ‖` fixes the center and
/// carries this diameter isometrically onto another one, so the pair built
/// from the images is the matching target for [`sufficiency_pair`].
pub fn spin_diameter(
    rho: &StateElement,
    sigma: &StateElement,
) -> Result<(StateElement, StateElement)> {
    let (Some((sr, vr)), Some((ss, vs))) = (rho.element().spin_parts(), sigma.element().spin_parts())
    else {
        return Err(Error::Unsupported("diameters are defined on spin factors".into()));
    };
    if (sr - 0.5).abs() > 1e-12 || (ss - 0.5).abs() > 1e-12 {
        return Err(Error::NotState("diameter endpoints need unit-trace states".into()));
    }
    let dir: Vec<f64> = vs.iter().zip(vr).map(|(a, b)| a - b).collect();
    let len = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    if len < 1e-12 {
        return Err(Error::InvalidArgument("diameter through coincident states".into()));
    }
    let end = |sign: f64| {
        let v = dir.iter().map(|d| sign * 0.5 * d / len).collect();
        StateElement::new_unchecked(Element::spin(0.5, v).expect("finite direction"))
    };
    Ok((end(1.0), end(-1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::random_state;
    use crate::testing::{random_element, ALL_TEST_ALGEBRAS};

    fn state(alg: Algebra, seed: u64) -> StateElement {
        random_state(alg, seed, None).unwrap()
    }

    #[test]
    fn quadratic_representation_examples() {
        for (i, alg) in ALL_TEST_ALGEBRAS.iter().enumerate() {
            let x = random_element(*alg, i as u64);
            let u = quadratic_representation(&Element::unit(*alg), &x).unwrap();
            assert!(u.distance(&x) < 1e-12, "{alg}");
            let p = spectral::random_frame(*alg, 3 + i as u64).remove(0);
            let up = quadratic_representation(&p, &Element::unit(*alg)).unwrap();
            assert!(up.distance(&p) < 1e-10, "{alg}");
        }
        // associative expansion on Herm(C,3)
        let alg = Algebra::Herm(Ring::C, 3);
        let a = random_element(alg, 1);
        let x = random_element(alg, 2);
        let ca = crate::linalg::to_complex(&a).unwrap();
        let cx = crate::linalg::to_complex(&x).unwrap();
        let axa = crate::linalg::from_complex(alg, &ca.matmul(&cx).matmul(&ca)).unwrap();
        assert!(quadratic_representation(&a, &x).unwrap().distance(&axa) < 1e-10);
        assert!(quadratic_representation(&a, &Element::unit(Algebra::Spin(3))).is_err());
    }

    #[test]
    fn primitive_examples() {
        let alg = Algebra::Herm(Ring::C, 2);
        let x = state(alg, 1);
        assert_eq!(ChannelMap::identity(alg).apply(x.element()).unwrap(), *x.element());
        let s0 = state(alg, 2);
        let rep = ChannelMap::replacer(s0.clone());
        assert!(rep.apply(x.element()).unwrap().distance(s0.element()) < 1e-15);
        let t = ChannelMap::transpose(alg).unwrap().apply(x.element()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want = x.element().entry(i, j).unwrap().conj();
                assert!(t.entry(i, j).unwrap().max_abs_diff(&want) < 1e-15);
            }
        }
        let a = spectral::eigenvalues(&t).unwrap();
        let b = spectral::eigenvalues(x.element()).unwrap();
        assert!((a.values()[0] - b.values()[0]).abs() < 1e-12);
        assert!(ChannelMap::transpose(Algebra::Albert).is_err());
        assert!(ChannelMap::transpose(Algebra::Spin(3)).is_err());
        assert!(ChannelMap::transpose(Algebra::Herm(Ring::H, 2)).is_err());
        assert!(ChannelMap::identity(alg).apply(&Element::unit(Algebra::Spin(3))).is_err());
    }

    #[test]
    fn contraction_examples() {
        let alg = Algebra::Spin(3);
        let center = StateElement::new(Element::unit(alg).scale(0.5)).unwrap();
        let x = state(alg, 5);
        let id = contraction(center.clone(), 1.0).unwrap().apply(x.element()).unwrap();
        assert!(id.distance(x.element()) < 1e-15);
        let rep = contraction(center.clone(), 0.0).unwrap().apply(x.element()).unwrap();
        assert!(rep.distance(center.element()) < 1e-15);
        let half = contraction(center.clone(), 0.5).unwrap().apply(x.element()).unwrap();
        let d0 = x.element().distance(center.element());
        assert!((half.distance(center.element()) - 0.5 * d0).abs() < 1e-15);
        assert!(contraction(center, 1.5).is_err());
    }

    #[test]
    fn random_channels_are_linear_positive_and_trace_preserving() {
        for (i, alg) in ALL_TEST_ALGEBRAS.iter().enumerate() {
            for seed in 0..10u64 {
                let ch = random_ptp_channel(*alg, 1000 * i as u64 + seed, 3).unwrap();
                let x = random_element(*alg, seed);
                let y = random_element(*alg, seed + 100);
                let lhs = ch.apply(&(&x.scale(0.3) + &y.scale(-1.7))).unwrap();
                let mut rhs = ch.apply(&x).unwrap().scale(0.3);
                rhs.axpy(-1.7, &ch.apply(&y).unwrap());
                assert!(lhs.distance(&rhs) < 1e-10 * (1.0 + lhs.norm()), "{alg}");
                let sq = x.square();
                let out = ch.apply(&sq).unwrap();
                assert!((out.trace() - sq.trace()).abs() < 1e-10 * (1.0 + sq.trace()), "{alg}");
                let min = spectral::min_eigenvalue(&out).unwrap();
                assert!(min >= -1e-9 * (1.0 + sq.norm()), "{alg}: {min}");
            }
        }
    }

    #[test]
    fn channel_generation_is_deterministic() {
        let a = random_ptp_channel(Algebra::Herm(Ring::C, 3), 42, 3).unwrap();
        let b = random_ptp_channel(Algebra::Herm(Ring::C, 3), 42, 3).unwrap();
        assert_eq!(a, b);
        assert!(random_ptp_channel(Algebra::Spin(3), 1, 0).is_err());
        let any_transpose = (0..40)
            .any(|s| random_ptp_channel(Algebra::Herm(Ring::C, 3), s, 2).unwrap().contains_transpose());
        assert!(any_transpose);
        let rep = random_primitive(
            Algebra::Spin(3),
            ChannelKind::Replacer,
            ChannelFamily::All,
            &mut random::rng(1),
        )
        .unwrap();
        let a = rep.apply(state(Algebra::Spin(3), 1).element()).unwrap();
        let b = rep.apply(state(Algebra::Spin(3), 2).element()).unwrap();
        assert!(a.distance(&b) < 1e-15);
    }

    #[test]
    fn unital_family_fixes_the_unit() {
        for (i, alg) in ALL_TEST_ALGEBRAS.iter().enumerate() {
            for seed in 0..5u64 {
                let ch = random_ptp_channel_with(*alg, 50 * i as u64 + seed, 3, ChannelFamily::Unital)
                    .unwrap();
                let u = Element::unit(*alg);
                assert!(ch.apply(&u).unwrap().distance(&u) < 1e-9, "{alg}");
            }
        }
    }

    #[test]
    fn dpi_examples() {
        let alg = Algebra::Herm(Ring::C, 3);
        let rho = state(alg, 1);
        let sigma = state(alg, 2);
        let d = info::divergence(rho.element(), sigma.element()).unwrap().finite().unwrap();
        let id = dpi_trial(&ChannelMap::identity(alg), rho.element(), sigma.element()).unwrap();
        assert_eq!(id, DpiOutcome::Slack(0.0));
        let rep = ChannelMap::replacer(state(alg, 3));
        match dpi_trial(&rep, rho.element(), sigma.element()).unwrap() {
            DpiOutcome::Slack(s) => assert!((s - d).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        for seed in 0..20 {
            let ch = random_ptp_channel(alg, seed, 3).unwrap();
            let s = dpi_trial(&ch, rho.element(), sigma.element()).unwrap();
            assert!(s.slack().unwrap() >= -1e-8);
        }
        let pure = Element::diagonal_unit(Algebra::Spin(3), 0);
        let other = Element::diagonal_unit(Algebra::Spin(3), 1);
        let id = ChannelMap::identity(Algebra::Spin(3));
        assert_eq!(dpi_trial(&id, &pure, &other).unwrap(), DpiOutcome::NonBinding);
        let center = StateElement::new(Element::unit(Algebra::Spin(3)).scale(0.5)).unwrap();
        let rep = ChannelMap::replacer(center);
        assert_eq!(dpi_trial(&rep, &pure, &other).unwrap(), DpiOutcome::InfiniteSlack);
    }

    #[test]
    fn sufficiency_pair_recovers_segments() {
        let alg = Algebra::Herm(Ring::C, 3);
        let f1 = spectral::random_frame(alg, 1);
        let f2 = spectral::random_frame(alg, 2);
        let st = |e: &Element| StateElement::new(e.clone()).unwrap();
        let (s1, r1, s2, r2) = (st(&f1[0]), st(&f1[1]), st(&f2[0]), st(&f2[1]));
        let (phi, psi) = sufficiency_pair((&s1, &r1), (&s2, &r2)).unwrap();
        let seg = |s: f64| {
            let mut x = s1.element().scale(s);
            x.axpy(1.0 - s, r1.element());
            x
        };
        for s in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let back = psi.apply(&phi.apply(&seg(s)).unwrap()).unwrap();
            assert!(back.distance(&seg(s)) < 1e-10);
        }
        let mid = phi.apply(&seg(0.5)).unwrap();
        let mut m2 = s2.element().scale(0.5);
        m2.axpy(0.5, r2.element());
        assert!(mid.distance(&m2) < 1e-10);
        let (a, b) = (seg(0.3), seg(0.8));
        let before = info::divergence(&a, &b).unwrap().finite().unwrap();
        let after = info::divergence(&phi.apply(&a).unwrap(), &phi.apply(&b).unwrap())
            .unwrap()
            .finite()
            .unwrap();
        assert!((before - after).abs() < 1e-9);
        // identical source and target: Φ fixes the segment
        let (phi, _) = sufficiency_pair((&s1, &r1), (&s1, &r1)).unwrap();
        assert!(phi.apply(&seg(0.3)).unwrap().distance(&seg(0.3)) < 1e-10);
        assert!(matches!(
            sufficiency_pair((&s1, &s1), (&s2, &r2)),
            Err(Error::NonOrthogonal(_))
        ));
    }

    #[test]
    fn adjoint_satisfies_duality() {
        for (i, alg) in ALL_TEST_ALGEBRAS.iter().enumerate() {
            let ch = random_ptp_channel(*alg, 77 + i as u64, 2).unwrap();
            let g = random_element(*alg, 1);
            let x = random_element(*alg, 2);
            let lhs = ch.adjoint_apply(&g).unwrap().dot(&x);
            let rhs = g.dot(&ch.apply(&x).unwrap());
            assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()), "{alg}");
        }
    }

    #[test]
    fn spin_diameter_recovers_commuting_pairs_under_rotations() {
        let alg = Algebra::Spin(3);
        let (s1, r1) = spin_diameter(&state(alg, 1), &state(alg, 2)).unwrap();
        assert!(s1.element().square().distance(s1.element()) < 1e-12);
        assert!(s1.element().dot(r1.element()).abs() < 1e-12);
        let on = |t: f64| {
            let mut x = s1.element().scale(t);
            x.axpy(1.0 - t, r1.element());
            StateElement::new(x).unwrap()
        };
        let (rho, sigma) = (on(0.2), on(0.7));
        let rot = random_primitive(alg, ChannelKind::Automorphism, ChannelFamily::All, &mut random::rng(3))
            .unwrap();
        let (fr, fs) = (rot.apply_state(&rho).unwrap(), rot.apply_state(&sigma).unwrap());
        let (s2, r2) = spin_diameter(&fr, &fs).unwrap();
        let (_, psi) = sufficiency_pair((&s1, &r1), (&s2, &r2)).unwrap();
        assert!(psi.apply(fr.element()).unwrap().distance(rho.element()) < 1e-12);
        assert!(psi.apply(fs.element()).unwrap().distance(sigma.element()) < 1e-12);
        assert!(spin_diameter(&rho, &rho).is_err());
    }
}
