//! Seeded property sweeps over random states and channels.
//!
//! Trial `i` of a sweep with seed `s` uses seed `s + i` and nothing else, so a
//! failing trial can be replayed alone and the report is identical under
//! sequential and parallel execution.

use std::fmt;

use crate::channels::{self, dpi_trial, random_ptp_channel};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::info::{self, NegXLnX};
use crate::jordan::{Algebra, Element, StateElement};
use crate::random::{self, random_simplex};
use crate::regret::divergence_bregman_identity;
use crate::spectral::{combine_frame, random_frame_with, random_state};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Dpi,
    Concavity,
    FirstDerivative,
    SecondDerivative,
    Locality,
    BregmanIdentity,
    StrongMonotonicity,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Dpi => "dpi",
            Check::Concavity => "concavity",
            Check::FirstDerivative => "first-derivative",
            Check::SecondDerivative => "second-derivative",
            Check::Locality => "locality",
            Check::BregmanIdentity => "bregman-identity",
            Check::StrongMonotonicity => "strong-monotonicity",
        }
    }

    /// Largest violation a passing trial may show.
    pub fn tolerance(self) -> f64 {
        match self {
            Check::Dpi => 1e-8,
            Check::Concavity => 1e-9,
            Check::FirstDerivative => 1e-7,
            Check::SecondDerivative => 1e-5,
            Check::Locality => 1e-8,
            Check::BregmanIdentity => 1e-9,
            Check::StrongMonotonicity => 1e-8,
        }
    }

    /// What the per-trial violation measures.
    pub fn measure(self) -> &'static str {
        match self {
            Check::Dpi => "D(Φρ‖Φσ) − D(ρ‖σ)",
            Check::Concavity => "tH(A) + (1−t)H(B) − H(tA + (1−t)B)",
            Check::FirstDerivative | Check::SecondDerivative => "relative error",
            Check::Locality => "max_t |D(ρ‖(1−t)ρ + tσ) + ln(1−t)|",
            Check::BregmanIdentity => "|Σtᵢ D(ρᵢ‖σ) − Σtᵢ D(ρᵢ‖ρ̄) − D(ρ̄‖σ)|",
            Check::StrongMonotonicity => "max recovery error",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub algebra: Algebra,
    pub trials: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl SweepConfig {
    pub fn new(algebra: Algebra, trials: usize, seed: u64) -> Self {
        Self {
            algebra,
            trials,
            seed,
            exec: Execution::default(),
        }
    }

    pub fn with_exec(self, exec: Execution) -> Self {
        Self { exec, ..self }
    }

    pub fn trial_seed(&self, index: usize) -> u64 {
        self.seed.wrapping_add(index as u64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trial {
    pub index: usize,
    pub seed: u64,
    /// Violation measure; the trial passes when it is at most the tolerance.
    /// `None` when the trial is vacuous.
    pub violation: Option<f64>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub check: Check,
    pub algebra: Algebra,
    pub tolerance: f64,
    pub trials: Vec<Trial>,
}

impl SweepReport {
    pub fn failures(&self) -> usize {
        self.trials
            .iter()
            .filter(|t| t.violation.is_some_and(|v| !(v <= self.tolerance)))
            .count()
    }

    pub fn skipped(&self) -> usize {
        self.trials.iter().filter(|t| t.violation.is_none()).count()
    }

    pub fn evaluated(&self) -> usize {
        self.trials.len() - self.skipped()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    /// The trial with the largest violation, earliest on ties.
    pub fn worst(&self) -> Option<&Trial> {
        let mut best: Option<&Trial> = None;
        for t in &self.trials {
            let Some(v) = t.violation else { continue };
            let worse = match best.and_then(|b| b.violation) {
                None => true,
                Some(b) => v > b || (v.is_nan() && !b.is_nan()),
            };
            if worse {
                best = Some(t);
            }
        }
        best
    }
}

fn sweep(
    check: Check,
    cfg: &SweepConfig,
    trial: impl Fn(u64) -> Result<(Option<f64>, String)> + Sync + Send,
) -> Result<SweepReport> {
    let algebra = cfg.algebra.validate()?;
    let trials = map_indexed(cfg.exec, cfg.trials, |i| {
        let seed = cfg.trial_seed(i);
        trial(seed).map(|(violation, detail)| Trial {
            index: i,
            seed,
            violation,
            detail,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        check,
        algebra,
        tolerance: check.tolerance(),
        trials,
    })
}

// Independent sub-seeds for the pieces of one trial.
const STATE_A: u64 = 0xa5a5_0001;
const STATE_B: u64 = 0xa5a5_0002;
const EXTRA: u64 = 0xa5a5_0003;

/// Default channel depth used by [`dpi_sweep`].
pub const DPI_DEPTH: usize = 3;

/// Data processing under random positive trace-preserving channels. Every
/// tenth trial uses a pure `σ` to exercise the infinite cases.
pub fn dpi_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    dpi_sweep_with_depth(cfg, DPI_DEPTH)
}

pub fn dpi_sweep_with_depth(cfg: &SweepConfig, depth: usize) -> Result<SweepReport> {
    let alg = cfg.algebra;
    sweep(Check::Dpi, cfg, |seed| {
        let phi = random_ptp_channel(alg, seed, depth)?;
        let rho = random_state(alg, seed ^ STATE_A, None)?;
        let sigma = if seed % 10 == 0 {
            let mut r = random::rng(seed ^ STATE_B);
            StateElement::new(random_frame_with(alg, &mut r).swap_remove(0))?
        } else {
            random_state(alg, seed ^ STATE_B, None)?
        };
        let outcome = dpi_trial(&phi, rho.element(), sigma.element())?;
        let transpose = if phi.contains_transpose() { " transpose" } else { "" };
        let detail = format!("channel={}{transpose} outcome={outcome:?}", phi.kind());
        Ok((outcome.slack().map(|s| -s), detail))
    })
}

/// Concavity of the entropy on random positive pairs of varying trace.
pub fn concavity_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    let alg = cfg.algebra;
    sweep(Check::Concavity, cfg, |seed| {
        let mut r = random::rng(seed ^ EXTRA);
        let ca = random::uniform(&mut r, 0.2, 2.0);
        let cb = random::uniform(&mut r, 0.2, 2.0);
        let t = random::uniform(&mut r, 0.0, 1.0);
        let a = random_state(alg, seed ^ STATE_A, None)?.element().scale(ca);
        let b = random_state(alg, seed ^ STATE_B, None)?.element().scale(cb);
        let mut mix = a.scale(t);
        mix.axpy(1.0 - t, &b);
        let gap = t * info::entropy(&a)? + (1.0 - t) * info::entropy(&b)? - info::entropy(&mix)?;
        Ok((Some(gap), format!("t={t} trA={ca} trB={cb}")))
    })
}

/// Positive `A` with eigenvalues in `[1/2, 2]` and a unit-norm direction `B`
/// drawn from a cone around the gradient `−(ln A + 1)`.
///
/// Both keep `|tr[f′(A)∘B]|` away from zero, where a relative comparison would
/// measure only rounding noise: `ln λ + 1 ≥ 0.3` on the eigenvalue range, and
/// `B = (R + 2ĝ)/‖R + 2ĝ‖` with `R` random of unit norm gives `⟨B, ĝ⟩ ≥ 1/3`.
pub fn derivative_pair(alg: Algebra, seed: u64) -> Result<(Element, Element)> {
    let alg = alg.validate()?;
    let mut r = random::rng(seed ^ STATE_A);
    let frame = random_frame_with(alg, &mut r);
    let eig: Vec<f64> = (0..frame.len())
        .map(|_| random::uniform(&mut r, 0.5, 2.0))
        .collect();
    let a = combine_frame(&frame, &eig);
    let grad: Vec<f64> = eig.iter().map(|l| -(l.ln() + 1.0)).collect();
    let g = combine_frame(&frame, &grad);
    let g = g.scale(1.0 / g.norm());
    let rand = random::random_element(alg, seed ^ STATE_B);
    let mut b = rand.scale(1.0 / rand.norm());
    b.axpy(2.0, &g);
    let b = b.scale(1.0 / b.norm());
    Ok((a, b))
}

/// Step of the central difference for the first derivative.
pub const FIRST_DERIVATIVE_STEP: f64 = 1e-5;
/// Coarse step of the Richardson-extrapolated second difference.
pub const SECOND_DERIVATIVE_STEP: f64 = 4e-3;

fn along(a: &Element, b: &Element, h: f64) -> Result<f64> {
    let mut x = a.clone();
    x.axpy(h, b);
    info::trace_of(&x, &NegXLnX)
}

pub fn first_derivative_difference(a: &Element, b: &Element, h: f64) -> Result<f64> {
    Ok((along(a, b, h)? - along(a, b, -h)?) / (2.0 * h))
}

/// `(4·Δ²(h/2) − Δ²(h))/3` where `Δ²(h)` is the central second difference.
pub fn second_derivative_difference(a: &Element, b: &Element, h: f64) -> Result<f64> {
    let t0 = along(a, b, 0.0)?;
    let d2 = |h: f64| -> Result<f64> { Ok((along(a, b, h)? - 2.0 * t0 + along(a, b, -h)?) / (h * h)) };
    Ok((4.0 * d2(0.5 * h)? - d2(h)?) / 3.0)
}

fn relative(approx: f64, exact: f64) -> f64 {
    (approx - exact).abs() / exact.abs()
}

/// `d/dt tr[f(A + tB)]` against the analytic `tr[f′(A)∘B]` for `f = −x ln x`.
pub fn first_derivative_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    let alg = cfg.algebra;
    sweep(Check::FirstDerivative, cfg, |seed| {
        let (a, b) = derivative_pair(alg, seed)?;
        let exact = info::trace_derivative(&a, &b, &NegXLnX)?;
        let fd = first_derivative_difference(&a, &b, FIRST_DERIVATIVE_STEP)?;
        Ok((Some(relative(fd, exact)), format!("analytic={exact} difference={fd}")))
    })
}

/// `d²/dt² tr[f(A + tB)]` against the analytic Peirce form for `f = −x ln x`.
pub fn second_derivative_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    let alg = cfg.algebra;
    sweep(Check::SecondDerivative, cfg, |seed| {
        let (a, b) = derivative_pair(alg, seed)?;
        let exact = info::trace_second_derivative(&a, &b, &NegXLnX)?;
        let fd = second_derivative_difference(&a, &b, SECOND_DERIVATIVE_STEP)?;
        Ok((Some(relative(fd, exact)), format!("analytic={exact} difference={fd}")))
    })
}

pub const LOCALITY_MIXTURES: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Random states `ρ ⊥ σ` on complementary parts of one random frame.
pub fn orthogonal_pair(alg: Algebra, seed: u64) -> Result<(StateElement, StateElement)> {
    let mut r = random::rng(seed ^ EXTRA);
    let frame = random_frame_with(alg, &mut r);
    let n = frame.len();
    let k = 1 + (random::uniform(&mut r, 0.0, (n - 1) as f64) as usize).min(n - 2);
    let wr = random_simplex(k, &mut r);
    let ws = random_simplex(n - k, &mut r);
    let rho = combine_frame(&frame[..k], &wr);
    let sigma = combine_frame(&frame[k..], &ws);
    Ok((StateElement::new(rho)?, StateElement::new(sigma)?))
}

/// `D(ρ‖(1−t)ρ + tσ) = −ln(1−t)` for orthogonal `ρ, σ`.
pub fn locality_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    let alg = cfg.algebra;
    sweep(Check::Locality, cfg, |seed| {
        let (rho, sigma) = orthogonal_pair(alg, seed)?;
        let mut worst: f64 = 0.0;
        let mut at = 0.0;
        for t in LOCALITY_MIXTURES {
            let mut mix = rho.element().scale(1.0 - t);
            mix.axpy(t, sigma.element());
            let d = info::divergence(rho.element(), &mix)?
                .finite()
                .ok_or_else(|| Error::InvalidArgument("infinite divergence on a mixture".into()))?;
            let err = (d - info::divergence_locality_value(t)?).abs();
            if err > worst || err.is_nan() {
                worst = err;
                at = t;
            }
        }
        Ok((Some(worst), format!("worst t={at}")))
    })
}

/// The compensation identity `Σtᵢ D(ρᵢ‖σ) = Σtᵢ D(ρᵢ‖ρ̄) + D(ρ̄‖σ)` for the
/// information divergence on random faithful states.
pub fn bregman_identity_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    let alg = cfg.algebra;
    sweep(Check::BregmanIdentity, cfg, |seed| {
        let mut r = random::rng(seed ^ EXTRA);
        let k = 2 + (random::uniform(&mut r, 0.0, 3.0) as usize).min(2);
        let t = random_simplex(k, &mut r);
        let rhos = (0..k)
            .map(|j| {
                crate::spectral::random_faithful_state(alg, seed ^ STATE_A.wrapping_add(j as u64))
                    .map(StateElement::into_element)
            })
            .collect::<Result<Vec<_>>>()?;
        let sigma = crate::spectral::random_faithful_state(alg, seed ^ STATE_B)?;
        let id = divergence_bregman_identity(&t, &rhos, sigma.element())?;
        Ok((
            Some(id.residual()),
            format!("lhs={} middle={} last={}", id.lhs, id.middle, id.last),
        ))
    })
}

/// Channel for trial `seed` of the strong monotonicity probe: a rotation, a
/// measure-and-prepare map carrying the diameter through `e` onto a random
/// diameter (both keep distances on that diameter), or a random channel.
fn monotonicity_channel(
    alg: Algebra,
    e: &Element,
    seed: u64,
    depth: usize,
) -> Result<channels::ChannelMap> {
    let mut r = random::rng(seed ^ EXTRA ^ STATE_B);
    let rotation = |r: &mut random::SeededRng| {
        channels::ChannelMap::automorphism(alg, crate::automorphism::Automorphism::random(alg, r))
    };
    match seed % 3 {
        0 => rotation(&mut r),
        1 => {
            let target = random_frame_with(alg, &mut r);
            let prepare = channels::ChannelMap::measure_prepare(
                e.clone(),
                StateElement::new(target[0].clone())?,
                StateElement::new(target[1].clone())?,
            )?;
            channels::ChannelMap::composition(vec![prepare, rotation(&mut r)?])
        }
        _ => random_ptp_channel(alg, seed, depth),
    }
}

/// On a spin factor: for random commuting pairs and channels that keep
/// `‖ρ − σ‖²` within 1e-10, the rank-2 recovery built from the diameters
/// through the pair and through its image restores both states. Trials whose
/// channel shrinks the distance are vacuous.
pub fn strong_monotonicity_sweep(cfg: &SweepConfig, depth: usize) -> Result<SweepReport> {
    let alg = cfg.algebra;
    if !matches!(alg, Algebra::Spin(_)) {
        return Err(Error::Unsupported(format!("strong monotonicity probe on {alg}")));
    }
    sweep(Check::StrongMonotonicity, cfg, |seed| {
        let (e, f) = {
            let mut r = random::rng(seed ^ EXTRA);
            let frame = random_frame_with(alg, &mut r);
            (StateElement::new(frame[0].clone())?, StateElement::new(frame[1].clone())?)
        };
        let mut r = random::rng(seed ^ STATE_A);
        let on = |s: f64| StateElement::new(combine_frame(&[e.element().clone(), f.element().clone()], &[s, 1.0 - s]));
        let (rho, sigma) = (on(random::uniform(&mut r, 0.0, 0.5))?, on(random::uniform(&mut r, 0.5, 1.0))?);
        let phi = monotonicity_channel(alg, e.element(), seed, depth)?;
        let (fr, fs) = (phi.apply_state(&rho)?, phi.apply_state(&sigma)?);
        let before = rho.element().distance(sigma.element()).powi(2);
        let after = fr.element().distance(fs.element()).powi(2);
        if (before - after).abs() > 1e-10 {
            return Ok((None, format!("channel={} shrinks by {}", phi.kind(), before - after)));
        }
        let (s1, r1) = channels::spin_diameter(&rho, &sigma)?;
        let (s2, r2) = channels::spin_diameter(&fr, &fs)?;
        let (_, psi) = channels::sufficiency_pair((&s1, &r1), (&s2, &r2))?;
        let err_r = psi.apply(fr.element())?.distance(rho.element());
        let err_s = psi.apply(fs.element())?.distance(sigma.element());
        Ok((Some(err_r.max(err_s)), format!("channel={}", phi.kind())))
    })
}
