//! Regret, Bregman divergences and minimax games over finite action sets.
//!
//! A [`DecisionProblem`] pairs a [`StateSpace`] with a finite list of affine
//! actions. The value function is `F(σ) = max_a ⟨a, σ⟩` and the regret of an
//! action is `D_F(σ, a) = F(σ) − ⟨a, σ⟩`. The scalar type is generic so the
//! interval fixture runs in exact rational arithmetic.

mod capacity;
mod minimax;

pub use capacity::{capacity, capacity_with, CapacityOptions, CapacityResult};
pub use minimax::{minimax_regret, minimax_regret_with, MinimaxOptions, MinimaxSolution};

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::info;
use crate::jordan::{Algebra, Element};

/// Field used for payoffs: `f64` or exact rationals.
pub trait Scalar:
    Clone + PartialOrd + Num + Neg<Output = Self> + ToPrimitive + Debug + Send + Sync
{
}

impl<T> Scalar for T where
    T: Clone + PartialOrd + Num + Neg<Output = T> + ToPrimitive + Debug + Send + Sync
{
}

fn abs<T: Scalar>(x: T) -> T {
    if x < T::zero() {
        -x
    } else {
        x
    }
}

fn to_f64<T: Scalar>(x: &T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// States, actions and the pairing `⟨a, σ⟩`.
pub trait StateSpace: Sync {
    type Scalar: Scalar;
    type State: Clone + Send + Sync;
    type Action: Clone + Send + Sync;

    fn payoff(&self, action: &Self::Action, state: &Self::State) -> Self::Scalar;
    /// `Σ tᵢ σᵢ`.
    fn mixture(&self, weights: &[Self::Scalar], states: &[Self::State]) -> Self::State;
    /// Payoffs within this distance of the maximum count as optimal.
    fn tie_tolerance(&self) -> Self::Scalar;
}

/// `⟨a, σ⟩ = tr[g∘σ] + c`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineAction {
    pub g: Element,
    pub c: f64,
}

impl AffineAction {
    pub fn new(g: Element, c: f64) -> Self {
        Self { g, c }
    }

    pub fn payoff(&self, state: &Element) -> f64 {
        self.g.dot(state) + self.c
    }
}

/// States of a Jordan algebra with affine actions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JordanSpace {
    pub algebra: Algebra,
}

impl JordanSpace {
    pub const TIE_TOL: f64 = 1e-12;
}

impl StateSpace for JordanSpace {
    type Scalar = f64;
    type State = Element;
    type Action = AffineAction;

    fn payoff(&self, action: &AffineAction, state: &Element) -> f64 {
        action.payoff(state)
    }

    fn mixture(&self, weights: &[f64], states: &[Element]) -> Element {
        let mut out = Element::zero(self.algebra);
        for (w, s) in weights.iter().zip(states) {
            out.axpy(*w, s);
        }
        out
    }

    fn tie_tolerance(&self) -> f64 {
        Self::TIE_TOL
    }
}

/// `a(σ) = intercept + slope·σ` on the interval `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalAction {
    pub intercept: BigRational,
    pub slope: BigRational,
}

impl IntervalAction {
    pub fn new(intercept: i64, slope: i64) -> Self {
        Self {
            intercept: BigRational::from_integer(BigInt::from(intercept)),
            slope: BigRational::from_integer(BigInt::from(slope)),
        }
    }
}

/// The interval `[0, 1]` as a state space, in exact arithmetic.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct IntervalSpace;

impl StateSpace for IntervalSpace {
    type Scalar = BigRational;
    type State = BigRational;
    type Action = IntervalAction;

    fn payoff(&self, action: &IntervalAction, state: &BigRational) -> BigRational {
        &action.intercept + &action.slope * state
    }

    fn mixture(&self, weights: &[BigRational], states: &[BigRational]) -> BigRational {
        weights
            .iter()
            .zip(states)
            .fold(BigRational::from_integer(0.into()), |acc, (w, s)| acc + w * s)
    }

    fn tie_tolerance(&self) -> BigRational {
        BigRational::from_integer(0.into())
    }
}

/// A state space together with a finite, nonempty action list.
#[derive(Clone, Debug)]
pub struct DecisionProblem<S: StateSpace> {
    pub space: S,
    pub actions: Vec<S::Action>,
}

/// The three terms of `Σ tᵢ D(ρᵢ,σ) = Σ tᵢ D(ρᵢ,ρ̄) + D(ρ̄,σ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BregmanIdentity<T> {
    pub lhs: T,
    pub middle: T,
    pub last: T,
}

impl<T: Scalar> BregmanIdentity<T> {
    pub fn residual(&self) -> T {
        abs(self.lhs.clone() - self.middle.clone() - self.last.clone())
    }
}

fn check_prior<T: Scalar>(t: &[T], len: usize, tol: f64) -> Result<()> {
    if t.len() != len || t.is_empty() {
        return Err(Error::InvalidPrior(format!(
            "{} weights for {len} states",
            t.len()
        )));
    }
    if t.iter().any(|w| *w < T::zero()) {
        return Err(Error::InvalidPrior("negative weight".into()));
    }
    let total = t.iter().fold(T::zero(), |a, w| a + w.clone());
    if (to_f64(&total) - 1.0).abs() > tol {
        return Err(Error::InvalidPrior(format!("weights sum to {total:?}")));
    }
    Ok(())
}

impl<S: StateSpace> DecisionProblem<S> {
    pub fn new(space: S, actions: Vec<S::Action>) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::EmptyActions);
        }
        Ok(Self { space, actions })
    }

    /// `F(σ)` and the lowest-index maximizing action.
    pub fn optimal_value(&self, state: &S::State) -> (S::Scalar, usize) {
        let payoffs: Vec<S::Scalar> = self
            .actions
            .iter()
            .map(|a| self.space.payoff(a, state))
            .collect();
        let top = payoffs
            .iter()
            .skip(1)
            .fold(payoffs[0].clone(), |m, v| if *v > m { v.clone() } else { m });
        let floor = top.clone() - self.space.tie_tolerance();
        let idx = payoffs.iter().position(|v| *v >= floor).unwrap();
        (top, idx)
    }

    /// Indices of all actions attaining `F(σ)` within the tie tolerance.
    pub fn optimal_set(&self, state: &S::State) -> Vec<usize> {
        let (f, _) = self.optimal_value(state);
        let tol = self.space.tie_tolerance();
        self.actions
            .iter()
            .enumerate()
            .filter(|(_, a)| self.space.payoff(a, state) >= f.clone() - tol.clone())
            .map(|(j, _)| j)
            .collect()
    }

    /// `D_F(σ, a_j)`.
    pub fn regret_action(&self, state: &S::State, action: usize) -> S::Scalar {
        let (f, _) = self.optimal_value(state);
        f - self.space.payoff(&self.actions[action], state)
    }

    /// `D_F(σ, Σ wⱼ aⱼ) = F(σ) − Σ wⱼ ⟨aⱼ, σ⟩`.
    pub fn regret_mixed(&self, state: &S::State, weights: &[S::Scalar]) -> S::Scalar {
        let (f, _) = self.optimal_value(state);
        let v = self
            .actions
            .iter()
            .zip(weights)
            .fold(S::Scalar::zero(), |acc, (a, w)| {
                acc + w.clone() * self.space.payoff(a, state)
            });
        f - v
    }

    /// `inf D_F(ρ, a)` over the actions optimal for `σ`.
    pub fn regret_state(&self, rho: &S::State, sigma: &S::State) -> S::Scalar {
        self.optimal_set(sigma)
            .into_iter()
            .map(|j| self.regret_action(rho, j))
            .reduce(|a, b| if b < a { b } else { a })
            .expect("optimal set is nonempty")
    }

    /// Terms of the Bregman identity with `D` the state regret.
    pub fn bregman_identity(
        &self,
        t: &[S::Scalar],
        rhos: &[S::State],
        sigma: &S::State,
    ) -> Result<BregmanIdentity<S::Scalar>> {
        check_prior(t, rhos.len(), 1e-12)?;
        let bar = self.space.mixture(t, rhos);
        let weighted = |target: &S::State| {
            t.iter().zip(rhos).fold(S::Scalar::zero(), |acc, (w, r)| {
                acc + w.clone() * self.regret_state(r, target)
            })
        };
        Ok(BregmanIdentity {
            lhs: weighted(sigma),
            middle: weighted(&bar),
            last: self.regret_state(&bar, sigma),
        })
    }

    /// `|Σ tᵢ D_F(ρᵢ, ā) − (Σ tᵢ F(ρᵢ) − F(ρ̄))|` with `ā` optimal for `ρ̄`.
    pub fn compensation_residual(&self, t: &[S::Scalar], rhos: &[S::State]) -> Result<S::Scalar> {
        check_prior(t, rhos.len(), 1e-12)?;
        let bar = self.space.mixture(t, rhos);
        let (f_bar, a_bar) = self.optimal_value(&bar);
        let mut lhs = S::Scalar::zero();
        let mut mean_f = S::Scalar::zero();
        for (w, r) in t.iter().zip(rhos) {
            lhs = lhs + w.clone() * self.regret_action(r, a_bar);
            mean_f = mean_f + w.clone() * self.optimal_value(r).0;
        }
        Ok(abs(lhs - (mean_f - f_bar)))
    }

    /// Exact regret matrix `D_F(σᵢ, aⱼ)`.
    pub fn regret_matrix(&self, states: &[S::State]) -> Vec<Vec<S::Scalar>> {
        states
            .iter()
            .map(|s| (0..self.actions.len()).map(|j| self.regret_action(s, j)).collect())
            .collect()
    }

    /// Floating-point regret game over `states`, rows filled under `exec`.
    pub fn game(&self, states: &[S::State], exec: Execution) -> Result<RegretGame> {
        let rows = map_indexed(exec, states.len(), |i| {
            (0..self.actions.len())
                .map(|j| to_f64(&self.regret_action(&states[i], j)))
                .collect()
        });
        RegretGame::new(rows)
    }

    /// `inf_a Σ tᵢ D_F(σᵢ, a) + D_F(σ̄, a_opt)` for a mixed `a_opt`.
    pub fn minimax_lower_bound(
        &self,
        states: &[S::State],
        t: &[S::Scalar],
        a_opt: &[S::Scalar],
    ) -> Result<S::Scalar> {
        check_prior(t, states.len(), 1e-9)?;
        check_prior(a_opt, self.actions.len(), 1e-9)?;
        let inf = (0..self.actions.len())
            .map(|j| {
                t.iter().zip(states).fold(S::Scalar::zero(), |acc, (w, s)| {
                    acc + w.clone() * self.regret_action(s, j)
                })
            })
            .reduce(|a, b| if b < a { b } else { a })
            .unwrap();
        let bar = self.space.mixture(t, states);
        Ok(inf + self.regret_mixed(&bar, a_opt))
    }
}

/// Payoff matrix `D[i][j] = D_F(σᵢ, aⱼ)`; the state player maximizes, the
/// action player minimizes.
#[derive(Clone, Debug, PartialEq)]
pub struct RegretGame {
    payoff: Vec<Vec<f64>>,
}

impl RegretGame {
    pub fn new(payoff: Vec<Vec<f64>>) -> Result<Self> {
        let cols = payoff.first().map_or(0, Vec::len);
        if payoff.is_empty() || cols == 0 {
            return Err(Error::InvalidArgument("empty payoff matrix".into()));
        }
        if payoff.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged payoff matrix".into()));
        }
        if payoff.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite payoff".into()));
        }
        Ok(Self { payoff })
    }

    pub fn rows(&self) -> usize {
        self.payoff.len()
    }

    pub fn cols(&self) -> usize {
        self.payoff[0].len()
    }

    pub fn payoff(&self) -> &[Vec<f64>] {
        &self.payoff
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.payoff[i][j]
    }

    /// `max_i Σⱼ Dᵢⱼ wⱼ`: worst-case regret of a mixed action.
    pub fn worst_case(&self, w: &[f64]) -> f64 {
        self.payoff
            .iter()
            .map(|r| r.iter().zip(w).map(|(a, b)| a * b).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `min_j Σᵢ tᵢ Dᵢⱼ`: Bayes regret guaranteed by a prior.
    pub fn guaranteed(&self, t: &[f64]) -> f64 {
        (0..self.cols())
            .map(|j| t.iter().zip(&self.payoff).map(|(w, r)| w * r[j]).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Regret game for `F = −H` where action `j` predicts the state `ν_j`:
/// `D[i][j] = D(σᵢ ‖ ν_j)`. Predictions with an infinite entry are dropped.
pub fn divergence_game(
    states: &[Element],
    predictions: &[Element],
    exec: Execution,
) -> Result<(RegretGame, Vec<usize>)> {
    let cols = map_indexed(exec, predictions.len(), |j| {
        states
            .iter()
            .map(|s| info::divergence(s, &predictions[j]).map(|d| d.finite()))
            .collect::<Result<Option<Vec<f64>>>>()
    });
    let mut kept = Vec::new();
    let mut columns = Vec::new();
    for (j, c) in cols.into_iter().enumerate() {
        if let Some(col) = c? {
            kept.push(j);
            columns.push(col);
        }
    }
    if columns.is_empty() {
        return Err(Error::InvalidArgument(
            "every prediction has infinite regret".into(),
        ));
    }
    let payoff = (0..states.len())
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    Ok((RegretGame::new(payoff)?, kept))
}

/// `F(ρ) − F(σ) − ⟨ρ − σ, ∇F(σ)⟩` with the trace inner product.
pub fn bregman_divergence(
    value: impl Fn(&Element) -> Result<f64>,
    gradient: impl Fn(&Element) -> Result<Element>,
    rho: &Element,
    sigma: &Element,
) -> Result<f64> {
    let diff = rho - sigma;
    Ok(value(rho)? - value(sigma)? - diff.inner(&gradient(sigma)?)?)
}

/// Bregman identity terms for the information divergence.
pub fn divergence_bregman_identity(
    t: &[f64],
    rhos: &[Element],
    sigma: &Element,
) -> Result<BregmanIdentity<f64>> {
    check_prior(t, rhos.len(), 1e-12)?;
    let mut bar = Element::zero(sigma.algebra());
    for (w, r) in t.iter().zip(rhos) {
        bar.axpy(*w, r);
    }
    let d = |p: &Element, q: &Element| -> Result<f64> {
        info::divergence(p, q)?
            .finite()
            .ok_or_else(|| Error::InvalidArgument("infinite divergence in identity".into()))
    };
    let mut lhs = 0.0;
    let mut middle = 0.0;
    for (w, r) in t.iter().zip(rhos) {
        lhs += w * d(r, sigma)?;
        middle += w * d(r, &bar)?;
    }
    Ok(BregmanIdentity {
        lhs,
        middle,
        last: d(&bar, sigma)?,
    })
}

/// The interval example: actions `1 − 2σ` and `2σ − 1`, states `0` and `1`,
/// prior `(1/3, 2/3)`, probe state `1/2`.
#[derive(Clone, Debug)]
pub struct IntervalFixture {
    pub problem: DecisionProblem<IntervalSpace>,
    pub states: Vec<BigRational>,
    pub prior: Vec<BigRational>,
    pub probe: BigRational,
}

pub fn interval_fixture() -> IntervalFixture {
    let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
    IntervalFixture {
        problem: DecisionProblem {
            space: IntervalSpace,
            actions: vec![IntervalAction::new(1, -2), IntervalAction::new(-1, 2)],
        },
        states: vec![r(0, 1), r(1, 1)],
        prior: vec![r(1, 3), r(2, 3)],
        probe: r(1, 2),
    }
}
